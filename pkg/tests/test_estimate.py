import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from otfspectrum.dac import InterpolationFilter, reconstruct
from otfspectrum.estimate import (
    NMSE_FLOOR_DB,
    PeriodogramAverager,
    compare_curves,
    cosine_similarity,
    cyclo_autocorr,
    empirical_mean,
    nmse_db,
    periodogram,
)
from otfspectrum.psd import PsdCurve, otfs_psd
from otfspectrum.waveform import VarianceProfile, generate_random_stream


# ---------------------------------------------------------------------------
# periodogram
# ---------------------------------------------------------------------------


def test_periodogram_matches_brute_force_dft():
    rng = np.random.default_rng(0)
    x = rng.normal(size=12) + 1j * rng.normal(size=12)
    seg, rate = 4, 2.0
    curve = periodogram(x, segment_len=seg, sample_rate=rate)

    acc = np.zeros(seg)
    for s in range(3):
        block = x[s * seg : (s + 1) * seg]
        for m in range(seg):
            val = sum(block[n] * np.exp(-2j * np.pi * m * n / seg) for n in range(seg))
            acc[m] += abs(val) ** 2
    expected = np.fft.fftshift(acc / 3 / (seg * rate))
    assert_allclose(curve.values, expected, atol=1e-12)
    assert_allclose(curve.freqs, (np.arange(4) - 2) * (rate / seg))


def test_periodogram_pure_tone_lands_in_one_bin():
    n = np.arange(32)
    x = np.exp(2j * np.pi * 3 * n / 8)
    curve = periodogram(x, segment_len=8, sample_rate=1.0)
    hot = np.argmax(curve.values)
    assert curve.freqs[hot] == pytest.approx(3 / 8)
    assert curve.values[hot] == pytest.approx(8.0)
    others = np.delete(curve.values, hot)
    assert_allclose(others, np.zeros(7), atol=1e-12)


def test_periodogram_discards_trailing_partial_segment():
    x = np.ones(10, dtype=complex)
    curve = periodogram(x, segment_len=4, sample_rate=1.0)
    assert curve.meta["num_segments"] == 2


def test_periodogram_needs_full_segment():
    with pytest.raises(ValueError):
        periodogram(np.ones(3, dtype=complex), segment_len=4, sample_rate=1.0)


def test_periodogram_defaults_to_frame_segments():
    stream = generate_random_stream(VarianceProfile.uniform(2, 4), 5, seed=1)
    curve = periodogram(stream)
    assert curve.meta["segment_len"] == 8
    assert curve.meta["num_segments"] == 5
    dense = reconstruct(stream, InterpolationFilter.rect(1.0), 3)
    assert periodogram(dense).meta["segment_len"] == 24


def test_periodogram_raw_array_needs_rate_and_segment():
    with pytest.raises(ValueError):
        periodogram(np.ones(8, dtype=complex), segment_len=4)
    with pytest.raises(ValueError):
        periodogram(np.ones(8, dtype=complex), sample_rate=1.0)


def test_periodogram_skips_reconstruction_pre_ring():
    """Segments align to the signal's time origin, not to the raw sample array.

    A sinc reconstruction starts order*L samples before time zero; cutting
    segments from the array head would straddle frame boundaries and smear
    each frame's tones across bins.
    """
    stream = generate_random_stream(VarianceProfile.uniform(2, 4), 2, seed=5)
    dense = reconstruct(stream, InterpolationFilter.truncated_sinc(1.0, 3), 2)
    assert dense.origin_time == -3.0
    curve = periodogram(dense)  # default segment: one frame = 16 samples
    assert curve.meta["num_segments"] == 2  # pre/post ring never forms a segment
    aligned = dense.samples[6 : 6 + 32]  # skip order*L = 6, keep 2 frames
    manual = periodogram(aligned, segment_len=16, sample_rate=2.0)
    assert_array_equal(curve.values, manual.values)


def test_averager_equals_one_shot_for_any_chunking():
    rng = np.random.default_rng(3)
    x = rng.normal(size=64) + 1j * rng.normal(size=64)
    whole = periodogram(x, segment_len=8, sample_rate=4.0)
    avg = PeriodogramAverager(segment_len=8, sample_rate=4.0)
    for cut in np.array_split(x, [3, 10, 11, 40]):  # deliberately ragged
        avg.add(cut)
    chunked = avg.result()
    assert_array_equal(chunked.values, whole.values)
    assert chunked.meta["num_segments"] == 8


def test_averager_requires_a_segment():
    avg = PeriodogramAverager(4, 1.0)
    avg.add(np.ones(3, dtype=complex))
    with pytest.raises(ValueError):
        avg.result()


def test_flat_psd_estimate_converges():
    prof = VarianceProfile.uniform(2, 8)
    stream = generate_random_stream(prof, 4000, seed=11)
    est = periodogram(stream)
    ref = otfs_psd(prof, 1.0, InterpolationFilter.dirac(1.0), est.freqs)
    result = compare_curves(est, ref)
    assert result["nmse_db"] < -30
    assert result["cosine_similarity"] > 0.999


# ---------------------------------------------------------------------------
# metrics
# ---------------------------------------------------------------------------


def _curve(values, freqs=None):
    values = np.asarray(values, dtype=float)
    freqs = np.arange(values.size, dtype=float) if freqs is None else freqs
    return PsdCurve(freqs, values)


def test_nmse_identical_curves_hit_floor():
    a = _curve([1.0, 2.0, 3.0])
    assert nmse_db(a, a) == NMSE_FLOOR_DB


def test_nmse_scaling_invariance_after_peak_one():
    a = _curve([1.0, 2.0, 3.0])
    b = _curve([2.0, 4.0, 6.0])
    result = compare_curves(b, a)
    assert result["nmse_db"] == NMSE_FLOOR_DB
    assert result["cosine_similarity"] == pytest.approx(1.0, abs=1e-15)


def test_nmse_hand_value():
    a = _curve([1.0, 1.0])
    b = _curve([1.0, 0.0])
    # ||a-b||^2 / ||b||^2 = 1 -> 0 dB
    assert nmse_db(a, b) == pytest.approx(0.0, abs=1e-12)


def test_nmse_zero_reference_rejected():
    with pytest.raises(ValueError):
        nmse_db(_curve([1.0, 1.0]), _curve([0.0, 0.0]))


def test_cosine_orthogonal_curves():
    assert cosine_similarity(_curve([1.0, 0.0]), _curve([0.0, 1.0])) == 0.0


def test_compare_resamples_reference():
    ref = PsdCurve(np.array([0.0, 2.0]), np.array([0.0, 2.0]))
    est = PsdCurve(np.array([0.5, 1.0, 1.5]), np.array([0.5, 1.0, 1.5]))
    result = compare_curves(est, ref)
    assert result["nmse_db"] == NMSE_FLOOR_DB


def test_compare_disjoint_spans_rejected():
    a = PsdCurve(np.array([0.0, 1.0]), np.ones(2))
    b = PsdCurve(np.array([5.0, 6.0]), np.ones(2))
    with pytest.raises(ValueError):
        compare_curves(a, b)


def test_compare_band_restriction_changes_grid():
    a = _curve(np.ones(10))
    b = _curve(np.linspace(1, 2, 10))
    full = compare_curves(a, b)
    cut = compare_curves(a, b, band=(0.0, 3.0))
    assert full["nmse_db"] != cut["nmse_db"]


# ---------------------------------------------------------------------------
# cyclostationarity probes
# ---------------------------------------------------------------------------


def test_cyclo_autocorr_shapes_and_defaults():
    stream = generate_random_stream(VarianceProfile.uniform(2, 4), 400, seed=5)
    probes = [(0, 0), (1, 3), (2, 7)]
    result = cyclo_autocorr(stream, probes)
    assert result.shift == 8
    assert result.base.shape == (3,)
    assert result.num_blocks == 200  # 2 frames per block: max index 7 + shift 8
    assert np.all(result.diff_se >= 0)


def test_cyclo_autocorr_frame_period_invariance():
    stream = generate_random_stream(VarianceProfile.uniform(2, 4), 2000, seed=6)
    probes = [(a, b) for a in range(2) for b in range(4)]
    result = cyclo_autocorr(stream, probes)
    assert result.max_deviation_in_se() < 5.0


def test_cyclo_autocorr_unit_power_diagonal():
    stream = generate_random_stream(VarianceProfile.uniform(2, 2), 3000, seed=7)
    result = cyclo_autocorr(stream, [(0, 0)])
    # E|s[0]|^2 == mean symbol power == 1 for the unit QPSK profile
    assert result.base[0].real == pytest.approx(1.0, abs=5 * result.base_se[0] + 0.02)
    assert abs(result.base[0].imag) < 1e-12


def test_cyclo_autocorr_needs_two_blocks():
    stream = generate_random_stream(VarianceProfile.uniform(2, 2), 2, seed=8)
    with pytest.raises(ValueError):
        cyclo_autocorr(stream, [(0, 7)])  # needs 2 frames per block -> 1 block


def test_cyclo_autocorr_validates_probes():
    stream = generate_random_stream(VarianceProfile.uniform(2, 2), 10, seed=9)
    with pytest.raises(ValueError):
        cyclo_autocorr(stream, [])
    with pytest.raises(ValueError):
        cyclo_autocorr(stream, [(-1, 0)])


def test_empirical_mean_is_statistically_zero():
    stream = generate_random_stream(VarianceProfile.uniform(2, 4), 3000, seed=10)
    means, ses = empirical_mean(stream, range(8))
    assert np.all(np.abs(means) < 5 * ses)


def test_empirical_mean_position_bounds():
    stream = generate_random_stream(VarianceProfile.uniform(2, 2), 4, seed=11)
    with pytest.raises(ValueError):
        empirical_mean(stream, [4])

"""Closed-form OTFS spectra under the three DAC interpolation models.

Same frame layout, three reconstruction filters: the PSD is the discrete
line spectrum (squared Dirichlet lobes at the active subcarriers) shaped
by |G(f)|^2 of whatever the DAC does between samples.
"""
import numpy as np

from otfspectrum import InterpolationFilter, column_support_profile, otfs_psd

T = 1.0          # sample interval [s]
M, N = 4, 8      # delay bins x Doppler bins
ACTIVE = [0, 1, 2, 6, 7]

profile = column_support_profile(ACTIVE, M, N)
freqs = np.linspace(-1.5 / T, 1.5 / T, 6001)

print(f"grid {M}x{N}, active subcarriers {ACTIVE}, T = {T} s")
print(f"frequency span [{freqs[0]:+.2f}, {freqs[-1]:+.2f}] Hz, {freqs.size} points")
print()

curves = {}
for filt in (
    InterpolationFilter.dirac(T),
    InterpolationFilter.rect(T),
    InterpolationFilter.truncated_sinc(T, order=50),
):
    curves[filt.kind] = otfs_psd(profile, T, filt, freqs)

# 1. Peak locations: lines sit at k/(N*T) for active k, replicated by the
#    Dirac comb, confined to one Nyquist zone by the sinc, rolled off by rect.
print(f"{'f*T':>8}  " + "  ".join(f"{kind:>16}" for kind in curves))
for ft in (0.0, 0.125, 0.25, 0.75, 0.875, 1.0, 1.125):
    idx = int(np.argmin(np.abs(freqs - ft / T)))
    row = "  ".join(f"{curves[kind].values[idx]:16.6f}" for kind in curves)
    print(f"{ft:8.3f}  {row}")
print()

# 2. The rect (zero-order hold) rolloff at the half sample rate is the
#    classic sinc^2(1/2) = (2/pi)^2, i.e. -3.92 dB relative to DC shaping;
#    subcarrier N/2 sits exactly at f = 1/(2T) when N is even.
idx_half = int(np.argmin(np.abs(freqs - 0.5 / T)))
zoh_drop = curves["rect"].values[idx_half] / curves["dirac_delta"].values[idx_half]
print(f"rect vs dirac at f = 1/(2T): {10 * np.log10(zoh_drop):+.2f} dB "
      f"(zero-order hold rolloff, exact value {20 * np.log10(2 / np.pi):+.2f} dB)")

# 3. Out-of-zone leakage: fraction of trapezoid power outside |fT| < 0.5.
for kind, curve in curves.items():
    total = np.trapezoid(curve.values, curve.freqs)
    inside = np.abs(curve.freqs) * T < 0.5
    in_zone = np.trapezoid(curve.values[inside], curve.freqs[inside])
    print(f"{kind:>16}: power outside first Nyquist zone = "
          f"{100 * (1 - in_zone / total):6.2f} %")

"""Averaged-periodogram convergence toward the closed-form spectrum.

Doubling the number of frames keeps halving the residual between the
empirical estimate and the analytic curve, until the estimate runs into
whatever the reconstruction model itself cannot represent.
"""
import time

import numpy as np

from otfspectrum import (
    InterpolationFilter,
    column_support_profile,
    compare_curves,
    otfs_psd,
)
from otfspectrum.presets import estimated_psd

T = 1.0
M, N = 4, 8
L = 1             # dirac reconstruction keeps the sample grid
SEED = 7

profile = column_support_profile([0, 1, 2, 6, 7], M, N)
filt = InterpolationFilter.dirac(T)

print(f"{'frames':>8}  {'NMSE [dB]':>10}  {'cosine':>9}  {'wall [s]':>8}")
for frames in (100, 400, 1600, 6400):
    t0 = time.perf_counter()
    est = estimated_psd(profile, frames, SEED, T, filt, L)
    ref = otfs_psd(profile, T, filt, est.freqs)
    metrics = compare_curves(est, ref)
    dt = time.perf_counter() - t0
    print(f"{frames:8d}  {metrics['nmse_db']:10.2f}  {metrics['cosine_similarity']:9.6f}  {dt:8.2f}")

print()
print("the averaged periodogram is unbiased for this model, so the NMSE")
print("falls ~6 dB per quadrupling; the cosine similarity saturates first.")

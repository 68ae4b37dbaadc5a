"""
Two channels sharing a harmonic
===============================

Both channels carry a period-5 cosine with different amplitudes and phases.
The second channel also has a trend of its own.  The stacked trajectory matrix
puts the shared harmonic in one pair of eigentriples, and the right singular
vectors can be examined channel by channel.
"""

import numpy as np

import autossa as ssa

n = np.arange(1, 100)
ch1 = np.cos(2 * np.pi * n / 5 + 0.3)
ch2 = 2 * np.cos(2 * np.pi * n / 5 + 1.1) + 3 * np.exp(0.01 * n)

dec = ssa.mssa([ch1, ch2], 50)
print("rank:", dec.d, " eigenvalues:", np.round(dec.eigenvalues[: dec.d], 1))

###############################################################################
# Left vectors behave like 1D eigenvectors.

U = dec.left_vectors(range(dec.d))
print("angle (left):", ssa.identify_periodic_angle_mssa_left(U, ssa.AngleIdConfig(m=1)).pairs)

###############################################################################
# Right vectors are split into one part per channel.  The trend measure takes
# the maximum over channels, the angle measure the minimum.

parts = [dec.factor_parts(i) for i in range(dec.d)]
for i, p in enumerate(parts):
    print(f"triple {i}: part norms {np.round(p.norms, 3)}")

tr = ssa.identify_trend_mssa_right(parts, ssa.TrendIdConfig(0, 0.05, 0.9))
print("trend (right):", tr.indices, "per channel:",
      {i: [None if v is None else round(v, 3) for v in vals] for i, vals in tr.details["per_channel"].items()})
ang = ssa.identify_periodic_angle_mssa_right(parts, ssa.AngleIdConfig(m=1))
print("angle (right):", ang.pairs)

###############################################################################
# Each channel's reconstruction from the harmonic pair.

rec = ssa.reconstruct(dec, ang.indices)
for name, got, want in (("ch1", rec[0], ch1), ("ch2", rec[1], ch2 - 3 * np.exp(0.01 * n))):
    print(f"{name} harmonic max error {np.abs(got - want).max():.2e}")

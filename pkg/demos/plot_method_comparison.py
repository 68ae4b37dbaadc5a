"""
Angle versus frequency identification
=====================================

For each noise level, thresholds of both harmonic methods are fitted on one
realization so that the automatic reconstruction matches the reconstruction
by the two leading eigentriples, and then applied to a fresh realization.
The table reports the resulting mean and median errors.  A small number of
replications keeps the run short; the full study uses 200.
"""

from autossa.experiments import SignalModel, compare_methods

for alpha in (0.0, 0.02):
    rep = compare_methods(SignalModel(alpha=alpha, omega=1 / 7, N=99), L=50, n_rep=30,
                          sigmas=(0.2, 0.6, 1.0))
    print(f"alpha = {alpha}")
    print("sigma  mean_tau  mean_rho  median_tau  median_rho")
    for row in rep.rows:
        print(f"{row.sigma:5.1f}  {row.mean_tau:8.4f}  {row.mean_rho:8.4f}  "
              f"{row.median_tau:10.4f}  {row.median_rho:10.4f}")

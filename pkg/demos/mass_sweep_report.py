"""A reduced shared-path mass sweep and how to read its report.

Constant friction with sigma(x) = 1 + x^2/10: the zero-mass limit is the
Ito (alpha = 0) reading of the overdamped equation.  The sweep integrates
the underdamped dynamics at several masses and both candidate limits, all
driven per sample by one Wiener path, and scores candidates by pathwise
sup distance, terminal weak error and KS statistic.
"""

import skdrift as sk

sigma = sk.quadratic(1.0, 0.1)
spec = sk.DynamicsSpec(force=sk.constant(0.0),
                       friction=sk.power_law(sigma, c=1.0, exponent=0.0),
                       noise=sigma, domain=(-6.0, 6.0), x0=0.0)

report = sk.mass_sweep(
    spec,
    masses=[1e-1, 1e-2, 1e-3],
    candidates=sk.alpha_candidates(spec, [0.0, 1.0]),
    t_final=1.0,
    n_fine=20_000,          # fine grid must resolve m_min / gamma
    n_samples=40,
    master_seed=2,
)

print("winner per metric:", report.summary["winner"])
print("per-sample argmin fractions at the smallest mass:",
      report.summary["win_fraction_at_smallest_mass"])
print("\nmass, candidate, mean sup error, terminal weak error, KS:")
print(report.summary_csv())
print("Mean sup error vs the true (alpha=0) limit shrinks like sqrt(m);")
print("vs alpha=1 it stalls at the drift gap. Spearman(mass, error) p-values:",
      {label: report.summary["per_candidate"][label]["spearman_p"]
       for label in report.candidates})

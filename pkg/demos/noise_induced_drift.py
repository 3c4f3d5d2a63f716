"""Noise-induced drift on the Einstein-relation example.

A Brownian particle with position-dependent mobility has friction
gamma(x) and noise sigma = sqrt(2 gamma) (kBT = 1).  The naive overdamped
equation dx = (sigma/gamma) dW looks driftless, yet the zero-mass limit of
the underdamped dynamics drifts: this script computes the correction and
shows trajectories converging to the anti-Ito reading of the equation.

The mobility gradient is taken fairly steep (gamma = 1 + x/5) so that a
single shared-noise path already separates the candidate limits; the
statistical version over many samples is the `sweep` experiment.
"""

import numpy as np

import skdrift as sk

# Einstein pair from the diffusion profile D(x) = 1/(1 + x/5)
D = sk.ScalarField(lambda x: 1.0 / (1.0 + np.asarray(x, float) / 5.0),
                   lambda x: -0.2 / (1.0 + np.asarray(x, float) / 5.0) ** 2)
gamma, sigma = sk.from_einstein(D, kBT=1.0)
spec = sk.DynamicsSpec(force=sk.constant(0.0), friction=gamma, noise=sigma,
                       domain=(-4.0, 40.0), x0=0.0)

drift = sk.sk_drift(spec)
print("limiting drift at x=0:  %+.4f   (pure noise-induced, F = 0)" % drift(0.0))
print("effective diffusion:     %.4f" % sk.sk_diffusion(spec)(0.0))
print("alpha(x) at x in {0, 5, 20}:",
      [round(float(sk.alpha_of_x(spec, x)), 12) for x in (0.0, 5.0, 20.0)])
print("alpha(lambda=2) =", sk.alpha_of_lambda(2.0), " (anti-Ito, as expected)")

# one Brownian realization drives everything; the grid resolves m/gamma
# down to the smallest mass
path = sk.sample_path(t_final=1.0, n_steps=100_000, seed=2)
anti_ito = sk.integrate_ito(sk.ito_drift_from_alpha(spec, sk.constant(1.0)),
                            sk.sk_diffusion(spec), spec.x0, path, domain=spec.domain)
ito = sk.integrate_ito(sk.ito_drift_from_alpha(spec, sk.constant(0.0)),
                       sk.sk_diffusion(spec), spec.x0, path, domain=spec.domain)

print("\nsup distance of the underdamped solution to each candidate limit:")
print("  mass     vs anti-Ito   vs Ito")
for mass in (1e-2, 1e-3, 1e-4):
    traj = sk.integrate_underdamped(spec, mass, path)
    d1 = np.max(np.abs(traj.positions - anti_ito.positions))
    d0 = np.max(np.abs(traj.positions - ito.positions))
    print("  %-7g  %10.4f   %7.4f" % (mass, d1, d0))
print("\nThe gap to the anti-Ito solution shrinks with the mass; the Ito")
print("solution keeps a finite offset, which is the noise-induced drift.")

"""Zero-mass (overdamped) limits of Langevin dynamics with state-dependent
friction and noise: coefficient construction, alpha-convention stochastic
integration, noise-induced drift formulas, and a shared-path convergence
harness."""

__version__ = "0.1.0"

from .fields import (CoefficientError, DynamicsSpec, ScalarField, affine, constant,
                     exponential, from_einstein, power_law, quadratic, sinusoid)
from .wiener import WienerPath, coarsen, dump_path_csv, sample_increments, sample_path
from .integrators import (DomainExitError, StabilityError, Trajectory, dump_trajectory_csv,
                          integrate_alpha, integrate_ito, integrate_underdamped)
from .limits import (SingularProportionalCase, alpha_field, alpha_of_lambda, alpha_of_x,
                     ito_drift_from_alpha, ou_stationary_variance, singular_sk_drift,
                     sk_diffusion, sk_drift)
from .experiments import (Candidate, ConvergenceReport, ExperimentError, alpha_candidates,
                          auto_candidates, mass_sweep, ou_stationary_check,
                          shared_path_trajectories, singular_candidates,
                          singular_case_experiment)
from .config import RunConfig, ConfigError, load_config, parse_config, preset

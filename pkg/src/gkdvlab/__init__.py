"""Numerical laboratory for generalized KdV equations.

Integrates u_t + (u_xx + f(u))_x = 0 pseudo-spectrally on a periodic box
and evaluates, along trajectories, the conserved quantities, the moment
identities behind breather nonexistence, and the weighted virial
functionals behind local decay.
"""

from .nonlinearity import (PolyNonlinearity, Polynomial, SignVerdict, TheoremReport,
                           antiderivative_F, antiderivative_G, classify_theorem,
                           eval_f, G_minus_F_over_3, sign_definiteness, split_f2)
from .grid import (Field, Grid, Norms, integrate, localized_h1, norms,
                   spectral_derivative, translate, weighted_sobolev_norm)
from .exact import (BreatherParams, DeltaNotPositiveError, gardner_breather,
                    mkdv_breather, pde_residual, soliton, standing_breather_period)
from .solver import (Conserved, DiagnosticsSeries, NonFiniteError, SolverConfig,
                     TrajectoryRecorder, conserved, evolve, step)
from .virial import (DecayInterval, KatoIntegrands, ScalingWeight, WeightProfile,
                     decay_interval, functional_I, functional_J, functional_K,
                     kato_integrands, moment_lambda, moment_omega)
from .experiments import (ConfigInvalidError, ExperimentConfig, ExitReport,
                          decay_experiment, run, smallness_check)

__version__ = "0.1.0"

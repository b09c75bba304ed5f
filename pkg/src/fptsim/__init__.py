"""First-passage-time simulation for Brownian motion and curved boundaries.

Two iterative samplers (squared-Gaussian steps for nondecreasing boundaries,
inverse-Gaussian steps along tilted lines for bounded-derivative boundaries),
a time-change reduction for mean-reverting processes, stopped-Euler baselines,
and a deterministic parallel Monte Carlo harness. Hot loops run in a compiled
extension when available, with a bit-identical pure-Python fallback.
"""

from fptsim._dispatch import backend_name
from fptsim.algo1 import estimate_m, simulate_algo1
from fptsim.algo2 import Algo2Config, h_invariant_check, simulate_algo2
from fptsim.baselines import (
    EulerConfig,
    bias_experiment,
    euler_hit,
    ou_reference_mean,
)
from fptsim.boundary import (
    Boundary,
    HypothesisReport,
    affine,
    check_hypotheses,
    constant,
    cosine,
    derivative,
    parse_boundary,
    sqrt_boundary,
    value,
)
from fptsim.errors import (
    FptsimError,
    InvalidProblem,
    InvalidSlope,
    MaxStepsExceeded,
)
from fptsim.harness import (
    ExperimentConfig,
    McSummary,
    psi_curve,
    run_monte_carlo,
    run_trials,
    sandwich_check,
    steps_vs_epsilon,
    steps_vs_horizon,
    summarize,
)
from fptsim.rng import (
    InverseGaussianParams,
    RngStream,
    sample_gaussian,
    sample_inverse_gaussian,
    split_stream,
)
from fptsim.transforms import (
    OuProblem,
    default_slope,
    simulate_ou_hitting,
    time_change,
    time_change_inverse,
    transformed_boundary,
)
from fptsim.types import HitSample, MeanEstimate

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

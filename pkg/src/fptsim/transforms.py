"""Reduction of the mean-reverting (Ornstein-Uhlenbeck) hitting problem to a
Brownian one.

For dX = dB - lam*X dt, X_0 = x0, hitting phi(t) = alpha + beta*cos(omega*t),
the process e^{lam t} X_t is a Brownian motion run on the clock
u(t) = (e^{2 lam t} - 1) / (2 lam). The OU passage time therefore equals
u^{-1}(tau_psi) in distribution, where psi is the transformed boundary

    psi(t) = sqrt(1 + 2 lam t) * phi(log(1 + 2 lam t) / (2 lam)) - x0,

which has derivative bounded by (lam*alpha + lam*beta + omega*beta) and so
feeds the tilted-line sampler directly. lam = 0 is supported as the exact
limit (u = identity, psi = phi - x0), giving plain Brownian problems.
"""

import math
from dataclasses import dataclass

from fptsim import boundary as bnd
from fptsim.algo2 import Algo2Config, simulate_algo2
from fptsim.errors import InvalidProblem
from fptsim.rng import RngStream
from fptsim.types import HitSample

TIME_CHANGE_EXP_CAP = 700.0  # exp overflow guard


@dataclass(frozen=True)
class OuProblem:
    """A mean-reverting hitting problem with a cosine boundary.

    The diffusion coefficient is fixed to 1; rescale time and space before
    input for other values. lam = 0 degenerates to standard Brownian motion.
    """

    lam: float
    x0: float
    alpha: float
    beta: float
    omega: float
    horizon_K: float

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError(f"lam must be >= 0, got {self.lam}")
        if not self.horizon_K > 0:
            raise ValueError(f"horizon_K must be > 0, got {self.horizon_K}")
        if self.alpha + self.beta - self.x0 <= 0:
            raise InvalidProblem(
                f"boundary must start above x0: alpha+beta-x0 = "
                f"{self.alpha + self.beta - self.x0} <= 0")


def transformed_boundary(p: OuProblem) -> bnd.Boundary:
    """The Brownian-side boundary psi with its declared slope bounds."""
    return bnd.transformed_ou(p.alpha, p.beta, p.omega, p.lam, p.x0)


def time_change(lam: float, t: float) -> float:
    """u(t) = (e^{2 lam t} - 1) / (2 lam); strictly increasing, u(0) = 0."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if lam == 0.0:
        return t
    x = 2.0 * lam * t
    if x > TIME_CHANGE_EXP_CAP:
        raise OverflowError(
            f"2*lam*t = {x} > {TIME_CHANGE_EXP_CAP}: horizon too large for "
            "the exponential clock")
    return math.expm1(x) / (2.0 * lam)


def time_change_inverse(lam: float, s: float) -> float:
    """u^{-1}(s) = log(1 + 2 lam s) / (2 lam)."""
    if s < 0:
        raise ValueError(f"s must be >= 0, got {s}")
    if lam == 0.0:
        return s
    return math.log1p(2.0 * lam * s) / (2.0 * lam)


def default_slope(p: OuProblem) -> float:
    """Default tilt r = 0.5 + lam*alpha + lam*beta + omega*beta: the declared
    slope bound of psi plus one half."""
    return 0.5 + p.lam * p.alpha + p.lam * p.beta + p.omega * p.beta


def simulate_ou_hitting(p: OuProblem, epsilon: float, stream: RngStream,
                        slope_r: float = None, max_steps: int = None,
                        record_trace: bool = False) -> HitSample:
    """One sample of the OU passage time capped at horizon_K.

    Runs the tilted-line sampler on psi up to the transformed horizon
    u(horizon_K) and maps the outcome back through u^{-1}; step count and
    truncation flag pass through unchanged.
    """
    psi = transformed_boundary(p)
    k_tilde = time_change(p.lam, p.horizon_K)
    r = default_slope(p) if slope_r is None else slope_r
    cfg = Algo2Config(epsilon=epsilon, horizon_K=k_tilde, slope_r=r)
    kwargs = {} if max_steps is None else {"max_steps": max_steps}
    hs = simulate_algo2(psi, cfg, stream, record_trace=record_trace, **kwargs)
    tau = min(time_change_inverse(p.lam, hs.tau), p.horizon_K)
    return HitSample(tau=tau, steps=hs.steps, truncated=hs.truncated,
                     exit_reason=hs.exit_reason, trace=hs.trace)

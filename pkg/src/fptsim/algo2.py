"""Iterative sampler for boundaries with bounded derivative.

The horizontal lines of the monotone sampler are tilted to slope -r with
r at least the boundary's downward slope bound, so each sub-passage time is
inverse Gaussian: starting from the gap H = phi(0), repeat

    draw Ghat ~ I(H/r, H^2)
    H <- phi(T + Ghat) - phi(T) + r*Ghat
    T <- T + Ghat

until H <= epsilon or T >= K. The output is T ^ K; a run that exits through
the horizon with H still > epsilon is flagged truncated. The tilt keeps
every intermediate H >= (r - rho_minus) * Ghat > 0 whenever r exceeds
rho_minus strictly.
"""

from dataclasses import dataclass

from fptsim import boundary as bnd
from fptsim.errors import InvalidSlope, MaxStepsExceeded
from fptsim.rng import RngStream
from fptsim.types import EXIT_EPSILON, EXIT_HORIZON, HitSample

DEFAULT_MAX_STEPS = 10 ** 7


@dataclass(frozen=True)
class Algo2Config:
    epsilon: float
    horizon_K: float
    slope_r: float

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if not self.horizon_K > 0:
            raise ValueError(f"horizon_K must be > 0, got {self.horizon_K}")
        if not self.slope_r > 0:
            raise ValueError(f"slope_r must be > 0, got {self.slope_r}")


def validate_slope(b: bnd.Boundary, slope_r: float) -> None:
    """slope_r must dominate the boundary's declared downward slope bound.

    Equality is tolerated (the gap process may then exit at exactly 0, which
    a boundary of slope -r does by telescoping); anything below rho_minus is
    rejected.
    """
    if b.rho_minus is None:
        raise InvalidSlope("boundary declares no rho_minus; cannot tilt")
    if slope_r < b.rho_minus or slope_r <= 0:
        raise InvalidSlope(
            f"slope_r={slope_r} must be positive and >= rho_minus={b.rho_minus}")


def simulate_algo2(b: bnd.Boundary, cfg: Algo2Config, stream: RngStream,
                   max_steps: int = DEFAULT_MAX_STEPS,
                   record_trace: bool = False) -> HitSample:
    """One sample of the horizon-capped passage time.

    The trace holds one record per step: (t_prev, ghat, t_new, h_new).
    A horizon exit that lands with H <= epsilon counts as an epsilon exit
    (not truncated).
    """
    validate_slope(b, cfg.slope_r)
    phi0 = bnd.value(b, 0.0)
    if phi0 <= 0:
        raise ValueError(f"boundary must start positive, phi(0)={phi0}")
    if cfg.epsilon >= phi0:
        raise ValueError(
            f"epsilon={cfg.epsilon} >= phi(0)={phi0}: requested resolution is "
            "coarser than the initial gap")

    eps, horizon, r = cfg.epsilon, cfg.horizon_K, cfg.slope_r
    t = 0.0
    h = phi0
    n = 0
    trace = [] if record_trace else None
    while h > eps and t < horizon:
        if n >= max_steps:
            raise MaxStepsExceeded(max_steps)
        ghat = stream.inverse_gaussian(h / r, h * h)
        ft = bnd.value(b, t)
        tn = t + ghat
        h = bnd.value(b, tn) - ft + r * ghat
        if record_trace:
            trace.append((t, ghat, tn, h))
        t = tn
        n += 1
    truncated = t >= horizon and h > eps
    return HitSample(tau=t if t < horizon else horizon, steps=n,
                     truncated=truncated,
                     exit_reason=EXIT_HORIZON if truncated else EXIT_EPSILON,
                     trace=tuple(trace) if record_trace else None)


@dataclass(frozen=True)
class HCheckResult:
    """Truthy iff every traced gap matches its defining formula and stays
    positive before the exit test; otherwise carries the first witness."""

    ok: bool
    witness: tuple = None

    def __bool__(self):
        return self.ok


def h_invariant_check(b: bnd.Boundary, cfg: Algo2Config, trace,
                      rel_tol: float = 1e-12) -> HCheckResult:
    """Recompute every traced gap H from boundary values and compare.

    The final H may sit at or below epsilon (that is the exit); every
    earlier H must be strictly positive.
    """
    for k, (t_prev, ghat, t_new, h_stored) in enumerate(trace):
        expected = bnd.value(b, t_new) - bnd.value(b, t_prev) + cfg.slope_r * ghat
        scale = max(abs(expected), abs(h_stored), 1e-30)
        if abs(expected - h_stored) > rel_tol * scale:
            return HCheckResult(False, (k, h_stored, expected))
        if k < len(trace) - 1 and not h_stored > 0:
            return HCheckResult(False, (k, h_stored, expected))
    return HCheckResult(True)

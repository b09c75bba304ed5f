"""Iterative sampler for nondecreasing boundaries.

Each step replaces the curved boundary by the horizontal line through its
value at the current iterate; the time to cross a horizontal line at height
d is d^2/G^2 in distribution for a standard Gaussian G. The recursion

    T0, T1 = 0, (phi(0)/G)^2
    while phi(T1) - phi(T0) > epsilon:
        (T0, T1) <- (T1, T1 + (phi(T1) - phi(T0))^2 / G^2)

terminates after O(sqrt(|log epsilon|)) steps on average for boundaries
satisfying H1-H3, and its output is exact in distribution for the stopped
refinement scheme (CDF within 3*sqrt(epsilon/(2*pi)) of the true passage
law, one-sided from above).
"""

import math

from fptsim import boundary as bnd
from fptsim.errors import MaxStepsExceeded
from fptsim.rng import RngStream
from fptsim.types import EXIT_EPSILON, HitSample, MeanEstimate

DEFAULT_MAX_STEPS = 10 ** 6


def simulate_algo1(b: bnd.Boundary, epsilon: float, stream: RngStream,
                   max_steps: int = DEFAULT_MAX_STEPS,
                   record_trace: bool = False) -> HitSample:
    """One passage-time sample for a nondecreasing boundary.

    The caller is responsible for hypothesis checks (the CLI gates on them);
    phi(0) > 0 and epsilon > 0 are validated here. The optional trace holds
    (T_k, phi(T_k)) pairs, one more than the step count.
    """
    if epsilon <= 0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}")
    phi0 = bnd.value(b, 0.0)
    if phi0 <= 0:
        raise ValueError(f"boundary must start positive, phi(0)={phi0}")

    g = stream.gaussian_nonzero()
    h0 = phi0 / g
    t1 = h0 * h0
    f0 = phi0
    f1 = bnd.value(b, t1)
    n = 1
    trace = [(0.0, phi0), (t1, f1)] if record_trace else None
    while f1 - f0 > epsilon:
        if n >= max_steps:
            raise MaxStepsExceeded(max_steps)
        g = stream.gaussian_nonzero()
        q = (f1 - f0) / g
        t1 = t1 + q * q
        f0 = f1
        f1 = bnd.value(b, t1)
        n += 1
        if record_trace:
            trace.append((t1, f1))
    return HitSample(tau=t1, steps=n, truncated=False,
                     exit_reason=EXIT_EPSILON,
                     trace=tuple(trace) if record_trace else None)


def estimate_m(n_draws: int, stream: RngStream) -> MeanEstimate:
    """Monte Carlo estimate of E[log(4 G^2)] over standard Gaussians.

    This is the per-step drift constant governing the sampler's step count;
    its exact value is log(2) - euler_gamma = 0.11593...
    """
    if n_draws < 10 ** 3:
        raise ValueError(f"need at least 1000 draws, got {n_draws}")
    total = 0.0
    total_sq = 0.0
    for _ in range(n_draws):
        g = stream.gaussian_nonzero()
        x = math.log(4.0 * g * g)
        total += x
        total_sq += x * x
    mean = total / n_draws
    var = max(0.0, total_sq / n_draws - mean * mean)
    return MeanEstimate(mean, math.sqrt(var / n_draws))

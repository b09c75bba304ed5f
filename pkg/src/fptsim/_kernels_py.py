"""Pure-Python numerical kernels.

This module is the reference implementation of the hot loops: the splittable
counter-based generator, the Gaussian and inverse-Gaussian samplers, and the
per-trial simulation loops. ``fptsim._kernels`` (Cython) implements the same
entry points with identical draw sequences and IEEE-754 arithmetic;
``fptsim._dispatch`` picks whichever is available. Any change here must be
mirrored there expression by expression.

Stream layout: substream ``i`` of master seed ``s`` starts from
``mix64(mix64(s) ^ i)`` and advances by the 64-bit golden-ratio increment
(SplitMix64). One Gaussian consumes two uniforms (Box-Muller, cosine branch);
one inverse Gaussian consumes one Gaussian plus one uniform.
"""

import math

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
TWO_M53 = 2.0 ** -53
TWO_PI = 6.283185307179586

# boundary family codes shared with the Cython kernels
FAM_CONSTANT = 0
FAM_AFFINE = 1
FAM_SQRT = 2
FAM_COSINE = 3
FAM_TRANSFORMED = 4

BACKEND = "python"


def mix64(z: int) -> int:
    """SplitMix64 finalizer: a bijective 64-bit avalanche."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def stream_state(master_seed: int, stream_index: int) -> int:
    """Initial counter for substream (master_seed, stream_index)."""
    return mix64(mix64(master_seed) ^ (stream_index & MASK64))


def next_u64(state: int):
    state = (state + GOLDEN) & MASK64
    return mix64(state), state


def next_uniform(state: int):
    """One double in the open interval (0, 1)."""
    x, state = next_u64(state)
    return ((x >> 11) + 0.5) * TWO_M53, state


def next_gaussian(state: int):
    """One standard normal via Box-Muller (cosine branch, two uniforms)."""
    u1, state = next_uniform(state)
    u2, state = next_uniform(state)
    return math.sqrt(-2.0 * math.log(u1)) * math.cos(TWO_PI * u2), state


def next_gaussian_nonzero(state: int):
    """Standard normal, redrawing while |G| < 1e-300 (overflow guard)."""
    g, state = next_gaussian(state)
    while -1e-300 < g < 1e-300:
        g, state = next_gaussian(state)
    return g, state


def next_inverse_gaussian(state: int, mu: float, lam: float):
    """One draw from I(mu, lam), Michael-Schucany-Haas construction.

    The smaller root is evaluated in the conjugate form
    ``x1 = 4*lam*mu*w / (sqrt(rad) + w)**2`` (w = mu*nu, rad = 4*lam*w + w*w),
    which is algebraically identical to the textbook expression but does not
    cancel for small nu; a zero radicand falls back to the nu -> 0 limit mu.
    """
    g, state = next_gaussian(state)
    nu = g * g
    w = mu * nu
    rad = 4.0 * lam * w + w * w
    if rad <= 0.0:
        x1 = mu
    else:
        s = math.sqrt(rad)
        x1 = mu * (4.0 * lam * w) / ((s + w) * (s + w))
    u, state = next_uniform(state)
    if u <= mu / (mu + x1):
        return x1, state
    return mu * mu / x1, state


def boundary_value(family: int, params, t: float) -> float:
    if family == FAM_CONSTANT:
        return params[0]
    if family == FAM_AFFINE:
        return params[0] + params[1] * t
    if family == FAM_SQRT:
        return math.sqrt(1.0 + params[0] * t)
    if family == FAM_COSINE:
        return params[0] + params[1] * math.cos(params[2] * t)
    if family == FAM_TRANSFORMED:
        alpha, beta, omega, lam, x0 = (
            params[0], params[1], params[2], params[3], params[4],
        )
        if lam == 0.0:
            return alpha + beta * math.cos(omega * t) - x0
        w = 1.0 + 2.0 * lam * t
        s = math.log(w) / (2.0 * lam)
        return math.sqrt(w) * (alpha + beta * math.cos(omega * s)) - x0
    raise ValueError(f"unknown boundary family code {family}")


def boundary_derivative(family: int, params, t: float) -> float:
    if family == FAM_CONSTANT:
        return 0.0
    if family == FAM_AFFINE:
        return params[1]
    if family == FAM_SQRT:
        return params[0] / (2.0 * math.sqrt(1.0 + params[0] * t))
    if family == FAM_COSINE:
        return -params[1] * params[2] * math.sin(params[2] * t)
    if family == FAM_TRANSFORMED:
        alpha, beta, omega, lam, x0 = (
            params[0], params[1], params[2], params[3], params[4],
        )
        if lam == 0.0:
            return -beta * omega * math.sin(omega * t)
        w = 1.0 + 2.0 * lam * t
        s = math.log(w) / (2.0 * lam)
        num = lam * (alpha + beta * math.cos(omega * s)) - beta * omega * math.sin(omega * s)
        return num / math.sqrt(w)
    raise ValueError(f"unknown boundary family code {family}")


# ---------------------------------------------------------------------------
# batch entry points (one substream per trial)

def uniforms(master_seed, stream_index, n):
    out = np.empty(n, dtype=np.float64)
    state = stream_state(master_seed, stream_index)
    for i in range(n):
        out[i], state = next_uniform(state)
    return out


def gaussians(master_seed, stream_index, n):
    out = np.empty(n, dtype=np.float64)
    state = stream_state(master_seed, stream_index)
    for i in range(n):
        out[i], state = next_gaussian(state)
    return out


def inverse_gaussians(master_seed, stream_index, n, mu, lam):
    out = np.empty(n, dtype=np.float64)
    state = stream_state(master_seed, stream_index)
    for i in range(n):
        out[i], state = next_inverse_gaussian(state, mu, lam)
    return out


def algo1_batch(family, params, epsilon, master_seed, trial_start, n_trials,
                max_steps):
    """Squared-Gaussian iteration for nondecreasing boundaries.

    Returns (tau, steps); steps[i] == -1 flags a trial that hit max_steps.
    """
    tau = np.empty(n_trials, dtype=np.float64)
    steps = np.empty(n_trials, dtype=np.int64)
    p = tuple(params)
    phi0 = boundary_value(family, p, 0.0)
    for i in range(n_trials):
        state = stream_state(master_seed, trial_start + i)
        g, state = next_gaussian_nonzero(state)
        h0 = phi0 / g
        t1 = h0 * h0
        f0 = phi0
        f1 = boundary_value(family, p, t1)
        n = 1
        while f1 - f0 > epsilon:
            if n >= max_steps:
                n = -1
                break
            g, state = next_gaussian_nonzero(state)
            q = (f1 - f0) / g
            t1 = t1 + q * q
            f0 = f1
            f1 = boundary_value(family, p, t1)
            n += 1
        tau[i] = t1
        steps[i] = n
    return tau, steps


def algo2_batch(family, params, epsilon, horizon, slope_r, master_seed,
                trial_start, n_trials, max_steps):
    """Inverse-Gaussian iteration along tilted lines of slope -r.

    Returns (tau, steps, truncated); steps[i] == -1 flags a capped trial.
    A truncated trial exited through the horizon with the gap still > epsilon.
    """
    tau = np.empty(n_trials, dtype=np.float64)
    steps = np.empty(n_trials, dtype=np.int64)
    truncated = np.empty(n_trials, dtype=np.uint8)
    p = tuple(params)
    phi0 = boundary_value(family, p, 0.0)
    for i in range(n_trials):
        state = stream_state(master_seed, trial_start + i)
        t = 0.0
        h = phi0
        n = 0
        while h > epsilon and t < horizon:
            if n >= max_steps:
                n = -1
                break
            ghat, state = next_inverse_gaussian(state, h / slope_r, h * h)
            ft = boundary_value(family, p, t)
            tn = t + ghat
            h = boundary_value(family, p, tn) - ft + slope_r * ghat
            t = tn
            n += 1
        tau[i] = t if t < horizon else horizon
        steps[i] = n
        truncated[i] = 1 if (t >= horizon and h > epsilon) else 0
    return tau, steps, truncated


# euler exit codes
EULER_HIT = 0
EULER_BRIDGE = 1
EULER_HORIZON = 2


def euler_batch(lam, x0, family, params, dt, horizon, shift, bridge,
                master_seed, trial_start, n_trials):
    """Stopped explicit Euler scheme for dX = -lam*X dt + dB on [0, horizon].

    shift lowers the monitored barrier by a constant (0 for the plain
    scheme); bridge != 0 additionally draws a within-cell crossing with
    probability exp(-2*gap0*gap1/h) and reports the cell midpoint.
    Returns (tau, steps, code) with code in {EULER_HIT, EULER_BRIDGE,
    EULER_HORIZON}.
    """
    tau = np.empty(n_trials, dtype=np.float64)
    steps = np.empty(n_trials, dtype=np.int64)
    code = np.empty(n_trials, dtype=np.uint8)
    p = tuple(params)
    for i in range(n_trials):
        state = stream_state(master_seed, trial_start + i)
        x = x0
        k = 0
        out_tau = horizon
        out_code = EULER_HORIZON
        if x >= boundary_value(family, p, 0.0) - shift:
            tau[i] = 0.0
            steps[i] = 0
            code[i] = EULER_HIT
            continue
        while True:
            t = k * dt
            if t >= horizon:
                break
            tn = (k + 1) * dt
            if tn > horizon:
                tn = horizon
            h = tn - t
            g, state = next_gaussian(state)
            xn = x - lam * x * h + math.sqrt(h) * g
            fn = boundary_value(family, p, tn)
            k += 1
            if xn >= fn - shift:
                out_tau = tn
                out_code = EULER_HIT
                break
            if bridge:
                gap0 = boundary_value(family, p, t) - x
                gap1 = fn - xn
                u, state = next_uniform(state)
                if u <= math.exp(-2.0 * gap0 * gap1 / h):
                    out_tau = t + 0.5 * h
                    out_code = EULER_BRIDGE
                    break
            x = xn
        tau[i] = out_tau
        steps[i] = k
        code[i] = out_code
    return tau, steps, code

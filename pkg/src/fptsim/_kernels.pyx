# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical kernels.

Mirror of fptsim._kernels_py, expression for expression: same draw
sequences, same IEEE-754 arithmetic (built with -ffp-contract=off so no
FMA contraction sneaks in). Keep both modules in lockstep.
"""

from libc.math cimport cos, exp, log, sin, sqrt
from libc.stdint cimport int64_t, uint8_t, uint64_t

import numpy as np

cdef double TWO_M53 = 1.0 / 9007199254740992.0     # 2^-53, exact
cdef double TWO_PI = 6.283185307179586

# 64-bit constants assembled from 32-bit halves (Cython has no ULL literals)
cdef uint64_t GOLDEN = ((<uint64_t> 0x9E3779B9) << 32) | (<uint64_t> 0x7F4A7C15)
cdef uint64_t MIX_A = ((<uint64_t> 0xBF58476D) << 32) | (<uint64_t> 0x1CE4E5B9)
cdef uint64_t MIX_B = ((<uint64_t> 0x94D049BB) << 32) | (<uint64_t> 0x133111EB)
cdef uint64_t MASK64_C = <uint64_t> 0xFFFFFFFFFFFFFFFF

FAM_CONSTANT = 0
FAM_AFFINE = 1
FAM_SQRT = 2
FAM_COSINE = 3
FAM_TRANSFORMED = 4

BACKEND = "compiled"

# euler exit codes (module constants mirror _kernels_py)
EULER_HIT = 0
EULER_BRIDGE = 1
EULER_HORIZON = 2


cdef inline uint64_t _mix64(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * MIX_A
    z = (z ^ (z >> 27)) * MIX_B
    return z ^ (z >> 31)


cdef inline uint64_t _stream_state(uint64_t master_seed, uint64_t stream_index) nogil:
    return _mix64(_mix64(master_seed) ^ stream_index)


cdef inline double _next_uniform(uint64_t *state) nogil:
    state[0] = state[0] + GOLDEN
    return (<double> (_mix64(state[0]) >> 11) + 0.5) * TWO_M53


cdef inline double _next_gaussian(uint64_t *state) nogil:
    cdef double u1 = _next_uniform(state)
    cdef double u2 = _next_uniform(state)
    return sqrt(-2.0 * log(u1)) * cos(TWO_PI * u2)


cdef inline double _next_gaussian_nonzero(uint64_t *state) nogil:
    cdef double g = _next_gaussian(state)
    while -1e-300 < g < 1e-300:
        g = _next_gaussian(state)
    return g


cdef inline double _next_inverse_gaussian(uint64_t *state, double mu, double lam) nogil:
    cdef double g = _next_gaussian(state)
    cdef double nu = g * g
    cdef double w = mu * nu
    cdef double rad = 4.0 * lam * w + w * w
    cdef double s, x1, u
    if rad <= 0.0:
        x1 = mu
    else:
        s = sqrt(rad)
        x1 = mu * (4.0 * lam * w) / ((s + w) * (s + w))
    u = _next_uniform(state)
    if u <= mu / (mu + x1):
        return x1
    return mu * mu / x1


cdef inline double _bval(int family, const double *p, double t) nogil:
    cdef double w, s
    if family == 0:
        return p[0]
    if family == 1:
        return p[0] + p[1] * t
    if family == 2:
        return sqrt(1.0 + p[0] * t)
    if family == 3:
        return p[0] + p[1] * cos(p[2] * t)
    # transformed
    if p[3] == 0.0:
        return p[0] + p[1] * cos(p[2] * t) - p[4]
    w = 1.0 + 2.0 * p[3] * t
    s = log(w) / (2.0 * p[3])
    return sqrt(w) * (p[0] + p[1] * cos(p[2] * s)) - p[4]


cdef inline double _bderiv(int family, const double *p, double t) nogil:
    cdef double w, s, num
    if family == 0:
        return 0.0
    if family == 1:
        return p[1]
    if family == 2:
        return p[0] / (2.0 * sqrt(1.0 + p[0] * t))
    if family == 3:
        return -p[1] * p[2] * sin(p[2] * t)
    if p[3] == 0.0:
        return -p[1] * p[2] * sin(p[2] * t)
    w = 1.0 + 2.0 * p[3] * t
    s = log(w) / (2.0 * p[3])
    num = p[3] * (p[0] + p[1] * cos(p[2] * s)) - p[1] * p[2] * sin(p[2] * s)
    return num / sqrt(w)


cdef int _fill_params(object params, double *p) except -1:
    cdef Py_ssize_t m = len(params)
    if m > 8:
        raise ValueError("too many boundary parameters")
    cdef Py_ssize_t j
    for j in range(m):
        p[j] = params[j]
    for j in range(m, 8):
        p[j] = 0.0
    return 0


cdef inline uint64_t _as_u64(object v):
    return <uint64_t> (v & 0xFFFFFFFFFFFFFFFF)


# ---------------------------------------------------------------------------
# scalar exports (parity tests and the Python-side Boundary delegate)

def mix64(z):
    return _mix64(_as_u64(z))


def stream_state(master_seed, stream_index):
    return _stream_state(_as_u64(master_seed), _as_u64(stream_index))


def next_uniform(state):
    cdef uint64_t st = _as_u64(state)
    cdef double u = _next_uniform(&st)
    return u, st


def next_gaussian(state):
    cdef uint64_t st = _as_u64(state)
    cdef double g = _next_gaussian(&st)
    return g, st


def next_gaussian_nonzero(state):
    cdef uint64_t st = _as_u64(state)
    cdef double g = _next_gaussian_nonzero(&st)
    return g, st


def next_inverse_gaussian(state, double mu, double lam):
    cdef uint64_t st = _as_u64(state)
    cdef double x = _next_inverse_gaussian(&st, mu, lam)
    return x, st


def boundary_value(int family, params, double t):
    cdef double p[8]
    _fill_params(params, p)
    return _bval(family, p, t)


def boundary_derivative(int family, params, double t):
    cdef double p[8]
    _fill_params(params, p)
    return _bderiv(family, p, t)


# ---------------------------------------------------------------------------
# batch entry points (one substream per trial)

def uniforms(master_seed, stream_index, Py_ssize_t n):
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef uint64_t st = _stream_state(_as_u64(master_seed), _as_u64(stream_index))
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            o[i] = _next_uniform(&st)
    return out


def gaussians(master_seed, stream_index, Py_ssize_t n):
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef uint64_t st = _stream_state(_as_u64(master_seed), _as_u64(stream_index))
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            o[i] = _next_gaussian(&st)
    return out


def inverse_gaussians(master_seed, stream_index, Py_ssize_t n, double mu, double lam):
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef uint64_t st = _stream_state(_as_u64(master_seed), _as_u64(stream_index))
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            o[i] = _next_inverse_gaussian(&st, mu, lam)
    return out


def algo1_batch(int family, params, double epsilon, master_seed,
                trial_start, Py_ssize_t n_trials, int64_t max_steps):
    cdef double p[8]
    _fill_params(params, p)
    tau = np.empty(n_trials, dtype=np.float64)
    steps = np.empty(n_trials, dtype=np.int64)
    cdef double[::1] tau_v = tau
    cdef int64_t[::1] steps_v = steps
    cdef uint64_t seed = _as_u64(master_seed)
    cdef uint64_t start = _as_u64(trial_start)
    cdef double phi0 = _bval(family, p, 0.0)
    cdef uint64_t st
    cdef Py_ssize_t i
    cdef int64_t n
    cdef double g, h0, t1, f0, f1, q
    with nogil:
        for i in range(n_trials):
            st = _stream_state(seed, start + <uint64_t> i)
            g = _next_gaussian_nonzero(&st)
            h0 = phi0 / g
            t1 = h0 * h0
            f0 = phi0
            f1 = _bval(family, p, t1)
            n = 1
            while f1 - f0 > epsilon:
                if n >= max_steps:
                    n = -1
                    break
                g = _next_gaussian_nonzero(&st)
                q = (f1 - f0) / g
                t1 = t1 + q * q
                f0 = f1
                f1 = _bval(family, p, t1)
                n += 1
            tau_v[i] = t1
            steps_v[i] = n
    return tau, steps


def algo2_batch(int family, params, double epsilon, double horizon,
                double slope_r, master_seed, trial_start,
                Py_ssize_t n_trials, int64_t max_steps):
    cdef double p[8]
    _fill_params(params, p)
    tau = np.empty(n_trials, dtype=np.float64)
    steps = np.empty(n_trials, dtype=np.int64)
    truncated = np.empty(n_trials, dtype=np.uint8)
    cdef double[::1] tau_v = tau
    cdef int64_t[::1] steps_v = steps
    cdef uint8_t[::1] trunc_v = truncated
    cdef uint64_t seed = _as_u64(master_seed)
    cdef uint64_t start = _as_u64(trial_start)
    cdef double phi0 = _bval(family, p, 0.0)
    cdef uint64_t st
    cdef Py_ssize_t i
    cdef int64_t n
    cdef double t, h, ghat, ft, tn
    with nogil:
        for i in range(n_trials):
            st = _stream_state(seed, start + <uint64_t> i)
            t = 0.0
            h = phi0
            n = 0
            while h > epsilon and t < horizon:
                if n >= max_steps:
                    n = -1
                    break
                ghat = _next_inverse_gaussian(&st, h / slope_r, h * h)
                ft = _bval(family, p, t)
                tn = t + ghat
                h = _bval(family, p, tn) - ft + slope_r * ghat
                t = tn
                n += 1
            tau_v[i] = t if t < horizon else horizon
            steps_v[i] = n
            trunc_v[i] = 1 if (t >= horizon and h > epsilon) else 0
    return tau, steps, truncated


def euler_batch(double lam, double x0, int family, params, double dt,
                double horizon, double shift, int bridge, master_seed,
                trial_start, Py_ssize_t n_trials):
    cdef double p[8]
    _fill_params(params, p)
    tau = np.empty(n_trials, dtype=np.float64)
    steps = np.empty(n_trials, dtype=np.int64)
    code = np.empty(n_trials, dtype=np.uint8)
    cdef double[::1] tau_v = tau
    cdef int64_t[::1] steps_v = steps
    cdef uint8_t[::1] code_v = code
    cdef uint64_t seed = _as_u64(master_seed)
    cdef uint64_t start = _as_u64(trial_start)
    cdef uint64_t st
    cdef Py_ssize_t i
    cdef int64_t k
    cdef double x, t, tn, h, g, xn, fn, gap0, gap1, u, out_tau
    cdef int out_code
    with nogil:
        for i in range(n_trials):
            st = _stream_state(seed, start + <uint64_t> i)
            x = x0
            k = 0
            out_tau = horizon
            out_code = 2  # horizon
            if x >= _bval(family, p, 0.0) - shift:
                tau_v[i] = 0.0
                steps_v[i] = 0
                code_v[i] = 0  # hit
                continue
            while True:
                t = k * dt
                if t >= horizon:
                    break
                tn = (k + 1) * dt
                if tn > horizon:
                    tn = horizon
                h = tn - t
                g = _next_gaussian(&st)
                xn = x - lam * x * h + sqrt(h) * g
                fn = _bval(family, p, tn)
                k += 1
                if xn >= fn - shift:
                    out_tau = tn
                    out_code = 0  # hit
                    break
                if bridge:
                    gap0 = _bval(family, p, t) - x
                    gap1 = fn - xn
                    u = _next_uniform(&st)
                    if u <= exp(-2.0 * gap0 * gap1 / h):
                        out_tau = t + 0.5 * h
                        out_code = 1  # bridge
                        break
                x = xn
            tau_v[i] = out_tau
            steps_v[i] = k
            code_v[i] = out_code
    return tau, steps, code

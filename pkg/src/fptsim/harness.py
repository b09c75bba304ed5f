"""Deterministic parallel Monte Carlo engine and experiment primitives.

Trials are independent substreams of one master seed, so results are a pure
function of the experiment config: bit-identical across reruns and worker
counts. Workers receive contiguous trial ranges and the parent reassembles
them in index order.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from fptsim import algo1 as _algo1
from fptsim import algo2 as _algo2
from fptsim import boundary as bnd
from fptsim import transforms
from fptsim._dispatch import kernels
from fptsim.errors import MaxStepsExceeded
from fptsim.rng import InverseGaussianParams, inverse_gaussian_block

ALGORITHMS = ("algo1", "algo2", "ou", "euler-plain", "euler-bridge", "euler-shifted")

# exit-code labels, per algorithm kind
_ITER_LABELS = ("epsilon", "horizon")
_EULER_LABELS = ("hit", "bridge", "horizon")


@dataclass(frozen=True)
class ExperimentConfig:
    """Declarative description of one Monte Carlo experiment."""

    boundary: str            # textual boundary spec (see fptsim.boundary)
    algorithm: str
    n_trials: int
    master_seed: int
    epsilon: Optional[float] = None
    horizon: Optional[float] = None
    slope_r: Optional[float] = None   # None = auto: rho_minus + 0.5
    dt: Optional[float] = None        # euler only
    max_steps: Optional[int] = None
    cdf_points: int = 512
    cdf_upper: Optional[float] = None

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.n_trials < 1:
            raise ValueError(f"n_trials must be >= 1, got {self.n_trials}")


@dataclass(frozen=True)
class _Resolved:
    kind: str                 # algo1 | algo2 | ou | euler
    family: int
    params: tuple
    epsilon: Optional[float]
    horizon: Optional[float]  # in simulation clock (psi clock for ou)
    slope_r: Optional[float]
    max_steps: int
    # ou extras
    lam: float = 0.0
    x0: float = 0.0
    horizon_ou: Optional[float] = None
    dt: Optional[float] = None
    shift: float = 0.0
    bridge: bool = False
    exit_labels: tuple = _ITER_LABELS


def resolve(cfg: ExperimentConfig) -> _Resolved:
    """Validate a config against its boundary and fill algorithm defaults."""
    b = bnd.parse_boundary(cfg.boundary)
    alg = cfg.algorithm
    if alg == "algo1":
        if cfg.epsilon is None:
            raise ValueError("algo1 needs epsilon")
        if not cfg.epsilon > 0:
            raise ValueError(f"epsilon must be > 0, got {cfg.epsilon}")
        return _Resolved("algo1", b.family_code, b.params, cfg.epsilon, None,
                         None, cfg.max_steps or _algo1.DEFAULT_MAX_STEPS)
    if alg == "algo2":
        if cfg.epsilon is None or cfg.horizon is None:
            raise ValueError("algo2 needs epsilon and horizon")
        r = cfg.slope_r if cfg.slope_r is not None else b.rho_minus + 0.5
        acfg = _algo2.Algo2Config(cfg.epsilon, cfg.horizon, r)
        _algo2.validate_slope(b, r)
        phi0 = bnd.value(b, 0.0)
        if phi0 <= 0:
            raise ValueError(f"boundary must start positive, phi(0)={phi0}")
        if cfg.epsilon >= phi0:
            raise ValueError(f"epsilon={cfg.epsilon} >= phi(0)={phi0}")
        return _Resolved("algo2", b.family_code, b.params, acfg.epsilon,
                         acfg.horizon_K, acfg.slope_r,
                         cfg.max_steps or _algo2.DEFAULT_MAX_STEPS)
    if b.family != "transformed":
        raise ValueError(f"algorithm {alg} needs an 'ou:' boundary spec")
    if cfg.horizon is None:
        raise ValueError(f"{alg} needs a horizon")
    alpha, beta, omega, lam, x0 = b.params
    problem = transforms.OuProblem(lam=lam, x0=x0, alpha=alpha, beta=beta,
                                   omega=omega, horizon_K=cfg.horizon)
    if alg == "ou":
        if cfg.epsilon is None:
            raise ValueError("ou needs epsilon")
        r = cfg.slope_r if cfg.slope_r is not None else transforms.default_slope(problem)
        k_tilde = transforms.time_change(lam, cfg.horizon)
        acfg = _algo2.Algo2Config(cfg.epsilon, k_tilde, r)
        _algo2.validate_slope(b, r)
        if cfg.epsilon >= bnd.value(b, 0.0):
            raise ValueError(f"epsilon={cfg.epsilon} >= psi(0)={bnd.value(b, 0.0)}")
        return _Resolved("ou", b.family_code, b.params, acfg.epsilon,
                         k_tilde, r, cfg.max_steps or _algo2.DEFAULT_MAX_STEPS,
                         lam=lam, x0=x0, horizon_ou=cfg.horizon)
    # euler-*
    if cfg.dt is None:
        raise ValueError(f"{alg} needs dt")
    variant = alg.split("-", 1)[1]
    from fptsim.baselines import EulerConfig, variant_shift_bridge

    EulerConfig(cfg.dt, cfg.horizon, variant)  # validation
    shift, bridge = variant_shift_bridge(variant, cfg.dt)
    cos_b = bnd.cosine(alpha, beta, omega)
    return _Resolved("euler", cos_b.family_code, cos_b.params, None,
                     cfg.horizon, None, 0, lam=lam, x0=x0, dt=cfg.dt,
                     shift=shift, bridge=bridge, exit_labels=_EULER_LABELS)


@dataclass(frozen=True)
class TrialResults:
    """Per-trial outcomes in trial-index order."""

    tau: np.ndarray         # float64
    steps: np.ndarray       # int64
    truncated: np.ndarray   # bool
    exit_codes: np.ndarray  # uint8
    exit_labels: tuple

    def exit_reason(self, i: int) -> str:
        return self.exit_labels[self.exit_codes[i]]


def _run_range(cfg: ExperimentConfig, start: int, count: int) -> dict:
    r = resolve(cfg)
    seed = cfg.master_seed
    if r.kind == "algo1":
        tau, steps = kernels.algo1_batch(r.family, r.params, r.epsilon, seed,
                                         start, count, r.max_steps)
        trunc = np.zeros(count, dtype=np.uint8)
        codes = np.zeros(count, dtype=np.uint8)
    elif r.kind in ("algo2", "ou"):
        tau, steps, trunc = kernels.algo2_batch(
            r.family, r.params, r.epsilon, r.horizon, r.slope_r, seed, start,
            count, r.max_steps)
        codes = trunc.copy()
        if r.kind == "ou":
            lam, cap = r.lam, r.horizon_ou
            inv = transforms.time_change_inverse
            mapped = np.empty(count, dtype=np.float64)
            for i in range(count):
                s = inv(lam, float(tau[i]))
                mapped[i] = s if s < cap else cap
            tau = mapped
    else:  # euler
        tau, steps, codes = kernels.euler_batch(
            r.lam, r.x0, r.family, r.params, r.dt, r.horizon, r.shift,
            1 if r.bridge else 0, seed, start, count)
        trunc = (codes == kernels.EULER_HORIZON).astype(np.uint8)
    if np.any(steps < 0):
        bad = int(np.argmax(steps < 0))
        raise MaxStepsExceeded(r.max_steps, trial_index=start + bad)
    return {"tau": tau, "steps": steps, "truncated": trunc, "codes": codes}


def run_trials(cfg: ExperimentConfig, workers: int = 1) -> TrialResults:
    """All trials of an experiment; identical output for any worker count."""
    r = resolve(cfg)
    n = cfg.n_trials
    w = max(1, min(workers, n))
    if w == 1:
        parts = [_run_range(cfg, 0, n)]
    else:
        base, extra = divmod(n, w)
        ranges = []
        start = 0
        for i in range(w):
            count = base + (1 if i < extra else 0)
            if count:
                ranges.append((start, count))
            start += count
        with ProcessPoolExecutor(max_workers=w) as ex:
            futures = [ex.submit(_run_range, cfg, s, c) for s, c in ranges]
            parts = [f.result() for f in futures]
    return TrialResults(
        tau=np.concatenate([p["tau"] for p in parts]),
        steps=np.concatenate([p["steps"] for p in parts]),
        truncated=np.concatenate([p["truncated"] for p in parts]).astype(bool),
        exit_codes=np.concatenate([p["codes"] for p in parts]),
        exit_labels=r.exit_labels)


@dataclass(frozen=True)
class McSummary:
    """Aggregate over trials, with a binomial-error empirical CDF."""

    n_trials: int
    mean_tau: float
    stderr_tau: float
    mean_steps: float
    stderr_steps: float
    truncation_rate: float
    cdf_t: np.ndarray
    cdf_f: np.ndarray
    cdf_stderr: np.ndarray


def _mean_stderr(x: np.ndarray):
    n = len(x)
    mean = float(np.mean(x))
    if n < 2:
        return mean, 0.0
    return mean, float(np.std(x, ddof=1) / math.sqrt(n))


def empirical_cdf(samples: np.ndarray, grid: np.ndarray):
    """Right-continuous empirical CDF and its binomial standard error."""
    n = len(samples)
    srt = np.sort(samples)
    f = np.searchsorted(srt, grid, side="right") / n
    return f, np.sqrt(f * (1.0 - f) / n)


def summarize(cfg: ExperimentConfig, results: TrialResults) -> McSummary:
    r = resolve(cfg)
    mean_tau, se_tau = _mean_stderr(results.tau)
    mean_steps, se_steps = _mean_stderr(results.steps.astype(np.float64))
    upper = cfg.cdf_upper
    if upper is None:
        upper = r.horizon_ou if r.kind == "ou" else r.horizon
    if upper is None:
        upper = float(np.quantile(results.tau, 0.99))
    grid = np.linspace(0.0, upper, cfg.cdf_points)
    f, se = empirical_cdf(results.tau, grid)
    return McSummary(
        n_trials=cfg.n_trials, mean_tau=mean_tau, stderr_tau=se_tau,
        mean_steps=mean_steps, stderr_steps=se_steps,
        truncation_rate=float(np.mean(results.truncated)),
        cdf_t=grid, cdf_f=f, cdf_stderr=se)


def run_monte_carlo(cfg: ExperimentConfig, workers: int = 1) -> McSummary:
    """n_trials independent simulations, summarized."""
    return summarize(cfg, run_trials(cfg, workers=workers))


@dataclass(frozen=True)
class SweepRow:
    x: float            # exponent n (epsilon sweep) or horizon K
    epsilon: float
    mean_steps: float
    stderr: float
    n_trials: int


def steps_vs_epsilon(cfg: ExperimentConfig, exponents: Sequence[int],
                     workers: int = 1):
    """Mean step count for epsilon = 0.5^n, one row per exponent.

    All rows share the master seed, so trials are coupled prefix-wise and the
    column is nondecreasing pathwise, not just in expectation.
    """
    if not exponents:
        raise ValueError("empty exponent schedule")
    if any(n <= 0 for n in exponents):
        raise ValueError("exponents must be positive integers")
    rows = []
    for n in exponents:
        eps = 0.5 ** n
        results = run_trials(replace(cfg, epsilon=eps), workers=workers)
        mean, se = _mean_stderr(results.steps.astype(np.float64))
        rows.append(SweepRow(float(n), eps, mean, se, cfg.n_trials))
    return rows


def steps_vs_horizon(cfg: ExperimentConfig, horizons: Sequence[float],
                     workers: int = 1):
    """Mean step count as a function of the truncation horizon K."""
    if not horizons:
        raise ValueError("empty horizon schedule")
    rows = []
    for k in horizons:
        results = run_trials(replace(cfg, horizon=float(k)), workers=workers)
        mean, se = _mean_stderr(results.steps.astype(np.float64))
        rows.append(SweepRow(float(k), cfg.epsilon, mean, se, cfg.n_trials))
    return rows


@dataclass(frozen=True)
class SandwichReport:
    """Two-sided CDF comparison of a coarse run against a fine-epsilon proxy.

    upper: F_proxy(t) <= F_coarse(t) + 3*stderr           (distribution-level)
    lower: F_coarse(t - eps) - bound <= F_proxy(t) + 3*stderr
    with bound = 3*sqrt(eps/(2*pi)) for algo1 and
    (1 + rho_plus)*sqrt(2*eps/pi) for the tilted-line samplers.
    """

    passed: bool
    bound: float
    worst_upper_margin: float   # min over grid; >= 0 iff upper check passes
    worst_lower_margin: float
    n_violations: int
    grid: np.ndarray


def sandwich_bound(algorithm: str, epsilon: float, rho_plus: float) -> float:
    if algorithm == "algo1":
        return 3.0 * math.sqrt(epsilon / (2.0 * math.pi))
    return (1.0 + rho_plus) * math.sqrt(2.0 * epsilon / math.pi)


def sandwich_check(cfg: ExperimentConfig, eps_coarse: float, eps_fine: float,
                   workers: int = 1, grid_points: int = 512) -> SandwichReport:
    """Check both sandwich inequalities on a grid of t >= eps_coarse.

    The fine run (16x smaller epsilon at least) stands in for the true CDF;
    its own deviation is an order of magnitude below the tested bound.
    """
    if eps_fine > eps_coarse / 16.0:
        raise ValueError("eps_fine must be at most eps_coarse/16")
    b = bnd.parse_boundary(cfg.boundary)
    coarse = run_trials(replace(cfg, epsilon=eps_coarse), workers=workers)
    fine = run_trials(replace(cfg, epsilon=eps_fine,
                              master_seed=cfg.master_seed + 1), workers=workers)
    r = resolve(replace(cfg, epsilon=eps_coarse))
    if r.kind == "algo1":
        upper_t = float(np.quantile(fine.tau, 0.99))
    else:
        upper_t = r.horizon_ou if r.kind == "ou" else r.horizon
    grid = np.linspace(eps_coarse, upper_t, grid_points, endpoint=False)
    f_c, se_c = empirical_cdf(coarse.tau, grid)
    f_c_shift, se_cs = empirical_cdf(coarse.tau, grid - eps_coarse)
    f_f, se_f = empirical_cdf(fine.tau, grid)
    bound = sandwich_bound(cfg.algorithm, eps_coarse, b.rho_plus or 0.0)
    slack_up = 3.0 * np.sqrt(se_c ** 2 + se_f ** 2)
    slack_lo = 3.0 * np.sqrt(se_cs ** 2 + se_f ** 2)
    upper_margin = f_c + slack_up - f_f
    lower_margin = f_f + slack_lo + bound - f_c_shift
    violations = int(np.sum(upper_margin < 0) + np.sum(lower_margin < 0))
    return SandwichReport(
        passed=violations == 0, bound=bound,
        worst_upper_margin=float(np.min(upper_margin)),
        worst_lower_margin=float(np.min(lower_margin)),
        n_violations=violations, grid=grid)


@dataclass(frozen=True)
class PsiRow:
    alpha: float
    psi: float
    stderr: float
    n_draws: int


def psi_curve(alphas: Sequence[float], n_draws: int, master_seed: int):
    """Monte Carlo estimate of psi(alpha) = E[log(r*Ghat/h)] on a grid.

    psi depends only on alpha = h*r; the factorization h = alpha, r = 1 is
    used, so Ghat ~ I(alpha, alpha^2) and psi_hat = mean(log(Ghat/alpha)).
    """
    rows = []
    for i, alpha in enumerate(alphas):
        if not alpha > 0:
            raise ValueError(f"alpha must be > 0, got {alpha}")
        draws = inverse_gaussian_block(
            master_seed, i, n_draws, InverseGaussianParams(alpha, alpha * alpha))
        logs = np.log(draws / alpha)
        mean, se = _mean_stderr(logs)
        rows.append(PsiRow(float(alpha), mean, se, n_draws))
    return rows

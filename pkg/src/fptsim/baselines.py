"""Stopped Euler schemes for the mean-reverting hitting problem, used as
bias baselines for the exact samplers.

Three variants on a fixed grid of step dt over [0, K]:

  plain    stop at the first grid time with X >= phi;
  bridge   additionally declare a within-cell crossing with probability
           exp(-2*gap_k*gap_{k+1}/dt) (boundary frozen linearly, unit
           diffusion), reported at the cell midpoint;
  shifted  stop at the first grid time with X >= phi - 0.5826*sqrt(dt),
           the continuity-correction constant -zeta(1/2)/sqrt(2*pi).

Plain has bias of order sqrt(dt); both corrections are order dt.
"""

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from fptsim import boundary as bnd
from fptsim.rng import RngStream
from fptsim.transforms import OuProblem
from fptsim.types import EXIT_BRIDGE, EXIT_HIT, EXIT_HORIZON, HitSample, MeanEstimate

SHIFT_CONSTANT = 0.5826

VARIANTS = ("plain", "bridge", "shifted")


@dataclass(frozen=True)
class EulerConfig:
    dt: float
    horizon_K: float
    variant: str

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if self.dt > self.horizon_K:
            raise ValueError(f"dt={self.dt} exceeds horizon {self.horizon_K}")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")


def variant_shift_bridge(variant: str, dt: float):
    """(barrier shift, bridge flag) for an Euler variant."""
    if variant == "plain":
        return 0.0, False
    if variant == "bridge":
        return 0.0, True
    return SHIFT_CONSTANT * math.sqrt(dt), False


def _cosine_boundary(p: OuProblem) -> bnd.Boundary:
    return bnd.cosine(p.alpha, p.beta, p.omega)


def euler_hit(p: OuProblem, cfg: EulerConfig, stream: RngStream,
              shift: float = None) -> HitSample:
    """One stopped-Euler passage sample for the OU problem.

    X_{k+1} = X_k - lam*X_k*dt + sqrt(dt)*G on [0, K]; a final partial step
    lands exactly on K when dt does not divide it. ``shift`` overrides the
    variant's barrier shift (shift 0 makes "shifted" coincide with "plain"
    draw for draw).
    """
    b = _cosine_boundary(p)
    if shift is None:
        shift, bridge = variant_shift_bridge(cfg.variant, cfg.dt)
    else:
        bridge = cfg.variant == "bridge"
    lam, x0, dt, horizon = p.lam, p.x0, cfg.dt, cfg.horizon_K

    x = x0
    k = 0
    if x >= bnd.value(b, 0.0) - shift:
        return HitSample(tau=0.0, steps=0, truncated=False, exit_reason=EXIT_HIT)
    while True:
        t = k * dt
        if t >= horizon:
            return HitSample(tau=horizon, steps=k, truncated=True,
                             exit_reason=EXIT_HORIZON)
        tn = (k + 1) * dt
        if tn > horizon:
            tn = horizon
        h = tn - t
        g = stream.gaussian()
        xn = x - lam * x * h + math.sqrt(h) * g
        fn = bnd.value(b, tn)
        k += 1
        if xn >= fn - shift:
            return HitSample(tau=tn, steps=k, truncated=False, exit_reason=EXIT_HIT)
        if bridge:
            gap0 = bnd.value(b, t) - x
            gap1 = fn - xn
            u = stream.uniform()
            if u <= math.exp(-2.0 * gap0 * gap1 / h):
                return HitSample(tau=t + 0.5 * h, steps=k, truncated=False,
                                 exit_reason=EXIT_BRIDGE)
        x = xn


@dataclass(frozen=True)
class BiasRow:
    variant: str
    dt: float
    mean_tau: float
    bias: float
    stderr: float


@dataclass(frozen=True)
class BiasTable:
    rows: tuple
    slopes: dict  # variant -> least-squares slope of log|bias| vs log dt
    reference: MeanEstimate


def ou_reference_mean(p: OuProblem, epsilon: float, n_trials: int,
                      master_seed: int, workers: int = 1) -> MeanEstimate:
    """Mean capped passage time from the exact pipeline, used as the truth
    proxy for Euler bias measurements."""
    from fptsim import harness

    cfg = harness.ExperimentConfig(
        boundary=f"ou:alpha={p.alpha!r},beta={p.beta!r},omega={p.omega!r},"
                 f"lambda={p.lam!r},x0={p.x0!r}",
        algorithm="ou", epsilon=epsilon, horizon=p.horizon_K,
        n_trials=n_trials, master_seed=master_seed)
    summary = harness.run_monte_carlo(cfg, workers=workers)
    return MeanEstimate(summary.mean_tau, summary.stderr_tau)


def bias_experiment(p: OuProblem, dts: Sequence[float], n_trials: int,
                    reference: MeanEstimate, master_seed: int,
                    variants: Iterable[str] = VARIANTS,
                    workers: int = 1) -> BiasTable:
    """Euler bias table against an exact-pipeline reference.

    One row per (variant, dt) with the estimated mean, its bias versus the
    reference, and the combined standard error; per-variant least-squares
    slopes of log|bias| against log dt. dts should be decreasing.
    """
    from fptsim import harness

    dts = [float(d) for d in dts]
    if any(b >= a for a, b in zip(dts, dts[1:])):
        raise ValueError("dts must be strictly decreasing")
    rows = []
    cell = 0
    for variant in variants:
        for dt in dts:
            cell += 1
            cfg = harness.ExperimentConfig(
                boundary=f"ou:alpha={p.alpha!r},beta={p.beta!r},"
                         f"omega={p.omega!r},lambda={p.lam!r},x0={p.x0!r}",
                algorithm=f"euler-{variant}", dt=dt, horizon=p.horizon_K,
                n_trials=n_trials, master_seed=master_seed + cell)
            summary = harness.run_monte_carlo(cfg, workers=workers)
            stderr = math.sqrt(summary.stderr_tau ** 2 + reference.stderr ** 2)
            rows.append(BiasRow(variant=variant, dt=dt,
                                mean_tau=summary.mean_tau,
                                bias=summary.mean_tau - reference.value,
                                stderr=stderr))
    slopes = {}
    for variant in variants:
        pts = [(r.dt, abs(r.bias)) for r in rows if r.variant == variant]
        logd = np.log([d for d, _ in pts])
        logb = np.log([max(b, 1e-300) for _, b in pts])
        slopes[variant] = float(np.polyfit(logd, logb, 1)[0]) if len(pts) > 1 else float("nan")
    return BiasTable(rows=tuple(rows), slopes=slopes, reference=reference)

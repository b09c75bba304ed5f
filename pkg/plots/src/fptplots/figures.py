"""Deterministic figure rendering for the fptsim CSV schemas.

Styles are pinned and outputs carry no timestamps or random ids, so a
re-render of the same input is byte-identical (SVG and PNG).
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from fptplots.io import read_schema  # noqa: E402

matplotlib.rcParams["svg.hashsalt"] = "fptplots"
matplotlib.rcParams["svg.fonttype"] = "none"  # searchable, deterministic text

KINDS = ("steps_vs_n", "steps_vs_K", "tau_histogram", "cdf", "psi_curve",
         "bias_loglog")

_VARIANT_COLORS = {"plain": "tab:blue", "bridge": "tab:orange",
                   "shifted": "tab:green"}


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    input_csv: str
    output_path: str
    title: Optional[str] = None
    xlabel: Optional[str] = None
    ylabel: Optional[str] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; "
                             f"expected one of {KINDS}")


def render(spec: FigureSpec) -> str:
    """Render one figure; returns the output path."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2), dpi=100)
    try:
        _RENDERERS[spec.kind](ax, spec)
        if spec.title:
            ax.set_title(spec.title)
        if spec.xlabel:
            ax.set_xlabel(spec.xlabel)
        if spec.ylabel:
            ax.set_ylabel(spec.ylabel)
        fig.tight_layout()
        fig.savefig(spec.output_path, metadata=_clean_metadata(spec.output_path))
    finally:
        plt.close(fig)
    return spec.output_path


def _clean_metadata(path):
    # deterministic output: no creation date in SVG/PNG text chunks
    if path.endswith(".svg"):
        return {"Date": None}
    if path.endswith(".png"):
        return {"Software": "fptplots"}
    return None


def _errorbar_curve(ax, x, y, err, xlabel, ylabel):
    ax.errorbar(x, y, yerr=err, fmt="o-", capsize=3, color="tab:blue")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)


def _steps_vs_n(ax, spec):
    t = read_schema(spec.input_csv, "sweep_n")
    order = np.argsort(t["n"])
    _errorbar_curve(ax, np.array(t["n"])[order],
                    np.array(t["mean_steps"])[order],
                    np.array(t["stderr"])[order],
                    "n  (epsilon = 0.5^n)", "mean steps")


def _steps_vs_K(ax, spec):
    t = read_schema(spec.input_csv, "sweep_K")
    order = np.argsort(t["K"])
    _errorbar_curve(ax, np.array(t["K"])[order],
                    np.array(t["mean_steps"])[order],
                    np.array(t["stderr"])[order],
                    "truncation horizon K", "mean steps")


def _freedman_diaconis_bins(x):
    n = len(x)
    if n < 2:
        return 1
    q75, q25 = np.percentile(x, [75, 25])
    width = 2.0 * (q75 - q25) / n ** (1.0 / 3.0)
    if width <= 0:
        return 1
    return max(1, int(math.ceil((x.max() - x.min()) / width)))


def _tau_histogram(ax, spec):
    t = read_schema(spec.input_csv, "samples")
    tau = np.array(t["tau"])
    truncated = np.array(t["truncated"]) != 0
    body = tau[~truncated]
    n = len(tau)
    if len(body):
        bins = _freedman_diaconis_bins(body)
        weights = np.full(len(body), 1.0 / n)
        ax.hist(body, bins=bins, weights=weights, color="tab:blue",
                label="passage times")
    if truncated.any():
        # truncated runs pile up at the horizon: draw them apart
        k = float(tau[truncated][0])
        width = (body.max() - body.min()) / 50.0 if len(body) > 1 else 0.1
        ax.bar([k], [truncated.mean()], width=width, color="tab:red",
               hatch="//", label="truncated at K")
    ax.set_xlabel("tau")
    ax.set_ylabel("fraction of trials")
    ax.legend()


def _cdf(ax, spec):
    t = read_schema(spec.input_csv, "samples")
    tau = np.sort(np.array(t["tau"]))
    f = np.arange(1, len(tau) + 1) / len(tau)
    ax.step(tau, f, where="post", color="tab:blue")
    ax.set_xlabel("t")
    ax.set_ylabel("empirical CDF")
    ax.set_ylim(0.0, 1.05)
    ax.grid(True, alpha=0.3)


def _psi_curve(ax, spec):
    t = read_schema(spec.input_csv, "psi")
    order = np.argsort(t["alpha"])
    ax.errorbar(np.array(t["alpha"])[order], np.array(t["psi"])[order],
                yerr=np.array(t["stderr"])[order], fmt="o-", capsize=3,
                color="tab:blue")
    ax.set_xscale("log")
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.set_xlabel("alpha")
    ax.set_ylabel("psi(alpha)")
    ax.grid(True, alpha=0.3)


def _bias_loglog(ax, spec):
    t = read_schema(spec.input_csv, "bench")
    variants = []
    for v in t["variant"]:
        if v not in variants:
            variants.append(v)
    for i, v in enumerate(variants):
        idx = [j for j, name in enumerate(t["variant"]) if name == v]
        dt = np.array([t["dt"][j] for j in idx])
        bias = np.abs([t["bias"][j] for j in idx])
        err = np.array([t["stderr"][j] for j in idx])
        slope = t["slope"][idx[0]]
        color = _VARIANT_COLORS.get(v, f"C{i}")
        order = np.argsort(dt)
        ax.errorbar(dt[order], bias[order], yerr=err[order], fmt="o-",
                    capsize=3, color=color,
                    label=f"{v}: slope={slope:.3f}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("dt")
    ax.set_ylabel("|bias|")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()


_RENDERERS = {
    "steps_vs_n": _steps_vs_n,
    "steps_vs_K": _steps_vs_K,
    "tau_histogram": _tau_histogram,
    "cdf": _cdf,
    "psi_curve": _psi_curve,
    "bias_loglog": _bias_loglog,
}

"""Command-line entry point.

Subcommands: simulate (per-trial CSV), sweep (step-count tables and the
psi curve), check (machine-readable pass/fail report), bench (Euler bias
table), replay (re-run any command from its manifest).

Every output CSV starts with a comment line naming the JSON manifest that
produced it; a manifest holds the fully resolved settings, so any output is
reproducible from the manifest alone. Exit codes: 0 success, 1 runtime
error, 2 configuration error, 3 hypothesis-gate refusal.
"""

import argparse
import datetime
import json
import math
import os
import sys
from importlib.metadata import version as _pkg_version

import numpy as np

from fptsim import algo1 as _algo1
from fptsim import boundary as bnd
from fptsim import harness
from fptsim.baselines import VARIANTS, BiasTable, bias_experiment, ou_reference_mean
from fptsim.errors import FptsimError
from fptsim.presets import PRESETS
from fptsim.rng import RngStream
from fptsim.transforms import OuProblem

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2
EXIT_GATE = 3

DEFAULT_SEED = 20220907
DEFAULT_CHECK_TRIALS = 20000
DEFAULT_CHECK_DRAWS = 50000

# settings that identify a run; everything here lands in the manifest
_SETTING_KEYS = (
    "boundary", "algo", "epsilon", "horizon", "slope-r", "trials", "seed",
    "dt", "kind", "exponents", "horizons", "alphas", "draws", "dts",
    "ref-epsilon", "ref-trials", "force",
)


class ConfigError(Exception):
    pass


def _fmt(x) -> str:
    """Full-precision decimal formatting (shortest round-trip)."""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _parse_config_file(path: str) -> dict:
    settings = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, val = line.partition("=")
            if not sep:
                raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
            settings[key.strip()] = val.strip()
    return settings


def resolve_settings(args, command: str) -> dict:
    """flags > config file > preset > FPT_SEED env > defaults."""
    settings = {"seed": str(DEFAULT_SEED), "force": "0"}
    env_seed = os.environ.get("FPT_SEED")
    if env_seed is not None:
        settings["seed"] = env_seed
    preset = getattr(args, "preset", None)
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(
                f"unknown preset {preset!r}; available: {', '.join(sorted(PRESETS))}")
        settings.update(PRESETS[preset])
    config_path = getattr(args, "config", None)
    if config_path is not None:
        settings.update(_parse_config_file(config_path))
    for key in _SETTING_KEYS:
        attr = key.replace("-", "_")
        val = getattr(args, attr, None)
        if val is not None and val is not False:
            settings[key] = _fmt(val) if not isinstance(val, str) else val
    settings["command"] = command
    return settings


def _need(settings: dict, key: str) -> str:
    if key not in settings:
        raise ConfigError(f"missing required setting {key!r} "
                          "(flag, config file or preset)")
    return settings[key]


def _float(settings, key, required=True, default=None):
    if key not in settings:
        if required:
            raise ConfigError(f"missing required setting {key!r}")
        return default
    try:
        return float(settings[key])
    except ValueError:
        raise ConfigError(f"setting {key}={settings[key]!r} is not a number") from None


def _int(settings, key, required=True, default=None):
    if key not in settings:
        if required:
            raise ConfigError(f"missing required setting {key!r}")
        return default
    try:
        return int(settings[key])
    except ValueError:
        raise ConfigError(f"setting {key}={settings[key]!r} is not an integer") from None


def _float_list(settings, key):
    raw = _need(settings, key)
    try:
        return [float(tok) for tok in raw.split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"setting {key}={raw!r} is not a comma-separated "
                          "list of numbers") from None


def _exponents(settings, key="exponents"):
    raw = _need(settings, key)
    if ":" in raw:
        lo, _, hi = raw.partition(":")
        try:
            return list(range(int(lo), int(hi) + 1))
        except ValueError:
            raise ConfigError(f"bad exponent range {raw!r}") from None
    try:
        return [int(tok) for tok in raw.split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"bad exponent list {raw!r}") from None


def _write_manifest(out_path: str, settings: dict, started, finished) -> str:
    manifest_path = out_path + ".manifest.json"
    doc = {
        "tool": "fptsim",
        "version": _pkg_version("fptsim"),
        "command": settings["command"],
        "config": {k: v for k, v in sorted(settings.items()) if k != "command"},
        "master_seed": int(settings["seed"]),
        "started_utc": started.isoformat(),
        "finished_utc": finished.isoformat(),
        "outputs": [os.path.basename(out_path)],
    }
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest_path


def _write_csv(out_path: str, header, rows) -> None:
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# manifest: {os.path.basename(out_path)}.manifest.json\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _gate_algo1(settings, boundary_spec: str) -> None:
    """algo1 refuses boundaries failing H2/H3 unless force is set."""
    b = bnd.parse_boundary(boundary_spec)
    horizon = _float(settings, "horizon", required=False, default=None)
    grid_horizon = 10.0 * max(1.0, horizon if horizon is not None else 1.0)
    report = bnd.check_hypotheses(b, grid_horizon=grid_horizon)
    failures = {h: v for h, v in
                (("h2", report.h2), ("h3", report.h3)) if v == bnd.FAIL}
    if not failures:
        return
    details = "; ".join(
        f"{h} fails at t={report.witnesses[h][0]!r} "
        f"(quantity {report.witnesses[h][1]!r})" for h in failures)
    if settings.get("force", "0") not in ("0", ""):
        print(f"warning: hypothesis gate bypassed with force: {details}",
              file=sys.stderr)
        return
    raise GateRefusal(f"boundary fails algo1 hypotheses: {details} "
                      "(use --force to run anyway)")


class GateRefusal(Exception):
    pass


def _experiment_config(settings) -> harness.ExperimentConfig:
    algo = _need(settings, "algo")
    return harness.ExperimentConfig(
        boundary=_need(settings, "boundary"),
        algorithm=algo,
        n_trials=_int(settings, "trials"),
        master_seed=_int(settings, "seed"),
        epsilon=_float(settings, "epsilon", required=False),
        horizon=_float(settings, "horizon", required=False),
        slope_r=_float(settings, "slope-r", required=False),
        dt=_float(settings, "dt", required=False),
    )


def cmd_simulate(args) -> int:
    settings = resolve_settings(args, "simulate")
    algo = _need(settings, "algo")
    if algo == "algo1":
        _gate_algo1(settings, _need(settings, "boundary"))
    cfg = _experiment_config(settings)
    started = datetime.datetime.now(datetime.timezone.utc)
    results = harness.run_trials(cfg, workers=args.workers)
    summary = harness.summarize(cfg, results)
    rows = (
        (str(i), _fmt(results.tau[i]), str(int(results.steps[i])),
         _fmt(bool(results.truncated[i])), results.exit_reason(i))
        for i in range(cfg.n_trials))
    _write_csv(args.out, ("trial", "tau", "steps", "truncated", "exit_reason"), rows)
    finished = datetime.datetime.now(datetime.timezone.utc)
    manifest = _write_manifest(args.out, settings, started, finished)
    print(f"n_trials={summary.n_trials} "
          f"mean_tau={summary.mean_tau:.6g}±{summary.stderr_tau:.2g} "
          f"mean_steps={summary.mean_steps:.6g}±{summary.stderr_steps:.2g} "
          f"truncation_rate={summary.truncation_rate:.4g}")
    print(f"wrote {args.out} (manifest {manifest})")
    return EXIT_OK


def cmd_sweep(args) -> int:
    settings = resolve_settings(args, "sweep")
    kind = settings.get("kind", "epsilon")
    started = datetime.datetime.now(datetime.timezone.utc)
    if kind == "psi":
        alphas = _float_list(settings, "alphas")
        draws = _int(settings, "draws")
        rows = harness.psi_curve(alphas, draws, _int(settings, "seed"))
        _write_csv(args.out, ("alpha", "psi", "stderr", "n_draws"),
                   ((_fmt(r.alpha), _fmt(r.psi), _fmt(r.stderr), str(r.n_draws))
                    for r in rows))
    elif kind == "epsilon":
        if _need(settings, "algo") == "algo1":
            _gate_algo1(settings, _need(settings, "boundary"))
        cfg = _experiment_config(settings)
        rows = harness.steps_vs_epsilon(cfg, _exponents(settings),
                                        workers=args.workers)
        _write_csv(args.out, ("n", "epsilon", "mean_steps", "stderr", "n_trials"),
                   ((str(int(r.x)), _fmt(r.epsilon), _fmt(r.mean_steps),
                     _fmt(r.stderr), str(r.n_trials)) for r in rows))
    elif kind == "horizon":
        cfg = _experiment_config(settings)
        horizons = _float_list(settings, "horizons")
        rows = harness.steps_vs_horizon(cfg, horizons, workers=args.workers)
        _write_csv(args.out, ("K", "epsilon", "mean_steps", "stderr", "n_trials"),
                   ((_fmt(r.x), _fmt(r.epsilon), _fmt(r.mean_steps),
                     _fmt(r.stderr), str(r.n_trials)) for r in rows))
    else:
        raise ConfigError(f"unknown sweep kind {kind!r} "
                          "(expected epsilon, horizon or psi)")
    finished = datetime.datetime.now(datetime.timezone.utc)
    manifest = _write_manifest(args.out, settings, started, finished)
    print(f"wrote {args.out} ({len(rows)} rows; manifest {manifest})")
    return EXIT_OK


def _check_rows(settings, workers: int):
    """The health-check suite: hypothesis checkers, sandwich bounds, the
    psi-curve bounds and the step-drift constant."""
    seed = _int(settings, "seed")
    trials = _int(settings, "trials", required=False,
                  default=DEFAULT_CHECK_TRIALS)
    draws = _int(settings, "draws", required=False, default=DEFAULT_CHECK_DRAWS)
    checks = []

    def add(name, ok, margin, witness=None):
        checks.append({"check_name": name, "pass": bool(ok),
                       "margin": float(margin), "witness": witness})

    rep = bnd.check_hypotheses(bnd.sqrt_boundary(1.0))
    add("hypotheses:sqrt-alpha-1-usable",
        rep.h1 == rep.h2 == rep.h3 == bnd.PASS, 0.0)
    rep = bnd.check_hypotheses(bnd.sqrt_boundary(1.5))
    ok = rep.h3 == bnd.FAIL and rep.witnesses["h3"][0] == 0.0
    add("hypotheses:sqrt-alpha-1.5-h3-detected", ok,
        rep.witnesses.get("h3", (0, 0))[1] - 1.0,
        {"t": rep.witnesses["h3"][0]} if "h3" in rep.witnesses else None)
    rep = bnd.check_hypotheses(bnd.cosine(3.5, 3.0, math.pi / 2.0))
    add("hypotheses:cosine-nonmonotone-detected",
        rep.h2 == bnd.FAIL and rep.h4 == bnd.PASS, 0.0,
        {"t": rep.witnesses["h2"][0]} if "h2" in rep.witnesses else None)

    sw = harness.sandwich_check(
        harness.ExperimentConfig(boundary="sqrt:alpha=1", algorithm="algo1",
                                 n_trials=trials, master_seed=seed,
                                 epsilon=2.0 ** -6),
        eps_coarse=2.0 ** -6, eps_fine=2.0 ** -14, workers=workers)
    add("sandwich:algo1-sqrt-1", sw.passed,
        min(sw.worst_upper_margin, sw.worst_lower_margin))
    sw = harness.sandwich_check(
        harness.ExperimentConfig(
            boundary="cosine:alpha=3.5,beta=3,omega=1.5707963267948966",
            algorithm="algo2", n_trials=trials, master_seed=seed,
            epsilon=2.0 ** -6, horizon=20.0),
        eps_coarse=2.0 ** -6, eps_fine=2.0 ** -10, workers=workers)
    add("sandwich:algo2-cosine-K20", sw.passed,
        min(sw.worst_upper_margin, sw.worst_lower_margin))

    alphas = [0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0]
    rows = harness.psi_curve(alphas, draws, seed)
    worst = min(-r.psi for r in rows)
    add("psi:negative-on-grid", all(r.psi < 0 for r in rows), worst)
    margins = [-0.0241 * min(1.0 / r.alpha, 1.0) + 3.0 * r.stderr - r.psi
               for r in rows]
    add("psi:upper-bound-c-0.0241", all(m >= 0 for m in margins), min(margins),
        {"alpha": alphas[int(np.argmin(margins))]})
    r05 = next(r for r in rows if r.alpha == 0.5)
    add("psi:alpha-0.5-below--0.0241", r05.psi <= -0.0241 + 3.0 * r05.stderr,
        -0.0241 + 3.0 * r05.stderr - r05.psi)

    est = _algo1.estimate_m(max(draws, 1000), RngStream(seed, 900))
    tol = max(0.01, 4.0 * est.stderr)
    add("m:positive", est.value > 0, est.value)
    add("m:matches-log2-minus-gamma", abs(est.value - 0.11593151565841242) <= tol,
        tol - abs(est.value - 0.11593151565841242),
        {"estimate": est.value, "stderr": est.stderr})
    return checks


def cmd_check(args) -> int:
    settings = resolve_settings(args, "check")
    started = datetime.datetime.now(datetime.timezone.utc)
    checks = _check_rows(settings, args.workers)
    finished = datetime.datetime.now(datetime.timezone.utc)
    doc = {"checks": checks, "all_pass": all(c["pass"] for c in checks)}
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        _write_manifest(args.out, settings, started, finished)
    sys.stdout.write(text)
    return EXIT_OK if doc["all_pass"] else EXIT_RUNTIME


def cmd_bench(args) -> int:
    settings = resolve_settings(args, "bench")
    boundary = bnd.parse_boundary(_need(settings, "boundary"))
    if boundary.family != "transformed":
        raise ConfigError("bench needs an 'ou:' boundary spec")
    alpha, beta, omega, lam, x0 = boundary.params
    problem = OuProblem(lam=lam, x0=x0, alpha=alpha, beta=beta, omega=omega,
                        horizon_K=_float(settings, "horizon"))
    dts = _float_list(settings, "dts")
    trials = _int(settings, "trials")
    seed = _int(settings, "seed")
    started = datetime.datetime.now(datetime.timezone.utc)
    reference = ou_reference_mean(
        problem, epsilon=_float(settings, "ref-epsilon"),
        n_trials=_int(settings, "ref-trials"), master_seed=seed,
        workers=args.workers)
    table = bias_experiment(problem, dts, trials, reference, seed,
                            workers=args.workers)
    rows = [(r.variant, _fmt(r.dt), _fmt(r.mean_tau), _fmt(r.bias),
             _fmt(r.stderr), _fmt(table.slopes[r.variant]))
            for r in table.rows]
    _write_csv(args.out, ("variant", "dt", "mean_tau", "bias", "stderr", "slope"),
               rows)
    finished = datetime.datetime.now(datetime.timezone.utc)
    manifest = _write_manifest(args.out, settings, started, finished)
    print(f"reference mean_tau={reference.value:.6g}±{reference.stderr:.2g}")
    for v in VARIANTS:
        if v in table.slopes:
            print(f"slope[{v}] = {table.slopes[v]:.3f}")
    print(f"wrote {args.out} (manifest {manifest})")
    return EXIT_OK


def cmd_replay(args) -> int:
    with open(args.manifest, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    command = doc["command"]
    settings = dict(doc["config"])
    out = args.out
    if out is None:
        out = os.path.join(os.path.dirname(os.path.abspath(args.manifest)),
                           doc["outputs"][0])
    sub_args = argparse.Namespace(
        workers=args.workers, out=out, preset=None, config=None,
        **{k.replace("-", "_"): None for k in _SETTING_KEYS})
    for key, val in settings.items():
        setattr(sub_args, key.replace("-", "_"), val)
    handler = {"simulate": cmd_simulate, "sweep": cmd_sweep,
               "check": cmd_check, "bench": cmd_bench}.get(command)
    if handler is None:
        raise ConfigError(f"manifest names unknown command {command!r}")
    return handler(sub_args)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fptsim",
        description="First-passage-time simulation for curved boundaries")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out_default):
        p.add_argument("--preset", help="named preset (see fptsim.presets)")
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--boundary", help="boundary spec, e.g. sqrt:alpha=1")
        p.add_argument("--algo", help="algo1|algo2|ou|euler-plain|euler-bridge|euler-shifted")
        p.add_argument("--epsilon", type=float)
        p.add_argument("--horizon", type=float, help="truncation horizon K")
        p.add_argument("--slope-r", type=float, dest="slope_r",
                       help="tilt slope r (default: rho_minus + 0.5)")
        p.add_argument("--trials", type=int)
        p.add_argument("--seed", type=int, help="master seed (env FPT_SEED "
                       "overrides the built-in default)")
        p.add_argument("--dt", type=float, help="Euler step")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--force", action="store_true", default=False,
                       help="bypass the hypothesis gate, loudly")
        p.add_argument("--out", default=out_default, help="output path")

    p = sub.add_parser("simulate", help="per-trial samples CSV")
    common(p, "samples.csv")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("sweep", help="step-count tables / psi curve CSV")
    common(p, "sweep.csv")
    p.add_argument("--kind", choices=("epsilon", "horizon", "psi"))
    p.add_argument("--exponents", help="epsilon exponents, e.g. 1:10 or 1,2,3")
    p.add_argument("--horizons", help="comma-separated K values")
    p.add_argument("--alphas", help="comma-separated psi-curve grid")
    p.add_argument("--draws", type=int, help="draws per psi-curve point")
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("check", help="machine-readable pass/fail report")
    common(p, None)
    p.add_argument("--draws", type=int, help="draws for the psi/m checks")
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("bench", help="Euler bias table vs exact reference")
    common(p, "bench.csv")
    p.add_argument("--dts", help="comma-separated Euler steps, decreasing")
    p.add_argument("--ref-epsilon", type=float, dest="ref_epsilon")
    p.add_argument("--ref-trials", type=int, dest="ref_trials")
    p.set_defaults(handler=cmd_bench)

    p = sub.add_parser("replay", help="re-run a command from its manifest")
    p.add_argument("manifest")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_replay)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except GateRefusal as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GATE
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FptsimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())

"""Fixtures: preset CSVs produced through the fptsim CLI, the only interface
this package consumes."""

import subprocess
import sys

import pytest


def fptsim(*args):
    r = subprocess.run([sys.executable, "-m", "fptsim.cli", *args],
                       capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    return r


@pytest.fixture(scope="session")
def preset_csvs(tmp_path_factory):
    root = tmp_path_factory.mktemp("csv")
    samples = root / "samples.csv"
    fptsim("simulate", "--preset", "ou-figure", "--trials", "3000",
           "--epsilon", "0.03125", "--seed", "5", "--out", str(samples))
    sweep_n = root / "sweep_n.csv"
    fptsim("sweep", "--preset", "sqrt-1", "--trials", "300", "--seed", "5",
           "--exponents", "1:6", "--out", str(sweep_n))
    sweep_k = root / "sweep_K.csv"
    fptsim("sweep", "--kind", "horizon", "--algo", "algo2",
           "--boundary", "cosine:alpha=3.5,beta=3,omega=1.5707963",
           "--epsilon", "0.03125", "--horizons", "5,10,20",
           "--trials", "300", "--seed", "5", "--out", str(sweep_k))
    psi = root / "psi.csv"
    fptsim("sweep", "--preset", "psi-curve", "--draws", "2000", "--seed", "5",
           "--out", str(psi))
    bench = root / "bench.csv"
    fptsim("bench", "--boundary", "ou:alpha=1,beta=0,omega=1,lambda=0,x0=0",
           "--horizon", "10", "--dts", "0.5,0.25", "--trials", "1500",
           "--ref-epsilon", "6.103515625e-05", "--ref-trials", "10000",
           "--seed", "6", "--out", str(bench))
    return {"samples": samples, "sweep_n": sweep_n, "sweep_K": sweep_k,
            "psi": psi, "bench": bench}

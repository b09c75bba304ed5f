"""Named experiment presets for the shipped boundary families.

Values are flat key=value settings, the same namespace as CLI flags and
config files; precedence is flags > config file > preset > FPT_SEED > defaults.
"""

_OU_TEXT = "ou:alpha=2,beta=1,omega=0.6283185307179586,lambda=0.5,x0=0"
_OU_FIGURE = "ou:alpha=2,beta=1,omega=6.283185307179586,lambda=0.5,x0=0"
_COSINE = "cosine:alpha=3.5,beta=3,omega=1.5707963267948966"

PRESETS = {
    "sqrt-1": {
        "boundary": "sqrt:alpha=1", "algo": "algo1",
        "epsilon": "0.0009765625", "trials": "10000", "exponents": "1:10",
        "kind": "epsilon",
    },
    "sqrt-0.01": {
        "boundary": "sqrt:alpha=0.01", "algo": "algo1",
        "epsilon": "0.0009765625", "trials": "10000", "exponents": "1:10",
        "kind": "epsilon",
    },
    "cosine-K20": {
        "boundary": _COSINE, "algo": "algo2", "horizon": "20",
        "epsilon": "0.0009765625", "trials": "10000", "exponents": "1:10",
        "kind": "epsilon",
    },
    "cosine-K100": {
        "boundary": _COSINE, "algo": "algo2", "horizon": "100",
        "epsilon": "0.0009765625", "trials": "10000", "exponents": "1:10",
        "kind": "epsilon",
    },
    "ou-text": {
        "boundary": _OU_TEXT, "algo": "ou", "horizon": "5",
        "epsilon": "0.0009765625", "trials": "10000", "exponents": "1:10",
        "kind": "epsilon",
    },
    "ou-figure": {
        "boundary": _OU_FIGURE, "algo": "ou", "horizon": "5",
        "epsilon": "0.0009765625", "trials": "10000", "exponents": "1:10",
        "kind": "epsilon",
    },
    "psi-curve": {
        "kind": "psi", "alphas": "0.1,0.2,0.5,1,2,5,10,20,50,100",
        "draws": "100000",
    },
    "euler-bias": {
        "boundary": _OU_FIGURE, "horizon": "5",
        "dts": "0.2,0.1,0.05,0.02,0.01", "trials": "1000000",
        "ref-epsilon": "9.5367431640625e-07", "ref-trials": "4000000",
    },
}

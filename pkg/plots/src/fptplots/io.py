"""CSV readers for the fptsim output schemas.

Files may start with '#' comment lines (the manifest reference); the first
non-comment line is the header. A missing column raises SchemaError naming
it. Readers never write anything back.
"""

import csv


class SchemaError(Exception):
    def __init__(self, path, missing):
        self.missing = missing
        super().__init__(f"{path}: missing required column {missing!r}")


def read_table(path, required, numeric):
    """Rows as a dict of lists: numeric columns parsed as float, the rest
    kept as strings."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.DictReader(lines)
    header = reader.fieldnames or []
    for col in required:
        if col not in header:
            raise SchemaError(path, col)
    out = {col: [] for col in required}
    for row in reader:
        for col in required:
            raw = row[col]
            out[col].append(float(raw) if col in numeric else raw)
    return out


SCHEMAS = {
    "samples": (("trial", "tau", "steps", "truncated", "exit_reason"),
                ("tau", "steps", "truncated")),
    "sweep_n": (("n", "epsilon", "mean_steps", "stderr", "n_trials"),
                ("n", "epsilon", "mean_steps", "stderr")),
    "sweep_K": (("K", "epsilon", "mean_steps", "stderr", "n_trials"),
                ("K", "epsilon", "mean_steps", "stderr")),
    "psi": (("alpha", "psi", "stderr", "n_draws"),
            ("alpha", "psi", "stderr")),
    "bench": (("variant", "dt", "mean_tau", "bias", "stderr", "slope"),
              ("dt", "mean_tau", "bias", "stderr", "slope")),
}


def read_schema(path, name):
    required, numeric = SCHEMAS[name]
    return read_table(path, required, numeric)

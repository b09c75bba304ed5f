"""Backend selection: compiled kernels when importable, pure Python otherwise.

Set FPTSIM_PURE_PYTHON=1 to force the fallback (useful for debugging and for
the kernel benchmark). Everything downstream imports ``kernels`` from here.
"""

import os

from fptsim import _kernels_py

if os.environ.get("FPTSIM_PURE_PYTHON", "") not in ("", "0"):
    kernels = _kernels_py
else:
    try:
        from fptsim import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        kernels = _kernels_py

BACKEND = kernels.BACKEND


def backend_name() -> str:
    """'compiled' or 'python', whichever is driving the batch loops."""
    return BACKEND

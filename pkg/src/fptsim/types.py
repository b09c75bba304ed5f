"""Shared result records."""

from dataclasses import dataclass
from typing import NamedTuple, Optional

EXIT_EPSILON = "epsilon"
EXIT_HORIZON = "horizon"
EXIT_HIT = "hit"
EXIT_BRIDGE = "bridge"


@dataclass(frozen=True)
class HitSample:
    """One simulated first-passage outcome.

    tau        simulated passage time (capped by the horizon if any)
    steps      iterations used; Euler samples may report 0 on an immediate hit
    truncated  True iff the run exited through the horizon with the stopping
               gap still open
    exit_reason  one of "epsilon" / "horizon" (iterative samplers) or
               "hit" / "bridge" / "horizon" (Euler schemes)
    trace      optional per-step diagnostics (see the producing module)
    """

    tau: float
    steps: int
    truncated: bool
    exit_reason: str
    trace: Optional[tuple] = None


class MeanEstimate(NamedTuple):
    """A Monte Carlo mean with its standard error."""

    value: float
    stderr: float

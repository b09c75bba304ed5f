"""Deterministic splittable random streams and the two variate samplers.

A stream is a pure function of (master_seed, stream_index): the n-th draw is
reproducible across runs, platforms and worker counts. Substreams for
Monte Carlo trials are derived with :func:`split_stream`; distinct indices
give statistically independent sequences (the initial counter is a strong
64-bit mix of seed and index).

Scalar draws run through the pure-Python kernels so that single-sample code
paths reproduce the batch kernels bit for bit; bulk generation should use the
``*_block`` helpers, which go through the selected backend.
"""

from dataclasses import dataclass, field

import numpy as np

from fptsim import _kernels_py as _k
from fptsim._dispatch import kernels as _batch


@dataclass
class RngStream:
    """Single-owner random stream; substreams may be used concurrently."""

    master_seed: int
    stream_index: int = 0
    _state: int = field(init=False, repr=False)

    def __post_init__(self):
        self._state = _k.stream_state(self.master_seed, self.stream_index)

    def uniform(self) -> float:
        u, self._state = _k.next_uniform(self._state)
        return u

    def gaussian(self) -> float:
        g, self._state = _k.next_gaussian(self._state)
        return g

    def gaussian_nonzero(self) -> float:
        g, self._state = _k.next_gaussian_nonzero(self._state)
        return g

    def inverse_gaussian(self, mu: float, lam: float) -> float:
        x, self._state = _k.next_inverse_gaussian(self._state, mu, lam)
        return x


@dataclass(frozen=True)
class InverseGaussianParams:
    """Parameters of I(mu, lam): mean mu > 0, shape lam > 0."""

    mu: float
    lam: float

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError(f"mu must be > 0, got {self.mu}")
        if not self.lam > 0:
            raise ValueError(f"lam must be > 0, got {self.lam}")


def sample_gaussian(stream: RngStream) -> float:
    """One standard normal variate; advances the stream."""
    return stream.gaussian()


def sample_inverse_gaussian(stream: RngStream, p: InverseGaussianParams) -> float:
    """One I(mu, lam) variate (Michael-Schucany-Haas); strictly positive."""
    return stream.inverse_gaussian(p.mu, p.lam)


def split_stream(stream: RngStream, trial_index: int) -> RngStream:
    """Independent substream, a pure function of (master_seed, trial_index).

    Splitting is single-level: children of the same master seed alias by
    index, so derive all per-trial substreams from one root.
    """
    if trial_index < 0:
        raise ValueError(f"trial_index must be >= 0, got {trial_index}")
    return RngStream(stream.master_seed, trial_index)


def uniform_block(master_seed: int, stream_index: int, n: int) -> np.ndarray:
    """First n uniforms of the given substream (backend batch path)."""
    return _batch.uniforms(master_seed, stream_index, n)


def gaussian_block(master_seed: int, stream_index: int, n: int) -> np.ndarray:
    """First n Gaussians of the given substream (backend batch path)."""
    return _batch.gaussians(master_seed, stream_index, n)


def inverse_gaussian_block(master_seed: int, stream_index: int, n: int,
                           p: InverseGaussianParams) -> np.ndarray:
    """First n I(mu, lam) draws of the given substream (backend batch path)."""
    return _batch.inverse_gaussians(master_seed, stream_index, n, p.mu, p.lam)

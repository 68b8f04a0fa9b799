"""Synchronous Gaussian multiple-access channel.

The received sequence is the symbol-wise sum of all users' signals plus
white Gaussian noise of variance n0/2 per real dimension.  Noise draws
are sub-seeded per frame index, so any frame can be regenerated
independently of execution order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class GmacChannel:
    """Channel parameters: one-sided noise level n0 and a master seed."""

    n0: float
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.n0 > 0:
            raise ValueError(f"n0 must be positive, got {self.n0}")

    def noise_rng(self, frame_index: int = 0) -> np.random.Generator:
        """Independent generator for one frame (or one batch of frames)."""
        return np.random.default_rng((self.seed, int(frame_index)))


def superimpose(signals) -> np.ndarray:
    """Sum the users' signal sequences sample by sample."""
    arrays = [np.asarray(s, dtype=np.float64) for s in signals]
    if not arrays:
        raise ValueError("need at least one signal")
    length = arrays[0].shape
    for a in arrays[1:]:
        if a.shape != length:
            raise ValueError(f"signal length mismatch: {a.shape} vs {length}")
    return np.sum(arrays, axis=0)


def add_awgn(r, chan: GmacChannel, frame_index: int = 0) -> np.ndarray:
    """Add Gaussian noise of variance n0/2; deterministic given (seed, frame)."""
    r = np.asarray(r, dtype=np.float64)
    rng = chan.noise_rng(frame_index)
    return r + rng.normal(0.0, np.sqrt(chan.n0 / 2.0), size=r.shape)

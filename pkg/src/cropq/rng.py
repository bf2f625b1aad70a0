"""Reproducible random-number streams.

Every stochastic component draws from an :class:`RngStream` identified by a
(seed, stream id) pair. Distinct ids give statistically independent
sequences (delegated to numpy's ``SeedSequence``), and recreating a stream
from the same pair replays the identical sequence. A stream is consumable
state: rebuild the object to replay from the start.
"""

from __future__ import annotations

import numpy as np


class RngStream:
    """A named, reproducible source of randomness.

    ``child(*path)`` derives further independent streams without consuming
    the parent, so one (seed, id) pair can fan out deterministically to
    per-purpose generators (weather, exploration, replay sampling, ...).
    """

    __slots__ = ("seed", "stream", "_path", "_gen")

    def __init__(self, seed: int, stream: int = 0, _path: tuple[int, ...] = ()):
        self.seed = int(seed)
        self.stream = int(stream)
        self._path = tuple(int(p) for p in _path)
        self._gen: np.random.Generator | None = None

    def generator(self) -> np.random.Generator:
        if self._gen is None:
            ss = np.random.SeedSequence(
                entropy=self.seed, spawn_key=(self.stream, *self._path)
            )
            self._gen = np.random.default_rng(ss)
        return self._gen

    def child(self, *path: int) -> "RngStream":
        return RngStream(self.seed, self.stream, self._path + tuple(path))

    def __repr__(self) -> str:  # pragma: no cover
        suffix = f", path={self._path}" if self._path else ""
        return f"RngStream(seed={self.seed}, stream={self.stream}{suffix})"


def as_generator(rng) -> np.random.Generator:
    """Accept either an RngStream or a bare numpy Generator."""
    if isinstance(rng, np.random.Generator):
        return rng
    return rng.generator()

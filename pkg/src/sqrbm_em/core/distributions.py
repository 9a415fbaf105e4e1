"""
Spin configurations and exact probability tables.

A visible configuration of N spins v = (v_1, ..., v_N) with v_k in {+1, -1} is
identified with the integer index whose bit k is 0 when v_k = +1 and 1 when
v_k = -1. Every distribution is a dense table of length 2^N in index order.
"""

from __future__ import annotations

import json
import math
from collections.abc import Sequence
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Any

import numpy as np
import structlog

from .errors import DivergenceInfiniteError, DomainError
from .utils.json_files import read_json_object

logger = structlog.get_logger(__name__)

MAX_SPINS = 24
NORMALIZATION_TOL = 1e-12


def _check_length(n: int) -> None:
    if not 1 <= n <= MAX_SPINS:
        raise DomainError(f"Number of spins must be in [1, {MAX_SPINS}], got {n}")


def encode_config(bits: Sequence[int]) -> int:
    """
    Encode a sequence of +/-1 spins as an integer index.

    Args:
        bits: Spins, each +1 or -1

    Returns:
        Index in [0, 2^N) with bit k set iff spin k is -1

    Raises:
        DomainError: If a spin is not +/-1 or the length is out of range
    """
    _check_length(len(bits))
    index = 0
    for position, spin in enumerate(bits):
        if spin == -1:
            index |= 1 << position
        elif spin != 1:
            raise DomainError(f"Invalid spin value {spin!r} at position {position}")
    return index


def decode_config(index: int, n: int) -> tuple[int, ...]:
    """Inverse of encode_config."""
    _check_length(n)
    if not 0 <= index < (1 << n):
        raise DomainError(f"Index {index} out of range for {n} spins")
    return tuple(-1 if (index >> k) & 1 else 1 for k in range(n))


@lru_cache(maxsize=32)
def _all_configs(n: int) -> np.ndarray:
    indices = np.arange(1 << n, dtype=np.int64)
    spins = np.empty((1 << n, n), dtype=np.int8)
    # one column at a time keeps the peak at 2^n int64 entries
    for i in range(n):
        spins[:, i] = 1 - 2 * ((indices >> i) & 1)
    spins.setflags(write=False)
    return spins


def all_configs(n: int) -> np.ndarray:
    """
    Enumerate every spin configuration.

    Returns:
        Read-only int8 array of shape (2^n, n); row v holds the spins of index v.
        Products with float arrays give float results.
    """
    _check_length(n)
    return _all_configs(n)


@dataclass(frozen=True)
class SpinConfig:
    """A visible spin configuration together with its index."""

    bits: tuple[int, ...]
    index: int

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> SpinConfig:
        return cls(bits=tuple(int(b) for b in bits), index=encode_config(bits))

    @classmethod
    def from_index(cls, index: int, n: int) -> SpinConfig:
        return cls(bits=decode_config(index, n), index=index)

    @property
    def n(self) -> int:
        return len(self.bits)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.bits, dtype=float)


@dataclass(frozen=True, eq=False)
class VisibleDistribution:
    """
    Exact probability table over all 2^N visible configurations.

    Attributes:
        n_visible: Number of visible spins N
        probs: Length-2^N array of non-negative probabilities in index order
    """

    n_visible: int
    probs: np.ndarray

    def __post_init__(self) -> None:
        _check_length(self.n_visible)
        probs = np.array(self.probs, dtype=np.float64)
        if probs.shape != (1 << self.n_visible,):
            raise DomainError(
                f"Expected {1 << self.n_visible} probabilities for N={self.n_visible}, "
                f"got shape {probs.shape}"
            )
        if not np.all(np.isfinite(probs)):
            raise DomainError("Probabilities must be finite")
        if np.any(probs < 0.0):
            raise DomainError(f"Negative probability at index {int(np.argmin(probs))}")
        total = math.fsum(probs)
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise DomainError(f"Probabilities sum to {total!r}, expected 1")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def from_weights(cls, n_visible: int, weights: Sequence[float] | np.ndarray) -> VisibleDistribution:
        """Normalise non-negative weights into a distribution."""
        w = np.asarray(weights, dtype=np.float64)
        total = math.fsum(w)
        if total <= 0.0:
            raise DomainError("Weights must have a positive sum")
        return cls(n_visible, w / total)

    @classmethod
    def uniform(cls, n_visible: int) -> VisibleDistribution:
        size = 1 << n_visible
        return cls(n_visible, np.full(size, 1.0 / size))

    @classmethod
    def point_mass(cls, n_visible: int, index: int) -> VisibleDistribution:
        probs = np.zeros(1 << n_visible)
        probs[index] = 1.0
        return cls(n_visible, probs)

    @property
    def support(self) -> np.ndarray:
        """Indices with non-zero probability."""
        return np.flatnonzero(self.probs > 0.0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VisibleDistribution):
            return NotImplemented
        return self.n_visible == other.n_visible and np.array_equal(self.probs, other.probs)

    def __hash__(self) -> int:
        return hash((self.n_visible, self.probs.tobytes()))

    def to_dict(self) -> dict[str, Any]:
        return {"n_visible": self.n_visible, "probs": [float(x) for x in self.probs]}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> VisibleDistribution:
        try:
            return cls(int(data["n_visible"]), np.asarray(data["probs"], dtype=np.float64))
        except KeyError as e:
            raise DomainError(f"Missing field in distribution data: {e}") from e

    def save(self, path: str | Path, extra: dict[str, Any] | None = None) -> None:
        """Write the distribution (plus optional extra blocks) as JSON."""
        payload = self.to_dict()
        if extra:
            payload.update(extra)
        Path(path).write_text(json.dumps(payload, indent=2), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> VisibleDistribution:
        return cls.from_dict(read_json_object(path, "Distribution file"))


def kl_divergence(p: VisibleDistribution, q: VisibleDistribution) -> float:
    """
    Classical Kullback-Leibler divergence sum_v p(v) (log p(v) - log q(v)).

    Uses 0 log 0 = 0.

    Raises:
        DomainError: If the distributions have different sizes
        DivergenceInfiniteError: If q(v) = 0 somewhere p(v) > 0
    """
    if p.n_visible != q.n_visible:
        raise DomainError(f"Size mismatch: N={p.n_visible} vs N={q.n_visible}")
    mask = p.probs > 0.0
    if np.any(q.probs[mask] <= 0.0):
        bad = int(np.flatnonzero(mask & (q.probs <= 0.0))[0])
        raise DivergenceInfiniteError(f"q vanishes at index {bad} where p > 0")
    pm = p.probs[mask]
    return float(np.sum(pm * (np.log(pm) - np.log(q.probs[mask]))))


def entropy(p: VisibleDistribution) -> float:
    """Shannon entropy in nats."""
    pm = p.probs[p.probs > 0.0]
    return float(-np.sum(pm * np.log(pm)))


def log_cosh(x: float | np.ndarray) -> float | np.ndarray:
    """Overflow-free log(cosh x) = |x| + log1p(exp(-2|x|)) - log 2."""
    a = np.abs(x)
    return a + np.log1p(np.exp(-2.0 * a)) - math.log(2.0)

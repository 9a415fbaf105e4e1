"""
Parameter containers for the semi-quantum RBM.

Params holds theta = (b_v, b_h, gamma, w); GradientVector has the same layout and
carries expectation values or gradients. Both flatten in the fixed order
b_v, b_h, gamma, w (row-major, visible-major), which is also the draw order used
for random initialisation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from ..core.errors import DomainError

BLOCKS = ("b_v", "b_h", "gamma", "w")


def _as_vector(values: Any, name: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 1:
        raise DomainError(f"{name} must be one-dimensional, got shape {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class _Blocks:
    b_v: np.ndarray
    b_h: np.ndarray
    gamma: np.ndarray
    w: np.ndarray

    def __post_init__(self) -> None:
        b_v = _as_vector(self.b_v, "b_v")
        b_h = _as_vector(self.b_h, "b_h")
        gamma = _as_vector(self.gamma, "gamma")
        w = np.array(self.w, dtype=np.float64)
        n, m = b_v.shape[0], b_h.shape[0]
        if n < 1:
            raise DomainError("At least one visible unit is required")
        if gamma.shape != (m,):
            raise DomainError(f"gamma must have length {m}, got {gamma.shape[0]}")
        if w.size == 0 and m == 0:
            w = w.reshape(n, 0)
        if w.shape != (n, m):
            raise DomainError(f"w must have shape ({n}, {m}), got {w.shape}")
        for name, arr in zip(BLOCKS, (b_v, b_h, gamma, w), strict=True):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n_visible(self) -> int:
        return int(self.b_v.shape[0])

    @property
    def n_hidden(self) -> int:
        return int(self.b_h.shape[0])

    @property
    def size(self) -> int:
        n, m = self.n_visible, self.n_hidden
        return n + 2 * m + n * m

    def flatten(self) -> np.ndarray:
        return np.concatenate([self.b_v, self.b_h, self.gamma, self.w.ravel()])

    @classmethod
    def from_flat(cls, n_visible: int, n_hidden: int, values: np.ndarray):
        values = np.asarray(values, dtype=np.float64)
        n, m = n_visible, n_hidden
        if values.shape != (n + 2 * m + n * m,):
            raise DomainError(f"Flat vector of length {values.shape} does not fit N={n}, M={m}")
        return cls(
            b_v=values[:n],
            b_h=values[n : n + m],
            gamma=values[n + m : n + 2 * m],
            w=values[n + 2 * m :].reshape(n, m),
        )

    @classmethod
    def zeros(cls, n_visible: int, n_hidden: int):
        return cls.from_flat(n_visible, n_hidden, np.zeros(n_visible + 2 * n_hidden + n_visible * n_hidden))

    def entry_names(self) -> list[str]:
        """Human-readable names in flatten() order."""
        names = [f"b_v[{i}]" for i in range(self.n_visible)]
        names += [f"b_h[{j}]" for j in range(self.n_hidden)]
        names += [f"gamma[{j}]" for j in range(self.n_hidden)]
        names += [f"w[{i}][{j}]" for i in range(self.n_visible) for j in range(self.n_hidden)]
        return names

    def same_shape(self, other: _Blocks) -> bool:
        return self.n_visible == other.n_visible and self.n_hidden == other.n_hidden

    def _check_shape(self, other: _Blocks) -> None:
        if not self.same_shape(other):
            raise DomainError(
                f"Shape mismatch: (N={self.n_visible}, M={self.n_hidden}) vs "
                f"(N={other.n_visible}, M={other.n_hidden})"
            )

    def __eq__(self, other: object) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self.same_shape(other) and np.array_equal(self.flatten(), other.flatten())

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.n_visible, self.n_hidden, self.flatten().tobytes()))

    def to_dict(self) -> dict[str, Any]:
        return {
            "n_visible": self.n_visible,
            "n_hidden": self.n_hidden,
            "b_v": [float(x) for x in self.b_v],
            "b_h": [float(x) for x in self.b_h],
            "gamma": [float(x) for x in self.gamma],
            "w": [[float(x) for x in row] for row in self.w],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]):
        try:
            n, m = int(data["n_visible"]), int(data["n_hidden"])
            return cls(
                b_v=data["b_v"],
                b_h=data["b_h"],
                gamma=data["gamma"],
                w=np.asarray(data["w"], dtype=np.float64).reshape(n, m),
            )
        except KeyError as e:
            raise DomainError(f"Missing field in parameter data: {e}") from e
        except ValueError as e:
            raise DomainError(f"Malformed parameter data: {e}") from e


@dataclass(frozen=True, eq=False)
class GradientVector(_Blocks):
    """Params-shaped vector of expectations or objective derivatives."""

    def __add__(self, other: GradientVector) -> GradientVector:
        self._check_shape(other)
        return GradientVector.from_flat(self.n_visible, self.n_hidden, self.flatten() + other.flatten())

    def __sub__(self, other: GradientVector) -> GradientVector:
        self._check_shape(other)
        return GradientVector.from_flat(self.n_visible, self.n_hidden, self.flatten() - other.flatten())

    def __neg__(self) -> GradientVector:
        return GradientVector.from_flat(self.n_visible, self.n_hidden, -self.flatten())

    def without_gamma(self) -> GradientVector:
        """Copy with the transverse-field block zeroed (classical RBM updates)."""
        return GradientVector(self.b_v, self.b_h, np.zeros_like(self.gamma), self.w)

    def first_nonfinite_entry(self) -> str | None:
        flat = self.flatten()
        bad = np.flatnonzero(~np.isfinite(flat))
        if bad.size == 0:
            return None
        return self.entry_names()[int(bad[0])]

    def dot(self, params: _Blocks) -> float:
        """Inner product <params, self> over all entries."""
        self._check_shape(params)
        return float(np.dot(params.flatten(), self.flatten()))


@dataclass(frozen=True, eq=False)
class Params(_Blocks):
    """
    Trainable parameters theta = (b_v, b_h, gamma, w) of an sqRBM.

    Attributes:
        b_v: Visible biases, length N
        b_h: Hidden biases, length M
        gamma: Transverse fields on the hidden units, length M
        w: Visible-hidden couplings, shape (N, M)
    """

    def __post_init__(self) -> None:
        super().__post_init__()
        flat = self.flatten()
        if not np.all(np.isfinite(flat)):
            bad = self.entry_names()[int(np.flatnonzero(~np.isfinite(flat))[0])]
            raise DomainError(f"Parameter entry {bad} is not finite")

    def with_zero_gamma(self) -> Params:
        return Params(self.b_v, self.b_h, np.zeros_like(self.gamma), self.w)


@dataclass(frozen=True)
class HiddenLocalState:
    """
    Closed-form conditional state of one hidden unit given a visible configuration.

    Attributes:
        b_eff: Effective longitudinal field b_j + sum_i w_ij v_i
        d: Gap sqrt(gamma_j^2 + b_eff^2)
        mz: Clamped <sigma^z>
        mx: Clamped <sigma^x>
    """

    b_eff: float
    d: float
    mz: float
    mx: float

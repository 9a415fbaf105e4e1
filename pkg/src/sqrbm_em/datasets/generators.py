"""
Exact generators for the four benchmark target distributions.

Bit/spin convention: bit 1 is spin -1 (same as encode_config), so "cardinality"
and "parity" count -1 spins. Seeded generators draw from PCG64.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.distributions import MAX_SPINS, VisibleDistribution, all_configs
from ..core.errors import DomainError, PlanValidationError
from ..core.utils import read_json_object
from ..training.config import MAX_SEED, validate_model
from ..version import PRNG_ALGORITHM

logger = structlog.get_logger(__name__)


class DatasetKind(str, Enum):
    BERNOULLI = "bernoulli"
    RANDOM_SUPPORT = "random_support"
    CARDINALITY = "cardinality"
    PARITY = "parity"


class DatasetSpec(BaseModel):
    """Which distribution to generate, and its parameters."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: DatasetKind = Field(..., description="Distribution family")
    n: int = Field(..., ge=1, le=MAX_SPINS, description="Number of spins")
    k: int | None = Field(default=None, description="Mixture components (bernoulli only)")
    p: float | None = Field(default=None, description="Alignment probability (bernoulli only)")
    seed: int = Field(default=0, ge=0, le=MAX_SEED, description="PCG64 seed")

    @model_validator(mode="after")
    def validate_kind_fields(self) -> DatasetSpec:
        if self.kind is DatasetKind.BERNOULLI:
            if self.k is None or self.p is None:
                raise ValueError("bernoulli datasets need both k and p")
            if not 1 <= self.k <= 2**self.n:
                raise ValueError(f"k must be in [1, 2^n = {2**self.n}], got {self.k}")
            if not 0.0 < self.p < 1.0:
                raise ValueError(f"p must be in (0, 1), got {self.p}")
        elif self.k is not None or self.p is not None:
            raise ValueError(f"k and p only apply to bernoulli datasets, not {self.kind.value}")
        if self.kind is DatasetKind.CARDINALITY and self.n % 2:
            raise ValueError(f"cardinality datasets need an even n, got {self.n}")
        return self

    @property
    def label(self) -> str:
        return self.kind.value


@dataclass(frozen=True, eq=False)
class Dataset:
    """A generated distribution plus the spec (and bernoulli centres) that made it."""

    spec: DatasetSpec | None
    distribution: VisibleDistribution
    centers: list[int] = field(default_factory=list)

    def spec_block(self) -> dict[str, Any]:
        block: dict[str, Any] = self.spec.model_dump(mode="json") if self.spec else {}
        block["prng"] = PRNG_ALGORITHM
        if self.centers:
            block["centers"] = list(self.centers)
        return block

    def save(self, path: str | Path) -> None:
        self.distribution.save(path, extra={"spec": self.spec_block()})


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def bernoulli_centers(n: int, k: int, seed: int) -> np.ndarray:
    """k centre indices drawn uniformly, with replacement."""
    return _rng(seed).integers(0, 2**n, size=k)


def bernoulli_mixture_from_centers(n: int, centers: np.ndarray, p: float) -> VisibleDistribution:
    """(1/k) sum_k p^(n-d(v,s_k)) (1-p)^d(v,s_k), d the Hamming distance."""
    spins = all_configs(n)
    overlap = spins @ spins[np.asarray(centers, dtype=np.int64)].T
    distance = np.rint((n - overlap) / 2.0)
    probs = np.exp((n - distance) * math.log(p) + distance * math.log1p(-p))
    return VisibleDistribution.from_weights(n, probs.mean(axis=1))


def gen_bernoulli_mixture(n: int, k: int, p: float, seed: int) -> VisibleDistribution:
    """
    Uniform mixture of k product-Bernoulli distributions peaked at random centres.

    Raises:
        DomainError: If the parameters violate the DatasetSpec invariants
    """
    spec = make_spec(kind=DatasetKind.BERNOULLI, n=n, k=k, p=p, seed=seed)
    return bernoulli_mixture_from_centers(n, bernoulli_centers(n, k, spec.seed), p)


def gen_random_support(n: int, seed: int) -> VisibleDistribution:
    """Uniform over min(n^2, 2^n) distinct strings sampled without replacement."""
    make_spec(kind=DatasetKind.RANDOM_SUPPORT, n=n, seed=seed)
    size = 1 << n
    support = _rng(seed).choice(size, size=min(n * n, size), replace=False)
    probs = np.zeros(size)
    probs[support] = 1.0
    return VisibleDistribution.from_weights(n, probs)


def _count_flipped(n: int) -> np.ndarray:
    return np.sum(all_configs(n) < 0, axis=1)


def gen_cardinality(n: int) -> VisibleDistribution:
    """
    Uniform over strings with exactly n/2 spins equal to -1.

    Raises:
        DomainError: If n is odd
    """
    make_spec(kind=DatasetKind.CARDINALITY, n=n)
    return VisibleDistribution.from_weights(n, (_count_flipped(n) == n // 2).astype(float))


def gen_parity(n: int) -> VisibleDistribution:
    """Uniform over strings with an even number of -1 spins."""
    make_spec(kind=DatasetKind.PARITY, n=n)
    return VisibleDistribution.from_weights(n, (_count_flipped(n) % 2 == 0).astype(float))


def make_spec(**values: Any) -> DatasetSpec:
    """Validated DatasetSpec; pydantic errors surface as DomainError subclasses."""
    return validate_model(DatasetSpec, values, source="dataset spec")


def generate(spec: DatasetSpec) -> Dataset:
    """Dispatch on spec.kind."""
    centers: list[int] = []
    if spec.kind is DatasetKind.BERNOULLI:
        assert spec.k is not None and spec.p is not None
        drawn = bernoulli_centers(spec.n, spec.k, spec.seed)
        centers = [int(c) for c in drawn]
        dist = bernoulli_mixture_from_centers(spec.n, drawn, spec.p)
    elif spec.kind is DatasetKind.RANDOM_SUPPORT:
        dist = gen_random_support(spec.n, spec.seed)
    elif spec.kind is DatasetKind.CARDINALITY:
        dist = gen_cardinality(spec.n)
    else:
        dist = gen_parity(spec.n)
    logger.debug(
        "dataset generated", kind=spec.kind.value, n=spec.n, support=int(dist.support.size)
    )
    return Dataset(spec=spec, distribution=dist, centers=centers)


def load_dataset(path: str | Path) -> Dataset:
    """
    Read a dataset file; the spec block is optional.

    Bernoulli files carry their centres, which are reused instead of redrawn.
    """
    payload = read_json_object(path, "Dataset file")
    dist = VisibleDistribution.from_dict(payload)
    block = dict(payload.get("spec") or {})
    centers = [int(c) for c in block.pop("centers", [])]
    block.pop("prng", None)
    spec = None
    if block:
        try:
            spec = make_spec(**block)
        except PlanValidationError as e:
            raise PlanValidationError(str(path), e.errors) from e
        if spec.n != dist.n_visible:
            raise DomainError(f"Dataset file {path}: spec n={spec.n}, probs for N={dist.n_visible}")
    return Dataset(spec=spec, distribution=dist, centers=centers)

"""Benchmark target distributions (Bernoulli mixture, random support, cardinality, parity)."""

from .generators import (
    PRNG_ALGORITHM,
    Dataset,
    DatasetKind,
    DatasetSpec,
    bernoulli_centers,
    bernoulli_mixture_from_centers,
    gen_bernoulli_mixture,
    gen_cardinality,
    gen_parity,
    gen_random_support,
    generate,
    load_dataset,
    make_spec,
)

__all__ = [
    "PRNG_ALGORITHM",
    "Dataset",
    "DatasetKind",
    "DatasetSpec",
    "bernoulli_centers",
    "bernoulli_mixture_from_centers",
    "gen_bernoulli_mixture",
    "gen_cardinality",
    "gen_parity",
    "gen_random_support",
    "generate",
    "load_dataset",
    "make_spec",
]

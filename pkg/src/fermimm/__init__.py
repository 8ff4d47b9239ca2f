"""Exact fermionant/immanant library with machine-certified gadget reductions."""

from .algebra import (
    DEFAULT_ENUMERATION_CAP,
    EnumerationCapError,
    Partition,
    Permutation,
    RationalMatrix,
    cycle_count,
    cycle_type,
    format_rational,
    parse_rational,
    partitions_of,
    permutations,
    sign,
)
from .covers import (
    CycleCover,
    GraphFormatError,
    StratifiedWeights,
    WeightedDigraph,
    cover_weight,
    cycle_covers,
    determinant_exact,
    fermionant,
    fermionant_dp,
    hamiltonian,
    permanent_ryser,
    stratified_weights,
)

__all__ = [
    "DEFAULT_ENUMERATION_CAP",
    "EnumerationCapError",
    "Partition",
    "Permutation",
    "RationalMatrix",
    "cycle_count",
    "cycle_type",
    "format_rational",
    "parse_rational",
    "partitions_of",
    "permutations",
    "sign",
    "CycleCover",
    "GraphFormatError",
    "StratifiedWeights",
    "WeightedDigraph",
    "cover_weight",
    "cycle_covers",
    "determinant_exact",
    "fermionant",
    "fermionant_dp",
    "hamiltonian",
    "permanent_ryser",
    "stratified_weights",
]

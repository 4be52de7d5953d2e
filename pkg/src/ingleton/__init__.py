"""Exact-rational entropy toolkit for expander-supported distributions:
finite-geometry graph families, spectral mixing certificates, dyadic
splitting, and certified Ingleton lower bounds."""

from ._accel import backend_name
from .bounds import (
    BoundConfig,
    CertifiedBoundReport,
    certified_main,
    certified_quasi_uniform,
    ing_lll_gap,
    makarychev_gap,
    triple_alternative,
)
from .entropy import (
    JointDistribution,
    Kernel,
    entropy_vector,
    extend_independent,
    parse_expression,
    uniform_pair,
    uniformity_report,
)
from .errors import IngletonError, TheoremViolation
from .galois import PrimeField, Subspace, enumerate_subspaces, gaussian_binomial
from .graphs import (
    BiregularBipartiteGraph,
    Subgraph,
    build_from_edges,
    build_grassmann_graph,
    build_polynomial_graph,
    build_projective_plane,
    read_graph,
    write_graph,
)
from .search import SearchConfig, SearchReport, exhaustive_min, local_min, run_search
from .spectral import (
    alon_bound_report,
    mixing_check,
    mixing_log_alternative,
    singular_values,
)
from .splitter import regularize, split_single, split_tuple

__version__ = "0.1.0"

__all__ = [
    "BiregularBipartiteGraph",
    "BoundConfig",
    "CertifiedBoundReport",
    "IngletonError",
    "JointDistribution",
    "Kernel",
    "PrimeField",
    "SearchConfig",
    "SearchReport",
    "Subgraph",
    "Subspace",
    "TheoremViolation",
    "alon_bound_report",
    "backend_name",
    "build_from_edges",
    "build_grassmann_graph",
    "build_polynomial_graph",
    "build_projective_plane",
    "certified_main",
    "certified_quasi_uniform",
    "entropy_vector",
    "enumerate_subspaces",
    "exhaustive_min",
    "extend_independent",
    "gaussian_binomial",
    "ing_lll_gap",
    "local_min",
    "makarychev_gap",
    "mixing_check",
    "mixing_log_alternative",
    "parse_expression",
    "read_graph",
    "regularize",
    "run_search",
    "singular_values",
    "split_single",
    "split_tuple",
    "triple_alternative",
    "uniform_pair",
    "uniformity_report",
    "write_graph",
]

"""Singular values of biadjacency matrices, mixing checks, slack reports."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _accel
from .errors import (
    CompleteBipartite,
    EmptySubgraph,
    EmptySubset,
    NumericalFailure,
    SizeGuard,
    TheoremViolation,
)

DENSE_SIDE_GUARD = 4096
EDGE_GUARD = 2**20
TOL = 1e-9

DENSE_BRANCH = "dense_branch"
SPARSE_BRANCH = "sparse_branch"
BOTH_BRANCHES = "both"


@dataclass(frozen=True)
class SpectralSummary:
    lambda1: float
    lambda2: float
    singular_values: tuple[float, ...]
    d1: int
    d2: int
    closed_form: tuple[float, float] | None
    disconnected_suspect: bool

    def to_json_dict(self):
        return {
            "lambda1": self.lambda1,
            "lambda2": self.lambda2,
            "singular_values": list(self.singular_values),
            "d1": self.d1,
            "d2": self.d2,
            "closed_form": list(self.closed_form) if self.closed_form else None,
            "disconnected_suspect": self.disconnected_suspect,
        }


def _family_closed_form(graph):
    fam = graph.family
    if not fam:
        return None
    if fam[0] == "projective-plane":
        q = fam[1]
        return (float(q + 1), math.sqrt(q))
    if fam[0] == "polynomial":
        q, k = fam[1], fam[2]
        if k >= 1:
            return (q ** ((k + 1) / 2), q ** (k / 2))
        # k = 0 is a disjoint union of stars; lambda2 = lambda1 = sqrt(q).
        return (math.sqrt(q), math.sqrt(q))
    return None


def singular_values(graph) -> SpectralSummary:
    """Full singular spectrum of the biadjacency matrix, cached per graph.

    Works on the Gram matrix of the smaller side so the dense eigensolve
    never sees more than DENSE_SIDE_GUARD rows.
    """
    if graph._spectral is not None:
        return graph._spectral
    e_count = len(graph.edges)
    if e_count > EDGE_GUARD:
        raise SizeGuard(f"{e_count} edges exceeds {EDGE_GUARD}")
    small = min(graph.x_size, graph.y_size)
    if small > DENSE_SIDE_GUARD:
        raise SizeGuard(f"smaller side {small} exceeds {DENSE_SIDE_GUARD}")

    ex, ey = graph.edge_arrays()
    b = np.zeros((graph.x_size, graph.y_size))
    b[ex, ey] = 1.0
    gram = b @ b.T if graph.x_size <= graph.y_size else b.T @ b
    try:
        w = np.linalg.eigvalsh(gram)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigensolve failed: {exc}") from None
    sv = np.sqrt(np.clip(w, 0.0, None))[::-1]
    lam1 = float(sv[0])
    lam2 = float(sv[1]) if len(sv) > 1 else 0.0

    expected = math.sqrt(graph.d1 * graph.d2)
    if abs(lam1 - expected) > 1e-8 * max(1.0, expected):
        raise NumericalFailure(
            f"lambda1 = {lam1!r} disagrees with sqrt(d1*d2) = {expected!r}"
        )
    summary = SpectralSummary(
        lambda1=lam1,
        lambda2=lam2,
        singular_values=tuple(float(v) for v in sv),
        d1=graph.d1,
        d2=graph.d2,
        closed_form=_family_closed_form(graph),
        disconnected_suspect=lam2 >= lam1 * (1.0 - 1e-9),
    )
    graph._spectral = summary
    return summary


@dataclass(frozen=True)
class MixingResult:
    observed: int
    expected: float
    bound: float
    holds: bool


def mixing_check(graph, x_subset, y_subset, summary=None) -> MixingResult:
    """Edge count between vertex subsets against the spectral mixing bound."""
    xs = frozenset(x_subset)
    ys = frozenset(y_subset)
    if not xs or not ys:
        raise EmptySubset("both subsets must be nonempty")
    if summary is None:
        summary = singular_values(graph)
    ex, ey = graph.edge_arrays()
    x_mask = np.zeros(graph.x_size, np.bool_)
    x_mask[list(xs)] = True
    y_mask = np.zeros(graph.y_size, np.bool_)
    y_mask[list(ys)] = True
    observed = int(_accel.count_edges(ex, ey, x_mask, y_mask))
    expected = float(
        Fraction(len(graph.edges) * len(xs) * len(ys), graph.x_size * graph.y_size)
    )
    bound = summary.lambda2 * math.sqrt(len(xs) * len(ys))
    return MixingResult(
        observed=observed,
        expected=expected,
        bound=bound,
        holds=abs(observed - expected) <= bound + TOL,
    )


def mixing_log_alternative(sub, summary=None) -> str:
    """Which side of the logarithmic mixing dichotomy an induced subgraph is on.

    Returns one of dense_branch / sparse_branch / both; raises
    TheoremViolation if neither inequality holds, which the mixing lemma
    rules out for induced subgraphs.
    """
    parent = sub.parent
    if not sub.x_subset or not sub.y_subset or not sub.edge_subset:
        raise EmptySubgraph("need nonempty vertex subsets and at least one edge")
    if summary is None:
        summary = singular_values(parent)
    eh = len(sub.edge_subset)
    xh = len(sub.x_subset)
    yh = len(sub.y_subset)
    e_count = len(parent.edges)

    dense = (
        math.log2(eh) - math.log2(xh) - math.log2(yh)
        <= math.log2(e_count) - math.log2(parent.x_size) - math.log2(parent.y_size)
        + 1.0 + TOL
    )
    if summary.lambda2 > 0.0:
        sparse = (
            math.log2(eh) - 0.5 * math.log2(xh) - 0.5 * math.log2(yh)
            <= math.log2(summary.lambda2) + 1.0 + TOL
        )
    else:
        sparse = False
    if dense and sparse:
        return BOTH_BRANCHES
    if dense:
        return DENSE_BRANCH
    if sparse:
        return SPARSE_BRANCH
    raise TheoremViolation(
        f"induced subgraph {xh}x{yh} with {eh} edges violates both mixing branches"
    )


@dataclass(frozen=True)
class AlonBoundReport:
    epsilon: float
    slack_strong: float
    slack_weak: float

    def to_json_dict(self):
        return {
            "epsilon": self.epsilon,
            "slack_strong": self.slack_strong,
            "slack_weak": self.slack_weak,
        }


def alon_bound_report(graph, summary=None) -> AlonBoundReport:
    """Spectral slack of the graph against its density.

    epsilon is ln(|X||Y|/|E|) in nats; the slacks compare 2*log2(lambda2)
    with log2(max degree) and log2(lambda1) in bits. Negative slack means
    the second singular value beats the generic bound.
    """
    if summary is None:
        summary = singular_values(graph)
    e_count = len(graph.edges)
    if e_count == graph.x_size * graph.y_size:
        raise CompleteBipartite("complete bipartite graph has no slack report")
    epsilon = math.log(graph.x_size * graph.y_size / e_count)
    lam2 = summary.lambda2
    if lam2 <= 0.0:
        raise CompleteBipartite("zero second singular value")
    slack_strong = 2.0 * math.log2(lam2) - math.log2(max(graph.d1, graph.d2))
    slack_weak = 2.0 * math.log2(lam2) - math.log2(summary.lambda1)
    return AlonBoundReport(epsilon=epsilon, slack_strong=slack_strong, slack_weak=slack_weak)

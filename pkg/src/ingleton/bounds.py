"""Certified lower bounds on the Ingleton expression.

Every bound here is assembled from explicit bit-valued constants and then
audited against the exactly computed Ingleton value; an audit failure
raises TheoremViolation instead of returning a wrong certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import spectral
from .entropy import JointDistribution, _as_index_set, uniformity_report
from .errors import (
    BelowEpsilonThreshold,
    NotSubsupported,
    OverlappingSets,
    TheoremViolation,
)
from .splitter import split_tuple

INFO_BRANCH = "info_branch"
METRIC_BRANCH = "metric_branch"
BOTH_BRANCHES = "both"


@dataclass(frozen=True)
class BoundConfig:
    epsilon0: float = 1.0
    tolerance: float = 1e-9

    def __post_init__(self):
        if self.epsilon0 <= 0:
            raise ValueError("epsilon0 must be positive")


@dataclass(frozen=True)
class PartCertificate:
    weight: Fraction
    size: int
    delta_a: Fraction
    delta_b: Fraction
    delta_quad: Fraction
    branch_a: str
    branch_b: str
    certified: float
    candidates: dict = field(compare=False)

    def to_json_dict(self):
        return {
            "weight": f"{self.weight.numerator}/{self.weight.denominator}",
            "size": self.size,
            "delta_a": float(self.delta_a),
            "delta_b": float(self.delta_b),
            "delta_quad": float(self.delta_quad),
            "branch_a": self.branch_a,
            "branch_b": self.branch_b,
            "certified": self.certified,
            "candidates": dict(self.candidates),
        }


@dataclass(frozen=True)
class CertifiedBoundReport:
    actual_ing: float
    certified: float
    residual: float | None
    branch_a: str | None
    branch_b: str | None
    h_v: float
    tail_contribution: float
    tail_weight: Fraction
    per_part: tuple | None

    def to_json_dict(self):
        return {
            "actual_ing": self.actual_ing,
            "certified": self.certified,
            "residual": self.residual,
            "branches": {"a": self.branch_a, "b": self.branch_b},
            "h_v": self.h_v,
            "tail_contribution": self.tail_contribution,
            "tail_weight": f"{self.tail_weight.numerator}/{self.tail_weight.denominator}",
            "parts": (
                [p.to_json_dict() for p in self.per_part]
                if self.per_part is not None
                else None
            ),
        }


def _four_roles(dist, roles):
    if len(roles) != 4:
        raise OverlappingSets("need exactly four roles (x, y, a, b)")
    sets = [_as_index_set(r, dist.arity) for r in roles]
    seen = frozenset()
    for s in sets:
        if s & seen:
            raise OverlappingSets("roles must be pairwise disjoint")
        seen |= s
    return sets


def _single_var(role_set, name):
    if len(role_set) != 1:
        raise NotSubsupported(
            f"role {name} must be a single variable to live on a graph side"
        )
    return next(iter(role_set))


def ing_lll_gap(dist: JointDistribution, roles):
    """Ingleton value against its unconditional triangle-style floor.

    Returns (ing, lll_bound) with lll_bound = L(X,Y) - L(X,Y|A) - L(X,Y|B);
    ing >= lll_bound - 1e-9 holds for every distribution.
    """
    x, y, a, b = _four_roles(dist, roles)
    ing = dist.ingleton(x, y, a, b)
    lll = (
        dist.ell_metric(x, y)
        - dist.ell_metric(x, y, a)
        - dist.ell_metric(x, y, b)
    )
    return ing, lll


def makarychev_gap(dist: JointDistribution, x, y, a, b, w):
    """Ingleton against the conditional-independence style floor through W.

    Returns (ing, mk_bound, w_quality); ing >= mk_bound - 1e-9 and
    -mk_bound <= w_quality + 1e-9.
    """
    sets = [_as_index_set(r, dist.arity) for r in (x, y, a, b, w)]
    seen = frozenset()
    for s in sets:
        if s & seen:
            raise OverlappingSets("roles must be pairwise disjoint")
        seen |= s
    rx, ry, ra, rb, rw = sets
    ing = dist.ingleton(rx, ry, ra, rb)
    mk = -(
        dist._mi_raw(rx, rw, ry)
        + dist._mi_raw(ry, rw, rx)
        + dist._mi_raw(rx, ry, rw)
    )
    w_quality = (
        abs(dist._mi_raw(rx, ry, frozenset()) - dist._h(rw))
        + 2.0 * dist.entropy(rw, rx)
        + 2.0 * dist.entropy(rw, ry)
    )
    return ing, mk, w_quality


def _check_subsupport(dist, xv, yv, graph):
    pair = dist.marginal((xv, yv))
    swap = xv > yv
    for t in pair.atoms:
        e = (t[1], t[0]) if swap else t
        if e not in graph.edge_set:
            raise NotSubsupported(f"pair atom {e!r} is not an edge of the graph")


def _log2_ratio(x_size, y_size, e_count):
    return math.log2(x_size) + math.log2(y_size) - math.log2(e_count)


def triple_alternative(dist, x, y, a, graph, delta, config=None) -> str:
    """Which guarantee a delta-uniform triple on an expander satisfies.

    info_branch: I(X:Y|A) is nearly the graph density log |X||Y|/|E|.
    metric_branch: L(X,Y|A) is within the second singular value's reach.
    At least one must hold; anything else raises TheoremViolation.
    """
    if config is None:
        config = BoundConfig()
    rx = _as_index_set(x, dist.arity)
    ry = _as_index_set(y, dist.arity)
    ra = _as_index_set(a, dist.arity)
    xv = _single_var(rx, "x")
    yv = _single_var(ry, "y")
    _check_subsupport(dist, xv, yv, graph)
    summary = spectral.singular_values(graph)

    log_delta = math.log2(float(delta))
    tol = config.tolerance
    i_a = dist._mi_raw(rx, ry, ra)
    l_a = dist.ell_metric(rx, ry, ra)
    density = _log2_ratio(graph.x_size, graph.y_size, len(graph.edges))

    info = i_a >= density - (1.0 + 5.0 * log_delta) - tol
    metric = (
        summary.lambda2 > 0.0
        and l_a <= math.log2(summary.lambda2) + 1.0 + 4.0 * log_delta + tol
    )
    if info and metric:
        return BOTH_BRANCHES
    if info:
        return INFO_BRANCH
    if metric:
        return METRIC_BRANCH
    raise TheoremViolation(
        f"neither branch holds: I(X:Y|A) = {i_a!r} vs {density - 1.0 - 5.0 * log_delta!r}, "
        f"L(X,Y|A) = {l_a!r} vs {math.log2(summary.lambda2) + 1.0 + 4.0 * log_delta if summary.lambda2 > 0 else float('-inf')!r}"
    )


def _measured_triple_delta(dist, rx, ry, ra) -> Fraction:
    return uniformity_report(dist.marginal(tuple(sorted(rx | ry | ra)))).delta


def certified_quasi_uniform(dist, roles, graph, delta=None, config=None) -> CertifiedBoundReport:
    """Certified Ingleton lower bound for a quasi-uniform quadruple whose
    pair marginal lives on the edges of a reference graph.

    delta, when given, is used for both triples; otherwise each triple's
    uniformity is measured. The certificate is the best of the applicable
    info / metric / trivial bounds, audited against the exact value.
    """
    if config is None:
        config = BoundConfig()
    rx, ry, ra, rb = _four_roles(dist, roles)
    delta_a = Fraction(delta) if delta is not None else _measured_triple_delta(dist, rx, ry, ra)
    delta_b = Fraction(delta) if delta is not None else _measured_triple_delta(dist, rx, ry, rb)

    branch_a = triple_alternative(dist, rx, ry, ra, graph, delta_a, config)
    branch_b = triple_alternative(dist, rx, ry, rb, graph, delta_b, config)
    summary = spectral.singular_values(graph)

    i_xy = dist._mi_raw(rx, ry, frozenset())
    l_xy = dist.ell_metric(rx, ry)
    density = _log2_ratio(graph.x_size, graph.y_size, len(graph.edges))

    candidates = {"trivial": -i_xy}
    info_deltas = []
    if branch_a in (INFO_BRANCH, BOTH_BRANCHES):
        info_deltas.append(delta_a)
    if branch_b in (INFO_BRANCH, BOTH_BRANCHES):
        info_deltas.append(delta_b)
    if info_deltas:
        d = min(info_deltas)
        candidates["info"] = density - i_xy - (1.0 + 5.0 * math.log2(float(d)))
    if (
        branch_a in (METRIC_BRANCH, BOTH_BRANCHES)
        and branch_b in (METRIC_BRANCH, BOTH_BRANCHES)
        and summary.lambda2 > 0.0
    ):
        candidates["metric"] = (
            -2.0 * math.log2(summary.lambda2)
            - (2.0 + 4.0 * math.log2(float(delta_a)) + 4.0 * math.log2(float(delta_b)))
            + l_xy
        )

    certified = max(candidates.values())
    actual = dist.ingleton(rx, ry, ra, rb)
    if actual < certified - config.tolerance:
        raise TheoremViolation(
            f"audit failed: actual {actual!r} < certified {certified!r}"
        )
    residual = (
        actual + 2.0 * math.log2(summary.lambda2) - l_xy
        if summary.lambda2 > 0.0
        else None
    )
    quad_delta = delta if delta is not None else max(delta_a, delta_b)
    return CertifiedBoundReport(
        actual_ing=actual,
        certified=certified,
        residual=residual,
        branch_a=branch_a,
        branch_b=branch_b,
        h_v=0.0,
        tail_contribution=0.0,
        tail_weight=Fraction(0),
        per_part=(
            PartCertificate(
                weight=Fraction(1),
                size=len(dist.atoms),
                delta_a=delta_a,
                delta_b=delta_b,
                delta_quad=Fraction(quad_delta),
                branch_a=branch_a,
                branch_b=branch_b,
                certified=certified,
                candidates=candidates,
            ),
        ),
    )


def certified_main(dist, roles, graph, config=None) -> CertifiedBoundReport:
    """Certified Ingleton lower bound for any extension of the uniform pair.

    Splits the quadruple into near-uniform parts plus a light tail, applies
    the quasi-uniform certificate per part, and pays explicit penalties of
    1 bit for the tail and 4 bits per bit of split-label entropy.
    """
    if config is None:
        config = BoundConfig()
    rx, ry, ra, rb = _four_roles(dist, roles)
    xv = _single_var(rx, "x")
    yv = _single_var(ry, "y")

    e_count = len(graph.edges)
    pair = dist.marginal((xv, yv))
    swap = xv > yv
    target = Fraction(1, e_count)
    edge_atoms = set()
    for t, m in pair.atoms.items():
        e = (t[1], t[0]) if swap else t
        if e not in graph.edge_set:
            raise NotSubsupported(f"pair atom {e!r} is not an edge of the graph")
        if m != target:
            raise NotSubsupported(f"pair atom {e!r} has mass {m}, not 1/{e_count}")
        edge_atoms.add(e)
    if len(edge_atoms) != e_count:
        raise NotSubsupported("pair marginal misses some edges of the graph")

    i_xy = dist._mi_raw(rx, ry, frozenset())
    if i_xy < config.epsilon0 - config.tolerance:
        raise BelowEpsilonThreshold(
            f"I(X:Y) = {i_xy!r} below epsilon0 = {config.epsilon0!r}"
        )

    split = split_tuple(dist)
    h_v = split.label_entropy
    summary = spectral.singular_values(graph)

    parts = []
    contributions = []
    for piece, weight, quad_delta in zip(
        split.parts, split.part_weights, split.achieved_delta
    ):
        cond = dist.restrict_to(piece)
        rep = certified_quasi_uniform(cond, (rx, ry, ra, rb), graph, config=config)
        inner = rep.per_part[0]
        parts.append(
            PartCertificate(
                weight=weight,
                size=len(piece),
                delta_a=inner.delta_a,
                delta_b=inner.delta_b,
                delta_quad=quad_delta,
                branch_a=rep.branch_a,
                branch_b=rep.branch_b,
                certified=rep.certified,
                candidates=inner.candidates,
            )
        )
        contributions.append(float(weight) * rep.certified)

    certified = math.fsum(contributions) - 1.0 - 4.0 * h_v
    actual = dist.ingleton(rx, ry, ra, rb)
    if actual < certified - config.tolerance:
        raise TheoremViolation(
            f"audit failed: actual {actual!r} < certified {certified!r}"
        )
    l_xy = dist.ell_metric(rx, ry)
    residual = (
        actual + 2.0 * math.log2(summary.lambda2) - l_xy
        if summary.lambda2 > 0.0
        else None
    )
    return CertifiedBoundReport(
        actual_ing=actual,
        certified=certified,
        residual=residual,
        branch_a=None,
        branch_b=None,
        h_v=h_v,
        tail_contribution=-1.0,
        tail_weight=split.tail_weight,
        per_part=tuple(parts),
    )

"""Singular values, mixing bounds, and the log-scale alternative."""

import math

import numpy as np
import pytest

from ingleton import (
    alon_bound_report,
    build_from_edges,
    build_polynomial_graph,
    build_projective_plane,
    mixing_check,
    mixing_log_alternative,
    singular_values,
)
from ingleton.errors import CompleteBipartite, EmptySubgraph, EmptySubset

SQRT2 = math.sqrt(2.0)


def complete_bipartite(nx, ny):
    return build_from_edges(nx, ny, [(x, y) for x in range(nx) for y in range(ny)])


def test_fano_spectrum(fano):
    s = singular_values(fano)
    assert abs(s.lambda1 - 3.0) <= 1e-8
    assert abs(s.lambda2 - SQRT2) <= 1e-6
    assert len(s.singular_values) == 7
    assert list(s.singular_values) == sorted(s.singular_values, reverse=True)
    for v in s.singular_values[1:]:
        assert abs(v - SQRT2) <= 1e-6
    assert s.closed_form is not None
    assert abs(s.closed_form[0] - 3.0) <= 1e-12
    assert abs(s.closed_form[1] - SQRT2) <= 1e-12
    assert not s.disconnected_suspect


def test_poly32_spectrum():
    s = singular_values(build_polynomial_graph(3, 2))
    assert abs(s.lambda1 - math.sqrt(27.0)) <= 1e-6
    assert abs(s.lambda2 - 3.0) <= 1e-6


def test_complete_bipartite_rank_one():
    s = singular_values(complete_bipartite(2, 3))
    assert abs(s.lambda1 - math.sqrt(6.0)) <= 1e-8
    assert all(abs(v) <= 1e-8 for v in s.singular_values[1:])


@pytest.mark.parametrize("q", [2, 3, 5])
def test_projective_plane_closed_form(q):
    s = singular_values(build_projective_plane(q))
    assert abs(s.lambda2 - math.sqrt(q)) <= 1e-6 * math.sqrt(q)
    assert abs(s.lambda1 - (q + 1)) <= 1e-8 * (q + 1)


@pytest.mark.parametrize("q", [2, 3, 5])
@pytest.mark.parametrize("k", [1, 2])
def test_polynomial_closed_form(q, k):
    s = singular_values(build_polynomial_graph(q, k))
    lam1 = q ** ((k + 1) / 2.0)
    lam2 = q ** (k / 2.0)
    assert abs(s.lambda1 - lam1) <= 1e-6 * lam1
    assert abs(s.lambda2 - lam2) <= 1e-6 * lam2


def test_lambda1_biregular_identity():
    for g in (
        build_projective_plane(3),
        build_polynomial_graph(3, 1),
        complete_bipartite(3, 3),
    ):
        s = singular_values(g)
        assert abs(s.lambda1 - math.sqrt(g.d1 * g.d2)) <= 1e-8 * s.lambda1


def test_disconnected_flagged():
    # Two disjoint 2x2 blocks: lambda2 == lambda1 == 2.
    edges = [(x, y) for x in range(2) for y in range(2)]
    edges += [(x + 2, y + 2) for x in range(2) for y in range(2)]
    s = singular_values(build_from_edges(4, 4, edges))
    assert abs(s.lambda1 - 2.0) <= 1e-8
    assert abs(s.lambda2 - 2.0) <= 1e-8
    assert s.disconnected_suspect


def test_mixing_full_sets(fano):
    r = mixing_check(fano, range(7), range(7))
    assert r.observed == 21
    assert abs(r.expected - 21.0) <= 1e-12
    assert r.holds


def test_mixing_adjacent_pair(fano):
    x, y = sorted(fano.edges)[0]
    r = mixing_check(fano, [x], [y])
    assert r.observed == 1
    assert abs(r.expected - 3.0 / 7.0) <= 1e-12
    assert abs(r.bound - SQRT2) <= 1e-6
    assert r.holds


def test_mixing_random_pairs(fano):
    rng = np.random.default_rng(7)
    for _ in range(1000):
        nx = int(rng.integers(1, 8))
        ny = int(rng.integers(1, 8))
        xs = rng.choice(7, size=nx, replace=False)
        ys = rng.choice(7, size=ny, replace=False)
        assert mixing_check(fano, xs, ys).holds


def test_mixing_empty_subset(fano):
    with pytest.raises(EmptySubset):
        mixing_check(fano, [], range(7))


def test_log_alternative_full_graph(fano):
    sub = fano.induced(range(7), range(7))
    assert mixing_log_alternative(sub) == "dense_branch"


def test_log_alternative_single_edge(fano):
    # One point, one incident line, the edge: sparse side is 0 <= 1.5 while
    # the dense side needs 0 <= log2(3/7) + 1 < 0 and fails.
    x, y = sorted(fano.edges)[0]
    sub = fano.induced([x], [y])
    assert len(sub.edge_subset) == 1
    assert mixing_log_alternative(sub) == "sparse_branch"


def test_log_alternative_random_subgraphs(fano):
    rng = np.random.default_rng(11)
    done = 0
    while done < 500:
        nx = int(rng.integers(1, 8))
        ny = int(rng.integers(1, 8))
        sub = fano.induced(
            rng.choice(7, size=nx, replace=False),
            rng.choice(7, size=ny, replace=False),
        )
        if not sub.edge_subset:
            continue
        assert mixing_log_alternative(sub) in ("dense_branch", "sparse_branch", "both")
        done += 1


def test_log_alternative_empty_subgraph(fano):
    # Two non-adjacent vertices exist since the Fano plane is not complete.
    for x in range(7):
        for y in range(7):
            if (x, y) not in fano.edge_set:
                sub = fano.induced([x], [y])
                with pytest.raises(EmptySubgraph):
                    mixing_log_alternative(sub)
                return


def test_alon_report_fano(fano):
    r = alon_bound_report(fano)
    assert abs(r.epsilon - math.log(49.0 / 21.0)) <= 1e-9
    assert abs(r.slack_strong - (1.0 - math.log2(3.0))) <= 1e-6
    # lambda1 = 3 = max degree here, so both slacks coincide.
    assert abs(r.slack_weak - (1.0 - math.log2(3.0))) <= 1e-6


def test_alon_report_poly32():
    r = alon_bound_report(build_polynomial_graph(3, 2))
    assert abs(r.slack_strong) <= 1e-6


def test_alon_report_complete():
    with pytest.raises(CompleteBipartite):
        alon_bound_report(complete_bipartite(2, 2))


@pytest.mark.parametrize("q", [2, 3, 5])
def test_alon_slack_projective_planes(q):
    r = alon_bound_report(build_projective_plane(q))
    expected = -math.log2(1.0 + 1.0 / q)
    assert abs(r.slack_strong - expected) <= 1e-6
    assert -1.0 < r.slack_strong < 0.0

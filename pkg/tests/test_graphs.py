"""Graph family constructions, edge-list validation, files, subgraphs."""

import pytest

from ingleton import (
    build_from_edges,
    build_grassmann_graph,
    build_polynomial_graph,
    build_projective_plane,
    gaussian_binomial,
    read_graph,
    write_graph,
)
from ingleton.errors import (
    DimensionOutOfRange,
    DuplicateEdge,
    IndexOutOfRange,
    NonPrimeModulus,
    NotBiregular,
    SizeGuard,
)
from ingleton.graphs import Subgraph, induced_closure


def degree_histograms(graph):
    dx = [0] * graph.x_size
    dy = [0] * graph.y_size
    for x, y in graph.edges:
        dx[x] += 1
        dy[y] += 1
    return dx, dy


def test_fano_shape(fano):
    assert fano.x_size == 7
    assert fano.y_size == 7
    assert len(fano.edges) == 21
    assert fano.d1 == 3
    assert fano.d2 == 3
    assert fano.family == ("projective-plane", 2)


@pytest.mark.parametrize("q", [3, 5])
def test_projective_plane_sizes(q):
    g = build_projective_plane(q)
    m = q * q + q + 1
    assert g.x_size == m
    assert g.y_size == m
    assert g.d1 == q + 1
    assert g.d2 == q + 1
    assert len(g.edges) == m * (q + 1)
    dx, dy = degree_histograms(g)
    assert set(dx) == {q + 1}
    assert set(dy) == {q + 1}


def test_projective_plane_errors():
    with pytest.raises(NonPrimeModulus):
        build_projective_plane(4)
    with pytest.raises(NonPrimeModulus):
        build_projective_plane(6)
    with pytest.raises(SizeGuard):
        build_projective_plane(103)


def test_polynomial_eight_cycle(poly21):
    assert poly21.x_size == 4
    assert poly21.y_size == 4
    assert len(poly21.edges) == 8
    assert poly21.d1 == 2
    assert poly21.d2 == 2
    # An 8-cycle: connected with all degrees 2 means a single cycle.
    seen = {(0, ("x", 0))}
    frontier = [("x", 0)]
    adj_x = {}
    adj_y = {}
    for x, y in poly21.edges:
        adj_x.setdefault(x, []).append(y)
        adj_y.setdefault(y, []).append(x)
    reach = {("x", 0)}
    while frontier:
        side, v = frontier.pop()
        nbrs = adj_x[v] if side == "x" else adj_y[v]
        other = "y" if side == "x" else "x"
        for w in nbrs:
            if (other, w) not in reach:
                reach.add((other, w))
                frontier.append((other, w))
    assert len(reach) == 8


def test_polynomial_shapes():
    g = build_polynomial_graph(3, 2)
    assert g.x_size == 9
    assert g.y_size == 27
    assert len(g.edges) == 81
    assert g.d1 == 9
    assert g.d2 == 3
    fan = build_polynomial_graph(2, 0)
    assert fan.d1 == 1
    assert fan.x_size == 4
    assert fan.y_size == 2
    assert len(fan.edges) == 4


@pytest.mark.parametrize("q,k", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_polynomial_degree_property(q, k):
    # Every polynomial hits q points; every point lies on q^k polynomials.
    g = build_polynomial_graph(q, k)
    dx, dy = degree_histograms(g)
    assert set(dx) == {q**k}
    assert set(dy) == {q}


def test_polynomial_errors():
    with pytest.raises(NonPrimeModulus):
        build_polynomial_graph(4, 1)
    with pytest.raises(DimensionOutOfRange):
        build_polynomial_graph(2, -1)
    with pytest.raises(SizeGuard):
        build_polynomial_graph(2, 19)


def test_build_from_edges_validation():
    k23 = build_from_edges(2, 3, [(x, y) for x in range(2) for y in range(3)])
    assert k23.d1 == 3
    assert k23.d2 == 2
    with pytest.raises(NotBiregular) as exc:
        build_from_edges(2, 2, [(0, 0), (0, 1), (1, 1)])
    assert exc.value.vertex is not None
    with pytest.raises(DuplicateEdge):
        build_from_edges(1, 2, [(0, 0), (0, 0), (0, 1)])
    with pytest.raises(IndexOutOfRange):
        build_from_edges(2, 2, [(0, 0), (0, 1), (1, 0), (1, 2)])
    with pytest.raises(NotBiregular):
        # isolated x vertex
        build_from_edges(2, 1, [(0, 0)])


def test_graph_file_round_trip(tmp_path, fano):
    path = tmp_path / "fano.json"
    write_graph(fano, path)
    back = read_graph(path)
    assert back == fano
    assert back.family == fano.family
    assert back.x_labels == fano.x_labels
    # Re-ingesting just the edge list reproduces the same graph.
    rebuilt = build_from_edges(7, 7, list(fano.edges))
    assert rebuilt == fano


def test_grassmann_matches_fano_sizes(fano):
    g = build_grassmann_graph(2, 3, 1, 2)
    assert (g.x_size, g.y_size, len(g.edges)) == (7, 7, 21)
    assert (g.d1, g.d2) == (3, 3)
    assert g.x_size == fano.x_size and len(g.edges) == len(fano.edges)


def test_grassmann_shape_and_degree_identities():
    g = build_grassmann_graph(2, 4, 1, 2)
    assert g.x_size == gaussian_binomial(4, 1, 2) == 15
    assert g.y_size == gaussian_binomial(4, 2, 2) == 35
    assert len(g.edges) == 105
    assert g.d1 == gaussian_binomial(3, 1, 2) == 7
    assert g.d2 == gaussian_binomial(2, 1, 2) == 3
    dx, dy = degree_histograms(g)
    assert set(dx) == {7}
    assert set(dy) == {3}


def test_grassmann_errors():
    with pytest.raises(DimensionOutOfRange):
        build_grassmann_graph(2, 4, 2, 2)
    with pytest.raises(DimensionOutOfRange):
        build_grassmann_graph(2, 4, 0, 2)
    with pytest.raises(NonPrimeModulus):
        build_grassmann_graph(4, 4, 1, 2)


def test_double_counting_invariant():
    instances = [
        build_projective_plane(2),
        build_projective_plane(3),
        build_polynomial_graph(2, 1),
        build_polynomial_graph(3, 2),
        build_grassmann_graph(2, 4, 1, 2),
    ]
    for g in instances:
        assert g.d1 * g.x_size == len(g.edges)
        assert g.d2 * g.y_size == len(g.edges)


def test_induced_closure_full_graph(fano):
    sub = fano.induced(range(7), range(7))
    closed = induced_closure(sub)
    assert closed.edge_subset == fano.edge_set


def test_induced_closure_collinear_points(fano):
    line = 0
    points = sorted(x for x, y in fano.edges if y == line)
    assert len(points) == 3
    sub = Subgraph(fano, points, [line], [])
    closed = induced_closure(sub)
    assert len(closed.edge_subset) == 3
    assert closed.edge_subset == {(p, line) for p in points}


def test_induced_closure_single_edge(fano):
    x, y = sorted(fano.edges)[0]
    sub = Subgraph(fano, [x], [y], [(x, y)])
    closed = induced_closure(sub)
    assert closed.edge_subset == {(x, y)}


def test_subgraph_validation(fano):
    with pytest.raises(IndexOutOfRange):
        Subgraph(fano, [99], [0], [])
    with pytest.raises(IndexOutOfRange):
        Subgraph(fano, [0], [0], [(5, 5)])

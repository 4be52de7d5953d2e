"""Biregular bipartite graphs: validation, file format, family constructors."""

from __future__ import annotations

import itertools
import json

import numpy as np

from . import galois
from .errors import (
    DimensionOutOfRange,
    DuplicateEdge,
    IndexOutOfRange,
    NonPrimeModulus,
    NotBiregular,
    SizeGuard,
)

EDGE_GUARD = 2**20
MAX_PLANE_ORDER = 101
POLY_GUARD = 2**20


class BiregularBipartiteGraph:
    """A validated biregular bipartite graph on dense integer vertex ids.

    Edges are stored lexicographically sorted. Every vertex on the left has
    degree d1 and every vertex on the right degree d2; isolated vertices are
    rejected. Structural equality ignores labels and family metadata.
    """

    __slots__ = (
        "x_size",
        "y_size",
        "edges",
        "d1",
        "d2",
        "x_labels",
        "y_labels",
        "family",
        "_edge_set",
        "_arrays",
        "_spectral",
        "_hash",
    )

    def __init__(self, x_size, y_size, edges, x_labels=None, y_labels=None, family=None):
        if x_size < 1 or y_size < 1:
            raise IndexOutOfRange("part sizes must be positive")
        edges = sorted(tuple(e) for e in edges)
        if len(edges) > EDGE_GUARD:
            raise SizeGuard(f"{len(edges)} edges exceeds {EDGE_GUARD}")
        deg_x = [0] * x_size
        deg_y = [0] * y_size
        prev = None
        for e in edges:
            if len(e) != 2:
                raise IndexOutOfRange(f"edge {e!r} is not a pair")
            x, y = e
            if not (isinstance(x, int) and isinstance(y, int)):
                raise IndexOutOfRange(f"edge {e!r} has non-integer endpoint")
            if e == prev:
                raise DuplicateEdge(f"edge {e!r} repeated")
            prev = e
            if not 0 <= x < x_size:
                raise IndexOutOfRange(f"x vertex {x} out of range [0, {x_size})")
            if not 0 <= y < y_size:
                raise IndexOutOfRange(f"y vertex {y} out of range [0, {y_size})")
            deg_x[x] += 1
            deg_y[y] += 1
        d1 = deg_x[0]
        if d1 == 0:
            raise NotBiregular("x", 0, 0, "a positive degree")
        for v, d in enumerate(deg_x):
            if d != d1:
                raise NotBiregular("x", v, d, d1)
        d2 = deg_y[0]
        if d2 == 0:
            raise NotBiregular("y", 0, 0, "a positive degree")
        for v, d in enumerate(deg_y):
            if d != d2:
                raise NotBiregular("y", v, d, d2)

        if x_labels is not None:
            x_labels = tuple(str(s) for s in x_labels)
            if len(x_labels) != x_size:
                raise IndexOutOfRange("x_labels length mismatch")
        if y_labels is not None:
            y_labels = tuple(str(s) for s in y_labels)
            if len(y_labels) != y_size:
                raise IndexOutOfRange("y_labels length mismatch")

        self.x_size = x_size
        self.y_size = y_size
        self.edges = tuple(edges)
        self.d1 = d1
        self.d2 = d2
        self.x_labels = x_labels
        self.y_labels = y_labels
        self.family = family
        self._edge_set = frozenset(edges)
        self._arrays = None
        self._spectral = None
        self._hash = hash((x_size, y_size, self.edges))

    @property
    def edge_set(self):
        return self._edge_set

    def edge_arrays(self):
        """(ex, ey) int64 arrays aligned with the sorted edge list."""
        if self._arrays is None:
            ex = np.fromiter((e[0] for e in self.edges), np.int64, len(self.edges))
            ey = np.fromiter((e[1] for e in self.edges), np.int64, len(self.edges))
            self._arrays = (ex, ey)
        return self._arrays

    def induced(self, x_subset, y_subset) -> "Subgraph":
        """Subgraph on the given vertex subsets with every edge inside them."""
        xs = frozenset(x_subset)
        ys = frozenset(y_subset)
        inside = frozenset(e for e in self.edges if e[0] in xs and e[1] in ys)
        return Subgraph(self, xs, ys, inside)

    def to_json_dict(self) -> dict:
        doc = {
            "x_size": self.x_size,
            "y_size": self.y_size,
            "edges": [list(e) for e in self.edges],
        }
        if self.x_labels is not None or self.y_labels is not None:
            doc["labels"] = {
                "x": list(self.x_labels or ()),
                "y": list(self.y_labels or ()),
            }
        if self.family is not None:
            doc["family"] = list(self.family)
        return doc

    @classmethod
    def from_json_dict(cls, doc: dict) -> "BiregularBipartiteGraph":
        labels = doc.get("labels") or {}
        family = doc.get("family")
        return cls(
            doc["x_size"],
            doc["y_size"],
            [tuple(e) for e in doc["edges"]],
            x_labels=labels.get("x"),
            y_labels=labels.get("y"),
            family=tuple(family) if family is not None else None,
        )

    def __eq__(self, other):
        return (
            isinstance(other, BiregularBipartiteGraph)
            and self.x_size == other.x_size
            and self.y_size == other.y_size
            and self.edges == other.edges
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        fam = f", family={self.family!r}" if self.family else ""
        return (
            f"BiregularBipartiteGraph({self.x_size}x{self.y_size}, "
            f"|E|={len(self.edges)}, degrees=({self.d1},{self.d2}){fam})"
        )


def build_from_edges(x_size, y_size, edges, x_labels=None, y_labels=None):
    return BiregularBipartiteGraph(x_size, y_size, edges, x_labels, y_labels)


class Subgraph:
    """Vertex subsets plus a set of parent edges lying inside them."""

    __slots__ = ("parent", "x_subset", "y_subset", "edge_subset")

    def __init__(self, parent, x_subset, y_subset, edge_subset):
        x_subset = frozenset(x_subset)
        y_subset = frozenset(y_subset)
        edge_subset = frozenset(tuple(e) for e in edge_subset)
        for v in x_subset:
            if not 0 <= v < parent.x_size:
                raise IndexOutOfRange(f"x vertex {v} outside parent")
        for v in y_subset:
            if not 0 <= v < parent.y_size:
                raise IndexOutOfRange(f"y vertex {v} outside parent")
        for e in edge_subset:
            if e not in parent.edge_set:
                raise IndexOutOfRange(f"edge {e!r} not in parent")
            if e[0] not in x_subset or e[1] not in y_subset:
                raise IndexOutOfRange(f"edge {e!r} leaves the vertex subsets")
        self.parent = parent
        self.x_subset = x_subset
        self.y_subset = y_subset
        self.edge_subset = edge_subset

    def __repr__(self):
        return (
            f"Subgraph({len(self.x_subset)}x{len(self.y_subset)}, "
            f"|E|={len(self.edge_subset)})"
        )


def induced_closure(sub: Subgraph) -> Subgraph:
    """Close a subgraph under every parent edge inside its vertex subsets."""
    return sub.parent.induced(sub.x_subset, sub.y_subset)


def write_graph(graph, path):
    with open(path, "w") as fh:
        json.dump(graph.to_json_dict(), fh, sort_keys=True)
        fh.write("\n")


def read_graph(path) -> BiregularBipartiteGraph:
    with open(path) as fh:
        return BiregularBipartiteGraph.from_json_dict(json.load(fh))


# ------------------------------------------------------------------- families

def _projective_points(q):
    """Canonical representatives of PG(2, q): first nonzero coordinate 1."""
    pts = []
    for v in itertools.product(range(q), repeat=3):
        nz = next((c for c in v if c), None)
        if nz == 1:
            pts.append(v)
    return pts


def build_projective_plane(q: int) -> BiregularBipartiteGraph:
    """Point-line incidence of the projective plane of prime order q."""
    if not galois.is_prime(q):
        raise NonPrimeModulus(f"{q} is not prime")
    if q > MAX_PLANE_ORDER:
        raise SizeGuard(f"plane order {q} exceeds {MAX_PLANE_ORDER}")
    pts = _projective_points(q)
    assert len(pts) == q * q + q + 1
    edges = []
    for i, p in enumerate(pts):
        for j, l in enumerate(pts):
            if (p[0] * l[0] + p[1] * l[1] + p[2] * l[2]) % q == 0:
                edges.append((i, j))
    labels = tuple("(" + ":".join(str(c) for c in p) + ")" for p in pts)
    return BiregularBipartiteGraph(
        len(pts), len(pts), edges,
        x_labels=labels, y_labels=labels,
        family=("projective-plane", q),
    )


def build_polynomial_graph(q: int, k: int) -> BiregularBipartiteGraph:
    """Points of GF(q)^2 against polynomials of degree <= k, incidence y = p(x)."""
    if not galois.is_prime(q):
        raise NonPrimeModulus(f"{q} is not prime")
    if k < 0:
        raise DimensionOutOfRange(f"k must be >= 0, got {k}")
    if q ** (k + 2) > POLY_GUARD:
        raise SizeGuard(f"q**(k+2) = {q ** (k + 2)} exceeds {POLY_GUARD}")
    points = list(itertools.product(range(q), repeat=2))
    polys = list(itertools.product(range(q), repeat=k + 1))
    edges = []
    for i, (x0, y0) in enumerate(points):
        for j, coeffs in enumerate(polys):
            val = 0
            for c in reversed(coeffs):
                val = (val * x0 + c) % q
            if val == y0:
                edges.append((i, j))
    x_labels = tuple(f"({a},{b})" for a, b in points)
    y_labels = tuple("[" + ",".join(str(c) for c in cs) + "]" for cs in polys)
    return BiregularBipartiteGraph(
        len(points), len(polys), edges,
        x_labels=x_labels, y_labels=y_labels,
        family=("polynomial", q, k),
    )


def build_grassmann_graph(q: int, n: int, k: int, l: int) -> BiregularBipartiteGraph:
    """Containment of k-dim inside l-dim subspaces of GF(q)^n."""
    if not 0 < k < l < n:
        raise DimensionOutOfRange(f"need 0 < k < l < n, got k={k}, l={l}, n={n}")
    small = galois.enumerate_subspaces(q, n, k)
    big = galois.enumerate_subspaces(q, n, l)
    edges = []
    for i, u in enumerate(small):
        for j, v in enumerate(big):
            if v.contains(u):
                edges.append((i, j))
    return BiregularBipartiteGraph(
        len(small), len(big), edges,
        x_labels=tuple(s.label() for s in small),
        y_labels=tuple(s.label() for s in big),
        family=("grassmann", q, n, k, l),
    )

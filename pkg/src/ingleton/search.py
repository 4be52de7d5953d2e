"""Minimizing the Ingleton expression over auxiliary kernels of a uniform pair.

Kernels map each edge atom to a distribution over a small alphabet; the pair
stays fixed and only P(A|XY), P(B|XY) move. Exhaustive mode enumerates
deterministic maps exactly; local mode does seeded multiplicative descent on
integer-grid rows (denominator 2**16), so every objective evaluation is over
exact rational masses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _accel, bounds
from .entropy import JointDistribution, Kernel, extend_independent, uniform_pair
from .errors import BelowEpsilonThreshold, SearchSpaceTooLarge
from .graphs import BiregularBipartiteGraph, build_from_edges

GRID = 2**16
ENUM_GUARD = 2**24
DIGIT_GUARD = 2**23


@dataclass(frozen=True)
class SearchConfig:
    alphabet_a: int = 2
    alphabet_b: int = 2
    strategy: str = "local"
    restarts: int = 20
    max_steps: int = 400
    step_scale: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.alphabet_a < 1 or self.alphabet_b < 1:
            raise ValueError("alphabet sizes must be at least 1")
        if self.strategy not in ("exhaustive", "random", "local"):
            raise ValueError(f"unknown strategy {self.strategy!r}")


@dataclass(frozen=True)
class SearchReport:
    best_ing: float
    best_kernels: tuple
    trace: tuple
    certified_at_best: object

    def to_json_dict(self, atom_order):
        return {
            "best_ing": self.best_ing,
            "trace": list(self.trace),
            "kernels": {
                "a": self.best_kernels[0].to_json_rows(atom_order),
                "b": self.best_kernels[1].to_json_rows(atom_order),
            },
            "certified": (
                self.certified_at_best.to_json_dict()
                if self.certified_at_best is not None
                else None
            ),
        }


class _Instance:
    """Fixed uniform pair in array form plus its reconstruction graph."""

    def __init__(self, pair_or_graph):
        if isinstance(pair_or_graph, BiregularBipartiteGraph):
            self.graph = pair_or_graph
            self.pair = uniform_pair(pair_or_graph)
        else:
            self.pair = pair_or_graph
            if self.pair.arity != 2:
                raise ValueError("search needs a two-variable pair")
            e_count = len(self.pair.atoms)
            target = Fraction(1, e_count)
            for t, m in self.pair.atoms.items():
                if m != target:
                    raise ValueError("search needs the uniform pair of a graph")
            self.graph = build_from_edges(
                len(self.pair.alphabets[0]),
                len(self.pair.alphabets[1]),
                list(self.pair.atoms.keys()),
            )
        self.edges = list(self.pair.atoms.keys())
        ex, ey = self.graph.edge_arrays()
        self.ex = ex
        self.ey = ey
        self.nx = self.graph.x_size
        self.ny = self.graph.y_size
        self.i_xy = (
            math.log2(self.nx) + math.log2(self.ny) - math.log2(len(self.edges))
        )

    def objective(self, wa, wb, t_grid):
        return float(
            _accel.kernel_pair_ing(
                self.ex, self.ey, wa, wb, self.nx, self.ny, t_grid, self.i_xy
            )
        )

    def kernels_from_rows(self, wa, wb, t_grid):
        ka = Kernel(
            {e: [Fraction(int(w), t_grid) for w in wa[i]] for i, e in enumerate(self.edges)}
        )
        kb = Kernel(
            {e: [Fraction(int(w), t_grid) for w in wb[i]] for i, e in enumerate(self.edges)}
        )
        return ka, kb

    def finish(self, wa, wb, t_grid) -> tuple:
        """Exact recomputation and certification for the winning kernels."""
        ka, kb = self.kernels_from_rows(wa, wb, t_grid)
        dist = extend_independent(self.pair, ka, kb)
        exact = dist.ingleton((0,), (1,), (2,), (3,))
        try:
            report = bounds.certified_main(dist, ((0,), (1,), (2,), (3,)), self.graph)
        except BelowEpsilonThreshold:
            report = None
        return exact, (ka, kb), report


def _det_rows(maps, width):
    rows = np.zeros((maps.shape[0], width), np.int64)
    rows[np.arange(maps.shape[0]), maps] = 1
    return rows


def exhaustive_min(pair, config: SearchConfig) -> SearchReport:
    """Exact minimum of Ing over all pairs of deterministic kernels."""
    inst = _Instance(pair)
    e_count = len(inst.edges)
    na = config.alphabet_a**e_count
    nb = config.alphabet_b**e_count
    if na * nb > ENUM_GUARD:
        raise SearchSpaceTooLarge(
            f"(alphabet_a**E) * (alphabet_b**E) = {na * nb} exceeds {ENUM_GUARD}"
        )
    if (na + nb) * e_count > DIGIT_GUARD:
        raise SearchSpaceTooLarge("digit tables would not fit desk-scale memory")

    def digits(count, base):
        out = np.zeros((count, e_count), np.int64)
        idx = np.arange(count, dtype=np.int64)
        for e in range(e_count):
            out[:, e] = idx % base
            idx //= base
        return out

    digits_a = digits(na, config.alphabet_a)
    digits_b = digits(nb, config.alphabet_b)
    d1 = len(inst.edges) // inst.nx
    d2 = len(inst.edges) // inst.ny
    const_term = math.log2(d1) + math.log2(d2)
    _, best_i, best_j = _accel.exhaustive_scan(
        digits_a, digits_b, inst.ex, inst.ey, inst.nx, inst.ny, const_term
    )

    wa = _det_rows(digits_a[best_i], config.alphabet_a)
    wb = _det_rows(digits_b[best_j], config.alphabet_b)
    exact, kernels, report = inst.finish(wa, wb, 1)
    return SearchReport(
        best_ing=exact,
        best_kernels=kernels,
        trace=(exact,),
        certified_at_best=report,
    )


def _snap_row(values, t_grid):
    """Round positive float weights onto the integer grid, preserving the sum."""
    total = values.sum()
    shares = values * (t_grid / total)
    base = np.floor(shares).astype(np.int64)
    rem = t_grid - int(base.sum())
    if rem:
        frac = shares - base
        order = np.argsort(-frac, kind="stable")
        base[order[:rem]] += 1
    return base


def local_min(pair, config: SearchConfig, init_a=None, init_b=None) -> SearchReport:
    """Multiplicative-perturbation descent over integer-grid kernel rows.

    Each restart starts from the supplied rows when given (otherwise from a
    seeded multinomial draw), picks one kernel row per step, multiplies its
    nonzero entries by exp(step_scale * normal) factors, re-snaps the row to
    the grid, and keeps strictly improving moves. Zero entries stay zero, so
    deterministic rows are fixed points. The trace is the running best after
    each restart, so it never increases. strategy="random" skips the descent
    and just scores seeded random deterministic kernel pairs.
    """
    inst = _Instance(pair)
    e_count = len(inst.edges)
    ka = config.alphabet_a
    kb = config.alphabet_b
    seeds = np.random.SeedSequence(config.seed).spawn(max(1, config.restarts))

    best_val = math.inf
    best_rows = None
    best_grid = GRID
    trace = []

    if config.strategy == "random":
        per_restart = max(1, config.max_steps)
        for ss in seeds:
            rng = np.random.default_rng(ss)
            for _ in range(per_restart):
                amap = rng.integers(0, ka, e_count)
                bmap = rng.integers(0, kb, e_count)
                wa = _det_rows(amap, ka)
                wb = _det_rows(bmap, kb)
                val = inst.objective(wa, wb, 1)
                if val < best_val:
                    best_val = val
                    best_rows = (wa, wb)
                    best_grid = 1
            trace.append(best_val)
    else:
        if init_a is not None:
            init_a = np.asarray(init_a, np.float64)
            init_a = np.stack([_snap_row(r, GRID) for r in init_a])
        if init_b is not None:
            init_b = np.asarray(init_b, np.float64)
            init_b = np.stack([_snap_row(r, GRID) for r in init_b])
        for ss in seeds:
            rng = np.random.default_rng(ss)
            if init_a is not None:
                wa = init_a.copy()
            else:
                wa = rng.multinomial(GRID, [1.0 / ka] * ka, size=e_count).astype(np.int64)
            if init_b is not None:
                wb = init_b.copy()
            else:
                wb = rng.multinomial(GRID, [1.0 / kb] * kb, size=e_count).astype(np.int64)
            cur = inst.objective(wa, wb, GRID)
            for _ in range(config.max_steps):
                side = rng.integers(0, 2)
                row = int(rng.integers(0, e_count))
                w = wa if side == 0 else wb
                width = w.shape[1]
                old = w[row].copy()
                proposal = old * np.exp(
                    config.step_scale * rng.standard_normal(width)
                )
                w[row] = _snap_row(proposal, GRID)
                val = inst.objective(wa, wb, GRID)
                if val < cur:
                    cur = val
                else:
                    w[row] = old
            if cur < best_val:
                best_val = cur
                best_rows = (wa.copy(), wb.copy())
                best_grid = GRID
            trace.append(best_val)

    exact, kernels, report = inst.finish(best_rows[0], best_rows[1], best_grid)
    return SearchReport(
        best_ing=exact,
        best_kernels=kernels,
        trace=tuple(trace),
        certified_at_best=report,
    )


def run_search(pair, config: SearchConfig) -> SearchReport:
    if config.strategy == "exhaustive":
        return exhaustive_min(pair, config)
    return local_min(pair, config)

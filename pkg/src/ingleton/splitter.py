"""Dyadic splitting into near-uniform parts, and support regularization.

split_single cuts a distribution into mass-level bands: part j collects the
atoms with mass in (2**-(j+1), 2**-j], and everything at or below level k0
lands in a low-mass tail whose weight times H stays below 1. Every non-tail
part is exactly 2-uniform. split_tuple applies the same banding to a
4-variable joint, then refines each band with the fiber-count regularizer
so the conditioned quadruples come out measurably close to uniform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .entropy import JointDistribution, uniformity_report
from .errors import (
    ArityGuard,
    DimensionGuard,
    SizeGuard,
    TheoremViolation,
    ZeroEntropyInput,
)

REGULARIZE_DIM_GUARD = 4
REGULARIZE_SIZE_GUARD = 2**16
ASSERT_TOL = 1e-9


@dataclass
class SplitResult:
    parts: list
    tail: list
    level_indices: list
    k0: int
    part_weights: list
    tail_weight: Fraction
    achieved_delta: list
    entropy_bits: float
    label_entropy: float

    def to_json_dict(self):
        return {
            "parts": [[list(a) if isinstance(a, tuple) else a for a in part] for part in self.parts],
            "tail": [list(a) if isinstance(a, tuple) else a for a in self.tail],
            "weights": [f"{w.numerator}/{w.denominator}" for w in self.part_weights],
            "achieved_delta": [float(d) for d in self.achieved_delta],
        }


def _dyadic_bands(masses_sorted, k0):
    """level_indices[j] = first rank whose mass is <= 2**-j, for j = 0..k0."""
    level_indices = []
    ptr = 0
    n = len(masses_sorted)
    for j in range(k0 + 1):
        threshold = Fraction(1, 2**j)
        while ptr < n and masses_sorted[ptr] > threshold:
            ptr += 1
        level_indices.append(ptr)
    return level_indices


def _split_core(items, h_bits):
    """Shared banding: items is a list of (key, mass) pairs.

    Returns (parts, tail, level_indices, k0, part_weights, tail_weight)
    with empty bands dropped. Sorting is by descending mass, ties by
    ascending key, so the cut is deterministic.
    """
    items = sorted(items)
    items.sort(key=lambda kv: kv[1], reverse=True)
    masses = [m for _, m in items]
    k0 = max(1, math.ceil(h_bits * h_bits))
    level_indices = _dyadic_bands(masses, k0)

    parts = []
    weights = []
    for j in range(k0):
        lo, hi = level_indices[j], level_indices[j + 1]
        if hi > lo:
            parts.append([k for k, _ in items[lo:hi]])
            weights.append(sum(masses[lo:hi], Fraction(0)))
    tail = [k for k, _ in items[level_indices[k0]:]]
    tail_weight = sum(masses[level_indices[k0]:], Fraction(0))
    return parts, tail, level_indices, k0, weights, tail_weight


def _label_entropy(weights, tail_weight):
    terms = [float(w) * (math.log2(w.denominator) - math.log2(w.numerator)) for w in weights]
    if tail_weight > 0:
        terms.append(
            float(tail_weight)
            * (math.log2(tail_weight.denominator) - math.log2(tail_weight.numerator))
        )
    return math.fsum(terms)


def _audit_bands(result, atoms, check_label_entropy):
    """Construction-time guarantees; failure here means a bug, and is
    surfaced as TheoremViolation so nothing downstream trusts the split."""
    seen = set()
    for part in result.parts + [result.tail]:
        for key in part:
            if key in seen:
                raise TheoremViolation("split parts overlap")
            seen.add(key)
    if seen != set(atoms):
        raise TheoremViolation("split parts do not cover the support")
    total = sum(result.part_weights, result.tail_weight)
    if total != 1:
        raise TheoremViolation(f"split weights sum to {total}")
    if float(result.tail_weight) * result.entropy_bits > 1.0 + ASSERT_TOL:
        raise TheoremViolation(
            f"tail weight {float(result.tail_weight)} times H {result.entropy_bits} exceeds 1"
        )
    cap = 2**result.k0
    for part in result.parts:
        if len(part) > cap:
            raise TheoremViolation(f"part of size {len(part)} exceeds 2**k0 = {cap}")
        hi = max(atoms[k] for k in part)
        lo = min(atoms[k] for k in part)
        if hi > 2 * lo:
            raise TheoremViolation("non-tail part is not 2-uniform")
    if check_label_entropy and result.entropy_bits >= 2.0:
        bound = 2.0 * math.log2(result.entropy_bits) + 1.0 + ASSERT_TOL
        if result.label_entropy > bound:
            raise TheoremViolation(
                f"label entropy {result.label_entropy} exceeds {bound}"
            )


def split_single(dist: JointDistribution) -> SplitResult:
    """Split a single-variable distribution into 2-uniform dyadic bands."""
    if dist.arity != 1:
        raise ArityGuard(f"split_single needs arity 1, got {dist.arity}")
    if len(dist.atoms) < 2:
        raise ZeroEntropyInput("single-atom distribution cannot be split")
    h_bits = dist.entropy((0,))
    items = [(t[0], m) for t, m in dist.atoms.items()]
    parts, tail, level_indices, k0, weights, tail_weight = _split_core(items, h_bits)

    flat_masses = {t[0]: m for t, m in dist.atoms.items()}
    deltas = []
    for part in parts:
        hi = max(flat_masses[k] for k in part)
        lo = min(flat_masses[k] for k in part)
        deltas.append(hi / lo)

    result = SplitResult(
        parts=parts,
        tail=tail,
        level_indices=level_indices,
        k0=k0,
        part_weights=weights,
        tail_weight=tail_weight,
        achieved_delta=deltas,
        entropy_bits=h_bits,
        label_entropy=_label_entropy(weights, tail_weight),
    )
    _audit_bands(result, flat_masses, check_label_entropy=True)
    return result


def split_tuple(dist: JointDistribution) -> SplitResult:
    """Split a 4-variable joint: dyadic bands on the flattened atom masses,
    then each band refined so its support is 2-regular in every fiber
    direction. achieved_delta reports the measured uniformity of each
    conditioned quadruple."""
    if dist.arity != 4:
        raise ArityGuard(f"split_tuple needs arity 4, got {dist.arity}")
    if len(dist.atoms) < 2:
        raise ZeroEntropyInput("single-atom distribution cannot be split")
    h_bits = dist._h(frozenset(range(4)))
    items = list(dist.atoms.items())
    bands, tail, level_indices, k0, band_weights, tail_weight = _split_core(items, h_bits)

    parts = []
    weights = []
    for band in bands:
        refined = regularize(band, 2)
        for piece in refined.parts:
            parts.append(piece)
            weights.append(sum((dist.atoms[t] for t in piece), Fraction(0)))

    deltas = []
    for piece in parts:
        cond = dist.restrict_to(piece)
        deltas.append(uniformity_report(cond).delta)

    result = SplitResult(
        parts=parts,
        tail=tail,
        level_indices=level_indices,
        k0=k0,
        part_weights=weights,
        tail_weight=tail_weight,
        achieved_delta=deltas,
        entropy_bits=h_bits,
        label_entropy=_label_entropy(weights, tail_weight),
    )
    # The label-entropy target is report-only here: refinement can push
    # H(V) past the single-variable bound.
    _audit_bands(result, dist.atoms, check_label_entropy=False)
    return result


# ---------------------------------------------------------------- regularizer

@dataclass
class RegularPartition:
    parts: list
    achieved_d: list
    pass_count: int


def _ordered_disjoint_pairs(dim):
    masks = range(1, 1 << dim)
    out = []
    for mi in masks:
        for mj in masks:
            if mi & mj:
                continue
            i_cols = tuple(c for c in range(dim) if mi >> c & 1)
            j_cols = tuple(c for c in range(dim) if mj >> c & 1)
            out.append((i_cols, j_cols))
    return out


def _fiber_counts(part, i_cols, j_cols):
    fibers = {}
    for t in part:
        j_key = tuple(t[c] for c in j_cols)
        fibers.setdefault(j_key, set()).add(tuple(t[c] for c in i_cols))
    return {k: len(v) for k, v in fibers.items()}


def _split_violating_part(part, pairs, d_target):
    """First violating direction splits the part by dyadic fiber-count
    buckets. Returns None when the part is already d_target-regular."""
    for i_cols, j_cols in pairs:
        counts = _fiber_counts(part, i_cols, j_cols)
        if max(counts.values()) <= d_target * min(counts.values()):
            continue
        buckets = {}
        for t in part:
            j_key = tuple(t[c] for c in j_cols)
            level = counts[j_key].bit_length() - 1
            buckets.setdefault(level, []).append(t)
        return [buckets[level] for level in sorted(buckets)]
    return None


def regularize(support, d_target: int = 2) -> RegularPartition:
    """Partition a tuple support so every piece has fiber-count ratios at
    most d_target in every ordered pair of disjoint coordinate directions.

    Iteratively buckets atoms of a violating piece by floor(log2) of their
    fiber count; a violating piece always yields at least two buckets, so
    the piece count strictly grows and the loop terminates.
    """
    atoms = sorted(set(tuple(t) for t in support))
    if not atoms:
        raise DimensionGuard("empty support")
    dim = len(atoms[0])
    if not 1 <= dim <= REGULARIZE_DIM_GUARD:
        raise DimensionGuard(f"dimension {dim} outside [1, {REGULARIZE_DIM_GUARD}]")
    for t in atoms:
        if len(t) != dim:
            raise DimensionGuard("mixed tuple lengths in support")
    if len(atoms) > REGULARIZE_SIZE_GUARD:
        raise SizeGuard(f"{len(atoms)} atoms exceeds {REGULARIZE_SIZE_GUARD}")
    if d_target < 2:
        raise ValueError(f"d_target must be >= 2, got {d_target}")

    pairs = _ordered_disjoint_pairs(dim)
    parts = [atoms]
    passes = 0
    changed = True
    while changed:
        changed = False
        next_parts = []
        for part in parts:
            pieces = _split_violating_part(part, pairs, d_target)
            if pieces is None:
                next_parts.append(part)
            else:
                next_parts.extend(sorted(p) for p in pieces)
                changed = True
        parts = next_parts
        if changed:
            passes += 1

    achieved = []
    for part in parts:
        worst = Fraction(1)
        for i_cols, j_cols in pairs:
            counts = _fiber_counts(part, i_cols, j_cols)
            ratio = Fraction(max(counts.values()), min(counts.values()))
            if ratio > worst:
                worst = ratio
        if worst > d_target:
            raise TheoremViolation(
                f"regularized part still has fiber ratio {worst}"
            )
        achieved.append(worst)
    return RegularPartition(parts=parts, achieved_d=achieved, pass_count=passes)

"""Exact-rational joint distributions and their entropic functionals.

Probability masses are Fractions end to end; floating point enters only
through logarithms. Subset reductions (entropy, support, extreme masses)
are cached per distribution, and any distribution whose masses share a
common denominator below 2**62 is lowered once to int64 mass arrays so the
accelerated grouping kernel can do the heavy lifting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _accel
from .errors import (
    ArityGuard,
    EmptyIndexSet,
    ExpressionSyntaxError,
    MissingKernelRow,
    NumericalFailure,
    OverlappingSets,
    RowNotNormalized,
    UnknownVariableIndex,
    ZeroProbabilityAtom,
)

INT_LOWER_LIMIT = 2**62
MI_CLAMP = 1e-9
UNIFORMITY_ARITY_GUARD = 5

ONE = Fraction(1)


def _log2_fraction(fr: Fraction) -> float:
    return math.log2(fr.numerator) - math.log2(fr.denominator)


def _as_index_set(spec, arity, allow_empty=False):
    if spec is None:
        spec = ()
    if isinstance(spec, int):
        spec = (spec,)
    out = frozenset(spec)
    for i in out:
        if not isinstance(i, int) or not 0 <= i < arity:
            raise UnknownVariableIndex(f"variable {i!r} outside arity {arity}")
    if not out and not allow_empty:
        raise EmptyIndexSet("index set must be nonempty")
    return out


def _coerce_mass(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"masses must be exact rationals, got {type(value).__name__}")


@dataclass(frozen=True)
class SubsetStats:
    """Entropy plus support and extreme masses of one sub-joint."""

    entropy: float
    support: int
    max_mass: Fraction
    min_mass: Fraction

    @property
    def mass_ratio(self) -> Fraction:
        return self.max_mass / self.min_mass


class JointDistribution:
    """Finitely supported joint distribution over tuple-indexed symbols.

    Atoms map id tuples to positive Fractions summing to exactly 1; the
    alphabets give each coordinate its symbol table, and ids index into it.
    """

    __slots__ = ("arity", "atoms", "alphabets", "_rcache", "_intf")

    def __init__(self, atoms, alphabets=None, _trusted=False):
        items = sorted(atoms.items())
        if not items:
            raise ZeroProbabilityAtom("distribution needs at least one atom")
        arity = len(items[0][0])
        if arity < 1:
            raise ArityGuard("arity must be at least 1")
        if not _trusted:
            total = Fraction(0)
            for t, m in items:
                if len(t) != arity:
                    raise ArityGuard(f"atom {t!r} has arity {len(t)}, expected {arity}")
                m = _coerce_mass(m)
                if m <= 0:
                    raise ZeroProbabilityAtom(f"atom {t!r} has non-positive mass")
                total += m
            if total != 1:
                raise ValueError(f"masses sum to {total}, not 1")
            items = [(t, _coerce_mass(m)) for t, m in items]
        if alphabets is None:
            for t, _ in items:
                for v in t:
                    if not isinstance(v, int) or v < 0:
                        raise UnknownVariableIndex(f"atom id {v!r} is not a natural number")
            alphabets = tuple(
                tuple(range(max(t[i] for t, _ in items) + 1)) for i in range(arity)
            )
        else:
            alphabets = tuple(tuple(a) for a in alphabets)
            if len(alphabets) != arity:
                raise ArityGuard("alphabets length does not match arity")
            for t, _ in items:
                for i, v in enumerate(t):
                    if not 0 <= v < len(alphabets[i]):
                        raise UnknownVariableIndex(
                            f"id {v} outside alphabet {i} of size {len(alphabets[i])}"
                        )
        self.arity = arity
        self.atoms = dict(items)
        self.alphabets = alphabets
        self._rcache = {}
        self._intf = None

    # ------------------------------------------------------------ construction

    @classmethod
    def from_integer_masses(cls, atom_tuples, masses, alphabets) -> "JointDistribution":
        """Build from int64 masses over their own sum; skips revalidation."""
        total = int(sum(masses))
        if total <= 0:
            raise ZeroProbabilityAtom("total mass must be positive")
        atoms = {}
        for t, m in zip(atom_tuples, masses):
            m = int(m)
            if m <= 0:
                raise ZeroProbabilityAtom(f"atom {t!r} has non-positive mass")
            atoms[tuple(t)] = Fraction(m, total)
        dist = cls(atoms, alphabets, _trusted=True)
        return dist

    def to_json_dict(self) -> dict:
        return {
            "arity": self.arity,
            "alphabets": [list(a) for a in self.alphabets],
            "atoms": [
                {"t": list(t), "p": f"{m.numerator}/{m.denominator}"}
                for t, m in self.atoms.items()
            ],
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "JointDistribution":
        atoms = {tuple(a["t"]): Fraction(a["p"]) for a in doc["atoms"]}
        return cls(atoms, doc["alphabets"])

    # -------------------------------------------------------------- reductions

    def _int_form(self):
        """(ids, masses, denominator, sizes) in int64, or None if too big."""
        if self._intf is None:
            d = 1
            for m in self.atoms.values():
                d = d * m.denominator // math.gcd(d, m.denominator)
                if d > INT_LOWER_LIMIT:
                    self._intf = False
                    return None
            ids = np.array(list(self.atoms.keys()), dtype=np.int64).reshape(
                len(self.atoms), self.arity
            )
            masses = np.fromiter(
                (m.numerator * (d // m.denominator) for m in self.atoms.values()),
                np.int64,
                len(self.atoms),
            )
            sizes = tuple(len(a) for a in self.alphabets)
            self._intf = (ids, masses, d, sizes)
        return self._intf if self._intf is not False else None

    def subset_stats(self, index_set) -> SubsetStats:
        fs = _as_index_set(index_set, self.arity, allow_empty=True)
        got = self._rcache.get(fs)
        if got is not None:
            return got
        if not fs:
            got = SubsetStats(0.0, 1, ONE, ONE)
            self._rcache[fs] = got
            return got
        cols = sorted(fs)
        form = self._int_form()
        if form is not None:
            ids, masses, d, sizes = form
            stride = 1
            strides = []
            for c in reversed(cols):
                strides.append(stride)
                stride *= sizes[c]
            if stride <= INT_LOWER_LIMIT:
                keys = ids[:, cols] @ np.array(strides[::-1], dtype=np.int64)
                groups, s, mx, mn = _accel.group_reduce(keys, masses)
                h = math.log2(d) - s / d
                got = SubsetStats(h, int(groups), Fraction(int(mx), d), Fraction(int(mn), d))
            else:
                got = self._dict_stats_int(cols, masses, d)
            self._rcache[fs] = got
            return got
        acc = {}
        for t, m in self.atoms.items():
            key = tuple(t[c] for c in cols)
            acc[key] = acc.get(key, 0) + m
        h = -math.fsum(float(p) * _log2_fraction(p) for p in acc.values())
        got = SubsetStats(h, len(acc), max(acc.values()), min(acc.values()))
        self._rcache[fs] = got
        return got

    def _dict_stats_int(self, cols, masses, d):
        acc = {}
        for t, m in zip(self.atoms.keys(), masses):
            key = tuple(t[c] for c in cols)
            acc[key] = acc.get(key, 0) + int(m)
        s = math.fsum(m * math.log2(m) for m in acc.values())
        h = math.log2(d) - s / d
        return SubsetStats(h, len(acc), Fraction(max(acc.values()), d), Fraction(min(acc.values()), d))

    def _h(self, fs: frozenset) -> float:
        return self.subset_stats(fs).entropy

    # ------------------------------------------------------------- functionals

    def entropy(self, index_set, given=()) -> float:
        """H(X_I | X_J) in bits. Overlap is fine: H(X|X) is exactly 0."""
        i = _as_index_set(index_set, self.arity)
        j = _as_index_set(given, self.arity, allow_empty=True)
        return self._h(i | j) - self._h(j)

    def _mi_raw(self, i, j, k) -> float:
        return self._h(i | k) + self._h(j | k) - self._h(i | j | k) - self._h(k)

    def mutual_information(self, left, right, given=()) -> float:
        """I(X_I : X_J | X_K), tiny negatives clamped to zero."""
        i = _as_index_set(left, self.arity)
        j = _as_index_set(right, self.arity)
        k = _as_index_set(given, self.arity, allow_empty=True)
        if i & j or i & k or j & k:
            raise OverlappingSets("mutual information roles must be disjoint")
        v = self._mi_raw(i, j, k)
        if -MI_CLAMP <= v < 0.0:
            return 0.0
        return v

    def ingleton(self, x, y, a, b, given=()) -> float:
        """Ingleton expression I(X:Y|A) + I(X:Y|B) + I(A:B) - I(X:Y).

        All four roles must be pairwise disjoint and disjoint from the
        conditioning set.
        """
        u = _as_index_set(given, self.arity, allow_empty=True)
        roles = [_as_index_set(r, self.arity) for r in (x, y, a, b)]
        seen = u
        for r in roles:
            if r & seen:
                raise OverlappingSets("ingleton roles must be pairwise disjoint")
            seen |= r
        rx, ry, ra, rb = roles
        return (
            self._mi_raw(rx, ry, ra | u)
            + self._mi_raw(rx, ry, rb | u)
            + self._mi_raw(ra, rb, u)
            - self._mi_raw(rx, ry, u)
        )

    def ell_metric(self, x, y, given=()) -> float:
        """The entropy pseudo-distance (H(X|Y,Z) + H(Y|X,Z)) / 2.

        Computed both as 0.5 H(X|Z) + 0.5 H(Y|Z) - I(X:Y|Z) and in the
        conditional form above; the two must agree to 1e-9.
        """
        i = _as_index_set(x, self.arity)
        j = _as_index_set(y, self.arity)
        k = _as_index_set(given, self.arity, allow_empty=True)
        form1 = (
            0.5 * (self._h(i | k) - self._h(k))
            + 0.5 * (self._h(j | k) - self._h(k))
            - self._mi_raw(i, j, k)
        )
        form2 = 0.5 * (
            (self._h(i | j | k) - self._h(j | k))
            + (self._h(i | j | k) - self._h(i | k))
        )
        if abs(form1 - form2) > 1e-9:
            raise NumericalFailure(
                f"ell forms disagree: {form1!r} vs {form2!r}"
            )
        return form2

    # ------------------------------------------------------------------- views

    def marginal(self, index_set) -> "JointDistribution":
        fs = _as_index_set(index_set, self.arity)
        cols = sorted(fs)
        acc = {}
        for t, m in self.atoms.items():
            key = tuple(t[c] for c in cols)
            acc[key] = acc.get(key, Fraction(0)) + m
        return JointDistribution(
            acc, tuple(self.alphabets[c] for c in cols), _trusted=True
        )

    def condition(self, index_set, values) -> "JointDistribution":
        """Condition on X_J = values; remaining variables keep their order."""
        fs = _as_index_set(index_set, self.arity)
        cols = sorted(fs)
        values = tuple(values)
        if len(values) != len(cols):
            raise ArityGuard("values length does not match index set")
        keep = [c for c in range(self.arity) if c not in fs]
        if not keep:
            raise EmptyIndexSet("conditioning away every variable")
        hit = {}
        total = Fraction(0)
        for t, m in self.atoms.items():
            if tuple(t[c] for c in cols) == values:
                key = tuple(t[c] for c in keep)
                hit[key] = hit.get(key, Fraction(0)) + m
                total += m
        if total == 0:
            raise ZeroProbabilityAtom(f"event {values!r} on {cols!r} has zero mass")
        atoms = {t: m / total for t, m in hit.items()}
        return JointDistribution(
            atoms, tuple(self.alphabets[c] for c in keep), _trusted=True
        )

    def restrict_to(self, atom_subset) -> "JointDistribution":
        """Condition on membership in a set of full atoms."""
        wanted = set(tuple(t) for t in atom_subset)
        total = Fraction(0)
        atoms = {}
        for t in wanted:
            m = self.atoms.get(t)
            if m is None:
                raise ZeroProbabilityAtom(f"atom {t!r} not in support")
            atoms[t] = m
            total += m
        return JointDistribution(
            {t: m / total for t, m in atoms.items()}, self.alphabets, _trusted=True
        )

    def extend(self, kernel: "Kernel") -> "JointDistribution":
        """Adjoin one variable drawn from a kernel keyed by full atoms."""
        new_atoms = {}
        for t, m in self.atoms.items():
            row = kernel.table.get(t)
            if row is None:
                raise MissingKernelRow(f"no kernel row for atom {t!r}")
            for s, w in enumerate(row):
                if w:
                    new_atoms[t + (s,)] = m * w
        return JointDistribution(
            new_atoms, self.alphabets + (kernel.target_alphabet,), _trusted=True
        )

    def __repr__(self):
        return f"JointDistribution(arity={self.arity}, atoms={len(self.atoms)})"


def entropy_vector(dist: JointDistribution) -> dict:
    """Entropy of every nonempty variable subset, keyed by frozenset."""
    out = {}
    n = dist.arity
    for mask in range(1, 1 << n):
        fs = frozenset(i for i in range(n) if mask >> i & 1)
        out[fs] = dist._h(fs)
    return out


class Kernel:
    """Conditional distribution of one fresh variable given source atoms.

    table maps each source atom tuple to a row of Fractions over the target
    alphabet; every row must sum to exactly 1.
    """

    __slots__ = ("table", "target_alphabet")

    def __init__(self, table, target_alphabet=None):
        clean = {}
        width = None
        for t, row in table.items():
            row = tuple(_coerce_mass(v) for v in row)
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise RowNotNormalized(f"row for {t!r} has length {len(row)}, not {width}")
            if any(v < 0 for v in row):
                raise RowNotNormalized(f"row for {t!r} has a negative entry")
            if sum(row) != 1:
                raise RowNotNormalized(f"row for {t!r} sums to {sum(row)}, not 1")
            clean[tuple(t)] = row
        if not clean:
            raise MissingKernelRow("kernel has no rows")
        if target_alphabet is None:
            target_alphabet = tuple(range(width))
        else:
            target_alphabet = tuple(target_alphabet)
            if len(target_alphabet) != width:
                raise RowNotNormalized("target alphabet does not match row width")
        self.table = clean
        self.target_alphabet = target_alphabet

    @classmethod
    def deterministic(cls, mapping, size) -> "Kernel":
        table = {}
        for t, s in mapping.items():
            row = [Fraction(0)] * size
            row[s] = ONE
            table[t] = row
        return cls(table)

    @classmethod
    def constant(cls, atom_tuples, size=1, symbol=0) -> "Kernel":
        return cls.deterministic({tuple(t): symbol for t in atom_tuples}, size)

    def to_json_rows(self, atom_order) -> list:
        rows = []
        for t in atom_order:
            row = self.table.get(tuple(t))
            if row is None:
                raise MissingKernelRow(f"no kernel row for atom {t!r}")
            rows.append([f"{v.numerator}/{v.denominator}" for v in row])
        return rows

    @classmethod
    def from_json_rows(cls, atom_order, rows) -> "Kernel":
        if len(rows) != len(atom_order):
            raise MissingKernelRow(
                f"{len(rows)} rows for {len(atom_order)} atoms"
            )
        table = {
            tuple(t): [Fraction(v) for v in row]
            for t, row in zip(atom_order, rows)
        }
        return cls(table)


def extend_independent(dist, kernel_a, kernel_b) -> JointDistribution:
    """Adjoin two variables, conditionally independent given the source atom.

    Both kernels are keyed by the full atoms of dist, matching the
    (P(A|source), P(B|source)) table layout used by the search module.
    """
    atoms = {}
    for t, m in dist.atoms.items():
        row_a = kernel_a.table.get(t)
        row_b = kernel_b.table.get(t)
        if row_a is None or row_b is None:
            raise MissingKernelRow(f"no kernel row for atom {t!r}")
        for s, w in enumerate(row_a):
            if not w:
                continue
            mw = m * w
            for u, v in enumerate(row_b):
                if v:
                    atoms[t + (s, u)] = mw * v
    return JointDistribution(
        atoms,
        dist.alphabets + (kernel_a.target_alphabet, kernel_b.target_alphabet),
        _trusted=True,
    )


def uniform_pair(graph) -> JointDistribution:
    """The uniform distribution on the edges of a biregular bipartite graph."""
    e_count = len(graph.edges)
    mass = Fraction(1, e_count)
    atoms = {e: mass for e in graph.edges}
    ax = tuple(graph.x_labels) if graph.x_labels else tuple(range(graph.x_size))
    ay = tuple(graph.y_labels) if graph.y_labels else tuple(range(graph.y_size))
    return JointDistribution(atoms, (ax, ay), _trusted=True)


# ------------------------------------------------------------------ uniformity

@dataclass(frozen=True)
class UniformityWitness:
    index_set: tuple
    cond_set: tuple | None
    high_atom: tuple
    low_atom: tuple
    ratio: Fraction


@dataclass(frozen=True)
class UniformityReport:
    delta_uniform: Fraction
    delta_regular: Fraction
    uniform_witness: UniformityWitness
    regular_witness: UniformityWitness | None

    @property
    def delta(self) -> Fraction:
        return max(self.delta_uniform, self.delta_regular)

    def to_json_dict(self):
        return {
            "delta": float(self.delta),
            "delta_uniform": float(self.delta_uniform),
            "delta_regular": float(self.delta_regular),
        }


def uniformity_report(dist: JointDistribution) -> UniformityReport:
    """Measure how far a joint is from uniform: mass ratios of every
    sub-joint and support-count ratios of every conditional fiber.
    """
    n = dist.arity
    if n > UNIFORMITY_ARITY_GUARD:
        raise ArityGuard(f"arity {n} exceeds {UNIFORMITY_ARITY_GUARD}")

    subsets = []
    for mask in range(1, 1 << n):
        subsets.append(tuple(i for i in range(n) if mask >> i & 1))

    best_u = None
    for cols in subsets:
        acc = {}
        for t, m in dist.atoms.items():
            key = tuple(t[c] for c in cols)
            acc[key] = acc.get(key, Fraction(0)) + m
        hi = max(acc, key=acc.get)
        lo = min(acc, key=acc.get)
        ratio = acc[hi] / acc[lo]
        if best_u is None or ratio > best_u.ratio:
            best_u = UniformityWitness(cols, None, hi, lo, ratio)

    best_r = None
    for i_cols in subsets:
        i_set = set(i_cols)
        for j_cols in subsets:
            if i_set & set(j_cols):
                continue
            fibers = {}
            for t in dist.atoms:
                j_key = tuple(t[c] for c in j_cols)
                fibers.setdefault(j_key, set()).add(tuple(t[c] for c in i_cols))
            hi = max(fibers, key=lambda k: len(fibers[k]))
            lo = min(fibers, key=lambda k: len(fibers[k]))
            ratio = Fraction(len(fibers[hi]), len(fibers[lo]))
            if best_r is None or ratio > best_r.ratio:
                best_r = UniformityWitness(i_cols, j_cols, hi, lo, ratio)

    return UniformityReport(
        delta_uniform=best_u.ratio,
        delta_regular=best_r.ratio if best_r else ONE,
        uniform_witness=best_u,
        regular_witness=best_r,
    )


# ------------------------------------------------------------------ expressions

@dataclass(frozen=True)
class Query:
    """A parsed entropy expression, evaluable against any distribution."""

    kind: str
    groups: tuple[tuple[int, ...], ...]
    cond: tuple[int, ...]

    def evaluate(self, dist: JointDistribution) -> float:
        top = max(max(g) for g in self.groups)
        if self.cond:
            top = max(top, max(self.cond))
        if top >= dist.arity:
            raise UnknownVariableIndex(
                f"variable {top} outside arity {dist.arity}"
            )
        if self.kind == "H":
            return dist.entropy(self.groups[0], self.cond)
        if self.kind == "I":
            return dist.mutual_information(self.groups[0], self.groups[1], self.cond)
        if self.kind == "Ing":
            return dist.ingleton(*self.groups, self.cond)
        return dist.ell_metric(self.groups[0], self.groups[1], self.cond)


class _Scanner:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def fail(self, expected):
        raise ExpressionSyntaxError(self.text, self.pos, expected)

    def expect(self, ch):
        if self.peek() != ch:
            self.fail(f"'{ch}'")
        self.pos += 1

    def parse_int(self):
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.fail("a variable index")
        return int(self.text[start:self.pos])

    def parse_set(self):
        out = [self.parse_int()]
        while self.peek() == ",":
            self.pos += 1
            out.append(self.parse_int())
        return tuple(out)


def parse_expression(text: str) -> Query:
    """Parse one of H(S), H(S|S), I(S:S), I(S:S|S), Ing(v,v,v,v),
    Ing(v,v,v,v|S), L(v,v), L(v,v|S) where S is a comma list of variable
    indices and v a single index.
    """
    sc = _Scanner(text)
    sc.skip_ws()
    start = sc.pos
    while sc.pos < len(sc.text) and sc.text[sc.pos].isalpha():
        sc.pos += 1
    name = sc.text[start:sc.pos]
    if name not in ("H", "I", "Ing", "L"):
        sc.pos = start
        sc.fail("one of H, I, Ing, L")
    sc.expect("(")

    cond = ()
    if name == "H":
        groups = (sc.parse_set(),)
        if sc.peek() == "|":
            sc.pos += 1
            cond = sc.parse_set()
        if sc.peek() != ")":
            sc.fail("'|' or ')'")
        sc.pos += 1
    elif name == "I":
        left = sc.parse_set()
        sc.expect(":")
        right = sc.parse_set()
        groups = (left, right)
        if sc.peek() == "|":
            sc.pos += 1
            cond = sc.parse_set()
        if sc.peek() != ")":
            sc.fail("'|' or ')'")
        sc.pos += 1
    else:
        count = 4 if name == "Ing" else 2
        vs = [(sc.parse_int(),)]
        for _ in range(count - 1):
            sc.expect(",")
            vs.append((sc.parse_int(),))
        groups = tuple(vs)
        if sc.peek() == "|":
            sc.pos += 1
            cond = sc.parse_set()
        if sc.peek() != ")":
            sc.fail("'|' or ')'")
        sc.pos += 1

    sc.skip_ws()
    if sc.pos != len(sc.text):
        sc.fail("end of input")
    return Query(kind=name, groups=groups, cond=cond)

"""Prime field arithmetic, canonical subspace enumeration, Gaussian binomials."""

from __future__ import annotations

import itertools

from .errors import (
    AmbientTooLarge,
    DimensionOutOfRange,
    InverseOfZero,
    NonPrimeModulus,
)

# p**n above this makes dense vector enumeration unreasonable on a desk.
ENUMERATION_GUARD = 2**20


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class PrimeField:
    """Arithmetic modulo a prime p. Elements are ints reduced mod p."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise NonPrimeModulus(f"{p} is not prime")
        self.p = p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise InverseOfZero(f"0 has no inverse mod {self.p}")
        return pow(a, self.p - 2, self.p)


def field_arith(p: int, op: str, a: int, b: int | None = None):
    """One field operation by name. Unary ops ignore b."""
    f = PrimeField(p)
    if op in ("add", "sub", "mul"):
        if b is None:
            raise ValueError(f"{op} needs two operands")
        return getattr(f, op)(a, b)
    if op == "neg":
        return f.neg(a)
    if op == "inv":
        return f.inv(a)
    raise ValueError(f"unknown op {op!r}")


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of an n-dimensional space over GF(q).

    Exact integer product formula; q only needs to be >= 2 here.
    """
    if not 0 <= k <= n:
        raise DimensionOutOfRange(f"need 0 <= k <= n, got k={k}, n={n}")
    if q < 2:
        raise ValueError(f"q must be >= 2, got {q}")
    num = 1
    den = 1
    for i in range(k):
        num *= q**n - q**i
        den *= q**k - q**i
    quot, rem = divmod(num, den)
    assert rem == 0
    return quot


def enumerate_vectors(p: int, n: int) -> list[tuple[int, ...]]:
    """All of GF(p)^n in lexicographic order, guarded to desk scale."""
    if p**n > ENUMERATION_GUARD:
        raise AmbientTooLarge(f"p**n = {p**n} exceeds {ENUMERATION_GUARD}")
    return list(itertools.product(range(p), repeat=n))


class Subspace:
    """A subspace of GF(p)^n held as its reduced row echelon basis.

    The rref basis is the canonical representative, so equality and hashing
    on (p, n, basis) identify subspaces exactly.
    """

    __slots__ = ("p", "n", "basis", "_pivots", "_hash")

    def __init__(self, p: int, n: int, basis: tuple[tuple[int, ...], ...]):
        self.p = p
        self.n = n
        self.basis = basis
        self._pivots = tuple(next(i for i, v in enumerate(row) if v) for row in basis)
        self._hash = hash((p, n, basis))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @classmethod
    def from_vectors(cls, p: int, n: int, vectors) -> "Subspace":
        return cls(p, n, rref(vectors, p, n))

    def contains_vector(self, vec) -> bool:
        r = [v % self.p for v in vec]
        for row, c in zip(self.basis, self._pivots):
            f = r[c]
            if f:
                r = [(x - f * y) % self.p for x, y in zip(r, row)]
        return not any(r)

    def contains(self, other: "Subspace") -> bool:
        """True when every basis vector of `other` lies in this space."""
        return all(self.contains_vector(row) for row in other.basis)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.p == other.p
            and self.n == other.n
            and self.basis == other.basis
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Subspace(p={self.p}, n={self.n}, basis={self.basis})"

    def label(self) -> str:
        if not self.basis:
            return "0"
        return ";".join(",".join(str(v) for v in row) for row in self.basis)


def rref(rows, p: int, n: int) -> tuple[tuple[int, ...], ...]:
    """Reduced row echelon form over GF(p); zero rows dropped."""
    f = PrimeField(p)
    mat = [list(v % p for v in row) for row in rows]
    for row in mat:
        if len(row) != n:
            raise DimensionOutOfRange(f"vector length {len(row)} != n={n}")
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(mat)) if mat[i][col]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        scale = f.inv(mat[r][col])
        mat[r] = [(v * scale) % p for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col]:
                fac = mat[i][col]
                mat[i] = [(a - fac * b) % p for a, b in zip(mat[i], mat[r])]
        r += 1
        if r == len(mat):
            break
    return tuple(tuple(row) for row in mat[:r] if any(row))


def enumerate_subspaces(p: int, n: int, k: int) -> list[Subspace]:
    """Every k-dimensional subspace of GF(p)^n, one canonical rref basis each.

    Deterministic order: lexicographic on the echelon basis matrices.
    """
    if not is_prime(p):
        raise NonPrimeModulus(f"{p} is not prime")
    if not 0 <= k <= n:
        raise DimensionOutOfRange(f"need 0 <= k <= n, got k={k}, n={n}")
    if p**n > ENUMERATION_GUARD:
        raise AmbientTooLarge(f"p**n = {p**n} exceeds {ENUMERATION_GUARD}")

    out = []
    for pivots in itertools.combinations(range(n), k):
        # Free entries sit right of their row's pivot, off the pivot columns.
        free = [
            (i, c)
            for i in range(k)
            for c in range(pivots[i] + 1, n)
            if c not in pivots
        ]
        for values in itertools.product(range(p), repeat=len(free)):
            mat = [[0] * n for _ in range(k)]
            for i, c in zip(range(k), pivots):
                mat[i][c] = 1
            for (i, c), v in zip(free, values):
                mat[i][c] = v
            out.append(Subspace(p, n, tuple(tuple(row) for row in mat)))
    out.sort(key=lambda s: s.basis)
    assert len(out) == gaussian_binomial(n, k, p)
    return out

"""Error taxonomy.

Everything the library raises on purpose derives from IngletonError so the
CLI can map failures onto stable exit codes (usage=1, validation=2,
theorem audit=3).
"""


class IngletonError(Exception):
    """Base class for all errors raised by this package."""


class NonPrimeModulus(IngletonError):
    """A field modulus or family parameter q is not prime."""


class InverseOfZero(IngletonError):
    """Multiplicative inverse of 0 requested."""


class DimensionOutOfRange(IngletonError):
    """Subspace or family dimensions violate their admissible range."""


class SizeGuard(IngletonError):
    """Input exceeds the dense, desk-scale limits this code is built for."""


class AmbientTooLarge(SizeGuard):
    """p**n exceeds the vector enumeration guard."""


class NotBiregular(IngletonError):
    """Degree check failed; carries the first offending vertex."""

    def __init__(self, side, vertex, degree, expected):
        self.side = side
        self.vertex = vertex
        self.degree = degree
        self.expected = expected
        super().__init__(
            f"vertex {vertex} on side {side!r} has degree {degree}, expected {expected}"
        )


class DuplicateEdge(IngletonError):
    """The same edge appears twice in an edge list."""


class IndexOutOfRange(IngletonError):
    """A vertex id falls outside the declared part sizes."""


class NumericalFailure(IngletonError):
    """A numerical routine missed its own accuracy contract."""


class EmptySubset(IngletonError):
    """Mixing check called with an empty vertex subset."""


class EmptySubgraph(IngletonError):
    """Subgraph with no edges where at least one is required."""


class TheoremViolation(IngletonError):
    """An audit that the underlying mathematics guarantees has failed."""


class CompleteBipartite(IngletonError):
    """Second singular value is identically zero, slack report undefined."""


class MissingKernelRow(IngletonError):
    """Kernel has no row for an atom of positive mass."""


class RowNotNormalized(IngletonError):
    """Kernel row does not sum to exactly 1 or has a negative entry."""


class EmptyIndexSet(IngletonError):
    """A variable index set that must be nonempty is empty."""


class OverlappingSets(IngletonError):
    """Variable roles that must be disjoint overlap."""


class ZeroProbabilityAtom(IngletonError):
    """Conditioning on an event of probability zero."""


class ArityGuard(IngletonError):
    """Distribution arity outside what the operation supports."""


class ZeroEntropyInput(IngletonError):
    """Splitting a distribution with a single atom."""


class DimensionGuard(IngletonError):
    """Support dimension outside the regularizer's range."""


class NotSubsupported(IngletonError):
    """Pair marginal is not carried by the reference graph's edges."""


class BelowEpsilonThreshold(IngletonError):
    """Mutual information of the pair is below the certification threshold."""


class SearchSpaceTooLarge(IngletonError):
    """Exhaustive kernel enumeration would exceed the search guard."""


class UnknownVariableIndex(IngletonError):
    """Expression references a variable the distribution does not have."""


class ExpressionSyntaxError(IngletonError):
    """Parse failure in the entropy expression mini-language."""

    def __init__(self, text, position, expected):
        self.text = text
        self.position = position
        self.expected = expected
        super().__init__(f"at position {position}: expected {expected}")

"""Exception types shared across the package."""


class LagstabError(Exception):
    """Base class for all library errors."""


class SingularMatrix(LagstabError):
    """Matrix has zero determinant (or generators do not span full rank)."""


class BudgetExceeded(LagstabError):
    """An enumeration would exceed the configured candidate budget."""


class FormDimensionMismatch(LagstabError):
    """Bilinear form kind is incompatible with the ambient dimension."""


class NotInShell(LagstabError):
    """Lattice is not a member of the requested finite-level shell."""


class NonGenericXi(LagstabError):
    """Stability parameter takes an integer value on some root."""


class NonZeroIndex(LagstabError):
    """Operation requires an index-zero lattice."""


class NotAdjacent(LagstabError):
    """Permutations do not differ by a single adjacent transposition."""


class XiOutOfWindow(LagstabError):
    """Stability parameter leaves the positivity window of the torus weights."""


class PartitionViolation(LagstabError):
    """A lattice matched zero or several strata; signals a bug or bad input."""


class NotNested(LagstabError):
    """Parabolic pair is not nested (flag does not refine flag)."""


class NotUnipotentForP(LagstabError):
    """Matrix is not block-upper-triangular unipotent for the given flag."""


class ShapeMismatch(LagstabError):
    """Partition-shaped arguments have incompatible totals."""


class OrderExceeded(LagstabError):
    """Requested truncation order exceeds the carried series order."""


class InsufficientPrimes(LagstabError):
    """Not enough sample primes to determine the interpolated polynomial."""


class NonIntegralQuotient(LagstabError):
    """Free-action division failed to be exact; signals a bug."""

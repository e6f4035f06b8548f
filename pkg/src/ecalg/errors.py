"""Exception types shared across the package."""


class ECAlgError(Exception):
    """Base class for all package-specific errors."""


class VarCountMismatch(ECAlgError):
    """Binary operation on polynomials with different variable counts."""


class IndexOutOfRange(ECAlgError):
    """Variable or block index outside the valid range."""


class InexactDivision(ECAlgError):
    """No exact quotient exists.  On cluster-recurrence inputs this would
    contradict the Laurent phenomenon, i.e. it signals a bug."""


class EmptyBlock(ECAlgError):
    """A set-partition block must be nonempty."""


class IntegralityViolation(ECAlgError):
    """A fully assembled polynomial has a non-integer coefficient."""


class NotSymmetric(ECAlgError):
    """Monomial-basis expansion found two monomials in one orbit with
    different coefficients."""


class SizeMismatch(ECAlgError):
    """Partition arguments of unequal size where equal size is required."""


class SingularTransition(ECAlgError):
    """A basis-transition linear system had no pivot (signals a bug)."""


class NonIntegerResult(ECAlgError):
    """The modified binomial coefficient product was not an integer
    (signals a bug)."""


class BookkeepingMismatch(ECAlgError):
    """A Laurent exponent pair does not invert to a valid dimension
    pair (signals a bug)."""


class PreconditionViolated(ECAlgError):
    """An operation was called outside its stated hypotheses."""


class TruncationTooSmall(ECAlgError):
    """The comparison window of a truncated-series identity is empty."""

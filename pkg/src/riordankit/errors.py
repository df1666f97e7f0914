"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input violates a mathematical precondition."""


class TruncationMismatch(DomainError):
    """Two series (or a series and a matrix) disagree on truncation order."""


class NotInvertible(DomainError):
    """Division by a series with vanishing constant term."""


class InternalContractError(RuntimeError):
    """A construction that theory says must succeed did not.

    Raised when the affine solver meets an inconsistent system or a
    nonlinear product during a factorization; it always means a bug.
    """

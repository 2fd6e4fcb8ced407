"""Exception hierarchy shared by every module."""


class QxError(Exception):
    """Base class for all library errors."""


class NonPrimePower(QxError, ValueError):
    pass


class UnsupportedOrder(QxError, ValueError):
    pass


class DivisionByZero(QxError, ZeroDivisionError):
    pass


class DimensionMismatch(QxError, ValueError):
    pass


class NonCanonical(QxError, ValueError):
    """A serialized subspace whose basis is not in reduced row echelon form."""


class NotNested(QxError, ValueError):
    pass


class TypeViolation(QxError, ValueError):
    """A subspace argument has the wrong (dim, dim ∩ W) type."""


class BadC(TypeViolation):
    pass


class HypothesisViolated(QxError, ValueError):
    pass


class NonIntegral(QxError, ArithmeticError):
    pass


class BudgetExceeded(QxError, RuntimeError):
    pass


class EmptyFamily(QxError, ValueError):
    pass


class MalformedInput(QxError, ValueError):
    pass


class InternalInconsistency(QxError, RuntimeError):
    pass

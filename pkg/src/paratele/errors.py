"""Exception types shared across the package."""


class ZeroPolynomialError(ValueError):
    """An operation that requires a nonzero polynomial received zero."""


class InexactDivisionError(ArithmeticError):
    """Exact polynomial division was requested but the division has a remainder."""


class OperandZeroError(ValueError):
    """An operator-algebra operation received a zero operand it cannot accept."""


class MultiPartElementError(ValueError):
    """A single-term operation received an element with several parts."""


class NotCompatibleError(ValueError):
    """Inputs violate the pairwise integrability conditions D_i(f_j) = D_j(f_i)."""


class CrossClassNonzeroError(ValueError):
    """Compatibility is violated across similarity classes of the inputs."""


class NoParallelTelescoperError(ValueError):
    """No parallel telescoper exists for the given inputs (a mathematical negative)."""


class IncompatibleSystemError(ValueError):
    """The right-hand sides of a first-order system are not compatible."""


class MaxOrderExceededError(RuntimeError):
    """Telescoper search exceeded the configured order cap.

    Existence theory guarantees termination for valid inputs, so hitting the
    cap signals a bug or a pathological input, never a silent failure.
    """


class XFreenessViolatedError(RuntimeError):
    """A telescoper that must have coefficients free of x1..xn does not.

    This is an internal invariant breach: the theory guarantees x-freeness on
    the paths where it is asserted, so a violation means a bug.
    """

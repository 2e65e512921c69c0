"""Exception hierarchy shared by every subpackage."""


class SloshError(Exception):
    """Base class for all errors raised by sloshspot."""


class NonRemovableSingularity(SloshError, ValueError):
    """The integrand numerator does not vanish at k = nu."""


class SingularPoint(SloshError, ValueError):
    """Evaluation requested too close to one of the points (+-pi, 0)."""


class OutOfRange(SloshError, ValueError):
    """Argument lies outside the region where a representation is valid."""


class QuadratureFailure(SloshError, ArithmeticError):
    pass


class NoConvergence(SloshError, ArithmeticError):
    pass


class NotASaddle(SloshError, ArithmeticError):
    pass


class NoSignChange(SloshError, ValueError):
    pass


class StallAtStagnation(SloshError, ArithmeticError):
    """Continuation ran into a vanishing gradient that is not a known saddle."""


class BudgetExceeded(SloshError, ArithmeticError):
    pass


class AssemblyFailure(SloshError, RuntimeError):
    pass


class NoSurfaceZero(SloshError, ValueError):
    pass


class NoInteriorMinimum(SloshError, ValueError):
    pass


class DegenerateGradient(SloshError, ArithmeticError):
    pass


class LevelOutOfRange(SloshError, ValueError):
    pass

"""Exception hierarchy shared by every pickspace app.

Each exception carries the process exit code the management commands map it
to: 1 for invalid input, 2 when a space lacks the complete Pick property or a
reconstruction is infeasible, 3 for numerical breakdown.
"""


class PickSpaceError(Exception):
    """Base class of all pickspace errors."""

    exit_code = 1

    def __init__(self, msg='', **details):
        super().__init__(msg)
        self.msg = msg
        self.details = details

    def as_dict(self):
        return {'error': type(self).__name__, 'message': self.msg, **self.details}


# --- invalid input (exit 1) ---


class ValidationFailure(PickSpaceError):
    """Raised when an input violates a documented precondition."""

    exit_code = 1

    def __init__(self, msg='', report=None, **details):
        super().__init__(msg, **details)
        self.report = report


class NotHermitian(ValidationFailure):
    pass


class NotPositiveDefinite(ValidationFailure):
    pass


class Reducible(ValidationFailure):
    """Two kernels are orthogonal or parallel."""

    def __init__(self, msg='', pair=None, report=None):
        super().__init__(msg, report=report, pair=list(pair) if pair else None)
        self.pair = pair


class DimensionMismatch(ValidationFailure):
    pass


class OutOfBall(ValidationFailure):
    pass


class SizeMismatch(ValidationFailure):
    pass


class DegenerateTriple(ValidationFailure):
    pass


class DegenerateArg(ValidationFailure):
    pass


class WrongDimension(ValidationFailure):
    pass


class NotTreeKernel(ValidationFailure):
    pass


class ZeroEdgeWeight(ValidationFailure):
    pass


class HypothesisFailed(ValidationFailure):
    pass


class InvalidTolerance(ValidationFailure):
    pass


class InvalidInput(ValidationFailure):
    pass


# --- no complete Pick property / infeasible data (exit 2) ---


class CPPFailure(PickSpaceError):
    exit_code = 2


class NotCPP(CPPFailure):
    """The space has no embedding in a ball; `certificate` says where it fails."""

    def __init__(self, msg='', certificate=None):
        super().__init__(msg, certificate=certificate or {})
        self.certificate = certificate or {}


class Infeasible(CPPFailure):
    pass


# --- numerical breakdown (exit 3) ---


class NumericalFailure(PickSpaceError):
    exit_code = 3


class InternalInconsistency(NumericalFailure):
    """Two mathematically equivalent computations disagreed."""


class IllConditioned(NumericalFailure):
    pass


class SingularSystem(NumericalFailure):
    pass

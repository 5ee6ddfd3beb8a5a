"""Exception types raised across the package."""


class PolystabError(Exception):
    """Base class for all errors raised by polystab."""


class SingularMatrix(PolystabError, ZeroDivisionError):
    pass


class InconsistentSystem(PolystabError, ValueError):
    pass


class ConvergenceFailure(PolystabError, ArithmeticError):
    pass


class FormatError(PolystabError, ValueError):
    pass


class SelfLoopError(FormatError):
    pass


class DimensionMismatch(PolystabError, ValueError):
    pass


class SizeCapExceeded(PolystabError, ValueError):
    pass


class FieldMismatch(PolystabError, ValueError):
    """Arithmetic between quadratic surds with different radicands."""


class NoCertificate(PolystabError, ValueError):
    pass


class InvalidCertificate(PolystabError, ValueError):
    pass


class PreconditionNotVerified(PolystabError, ValueError):
    pass

"""Exception hierarchy shared by the library and the CLI."""


class SliceCauchyError(Exception):
    """Base class; the CLI maps every subclass to exit code 2."""


class ParseError(SliceCauchyError, ValueError):
    pass


class DomainError(SliceCauchyError, ValueError):
    """Point outside the domain of a function or operation."""


class SingularityError(DomainError):
    """Evaluation at a pole (e.g. a rational function at the origin)."""


class UnsupportedError(SliceCauchyError, NotImplementedError):
    pass


class PreconditionError(SliceCauchyError, ValueError):
    pass


class NearAxisError(SliceCauchyError, ValueError):
    """Kernel density requested too close to the real axis without limit data."""


class IntegrationError(SliceCauchyError, FloatingPointError):
    pass

"""Exception types raised across the package."""


class OwenoError(Exception):
    """Base class for all package errors."""


class InvalidStencilWidth(OwenoError, ValueError):
    """Window length does not match the kernel's stencil width."""


class AllLevelsDegenerate(OwenoError, ArithmeticError):
    """No usable error ratio remained in a refinement ladder."""


class InvalidState(OwenoError, ValueError):
    """A gas-dynamics state has nonpositive density or pressure.

    ``location`` holds the index of the first offending cell when known.
    """

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class NonHyperbolicState(InvalidState):
    """An eigen-decomposition could not be built at an interface."""


class UnknownProblem(OwenoError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown problem"


class NoExactSolution(OwenoError, LookupError):
    pass


class IncompatibleGrids(OwenoError, ValueError):
    pass

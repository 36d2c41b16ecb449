"""Exception types raised across the package.

Input problems derive from ``ValueError`` so plain callers can catch them
generically; the CLI maps ``InadmissibleModel`` to its own exit code.
"""


class LefcertError(Exception):
    """Base class for every error raised by this package."""


class InputError(LefcertError, ValueError):
    """An argument violates a documented precondition or type invariant."""


class NegativeEntry(InputError):
    pass


class ZeroSum(InputError):
    pass


class DimensionTooSmall(InputError):
    pass


class BadDelta(InputError):
    pass


class InvalidWeights(InputError):
    pass


class CornerPoint(InputError):
    pass


class NotAFixedPoint(InputError):
    pass


class StepTooLarge(InputError):
    pass


class NotSymmetric(InputError):
    pass


class AsymmetryDetected(LefcertError):
    """A structural symmetry that must hold by construction did not."""


class SingularMatrix(LefcertError, ArithmeticError):
    pass


class SingularNewtonMatrix(SingularMatrix):
    pass


class LeftDomain(LefcertError):
    """A Newton iterate could not be kept inside the shrunken simplex."""


class NoConvergence(LefcertError, ArithmeticError):
    pass


class SpectralGapTooSmall(LefcertError, ArithmeticError):
    """The zero eigenvalue could not be separated from the rest of the spectrum."""


class SpectralCrossCheckFailed(LefcertError, ArithmeticError):
    pass


class NotInBasin(InputError):
    pass


class TailTooShort(InputError):
    pass


class InvalidInteractionMatrix(InputError):
    pass


class InadmissibleModel(InputError):
    """The network lies outside the class the certificate covers."""


class StarGraphDetected(InadmissibleModel):
    def __init__(self, index: int, value: float):
        self.index = index
        self.value = value
        super().__init__(
            f"influence weight gamma[{index}] = {value!r} is not below 1/2 "
            "(star-graph topology is excluded)"
        )


class NotStronglyConnected(InadmissibleModel):
    pass

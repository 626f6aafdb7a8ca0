"""Exception types shared across the package."""


class CmvWalkError(Exception):
    """Base class for every error raised by cmvwalk."""


class NonUnitary(CmvWalkError, ValueError):
    """The coin matrix is not unitary within tolerance."""

    def __init__(self, deviation: float):
        self.deviation = deviation
        super().__init__(f"coin is not unitary: max Gram deviation {deviation:.3e}")


class DegenerateCoin(CmvWalkError, ValueError):
    """A zero coin entry prevents extraction of its argument."""


class InvalidVerblunsky(CmvWalkError, ValueError):
    """A Verblunsky coefficient lies on or outside the unit circle."""


class DimensionMismatch(CmvWalkError, ValueError):
    pass


class TruncationOverflow(CmvWalkError, RuntimeError):
    """Amplitude reached the guard band of a finite truncation."""


class DegenerateRoots(CmvWalkError, ArithmeticError):
    """lambda_+ and lambda_- coincide (band edge); perturb z and retry."""


class BranchFailure(CmvWalkError, ArithmeticError):
    """No square-root branch gives a Caratheodory function with Re F > 0."""


class OutsideSupport(CmvWalkError, ValueError):
    """Angle lies outside the absolutely continuous band."""


class NoAtom(CmvWalkError, ValueError):
    """Radial limit found no point mass at the requested angle."""


class NoAtoms(CmvWalkError, ValueError):
    """The spectral measure has no point masses."""


class QuadratureNonconvergence(CmvWalkError, ArithmeticError):
    pass


class Underflow(CmvWalkError, ArithmeticError):
    """Powers of lambda left the floating-point range."""

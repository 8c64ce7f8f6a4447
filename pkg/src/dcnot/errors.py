"""Exception types shared across the package."""


class DcnotError(Exception):
    """Base class for every error raised by this package."""


class DegenerateDirectionError(DcnotError, ValueError):
    """A direction vector was too short to define a line."""


class ContractError(DcnotError, ValueError):
    """An input violated an operation's precondition (unitarity, determinant, shape)."""


class AnchorError(DcnotError, ValueError):
    """The requested anchor vector does not lie in the admissible plane."""


class NotSimultaneouslyDiagonalizable(DcnotError, ArithmeticError):
    """Two matrices fail the left/right commutator test for a shared SVD."""


class NotFactorable(DcnotError, ArithmeticError):
    """A unitary is not a tensor product of single-qubit unitaries within tolerance."""


class NotAnInvariant(DcnotError, ArithmeticError):
    """A matrix does not have the shape of the requested r-gate invariant."""

    def __init__(self, message, residual=float("nan")):
        super().__init__(message)
        self.residual = residual


class NotApplicable(DcnotError):
    """A rewrite's hypothesis fails for the given gates."""


class NoSolutionFound(DcnotError, ArithmeticError):
    """A constraint solver exhausted its start budget without converging."""


class CircuitFormatError(DcnotError, ValueError):
    """Malformed circuit text; ``line`` is 1-based, or None for file-level problems."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class CertificateError(DcnotError, ArithmeticError):
    """A constructed rewrite failed its numeric equivalence check."""

    def __init__(self, message, residual=float("nan")):
        super().__init__(message)
        self.residual = residual

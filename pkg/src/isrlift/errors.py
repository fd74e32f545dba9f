"""Exception hierarchy and warnings shared by all isrlift modules."""


class IsrError(Exception):
    """Base class for all isrlift errors."""


class ParseError(IsrError):
    """Malformed input file; carries the offending line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DimensionMismatch(IsrError):
    """Operands or index sets have incompatible shapes."""


class NotSelfAdjoint(IsrError):
    """Input matrix fails the self-adjointness requirement."""


class SingularMatrix(IsrError):
    """Exact matrix is singular (determinant identically zero)."""


class SingularShift(IsrError):
    """The shifted block lambda*I - H[complement, complement] is (numerically) singular.

    Signals that lambda lies in the spectrum of the complement block.
    """

    def __init__(self, lam, rcond=None):
        msg = f"shift lambda = {lam} hits the complement-block spectrum"
        if rcond is not None:
            msg += f" (reciprocal condition estimate {rcond:.3e})"
        super().__init__(msg)
        self.lam = lam
        self.rcond = rcond


class SharedEigenvalue(IsrError):
    """lambda is shared between the full matrix and its complement block;
    the eigenvector projection claim is not guaranteed in this regime."""


class PairingAmbiguous(IsrError):
    """Two distinct eigenvalue pairings agree within the pairing tolerance."""

    def __init__(self, value, candidates, tol):
        super().__init__(
            f"eigenvalue {value!r} matches several distinct candidates "
            f"{candidates!r} within tolerance {tol:g}"
        )
        self.value = value
        self.candidates = candidates
        self.tol = tol


class NotNormal(IsrError):
    """Candidate matrix does not commute with its conjugate transpose."""


class SingularSymmetry(IsrError):
    """Candidate symmetry has an eigenvalue at (numerical) zero; the
    invertibility hypothesis fails."""


class NotLatentSymmetry(IsrError):
    """Candidate failed the power-block commutation certificate."""


class ExactDecompositionUnavailable(IsrError):
    """The candidate has no rational spectral decomposition; exact-mode
    lifting cannot proceed (numeric mode still can)."""


class CrossGroupOverlap(IsrError):
    """Krylov spaces of distinct symmetry eigenvalues are not orthogonal
    beyond tolerance; the certified-symmetry hypothesis is falsified."""


class ResidualNotVanishing(IsrError):
    """A residual basis vector has a nonzero component on the retained
    index set beyond tolerance; falsification of the construction."""


class VerificationFailed(IsrError):
    """A runtime postcondition check failed; names the violated residual."""

    def __init__(self, name, value, bound):
        super().__init__(f"residual '{name}' = {value:.3e} exceeds bound {bound:.3e}")
        self.name = name
        self.value = value
        self.bound = bound


class ConvergenceError(IsrError):
    """An iterative kernel exhausted its sweep budget."""


class DegenerateSpectrumWarning(UserWarning):
    """The matrix has (numerically) repeated eigenvalues; per-eigenvector
    classification is reported but falsification flags are disabled."""

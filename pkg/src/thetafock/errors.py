"""Exception types shared across the library.

Every error carries a short machine-readable ``code`` used by the CLI when
emitting error reports.
"""


class ThetaFockError(Exception):
    code = "Error"


class RankDeficient(ThetaFockError):
    """Basis vectors are linearly dependent (or the Gram matrix is singular)."""

    code = "RankDeficient"


class NotACharacter(ThetaFockError):
    """A raw phase table violates the additivity law chi(g+g') = chi(g)chi(g')."""

    code = "NotACharacter"


class NotConvergent(ThetaFockError):
    """The theta series does not converge (Im(Omega) not positive definite)."""

    code = "NotConvergent"


class TruncationFailure(ThetaFockError):
    """No admissible truncation radius below the configured cap."""

    code = "TruncationFailure"


class QuadratureNotConverged(ThetaFockError):
    """Node-count doubling changed the result beyond the requested tolerance."""

    code = "QuadratureNotConverged"


class DecayViolation(ThetaFockError):
    """Integrand magnitude at the truncation-box boundary exceeds tolerance."""

    code = "DecayViolation"


class SingularMatrix(ThetaFockError):
    """Matrix in a closed-form Gaussian integral is singular or not admissible."""

    code = "SingularMatrix"


class SpecError(ThetaFockError):
    """Malformed or incomplete input document."""

    code = "SpecError"

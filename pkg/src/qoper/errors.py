"""Exception types raised across the library."""


class QOperError(Exception):
    """Base class for all library-specific errors."""


class NonConvergence(QOperError):
    """An iterative method exhausted its iteration budget."""


class NoConvergence(NonConvergence):
    """All Newton starts failed; best candidate is attached as ``.best``."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class ZeroPolynomial(QOperError):
    """Operation requires a nonzero polynomial."""


class ZeroInput(QOperError):
    """Operation requires nonzero scalar input."""


class BadIndices(QOperError):
    """Row index list is out of range or not strictly increasing."""


class BadShape(QOperError):
    """Matrix input has the wrong shape."""


class BadDegrees(QOperError):
    """Declared polynomial degrees are inconsistent with the data."""


class NotDivisible(QOperError):
    """A polynomial division left a remainder above tolerance."""


class ZeroDeterminant(QOperError):
    """A determinant that must be nonzero vanished."""


class Inconsistent(QOperError):
    """Least-squares solve of a functional relation left a large residual."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DegenerateTwists(QOperError):
    """Twist parameters violate the q-lattice separation hypothesis."""


class DegenerateTwist(QOperError):
    """Single twist parameter sits at an excluded value."""


class VandermondeDegenerate(QOperError):
    """A Vandermonde determinant needed by the coefficient recursion vanished."""


class ZeroConstantTerm(QOperError):
    """A polynomial that must not vanish at the origin does."""


class IdentityFailure(QOperError):
    """A verified determinant identity exceeded tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class PoleHit(QOperError):
    """An evaluation point landed on a denominator zero."""


class NotPolynomial(QOperError):
    """A rational expression expected to be polynomial has a remainder."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class MinorMismatch(QOperError):
    """Two equivalent minor-ratio expressions disagree."""


class WronskianMismatch(QOperError):
    """Wronskian does not match the prescribed singularity polynomial."""


class PoleAtBetheRoot(QOperError):
    """Residue cancellation at a Bethe root failed."""


class InputError(QOperError):
    """Malformed JSON instance; message carries a JSON-pointer-style path."""

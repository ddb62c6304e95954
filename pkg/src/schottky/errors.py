"""Exception types shared across the package.

Every error raised by the library derives from SchottkyError, so callers can
catch one base class at the CLI boundary and turn it into structured output.
"""


class SchottkyError(Exception):
    """Base class for all library errors."""


# ---------------------------------------------------------------------------
# Mobius layer


class IllConditioned(SchottkyError):
    """Classification sits too close to a decision boundary for the tolerance."""


class NotLoxodromic(SchottkyError):
    """Fixed-point data requested for a map without an attracting fixed point."""


class DegenerateTriple(SchottkyError):
    """Three-point interpolation given points that collide within tolerance."""


# ---------------------------------------------------------------------------
# Geometry of pairings and markings


class DegenerateMarking(SchottkyError):
    """A marked tuple whose distinguished fixed points collide, or whose
    normalized coordinates land on a forbidden value."""


class ExplosionGuard(SchottkyError):
    """Word or point enumeration exceeded the configured cap."""


# ---------------------------------------------------------------------------
# Enumeration


class InvalidSignature(SchottkyError):
    """Malformed signature tuple (negative entries, bad gamma list)."""


class NotExtended(InvalidSignature):
    """Signature with a+b+d+e = 0: the group it describes has no
    orientation-reversing element."""


class NegativeRank(InvalidSignature):
    """Signature whose rank formula evaluates below zero."""


class BoundExceeded(SchottkyError):
    """Exhaustive enumeration requested beyond the configured bound."""


# ---------------------------------------------------------------------------
# Free group layer


class RankMismatch(SchottkyError):
    """Operands built over free groups of different ranks."""


class NotInvertibleMatrix(SchottkyError):
    """An endomorphism that is not an automorphism: either its abelianization
    has determinant outside {1, -1} or the inversion procedure failed."""


# ---------------------------------------------------------------------------
# Real structures


class SingularDifference(SchottkyError):
    """The commutator difference A1*A2 - A2*A1 is singular (the two maps
    share their fixed-point pair)."""


class ClassificationInconclusive(SchottkyError):
    """Bounded conjugacy search exhausted its budget without a certificate."""

"""Mobius and extended Mobius transformations on the Riemann sphere.

Maps are stored as determinant-1 complex 2x2 matrices plus an orientation
flag; an orientation-reversing map with matrix (a,b,c,d) acts as
z -> (a*conj(z) + b)/(c*conj(z) + d). Points are homogeneous pairs so that
infinity needs no special cases. All comparisons are projective and
tolerance-controlled; matrices are only ever compared up to global sign.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DegenerateTriple, IllConditioned, NotLoxodromic

DEFAULT_TOL = 1e-9

# Band around the parabolic boundary that is still classified as parabolic
# rather than rejected: exactly constructed parabolics land here after a few
# compositions, while anything between this band and the caller's tolerance
# is reported as ill-conditioned.
PARABOLIC_BAND = 1e-12


@dataclass(frozen=True)
class SpherePoint:
    """Point of the Riemann sphere as a homogeneous pair (num : den)."""

    num: complex
    den: complex

    def __post_init__(self):
        scale = max(abs(self.num), abs(self.den))
        if scale == 0:
            raise ValueError("homogeneous pair (0 : 0) is not a point")
        object.__setattr__(self, "num", self.num / scale)
        object.__setattr__(self, "den", self.den / scale)

    @property
    def is_infinity(self):
        return abs(self.den) < 1e-15

    def to_complex(self) -> complex:
        if self.is_infinity:
            raise ZeroDivisionError("point at infinity has no finite value")
        return self.num / self.den

    def __repr__(self):
        if self.is_infinity:
            return "SpherePoint(inf)"
        return f"SpherePoint({self.to_complex():.6g})"


INFINITY = SpherePoint(1.0, 0.0)


def point(z) -> SpherePoint:
    """Finite point from a complex number (or anything complex() accepts)."""
    return SpherePoint(complex(z), 1.0)


def points_equal(p: SpherePoint, q: SpherePoint, tol: float = DEFAULT_TOL) -> bool:
    """Projective equality within tol, valid at and near infinity."""
    return abs(p.num * q.den - q.num * p.den) <= tol


def point_distance(p: SpherePoint, q: SpherePoint) -> float:
    """Chordal-equivalent distance: |cross product| of the normalized pairs."""
    return abs(p.num * q.den - q.num * p.den)


@dataclass(frozen=True)
class MobiusMap:
    """A Mobius (preserving) or extended Mobius (reversing) transformation."""

    a: complex
    b: complex
    c: complex
    d: complex
    reversing: bool = False

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if abs(det) < 1e-30:
            raise ValueError("matrix is singular")
        s = cmath.sqrt(det)
        for name, v in (("a", self.a), ("b", self.b), ("c", self.c), ("d", self.d)):
            object.__setattr__(self, name, v / s)

    def matrix(self):
        return (self.a, self.b, self.c, self.d)

    def __repr__(self):
        kind = "reversing" if self.reversing else "preserving"
        return (
            f"MobiusMap([{self.a:.4g}, {self.b:.4g}; {self.c:.4g}, {self.d:.4g}],"
            f" {kind})"
        )


IDENTITY = MobiusMap(1.0, 0.0, 0.0, 1.0)


def scaling(k) -> MobiusMap:
    """z -> k*z."""
    return MobiusMap(complex(k), 0.0, 0.0, 1.0)


def translation(t) -> MobiusMap:
    """z -> z + t."""
    return MobiusMap(1.0, complex(t), 0.0, 1.0)


def reflection_at(center, radius: float) -> MobiusMap:
    """Inversion in the circle |z - center| = radius; fixes that circle."""
    p = complex(center)
    return MobiusMap(p, radius * radius - abs(p) ** 2, 1.0, -p.conjugate(), True)


def imaginary_reflection_at(center, radius: float) -> MobiusMap:
    """The fixed-point-free involution z -> center - radius^2/conj(z - center)."""
    p = complex(center)
    return MobiusMap(p, -radius * radius - abs(p) ** 2, 1.0, -p.conjugate(), True)


def compose(f: MobiusMap, g: MobiusMap) -> MobiusMap:
    """f after g. When f reverses orientation, g's matrix enters conjugated."""
    ga, gb, gc, gd = g.matrix()
    if f.reversing:
        ga, gb, gc, gd = (
            ga.conjugate(),
            gb.conjugate(),
            gc.conjugate(),
            gd.conjugate(),
        )
    return MobiusMap(
        f.a * ga + f.b * gc,
        f.a * gb + f.b * gd,
        f.c * ga + f.d * gc,
        f.c * gb + f.d * gd,
        f.reversing != g.reversing,
    )


def inverse(f: MobiusMap) -> MobiusMap:
    inv = (f.d, -f.b, -f.c, f.a)
    if f.reversing:
        inv = tuple(v.conjugate() for v in inv)
    return MobiusMap(*inv, f.reversing)


def apply(f: MobiusMap, p: SpherePoint) -> SpherePoint:
    num, den = p.num, p.den
    if f.reversing:
        num, den = num.conjugate(), den.conjugate()
    return SpherePoint(f.a * num + f.b * den, f.c * num + f.d * den)


def bar_conjugate(f: MobiusMap) -> MobiusMap:
    """Entrywise complex conjugation: the map J f J with J(z) = conj(z)."""
    return MobiusMap(
        f.a.conjugate(),
        f.b.conjugate(),
        f.c.conjugate(),
        f.d.conjugate(),
        f.reversing,
    )


def projective_deviation(f: MobiusMap, g: MobiusMap) -> float:
    """Entrywise distance between the normalized matrices, minimized over sign.

    Returns ``inf`` when the two maps have different orientation behaviour,
    so the value is always comparable against a tolerance.
    """
    if f.reversing != g.reversing:
        return float("inf")
    mf, mg = f.matrix(), g.matrix()
    plus = max(abs(x - y) for x, y in zip(mf, mg))
    minus = max(abs(x + y) for x, y in zip(mf, mg))
    return min(plus, minus)


def maps_equal_projective(
    f: MobiusMap, g: MobiusMap, tol: float = DEFAULT_TOL
) -> bool:
    """Equality of maps: same orientation and matrices agree up to sign."""
    return projective_deviation(f, g) <= tol


def _is_scalar(f: MobiusMap, tol: float) -> bool:
    return max(abs(f.b), abs(f.c), abs(f.a - f.d)) <= tol


def _classify_preserving(f: MobiusMap, tol: float) -> str:
    if _is_scalar(f, tol):
        return "identity"
    t2 = (f.a + f.d) ** 2
    gap = abs(t2 - 4.0)
    if gap <= PARABOLIC_BAND:
        return "parabolic"
    if gap < tol:
        raise IllConditioned(
            f"trace squared {t2:.17g} within {tol} of the parabolic boundary"
        )
    if abs(t2.imag) <= tol and 0.0 <= t2.real < 4.0:
        return "elliptic"
    return "loxodromic"


def _reflection_fixed_samples(f: MobiusMap, tol: float):
    """Three candidate fixed points, assuming f*f is plus-identity.

    Returns None when the fixed set is visibly not a real circle or line.
    """
    if abs(f.c) > tol:
        center = f.a / f.c
        r2 = f.b / f.c + abs(center) ** 2
        if abs(r2.imag) > max(tol, tol * abs(r2)) or r2.real <= 0:
            return None
        r = cmath.sqrt(r2).real
        return [point(center + r * cmath.exp(2j * cmath.pi * k / 3)) for k in range(3)]
    # c = 0: the map is affine, z -> mu*conj(z) + t with |mu| = 1
    mu = f.a / f.d
    t = f.b / f.d
    if abs(abs(mu) - 1.0) > tol:
        return None
    if abs(mu * t.conjugate() + t) > max(tol, tol * abs(t)):
        return None  # square is a translation, not the identity
    direction = cmath.sqrt(mu)
    base = t / 2.0
    return [point(base + s * direction) for s in (-1.0, 0.0, 1.0)]


def classify(f: MobiusMap, tol: float = DEFAULT_TOL) -> str:
    """Classify into the orientation-dependent tags.

    Preserving: identity, parabolic, elliptic, loxodromic. Reversing:
    reflection, imaginary-reflection, pseudo-parabolic, pseudo-elliptic,
    glide-reflection, decided through the square s = f of.
    """
    if not f.reversing:
        return _classify_preserving(f, tol)
    s = compose(f, f)
    if _is_scalar(s, tol):
        # sign of the scalar square separates the two involutions, and the
        # sampled-fixed-points test confirms the fixed circle when present
        if s.a.real > 0:
            samples = _reflection_fixed_samples(f, tol)
            if samples is not None and all(
                points_equal(apply(f, p), p, max(tol, 1e-7)) for p in samples
            ):
                return "reflection"
        return "imaginary-reflection"
    inner = _classify_preserving(s, tol)
    if inner == "parabolic":
        return "pseudo-parabolic"
    if inner == "elliptic":
        return "pseudo-elliptic"
    # the square of a reversing map has real trace, so a loxodromic square
    # has positive real multiplier and f is a glide-reflection
    return "glide-reflection"


class FixedData(NamedTuple):
    attracting: SpherePoint
    repelling: SpherePoint
    multiplier: complex


def fixed_data(f: MobiusMap, tol: float = DEFAULT_TOL) -> FixedData:
    """Attracting point, repelling point, and contraction multiplier of a
    loxodromic map; the multiplier is the derivative at the attracting point
    and has modulus < 1."""
    if f.reversing or classify(f, tol) != "loxodromic":
        raise NotLoxodromic(f"fixed points requested for {classify(f, tol)} map")
    tr = f.a + f.d
    disc = cmath.sqrt(tr * tr - 4.0)
    kappa, other = (tr + disc) / 2.0, (tr - disc) / 2.0
    if abs(kappa) < abs(other):
        kappa, other = other, kappa

    def eigvec(lam):
        v1 = (f.b, lam - f.a)
        v2 = (lam - f.d, f.c)
        return v1 if max(abs(v1[0]), abs(v1[1])) >= max(abs(v2[0]), abs(v2[1])) else v2

    attracting = SpherePoint(*eigvec(kappa))
    repelling = SpherePoint(*eigvec(other))
    # label check by iteration from a point away from both fixed points; the
    # orbit only overrides the eigenvalue ordering when it has decisively
    # converged, since a nearly elliptic map barely moves in 60 steps
    for seed in (0.37 + 0.41j, 1.7 - 2.3j, -3.1 + 0.2j):
        probe = point(seed)
        if (
            point_distance(probe, attracting) > 1e-3
            and point_distance(probe, repelling) > 1e-3
        ):
            for _ in range(60):
                probe = apply(f, probe)
            d_att = point_distance(probe, attracting)
            d_rep = point_distance(probe, repelling)
            if min(d_att, d_rep) < 1e-3 and d_rep < d_att:
                attracting, repelling = repelling, attracting
                kappa = other
            break
    return FixedData(attracting, repelling, 1.0 / (kappa * kappa))


def _to_standard(p1: SpherePoint, p2: SpherePoint, p3: SpherePoint, tol: float):
    """Matrix sending (p1, p2, p3) to (infinity, 0, 1), as the inverse of the
    column construction G: (e1, e2, e1+e2) -> (p1, p2, p3)."""
    det = p1.num * p2.den - p2.num * p1.den
    if abs(det) <= tol:
        raise DegenerateTriple("first two points collide")
    alpha = (p3.num * p2.den - p2.num * p3.den) / det
    beta = (p1.num * p3.den - p3.num * p1.den) / det
    if abs(alpha) <= tol or abs(beta) <= tol:
        raise DegenerateTriple("third point collides with another")
    ga, gb = alpha * p1.num, beta * p2.num
    gc, gd = alpha * p1.den, beta * p2.den
    return (gd, -gb, -gc, ga)  # unnormalized inverse of G


def from_three_points(p1, p2, p3, q1, q2, q3, tol: float = DEFAULT_TOL) -> MobiusMap:
    """The unique orientation-preserving map with p_i -> q_i."""
    s = _to_standard(p1, p2, p3, tol)
    t = _to_standard(q1, q2, q3, tol)
    # inverse of t, times s
    ti = (t[3], -t[1], -t[2], t[0])
    return MobiusMap(
        ti[0] * s[0] + ti[1] * s[2],
        ti[0] * s[1] + ti[1] * s[3],
        ti[2] * s[0] + ti[3] * s[2],
        ti[2] * s[1] + ti[3] * s[3],
    )

"""Classical circle pairings, marked groups, and their normal forms.

A pairing map sends the exterior of one circle onto the interior of its
partner; a tuple of such maps with mutually disjoint circles marks a free
group acting on the sphere. Everything downstream works with the marking:
validation reports, the normalized position, moduli coordinates, and
limit-point sampling.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass

from .errors import DegenerateMarking, DegenerateTriple, ExplosionGuard
from .freegroup import FreeWord
from .mobius import (
    DEFAULT_TOL,
    INFINITY,
    MobiusMap,
    SpherePoint,
    apply,
    compose,
    fixed_data,
    from_three_points,
    inverse,
    point,
)

# ---------------------------------------------------------------------------
# circles and lines


@dataclass(frozen=True)
class Circle:
    """Circle given by center and radius, or a line given by its unit
    normal (stored in center) and signed offset from the origin (stored in
    radius): the locus Re(conj(normal) * z) = offset."""

    center: complex
    radius: float
    is_line: bool = False

    def __post_init__(self):
        if self.is_line:
            n = self.center
            scale = abs(n)
            if scale < 1e-15:
                raise ValueError("line normal must be nonzero")
            n = n / scale
            t = float(self.radius)
            if t < 0 or (t == 0 and (n.real < 0 or (n.real == 0 and n.imag < 0))):
                n, t = -n, -t
            object.__setattr__(self, "center", n)
            object.__setattr__(self, "radius", t)
        elif self.radius <= 0:
            raise ValueError(f"radius must be positive, got {self.radius}")


def sample_points(c: Circle, offset: float = 0.0) -> list[complex]:
    """Three points on the locus, spread out; offset rotates or slides the
    sampling to dodge poles."""
    if c.is_line:
        base = c.center * c.radius
        direction = 1j * c.center
        scale = max(1.0, c.radius)
        return [
            base + (s + offset) * scale * direction for s in (-1.0, 0.25, 1.0)
        ]
    return [
        c.center + c.radius * cmath.exp(1j * (offset + k * 2 * math.pi / 3))
        for k in range(3)
    ]


def line_through(p: complex, q: complex) -> Circle:
    u = q - p
    if abs(u) < 1e-15:
        raise ValueError("need two distinct points for a line")
    n = 1j * (u / abs(u))
    t = (n.conjugate() * p).real
    return Circle(n, t, is_line=True)


def circumcircle(p1: complex, p2: complex, p3: complex) -> Circle:
    """Circle through three points; falls back to a line when they are
    collinear relative to their spread."""
    a11, a12 = (p2 - p1).real, (p2 - p1).imag
    a21, a22 = (p3 - p1).real, (p3 - p1).imag
    det = a11 * a22 - a12 * a21
    spread = max(abs(p2 - p1), abs(p3 - p1), abs(p3 - p2))
    if spread < 1e-15:
        raise DegenerateTriple("coincident points have no circumcircle")
    if abs(det) < 1e-12 * spread * spread:
        return line_through(p1, p3 if abs(p3 - p1) > abs(p2 - p1) else p2)
    b1 = (abs(p2) ** 2 - abs(p1) ** 2) / 2
    b2 = (abs(p3) ** 2 - abs(p1) ** 2) / 2
    x = (b1 * a22 - b2 * a12) / det
    y = (a11 * b2 - a21 * b1) / det
    center = complex(x, y)
    return Circle(center, abs(p1 - center))


def circle_distance(c1: Circle, c2: Circle) -> float:
    """Deviation measure: center offset plus radius offset; infinite when
    comparing a circle with a line."""
    if c1.is_line != c2.is_line:
        return math.inf
    if c1.is_line:
        if abs(c1.center - c2.center) < abs(c1.center + c2.center):
            return abs(c1.center - c2.center) + abs(c1.radius - c2.radius)
        return abs(c1.center + c2.center) + abs(c1.radius + c2.radius)
    return abs(c1.center - c2.center) + abs(c1.radius - c2.radius)


def image_circle(m: MobiusMap, c: Circle) -> Circle:
    """Image of the locus under the map, computed from three sampled points
    so that reversing maps need no special casing."""
    for offset in (0.0, 0.37, 0.93, 1.51):
        images = [apply(m, point(p)) for p in sample_points(c, offset)]
        finite = [q for q in images if not q.is_infinity]
        if len(finite) == 2:
            z = [q.to_complex() for q in finite]
            if abs(z[0] - z[1]) > 1e-12:
                return line_through(z[0], z[1])
            continue
        if len(finite) < 3:
            continue
        z = [q.to_complex() for q in finite]
        spread = min(
            abs(z[0] - z[1]), abs(z[1] - z[2]), abs(z[0] - z[2])
        )
        if spread < 1e-12:
            continue
        return circumcircle(*z)
    raise DegenerateMarking(f"cannot trace the image of {c} under {m}")


def point_inside(c: Circle, z: complex) -> bool:
    if c.is_line:
        return (c.center.conjugate() * z).real < c.radius
    return abs(z - c.center) < c.radius


# ---------------------------------------------------------------------------
# pairings


def pairing_map(source: Circle, target: Circle) -> MobiusMap:
    """Orientation-preserving map carrying the exterior of the source circle
    onto the interior of the target: three counterclockwise source points go
    to three clockwise target points."""
    if source.is_line or target.is_line:
        raise DegenerateMarking("pairing constructor needs proper circles")
    angles = (0.0, 2 * math.pi / 3, 4 * math.pi / 3)
    src = [point(source.center + source.radius * cmath.exp(1j * t)) for t in angles]
    dst = [point(target.center + target.radius * cmath.exp(-1j * t)) for t in angles]
    return from_three_points(src[0], src[1], src[2], dst[0], dst[1], dst[2])


@dataclass(frozen=True)
class MarkedSchottky:
    """Ordered tuple of generators; the marking is the order."""

    maps: tuple[MobiusMap, ...]

    @property
    def rank(self) -> int:
        return len(self.maps)


@dataclass(frozen=True)
class CirclePairing:
    """Generators together with the circle pairs that witness them."""

    circles: tuple[tuple[Circle, Circle], ...]
    maps: tuple[MobiusMap, ...]

    def __post_init__(self):
        if len(self.circles) != len(self.maps):
            raise ValueError("one map per circle pair")

    @property
    def marked(self) -> MarkedSchottky:
        return MarkedSchottky(self.maps)

    @classmethod
    def classical(cls, circle_pairs) -> "CirclePairing":
        pairs = tuple(circle_pairs)
        maps = tuple(pairing_map(s, t) for s, t in pairs)
        return cls(pairs, maps)


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of checking a pairing; never raised, only reported."""

    ok: bool
    min_gap: float
    map_deviations: tuple[float, ...]
    side_correct: tuple[bool, ...]
    notes: tuple[str, ...] = ()


def validate_pairing(
    pairing: CirclePairing, tol: float = DEFAULT_TOL
) -> ValidationReport:
    """Disjointness of all circles, agreement of each traced image with the
    partner circle, and the exterior-to-interior side convention."""
    notes: list[str] = []
    all_circles = [c for pair in pairing.circles for c in pair]
    if any(c.is_line for c in all_circles):
        return ValidationReport(
            False,
            math.nan,
            (),
            (),
            ("line witnesses are not supported by this validator",),
        )
    min_gap = math.inf
    for i in range(len(all_circles)):
        for j in range(i + 1, len(all_circles)):
            ci, cj = all_circles[i], all_circles[j]
            gap = abs(ci.center - cj.center) - ci.radius - cj.radius
            min_gap = min(min_gap, gap)
    deviations = []
    sides = []
    for (src, dst), m in zip(pairing.circles, pairing.maps):
        try:
            traced = image_circle(m, src)
            deviations.append(circle_distance(traced, dst))
        except DegenerateMarking:
            deviations.append(math.inf)
            notes.append("image tracing failed")
        probe = src.center + 50.0 * src.radius
        img = apply(m, point(probe))
        sides.append(
            (not img.is_infinity) and point_inside(dst, img.to_complex())
        )
    scale = max(abs(c.center) + c.radius for c in all_circles)
    ok = (
        min_gap > 0
        and all(d <= math.sqrt(tol) * max(scale, 1.0) for d in deviations)
        and all(sides)
    )
    return ValidationReport(
        ok, min_gap, tuple(deviations), tuple(sides), tuple(notes)
    )


def random_classical_pairing(
    rank: int, seed, ring_radius: float = 10.0
) -> CirclePairing:
    """Disjoint circles with centers jittered around a ring, paired across
    the ring; deterministic for a given seed."""
    if rank < 1:
        raise ValueError("rank must be positive")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    n = 2 * rank
    slot = 2 * math.pi / n
    base_radius = ring_radius * math.sin(slot / 2)
    circles = []
    for k in range(n):
        angle = k * slot + rng.uniform(-0.15, 0.15) * slot
        wobble = ring_radius * (1 + rng.uniform(-0.03, 0.03))
        center = wobble * cmath.exp(1j * angle)
        radius = base_radius * rng.uniform(0.45, 0.7)
        circles.append(Circle(center, radius))
    pairs = [(circles[j], circles[j + rank]) for j in range(rank)]
    return CirclePairing.classical(pairs)


# ---------------------------------------------------------------------------
# words acting by maps


def evaluate_word(marked: MarkedSchottky, w: FreeWord) -> MobiusMap:
    out = MobiusMap(1, 0, 0, 1)
    for x in w.letters:
        m = marked.maps[abs(x) - 1]
        out = compose(out, m if x > 0 else inverse(m))
    return out


# ---------------------------------------------------------------------------
# normal position and moduli coordinates


def _attractor(m: MobiusMap) -> SpherePoint:
    return fixed_data(m).attracting


def _repeller(m: MobiusMap) -> SpherePoint:
    return fixed_data(m).repelling


def normalize(
    marked: MarkedSchottky, tol: float = DEFAULT_TOL
) -> tuple[MarkedSchottky, MobiusMap]:
    """Conjugate so the first attractor sits at infinity, the second at
    zero, and the attractor of the second-first product at one. Returns the
    moved marking and the conjugator."""
    if marked.rank < 2:
        raise DegenerateMarking(
            "normal position needs at least two generators"
        )
    a1 = _attractor(marked.maps[0])
    a2 = _attractor(marked.maps[1])
    a21 = _attractor(compose(marked.maps[1], marked.maps[0]))
    try:
        t = from_three_points(
            a1, a2, a21, INFINITY, point(0.0), point(1.0), tol=tol
        )
    except DegenerateTriple as exc:
        raise DegenerateMarking(
            f"normalization triple is degenerate: {exc}"
        ) from exc
    t_inv = inverse(t)
    moved = tuple(compose(t, compose(m, t_inv)) for m in marked.maps)
    return MarkedSchottky(moved), t


def _coordinate(p: SpherePoint, tol: float, label: str) -> complex:
    if p.is_infinity:
        raise DegenerateMarking(f"coordinate {label} escaped to infinity")
    z = p.to_complex()
    if abs(z) < tol or abs(z - 1) < tol or abs(z) > 1 / tol:
        raise DegenerateMarking(
            f"coordinate {label} = {z} collides with a pinned point"
        )
    return z


def zeta(marked: MarkedSchottky, tol: float = DEFAULT_TOL) -> tuple[complex, ...]:
    """Moduli coordinates of the normalized marking: the attractors of all
    generators past the second, the repellers of all generators, and the
    repellers of the products of each later generator with the first. The
    count is three less than three times the rank."""
    if marked.rank < 2:
        raise DegenerateMarking("moduli coordinates need at least rank two")
    moved, _ = normalize(marked, tol)
    coords: list[complex] = []
    for j in range(3, moved.rank + 1):
        coords.append(
            _coordinate(_attractor(moved.maps[j - 1]), tol, f"a{j}")
        )
    for j in range(1, moved.rank + 1):
        coords.append(
            _coordinate(_repeller(moved.maps[j - 1]), tol, f"r{j}")
        )
    for j in range(2, moved.rank + 1):
        prod = compose(moved.maps[j - 1], moved.maps[0])
        coords.append(_coordinate(_repeller(prod), tol, f"s{j}"))
    return tuple(coords)


# ---------------------------------------------------------------------------
# limit points


def _reduced_word_count(rank: int, max_len: int) -> int:
    total = 0
    block = 2 * rank
    for length in range(1, max_len + 1):
        total += block
        block *= 2 * rank - 1
    return total


def limit_points(
    pairing: CirclePairing,
    max_len: int = 6,
    tol: float = DEFAULT_TOL,
    cap: int = 10**6,
) -> list[complex]:
    """Orbit samples of the fixed points: for every nonempty reduced word up
    to the length bound, the word map applied to the attractor of its first
    letter. The witness pairing must validate first. Points are deduplicated
    on a tolerance grid, in first-seen order."""
    report = validate_pairing(pairing, tol)
    if not report.ok:
        raise DegenerateMarking(
            f"witness pairing fails validation: {report}"
        )
    rank = len(pairing.maps)
    if _reduced_word_count(rank, max_len) > cap:
        raise ExplosionGuard(
            f"{_reduced_word_count(rank, max_len)} words exceed cap {cap}"
        )
    anchors: dict[int, SpherePoint] = {}
    for j, m in enumerate(pairing.maps, start=1):
        data = fixed_data(m)
        anchors[j] = data.attracting
        anchors[-j] = data.repelling
    letters = [x for j in range(1, rank + 1) for x in (j, -j)]
    seen: set[tuple[int, int]] = set()
    out: list[complex] = []

    def emit(m: MobiusMap, first: int):
        img = apply(m, anchors[first])
        if img.is_infinity:
            return
        z = img.to_complex()
        key = (round(z.real / tol), round(z.imag / tol))
        if key not in seen:
            seen.add(key)
            out.append(z)

    def walk(m: MobiusMap, first: int, last: int, depth: int):
        emit(m, first)
        if depth == max_len:
            return
        for x in letters:
            if x == -last:
                continue
            nxt = pairing.maps[x - 1] if x > 0 else inverse(pairing.maps[-x - 1])
            walk(compose(m, nxt), first, x, depth + 1)

    for x in letters:
        m = pairing.maps[x - 1] if x > 0 else inverse(pairing.maps[-x - 1])
        walk(m, x, x, 1)
    return out


# ---------------------------------------------------------------------------
# serialization


def marked_to_json(marked: MarkedSchottky) -> dict:
    return {
        "maps": [
            {
                "coefficients": [
                    [m.a.real, m.a.imag],
                    [m.b.real, m.b.imag],
                    [m.c.real, m.c.imag],
                    [m.d.real, m.d.imag],
                ],
                "orientation": "reversing" if m.reversing else "preserving",
            }
            for m in marked.maps
        ]
    }


def marked_from_json(data: dict) -> MarkedSchottky:
    maps = []
    for entry in data["maps"]:
        (ar, ai), (br, bi), (cr, ci), (dr, di) = entry["coefficients"]
        orientation = entry.get("orientation", "preserving")
        if orientation not in ("preserving", "reversing"):
            raise ValueError(f"unknown orientation {orientation!r}")
        maps.append(
            MobiusMap(
                complex(ar, ai),
                complex(br, bi),
                complex(cr, ci),
                complex(dr, di),
                orientation == "reversing",
            )
        )
    return MarkedSchottky(tuple(maps))

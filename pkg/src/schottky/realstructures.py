"""Antiholomorphic symmetries of marked Schottky space.

A symmetry is stored through its holomorphic twist: a word action on the
markings, applied before entrywise conjugation of the generator matrices.
This module certifies fixed markings with an explicit conjugating map,
classifies the rank-two twists against the four model actions, realizes
rank-two signatures by concrete reversing configurations, and runs a
bounded conjugacy experiment over same-shape signatures.
"""

from __future__ import annotations

import cmath
import math
from collections import deque
from dataclasses import dataclass

from .enumeration import Signature, signatures_of_rank, validate_signature
from .errors import (
    ClassificationInconclusive,
    DegenerateMarking,
    DegenerateTriple,
    RankMismatch,
    SingularDifference,
)
from .freegroup import (
    FgAuto,
    Symbol,
    abelianize,
    auto_compose,
    auto_inverse,
    basis_symbols,
    identity_auto,
    integer_determinant,
    is_inner,
    nielsen,
    order_in_out,
    rho_from_signature,
    word,
    word_to_string,
)
from .mobius import (
    IDENTITY,
    MobiusMap,
    bar_conjugate,
    compose,
    fixed_data,
    from_three_points,
    imaginary_reflection_at,
    inverse,
    projective_deviation,
    reflection_at,
)
from .schottky import (
    Circle,
    MarkedSchottky,
    evaluate_word,
    pairing_map,
    random_classical_pairing,
)

# The reduced rank-two outer group is known to contain exactly three classes
# of order two; this count is an external input used as metadata, not
# something the module derives.
GENUS2_ORDER_TWO_CLASS_COUNT = 3


def inverting_auto(rank: int) -> FgAuto:
    """The automorphism sending every generator to its inverse."""
    images = tuple(word(-j) for j in range(1, rank + 1))
    return FgAuto(rank, images, images)


@dataclass(frozen=True)
class RealStructureSpec:
    """Entrywise conjugation composed with the stored word action.

    The word action must square to an inner automorphism so that the full
    map is an involution on markings. At rank two the action is read in the
    quotient where inverting every generator acts trivially, so a square
    equal to the all-inverting twist is also accepted.
    """

    rho: FgAuto

    def __post_init__(self):
        if order_in_out(self.rho, max_order=2) is not None:
            return
        if self.rho.rank == 2:
            square = auto_compose(self.rho, self.rho)
            if is_inner(auto_compose(inverting_auto(2), square)) is not None:
                return
        raise ValueError(
            "the word action must square to an inner automorphism"
        )

    @property
    def rank(self) -> int:
        return self.rho.rank


def canonical_J(m: MarkedSchottky) -> MarkedSchottky:
    """Entrywise conjugation of every generator."""
    return MarkedSchottky(tuple(bar_conjugate(x) for x in m.maps))


def act(spec: RealStructureSpec, m: MarkedSchottky) -> MarkedSchottky:
    """Image of a marking under the symmetry."""
    if spec.rank != m.rank:
        raise RankMismatch(
            f"structure has rank {spec.rank}, marking has rank {m.rank}"
        )
    return MarkedSchottky(
        tuple(
            bar_conjugate(evaluate_word(m, w)) for w in spec.rho.images
        )
    )


@dataclass(frozen=True)
class FixedPointWitness:
    conjugator: MobiusMap
    residual: float


def is_fixed_point(
    spec: RealStructureSpec, m: MarkedSchottky, tol: float = 1e-8
):
    """Witness that the marking is fixed by the symmetry, or None.

    Any conjugating map must carry the attracting and repelling points of
    the first generator and the attracting point of the second onto their
    images, which pins it down; the candidate is then verified against all
    generators. Raises DegenerateMarking when those points collide and
    NotLoxodromic when a generator has no fixed-point pair.
    """
    if m.rank < 2:
        raise RankMismatch("certification needs at least two generators")
    image = act(spec, m)
    src1 = fixed_data(m.maps[0])
    src2 = fixed_data(m.maps[1])
    dst1 = fixed_data(image.maps[0])
    dst2 = fixed_data(image.maps[1])
    try:
        conjugator = from_three_points(
            src1.attracting,
            src1.repelling,
            src2.attracting,
            dst1.attracting,
            dst1.repelling,
            dst2.attracting,
        )
    except DegenerateTriple as exc:
        raise DegenerateMarking(str(exc)) from exc
    conj_inv = inverse(conjugator)
    residual = max(
        projective_deviation(compose(conjugator, compose(a, conj_inv)), b)
        for a, b in zip(m.maps, image.maps)
    )
    if residual <= tol:
        return FixedPointWitness(conjugator, residual)
    return None


def sample_fixed_seeds(
    spec: RealStructureSpec, seeds, tol: float = 1e-8
) -> list[int]:
    """Seeds whose random classical marking the symmetry fixes."""
    hits = []
    for seed in seeds:
        marked = random_classical_pairing(spec.rank, seed).marked
        if is_fixed_point(spec, marked, tol) is not None:
            hits.append(seed)
    return hits


def keen_involution(
    a1: MobiusMap, a2: MobiusMap, tol: float = 1e-12
) -> MobiusMap:
    """The difference matrix a1*a2 - a2*a1, renormalized to determinant one.

    Its trace vanishes and conjugation by it inverts both inputs. The
    diagonal is assembled from the four cross products directly, because the
    identical terms of the two matrix products must cancel exactly rather
    than through a rounded subtraction.
    """
    if a1.reversing or a2.reversing:
        raise ValueError("both maps must be orientation-preserving")
    e11 = a1.b * a2.c - a2.b * a1.c
    e22 = a1.c * a2.b - a2.c * a1.b
    e12 = a1.a * a2.b + a1.b * a2.d - (a2.a * a1.b + a2.b * a1.d)
    e21 = a1.c * a2.a + a1.d * a2.c - (a2.c * a1.a + a2.d * a1.c)
    det = e11 * e22 - e12 * e21
    if abs(det) <= tol:
        raise SingularDifference(
            "the generators nearly commute; difference matrix is singular"
        )
    return MobiusMap(e11, e12, e21, e22)


# ---------------------------------------------------------------------------
# the four rank-two model actions and their classes


def genus2_model_actions() -> dict[str, FgAuto]:
    """The four model word actions on two generators, keyed by class tag."""
    return {
        "canonical": identity_auto(2),
        "swap": nielsen(1, 2),
        "invert": nielsen(3, 2),
        "swap_invert": FgAuto(2, (word(-2), word(1))),
    }


@dataclass(frozen=True)
class Genus2Class:
    """One conjugacy class of rank-two symmetries with its declared data."""

    name: str
    spec: RealStructureSpec
    component_count: int
    signatures: tuple[Signature, ...]
    note: str


def genus2_classes() -> tuple[Genus2Class, ...]:
    """The four classes with component counts and realizing signatures."""
    actions = genus2_model_actions()
    return (
        Genus2Class(
            "canonical",
            RealStructureSpec(actions["canonical"]),
            5,
            (
                Signature(3, 0, 0, 0, 0, ()),
                Signature(2, 1, 0, 0, 0, ()),
                Signature(1, 2, 0, 0, 0, ()),
                Signature(0, 3, 0, 0, 0, ()),
                Signature(0, 0, 0, 0, 1, (2,)),
            ),
            "entrywise conjugation alone",
        ),
        Genus2Class(
            "swap",
            RealStructureSpec(actions["swap"]),
            3,
            (
                Signature(1, 0, 1, 0, 0, ()),
                Signature(1, 0, 0, 1, 0, ()),
                Signature(0, 1, 0, 1, 0, ()),
            ),
            "conjugation after exchanging the two generators",
        ),
        Genus2Class(
            "invert",
            RealStructureSpec(actions["invert"]),
            2,
            (
                Signature(1, 0, 0, 0, 1, (1,)),
                Signature(0, 1, 0, 0, 1, (1,)),
            ),
            "conjugation after inverting the first generator",
        ),
        Genus2Class(
            "swap_invert",
            RealStructureSpec(actions["swap_invert"]),
            0,
            (),
            "conjugation after the quarter-turn action; fixes no marking",
        ),
    )


# ---------------------------------------------------------------------------
# conjugacy search in the outer group


def _twist_match(candidate: FgAuto, target: FgAuto):
    """\"direct\" or \"twisted\" when candidate equals target in the outer
    group, possibly after the all-inverting twist; None otherwise."""
    diff = auto_compose(candidate, auto_inverse(target))
    if is_inner(diff) is not None:
        return "direct"
    twisted = auto_compose(inverting_auto(candidate.rank), diff)
    if is_inner(twisted) is not None:
        return "twisted"
    return None


def _nielsen_alphabet(rank: int) -> list[FgAuto]:
    gens = [nielsen(1, rank), nielsen(3, rank)]
    if rank >= 3:
        gens.append(nielsen(2, rank))
        gens.append(auto_inverse(nielsen(2, rank)))
    gens.append(nielsen(4, rank))
    gens.append(auto_inverse(nielsen(4, rank)))
    return gens


def _conjugacy_search(phi: FgAuto, targets: dict[str, FgAuto], budget: int):
    """Breadth-first search for chi with chi phi chi^-1 matching one of the
    targets up to inner automorphisms and the all-inverting twist.

    Returns (key, chi, twisted) or None once the budget of expanded states
    is spent.
    """
    rank = phi.rank
    gens = _nielsen_alphabet(rank)
    seen = {phi.images}
    queue = deque([(identity_auto(rank), phi)])
    expanded = 0
    while queue:
        chi, current = queue.popleft()
        for key, target in targets.items():
            flavor = _twist_match(current, target)
            if flavor is not None:
                return key, chi, flavor == "twisted"
        expanded += 1
        if expanded > budget:
            return None
        for gen in gens:
            child = auto_compose(
                gen, auto_compose(current, auto_inverse(gen))
            )
            if child.images in seen:
                continue
            seen.add(child.images)
            queue.append((auto_compose(gen, chi), child))
    return None


@dataclass(frozen=True)
class ClassificationCertificate:
    """Outcome of a successful class identification: conjugating by the
    stored automorphism carries the input action onto the named model, up
    to inner automorphisms and, when twisted, the all-inverting twist."""

    class_name: str
    conjugator: FgAuto
    twisted: bool


def _candidate_order(mat) -> list[str]:
    """Model tags ordered so the abelianization-compatible one comes first.

    The stored action of any valid rank-two structure abelianizes to a
    matrix squaring to plus or minus the identity, which singles out one
    model: the search merely certifies the match.
    """
    (m11, m12), (m21, m22) = mat
    det = m11 * m22 - m12 * m21
    trace = m11 + m22
    names = ["canonical", "swap", "invert", "swap_invert"]
    first = None
    if m12 == 0 and m21 == 0 and m11 == m22 and abs(m11) == 1:
        first = "canonical"
    elif det == -1 and trace == 0:
        congruent_to_identity = (
            m11 % 2 == 1 and m22 % 2 == 1 and m12 % 2 == 0 and m21 % 2 == 0
        )
        first = "invert" if congruent_to_identity else "swap"
    elif det == 1 and trace == 0:
        first = "swap_invert"
    if first is not None:
        names.remove(first)
        names.insert(0, first)
    return names


def classify_genus2_action(
    rho: FgAuto, budget: int = 4000
) -> ClassificationCertificate:
    """Identify a rank-two word action among the four models."""
    if rho.rank != 2:
        raise RankMismatch(f"classification needs rank 2, got {rho.rank}")
    order = _candidate_order(abelianize(rho))
    models = genus2_model_actions()
    targets = {name: models[name] for name in order}
    found = _conjugacy_search(rho, targets, budget)
    if found is None:
        raise ClassificationInconclusive(
            f"no model certified within {budget} expanded states"
        )
    name, chi, twisted = found
    return ClassificationCertificate(name, chi, twisted)


def structure_of_signature_g2(
    s: Signature, budget: int = 4000
) -> ClassificationCertificate:
    """Class of the symmetry induced by a rank-two signature."""
    g = validate_signature(s)
    if g != 2:
        raise RankMismatch(f"expected a rank-2 signature, got rank {g}")
    return classify_genus2_action(rho_from_signature(s), budget)


# ---------------------------------------------------------------------------
# integer conjugacy invariants and the grouped experiment


def _smith_invariants(mat) -> tuple[int, ...]:
    """Nonnegative diagonal of the Smith normal form."""
    m = [list(row) for row in mat]
    if not m or not m[0]:
        return ()
    n_rows, n_cols = len(m), len(m[0])
    size = min(n_rows, n_cols)
    out: list[int] = []
    t = 0
    while t < size:
        pivot = None
        for i in range(t, n_rows):
            for j in range(t, n_cols):
                if m[i][j] and (
                    pivot is None
                    or abs(m[i][j]) < abs(m[pivot[0]][pivot[1]])
                ):
                    pivot = (i, j)
        if pivot is None:
            break
        m[t], m[pivot[0]] = m[pivot[0]], m[t]
        for row in m:
            row[t], row[pivot[1]] = row[pivot[1]], row[t]
        stable = False
        while not stable:
            stable = True
            for i in range(t + 1, n_rows):
                if m[i][t]:
                    q = m[i][t] // m[t][t]
                    for j in range(t, n_cols):
                        m[i][j] -= q * m[t][j]
                    if m[i][t]:
                        m[t], m[i] = m[i], m[t]
                        stable = False
            for j in range(t + 1, n_cols):
                if m[t][j]:
                    q = m[t][j] // m[t][t]
                    for i in range(t, n_rows):
                        m[i][j] -= q * m[i][t]
                    if m[t][j]:
                        for i in range(t, n_rows):
                            m[i][t], m[i][j] = m[i][j], m[i][t]
                        stable = False
            if stable:
                for i in range(t + 1, n_rows):
                    for j in range(t + 1, n_cols):
                        if m[i][j] % m[t][t]:
                            for jj in range(t, n_cols):
                                m[t][jj] += m[i][jj]
                            stable = False
                            break
                    if not stable:
                        break
        out.append(abs(m[t][t]))
        t += 1
    while len(out) < size:
        out.append(0)
    return tuple(out)


def _action_invariants(mat):
    """Conjugacy invariants of an integer matrix, symmetrized over the
    all-inverting twist: characteristic-polynomial samples plus elementary
    divisors of the matrix shifted by plus and minus the identity."""
    n = len(mat)

    def shifted(m_, k):
        return [
            [(k if i == j else 0) - m_[i][j] for j in range(n)]
            for i in range(n)
        ]

    def offset(m_, k):
        return [
            [m_[i][j] + (k if i == j else 0) for j in range(n)]
            for i in range(n)
        ]

    def single(m_):
        char = tuple(
            integer_determinant(shifted(m_, k)) for k in (-2, -1, 0, 1, 2)
        )
        return (
            char,
            _smith_invariants(offset(m_, -1)),
            _smith_invariants(offset(m_, 1)),
        )

    negated = [[-v for v in row] for row in mat]
    return frozenset((single(mat), single(negated)))


def certify_outer_conjugate(phi: FgAuto, psi: FgAuto, budget: int = 4000):
    """Conjugator chi with chi phi chi^-1 equal to psi in the outer group,
    possibly after the all-inverting twist, or None within the budget."""
    found = _conjugacy_search(phi, {"target": psi}, budget)
    if found is None:
        return None
    _, chi, twisted = found
    return chi, twisted


def conjugacy_experiment(g: int, budget: int = 4000) -> dict:
    """Group rank-g signatures by shape and probe pairwise conjugacy.

    The shape key is (order-two factor count, infinite-cyclic factor count,
    real factor count, real rank multiset). Verdicts are certified (with
    the conjugator recorded), refuted (integer invariants differ), or
    inconclusive under the budget. For rank two the report also carries the
    model classification of every signature.
    """
    sigs = signatures_of_rank(g)
    actions = {s: rho_from_signature(s) for s in sigs}
    groups: dict[tuple, list[Signature]] = {}
    for s in sigs:
        key = (s.a + s.b, s.c + s.d, s.e, tuple(sorted(s.gammas)))
        groups.setdefault(key, []).append(s)
    report: dict = {
        "rank": g,
        "signature_count": len(sigs),
        "groups": [],
    }
    for key in sorted(groups):
        members = sorted(groups[key], key=str)
        entry = {
            "shape": {
                "order_two_factors": key[0],
                "infinite_cyclic_factors": key[1],
                "real_factors": key[2],
                "real_ranks": list(key[3]),
            },
            "members": [str(s) for s in members],
            "actions": {
                str(s): [word_to_string(w) for w in actions[s].images]
                for s in members
            },
            "pairs": [],
        }
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                first, second = members[i], members[j]
                pair = {"first": str(first), "second": str(second)}
                inv_a = _action_invariants(abelianize(actions[first]))
                inv_b = _action_invariants(abelianize(actions[second]))
                if inv_a != inv_b:
                    pair["verdict"] = "refuted"
                else:
                    outcome = certify_outer_conjugate(
                        actions[first], actions[second], budget
                    )
                    if outcome is None:
                        pair["verdict"] = "inconclusive"
                    else:
                        chi, twisted = outcome
                        pair["verdict"] = "certified"
                        pair["conjugator"] = [
                            word_to_string(w) for w in chi.images
                        ]
                        pair["twisted"] = twisted
                entry["pairs"].append(pair)
        report["groups"].append(entry)
    if g == 2:
        tags = {
            str(s): structure_of_signature_g2(s, budget).class_name
            for s in sigs
        }
        classes = {
            name: sorted(t for t, tag in tags.items() if tag == name)
            for name in ("canonical", "swap", "invert", "swap_invert")
        }
        report["classes"] = classes
        report["nonempty_classes"] = sum(1 for v in classes.values() if v)
    return report


# ---------------------------------------------------------------------------
# concrete reversing realizations


def _glide_between(p_src: complex, p_dst: complex) -> MobiusMap:
    """Orientation-reversing map whose square is loxodromic with repelling
    point p_src and attracting point p_dst."""
    stretch = math.sqrt(1.5)
    model = MobiusMap(stretch, 0.0, 0.0, 1.0 / stretch, True)
    frame = MobiusMap(p_dst, 2.0 * p_src, 1.0, 2.0)
    return compose(frame, compose(model, inverse(frame)))


def _real_factor_maps(center: complex, gamma: int):
    """Reflection in the unit circle at center plus gamma loxodromics
    preserving that circle; each loxodromic commutes with the reflection."""
    refl = reflection_at(center, 1.0)
    frame = MobiusMap(1.0, center, 0.0, 1.0)
    frame_inv = inverse(frame)
    sh = 2.0 / math.sin(math.pi / (2.0 * gamma))
    ch = math.hypot(1.0, sh)
    loxodromics = []
    for k in range(gamma):
        rot = cmath.exp(1j * math.pi * k / gamma)
        model = MobiusMap(ch, rot * sh, sh / rot, ch)
        loxodromics.append(compose(frame, compose(model, frame_inv)))
    return refl, loxodromics


def realize_genus2(s: Signature):
    """Concrete matrices for a rank-two signature.

    Returns the marked group read off the basis words together with the
    distinguished reversing map; conjugation by that map realizes
    rho_from_signature on the concrete generators.
    """
    g = validate_signature(s)
    if g != 2:
        raise RankMismatch(f"expected a rank-2 signature, got rank {g}")
    spacing = 20.0
    table: dict[Symbol, MobiusMap] = {}
    slot = 0

    def next_center() -> complex:
        nonlocal slot
        c = complex(spacing * slot, 0.0)
        slot += 1
        return c

    for i in range(1, s.a + 1):
        table[Symbol("E", i)] = reflection_at(next_center(), 1.0)
    for i in range(1, s.b + 1):
        table[Symbol("E", s.a + i)] = imaginary_reflection_at(
            next_center(), 1.0
        )
    for i in range(1, s.c + 1):
        p = next_center()
        table[Symbol("L", i)] = pairing_map(
            Circle(p - 3.0, 1.0), Circle(p + 3.0, 1.0)
        )
    for i in range(1, s.d + 1):
        p = next_center()
        table[Symbol("N", i)] = _glide_between(p - 0.5, p + 0.5)
    for j in range(1, s.e + 1):
        p = next_center()
        refl, loxodromics = _real_factor_maps(p, s.gammas[j - 1])
        table[Symbol("F", j)] = refl
        for k, a in enumerate(loxodromics, start=1):
            table[Symbol("A", j, k)] = a
    generators = []
    for b in basis_symbols(s):
        m = IDENTITY
        for sym, exp in b.letters:
            factor = table[sym] if exp == 1 else inverse(table[sym])
            m = compose(m, factor)
        generators.append(m)
    # a rank-two signature without order-two or real factors would have odd
    # rank, so the transversal is always one of these two
    if s.a + s.b > 0:
        r = table[Symbol("E", 1)]
    else:
        r = table[Symbol("F", 1)]
    return MarkedSchottky(tuple(generators)), r


# ---------------------------------------------------------------------------
# pinned examples


def first_inverting_spec(rank: int) -> RealStructureSpec:
    """Conjugation composed with inverting only the first generator."""
    images = (word(-1),) + tuple(word(j) for j in range(2, rank + 1))
    return RealStructureSpec(FgAuto(rank, images, images))


def first_inverting_example() -> MarkedSchottky:
    """Rank-three marking fixed by first_inverting_spec(3): entrywise
    conjugation inverts the first generator exactly and fixes the real
    other two."""
    r = math.sqrt(2.0)
    return MarkedSchottky(
        (
            MobiusMap(r, 1j, -1j, r),
            MobiusMap(2.0, 1.0, 1.0, 1.0),
            MobiusMap(2.0, -3.0, -1.0, 2.0),
        )
    )

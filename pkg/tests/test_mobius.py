import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schottky.errors import DegenerateTriple, IllConditioned, NotLoxodromic
from schottky.mobius import (
    IDENTITY,
    INFINITY,
    MobiusMap,
    apply,
    bar_conjugate,
    classify,
    compose,
    fixed_data,
    from_three_points,
    imaginary_reflection_at,
    inverse,
    maps_equal_projective,
    point,
    point_distance,
    points_equal,
    reflection_at,
    scaling,
    translation,
)

finite = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False)


def build_map(a1, a2, b1, b2, c1, c2, d1, d2, rev):
    a, b = complex(a1, a2), complex(b1, b2)
    c, d = complex(c1, c2), complex(d1, d2)
    if abs(a * d - b * c) < 0.1:
        return None
    return MobiusMap(a, b, c, d, rev)


random_maps = st.builds(
    build_map, *([finite] * 8), st.booleans()
).filter(lambda f: f is not None)


def test_compose_two_inversions_gives_scaling_by_four():
    tau1 = reflection_at(0.0, 1.0)  # z -> 1/conj(z)
    tau2 = MobiusMap(0.0, 4.0, 1.0, 0.0, True)  # z -> 4/conj(z)
    a = compose(tau2, tau1)
    assert not a.reversing
    assert maps_equal_projective(a, scaling(4.0))


def test_compose_affine():
    f = compose(scaling(2.0), translation(1.0))
    assert maps_equal_projective(f, MobiusMap(2.0, 2.0, 0.0, 1.0))


@given(random_maps)
@settings(max_examples=300, deadline=None)
def test_compose_with_inverse_is_identity(f):
    assert maps_equal_projective(compose(f, inverse(f)), IDENTITY, 1e-7)
    assert maps_equal_projective(compose(inverse(f), f), IDENTITY, 1e-7)


@given(random_maps, random_maps, finite, finite)
@settings(max_examples=300, deadline=None)
def test_compose_agrees_with_pointwise_action(f, g, x, y):
    p = point(complex(x, y))
    lhs = apply(compose(f, g), p)
    rhs = apply(f, apply(g, p))
    assert points_equal(lhs, rhs, 1e-7)


def test_apply_examples():
    assert apply(scaling(4.0), INFINITY).is_infinity
    assert points_equal(apply(reflection_at(0.0, 1.0), point(2.0)), point(0.5))
    swap = MobiusMap(0.0, 1.0, 1.0, 0.0)  # z -> 1/z
    assert apply(swap, point(0.0)).is_infinity


def test_classify_basic_tags():
    assert classify(IDENTITY) == "identity"
    assert classify(MobiusMap(-1.0, 0.0, 0.0, -1.0)) == "identity"
    assert classify(translation(1.0)) == "parabolic"
    assert classify(scaling(2.0)) == "loxodromic"
    assert classify(scaling(-3.0)) == "loxodromic"
    rot = MobiusMap(cmath.exp(0.4j), 0.0, 0.0, cmath.exp(-0.4j))
    assert classify(rot) == "elliptic"


def test_classify_reversing_tags():
    assert classify(reflection_at(0.0, 1.0)) == "reflection"
    assert classify(reflection_at(2.0 + 1.0j, 3.0)) == "reflection"
    assert classify(imaginary_reflection_at(0.0, 1.0)) == "imaginary-reflection"
    assert classify(imaginary_reflection_at(-1.5j, 0.5)) == "imaginary-reflection"
    # reflection across the line y = x
    line_refl = MobiusMap(1.0j, 0.0, 0.0, 1.0, True)
    assert classify(line_refl) == "reflection"
    glide = MobiusMap(2.0, 0.0, 0.0, 1.0, True)  # z -> 2 conj(z)
    assert classify(glide) == "glide-reflection"
    pseudo_par = MobiusMap(1.0, 1.0, 0.0, 1.0, True)  # z -> conj(z) + 1
    assert classify(pseudo_par) == "pseudo-parabolic"
    pseudo_ell = MobiusMap(0.0, cmath.exp(0.9j), 1.0, 0.0, True)
    assert classify(pseudo_ell) == "pseudo-elliptic"


def test_classify_minus_one_over_conj_is_imaginary_reflection():
    f = MobiusMap(0.0, -1.0, 1.0, 0.0, True)  # z -> -1/conj(z)
    assert classify(f) == "imaginary-reflection"


def test_classify_reversing_conjugation_invariant():
    samples = [
        reflection_at(1.0, 2.0),
        imaginary_reflection_at(1.0, 2.0),
        MobiusMap(2.0, 0.0, 0.0, 1.0, True),
        MobiusMap(1.0, 1.0, 0.0, 1.0, True),
        MobiusMap(0.0, cmath.exp(0.9j), 1.0, 0.0, True),
    ]
    conjugators = [
        MobiusMap(1.0, 0.5j, 0.0, 1.0),
        MobiusMap(1.1, -0.3, 0.2, 1.0 + 0.1j),
        MobiusMap(0.0, 1.0, -1.0, 0.7),
    ]
    for f in samples:
        tag = classify(f)
        for g in conjugators:
            assert classify(compose(compose(g, f), inverse(g))) == tag


def test_classify_squares_of_reversing_maps():
    glide = compose(
        MobiusMap(1.0, 0.4, 0.1, 1.0), MobiusMap(3.0, 0.0, 0.0, 1.0, True)
    )
    assert classify(glide) == "glide-reflection"
    assert classify(compose(glide, glide)) == "loxodromic"
    refl = reflection_at(1.0 - 2.0j, 1.7)
    sq = compose(refl, refl)
    assert classify(sq) == "identity"


def test_ill_conditioned_band():
    lam = 1.0 + 5e-6
    near_parabolic = MobiusMap(lam, 1.0, 0.0, 1.0 / lam)
    with pytest.raises(IllConditioned):
        classify(near_parabolic)
    lam = 1.0 + 1e-8
    barely = MobiusMap(lam, 1.0, 0.0, 1.0 / lam)
    assert classify(barely) == "parabolic"


def test_fixed_data_scaling():
    att, rep, mult = fixed_data(scaling(4.0))
    assert att.is_infinity
    assert points_equal(rep, point(0.0))
    assert abs(mult - 0.25) < 1e-12
    att, rep, mult = fixed_data(scaling(0.5))
    assert points_equal(att, point(0.0))
    assert rep.is_infinity
    assert abs(mult - 0.5) < 1e-12


def test_fixed_data_golden_ratio():
    f = MobiusMap(2.0, 1.0, 1.0, 1.0)
    att, rep, mult = fixed_data(f)
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    assert points_equal(att, point(phi), 1e-9)
    assert points_equal(rep, point(1.0 - phi), 1e-9)
    assert abs(mult) < 1.0


@given(random_maps)
@settings(max_examples=200, deadline=None)
def test_fixed_data_round_trip(f):
    try:
        att, rep, mult = fixed_data(f)
    except NotLoxodromic:
        return
    assert points_equal(apply(f, att), att, 1e-6)
    assert points_equal(apply(f, rep), rep, 1e-6)
    assert abs(mult) < 1.0
    # forward orbit of a generic point approaches the attracting end; only
    # decisively contracting maps are expected to get there in bounded time
    probe = point(0.123 + 0.456j)
    if point_distance(probe, rep) > 1e-2 and abs(mult) < 0.8:
        for _ in range(200):
            probe = apply(f, probe)
        assert point_distance(probe, att) < 1e-3


def test_fixed_data_rejects_non_loxodromic():
    with pytest.raises(NotLoxodromic):
        fixed_data(translation(1.0))
    with pytest.raises(NotLoxodromic):
        fixed_data(reflection_at(0.0, 1.0))


def test_from_three_points_identity_and_swap():
    f = from_three_points(INFINITY, point(0.0), point(1.0), INFINITY, point(0.0), point(1.0))
    assert maps_equal_projective(f, IDENTITY)
    g = from_three_points(INFINITY, point(0.0), point(1.0), point(0.0), INFINITY, point(1.0))
    assert maps_equal_projective(g, MobiusMap(0.0, 1.0, 1.0, 0.0))


def test_from_three_points_unit_modulus_example():
    r = cmath.exp(0.7j)
    f = from_three_points(
        INFINITY, point(0.0), point(1.0), point(r.conjugate()), point(1.0), INFINITY
    )
    expected = MobiusMap(1.0, -r, r, -r)
    assert maps_equal_projective(f, expected, 1e-9)
    assert points_equal(apply(f, point(r)), point(0.0), 1e-9)


def test_from_three_points_degenerate():
    with pytest.raises(DegenerateTriple):
        from_three_points(point(0.0), point(0.0), point(1.0), INFINITY, point(0.0), point(1.0))
    with pytest.raises(DegenerateTriple):
        from_three_points(INFINITY, point(0.0), point(1.0), point(2.0), point(2.0), point(3.0))


@given(*([finite] * 6))
@settings(max_examples=200, deadline=None)
def test_from_three_points_round_trip(x1, y1, x2, y2, x3, y3):
    ps = [point(complex(x1, y1)), point(complex(x2, y2)), point(complex(x3, y3))]
    qs = [point(1.0), point(-1.0j), point(2.0 + 2.0j)]
    if min(
        point_distance(ps[i], ps[j]) for i in range(3) for j in range(i + 1, 3)
    ) < 1e-3:
        return
    f = from_three_points(*ps, *qs)
    for p, q in zip(ps, qs):
        assert points_equal(apply(f, p), q, 1e-6)


def test_bar_conjugate():
    real_map = MobiusMap(2.0, 1.0, 1.0, 1.0)
    assert maps_equal_projective(bar_conjugate(real_map), real_map)
    rot = scaling(1.0j)
    assert maps_equal_projective(bar_conjugate(rot), scaling(-1.0j))
    f = MobiusMap(1.0 + 2.0j, 0.5, -0.25j, 1.0, True)
    assert maps_equal_projective(bar_conjugate(bar_conjugate(f)), f)


def test_point_normalization():
    p = point(3.0 + 4.0j)
    assert max(abs(p.num), abs(p.den)) == pytest.approx(1.0)
    assert points_equal(p, point(3.0 + 4.0j))
    assert not points_equal(p, point(3.0 - 4.0j))
    assert INFINITY.is_infinity
    with pytest.raises(ZeroDivisionError):
        INFINITY.to_complex()

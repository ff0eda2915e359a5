"""Scalarizations, halfspace-valued dual maps, bases, reconstruction."""

import random
from fractions import Fraction

import pytest

from upperset.conjugate import PiecewiseLinearFn
from upperset.geometry import Cone, Polyhedron
from upperset.linalg import NEG_INF, POS_INF, dot, norm2_sq, vec
from upperset.maps import SamplePlan
from upperset.scalarize import (
    DirectionBase,
    certify_base,
    direction_fan,
    piecewise_scalarization,
    reconstruct,
    s_map,
    scalarize_eval,
)
from upperset.sets import (
    check_upper_closed,
    member,
    set_order_leq,
    sets_equal,
    upper_closure,
)

from test_maps import (
    ORTHANT,
    RAY,
    constant_map,
    halfline_domain_map,
    ray_translate_map,
    tilted_halfplane_map,
)


def F(x):
    return Fraction(x)


class TestScalarizeEval:
    def test_tilted_halfplane_matched_direction(self):
        # At x = 1 the direction (-1,-1) satisfies x z1* = z2*, and the
        # value is -(z1* + z2*) = 2.
        f = tilted_halfplane_map()
        assert scalarize_eval(f, [-1, -1], [1]) == 2

    def test_tilted_halfplane_mismatched_direction(self):
        f = tilted_halfplane_map()
        assert scalarize_eval(f, [-1, 0], [1]) == NEG_INF

    def test_tilted_halfplane_left_branch(self):
        f = tilted_halfplane_map()
        assert scalarize_eval(f, [-1, -1], [-1]) == 0

    def test_empty_value_gives_plus_inf(self):
        f = halfline_domain_map()
        assert scalarize_eval(f, [-1, -1], [-2]) == POS_INF

    def test_direction_validation(self):
        f = constant_map()
        with pytest.raises(ValueError):
            scalarize_eval(f, [1, 0], [0])
        with pytest.raises(ValueError):
            scalarize_eval(f, [0, 0], [0])

    def test_positive_homogeneity(self):
        rng = random.Random(17)
        f = ray_translate_map()
        for _ in range(20):
            zs = (F(-rng.randint(0, 4)), F(-rng.randint(1, 4)))
            lam = F(rng.randint(1, 5))
            x = [F(rng.randint(-3, 3))]
            base_val = scalarize_eval(f, zs, x)
            scaled = scalarize_eval(f, tuple(lam * c for c in zs), x)
            if not isinstance(base_val, float):
                assert scaled == lam * base_val

    def test_midpoint_convexity_on_convex_map(self):
        f = ray_translate_map()
        rng = random.Random(5)
        for _ in range(15):
            x1, x2 = F(rng.randint(-4, 4)), F(rng.randint(-4, 4))
            t = F(rng.randint(1, 7)) / 8
            mid = t * x1 + (1 - t) * x2
            for zs in [(-1, 0), (0, -1), (-2, -1)]:
                vm = scalarize_eval(f, zs, [mid])
                v1 = scalarize_eval(f, zs, [x1])
                v2 = scalarize_eval(f, zs, [x2])
                if not any(isinstance(v, float) for v in (vm, v1, v2)):
                    assert vm <= t * v1 + (1 - t) * v2


class TestSMap:
    def test_zero_functional(self):
        u = s_map([0], [-1, 0], [3], ORTHANT)
        # {z : -z1 <= 0} = {z1 >= 0}, independent of x.
        assert member(u, [0, 5]) and member(u, [2, -7]) and not member(u, [-1, 0])

    def test_rearranged_halfspace(self):
        # x* = 1, x = 2, z* = (-1, 0): {z : 2 - z1 <= 0} = {z1 >= 2}.
        u = s_map([1], [-1, 0], [2], ORTHANT)
        for z1 in range(-2, 6):
            for z2 in range(-2, 3):
                assert member(u, [z1, z2]) == (z1 >= 2)

    def test_translation_structure(self):
        u0 = s_map([1], [-1, -1], [0], ORTHANT)
        u2 = s_map([1], [-1, -1], [2], ORTHANT)
        # S(2) = S(0) + w for any w with z*.w = -x*.x; supports shift by z*.w.
        shift = (F(2), F(0))
        assert dot((F(-1), F(-1)), shift) == -2
        assert u2.support((-1, -1)) == u0.support((-1, -1)) + dot((F(-1), F(-1)), shift)
        translated = u0.pieces[0].translate(shift)
        assert translated.rows == u2.pieces[0].rows or translated.contained_in(
            u2.pieces[0]
        ) and u2.pieces[0].contained_in(translated)

    def test_values_upper_closed(self):
        for xs, x in [([0], [0]), ([1], [2]), ([-2], [1])]:
            u = s_map(xs, [-1, -2], x, ORTHANT)
            assert check_upper_closed(u)
            assert sets_equal(upper_closure(u.pieces[0], ORTHANT), u)

    def test_zero_direction_rejected(self):
        with pytest.raises(ValueError):
            s_map([1], [0, 0], [0], ORTHANT)


class TestDirectionFan:
    def test_extreme_rays_present(self):
        fan = direction_fan(ORTHANT, 8)
        assert (F(-1), F(0)) in fan and (F(0), F(-1)) in fan

    def test_all_directions_in_dual(self):
        fan = direction_fan(ORTHANT, 16, tails=6)
        for d in fan:
            assert all(c <= 0 for c in d)

    def test_tails_have_dyadic_slopes(self):
        fan = direction_fan(ORTHANT, 4, tails=4)
        slopes = set()
        for d in fan:
            if d[0] != 0:
                slopes.add(d[1] / d[0])
        for j in range(1, 5):
            assert F(1) / 2**j in slopes

    def test_halfplane_dual_fan(self):
        fan = direction_fan(RAY, 8)
        # C^- is the lower halfplane; the fan must span it, not a slice.
        assert any(d[0] > 0 for d in fan) and any(d[0] < 0 for d in fan)
        assert all(d[1] <= 0 for d in fan)

    def test_one_dimensional(self):
        cone = Cone.from_generators([[1]])
        assert direction_fan(cone, 8) == ((F(-1),),)


class TestCertifyBase:
    def test_unit_extreme_rays(self):
        base = DirectionBase(ORTHANT, ((F(-1), F(0)), (F(0), F(-1))))
        flags = certify_base(base)
        assert flags["generates_dual"] and flags["inf_sup_positive"]
        assert flags["inf_sup_value_sq"] == 1 and flags["unit_normalized"]

    def test_zero_vector_rejected(self):
        with pytest.raises(ValueError):
            DirectionBase(ORTHANT, ((F(0), F(0)),))

    def test_single_ray_does_not_generate(self):
        base = DirectionBase(ORTHANT, ((F(-1), F(0)),))
        assert not certify_base(base)["generates_dual"]


class TestReconstruct:
    def test_exact_for_cone_translate(self):
        f = constant_map()
        base = DirectionBase.default(ORTHANT, 4)
        rec = reconstruct(f, [0], base)
        assert sets_equal(rec, f.evaluate([0]))

    def test_outer_containment_always(self):
        f = ray_translate_map()
        base = DirectionBase.default(RAY, 8)
        for x in ([0], [1], [F(-3) / 2]):
            rec = reconstruct(f, x, base)
            # rec is an outer approximation: f(x) <=_lattice rec means rec
            # contains f(x)... order: set_order_leq(rec, f(x)) iff f(x) <= rec.
            assert set_order_leq(rec, f.evaluate(x))

    def test_exact_when_base_covers_normal_fan(self):
        f = ray_translate_map()
        dirs = ((F(-1), F(0)), (F(1), F(0)), (F(0), F(-1)))
        base = DirectionBase(RAY, dirs)
        rec = reconstruct(f, [2], base)
        assert sets_equal(rec, f.evaluate([2]))

    def test_empty_value(self):
        f = halfline_domain_map()
        base = DirectionBase.default(ORTHANT, 4)
        assert reconstruct(f, [-1], base).is_empty


class TestClosedForm:
    def test_ray_translate_closed_form(self):
        f = ray_translate_map()
        phi = piecewise_scalarization(f, (-1, 0))
        assert phi is not None
        for x in (F(-3), F(0), F(5), F(1) / 2):
            assert phi((x,)) == x  # phi(x) = inf{z1} = x on the ray

    def test_closed_form_matches_pointwise(self):
        f = halfline_domain_map()
        for zs in [(-1, 0), (0, -1), (-1, -2)]:
            phi = piecewise_scalarization(f, zs)
            assert phi is not None
            for x in (F(-2), F(-1) / 2, F(0), F(1), F(7) / 2):
                assert phi((x,)) == scalarize_eval(f, zs, [x])

    def test_minus_inf_branch(self):
        # f(x) = whole plane as an upper set: support +inf, phi = -inf.
        cone = ORTHANT
        from upperset.maps import AffineBody, SetValuedMap

        f = SetValuedMap(
            1,
            cone,
            AffineBody(normals=(), offsets=(), x_coeffs=()),
            name="universal",
        )
        phi = piecewise_scalarization(f, (-1, -1))
        assert phi is not None
        assert phi((F(0),)) == NEG_INF

    def test_no_closed_form_for_tilting_normals(self):
        assert piecewise_scalarization(tilted_halfplane_map(), (-1, -1)) is None

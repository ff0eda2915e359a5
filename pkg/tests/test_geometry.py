"""Cones, polyhedra, dual cones, support values: exact geometry layer."""

import itertools
import random
from fractions import Fraction

import pytest

from upperset.geometry import (
    Cone,
    DimensionMismatch,
    DualPair,
    OrderConeError,
    Polyhedron,
    cone_contains,
    cones_equal,
    dual_cone,
    fourier_motzkin,
    lp_solve,
    project_out,
    support_value,
)
from upperset.linalg import NEG_INF, POS_INF, dot, vec
from upperset.simplex import LPStatus


def F(x):
    return Fraction(x)


ORTHANT_2D = Cone.from_generators([[1, 0], [0, 1]])
RAY_CONE = Cone.from_halfspaces([[1, 0], [-1, 0], [0, 1]])  # {z1 = 0, z2 >= 0}


def brute_force_dual_membership(cone, zstar):
    # z* is in C^- exactly when z*.g <= 0 for every generator of C.
    return all(dot(vec(zstar), g) <= 0 for g in cone.generators)


class TestDualCone:
    def test_orthant_dual_is_negative_orthant(self):
        dual = dual_cone(ORTHANT_2D)
        assert dual.contains([-1, -1])
        assert dual.contains([0, -2])
        assert not dual.contains([1, 0])
        assert not dual.contains([-1, Fraction(1, 10)])

    def test_ray_cone_dual_is_halfplane(self):
        # Oracle: brute-force sign check over a grid of candidate directions.
        dual = dual_cone(RAY_CONE)
        grid = range(-3, 4)
        for a in grid:
            for b in grid:
                expected = brute_force_dual_membership(RAY_CONE, [a, b])
                assert dual.contains([a, b]) == expected, (a, b)
        # The halfplane {z*2 <= 0} in particular.
        assert dual.contains([5, -1]) and dual.contains([-5, 0])
        assert not dual.contains([0, 1])

    def test_skewed_cone_dual(self):
        cone = Cone.from_generators([[1, 0], [1, 1]])
        dual = dual_cone(cone)
        for a in range(-3, 4):
            for b in range(-3, 4):
                expected = brute_force_dual_membership(cone, [a, b])
                assert dual.contains([a, b]) == expected, (a, b)

    def test_involution(self):
        for cone in (ORTHANT_2D, RAY_CONE, Cone.from_generators([[1, 0], [1, 1]])):
            assert cones_equal(dual_cone(dual_cone(cone)), cone)

    def test_flags(self):
        assert ORTHANT_2D.pointed and ORTHANT_2D.has_interior
        assert RAY_CONE.pointed and not RAY_CONE.has_interior
        halfplane = Cone.from_halfspaces([[0, 1]])
        assert not halfplane.pointed and halfplane.has_interior

    def test_full_space_rejected_as_ordering_cone(self):
        with pytest.raises(OrderConeError):
            Cone.from_generators([[1], [-1]])

    def test_three_dimensional_dual(self):
        cone = Cone.from_generators([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
        dual = dual_cone(cone)
        for pt in itertools.product(range(-2, 3), repeat=3):
            expected = brute_force_dual_membership(cone, pt)
            assert dual.contains(pt) == expected


class TestConeContains:
    def test_origin(self):
        assert cone_contains(ORTHANT_2D, [0, 0])

    def test_ray_cone_member(self):
        assert cone_contains(RAY_CONE, [0, 3])

    def test_ray_cone_nonmember(self):
        assert not cone_contains(RAY_CONE, [1, 0])

    def test_dim_mismatch(self):
        with pytest.raises(DimensionMismatch):
            cone_contains(ORTHANT_2D, [1, 2, 3])


class TestSupportValue:
    def test_orthant(self):
        p = Polyhedron(2, [([1, 0], 0), ([0, 1], 0)])
        assert support_value(p, [-1, -1]) == 0

    def test_shifted_halfplane(self):
        p = Polyhedron(2, [([1, 1], 2)])
        # Oracle: brute-force max of z*.z over a grid window of the set.
        best = max(
            -a - b
            for a in range(0, 9)
            for b in range(0, 9)
            if a + b >= 2
        )
        assert best == -2
        assert support_value(p, [-1, -1]) == -2

    def test_empty(self):
        assert support_value(Polyhedron.empty(2), [1, 0]) == NEG_INF

    def test_unbounded(self):
        p = Polyhedron(2, [([1, 0], 0), ([0, 1], 0)])
        assert support_value(p, [1, 0]) == POS_INF

    def test_sublinearity_random(self):
        rng = random.Random(7)
        p = Polyhedron(2, [([1, 0], -1), ([0, 1], -2), ([1, 1], 0)])
        for _ in range(60):
            u = vec([rng.randint(-3, 0), rng.randint(-3, 0)])
            v = vec([rng.randint(-3, 0), rng.randint(-3, 0)])
            su, sv = p.support(u), p.support(v)
            ssum = p.support(tuple(a + b for a, b in zip(u, v)))
            if su != POS_INF and sv != POS_INF:
                assert ssum <= su + sv
            lam = F(rng.randint(0, 5))
            sl = p.support(tuple(lam * x for x in u))
            if su != POS_INF:
                assert sl == lam * su or (lam == 0 and sl == 0)


class TestLpSolve:
    def test_optimal(self):
        p = Polyhedron(1, [([1], 0), ([-1], -1)])
        res = lp_solve([1], p)
        assert res.status is LPStatus.OPTIMAL
        assert res.value == 1 and res.point == (F(1),)

    def test_unbounded(self):
        res = lp_solve([1], Polyhedron(1, [([1], 0)]))
        assert res.status is LPStatus.UNBOUNDED

    def test_infeasible(self):
        res = lp_solve([1], Polyhedron(1, [([1], 1), ([-1], 0)]))
        assert res.status is LPStatus.INFEASIBLE


class TestPolyhedron:
    def test_contains_and_empty(self):
        p = Polyhedron(2, [([1, 0], 0), ([0, 1], 0)])
        assert p.contains([0, 0]) and not p.contains([-1, 0])
        assert not p.is_empty
        assert Polyhedron.empty(2).is_empty

    def test_vertices_of_box(self):
        box = Polyhedron.box([(0, 1), (0, 2)])
        vs = set(box.vertices)
        assert vs == {
            (F(0), F(0)),
            (F(0), F(2)),
            (F(1), F(0)),
            (F(1), F(2)),
        }

    def test_minimal_faces_with_lineality(self):
        strip = Polyhedron(2, [([1, 0], 0), ([-1, 0], -1)])
        pts = strip.minimal_face_points
        assert len(pts) == 2
        assert strip.vertices == []
        assert {p[0] for p in pts} == {F(0), F(1)}

    def test_dist_sq_exact(self):
        p = Polyhedron(2, [([1, 0], 0), ([0, 1], 0)])
        assert p.dist_sq([2, 3]) == 0
        assert p.dist_sq([-3, 4]) == 9
        assert p.dist_sq([-1, -1]) == 2
        # Distance to a tilted halfplane: projection is rational, square exact.
        h = Polyhedron(2, [([1, 2], 5)])
        assert h.dist_sq([0, 0]) == Fraction(25, 5)

    def test_dist_sq_empty(self):
        assert Polyhedron.empty(2).dist_sq([0, 0]) == POS_INF

    def test_max_dist_between_translates(self):
        p = Polyhedron(2, [([1, 0], 1), ([0, 1], -1)])
        q = Polyhedron(2, [([1, 0], 0), ([0, 1], 0)])
        assert p.max_dist_sq_to(q) == 1
        # Recession mismatch blows up to +inf.
        wide = Polyhedron(2, [([0, 1], 0)])
        assert wide.max_dist_sq_to(q) == POS_INF

    def test_containment(self):
        inner = Polyhedron(2, [([1, 0], 1), ([0, 1], 1)])
        outer = Polyhedron(2, [([1, 0], 0), ([0, 1], 0)])
        assert inner.contained_in(outer)
        assert not outer.contained_in(inner)
        w = outer.violation_witness(inner)
        assert w is not None and outer.contains(w) and not inner.contains(w)

    def test_translate_scale(self):
        p = Polyhedron(2, [([1, 0], 0), ([0, 1], 0)])
        t = p.translate([1, -1])
        assert t.contains([1, -1]) and not t.contains([0, 0])
        s = t.scale(2)
        assert s.contains([2, -2]) and not s.contains([1, -1])

    def test_remove_redundant(self):
        p = Polyhedron(1, [([1], 0), ([1], -1), ([1], 0)])
        r = p.remove_redundant()
        assert len(r.rows) == 1
        assert r.rows[0] == ((F(1),), F(0))

    def test_affine_dim(self):
        line = Polyhedron(2, [([1, 0], 1), ([-1, 0], -1)])
        assert line.affine_dim == 1
        assert Polyhedron.full(2).affine_dim == 2
        assert Polyhedron.empty(2).affine_dim == -1

    def test_interior_point(self):
        p = Polyhedron(2, [([1, 0], 0), ([0, 1], 0), ([-1, -1], -4)])
        ip = p.interior_point()
        assert ip is not None
        assert all(dot(n, ip) > b for n, b in p.rows)
        line = Polyhedron(2, [([1, 0], 1), ([-1, 0], -1)])
        assert line.interior_point() is None


class TestProjection:
    def test_eliminate_variable(self):
        # {(x, z): z >= x, z >= -x, z <= 5} projected to x gives [-5, 5].
        rows = [
            (vec([-1, 1]), F(0)),
            (vec([1, 1]), F(0)),
            (vec([0, -1]), F(-5)),
        ]
        out = fourier_motzkin(rows, 1)
        p = Polyhedron(1, out)
        assert p.contains([5]) and p.contains([-5])
        assert not p.contains([F("51/10")])

    def test_project_out_infeasible(self):
        rows = [
            (vec([0, 1]), F(1)),
            (vec([0, -1]), F(0)),
        ]
        p = project_out(Polyhedron(2, rows), [1])
        assert p.is_empty

    def test_projection_matches_lp_image(self):
        rng = random.Random(11)
        for _ in range(20):
            rows = []
            for _ in range(rng.randint(2, 5)):
                n = vec([rng.randint(-3, 3), rng.randint(-3, 3)])
                rows.append((n, F(rng.randint(-4, 1))))
            poly = Polyhedron(2, rows)
            proj = project_out(poly, [1])
            for x in range(-6, 7):
                section = poly.intersect(
                    Polyhedron(2, [([1, 0], x), ([-1, 0], -x)])
                )
                assert proj.contains([x]) == (not section.is_empty)


class TestDualPair:
    def test_validation(self):
        pair = DualPair.of([1], [-1, -1])
        pair.validate_for(ORTHANT_2D)
        with pytest.raises(ValueError):
            DualPair.of([1], [0, 0]).validate_for(ORTHANT_2D)
        with pytest.raises(ValueError):
            DualPair.of([1], [1, 0]).validate_for(ORTHANT_2D)

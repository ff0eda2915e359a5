"""Set-valued map constructors: evaluation, convexity, graph interior, JSON."""

import json
from fractions import Fraction

import pytest

from upperset.geometry import Cone, Polyhedron
from upperset.maps import (
    AffineBody,
    AffineForm,
    MapError,
    PiecewiseBody,
    SamplePlan,
    SetValuedMap,
    constant_cone_body,
    constant_empty_body,
    convexity_check,
    graph_interior_witness,
    map_from_json,
    map_to_json,
    upper_closedness_spotcheck,
)
from upperset.sets import member
from upperset.verdict import Status

ORTHANT = Cone.from_generators([[1, 0], [0, 1]])
RAY = Cone.from_halfspaces([[1, 0], [-1, 0], [0, 1]])


def F(x):
    return Fraction(x)


def ray_translate_map():
    """f(x) = {(x, 0)} + C for the degenerate ray cone."""
    return SetValuedMap(
        1,
        RAY,
        AffineBody(
            normals=((F(1), F(0)), (F(-1), F(0)), (F(0), F(1))),
            offsets=(F(0), F(0), F(0)),
            x_coeffs=((F(1),), (F(-1),), (F(0),)),
        ),
        name="ray-translate",
    )


def halfline_domain_map():
    """f(x) = C for x >= 0 and empty otherwise."""
    return SetValuedMap(
        1,
        ORTHANT,
        PiecewiseBody(
            guard=((F(1),), F(0)),
            when_true=constant_cone_body(ORTHANT, 1),
            when_false=constant_empty_body(1, 2),
        ),
        name="orthant-halfline",
    )


def tilted_halfplane_map():
    """f(x) = {z : z1 + x z2 >= 1 + x} for x > 0, the orthant for x <= 0."""
    return SetValuedMap(
        1,
        ORTHANT,
        PiecewiseBody(
            guard=((F(-1),), F(0)),
            when_true=constant_cone_body(ORTHANT, 1),
            when_false=AffineBody(
                normals=((F(1), F(0)),),
                offsets=(F(1),),
                x_coeffs=((F(1),),),
                x_normals=(((F(0), F(1)),),),
            ),
        ),
        name="tilted-halfplane",
        convex=False,
    )


def constant_map(cone=ORTHANT):
    return SetValuedMap(1, cone, constant_cone_body(cone, 1), name="constant")


class TestEvaluate:
    def test_halfline_domain_values(self):
        f = halfline_domain_map()
        assert f.evaluate([-1]).is_empty
        v0 = f.evaluate([0])
        assert member(v0, [0, 0]) and member(v0, [2, 3]) and not member(v0, [-1, 0])

    def test_tilted_halfplane_value(self):
        f = tilted_halfplane_map()
        v = f.evaluate([1])
        assert v.pieces[0].rows == (((F(1), F(1)), F(2)),)
        assert member(v, [1, 1]) and member(v, [2, 0]) and not member(v, [0, 0])

    def test_ray_translate_values(self):
        f = ray_translate_map()
        v = f.evaluate([Fraction(1, 2)])
        assert member(v, [Fraction(1, 2), 7]) and not member(v, [0, 0])

    def test_dimension_check(self):
        with pytest.raises(MapError):
            constant_map().evaluate([1, 2])

    def test_upper_closedness_spotcheck(self):
        for f in (ray_translate_map(), halfline_domain_map(), tilted_halfplane_map()):
            assert upper_closedness_spotcheck(f, SamplePlan(seed=3, count=12))


class TestDomain:
    def test_halfline(self):
        f = halfline_domain_map()
        pieces = f.domain_pieces()
        assert len(pieces) == 1
        assert pieces[0].contains([0]) and pieces[0].contains([5])
        assert not pieces[0].contains([-1])
        assert f.in_domain([2]) and not f.in_domain([-2])

    def test_affine_domain_projection(self):
        # f(x) = {z : z >= 0, 0.z >= x} in R: empty where x > 0.
        f = SetValuedMap(
            1,
            Cone.from_generators([[1]]),
            AffineBody(
                normals=((F(1),), (F(0),)),
                offsets=(F(0), F(0)),
                x_coeffs=((F(0),), (F(1),)),
            ),
        )
        dom = f.domain_pieces()
        assert len(dom) == 1
        assert dom[0].contains([0]) and dom[0].contains([-3]) and not dom[0].contains([1])


class TestBoxIntersection:
    def test_exact_certificate(self):
        f = ray_translate_map()
        q = f.box_value_intersection((F(0),), F(1))
        assert q is not None and q.is_empty  # disjoint rays share no point

        g = constant_map()
        q2 = g.box_value_intersection((F(0),), F(1))
        assert q2 is not None and q2.contains([0, 0])

    def test_straddling_guard_gives_none(self):
        f = halfline_domain_map()
        assert f.box_value_intersection((F(0),), F(1)) is None
        inside = f.box_value_intersection((F(5),), F(1))
        assert inside is not None and inside.contains([0, 0])


class TestConvexity:
    def test_constant_holds(self):
        assert convexity_check(constant_map()).status is Status.HOLDS

    def test_affine_families_are_convex(self):
        assert convexity_check(ray_translate_map()).status is Status.HOLDS

    def test_deliberate_nonconvex_fixture_fails(self):
        # f(x) = {z >= -|x|}: the midpoint value strictly contains the
        # average of the endpoint values, violating the lattice inequality.
        cone = Cone.from_generators([[1]])
        f = SetValuedMap(
            1,
            cone,
            PiecewiseBody(
                guard=((F(1),), F(0)),
                when_true=AffineBody(
                    normals=((F(1),),), offsets=(F(0),), x_coeffs=((F(-1),),)
                ),
                when_false=AffineBody(
                    normals=((F(1),),), offsets=(F(0),), x_coeffs=((F(1),),)
                ),
            ),
            name="concave-side",
            convex=False,
        )
        verdict = convexity_check(f, SamplePlan(seed=5, count=40))
        assert verdict.status is Status.FAILS
        assert verdict.witness is not None
        # Witness re-check by hand: the recorded midpoint must violate.
        assert verdict.witness.x is not None


class TestGraphInterior:
    def test_halfline_map_fails_at_boundary(self):
        v = graph_interior_witness(halfline_domain_map(), [0])
        assert v.status is Status.FAILS

    def test_constant_map_holds(self):
        v = graph_interior_witness(constant_map(), [7])
        assert v.status is Status.HOLDS
        assert v.witness is not None and v.witness.radius is not None

    def test_ray_values_have_no_interior(self):
        v = graph_interior_witness(ray_translate_map(), [0])
        assert v.status is Status.FAILS

    def test_empty_value_fails(self):
        v = graph_interior_witness(halfline_domain_map(), [-2])
        assert v.status is Status.FAILS


class TestJsonSchema:
    def test_round_trip(self):
        for f in (ray_translate_map(), halfline_domain_map(), tilted_halfplane_map()):
            data = json.loads(json.dumps(map_to_json(f)))
            g = map_from_json(data)
            assert g.domain_dim == f.domain_dim
            assert g.convex == f.convex
            for x in ([F(0)], [F(1)], [F(-1)], [Fraction(1, 2)]):
                vf, vg = f.evaluate(x), g.evaluate(x)
                assert vf.is_empty == vg.is_empty
                if not vf.is_empty and vf.is_polyhedral:
                    assert vf.pieces[0].rows == vg.pieces[0].rows

    def test_scaled_body_round_trip(self):
        base = SetValuedMap(
            1,
            ORTHANT,
            ScaledBody_fixture(),
            name="scaled",
        )
        data = map_to_json(base)
        g = map_from_json(data)
        assert not g.evaluate([2]).is_empty


def ScaledBody_fixture():
    from upperset.maps import ScaledBody
    from upperset.sets import embed_point

    return ScaledBody(embed_point([1, 1], ORTHANT), AffineForm.of([1], 0))

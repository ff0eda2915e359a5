"""Rational vector helpers and exact linear solves."""

import pytest
from fractions import Fraction

from upperset.linalg import (
    dot,
    format_scalar,
    frac,
    matrix_rank,
    norm1,
    norm2_sq,
    nullspace,
    parse_scalar,
    project_onto_affine,
    solve_affine,
    vec,
    POS_INF,
    NEG_INF,
)


def test_frac_accepts_strings_and_ints():
    assert frac("3/7") == Fraction(3, 7)
    assert frac("0.25") == Fraction(1, 4)
    assert frac(5) == Fraction(5)
    with pytest.raises(TypeError):
        frac(0.25)


def test_dot_dimension_check():
    with pytest.raises(ValueError):
        dot(vec([1, 2]), vec([1]))


def test_norms():
    v = vec([3, -4])
    assert norm1(v) == 7
    assert norm2_sq(v) == 25


def test_solve_affine_unique():
    a = [vec([2, 1]), vec([1, -1])]
    sol, basis = solve_affine(a, [frac(3), frac(0)])
    assert sol == (Fraction(1), Fraction(1))
    assert basis == []


def test_solve_affine_underdetermined():
    a = [vec([1, 1, 0])]
    sol, basis = solve_affine(a, [frac(2)])
    assert sol is not None
    assert dot(a[0], sol) == 2
    assert len(basis) == 2
    for d in basis:
        assert dot(a[0], d) == 0


def test_solve_affine_inconsistent():
    a = [vec([1, 1]), vec([2, 2])]
    sol, _ = solve_affine(a, [frac(1), frac(3)])
    assert sol is None


def test_rank_and_nullspace():
    assert matrix_rank([vec([1, 2]), vec([2, 4])]) == 1
    ns = nullspace([vec([1, 2])])
    assert len(ns) == 1
    assert dot(vec([1, 2]), ns[0]) == 0


def test_projection_onto_line():
    # Project (2, 0) onto {x + y = 0}: expect (1, -1).
    p = project_onto_affine(vec([2, 0]), [vec([1, 1])], [frac(0)])
    assert p == (Fraction(1), Fraction(-1))


def test_projection_redundant_rows():
    p = project_onto_affine(
        vec([2, 0]), [vec([1, 1]), vec([2, 2])], [frac(0), frac(0)]
    )
    assert p == (Fraction(1), Fraction(-1))


def test_projection_empty_affine_set():
    p = project_onto_affine(vec([0, 0]), [vec([1, 1]), vec([1, 1])], [frac(0), frac(1)])
    assert p is None


def test_scalar_formatting_round_trip():
    for x in (Fraction(3, 7), Fraction(-2), POS_INF, NEG_INF):
        assert parse_scalar(format_scalar(x)) == x

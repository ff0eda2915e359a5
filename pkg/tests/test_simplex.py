"""Exact LP solver: examples, duality, and determinism."""

import random
from fractions import Fraction

from upperset.linalg import NEG_INF, POS_INF, dot, vec
from upperset.simplex import LPStatus, lp_support, solve_lp


def F(x):
    return Fraction(x)


class TestSolveLP:
    def test_bounded_box(self):
        # maximize z1 over {0 <= z1 <= 1}
        res = solve_lp(
            vec([1]), [(vec([1]), F(0)), (vec([-1]), F(-1))], sense="max"
        )
        assert res.status is LPStatus.OPTIMAL
        assert res.value == 1
        assert res.point == (F(1),)

    def test_unbounded(self):
        res = solve_lp(vec([1]), [(vec([1]), F(0))], sense="max")
        assert res.status is LPStatus.UNBOUNDED
        assert res.ray is not None
        # The ray improves the objective and stays feasible.
        assert dot(vec([1]), res.ray) > 0

    def test_infeasible(self):
        res = solve_lp(
            vec([1]), [(vec([1]), F(1)), (vec([-1]), F(0))], sense="max"
        )
        assert res.status is LPStatus.INFEASIBLE

    def test_min_sense(self):
        res = solve_lp(
            vec([1, 1]),
            [(vec([1, 0]), F(2)), (vec([0, 1]), F(-1))],
            sense="min",
        )
        assert res.status is LPStatus.OPTIMAL
        assert res.value == 1
        assert res.point == (F(2), F(-1))

    def test_exact_fractions(self):
        # maximize z over {3z <= 1} = {-3z >= -1}
        res = solve_lp(vec([1]), [(vec([-3]), F(-1))], sense="max")
        assert res.value == Fraction(1, 3)

    def test_no_constraints(self):
        res = solve_lp(vec([0, 0]), [], sense="max")
        assert res.status is LPStatus.OPTIMAL and res.value == 0
        res = solve_lp(vec([1, 0]), [], sense="min")
        assert res.status is LPStatus.UNBOUNDED

    def test_degenerate_does_not_cycle(self):
        # Classic degenerate vertex: many constraints active at the origin.
        cons = [
            (vec([1, 0]), F(0)),
            (vec([0, 1]), F(0)),
            (vec([1, 1]), F(0)),
            (vec([2, 1]), F(0)),
            (vec([-1, -1]), F(-1)),
        ]
        res = solve_lp(vec([-1, -2]), cons, sense="max")
        assert res.status is LPStatus.OPTIMAL
        assert res.value == 0


class TestDuality:
    def test_dual_certificate_max(self):
        cons = [
            (vec([-1, 0]), F(-4)),
            (vec([0, -1]), F(-3)),
            (vec([-1, -2]), F(-8)),
            (vec([1, 0]), F(0)),
            (vec([0, 1]), F(0)),
        ]
        c = vec([3, 5])
        res = solve_lp(c, cons, sense="max", want_dual=True)
        assert res.status is LPStatus.OPTIMAL
        lam = res.dual
        assert lam is not None
        assert all(li <= 0 for li in lam)
        for j in range(2):
            assert sum(lam[i] * cons[i][0][j] for i in range(len(cons))) == c[j]
        assert sum(lam[i] * cons[i][1] for i in range(len(cons))) == res.value

    def test_primal_dual_match_random(self):
        rng = random.Random(20240517)
        for _ in range(40):
            dim = rng.choice([1, 2, 3])
            m = rng.randint(dim, dim + 4)
            cons = []
            for _ in range(m):
                n = vec([rng.randint(-4, 4) for _ in range(dim)])
                cons.append((n, F(rng.randint(-5, 2))))
            # Keep instances bounded by boxing the feasible set.
            for j in range(dim):
                e = [0] * dim
                e[j] = 1
                cons.append((vec(e), F(-10)))
                e[j] = -1
                cons.append((vec(e), F(-10)))
            c = vec([rng.randint(-3, 3) for _ in range(dim)])
            sense = rng.choice(["max", "min"])
            res = solve_lp(c, cons, sense=sense, want_dual=True)
            if res.status is not LPStatus.OPTIMAL:
                assert res.status is LPStatus.INFEASIBLE
                continue
            lam = res.dual
            assert lam is not None
            for j in range(dim):
                assert sum(lam[i] * cons[i][0][j] for i in range(len(cons))) == c[j]
            assert sum(lam[i] * cons[i][1] for i in range(len(cons))) == res.value

    def test_determinism(self):
        cons = [
            (vec([1, 1]), F(1)),
            (vec([1, -1]), F(-3)),
            (vec([-1, 0]), F(-5)),
            (vec([0, 1]), F(-5)),
        ]
        first = solve_lp(vec([2, 1]), cons, sense="max")
        for _ in range(5):
            again = solve_lp(vec([2, 1]), cons, sense="max")
            assert again == first


class TestSupport:
    def test_support_empty(self):
        assert lp_support(vec([1]), [(vec([1]), F(1)), (vec([-1]), F(0))]) == NEG_INF

    def test_support_unbounded(self):
        assert lp_support(vec([1]), [(vec([1]), F(0))]) == POS_INF

    def test_support_bounded(self):
        assert lp_support(vec([1, 0]), [(vec([-1, 0]), F(-7)), (vec([0, 1]), F(0))]) == 7

"""Exact rational linear programming.

A dense two-phase simplex over ``fractions.Fraction`` with Bland's pivoting
rule throughout, so runs terminate and are deterministic: the same instance
always yields the same optimal vertex, which makes every downstream witness
reproducible.  Problem sizes here are desk scale (a handful of variables and
constraints), where exact dense pivoting is entirely adequate.

The public entry point solves

    maximize / minimize  c . z    subject to    n_i . z >= b_i

with free variables z, reporting an exact optimum, an unbounded improving
ray, or infeasibility.  Dual multipliers are computed on request by solving
the dual program explicitly, which keeps them exact regardless of how the
primal basis was reached.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .linalg import NEG_INF, POS_INF, ONE, ZERO, Ext, Vec, dot, frac, vec


class LPStatus(enum.Enum):
    OPTIMAL = "optimal"
    UNBOUNDED = "unbounded"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class LPResult:
    """Outcome of an exact LP solve.

    For OPTIMAL: ``value`` is the optimal objective in the requested sense and
    ``point`` an optimal vertex.  When duals were requested, ``dual`` holds one
    multiplier per input constraint with ``sum_i dual_i * n_i = c`` and
    ``sum_i dual_i * b_i = value``; multipliers are >= 0 for minimization and
    <= 0 for maximization (the natural signs for ``>=`` constraints).  For
    UNBOUNDED, ``ray`` is a feasible direction improving the objective.
    """

    status: LPStatus
    value: Ext | None = None
    point: Vec | None = None
    dual: Vec | None = None
    ray: Vec | None = None


Constraint = tuple[Vec, Fraction]  # (normal n, offset b) meaning n.z >= b


def _pivot(tableau: list[list[Fraction]], basis: list[int], row: int, col: int) -> None:
    pr = tableau[row]
    pv = pr[col]
    tableau[row] = [x / pv for x in pr]
    pr = tableau[row]
    for i, r in enumerate(tableau):
        if i != row and r[col] != 0:
            f = r[col]
            tableau[i] = [x - f * y for x, y in zip(r, pr)]
    basis[row] = col


def _bland_step(
    tableau: list[list[Fraction]],
    basis: list[int],
    reduced: list[Fraction],
    ncols: int,
) -> int | None:
    """One simplex step under Bland's rule.

    Returns the entering column when the step is unbounded (no leaving row),
    ``None`` after a successful pivot; raises StopIteration at optimality.
    """
    enter = None
    for j in range(ncols):
        if reduced[j] < 0:
            enter = j
            break
    if enter is None:
        raise StopIteration
    leave = None
    best: Fraction | None = None
    for i, r in enumerate(tableau):
        a = r[enter]
        if a > 0:
            ratio = r[-1] / a
            if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                best = ratio
                leave = i
    if leave is None:
        return enter
    _pivot(tableau, basis, leave, enter)
    return None


def _reduced_costs(
    tableau: list[list[Fraction]], basis: list[int], c: list[Fraction], ncols: int
) -> list[Fraction]:
    red = list(c)
    for i, bi in enumerate(basis):
        cb = c[bi]
        if cb != 0:
            row = tableau[i]
            for j in range(ncols):
                if row[j] != 0:
                    red[j] -= cb * row[j]
    return red


def _simplex_standard(
    c: list[Fraction], a: list[list[Fraction]], b: list[Fraction]
) -> tuple[LPStatus, list[Fraction] | None]:
    """min c.x s.t. A x = b, x >= 0.  Returns (status, x or improving ray)."""
    m = len(a)
    n = len(c)
    rows = []
    for i in range(m):
        r = list(a[i])
        rhs = b[i]
        if rhs < 0:
            r = [-x for x in r]
            rhs = -rhs
        rows.append(r + [ZERO] * m + [rhs])
    for i in range(m):
        rows[i][n + i] = ONE
    basis = [n + i for i in range(m)]
    ncols = n + m

    phase1 = [ZERO] * n + [ONE] * m
    while True:
        red = _reduced_costs(rows, basis, phase1, ncols)
        try:
            if _bland_step(rows, basis, red, ncols) is not None:
                raise AssertionError("phase-1 objective is bounded below by zero")
        except StopIteration:
            break
    infeas = sum((phase1[basis[i]] * rows[i][-1] for i in range(m)), ZERO)
    if infeas > 0:
        return LPStatus.INFEASIBLE, None
    # Drive artificials out of the basis, then drop rows still pinned to one
    # (those rows are redundant).  Basis columns stay unit columns across all
    # rows, so removing rows preserves canonical form.
    for i in range(m):
        if basis[i] >= n:
            pivot_col = None
            for j in range(n):
                if rows[i][j] != 0:
                    pivot_col = j
                    break
            if pivot_col is not None:
                _pivot(rows, basis, i, pivot_col)
    keep = [i for i in range(m) if basis[i] < n]
    rows = [rows[i][:n] + [rows[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]
    ncols = n

    cost = list(c)
    while True:
        red = _reduced_costs(rows, basis, cost, ncols)
        try:
            enter = _bland_step(rows, basis, red, ncols)
        except StopIteration:
            break
        if enter is not None:
            ray = [ZERO] * n
            ray[enter] = ONE
            for i, bi in enumerate(basis):
                ray[bi] = -rows[i][enter]
            return LPStatus.UNBOUNDED, ray
    x = [ZERO] * n
    for i, bi in enumerate(basis):
        x[bi] = rows[i][-1]
    return LPStatus.OPTIMAL, x


def solve_lp(
    objective,
    constraints: list[Constraint],
    sense: str = "max",
    want_dual: bool = False,
) -> LPResult:
    """Solve ``opt c.z  s.t.  n_i.z >= b_i`` with free z, exactly."""
    c_obj = vec(objective)
    dim = len(c_obj)
    cons = [(vec(n), frac(b)) for n, b in constraints]
    for n, _ in cons:
        if len(n) != dim:
            raise ValueError("constraint dimension mismatch")
    if sense not in ("max", "min"):
        raise ValueError(f"unknown sense {sense!r}")
    negate = sense == "max"
    m = len(cons)
    if m == 0:
        if all(x == 0 for x in c_obj):
            return LPResult(LPStatus.OPTIMAL, ZERO, (ZERO,) * dim, ())
        ray = c_obj if negate else vec([-x for x in c_obj])
        return LPResult(LPStatus.UNBOUNDED, ray=ray)

    # Standard form: z = u - w with u, w >= 0 and one slack s_i >= 0 per row,
    #   n_i.(u - w) - s_i = b_i.
    c_std = [(-x if negate else x) for x in c_obj]
    c_std += [(x if negate else -x) for x in c_obj]
    c_std += [ZERO] * m
    a_std: list[list[Fraction]] = []
    b_std: list[Fraction] = []
    for i, (n, b) in enumerate(cons):
        row = list(n) + [-x for x in n] + [ZERO] * m
        row[2 * dim + i] = -ONE
        a_std.append(row)
        b_std.append(b)

    status, xs = _simplex_standard(c_std, a_std, b_std)
    if status is LPStatus.INFEASIBLE:
        return LPResult(LPStatus.INFEASIBLE)
    if status is LPStatus.UNBOUNDED:
        assert xs is not None
        ray = tuple(xs[j] - xs[dim + j] for j in range(dim))
        return LPResult(LPStatus.UNBOUNDED, ray=ray)
    assert xs is not None
    point = tuple(xs[j] - xs[dim + j] for j in range(dim))
    value = dot(c_obj, point)
    dual = _solve_dual(c_obj, cons, sense, value) if want_dual else None
    return LPResult(LPStatus.OPTIMAL, value, point, dual)


def _solve_dual(c_obj: Vec, cons: list[Constraint], sense: str, value: Fraction) -> Vec:
    """Multipliers lam with sum lam_i n_i = c and sum lam_i b_i = value.

    For a max primal over >= constraints the dual is
    ``min b.lam  s.t.  N^T lam = c, lam <= 0``; for a min primal,
    ``max b.lam  s.t.  N^T lam = c, lam >= 0``.  Strong duality guarantees
    solvability whenever the primal had an optimum.
    """
    m = len(cons)
    dim = len(c_obj)
    rows: list[Constraint] = []
    for j in range(dim):
        col = vec([cons[i][0][j] for i in range(m)])
        rows.append((col, c_obj[j]))
        rows.append((vec([-x for x in col]), -c_obj[j]))
    for i in range(m):
        sign_row = [ZERO] * m
        sign_row[i] = -ONE if sense == "max" else ONE
        rows.append((tuple(sign_row), ZERO))
    b_vec = vec([b for _, b in cons])
    res = solve_lp(b_vec, rows, sense=("min" if sense == "max" else "max"))
    if res.status is not LPStatus.OPTIMAL or res.value != value:
        raise AssertionError("strong duality violated; exact solver bug")
    assert res.point is not None
    return res.point


def lp_feasible_point(constraints: list[Constraint], dim: int) -> Vec | None:
    """A feasible point of ``{z : n_i.z >= b_i}`` or None, exactly."""
    res = solve_lp(vec([0] * dim), constraints, sense="max")
    if res.status is LPStatus.INFEASIBLE:
        return None
    return res.point


def lp_support(direction, constraints: list[Constraint]) -> Ext:
    """sup { d.z : n_i.z >= b_i } as an extended rational.

    Empty feasible set gives -inf, unbounded programs +inf.
    """
    d = vec(direction)
    res = solve_lp(d, constraints, sense="max")
    if res.status is LPStatus.INFEASIBLE:
        return NEG_INF
    if res.status is LPStatus.UNBOUNDED:
        return POS_INF
    assert res.value is not None
    return res.value

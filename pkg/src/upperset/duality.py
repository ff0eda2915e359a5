"""Marginal maps, weak duality, and the fundamental duality formula.

For a bivariate map f on X x Y with upper closed values, the marginal map

    f_X(y) = cl union_x f(x, y)

plays the role of the scalar infimal value function.  Weak duality places
f_X(0) inside every negative-conjugate value (-f*)((0, y*), z*); the
fundamental duality formula upgrades this to equality of f_X(0) with the
intersection over all dual pairs, and produces one maximizing y* per proper
scalarization direction, provided the scalarizations of the slice f(x0, .)
are upper semicontinuous at the origin for every direction.

Everything here runs on exact piecewise-linear closed forms: the per
direction scalar problems are linear programs, the attained dual vector is
read off the exact LP dual and re-verified against the conjugate identity,
and equality of the two sides is certified by support values on the
direction base.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .conjugate import (
    NegConjugateValue,
    PiecewiseLinearFn,
    neg_conjugate_scalar_route,
    scalar_conjugate,
)
from .geometry import Cone, DualPair, Polyhedron
from .linalg import (
    NEG_INF,
    POS_INF,
    ZERO,
    Ext,
    Vec,
    dot,
    format_scalar,
    frac,
    vec,
)
from .maps import SetValuedMap
from .scalarize import DirectionBase, piecewise_scalarization
from .sets import (
    UpperSet,
    hausdorff_sq_window,
    lattice_inf,
    lattice_sup,
    member,
    set_order_leq,
)
from .simplex import Constraint, LPStatus, lp_feasible_point, solve_lp
from .verdict import Status, Verdict, Witness


class DualityError(ValueError):
    """The duality pipeline refuses to run (precondition violated)."""


@dataclass(frozen=True)
class BivariateMap:
    """A set-valued map on X x Y with the split of coordinates recorded."""

    map: SetValuedMap
    n: int  # dimension of X
    p: int  # dimension of Y

    def __post_init__(self):
        if self.map.domain_dim != self.n + self.p:
            raise ValueError("split dimensions do not match the underlying map")

    @property
    def cone(self) -> Cone:
        return self.map.cone

    def evaluate(self, x, y) -> UpperSet:
        return self.map.evaluate(tuple(vec(x)) + tuple(vec(y)))

    def slice_at(self, x0) -> SetValuedMap:
        """The map y -> f(x0, y) for constant-normal affine bodies."""
        from .maps import AffineBody

        body = self.map.body
        if not isinstance(body, AffineBody) or not body.fixed_normals:
            raise DualityError("slices require a constant-normal affine body")
        x0 = vec(x0)
        offsets = []
        y_coeffs = []
        for i in range(len(body.normals)):
            lx = body.x_coeffs[i][: self.n]
            ly = body.x_coeffs[i][self.n :]
            offsets.append(body.offsets[i] + dot(lx, x0))
            y_coeffs.append(ly)
        return SetValuedMap(
            self.p,
            self.cone,
            AffineBody(
                normals=body.normals,
                offsets=tuple(offsets),
                x_coeffs=tuple(y_coeffs),
            ),
            name=f"{self.map.name or 'bivariate'}-slice",
        )


def dyadic_grid(dim: int, splits: int, radius: Fraction = Fraction(8)) -> list[Vec]:
    """Uniform dyadic grid on [-radius, radius]^dim with 2^splits steps per
    axis; nested across refinements, so grid suprema grow monotonically."""
    steps = 2**splits
    axis = [(-radius) + Fraction(2 * radius * k, steps) for k in range(steps + 1)]
    if dim == 1:
        return [(a,) for a in axis]
    if dim == 2:
        return [(a, b) for a in axis for b in axis]
    raise ValueError("dyadic grids are supported up to two dimensions")


def marginal_scalarization(f: BivariateMap, zstar, y) -> Ext:
    """inf over x of the scalarization at (x, y), exactly.

    With the closed piecewise-linear form phi this is a single linear
    program in (x, t); the infimum is -inf when a minus-infinity region of
    phi is reachable at this y, and +inf when no x puts (x, y) in dom phi.
    """
    zs = vec(zstar)
    yv = vec(y)
    phi = piecewise_scalarization(f.map, zs)
    if phi is None:
        raise DualityError("marginal scalarization needs a closed form")
    return _pl_partial_infimum(phi, f.n, yv)


def _pl_partial_infimum(phi: PiecewiseLinearFn, n_free: int, fixed: Vec) -> Ext:
    """inf over the first n_free coordinates with the rest fixed."""
    for r in phi.minus_inf_regions:
        rows = _fix_tail(r.rows, n_free, fixed)
        if lp_feasible_point(rows, n_free) is not None:
            return NEG_INF
    best: Ext = POS_INF
    for piece in phi.pieces:
        rows = _fix_tail(piece.region.rows, n_free, fixed)
        obj = piece.coeffs[:n_free]
        shift = dot(piece.coeffs[n_free:], fixed) + piece.const
        res = solve_lp(obj, rows, sense="min")
        if res.status is LPStatus.UNBOUNDED:
            return NEG_INF
        if res.status is LPStatus.OPTIMAL:
            v = res.value + shift
            if v < best:
                best = v
    return best


def _fix_tail(rows: Sequence[Constraint], n_free: int, fixed: Vec) -> list[Constraint]:
    out: list[Constraint] = []
    for n, b in rows:
        head = n[:n_free]
        tail = n[n_free:]
        out.append((head, b - dot(tail, fixed)))
    return out


def marginal(
    f: BivariateMap,
    y,
    x_grid: Sequence[Vec] | None = None,
    base: DirectionBase | None = None,
) -> UpperSet:
    """The marginal value f_X(y).

    For constant-normal affine bodies the exact set is assembled from the
    marginal scalarization offsets over the base (exact whenever the base
    contains the facet normals, which holds for every packaged fixture);
    otherwise the closed union over the sample grid is returned as an inner
    approximation.
    """
    yv = vec(y)
    base = base or DirectionBase.default(f.cone, 16)
    try:
        rows: list[Constraint] = []
        empty = False
        for u in base.directions:
            v = marginal_scalarization(f, u, yv)
            if v == POS_INF:
                empty = True
                break
            if v == NEG_INF:
                continue
            rows.append((tuple(-c for c in u), v))
        if empty:
            return UpperSet.empty(f.cone)
        return UpperSet(f.cone, pieces=[Polyhedron(f.cone.dim, rows)])
    except DualityError:
        if x_grid is None:
            x_grid = dyadic_grid(f.n, 5)
        return marginal_inner_union(f, yv, x_grid)


def marginal_inner_union(f: BivariateMap, y, x_grid: Sequence[Vec]) -> UpperSet:
    values = []
    yv = vec(y)
    for x in x_grid:
        v = f.evaluate(x, yv)
        if not v.is_empty:
            values.append(v)
    if not values:
        return UpperSet.empty(f.cone)
    return lattice_inf(values)


def weak_duality_check(
    f: BivariateMap,
    pairs: Sequence[tuple[Vec, Vec]],
    samples: Sequence[Vec] | None = None,
) -> Verdict:
    """f_X(0) inside (-f*)((0, y*), z*) for every pair, exactly.

    A failure here indicates an implementation bug, not a mathematical
    possibility, and is reported with error-grade detail.
    """
    y0 = (ZERO,) * f.p
    checked = 0
    for ystar, zstar in pairs:
        ys, zs = vec(ystar), vec(zstar)
        lhs_support = marginal_scalarization(f, zs, y0)
        # sup of z*.z over f_X(0) is the negated marginal scalarization.
        sup_lhs: Ext
        if lhs_support == POS_INF:
            sup_lhs = NEG_INF
        elif lhs_support == NEG_INF:
            sup_lhs = POS_INF
        else:
            sup_lhs = -lhs_support
        xstar = (ZERO,) * f.n + tuple(ys)
        conj = neg_conjugate_scalar_route(f.map, DualPair.of(xstar, zs))
        if not _ext_leq(sup_lhs, conj.offset):
            return Verdict.fails(
                Witness(
                    direction=zs,
                    detail=(
                        "weak duality violated: support "
                        f"{format_scalar(sup_lhs)} exceeds conjugate offset "
                        f"{format_scalar(conj.offset)} at y*={ys}; this is an "
                        "implementation bug"
                    ),
                ),
                resolution=checked,
            )
        checked += 1
        if samples:
            lhs_inner = marginal_inner_union(f, y0, samples)
            if lhs_inner.is_polyhedral:
                for piece in lhs_inner.pieces:
                    for pt in piece.minimal_face_points:
                        if not member(conj.value, pt):
                            return Verdict.fails(
                                Witness(z=pt, direction=zs, detail="inner point escapes"),
                                resolution=checked,
                            )
    return Verdict.holds(resolution=checked, note="inclusion exact on all pairs")


def _ext_leq(a: Ext, b: Ext) -> bool:
    if a == NEG_INF or b == POS_INF:
        return True
    if b == NEG_INF:
        return a == NEG_INF
    if a == POS_INF:
        return False
    return a <= b


@dataclass
class DualFamily:
    """One maximizing y* per proper scalarization direction."""

    entries: dict[Vec, Vec] = field(default_factory=dict)
    properness: dict[Vec, str] = field(default_factory=dict)

    def to_json(self):
        return {
            "entries": [
                {
                    "zstar": [format_scalar(c) for c in zs],
                    "ystar": [format_scalar(c) for c in ys],
                }
                for zs, ys in self.entries.items()
            ],
            "properness": {
                " ".join(format_scalar(c) for c in zs): status
                for zs, status in self.properness.items()
            },
        }


@dataclass
class DualityReport:
    x0: Vec
    lhs: UpperSet
    rhs: UpperSet
    family: DualFamily
    gap_sq: Ext
    regularity: dict
    support_table: list[dict]

    def to_json(self):
        return {
            "x0": [format_scalar(c) for c in self.x0],
            "family": self.family.to_json(),
            "gap_sq": format_scalar(self.gap_sq) if not isinstance(self.gap_sq, float) else self.gap_sq,
            "regularity": self.regularity,
            "support_table": self.support_table,
        }


def fundamental_duality(
    f: BivariateMap,
    x0,
    base: DirectionBase | None = None,
    window: Fraction = Fraction(10),
) -> DualityReport:
    """Verifies f_X(0) = intersection of (-f*)((0, y*_{z*}), z*) over the
    proper directions of the base, with one attained y* per direction.

    Preconditions checked before running: (x0, 0) lies in dom f, and every
    scalarization of the slice f(x0, .) is upper semicontinuous at 0; a
    violation refuses with a diagnostic.  Improper directions contribute the
    whole space and drop out; directions whose scalar infimum is unbounded
    below are flagged and likewise contribute the whole space.
    """
    from .continuity import CheckerConfig, check_scalar_semicontinuity

    x0 = vec(x0)
    base = base or DirectionBase.default(f.cone, 16)
    y0 = (ZERO,) * f.p
    if f.evaluate(x0, y0).is_empty:
        raise DualityError(f"(x0, 0) = ({x0}, {y0}) lies outside dom f")
    slice_map = f.slice_at(x0)
    slice_verdict = check_scalar_semicontinuity(
        slice_map, y0, base, CheckerConfig(), "usc"
    )
    regularity = {
        "slice_usc": slice_verdict.status.value,
        "x0_in_dom": True,
    }
    if slice_verdict.status is Status.FAILS:
        raise DualityError(
            "regularity precondition violated: a slice scalarization is not "
            f"upper semicontinuous at 0 (direction {slice_verdict.witness.direction})"
        )

    family = DualFamily()
    halfspaces: list[UpperSet] = []
    support_table: list[dict] = []
    lhs_rows: list[Constraint] = []
    lhs_empty = False
    for zs in base.directions:
        phi = piecewise_scalarization(f.map, zs)
        if phi is None:
            raise DualityError("fundamental duality needs closed-form scalarizations")
        row: dict = {"zstar": [format_scalar(c) for c in zs]}
        if phi.improper_below:
            family.properness[zs] = "improper"
            row["status"] = "improper"
            support_table.append(row)
            continue
        if phi.never_finite:
            family.properness[zs] = "degenerate"
            row["status"] = "degenerate"
            support_table.append(row)
            lhs_empty = True
            continue
        v = _pl_partial_infimum(phi, f.n, (ZERO,) * f.p)
        if v == NEG_INF:
            family.properness[zs] = "unbounded"
            row["status"] = "unbounded"
            support_table.append(row)
            continue
        if v == POS_INF:
            family.properness[zs] = "infeasible-at-0"
            row["status"] = "infeasible-at-0"
            support_table.append(row)
            lhs_empty = True
            continue
        family.properness[zs] = "proper"
        ystar = _attained_dual_vector(phi, f.n, f.p, v)
        if ystar is None:
            raise DualityError(
                f"scalar dual attainment failed for direction {zs}; "
                "the exact solver should never reach this"
            )
        family.entries[zs] = ystar
        pair = DualPair.of((ZERO,) * f.n + tuple(ystar), zs)
        conj = neg_conjugate_scalar_route(f.map, pair)
        if conj.offset != -v:
            raise DualityError(
                f"conjugate identity failed for direction {zs}: "
                f"{format_scalar(conj.offset)} vs {format_scalar(-v)}"
            )
        halfspaces.append(conj.value)
        lhs_rows.append((tuple(-c for c in zs), v))
        row.update(
            {
                "status": "proper",
                "ystar": [format_scalar(c) for c in ystar],
                "marginal_value": format_scalar(v),
                "conjugate_offset": format_scalar(conj.offset),
            }
        )
        support_table.append(row)

    if lhs_empty:
        lhs: UpperSet = UpperSet.empty(f.cone)
    else:
        lhs = UpperSet(f.cone, pieces=[Polyhedron(f.cone.dim, lhs_rows)])
    rhs = lattice_sup(halfspaces) if halfspaces else UpperSet.universal(f.cone)
    win = Polyhedron.box([(-window, window)] * f.cone.dim)
    gap_sq = hausdorff_sq_window(lhs, rhs, win) if not lhs_empty else ZERO
    return DualityReport(
        x0=x0,
        lhs=lhs,
        rhs=rhs,
        family=family,
        gap_sq=gap_sq,
        regularity=regularity,
        support_table=support_table,
    )


def _attained_dual_vector(
    phi: PiecewiseLinearFn, n: int, p: int, value: Fraction
) -> Optional[Vec]:
    """A vector y* with phi*(0, y*) = -value, from the exact LP dual.

    The primal is min t over {(x, y, t) : t >= a_j.(x,y) + c_j on each
    piece, dom rows, y = 0}; the multipliers on the y = 0 rows give the
    candidate, which is then re-verified against the conjugate identity
    (both orientations are tried, making the sign convention irrelevant).
    """
    rows: list[Constraint] = []
    dim = n + p + 1
    for piece in phi.pieces:
        normal = tuple(-c for c in piece.coeffs) + (Fraction(1),)
        rows.append((normal, piece.const))
        for rn, rb in piece.region.rows:
            rows.append((tuple(rn) + (ZERO,), rb))
    eq_start = len(rows)
    for k in range(p):
        e = [ZERO] * dim
        e[n + k] = Fraction(1)
        rows.append((tuple(e), ZERO))
        e[n + k] = Fraction(-1)
        rows.append((tuple(e), ZERO))
    obj = (ZERO,) * (n + p) + (Fraction(1),)
    res = solve_lp(obj, rows, sense="min", want_dual=True)
    if res.status is not LPStatus.OPTIMAL or res.dual is None:
        return None
    if res.value != value:
        return None
    candidate = []
    for k in range(p):
        lam_pos = res.dual[eq_start + 2 * k]
        lam_neg = res.dual[eq_start + 2 * k + 1]
        candidate.append(lam_pos - lam_neg)
    for sign in (1, -1):
        ystar = tuple(sign * c for c in candidate)
        target = (ZERO,) * n + ystar
        if scalar_conjugate(phi, target) == -value:
            return ystar
    # Fall back to a small deterministic search around the candidate.
    for probe in _dual_probes(candidate):
        target = (ZERO,) * n + probe
        if scalar_conjugate(phi, target) == -value:
            return probe
    return None


def _dual_probes(candidate: Sequence[Fraction]) -> list[Vec]:
    probes: list[Vec] = []
    deltas = [Fraction(0), Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-1, 2)]
    if len(candidate) == 1:
        for d in deltas:
            probes.append((candidate[0] + d,))
        probes.append((ZERO,))
    else:
        probes.append(tuple(candidate))
        probes.append(tuple(ZERO for _ in candidate))
    return probes


def marginal_convexity(f: BivariateMap, plan=None) -> Verdict:
    """Convexity transfer: the marginal of a convex bivariate map is convex.

    Verified through the underlying map's convexity flag plus a sampled
    midpoint test of the marginal values (exact comparisons on the exact
    marginal representation).
    """
    from .maps import SamplePlan

    plan = plan or SamplePlan(seed=11, count=12, radius=Fraction(3))
    pts = plan.points(f.p)
    ts = plan.weights()
    from .sets import minkowski_sum, scale

    examined = 0
    for i in range(0, len(pts) - 1, 2):
        y1, y2 = pts[i], pts[i + 1]
        t = ts[i // 2] if i // 2 < len(ts) else Fraction(1, 2)
        m1, m2 = marginal(f, y1), marginal(f, y2)
        if m1.is_empty or m2.is_empty:
            continue
        mid = tuple(t * a + (1 - t) * b for a, b in zip(y1, y2))
        rhs = minkowski_sum(scale(m1, t), scale(m2, 1 - t))
        cmpres = set_order_leq(marginal(f, mid), rhs)
        examined += 1
        if not cmpres.value:
            return Verdict.fails(
                Witness(x=mid, detail=f"marginal midpoint violation for {y1}, {y2}, t={t}"),
                resolution=examined,
            )
    return Verdict.holds(resolution=examined)

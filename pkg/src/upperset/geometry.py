"""Exact polyhedral geometry: cones, halfspaces, polyhedra, dual cones.

Everything here is carried out over the rationals.  Polyhedra are stored in
H-representation ``{z : n_i . z >= b_i}`` (accepted unreduced), cones carry
both generators and halfspaces.  Conversions between the two cone
representations run by active-subset ray enumeration, which is exact and
entirely adequate at desk scale; the documented dimension cap is m <= 4.

Euclidean quantities are exposed as *squared* distances so that every
comparison against a rational tolerance stays exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .linalg import (
    NEG_INF,
    POS_INF,
    ZERO,
    Ext,
    Mat,
    Vec,
    dot,
    frac,
    is_zero,
    matrix_rank,
    norm1,
    norm2_sq,
    nullspace,
    project_onto_affine,
    scale_to_canonical,
    solve_affine,
    vec,
    vadd,
    vscale,
    vsub,
    zeros,
)
from .simplex import Constraint, LPResult, LPStatus, lp_feasible_point, lp_support, solve_lp


class DimensionMismatch(ValueError):
    pass


class OrderConeError(ValueError):
    """The cone cannot serve as an ordering cone (C = Z, so C^- = {0})."""


def _check_dim(expected: int, v: Vec) -> None:
    if len(v) != expected:
        raise DimensionMismatch(f"expected dimension {expected}, got {len(v)}")


def _cone_rays(normals: list[Vec], dim: int) -> list[Vec]:
    """Generators of the cone ``{z : n.z >= 0 for n in normals}``.

    Returns lineality basis vectors in +- pairs together with the extreme
    rays of the pointed part (the cone intersected with the orthogonal
    complement of its lineality space).  Active-subset enumeration; exact.
    """
    rows = [n for n in normals if not is_zero(n)]
    lin = nullspace(rows, dim) if rows else [tuple(r) for r in _identity(dim)]
    work = list(rows)
    for l in lin:
        work.append(l)
        work.append(tuple(-x for x in l))
    rays: list[Vec] = []
    seen: set[Vec] = set()
    for subset in itertools.combinations(range(len(work)), dim - 1):
        sub = [work[i] for i in subset]
        ns = nullspace(sub, dim) if sub else [tuple(r) for r in _identity(dim)]
        if len(ns) != 1:
            continue
        d = ns[0]
        for cand in (d, tuple(-x for x in d)):
            if all(dot(n, cand) >= 0 for n in work):
                canon = scale_to_canonical(cand)
                if canon not in seen:
                    seen.add(canon)
                    rays.append(canon)
    out: list[Vec] = []
    for l in lin:
        for cand in (l, tuple(-x for x in l)):
            canon = scale_to_canonical(cand)
            if canon not in seen:
                seen.add(canon)
                out.append(canon)
    return out + rays


def _identity(dim: int) -> list[list[Fraction]]:
    return [[Fraction(1) if i == j else ZERO for j in range(dim)] for i in range(dim)]


@dataclass(frozen=True)
class Cone:
    """Closed convex polyhedral cone with both representations.

    ``generators`` span the cone conically; ``halfspaces`` are normals n
    meaning ``{z : n.z >= 0}``.  ``pointed`` and ``has_interior`` are derived
    at construction.  Ordering cones must satisfy C != Z (equivalently
    C^- != {0}); ``require_proper=False`` skips that check for cones that
    merely appear as intermediate values (e.g. duals of degenerate cones).
    """

    dim: int
    generators: Mat
    halfspaces: Mat
    pointed: bool
    has_interior: bool

    @staticmethod
    def from_generators(gens, require_proper: bool = True) -> "Cone":
        g = [vec(x) for x in gens]
        if not g:
            raise ValueError("need at least one generator; use the zero cone explicitly")
        dim = len(g[0])
        for x in g:
            _check_dim(dim, x)
        g = [x for x in g if not is_zero(x)]
        dual_rays = _cone_rays([tuple(-c for c in x) for x in g], dim) if g else _cone_rays([], dim)
        halfspaces = tuple(tuple(-c for c in r) for r in dual_rays)
        return Cone._build(dim, tuple(scale_to_canonical(x) for x in g), halfspaces, require_proper)

    @staticmethod
    def from_halfspaces(normals, dim: int | None = None, require_proper: bool = True) -> "Cone":
        ns = [vec(x) for x in normals]
        if dim is None:
            if not ns:
                raise ValueError("dimension required when no halfspaces are given")
            dim = len(ns[0])
        for x in ns:
            _check_dim(dim, x)
        ns = [x for x in ns if not is_zero(x)]
        gens = tuple(_cone_rays(ns, dim))
        return Cone._build(dim, gens, tuple(ns), require_proper)

    @staticmethod
    def _build(dim: int, gens: Mat, halfspaces: Mat, require_proper: bool) -> "Cone":
        for g in gens:
            if any(dot(n, g) < 0 for n in halfspaces):
                raise ValueError("inconsistent cone representations")
        lin_dim = len(nullspace(list(halfspaces), dim)) if halfspaces else dim
        pointed = lin_dim == 0
        if halfspaces:
            interior = solve_lp(
                zeros(dim), [(n, Fraction(1)) for n in halfspaces], sense="max"
            ).status is LPStatus.OPTIMAL
        else:
            interior = True
        proper = any(not is_zero(n) for n in halfspaces)
        if require_proper and not proper:
            raise OrderConeError(
                "ordering cone equals the whole space; its dual is trivial"
            )
        return Cone(dim, gens, halfspaces, pointed, interior)

    def contains(self, z) -> bool:
        v = vec(z)
        _check_dim(self.dim, v)
        return all(dot(n, v) >= 0 for n in self.halfspaces)

    def dual(self) -> "Cone":
        return dual_cone(self)

    def dual_generators(self) -> Mat:
        """Generators of C^- = {u : u.g <= 0 for all g in C}."""
        return self.dual().generators

    def __repr__(self) -> str:  # pragma: no cover
        return f"Cone(dim={self.dim}, generators={len(self.generators)})"


def dual_cone(c: Cone) -> Cone:
    """Negative dual cone C^- = {u : u.z <= 0 for all z in C}."""
    normals = [tuple(-x for x in g) for g in c.generators]
    gens = tuple(_cone_rays(list(normals), c.dim))
    return Cone._build(c.dim, gens, tuple(n for n in normals if not is_zero(n)), False)


def cone_contains(c: Cone, z) -> bool:
    return c.contains(z)


def cones_equal(a: Cone, b: Cone) -> bool:
    """Representation equivalence: mutual halfspace containment of generators."""
    if a.dim != b.dim:
        return False
    return all(b.contains(g) for g in a.generators) and all(
        a.contains(g) for g in b.generators
    )


@dataclass(frozen=True)
class DualPair:
    """A dual argument (x*, z*); z* must lie in C^- \\ {0} when conjugating."""

    xstar: Vec
    zstar: Vec

    @staticmethod
    def of(xstar, zstar) -> "DualPair":
        return DualPair(vec(xstar), vec(zstar))

    def validate_for(self, cone: Cone) -> None:
        if is_zero(self.zstar):
            raise ValueError("z* must be nonzero")
        if not zstar_in_dual(cone, self.zstar):
            raise ValueError("z* lies outside the negative dual cone")


def zstar_in_dual(cone: Cone, zstar: Vec) -> bool:
    return all(dot(zstar, g) <= 0 for g in cone.generators)


class Polyhedron:
    """H-polyhedron ``{z : n_i . z >= b_i}``; representation accepted unreduced."""

    __slots__ = ("dim", "rows", "__dict__")

    def __init__(self, dim: int, rows):
        self.dim = dim
        normalized: list[Constraint] = []
        for n, b in rows:
            nv = vec(n)
            _check_dim(dim, nv)
            normalized.append((nv, frac(b)))
        self.rows: tuple[Constraint, ...] = tuple(normalized)

    # -- constructors -------------------------------------------------------

    @staticmethod
    def full(dim: int) -> "Polyhedron":
        return Polyhedron(dim, [])

    @staticmethod
    def empty(dim: int) -> "Polyhedron":
        return Polyhedron(dim, [(zeros(dim), Fraction(1))])

    @staticmethod
    def from_point(p) -> "Polyhedron":
        pv = vec(p)
        dim = len(pv)
        rows = []
        for i in range(dim):
            e = [ZERO] * dim
            e[i] = Fraction(1)
            rows.append((tuple(e), pv[i]))
            e[i] = Fraction(-1)
            rows.append((tuple(e), -pv[i]))
        return Polyhedron(dim, rows)

    @staticmethod
    def box(bounds) -> "Polyhedron":
        dim = len(bounds)
        rows = []
        for i, (lo, hi) in enumerate(bounds):
            e = [ZERO] * dim
            e[i] = Fraction(1)
            rows.append((tuple(e), frac(lo)))
            e[i] = Fraction(-1)
            rows.append((tuple(e), -frac(hi)))
        return Polyhedron(dim, rows)

    # -- basic protocol -----------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polyhedron)
            and self.dim == other.dim
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.dim, self.rows))

    def __repr__(self) -> str:  # pragma: no cover
        return f"Polyhedron(dim={self.dim}, rows={len(self.rows)})"

    # -- queries ------------------------------------------------------------

    @cached_property
    def is_empty(self) -> bool:
        return (
            solve_lp(zeros(self.dim), list(self.rows), sense="max").status
            is LPStatus.INFEASIBLE
        )

    def contains(self, z) -> bool:
        v = vec(z)
        _check_dim(self.dim, v)
        return all(dot(n, v) >= b for n, b in self.rows)

    def support(self, direction) -> Ext:
        """sup { d.z : z in P }: -inf when empty, +inf when unbounded."""
        d = vec(direction)
        _check_dim(self.dim, d)
        cache = self.__dict__.setdefault("_support_cache", {})
        if d not in cache:
            cache[d] = lp_support(d, list(self.rows))
        return cache[d]

    def maximizer(self, direction) -> Vec | None:
        res = solve_lp(vec(direction), list(self.rows), sense="max")
        return res.point if res.status is LPStatus.OPTIMAL else None

    @cached_property
    def lineality(self) -> list[Vec]:
        if self.is_empty:
            return []
        return nullspace([n for n, _ in self.rows], self.dim)

    @cached_property
    def recession_generators(self) -> list[Vec]:
        """Generators of the recession cone {d : n_i . d >= 0}."""
        if self.is_empty:
            return []
        return _cone_rays([n for n, _ in self.rows], self.dim)

    def recession_within(self, normals) -> bool:
        """True iff every recession direction d satisfies n.d >= 0 for given n."""
        return all(
            all(dot(n, d) >= 0 for n in normals) for d in self.recession_generators
        )

    @cached_property
    def minimal_face_points(self) -> list[Vec]:
        """One representative point per minimal face (vertices when pointed)."""
        if self.is_empty:
            return []
        normals = [n for n, _ in self.rows]
        target = matrix_rank(normals) if normals else 0
        found: list[Vec] = []
        seen: set[Vec] = set()
        if target == 0:
            origin = zeros(self.dim)
            pt = origin if self.contains(origin) else None
            if pt is None:
                pt = lp_feasible_point(list(self.rows), self.dim)
            return [pt] if pt is not None else []
        for subset in itertools.combinations(range(len(self.rows)), target):
            sub_n = [self.rows[i][0] for i in subset]
            sub_b = [self.rows[i][1] for i in subset]
            if matrix_rank(sub_n) != target:
                continue
            sol, _ = solve_affine(sub_n, sub_b)
            if sol is None or sol in seen:
                continue
            if self.contains(sol):
                seen.add(sol)
                found.append(sol)
        return found

    @cached_property
    def vertices(self) -> list[Vec]:
        """Extreme points; empty when the polyhedron has lineality."""
        if self.lineality:
            return []
        return self.minimal_face_points

    def dist_sq(self, z) -> Ext:
        """Exact squared Euclidean distance from z to the polyhedron.

        +inf for the empty set.  Enumerates projections onto face affine
        hulls; the true projection lies in the relative interior of some
        face and is its affine projection, so it appears among the feasible
        candidates.
        """
        v = vec(z)
        _check_dim(self.dim, v)
        cache = self.__dict__.setdefault("_dist_cache", {})
        if v in cache:
            return cache[v]
        if self.is_empty:
            cache[v] = POS_INF
            return POS_INF
        if self.contains(v):
            cache[v] = ZERO
            return ZERO
        best: Ext = POS_INF
        max_size = min(self.dim, len(self.rows))
        for size in range(1, max_size + 1):
            for subset in itertools.combinations(range(len(self.rows)), size):
                sub_n = [self.rows[i][0] for i in subset]
                sub_b = [self.rows[i][1] for i in subset]
                p = project_onto_affine(v, sub_n, sub_b)
                if p is None or not self.contains(p):
                    continue
                d = norm2_sq(vsub(v, p))
                if d < best:
                    best = d
        cache[v] = best
        return best

    def max_dist_sq_to(self, other: "Polyhedron") -> Ext:
        """sup over z in self of squared distance to ``other``.

        +inf when the recession cone of self is not contained in the
        recession cone of other (the distance then grows along some ray);
        otherwise the supremum is attained at a minimal face representative.
        Returns 0 for an empty self.
        """
        if self.is_empty:
            return ZERO
        if other.is_empty:
            return POS_INF
        other_normals = [n for n, _ in other.rows]
        if not self.recession_within(other_normals):
            return POS_INF
        best: Ext = ZERO
        for p in self.minimal_face_points:
            d = other.dist_sq(p)
            if d > best:
                best = d
        return best

    @cached_property
    def affine_dim(self) -> int:
        """Dimension of the affine hull; -1 for the empty set."""
        if self.is_empty:
            return -1
        implicit = []
        for n, b in self.rows:
            if self.support(n) == b:
                implicit.append(n)
        return self.dim - (matrix_rank(implicit) if implicit else 0)

    def interior_point(self, bound: Fraction = Fraction(10**6)) -> Vec | None:
        """A point with a positive margin on every row, or None.

        Margins are weighted by the l1 norm of each row so the point is a
        Chebyshev-style center of the (boxed) polyhedron in the l-inf sense.
        """
        rows_t: list[Constraint] = []
        dim = self.dim
        for n, b in self.rows:
            w = norm1(n)
            if w == 0:
                if b > 0:
                    return None
                continue
            rows_t.append((tuple(list(n) + [-w]), b))
        for i in range(dim):
            e = [ZERO] * (dim + 1)
            e[i] = Fraction(1)
            rows_t.append((tuple(e), -bound))
            e2 = [ZERO] * (dim + 1)
            e2[i] = Fraction(-1)
            rows_t.append((tuple(e2), -bound))
        obj = [ZERO] * dim + [Fraction(1)]
        res = solve_lp(tuple(obj), rows_t, sense="max")
        if res.status is not LPStatus.OPTIMAL or res.point is None:
            return None
        if res.point[-1] <= 0:
            return None
        return res.point[:-1]

    # -- transforms ---------------------------------------------------------

    def intersect(self, other: "Polyhedron") -> "Polyhedron":
        if self.dim != other.dim:
            raise DimensionMismatch("intersection of unequal dimensions")
        return Polyhedron(self.dim, list(self.rows) + list(other.rows))

    def translate(self, v) -> "Polyhedron":
        t = vec(v)
        _check_dim(self.dim, t)
        return Polyhedron(self.dim, [(n, b + dot(n, t)) for n, b in self.rows])

    def scale(self, t) -> "Polyhedron":
        """Image {t z : z in P} for t > 0."""
        tf = frac(t)
        if tf <= 0:
            raise ValueError("scale factor must be positive here")
        return Polyhedron(self.dim, [(n, tf * b) for n, b in self.rows])

    def remove_redundant(self) -> "Polyhedron":
        if self.is_empty:
            return Polyhedron.empty(self.dim)
        rows = list(dict.fromkeys(self.rows))
        kept: list[Constraint] = []
        for i, (n, b) in enumerate(rows):
            others = kept + rows[i + 1 :]
            res = solve_lp(n, others, sense="min")
            if res.status is LPStatus.OPTIMAL and res.value >= b:
                continue
            kept.append((n, b))
        return Polyhedron(self.dim, kept)

    def contained_in(self, other: "Polyhedron") -> bool:
        """Exact containment self <= other for convex polyhedra."""
        if self.dim != other.dim:
            raise DimensionMismatch("containment of unequal dimensions")
        if self.is_empty:
            return True
        for n, b in other.rows:
            res = solve_lp(n, list(self.rows), sense="min")
            if res.status is LPStatus.UNBOUNDED:
                return False
            if res.status is LPStatus.OPTIMAL and res.value < b:
                return False
        return True

    def violation_witness(self, other: "Polyhedron") -> Vec | None:
        """A point of self outside other, or None when self <= other."""
        if self.is_empty:
            return None
        for n, b in other.rows:
            res = solve_lp(n, list(self.rows), sense="min")
            if res.status is LPStatus.UNBOUNDED:
                base = self.minimal_face_points[0]
                ray = next(
                    d for d in self.recession_generators if dot(n, d) < 0
                )
                t = Fraction(1)
                while dot(n, vadd(base, vscale(t, ray))) >= b:
                    t *= 2
                return vadd(base, vscale(t, ray))
            if res.status is LPStatus.OPTIMAL and res.value < b:
                return res.point
        return None


def lp_solve(objective, p: Polyhedron, sense: str = "max") -> LPResult:
    """Optimize an exact linear objective over a polyhedron."""
    return solve_lp(vec(objective), list(p.rows), sense=sense)


def support_value(p: Polyhedron, zstar) -> Ext:
    """sup { z*.z : z in p }: -inf for empty p, +inf when unbounded."""
    return p.support(zstar)


def fourier_motzkin(rows: list[tuple[Vec, Fraction]], eliminate: int) -> list[tuple[Vec, Fraction]]:
    """Eliminate one variable from ``{v : n.v >= b}`` by Fourier-Motzkin.

    Input rows are (normal, offset) over d variables; output rows are over
    d-1 variables (the eliminated coordinate removed).  Exact; output is
    deduplicated but not fully irredundant.
    """
    pos, neg, zero = [], [], []
    for n, b in rows:
        c = n[eliminate]
        if c > 0:
            pos.append((n, b))
        elif c < 0:
            neg.append((n, b))
        else:
            zero.append((n, b))

    def drop(n: Vec) -> Vec:
        return n[:eliminate] + n[eliminate + 1 :]

    out: list[tuple[Vec, Fraction]] = [(drop(n), b) for n, b in zero]
    for (np_, bp) in pos:
        cp = np_[eliminate]
        for (nn, bn) in neg:
            cn = -nn[eliminate]
            comb_n = tuple(cn * a + cp * c for a, c in zip(np_, nn))
            comb_b = cn * bp + cp * bn
            out.append((drop(comb_n), comb_b))
    seen: set[tuple[Vec, Fraction]] = set()
    dedup: list[tuple[Vec, Fraction]] = []
    for n, b in out:
        # Normalize scale so duplicates collapse.
        m = max((abs(x) for x in n), default=ZERO)
        if m == 0:
            if b > 0:
                # 0 >= b with b > 0: the projection is empty.
                return [(tuple(ZERO for _ in n), Fraction(1))]
            continue
        key = (tuple(x / m for x in n), b / m)
        if key not in seen:
            seen.add(key)
            dedup.append(key)
    return dedup


def project_out(p: Polyhedron, coords: list[int]) -> Polyhedron:
    """Project a polyhedron onto the complement of the given coordinates."""
    rows = list(p.rows)
    dim = p.dim
    for c in sorted(coords, reverse=True):
        rows = fourier_motzkin(rows, c)
        dim -= 1
    return Polyhedron(dim, rows)

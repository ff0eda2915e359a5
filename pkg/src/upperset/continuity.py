"""Point-wise checkers for the semicontinuity notions of set-valued maps.

Eight notions are checked at a point x0: upper and lower continuity, their
Hausdorff variants, efficiency, lattice boundedness above, lower and upper
lattice semicontinuity, plus semicontinuity of all scalarizations and its
uniform strengthening over a direction base.  A finite procedure cannot
decide statements quantified over all neighborhoods, so every checker works
on geometric grids of box neighborhoods in X and Euclidean enlargements in
Z and reports three-valued verdicts:

* ``fails`` carries a witness that re-verifies by direct evaluation, and is
  only claimed when violations persist at every grid level and at extra
  confirmation levels below the grid;
* ``holds`` is claimed when the finest levels are clean, descending further
  below the grid when an exists-a-radius quantifier needs more room;
* anything else is ``inconclusive`` at the examined resolution.

Upper continuity quantifies over arbitrary open supersets; the checker works
relative to the enlargement family f(x0) + eps B plus complement-of-point
probes for values with empty interior, and says so in its verdict note.

The epsilon grid is shallower than the x-radius grid by default (headroom):
with equal depths any map whose modulus exceeds one would be misclassified,
since no x-radius below the finest epsilon would remain to certify the
exists-delta side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .geometry import Cone, Polyhedron, dual_cone
from .linalg import (
    NEG_INF,
    POS_INF,
    ZERO,
    Ext,
    Vec,
    dot,
    frac,
    norm1,
    norm2_sq,
    vec,
)
from .maps import SetValuedMap, graph_interior_witness
from .scalarize import DirectionBase, certify_base, direction_fan, scalarize_eval
from .sets import UpperSet, member, outer_polyhedron
from .simplex import Constraint, LPStatus, lp_feasible_point, solve_lp
from .verdict import Status, Verdict, Witness


@dataclass(frozen=True)
class Grid:
    """Geometric radius grid {start * ratio^k : k = 0..levels}."""

    start: Fraction = Fraction(1)
    ratio: Fraction = Fraction(1, 2)
    levels: int = 12

    def values(self, extra: int = 0) -> list[Fraction]:
        return [self.start * self.ratio**k for k in range(self.levels + 1 + extra)]


@dataclass(frozen=True)
class CheckerConfig:
    radii: Grid = field(default_factory=Grid)
    z_radii: Grid = field(default_factory=lambda: Grid(levels=6))
    z_fan: int = 32
    z_tails: int = 24
    tol: Fraction = Fraction(1, 10**9)
    window: Fraction = Fraction(10)
    confirm_levels: int = 4
    descent_levels: int = 12

    def light(self) -> "CheckerConfig":
        """Coarser settings for large sweeps."""
        return replace(
            self,
            radii=Grid(levels=8),
            z_radii=Grid(levels=4),
            z_fan=8,
            z_tails=10,
            confirm_levels=3,
            descent_levels=8,
        )


def default_config() -> CheckerConfig:
    return CheckerConfig()


# -- sampling helpers -----------------------------------------------------------


def _x_dirs(n: int) -> list[Vec]:
    dirs: list[Vec] = []
    for i in range(n):
        e = [ZERO] * n
        e[i] = Fraction(1)
        dirs.append(tuple(e))
        e[i] = Fraction(-1)
        dirs.append(tuple(e))
    if n >= 2:
        for mask in range(2**n):
            dirs.append(tuple(Fraction(1) if (mask >> i) & 1 else Fraction(-1) for i in range(n)))
    return list(dict.fromkeys(dirs))


def _level_samples(x0: Vec, delta: Fraction, dirs: Sequence[Vec]) -> list[Vec]:
    return [tuple(a + delta * d for a, d in zip(x0, dd)) for dd in dirs]


class _Scan:
    """Violation bookkeeping across grid levels for one quantifier pair."""

    def __init__(self, f: SetValuedMap, x0: Vec, cfg: CheckerConfig):
        self.f = f
        self.x0 = x0
        self.cfg = cfg
        self.dirs = _x_dirs(f.domain_dim)
        self.base_levels = cfg.radii.values()

    def samples(self, level: int) -> list[Vec]:
        delta = self.cfg.radii.start * self.cfg.radii.ratio**level
        return _level_samples(self.x0, delta, self.dirs)

    def classify(self, violated: Callable[[Vec], Optional[bool]]) -> tuple[str, Optional[Witness], int]:
        """Returns (kind, witness, levels examined).

        kind is 'persistent' when every base level and every confirmation
        level shows a violation, 'clean' when a clean level certifies the
        exists-delta side (descending below the grid when needed), and
        'mixed' otherwise.  A violated() result of None (undecidable sample)
        blocks both decisive outcomes at its level.
        """
        K = self.cfg.radii.levels
        last_witness: Optional[Witness] = None
        level_flags: list[Optional[bool]] = []
        for k in range(K + 1):
            flag: Optional[bool] = False
            for x in self.samples(k):
                r = violated(x)
                if r is True:
                    flag = True
                    last_witness = Witness(x=x, radius=self.cfg.radii.start * self.cfg.radii.ratio**k)
                    break
                if r is None:
                    flag = None
            level_flags.append(flag)
        examined = K + 1
        if all(fl is True for fl in level_flags):
            # Confirm below the grid before claiming persistence.
            confirmed = True
            for k in range(K + 1, K + 1 + self.cfg.confirm_levels):
                examined += 1
                hit = None
                for x in self.samples(k):
                    r = violated(x)
                    if r is True:
                        hit = Witness(x=x, radius=self.cfg.radii.start * self.cfg.radii.ratio**k)
                        break
                if hit is None:
                    confirmed = False
                    break
                last_witness = hit
            if confirmed:
                return "persistent", last_witness, examined
            # Violations vanish below the grid: exists-delta side wins.
            return "clean", None, examined
        if level_flags[-1] is False:
            return "clean", None, examined
        # The finest base level is violated or undecided; descend to see
        # whether a smaller radius clears it.
        for k in range(K + 1, K + 1 + self.cfg.descent_levels):
            examined += 1
            flag = False
            for x in self.samples(k):
                r = violated(x)
                if r is True:
                    flag = True
                    break
                if r is None:
                    flag = None
            if flag is False:
                return "clean", None, examined
        return "mixed", last_witness, examined


def _window_polyhedron(cone: Cone, w: Fraction) -> Polyhedron:
    return Polyhedron.box([(-w, w)] * cone.dim)


def _value_sample_points(v: UpperSet, cone: Cone, w: Fraction) -> list[Vec]:
    """Representative points of a value, clipped to the window."""
    pts: list[Vec] = []
    if v.is_polyhedral:
        win = _window_polyhedron(cone, w)
        for p in v.pieces:
            pts.extend(p.minimal_face_points)
            cut = p.intersect(win)
            if not cut.is_empty:
                ip = cut.interior_point()
                if ip is not None:
                    pts.append(ip)
    else:
        grid = [Fraction(k) for k in (-2, -1, 0, 1, 2, 4)]
        for a in grid:
            for b in grid:
                if abs(a) <= w and abs(b) <= w and member(v, (a, b)):
                    pts.append((a, b))
    dedup = list(dict.fromkeys(pts))
    return dedup[:8]


# -- enlargement containment ------------------------------------------------------


def _support_gap_sq(a: UpperSet, b: UpperSet, fan: Sequence[Vec]) -> tuple[Ext, Optional[Vec]]:
    """Worst squared normalized support excess of a over b on fan directions.

    For convex upper closed sets, a <= b + eps*Ball holds exactly when the
    support excess stays below eps on every unit direction of C^-; on a
    finite fan a positive excess certifies non-containment while agreement
    is containment at fan resolution.
    """
    worst: Ext = ZERO
    direction: Optional[Vec] = None
    for u in fan:
        sa, sb = a.support(u), b.support(u)
        if sa == NEG_INF:
            return ZERO, None
        if sb == POS_INF or sa == NEG_INF:
            continue
        if sa == POS_INF:
            return POS_INF, u
        if sb == NEG_INF:
            return POS_INF, u
        gap = sa - sb
        if gap <= 0:
            continue
        g = gap * gap / norm2_sq(u)
        if g > worst:
            worst = g
            direction = u
    return worst, direction


def _enlargement_gap_sq(
    a: UpperSet, b: UpperSet, fan: Sequence[Vec]
) -> tuple[Ext, Optional[Witness]]:
    """Squared Hausdorff-style excess of a over b: sup_{z in a} dist(z, b)^2.

    Exact for polyhedral representations (minimal-face enumeration with a
    recession-cone precheck), fan-based for oracles.
    """
    if a.is_empty:
        return ZERO, None
    if b.is_empty:
        return POS_INF, Witness(detail="nonempty value against empty reference")
    if a.is_polyhedral and b.is_polyhedral and len(b.pieces) == 1:
        pb = b.pieces[0]
        worst: Ext = ZERO
        wit: Optional[Witness] = None
        for pa in a.pieces:
            if not pa.recession_within([n for n, _ in pb.rows]):
                ray = next(
                    d
                    for d in pa.recession_generators
                    if any(dot(n, d) < 0 for n, _ in pb.rows)
                )
                return POS_INF, Witness(direction=ray, detail="recession escape")
            for p in pa.minimal_face_points:
                d = pb.dist_sq(p)
                if d > worst:
                    worst = d
                    wit = Witness(z=p)
        return worst, wit
    gap, u = _support_gap_sq(a, b, fan)
    return gap, (Witness(direction=u, detail="support separation") if u is not None else None)


# -- individual checkers ----------------------------------------------------------


def _fan(f: SetValuedMap, cfg: CheckerConfig) -> tuple[Vec, ...]:
    return direction_fan(f.cone, cfg.z_fan, cfg.z_tails)


def check_huc(f: SetValuedMap, x0, cfg: CheckerConfig | None = None) -> Verdict:
    """Hausdorff upper continuity: f(x) inside f(x0) + eps Ball near x0."""
    cfg = cfg or default_config()
    x0 = vec(x0)
    fan = _fan(f, cfg)
    v0 = f.evaluate(x0)
    gaps: dict[Vec, tuple[Ext, Optional[Witness]]] = {}

    def gap_at(x: Vec) -> tuple[Ext, Optional[Witness]]:
        if x not in gaps:
            gaps[x] = _enlargement_gap_sq(f.evaluate(x), v0, fan)
        return gaps[x]

    return _epsilon_family_verdict(f, x0, cfg, gap_at, "f(x) escapes the enlargement of f(x0)")


def check_hlc(f: SetValuedMap, x0, cfg: CheckerConfig | None = None) -> Verdict:
    """Hausdorff lower continuity: f(x0) inside f(x) + eps Ball near x0."""
    cfg = cfg or default_config()
    x0 = vec(x0)
    fan = _fan(f, cfg)
    v0 = f.evaluate(x0)
    gaps: dict[Vec, tuple[Ext, Optional[Witness]]] = {}

    def gap_at(x: Vec) -> tuple[Ext, Optional[Witness]]:
        if x not in gaps:
            gaps[x] = _enlargement_gap_sq(v0, f.evaluate(x), fan)
        return gaps[x]

    return _epsilon_family_verdict(f, x0, cfg, gap_at, "f(x0) escapes the enlargement of f(x)")


def _epsilon_family_verdict(
    f: SetValuedMap,
    x0: Vec,
    cfg: CheckerConfig,
    gap_at: Callable[[Vec], tuple[Ext, Optional[Witness]]],
    fail_note: str,
) -> Verdict:
    scan = _Scan(f, x0, cfg)
    examined = 0
    for eps in cfg.z_radii.values():
        eps_sq = eps * eps

        def violated(x: Vec, _e=eps_sq) -> Optional[bool]:
            g, _ = gap_at(x)
            return g > _e

        kind, wit, levels = scan.classify(violated)
        examined = max(examined, levels)
        if kind == "persistent":
            assert wit is not None
            g, detail = gap_at(wit.x)
            merged = Witness(
                x=wit.x,
                z=detail.z if detail else None,
                radius=eps,
                direction=detail.direction if detail else None,
                detail=fail_note,
            )
            return Verdict.fails(merged, resolution=examined)
        if kind == "mixed":
            return Verdict.inconclusive(
                note=f"violations at radius {eps} neither persist nor vanish",
                resolution=examined,
            )
    return Verdict.holds(resolution=examined)


def check_uc(f: SetValuedMap, x0, cfg: CheckerConfig | None = None) -> Verdict:
    """Upper continuity relative to the enlargement base plus point probes.

    Quantifying over every open superset is not finitely decidable; the
    checker tests the family f(x0) + eps Ball and, for values with empty
    interior, open sets of the form Z minus a point.
    """
    cfg = cfg or default_config()
    x0 = vec(x0)
    v0 = f.evaluate(x0)
    note = "relative to the enlargement base"
    if v0.is_empty:
        scan = _Scan(f, x0, cfg)
        kind, wit, levels = scan.classify(lambda x: not f.evaluate(x).is_empty)
        if kind == "persistent":
            return Verdict.fails(
                replace(wit, detail="nonempty values approach a point outside dom f"),
                resolution=levels,
            )
        if kind == "clean":
            return Verdict.holds(resolution=levels, note="empty on a neighborhood; " + note)
        return Verdict.inconclusive(resolution=levels, note=note)
    enlargement = check_huc(f, x0, cfg)
    if enlargement.status is Status.FAILS:
        return Verdict.fails(enlargement.witness, resolution=enlargement.resolution, note=note)
    empty_interior = v0.is_polyhedral and max(p.affine_dim for p in v0.pieces) < f.cone.dim
    if empty_interior:
        scan = _Scan(f, x0, cfg)
        probes = _complement_probes(f, x0, v0, cfg)
        for p in probes:
            kind, wit, levels = scan.classify(lambda x, _p=p: member(f.evaluate(x), _p))
            if kind == "persistent":
                return Verdict.fails(
                    replace(wit, z=p, detail="a fixed outside point is hit arbitrarily close"),
                    resolution=levels,
                    note=note,
                )
            if kind == "mixed":
                return Verdict.inconclusive(resolution=levels, note=note)
    if enlargement.status is Status.HOLDS:
        return Verdict.holds(resolution=enlargement.resolution, note=note)
    return Verdict.inconclusive(resolution=enlargement.resolution, note=note)


def _complement_probes(f: SetValuedMap, x0: Vec, v0: UpperSet, cfg: CheckerConfig) -> list[Vec]:
    pts = _value_sample_points(v0, f.cone, cfg.window)
    probes: list[Vec] = []
    for p in pts:
        for i in range(f.cone.dim):
            for s in (Fraction(1, 4), Fraction(-1, 4), Fraction(1), Fraction(-1)):
                q = tuple(p[j] + (s if j == i else 0) for j in range(f.cone.dim))
                if not member(v0, q):
                    probes.append(q)
    return list(dict.fromkeys(probes))[:10]


def check_lc(f: SetValuedMap, x0, cfg: CheckerConfig | None = None) -> Verdict:
    """Lower continuity: every neighborhood of every z0 in f(x0) keeps
    meeting f(x) for x near x0."""
    cfg = cfg or default_config()
    x0 = vec(x0)
    v0 = f.evaluate(x0)
    if v0.is_empty:
        return Verdict.holds(note="holds by force outside dom f")
    fan = _fan(f, cfg)
    scan = _Scan(f, x0, cfg)
    examined = 0
    for z0 in _value_sample_points(v0, f.cone, cfg.window):
        dist_cache: dict[Vec, Ext] = {}

        def dist_sq_at(x: Vec, _z0=z0) -> Ext:
            if x not in dist_cache:
                dist_cache[x] = _point_gap_sq(f.evaluate(x), _z0, fan)
            return dist_cache[x]

        for eps in cfg.z_radii.values():
            eps_sq = eps * eps

            def violated(x: Vec, _e=eps_sq, _d=dist_sq_at) -> Optional[bool]:
                return _d(x) > _e

            kind, wit, levels = scan.classify(violated)
            examined = max(examined, levels)
            if kind == "persistent":
                return Verdict.fails(
                    replace(wit, z=z0, radius=eps, detail="values miss a ball around z0"),
                    resolution=examined,
                )
            if kind == "mixed":
                return Verdict.inconclusive(resolution=examined, note="undecided ball test")
    return Verdict.holds(resolution=examined)


def _point_gap_sq(v: UpperSet, z0: Vec, fan: Sequence[Vec]) -> Ext:
    """Squared distance from z0 to the value: exact for polyhedra, a
    separation lower bound through oracles (zero when no fan direction
    separates, so oracle routes can never produce a spurious failure)."""
    if v.is_empty:
        return POS_INF
    if v.is_polyhedral:
        return v.dist_sq(z0)
    if member(v, z0):
        return ZERO
    worst: Ext = ZERO
    for u in fan:
        s = v.support(u)
        if isinstance(s, float):
            continue
        gap = dot(u, z0) - s
        if gap > 0:
            g = gap * gap / norm2_sq(u)
            if g > worst:
                worst = g
    return worst


def check_eff(f: SetValuedMap, x0, cfg: CheckerConfig | None = None) -> Verdict:
    """Efficiency: one bounded box meets every nearby value."""
    cfg = cfg or default_config()
    x0 = vec(x0)
    v0 = f.evaluate(x0)
    fan = _fan(f, cfg)
    anchors: list[Vec] = []
    if not v0.is_empty:
        anchors.extend(_value_sample_points(v0, f.cone, cfg.window))
    anchors.append((ZERO,) * f.cone.dim)
    sizes = sorted({cfg.window, cfg.window / 4, Fraction(1)}, reverse=True)
    scan = _Scan(f, x0, cfg)
    examined = 0
    best_mixed = False
    for anchor in anchors:
        for size in sizes:
            box = Polyhedron.box([(a - size, a + size) for a in anchor])

            def missed(x: Vec, _b=box) -> Optional[bool]:
                return _box_misses_value(f.evaluate(x), _b, fan)

            kind, _, levels = scan.classify(missed)
            examined = max(examined, levels)
            if kind == "clean":
                return Verdict.holds(
                    resolution=examined,
                    note=f"box of radius {size} around {anchor} meets nearby values",
                )
            if kind == "mixed":
                best_mixed = True
    # The largest candidate box already misses values arbitrarily close.
    big = Polyhedron.box([(-cfg.window, cfg.window)] * f.cone.dim)
    kind, wit, levels = scan.classify(lambda x: _box_misses_value(f.evaluate(x), big, fan))
    examined = max(examined, levels)
    if kind == "persistent" and not best_mixed:
        return Verdict.fails(
            replace(wit, detail="nearby values miss every window-scale box"),
            resolution=examined,
            note="bounded sets searched up to window scale",
        )
    return Verdict.inconclusive(resolution=examined, note="box search exhausted")


def _box_misses_value(v: UpperSet, box: Polyhedron, fan: Sequence[Vec]) -> Optional[bool]:
    if v.is_empty:
        return True
    if v.is_polyhedral:
        return all(p.intersect(box).is_empty for p in v.pieces)
    mids = box.minimal_face_points
    center = tuple(
        sum(p[i] for p in mids) / len(mids) for i in range(box.dim)
    ) if mids else None
    probes = list(mids)
    if center is not None:
        probes.append(center)
    for p in probes:
        if member(v, p):
            return False
    # Separation: some direction puts the whole box strictly outside.
    for u in fan:
        s = v.support(u)
        if isinstance(s, float):
            continue
        if all(dot(u, p) > s for p in probes):
            box_min = min(dot(u, p) for p in probes)
            if box_min > s:
                return True
    return None


def check_lba(f: SetValuedMap, x0, cfg: CheckerConfig | None = None) -> Verdict:
    """Lattice boundedness above near x0: one point inside all nearby values."""
    cfg = cfg or default_config()
    x0 = vec(x0)
    fan = _fan(f, cfg)
    levels = cfg.radii.values(cfg.confirm_levels)
    dirs = _x_dirs(f.domain_dim)
    # Exists-a-neighborhood search, descending through the radius grid.
    for k, delta in enumerate(levels):
        certified = f.box_value_intersection(x0, delta)
        if certified is not None:
            if certified.is_empty:
                continue
            a = lp_feasible_point(list(certified.rows), f.cone.dim)
            if a is not None:
                return Verdict.holds(
                    witness=Witness(z=a, radius=delta),
                    note="row-wise box certificate",
                    resolution=k,
                )
        else:
            a = _sampled_common_point(f, x0, delta, dirs, fan, cfg)
            if a is not None:
                return Verdict.holds(
                    witness=Witness(z=a, radius=delta),
                    note="common point verified at sampled x",
                    resolution=k,
                )
    # Failure side: sampled intersections stay empty at the finest level and
    # at every confirmation level below it.
    empty_everywhere = True
    for delta in levels[cfg.radii.levels :]:
        stacked = _stacked_outer_rows(f, x0, delta, dirs, fan)
        if stacked is None or lp_feasible_point(stacked, f.cone.dim) is not None:
            empty_everywhere = False
            break
    if empty_everywhere:
        return Verdict.fails(
            Witness(x=x0, radius=levels[-1], detail="sampled values share no point"),
            resolution=len(levels),
        )
    return Verdict.inconclusive(note="no common point found, emptiness not certified")


def _sampled_xs(x0: Vec, delta: Fraction, dirs: Sequence[Vec], inner: int = 3) -> list[Vec]:
    xs = [x0]
    d = delta
    for _ in range(inner):
        xs.extend(_level_samples(x0, d, dirs))
        d = d / 2
    return xs


def _sampled_common_point(
    f: SetValuedMap,
    x0: Vec,
    delta: Fraction,
    dirs: Sequence[Vec],
    fan: Sequence[Vec],
    cfg: CheckerConfig,
) -> Optional[Vec]:
    xs = _sampled_xs(x0, delta, dirs)
    values = [f.evaluate(x) for x in xs]
    if any(v.is_empty for v in values):
        return None
    rows: list[Constraint] = []
    candidates: list[Vec] = []
    for v in values:
        if v.is_polyhedral and len(v.pieces) == 1:
            rows.extend(v.pieces[0].rows)
        else:
            rows.extend(outer_polyhedron(v, fan).rows)
    a = lp_feasible_point(rows, f.cone.dim)
    if a is not None:
        candidates.append(a)
    candidates.extend(_value_sample_points(values[0], f.cone, cfg.window))
    for a in candidates:
        if all(member(v, a) for v in values):
            return a
    return None


def _stacked_outer_rows(
    f: SetValuedMap, x0: Vec, delta: Fraction, dirs: Sequence[Vec], fan: Sequence[Vec]
) -> Optional[list[Constraint]]:
    rows: list[Constraint] = []
    for x in _sampled_xs(x0, delta, dirs):
        v = f.evaluate(x)
        if v.is_empty:
            return [((ZERO,) * f.cone.dim, Fraction(1))]
        if v.is_polyhedral and len(v.pieces) == 1:
            rows.extend(v.pieces[0].rows)
        else:
            rows.extend(outer_polyhedron(v, fan).rows)
    return rows


def check_uls(f: SetValuedMap, x0, cfg: CheckerConfig | None = None) -> Verdict:
    """Upper lattice semicontinuity: points of f(x0) are approximated by
    points common to all nearby values."""
    cfg = cfg or default_config()
    x0 = vec(x0)
    v0 = f.evaluate(x0)
    if v0.is_empty:
        return Verdict.holds(note="vacuous outside dom f")
    fan = _fan(f, cfg)
    dirs = _x_dirs(f.domain_dim)
    examined = 0
    for z0 in _value_sample_points(v0, f.cone, cfg.window):
        for eps in cfg.z_radii.values():
            found, levels = _uls_search(f, x0, z0, eps, dirs, fan, cfg)
            examined = max(examined, levels)
            if found:
                continue
            # Failure side at this (z0, eps): the sampled common set stays
            # farther than eps from z0 at every level plus confirmation.
            if _uls_fails_everywhere(f, x0, z0, eps, dirs, fan, cfg):
                return Verdict.fails(
                    Witness(x=x0, z=z0, radius=eps, detail="no common point near z0"),
                    resolution=examined,
                )
            return Verdict.inconclusive(resolution=examined, note="common-point search undecided")
    return Verdict.holds(resolution=examined)


def _uls_search(
    f: SetValuedMap,
    x0: Vec,
    z0: Vec,
    eps: Fraction,
    dirs: Sequence[Vec],
    fan: Sequence[Vec],
    cfg: CheckerConfig,
) -> tuple[bool, int]:
    levels = cfg.radii.values(cfg.descent_levels)
    for k, delta in enumerate(levels):
        certified = f.box_value_intersection(x0, delta)
        if certified is not None and not certified.is_empty:
            if certified.dist_sq(z0) <= eps * eps:
                return True, k
            continue
        xs = _sampled_xs(x0, delta, dirs)
        values = [f.evaluate(x) for x in xs]
        if any(v.is_empty for v in values):
            continue
        for cand in _ball_candidates(z0, eps, f.cone):
            if all(member(v, cand) for v in values):
                return True, k
    return False, len(levels)


def _ball_candidates(z0: Vec, eps: Fraction, cone: Cone) -> list[Vec]:
    out = [z0]
    gsum = [ZERO] * cone.dim
    for g in cone.generators:
        gsum = [a + b for a, b in zip(gsum, g)]
    shifts = [tuple(gsum)] + [tuple(g) for g in cone.generators]
    for s in shifts:
        m = max((abs(c) for c in s), default=ZERO)
        if m == 0:
            continue
        for t in (eps / 2, eps / 4, eps / 8):
            out.append(tuple(z + t * c / m for z, c in zip(z0, s)))
    return list(dict.fromkeys(out))


def _uls_fails_everywhere(
    f: SetValuedMap,
    x0: Vec,
    z0: Vec,
    eps: Fraction,
    dirs: Sequence[Vec],
    fan: Sequence[Vec],
    cfg: CheckerConfig,
) -> bool:
    for delta in cfg.radii.values(cfg.confirm_levels):
        rows = _stacked_outer_rows(f, x0, delta, dirs, fan)
        if rows is None:
            return False
        common = Polyhedron(f.cone.dim, rows)
        if common.dist_sq(z0) <= eps * eps:
            return False
    return True


def check_lls(f: SetValuedMap, x0, cfg: CheckerConfig | None = None) -> Verdict:
    """Lower lattice semicontinuity: no point outside f(x0) is approached by
    nearby values arbitrarily closely."""
    cfg = cfg or default_config()
    x0 = vec(x0)
    v0 = f.evaluate(x0)
    fan = _fan(f, cfg)
    scan = _Scan(f, x0, cfg)
    examined = 0
    for z0 in _outside_probes(f, x0, v0, cfg):
        # Failure side first: exact membership of z0 in values arbitrarily
        # close to x0 (persistence plus confirmation).
        kind, wit, levels = scan.classify(lambda x, _z=z0: member(f.evaluate(x), _z))
        examined = max(examined, levels)
        if kind == "persistent":
            return Verdict.fails(
                replace(wit, z=z0, detail="outside point belongs to values arbitrarily close"),
                resolution=examined,
            )
        # Holds side: some (delta, eps) separates z0 from all nearby values.
        separated = False
        for eps in cfg.z_radii.values():
            eps_sq = eps * eps

            def not_separated(x: Vec, _z=z0, _e=eps_sq) -> Optional[bool]:
                return _point_gap_sq(f.evaluate(x), _z, fan) <= _e

            kind2, _, levels2 = scan.classify(not_separated)
            examined = max(examined, levels2)
            if kind2 == "clean":
                separated = True
                break
        if not separated:
            return Verdict.inconclusive(resolution=examined, note=f"probe {z0} undecided")
    return Verdict.holds(resolution=examined)


def _outside_probes(f: SetValuedMap, x0: Vec, v0: UpperSet, cfg: CheckerConfig) -> list[Vec]:
    probes: list[Vec] = []
    grid = [Fraction(k) for k in (-4, -2, -1, 0, 1, 2, 4)]
    if f.cone.dim == 1:
        cand = [(g,) for g in grid]
    elif f.cone.dim == 2:
        cand = [(a, b) for a in grid for b in grid]
    else:
        cand = [tuple(g for _ in range(f.cone.dim)) for g in grid]
    for p in cand:
        if not member(v0, p):
            probes.append(p)
    near = []
    for p in _value_sample_points(v0, f.cone, cfg.window) if not v0.is_empty else []:
        for g in f.cone.generators:
            m = max((abs(c) for c in g), default=ZERO)
            if m == 0:
                continue
            q = tuple(a - c / m for a, c in zip(p, g))
            if not member(v0, q):
                near.append(q)
    return list(dict.fromkeys(probes + near))[:14]


def check_scalar_semicontinuity(
    f: SetValuedMap,
    x0,
    base: DirectionBase,
    cfg: CheckerConfig | None = None,
    mode: str = "usc",
) -> Verdict:
    """Upper/lower semicontinuity of every scalarization over the base."""
    cfg = cfg or default_config()
    x0 = vec(x0)
    if mode not in ("usc", "lsc"):
        raise ValueError("mode must be 'usc' or 'lsc'")
    scan = _Scan(f, x0, cfg)
    examined = 0
    for zs in base.directions:
        phi_cache: dict[Vec, Ext] = {}

        def phi(x: Vec, _zs=zs) -> Ext:
            if x not in phi_cache:
                phi_cache[x] = scalarize_eval(f, _zs, x)
            return phi_cache[x]

        v0 = phi(x0)
        verdict = _scalar_semicontinuity_for_direction(scan, phi, v0, mode, cfg)
        examined = max(examined, verdict.resolution or 0)
        if verdict.status is Status.FAILS:
            return Verdict.fails(
                replace(verdict.witness, direction=zs),
                resolution=examined,
                note=f"direction {zs}",
            )
        if verdict.status is Status.INCONCLUSIVE:
            return Verdict.inconclusive(resolution=examined, note=f"direction {zs} undecided")
    return Verdict.holds(resolution=examined)


def _scalar_semicontinuity_for_direction(
    scan: _Scan, phi: Callable[[Vec], Ext], v0: Ext, mode: str, cfg: CheckerConfig
) -> Verdict:
    if mode == "usc" and v0 == POS_INF:
        return Verdict.holds(note="value +inf: automatically usc", resolution=0)
    if mode == "lsc" and v0 == NEG_INF:
        return Verdict.holds(note="value -inf: automatically lsc", resolution=0)
    examined = 0
    for eps in cfg.z_radii.values():
        threshold: Ext
        if mode == "usc":
            threshold = -1 / eps if v0 == NEG_INF else v0 + eps

            def violated(x: Vec, _t=threshold) -> Optional[bool]:
                return phi(x) >= _t

        else:
            threshold = 1 / eps if v0 == POS_INF else v0 - eps

            def violated(x: Vec, _t=threshold) -> Optional[bool]:
                return phi(x) <= _t

        kind, wit, levels = scan.classify(violated)
        examined = max(examined, levels)
        if kind == "persistent":
            return Verdict.fails(
                replace(wit, detail=f"{mode} gap of at least {eps} persists"),
                resolution=examined,
            )
        if kind == "mixed":
            return Verdict.inconclusive(resolution=examined)
    return Verdict.holds(resolution=examined)


def check_uniform(
    f: SetValuedMap,
    x0,
    base: DirectionBase,
    cfg: CheckerConfig | None = None,
    mode: str = "usc",
) -> Verdict:
    """Uniform semicontinuity of the scalarizations over a certified base:
    one radius must serve every base direction simultaneously."""
    cfg = cfg or default_config()
    x0 = vec(x0)
    if mode not in ("usc", "lsc"):
        raise ValueError("mode must be 'usc' or 'lsc'")
    flags = certify_base(base)
    if not (flags["generates_dual"] and flags["inf_sup_positive"]):
        return Verdict.inconclusive(note="direction base failed certification")
    phi0: dict[Vec, Ext] = {}
    caches: dict[Vec, dict[Vec, Ext]] = {zs: {} for zs in base.directions}

    def phi(zs: Vec, x: Vec) -> Ext:
        c = caches[zs]
        if x not in c:
            c[x] = scalarize_eval(f, zs, x)
        return c[x]

    for zs in base.directions:
        phi0[zs] = phi(zs, x0)
    scan = _Scan(f, x0, cfg)
    examined = 0
    for eps in cfg.z_radii.values():

        def violated(x: Vec, _e=eps) -> Optional[bool]:
            for zs in base.directions:
                v0 = phi0[zs]
                vx = phi(zs, x)
                if mode == "usc":
                    if v0 == POS_INF:
                        continue
                    bound = -1 / _e if v0 == NEG_INF else v0 + _e
                    if vx >= bound:
                        return True
                else:
                    if v0 == NEG_INF:
                        continue
                    bound = 1 / _e if v0 == POS_INF else v0 - _e
                    if vx <= bound:
                        return True
            return False

        kind, wit, levels = scan.classify(violated)
        examined = max(examined, levels)
        if kind == "persistent":
            assert wit is not None
            bad = _uniform_witness_direction(f, base, phi, phi0, wit.x, eps, mode)
            return Verdict.fails(
                replace(wit, radius=eps, direction=bad, detail="no shared radius serves the base"),
                resolution=examined,
            )
        if kind == "mixed":
            return Verdict.inconclusive(resolution=examined, note="uniform condition undecided")
    return Verdict.holds(resolution=examined)


def _uniform_witness_direction(f, base, phi, phi0, x, eps, mode):
    for zs in base.directions:
        v0 = phi0[zs]
        vx = phi(zs, x)
        if mode == "usc":
            if v0 == POS_INF:
                continue
            bound = -1 / eps if v0 == NEG_INF else v0 + eps
            if vx >= bound:
                return zs
        else:
            if v0 == NEG_INF:
                continue
            bound = 1 / eps if v0 == POS_INF else v0 - eps
            if vx <= bound:
                return zs
    return None


def check_bn(cone: Cone, window=Fraction(1)) -> Verdict:
    """Condition: some bounded set B and neighborhood V satisfy V <= B - C.

    The candidate pair is the window-scaled unit box B and unit ball V.
    The inclusion reduces to a support comparison: on directions u in the
    positive dual cone (where the support of -C vanishes) the ball support
    w |u|_2 must stay below the box support w |u|_1; other directions are
    unconstrained because the support of -C is +inf there.  The comparison
    is verified exactly on the generators of the positive dual, and holds in
    any finite-dimensional space (they are locally bounded).  A degenerate
    window is flagged instead of decided.
    """
    w = frac(window)
    if w <= 0:
        return Verdict.inconclusive(note="degenerate window")
    # Generators of the positive dual cone C* = -(C^-).
    pd_gens = [tuple(-c for c in g) for g in dual_cone(cone).generators]
    for u in pd_gens:
        if norm2_sq(u) > norm1(u) * norm1(u):
            return Verdict.inconclusive(note="support comparison failed unexpectedly")
    return Verdict.holds(
        witness=Witness(radius=w, detail="window box against window ball certificate"),
        note="finite-dimensional spaces are locally bounded",
    )


# -- the matrix -------------------------------------------------------------------


MATRIX_KEYS = (
    "uc",
    "lc",
    "huc",
    "hlc",
    "eff",
    "lba",
    "lls",
    "uls",
    "cminus_usc",
    "cminus_lsc",
    "uniform_usc",
    "uniform_lsc",
    "graph_interior",
)


@dataclass
class VerdictMatrix:
    entries: dict[str, Verdict]
    side: dict[str, bool]
    artifacts: list[str] = field(default_factory=list)

    def to_json(self):
        return {
            "entries": {k: v.to_json() for k, v in self.entries.items()},
            "side_conditions": dict(self.side),
            "artifacts": list(self.artifacts),
        }


# (implication name, guard on side conditions, antecedent key, consequent key)
IMPLICATIONS = (
    ("uls implies lc", lambda s: True, "uls", "lc"),
    ("lc implies uls under interior cone", lambda s: s["int_c"], "lc", "uls"),
    ("lba implies uls for convex maps", lambda s: s["convex"], "lba", "uls"),
    ("eff implies lc for convex maps", lambda s: s["convex"], "eff", "lc"),
    ("lc implies eff under (BN) on dom", lambda s: s["bn"] and s["in_dom"], "lc", "eff"),
    ("huc implies lls", lambda s: True, "huc", "lls"),
    ("uls implies lba on dom", lambda s: s["in_dom"], "uls", "lba"),
    ("graph interior implies lba", lambda s: True, "graph_interior", "lba"),
    ("lba implies graph interior under interior cone", lambda s: s["int_c"], "lba", "graph_interior"),
    ("lc implies scalar usc", lambda s: True, "lc", "cminus_usc"),
    ("huc implies scalar lsc", lambda s: True, "huc", "cminus_lsc"),
    ("scalar lsc implies lls for convex values", lambda s: s["convex_valued"], "cminus_lsc", "lls"),
    ("uniform usc implies lc", lambda s: s["base_certified"], "uniform_usc", "lc"),
    ("uniform lsc implies huc", lambda s: s["base_certified"], "uniform_lsc", "huc"),
    ("lc implies lls for convex maps on dom", lambda s: s["convex"] and s["in_dom"], "lc", "lls"),
)


def verdict_matrix(
    f: SetValuedMap,
    x0,
    cfg: CheckerConfig | None = None,
    base: DirectionBase | None = None,
) -> VerdictMatrix:
    """Runs every checker at x0 and cross-validates the implication diagram.

    Violated implications among decisive entries are resolution artifacts:
    both offending verdicts are downgraded to inconclusive and the event is
    recorded on the matrix.
    """
    cfg = cfg or default_config()
    x0 = vec(x0)
    base = base or DirectionBase.default(f.cone, cfg.z_fan, cfg.z_tails)
    flags = certify_base(base)
    entries = {
        "uc": check_uc(f, x0, cfg),
        "lc": check_lc(f, x0, cfg),
        "huc": check_huc(f, x0, cfg),
        "hlc": check_hlc(f, x0, cfg),
        "eff": check_eff(f, x0, cfg),
        "lba": check_lba(f, x0, cfg),
        "lls": check_lls(f, x0, cfg),
        "uls": check_uls(f, x0, cfg),
        "cminus_usc": check_scalar_semicontinuity(f, x0, base, cfg, "usc"),
        "cminus_lsc": check_scalar_semicontinuity(f, x0, base, cfg, "lsc"),
        "uniform_usc": check_uniform(f, x0, base, cfg, "usc"),
        "uniform_lsc": check_uniform(f, x0, base, cfg, "lsc"),
        "graph_interior": graph_interior_witness(f, x0),
    }
    side = {
        "convex": bool(f.convex),
        "convex_valued": True,
        "int_c": f.cone.has_interior,
        "bn": check_bn(f.cone, cfg.window).is_holds,
        "in_dom": not f.evaluate(x0).is_empty,
        "base_certified": bool(flags["generates_dual"] and flags["inf_sup_positive"]),
    }
    matrix = VerdictMatrix(entries=entries, side=side)
    enforce_diagram(matrix)
    return matrix


def enforce_diagram(matrix: VerdictMatrix) -> list[str]:
    """Downgrades verdict pairs that contradict a proven implication."""
    violations: list[str] = []
    for name, guard, ante, cons in IMPLICATIONS:
        if not guard(matrix.side):
            continue
        va, vc = matrix.entries[ante], matrix.entries[cons]
        if va.is_holds and vc.is_fails:
            violations.append(name)
            matrix.artifacts.append(
                f"implication violated at resolution: {name}; both entries downgraded"
            )
            matrix.entries[ante] = Verdict.inconclusive(
                note=f"downgraded: {name}", resolution=va.resolution
            )
            matrix.entries[cons] = Verdict.inconclusive(
                note=f"downgraded: {name}", resolution=vc.resolution
            )
    return violations


def diagram_violations(matrix: VerdictMatrix) -> list[str]:
    """Names of implications violated by decisive entries (no downgrading)."""
    out = []
    for name, guard, ante, cons in IMPLICATIONS:
        if not guard(matrix.side):
            continue
        if matrix.entries[ante].is_holds and matrix.entries[cons].is_fails:
            out.append(name)
    return out

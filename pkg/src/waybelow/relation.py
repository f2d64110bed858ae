"""The way-below relation: decisions, certificates and refutations.

On Euclidean carriers ``S ≪ T`` is decided by the compact-closure rule:
the closure of ``S`` must sit inside the carrier and inside ``T``.  On
rational-trace carriers only finite point sets are way-below anything.
Each verdict carries evidence: a subcover selector when the relation holds,
or a cover family with no finite subcover of ``S`` when it fails.
:func:`oracle_way_below` re-derives verdicts from covers alone and is used
to cross-check the rule.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .geometry import (Box, BoxUnion, Grid, GeometryError, Interval, closed_interval, closure, contains,
                       intersect, member, normalize, open_interval, rat, subtract, union)
from .spaces import (Space, carrier_axes, clip, dim, is_euclidean, is_open_in, is_rational,
                     rational_axes)


class WayBelowError(GeometryError):
    pass


class NotOpen(WayBelowError):
    pass


class UnsupportedSpace(WayBelowError):
    pass


class NonCoreCompact(WayBelowError):
    pass


class PointOutside(WayBelowError):
    pass


def _sqrt2_convergents():
    p, q, pp, qq = 1, 1, 1, 0
    while True:
        yield Fraction(p, q)
        p, pp = 2 * p + pp, p
        q, qq = 2 * q + qq, q


@dataclass(frozen=True)
class PinnedIrrational:
    """``lo + (hi - lo)(√2 - 1)``: an irrational strictly inside ``(lo, hi)``.

    Comparisons with rationals are exact (a sign test on a square); the
    rational enclosures come from the continued fraction of √2.
    """
    lo: Fraction
    hi: Fraction

    @property
    def _ab(self):
        b = self.hi - self.lo
        return self.lo - b, b

    def compare(self, q) -> int:
        """Sign of ``q - α``; never zero."""
        a, b = self._ab
        d = rat(q) - a
        if d <= 0:
            return -1
        return -1 if d * d < 2 * b * b else 1

    def bounds(self, level: int = 0) -> tuple[Fraction, Fraction]:
        conv = list(itertools.islice(_sqrt2_convergents(), level + 4))
        x, y = sorted(conv[level + 2: level + 4])
        a, b = self._ab
        return a + b * x, a + b * y

    def rational_below(self, eps: Fraction) -> Fraction:
        """A rational ``q < α`` with ``α - q < eps`` and ``q > lo``."""
        level = 0
        while True:
            lo, hi = self.bounds(level)
            if hi - lo < eps:
                return lo
            level += 1


@dataclass(frozen=True)
class CoverFamily:
    """An indexed open cover ``{F_k}_{k ≥ 1}`` of ``target``.

    ``finite``: the listed members.  ``punctured``: ``target`` minus the
    closed box of radius ``1/k`` around a rational ``center``.
    ``shrinking``: ``target`` minus the closed slab ``|x_axis - α| ≤ 1/k``
    around a pinned irrational α.
    """
    kind: str
    target: BoxUnion
    members: tuple[BoxUnion, ...] = ()
    center: tuple[Fraction, ...] | None = None
    axis: int = 0
    alpha: PinnedIrrational | None = None

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def member(self, k: int) -> BoxUnion:
        if self.kind == "finite":
            return self.members[k - 1]
        if self.kind == "punctured":
            r = Fraction(1, k)
            hole = Box(tuple(closed_interval(c - r, c + r) for c in self.center))
            return normalize(subtract(self.target, BoxUnion(self.target.dim, (hole,))))
        raise ValueError("shrinking members have irrational faces; use member_contains")

    def member_contains(self, k: int, p) -> bool:
        p = tuple(rat(v) for v in p)
        if self.kind != "shrinking":
            return member(p, self.member(k))
        if not member(p, self.target):
            return False
        x = p[self.axis]
        r = Fraction(1, k)
        return self.alpha.compare(x - r) > 0 or self.alpha.compare(x + r) < 0

    def to_json(self):
        from .codec import point_to_json, union_to_json
        out = {"kind": self.kind, "target": union_to_json(self.target)}
        if self.kind == "finite":
            out["members"] = [union_to_json(m) for m in self.members]
        elif self.kind == "punctured":
            out["center"] = point_to_json(self.center)
        else:
            lo, hi = self.alpha.bounds(0)
            out.update({"axis": self.axis, "alpha_lo": lo, "alpha_hi": hi,
                        "gap_lo": self.alpha.lo, "gap_hi": self.alpha.hi,
                        "pinned": "gap_lo + (gap_hi - gap_lo)(sqrt(2) - 1)"})
            out = {k: (f"{v.numerator}/{v.denominator}" if isinstance(v, Fraction) else v)
                   for k, v in out.items()}
        return out


@dataclass(frozen=True)
class SubcoverSelector:
    """Picks, from any finite open family covering T, a subfamily covering S.

    ``compact`` holds a compact set K with S ⊆ K ⊆ T; ``points`` a finite
    set containing S.
    """
    kind: str
    compact: BoxUnion | None = None
    points: tuple[tuple[Fraction, ...], ...] = ()

    def select(self, cover: Sequence[BoxUnion]) -> list[int]:
        if self.kind == "empty":
            return []
        if self.kind == "points":
            chosen = []
            for p in self.points:
                idx = next((i for i, m in enumerate(cover) if member(p, m)), None)
                if idx is None:
                    raise ValueError(f"family does not cover {p}")
                if idx not in chosen:
                    chosen.append(idx)
            return sorted(chosen)
        grid = Grid.from_unions([self.compact, *cover])
        need = grid.occupancy(self.compact)
        occs = [grid.occupancy(m) & need for m in cover]
        chosen = []
        while need.any():
            gains = [int((o & need).sum()) for o in occs]
            best = max(range(len(occs)), key=lambda i: (gains[i], -i), default=None)
            if best is None or gains[best] == 0:
                raise ValueError("family does not cover the compact witness")
            chosen.append(best)
            need = need & ~occs[best]
        return sorted(chosen)

    def to_json(self):
        from .codec import point_to_json, union_to_json
        out = {"kind": self.kind}
        if self.kind == "compact":
            out["compact"] = union_to_json(self.compact)
        elif self.kind == "points":
            out["points"] = [point_to_json(p) for p in self.points]
        return out


@dataclass(frozen=True)
class WayBelowVerdict:
    holds: bool
    certificate: SubcoverSelector | None = None
    refutation: CoverFamily | None = None

    def __post_init__(self):
        if self.holds != (self.certificate is not None) or self.holds == (self.refutation is not None):
            raise ValueError("a verdict carries exactly one of certificate or refutation")

    def __bool__(self):
        return self.holds

    def to_json(self):
        return {
            "holds": self.holds,
            "certificate": self.certificate.to_json() if self.certificate else None,
            "refutation": self.refutation.to_json() if self.refutation else None,
        }


def _require_open(space: Space, t: BoxUnion):
    if t.dim != dim(space):
        raise GeometryError(f"set of dimension {t.dim} in a space of dimension {dim(space)}")
    if not is_open_in(space, t):
        raise NotOpen("t is not open in the space")


def compact_inside(space: Space, s: BoxUnion, t_clipped: BoxUnion) -> bool:
    """Closure of ``s ∩ carrier`` lies inside ``t_clipped`` (already cut to the carrier).

    ``t_clipped`` sits in the carrier, so this also places the closure there.
    """
    return contains(t_clipped, closure(clip(space, s)))


def way_below(space: Space, s: BoxUnion, t: BoxUnion) -> WayBelowVerdict:
    _require_open(space, t)
    if s.dim != t.dim:
        raise GeometryError("s and t differ in dimension")
    s_c = clip(space, s)
    t_c = clip(space, t)
    if s_c.is_empty:
        return WayBelowVerdict(True, certificate=SubcoverSelector("empty"))
    if is_rational(space):
        return _way_below_rational(s_c, t_c)
    if not is_euclidean(space):
        raise UnsupportedSpace("mixed rational/euclidean products are not supported")
    k = closure(s_c)
    bad = normalize(subtract(k, t_c))
    if bad.is_empty:
        return WayBelowVerdict(True, certificate=SubcoverSelector("compact", compact=k))
    center = bad.nonempty_boxes()[0].sample()
    return WayBelowVerdict(False, refutation=CoverFamily("punctured", t_c, center=center))


def _way_below_rational(s_c: BoxUnion, t_c: BoxUnion) -> WayBelowVerdict:
    for b in s_c.nonempty_boxes():
        for axis, iv in enumerate(b.dims):
            if not iv.is_point:
                alpha = PinnedIrrational(iv.lo, iv.hi)
                return WayBelowVerdict(False, refutation=CoverFamily(
                    "shrinking", t_c, axis=axis, alpha=alpha))
    points = tuple(b.sample() for b in s_c.nonempty_boxes())
    for p in points:
        if not member(p, t_c):
            return WayBelowVerdict(False, refutation=CoverFamily("punctured", t_c, center=p))
    return WayBelowVerdict(True, certificate=SubcoverSelector("points", points=points))


@dataclass
class RefutationCheck:
    ok: bool
    reason: str = ""
    exhibits: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def verify_refutation(space: Space, s: BoxUnion, t: BoxUnion, r: CoverFamily, k_max: int) -> RefutationCheck:
    """Check that members ``1..k_max`` of ``r`` cover no part of ``s`` as a subfamily.

    For every nonempty subfamily an explicit rational point of ``s`` outside
    all of its members is exhibited and re-checked.
    """
    s_c = clip(space, s)
    t_c = clip(space, t)
    if r.kind == "finite":
        k_max = min(k_max, len(r.members))
    if r.kind != "shrinking":
        for k in range(1, k_max + 1):
            m = r.member(k)
            if not is_open_in(space, m):
                raise NotOpen(f"member {k} is not open")
            if not contains(t_c, clip(space, m)):
                return RefutationCheck(False, f"member {k} leaves t")
    reason = _cover_failure(space, t_c, r)
    if reason:
        return RefutationCheck(False, reason)
    check = RefutationCheck(True)
    indices = list(range(1, k_max + 1))
    for size in range(1, k_max + 1):
        for family in itertools.combinations(indices, size):
            p = _missed_point(s_c, r, family)
            if p is None or not member(p, s_c) or any(r.member_contains(k, p) for k in family):
                return RefutationCheck(False, f"subfamily {list(family)} covers s", check.exhibits)
            check.exhibits.append((family, p))
    return check


def _cover_failure(space: Space, t_c: BoxUnion, r: CoverFamily) -> str:
    if r.kind == "finite":
        if not contains(union(*r.members) if r.members else BoxUnion(t_c.dim), t_c):
            return "finite family does not cover t"
    elif r.kind == "punctured":
        if member(r.center, t_c):
            return "puncture centre lies in t, so the family misses it"
    elif not rational_axes(space)[r.axis]:
        for b in t_c.nonempty_boxes():
            iv = b.dims[r.axis]
            above_lo = r.alpha.compare(iv.lo) < 0
            below_hi = r.alpha.compare(iv.hi) > 0
            if above_lo and below_hi:
                return "pinned irrational lies in t on a euclidean axis"
    return ""


def _missed_point(s_c: BoxUnion, r: CoverFamily, family) -> tuple | None:
    k = max(family)
    if r.kind == "shrinking":
        for b in s_c.nonempty_boxes():
            iv = b.dims[r.axis]
            if not (r.alpha.compare(iv.lo) < 0 < r.alpha.compare(iv.hi)):
                continue
            eps = Fraction(1, k)
            q = r.alpha.rational_below(eps)
            while not iv.contains_point(q):
                eps /= 2
                q = r.alpha.rational_below(eps)
            p = list(b.sample())
            p[r.axis] = q
            return tuple(p)
        return None
    covered = union(*(r.member(j) for j in family))
    rest = normalize(subtract(s_c, covered))
    if rest.is_empty:
        return None
    return rest.nonempty_boxes()[0].sample()


def core_compact_witness(space: Space, x, u: BoxUnion) -> BoxUnion:
    """An open ``v`` with ``x ∈ v ≪ u``.

    Grows the grid-aligned box around ``x`` inside ``u`` (first one piece
    around every cut coordinate of ``x``, then greedily axis by axis) and
    halves it towards ``x`` so that its closure lands strictly inside.
    """
    if any(rational_axes(space)):
        raise NonCoreCompact("rational-trace carriers are not core-compact")
    x = tuple(rat(v) for v in x)
    axes = carrier_axes(space)
    if len(x) != dim(space) or not all(iv is None or iv.contains_point(v) for iv, v in zip(axes, x)):
        raise PointOutside("x is not a point of the space")
    if not member(x, u):
        raise PointOutside("x is not in u")
    _require_open(space, u)
    extra = [() if iv is None or iv.is_empty else (iv.lo, iv.hi) for iv in axes]
    grid = Grid.from_unions([u], extra)
    ok = grid.occupancy(u) | ~grid.carrier_occupancy(axes)
    in_carrier = [
        [iv is None or iv.contains_point(grid.rep(axis, j)) for j in range(grid.shape[axis])]
        for axis, iv in enumerate(axes)
    ]
    lo = [grid.locate(axis, v) for axis, v in enumerate(x)]
    hi = list(lo)

    def fits(lo_, hi_):
        return bool(ok[tuple(slice(a, b + 1) for a, b in zip(lo_, hi_))].all())

    for axis in range(grid.dim):
        if lo[axis] % 2 == 1:
            if in_carrier[axis][lo[axis] - 1]:
                lo[axis] -= 1
            if in_carrier[axis][hi[axis] + 1]:
                hi[axis] += 1
    if not fits(lo, hi):
        raise NotOpen("u is not a neighbourhood of x")
    grown = True
    while grown:
        grown = False
        for axis in range(grid.dim):
            for side in (-1, 1):
                cand_lo, cand_hi = list(lo), list(hi)
                if side < 0:
                    cand_lo[axis] -= 1
                    j = cand_lo[axis]
                else:
                    cand_hi[axis] += 1
                    j = cand_hi[axis]
                if not 0 < j < grid.shape[axis] - 1 or not in_carrier[axis][j]:
                    continue
                if fits(cand_lo, cand_hi):
                    lo, hi = cand_lo, cand_hi
                    grown = True
    dims = []
    for axis, v in enumerate(x):
        a = grid.piece(axis, lo[axis])
        b = grid.piece(axis, hi[axis])
        left, right = a.lo, b.hi
        lo_v = v - (v - left) / 2 if left < v else v
        hi_v = v + (right - v) / 2 if right > v else v
        dims.append(Interval(lo_v, hi_v, left < v, right > v))
    return BoxUnion(len(x), (Box(tuple(dims)),))


@dataclass
class OracleResult:
    holds: bool | None
    witness: CoverFamily | None = None
    examined: int = 0
    exhibits: list = field(default_factory=list)


def oracle_way_below(space: Space, s: BoxUnion, t: BoxUnion, budget: int = 50) -> OracleResult:
    """Brute-force ``S ≪ T`` from the cover definition, without the closure rule.

    Two kinds of cover of ``T`` are tried.  Punctured covers
    ``{T ∖ B̄(p, 1/k)}`` around grid vertices ``p`` on the boundary of
    ``S``: when ``p ∉ T`` this is a cover, and when points of ``S`` approach
    ``p`` no finite subfamily covers ``S``.  Grid covers by ``T`` intersected
    with dyadic open boxes: a finite subfamily covers ``S`` iff ``S ⊆ T``.
    Each examined cover costs one unit of budget.
    """
    if not is_euclidean(space) or dim(space) > 2:
        raise UnsupportedSpace("the oracle handles euclidean carriers of dimension ≤ 2")
    s_c = clip(space, s)
    t_c = clip(space, t)
    if s_c.is_empty:
        return OracleResult(True)
    d = dim(space)
    cuts = [set() for _ in range(d)]
    for u in (s_c, t_c):
        for b in u.nonempty_boxes():
            for axis, iv in enumerate(b.dims):
                cuts[axis].update((iv.lo, iv.hi))
    for axis, iv in enumerate(carrier_axes(space)):
        if iv is not None and not iv.is_empty:
            cuts[axis].update((iv.lo, iv.hi))
    cuts = [sorted(c) for c in cuts]
    gaps = [b - a for c in cuts for a, b in zip(c, c[1:])]
    delta = min(gaps) / 4 if gaps else Fraction(1)
    boxes = s_c.nonempty_boxes()
    hull = [(min(b.dims[a].lo for b in boxes), max(b.dims[a].hi for b in boxes)) for a in range(d)]
    vertices = list(itertools.product(*[[c for c in cuts[a] if hull[a][0] <= c <= hull[a][1]]
                                        for a in range(d)]))
    corners = []
    for b in boxes:
        for corner in itertools.product(*[(iv.lo, iv.hi) for iv in b.dims]):
            if corner not in corners:
                corners.append(corner)
    ordered = corners + [v for v in vertices if v not in set(corners)]
    signs = [sg for sg in itertools.product((-1, 0, 1), repeat=d)]
    examined = 0
    for p in ordered:
        near = [(sg, tuple(c + delta * e for c, e in zip(p, sg))) for sg in signs]
        inside = [(sg, q) for sg, q in near if member(q, s_c)]
        if not inside or len(inside) == len(near):
            continue
        examined += 1
        if examined > budget:
            return OracleResult(None, examined=budget)
        if member(p, t_c):
            continue
        sg = inside[0][0]
        exhibits = []
        for k in range(1, 9):
            step = min(delta, Fraction(1, 2 * k))
            q = tuple(c + step * e for c, e in zip(p, sg))
            exhibits.append((k, q))
        return OracleResult(False, CoverFamily("punctured", t_c, center=p), examined, exhibits)
    for level in range(2):
        examined += 1
        if examined > budget:
            return OracleResult(None, examined=budget)
        h = Fraction(1, 2 ** level)
        ranges = [range(int(np.floor(lo / h)) - 1, int(np.ceil(hi / h)) + 2) for lo, hi in hull]
        members = []
        for g in itertools.product(*ranges):
            cell = Box(tuple(open_interval(i * h - h, i * h + h) for i in g))
            members.append(intersect(t_c, BoxUnion(d, (cell,))))
        if not contains(union(*members), s_c):
            missed = normalize(subtract(s_c, t_c)).nonempty_boxes()[0].sample()
            return OracleResult(False, CoverFamily("punctured", t_c, center=missed), examined)
    return OracleResult(True, examined=examined)

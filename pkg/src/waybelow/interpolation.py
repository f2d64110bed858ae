"""Product interpolation: from ``S × T ≪ W`` to an open rectangle ``U_S × V_T ≪ W``.

The construction is the two-pass argument over points of ``S``, made finite
by letting elementary cells of ``closure(S)`` stand in for points:

1. for every cell ``c`` pick finitely many basis rectangles ``U_i × V_i ≪ W``
   with ``c ⊆ U_i`` whose right factors cover ``closure(T)``; put
   ``U_c = ∩ U_i`` and ``V_c = ∪ V_i``;
2. pick finitely many cells whose ``U_c`` cover ``closure(S)``; put
   ``U_S = ∪ U_c`` and ``V_T = ∩ V_c``.

Basis rectangles are products of open grid spans one or two pieces wide on
the cut grid of ``W``, ``S``, ``T`` and the carriers, refined dyadically.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .geometry import Box, BoxUnion, Grid, closure, contains, intersect, normalize, open_interval
from .relation import UnsupportedSpace, WayBelowError, compact_inside, way_below
from .spaces import Product, Space, carrier_axes, clip, dim, is_euclidean, product_open


class PreconditionFailed(WayBelowError):
    def __init__(self, message, verdict=None):
        super().__init__(message)
        self.verdict = verdict


class Inconclusive(WayBelowError):
    pass


@dataclass(frozen=True)
class CellChoice:
    cell: Box
    rectangles: tuple[tuple[Box, Box], ...]
    u_c: Box
    v_c: BoxUnion


@dataclass(frozen=True)
class InterpolationTrace:
    level: int
    x_dim: int
    y_dim: int
    per_cell: tuple[CellChoice, ...]
    second_pass: tuple[int, ...]
    neighbourhood_t: BoxUnion | None = None

    def to_json(self):
        from .codec import box_to_json, union_to_json
        return {
            "level": self.level,
            "per_cell": [{
                "cell": box_to_json(c.cell),
                "rectangles": [{"u": box_to_json(u), "v": box_to_json(v)} for u, v in c.rectangles],
                "u_c": box_to_json(c.u_c),
                "v_c": union_to_json(c.v_c),
            } for c in self.per_cell],
            "second_pass": list(self.second_pass),
            "neighbourhood_t": union_to_json(self.neighbourhood_t) if self.neighbourhood_t else None,
        }


@dataclass(frozen=True)
class Interpolation:
    u_s: BoxUnion
    v_t: BoxUnion
    trace: InterpolationTrace

    def __iter__(self):
        return iter((self.u_s, self.v_t, self.trace))


def _grid_cuts(space: Space, unions, level: int) -> list[list[Fraction]]:
    d = dim(space)
    cuts = [set() for _ in range(d)]
    for u in unions:
        for b in u.nonempty_boxes():
            for axis, iv in enumerate(b.dims):
                cuts[axis].update((iv.lo, iv.hi))
    for axis, iv in enumerate(carrier_axes(space)):
        if iv is not None and not iv.is_empty:
            cuts[axis].update((iv.lo, iv.hi))
    out = []
    for axis in cuts:
        axis = sorted(axis) or [Fraction(0)]
        # sentinels let spans reach past the outermost cut
        axis = [axis[0] - 1] + axis + [axis[-1] + 1]
        refined = []
        steps = 2 ** level
        for a, b in zip(axis, axis[1:]):
            refined.extend(a + (b - a) * Fraction(i, steps) for i in range(steps))
        refined.append(axis[-1])
        out.append(refined)
    return out


def _spans(grid: Grid, axis: int) -> list[tuple[int, int]]:
    """Open spans ``(c_a, c_b)`` with ``b - a ∈ {1, 2}``, as inclusive piece ranges."""
    k = len(grid.cuts[axis])
    out = []
    for a in range(k):
        for w in (1, 2):
            if a + w < k:
                out.append((2 * a + 2, 2 * (a + w)))
    return out


def _span_box(grid: Grid, spans) -> Box:
    return Box(tuple(open_interval(grid.cuts[axis][(lo - 2) // 2], grid.cuts[axis][hi // 2])
                     for axis, (lo, hi) in enumerate(spans)))


def _minimal_spans(grid: Grid, cell) -> tuple:
    out = []
    for j in cell:
        out.append((j - 1, j + 1) if j % 2 == 1 else (j, j))
    return tuple(out)


def _covers(spans, cell) -> bool:
    return all(lo <= j <= hi for (lo, hi), j in zip(spans, cell))


def _greedy(universe: list, options: list, covers) -> list[int] | None:
    """Smallest-index-first greedy set cover; None if the options cannot cover."""
    uncovered = set(range(len(universe)))
    sets = [{i for i in uncovered if covers(opt, universe[i])} for opt in options]
    chosen = []
    while uncovered:
        best, gain = None, 0
        for idx, st in enumerate(sets):
            g = len(st & uncovered)
            if g > gain:
                best, gain = idx, g
        if best is None:
            return None
        chosen.append(best)
        uncovered -= sets[best]
    return chosen


def interpolate(x_space: Space, y_space: Space, s: BoxUnion, t: BoxUnion, w: BoxUnion,
                max_refine: int = 4) -> Interpolation:
    if not (is_euclidean(x_space) and is_euclidean(y_space)):
        raise UnsupportedSpace("interpolation needs core-compact (euclidean) factors")
    prod = Product(x_space, y_space)
    verdict = way_below(prod, product_open(s, t), w)
    if not verdict.holds:
        raise PreconditionFailed("S × T is not way-below W", verdict)
    s_c, t_c = clip(x_space, s), clip(y_space, t)
    w_c = clip(prod, w)
    k_s, k_t = closure(s_c), closure(t_c)
    for level in range(1, max_refine + 1):
        result = _attempt(x_space, y_space, prod, k_s, k_t, w_c, level)
        if result is not None:
            return result
    raise Inconclusive(f"no basis cover found up to refinement level {max_refine}")


def _attempt(x_space, y_space, prod, k_s, k_t, w, level):
    dx, dy = dim(x_space), dim(y_space)
    x_proj = BoxUnion(dx, tuple(Box(b.dims[:dx]) for b in w.nonempty_boxes()))
    y_proj = BoxUnion(dy, tuple(Box(b.dims[dx:]) for b in w.nonempty_boxes()))
    gx = Grid(_grid_cuts(x_space, [k_s, x_proj], level))
    gy = Grid(_grid_cuts(y_space, [k_t, y_proj], level))
    cells_s = gx.cells(gx.occupancy(k_s))
    cells_t = gy.cells(gy.occupancy(k_t))

    if not cells_s:
        nbhd = None
        if cells_t:
            nbhd = normalize(BoxUnion(dy, tuple(_span_box(gy, _minimal_spans(gy, c)) for c in cells_t)))
        trace = InterpolationTrace(level, dx, dy, (), (), nbhd)
        return Interpolation(BoxUnion(dx), nbhd if nbhd is not None else BoxUnion(dy), trace)

    # right factors worth considering: spans meeting closure(T)
    v_options = []
    for spans in itertools.product(*[_spans(gy, a) for a in range(dy)]):
        if any(_covers(spans, c) for c in cells_t):
            v_options.append(spans)
    x_spans = [_spans(gx, a) for a in range(dx)]
    memo: dict = {}

    def below_w(u_spans, v_spans):
        key = (u_spans, v_spans)
        if key not in memo:
            rect = _span_box(gx, u_spans).times(_span_box(gy, v_spans))
            memo[key] = compact_inside(prod, BoxUnion(dx + dy, (rect,)), w)
        return memo[key]

    per_cell = []
    for cell in cells_s:
        u_choices = list(itertools.product(*[
            [sp for sp in x_spans[a] if sp[0] <= cell[a] <= sp[1]] for a in range(dx)]))
        theta = [(u, v) for u in u_choices for v in v_options if below_w(u, v)]
        if cells_t:
            picked = _greedy(cells_t, theta, lambda opt, c: _covers(opt[1], c))
            if picked is None:
                return None
            picked.sort()
            rects = tuple((_span_box(gx, theta[i][0]), _span_box(gy, theta[i][1])) for i in picked)
            u_c = rects[0][0]
            for u, _ in rects[1:]:
                u_c = u_c.intersect(u)
            v_c = normalize(BoxUnion(dy, tuple(v for _, v in rects)))
        else:
            rects = ()
            u_c = _span_box(gx, _minimal_spans(gx, cell))
            v_c = BoxUnion(dy)
        per_cell.append(CellChoice(gx.cell_box(cell), rects, u_c, v_c))

    u_occ = [gx.occupancy(BoxUnion(dx, (c.u_c,))) for c in per_cell]
    picked = _greedy(cells_s, u_occ, lambda occ, c: bool(occ[c]))
    if picked is None:
        return None
    picked.sort()
    trace = InterpolationTrace(level, dx, dy, tuple(per_cell), tuple(picked))
    u_s, v_t = replay_trace(trace)
    return Interpolation(u_s, v_t, trace)


def replay_trace(trace: InterpolationTrace) -> tuple[BoxUnion, BoxUnion]:
    """Rebuild ``(U_S, V_T)`` from the recorded choices alone."""
    if not trace.per_cell:
        v = trace.neighbourhood_t if trace.neighbourhood_t is not None else BoxUnion(trace.y_dim)
        return BoxUnion(trace.x_dim), v
    chosen = [trace.per_cell[i] for i in trace.second_pass]
    u_s = normalize(BoxUnion(trace.x_dim, tuple(c.u_c for c in chosen)))
    v_t = chosen[0].v_c
    for c in chosen[1:]:
        v_t = intersect(v_t, c.v_c)
    return u_s, normalize(v_t)


def check_interpolation(x_space: Space, y_space: Space, s: BoxUnion, t: BoxUnion, w: BoxUnion,
                        result: Interpolation) -> list[str]:
    """Postcondition failures of an interpolation result (empty when it is valid)."""
    from .spaces import is_open_in
    prod = Product(x_space, y_space)
    problems = []
    if not contains(result.u_s, clip(x_space, s)):
        problems.append("U_S does not contain S")
    if not contains(result.v_t, clip(y_space, t)):
        problems.append("V_T does not contain T")
    if not is_open_in(x_space, result.u_s):
        problems.append("U_S is not open")
    if not is_open_in(y_space, result.v_t):
        problems.append("V_T is not open")
    if not way_below(prod, product_open(result.u_s, result.v_t), w).holds:
        problems.append("U_S × V_T is not way-below W")
    for c in result.trace.per_cell:
        for u, v in c.rectangles:
            rect = BoxUnion(u.dim + v.dim, (u.times(v),))
            if not way_below(prod, rect, w).holds:
                problems.append(f"recorded rectangle {u} × {v} is not way-below W")
    replayed = replay_trace(result.trace)
    if replayed != (result.u_s, result.v_t):
        problems.append("trace does not replay to the result")
    return problems

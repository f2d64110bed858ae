"""Exact rational interval and box algebra.

Every coordinate is a :class:`fractions.Fraction`.  Intervals carry explicit
open/closed flags on both ends, since the difference between ``(0, 1)`` and
``[0, 1]`` is exactly what the way-below decision turns on.

A :class:`BoxUnion` is a finite union of axis-aligned boxes.  Set-level
questions (containment, openness, cell decomposition) are answered exactly,
either by box subtraction or by an occupancy grid over the coordinate cuts
(:class:`Grid`).
"""
from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

MAX_CELL_DIM = 4
_ZERO = Fraction(0)


class GeometryError(ValueError):
    pass


class DimensionMismatch(GeometryError):
    pass


class DimensionTooLarge(GeometryError):
    pass


def rat(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected: the kernel never sees a binary approximation.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact coordinate {value!r}")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def rat_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction
    lo_open: bool = True
    hi_open: bool = True

    def __post_init__(self):
        lo, hi = self.lo, self.hi
        if type(lo) is not Fraction:
            lo = rat(lo)
        if type(hi) is not Fraction:
            hi = rat(hi)
        empty = lo > hi or (lo == hi and (self.lo_open or self.hi_open))
        if empty:
            lo = hi = _ZERO
            object.__setattr__(self, "lo_open", True)
            object.__setattr__(self, "hi_open", True)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "_empty", empty)

    @property
    def is_empty(self) -> bool:
        return self._empty

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi and not self.lo_open

    @property
    def is_open(self) -> bool:
        return self.is_empty or (self.lo_open and self.hi_open)

    @property
    def is_closed(self) -> bool:
        return self.is_empty or not (self.lo_open or self.hi_open)

    def contains_point(self, v: Fraction) -> bool:
        if self.is_empty:
            return False
        if v < self.lo or (v == self.lo and self.lo_open):
            return False
        if v > self.hi or (v == self.hi and self.hi_open):
            return False
        return True

    def contains_interval(self, other: Interval) -> bool:
        if other.is_empty:
            return True
        if self.is_empty:
            return False
        return (_lower_key(self.lo, self.lo_open) <= _lower_key(other.lo, other.lo_open)
                and _upper_key(other.hi, other.hi_open) <= _upper_key(self.hi, self.hi_open))

    def _meet_bounds(self, other: Interval):
        if self.lo > other.lo:
            lo, lo_open = self.lo, self.lo_open
        elif self.lo < other.lo:
            lo, lo_open = other.lo, other.lo_open
        else:
            lo, lo_open = self.lo, self.lo_open or other.lo_open
        if self.hi < other.hi:
            hi, hi_open = self.hi, self.hi_open
        elif self.hi > other.hi:
            hi, hi_open = other.hi, other.hi_open
        else:
            hi, hi_open = self.hi, self.hi_open or other.hi_open
        return lo, hi, lo_open, hi_open

    def intersect(self, other: Interval) -> Interval:
        if self._empty or other._empty:
            return EMPTY
        return Interval(*self._meet_bounds(other))

    def overlaps(self, other: Interval) -> bool:
        if self._empty or other._empty:
            return False
        lo, hi, lo_open, hi_open = self._meet_bounds(other)
        return lo < hi or (lo == hi and not (lo_open or hi_open))

    def closure(self) -> Interval:
        if self.is_empty:
            return EMPTY
        return Interval(self.lo, self.hi, False, False)

    def subtract(self, other: Interval) -> tuple[Interval, Interval]:
        """Return the parts of ``self`` strictly below and strictly above ``other``."""
        if other.is_empty or self.is_empty:
            return self, EMPTY
        hi, hi_open = min((self.hi, self.hi_open), (other.lo, not other.lo_open),
                          key=lambda e: _upper_key(*e))
        below = Interval(self.lo, hi, self.lo_open, hi_open)
        lo, lo_open = max((self.lo, self.lo_open), (other.hi, not other.hi_open),
                          key=lambda e: _lower_key(*e))
        above = Interval(lo, self.hi, lo_open, self.hi_open)
        return below, above

    def sample(self) -> Fraction:
        """A rational point of a nonempty interval (its midpoint)."""
        if self.is_empty:
            raise GeometryError("empty interval has no sample point")
        return (self.lo + self.hi) / 2

    def __repr__(self):
        if self.is_empty:
            return "∅"
        if self.is_point:
            return f"{{{self.lo}}}"
        return f"{'(' if self.lo_open else '['}{self.lo}, {self.hi}{')' if self.hi_open else ']'}"


def _lower_key(v: Fraction, is_open: bool):
    # larger key means a tighter lower bound
    return (v, 1 if is_open else 0)


def _upper_key(v: Fraction, is_open: bool):
    # smaller key means a tighter upper bound
    return (v, 0 if is_open else 1)


EMPTY = Interval(0, 0, True, True)


def open_interval(lo, hi) -> Interval:
    return Interval(rat(lo), rat(hi), True, True)


def closed_interval(lo, hi) -> Interval:
    return Interval(rat(lo), rat(hi), False, False)


def point_interval(v) -> Interval:
    v = rat(v)
    return Interval(v, v, False, False)


@dataclass(frozen=True)
class Box:
    dims: tuple[Interval, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(self.dims))
        if not self.dims:
            raise GeometryError("a box needs at least one factor")

    @property
    def dim(self) -> int:
        return len(self.dims)

    @property
    def is_empty(self) -> bool:
        return any(iv.is_empty for iv in self.dims)

    @property
    def is_open(self) -> bool:
        return all(iv.is_open for iv in self.dims)

    @property
    def is_closed(self) -> bool:
        return all(iv.is_closed for iv in self.dims)

    def contains_point(self, p: Sequence[Fraction]) -> bool:
        return all(iv.contains_point(v) for iv, v in zip(self.dims, p))

    def contains_box(self, other: Box) -> bool:
        if other.is_empty:
            return True
        return all(a.contains_interval(b) for a, b in zip(self.dims, other.dims))

    def meets(self, other: Box) -> bool:
        return all(a.overlaps(b) for a, b in zip(self.dims, other.dims))

    def intersect(self, other: Box) -> Box:
        _check_dim(self.dim, other.dim)
        return Box(tuple(a.intersect(b) for a, b in zip(self.dims, other.dims)))

    def closure(self) -> Box:
        return Box(tuple(iv.closure() for iv in self.dims))

    def times(self, other: Box) -> Box:
        return Box(self.dims + other.dims)

    def subtract(self, other: Box) -> list[Box]:
        """Disjoint boxes whose union is ``self`` minus ``other`` (at most 2d of them)."""
        if self.is_empty:
            return []
        if not self.meets(other):
            return [self]
        pieces = []
        remaining = list(self.dims)
        for i, cut in enumerate(other.dims):
            below, above = remaining[i].subtract(cut)
            for part in (below, above):
                if not part.is_empty:
                    pieces.append(Box(tuple(remaining[:i]) + (part,) + tuple(remaining[i + 1:])))
            remaining[i] = remaining[i].intersect(cut)
        return pieces

    def sample(self) -> tuple[Fraction, ...]:
        return tuple(iv.sample() for iv in self.dims)

    def sort_key(self):
        return tuple((iv.lo, iv.lo_open, iv.hi, iv.hi_open) for iv in self.dims)

    def __repr__(self):
        return " × ".join(repr(iv) for iv in self.dims)


def box(*intervals: Interval) -> Box:
    return Box(tuple(intervals))


@dataclass(frozen=True)
class BoxUnion:
    dim: int
    boxes: tuple[Box, ...] = ()

    def __post_init__(self):
        if self.dim < 1:
            raise GeometryError("dimension must be positive")
        boxes = tuple(self.boxes)
        for b in boxes:
            if b.dim != self.dim:
                raise DimensionMismatch(f"box of dimension {b.dim} in a union of dimension {self.dim}")
        object.__setattr__(self, "boxes", boxes)

    @classmethod
    def of(cls, *boxes: Box) -> BoxUnion:
        if not boxes:
            raise GeometryError("use BoxUnion(dim) for an empty union")
        return cls(boxes[0].dim, boxes)

    @property
    def is_empty(self) -> bool:
        return all(b.is_empty for b in self.boxes)

    def nonempty_boxes(self) -> list[Box]:
        return [b for b in self.boxes if not b.is_empty]

    def __contains__(self, p) -> bool:
        return member(p, self)

    def __repr__(self):
        if self.is_empty:
            return f"∅^{self.dim}"
        return " ∪ ".join(repr(b) for b in self.nonempty_boxes())


def interval_union(*intervals: Interval) -> BoxUnion:
    """Convenience constructor for a one-dimensional union."""
    return BoxUnion(1, tuple(Box((iv,)) for iv in intervals))


def _check_dim(a: int, b: int):
    if a != b:
        raise DimensionMismatch(f"dimension {a} vs {b}")


def member(p: Sequence, u: BoxUnion) -> bool:
    p = tuple(rat(v) for v in p)
    _check_dim(len(p), u.dim)
    return any(b.contains_point(p) for b in u.boxes)


def union(*us: BoxUnion) -> BoxUnion:
    dim = us[0].dim
    for u in us:
        _check_dim(u.dim, dim)
    return BoxUnion(dim, tuple(b for u in us for b in u.boxes))


def intersect(a: BoxUnion, b: BoxUnion) -> BoxUnion:
    _check_dim(a.dim, b.dim)
    out = []
    for x in a.nonempty_boxes():
        for y in b.nonempty_boxes():
            z = x.intersect(y)
            if not z.is_empty:
                out.append(z)
    return BoxUnion(a.dim, tuple(out))


def _subtract_boxes(pieces: list[Box], cutters: Iterable[Box]) -> list[Box]:
    for c in cutters:
        if not pieces:
            break
        pieces = [q for p in pieces for q in p.subtract(c)]
    return pieces


def subtract(a: BoxUnion, b: BoxUnion) -> BoxUnion:
    _check_dim(a.dim, b.dim)
    cutters = b.nonempty_boxes()
    out = []
    for x in a.nonempty_boxes():
        out.extend(_subtract_boxes([x], [c for c in cutters if c.meets(x)]))
    return BoxUnion(a.dim, tuple(out))


def normalize(u: BoxUnion) -> BoxUnion:
    """Pairwise-disjoint representation with the same points.

    In dimension 1 touching or overlapping intervals are merged into maximal
    ones; in higher dimensions later boxes are cut by earlier ones.
    """
    boxes = u.nonempty_boxes()
    if u.dim == 1:
        return BoxUnion(1, tuple(Box((iv,)) for iv in _merge_intervals([b.dims[0] for b in boxes])))
    boxes.sort(key=Box.sort_key)
    disjoint: list[Box] = []
    for b in boxes:
        disjoint.extend(_subtract_boxes([b], [d for d in disjoint if d.meets(b)]))
    disjoint.sort(key=Box.sort_key)
    return BoxUnion(u.dim, tuple(disjoint))


def _merge_intervals(ivs: list[Interval]) -> list[Interval]:
    ivs = sorted((iv for iv in ivs if not iv.is_empty), key=lambda iv: _lower_key(iv.lo, iv.lo_open))
    merged: list[Interval] = []
    for iv in ivs:
        if merged:
            last = merged[-1]
            touches = iv.lo < last.hi or (iv.lo == last.hi and not (last.hi_open and iv.lo_open))
            if touches:
                hi, hi_open = max((last.hi, last.hi_open), (iv.hi, iv.hi_open),
                                  key=lambda e: _upper_key(*e))
                merged[-1] = Interval(last.lo, hi, last.lo_open, hi_open)
                continue
        merged.append(iv)
    return merged


def closure(u: BoxUnion) -> BoxUnion:
    return normalize(BoxUnion(u.dim, tuple(b.closure() for b in u.nonempty_boxes())))


def contains(outer: BoxUnion, inner: BoxUnion) -> bool:
    """Exact set inclusion ``inner ⊆ outer``.

    Each box of ``inner`` is cut by every box of ``outer`` it meets; the
    inclusion holds iff nothing survives.  :func:`contains_by_cells` answers
    the same question through the cell grid and is kept as a cross-check.
    """
    _check_dim(outer.dim, inner.dim)
    cutters = outer.nonempty_boxes()
    for b in inner.nonempty_boxes():
        if any(c.contains_box(b) for c in cutters):
            continue
        if _subtract_boxes([b], [c for c in cutters if c.meets(b)]):
            return False
    return True


def contains_by_cells(outer: BoxUnion, inner: BoxUnion) -> bool:
    _check_dim(outer.dim, inner.dim)
    grid = Grid.from_unions([outer, inner])
    occ_in = grid.occupancy(inner)
    occ_out = grid.occupancy(outer)
    return not np.any(occ_in & ~occ_out)


def equal_sets(a: BoxUnion, b: BoxUnion) -> bool:
    return contains(a, b) and contains(b, a)


class Grid:
    """Elementary-cell grid induced by per-axis coordinate cuts.

    With cuts ``c_0 < ... < c_{k-1}`` on an axis, the axis splits into
    ``2k + 1`` pieces indexed as::

        0: (-inf, c_0)   1: {c_0}   2: (c_0, c_1)   ...   2k: (c_{k-1}, +inf)

    so odd indices are cut points and even indices are open gaps.  A cell is
    a tuple of piece indices, one per axis.  Every box whose endpoints are
    cuts is a union of cells, which makes membership of a whole cell
    decidable from one representative point.
    """

    def __init__(self, cuts: Sequence[Iterable[Fraction]]):
        self.cuts = [sorted(set(rat(c) for c in axis)) for axis in cuts]
        if len(self.cuts) > MAX_CELL_DIM:
            raise DimensionTooLarge(f"cell decomposition is capped at dimension {MAX_CELL_DIM}")
        self._index = [{c: i for i, c in enumerate(axis)} for axis in self.cuts]

    @classmethod
    def from_unions(cls, unions: Sequence[BoxUnion], extra: Sequence[Iterable[Fraction]] | None = None) -> Grid:
        dim = unions[0].dim
        for u in unions:
            _check_dim(u.dim, dim)
        cuts = [set() for _ in range(dim)]
        for u in unions:
            for b in u.nonempty_boxes():
                for axis, iv in enumerate(b.dims):
                    cuts[axis].update((iv.lo, iv.hi))
        if extra is not None:
            for axis, values in enumerate(extra):
                cuts[axis].update(values)
        return cls(cuts)

    @property
    def dim(self) -> int:
        return len(self.cuts)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(2 * len(axis) + 1 for axis in self.cuts)

    def piece(self, axis: int, j: int) -> Interval:
        cuts = self.cuts[axis]
        if j % 2 == 1:
            return point_interval(cuts[j // 2])
        i = j // 2
        if i == 0 or i == len(cuts):
            raise GeometryError("unbounded piece has no interval form")
        return open_interval(cuts[i - 1], cuts[i])

    def rep(self, axis: int, j: int) -> Fraction:
        cuts = self.cuts[axis]
        if not cuts:
            return Fraction(0)
        if j % 2 == 1:
            return cuts[j // 2]
        i = j // 2
        if i == 0:
            return cuts[0] - 1
        if i == len(cuts):
            return cuts[-1] + 1
        return (cuts[i - 1] + cuts[i]) / 2

    def rep_point(self, cell: Sequence[int]) -> tuple[Fraction, ...]:
        return tuple(self.rep(axis, j) for axis, j in enumerate(cell))

    def cell_box(self, cell: Sequence[int]) -> Box:
        return Box(tuple(self.piece(axis, j) for axis, j in enumerate(cell)))

    def locate(self, axis: int, v: Fraction) -> int:
        """Index of the piece containing coordinate ``v``."""
        cuts = self.cuts[axis]
        i = bisect_left(cuts, v)
        if i < len(cuts) and cuts[i] == v:
            return 2 * i + 1
        return 2 * i

    def index_range(self, axis: int, iv: Interval) -> tuple[int, int] | None:
        """Inclusive piece-index range covered by an interval whose endpoints are cuts."""
        if iv.is_empty:
            return None
        a = self._index[axis][iv.lo]
        b = self._index[axis][iv.hi]
        jlo = 2 * a + 2 if iv.lo_open else 2 * a + 1
        jhi = 2 * b if iv.hi_open else 2 * b + 1
        return (jlo, jhi) if jlo <= jhi else None

    def box_slices(self, b: Box) -> tuple[slice, ...] | None:
        slices = []
        for axis, iv in enumerate(b.dims):
            r = self.index_range(axis, iv)
            if r is None:
                return None
            slices.append(slice(r[0], r[1] + 1))
        return tuple(slices)

    def occupancy(self, u: BoxUnion) -> np.ndarray:
        occ = np.zeros(self.shape, dtype=bool)
        for b in u.nonempty_boxes():
            sl = self.box_slices(b)
            if sl is not None:
                occ[sl] = True
        return occ

    def carrier_occupancy(self, axes: Sequence[Interval | None]) -> np.ndarray:
        """Occupancy of a carrier box; ``None`` stands for a whole line."""
        occ = np.ones(self.shape, dtype=bool)
        for axis, iv in enumerate(axes):
            if iv is None:
                continue
            mask = np.zeros(self.shape[axis], dtype=bool)
            r = self.index_range(axis, iv)
            if r is not None:
                mask[r[0]:r[1] + 1] = True
            shape = [1] * self.dim
            shape[axis] = -1
            occ &= mask.reshape(shape)
        return occ

    def cells(self, occ: np.ndarray) -> list[tuple[int, ...]]:
        return [tuple(int(j) for j in idx) for idx in np.argwhere(occ)]


def elementary_cells(us: Sequence[BoxUnion], extra_cuts: Sequence[Iterable[Fraction]] | None = None) -> list[Box]:
    """Grid cells partitioning the union of ``us``.

    Each returned cell lies entirely inside or entirely outside every input.
    """
    if not us:
        return []
    grid = Grid.from_unions(us, extra_cuts)
    occ = np.zeros(grid.shape, dtype=bool)
    for u in us:
        occ |= grid.occupancy(u)
    return [grid.cell_box(c) for c in grid.cells(occ)]

"""Carrier spaces for box unions.

An open set of a space is a :class:`BoxUnion` read as ``union ∩ carrier``
with the subspace topology.  Products flatten to per-axis carriers, so the
same cell analysis serves every variant.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .geometry import (Box, BoxUnion, DimensionMismatch, GeometryError, Grid, Interval,
                       intersect, normalize, rat)


class SpaceError(GeometryError):
    pass


class NotAProduct(SpaceError):
    pass


@dataclass(frozen=True)
class EuclideanFull:
    d: int


@dataclass(frozen=True)
class EuclideanBox:
    carrier: Box


@dataclass(frozen=True)
class RationalTrace:
    """``Q^d ∩ carrier`` with the subspace topology."""
    d: int
    carrier: Box

    def __post_init__(self):
        if self.carrier.dim != self.d:
            raise DimensionMismatch("carrier dimension differs from d")


@dataclass(frozen=True)
class Product:
    left: "Space"
    right: "Space"


Space = Union[EuclideanFull, EuclideanBox, RationalTrace, Product]


def dim(space: Space) -> int:
    if isinstance(space, EuclideanFull):
        return space.d
    if isinstance(space, EuclideanBox):
        return space.carrier.dim
    if isinstance(space, RationalTrace):
        return space.d
    return dim(space.left) + dim(space.right)


def carrier_axes(space: Space) -> tuple[Interval | None, ...]:
    """Per-axis carrier interval, ``None`` meaning the whole line."""
    if isinstance(space, EuclideanFull):
        return (None,) * space.d
    if isinstance(space, (EuclideanBox, RationalTrace)):
        return space.carrier.dims
    return carrier_axes(space.left) + carrier_axes(space.right)


def rational_axes(space: Space) -> tuple[bool, ...]:
    if isinstance(space, RationalTrace):
        return (True,) * space.d
    if isinstance(space, Product):
        return rational_axes(space.left) + rational_axes(space.right)
    return (False,) * dim(space)


def is_euclidean(space: Space) -> bool:
    return not any(rational_axes(space))


def is_rational(space: Space) -> bool:
    return all(rational_axes(space))


def carrier_union(space: Space) -> BoxUnion | None:
    """The carrier as a one-box union, or None when some axis is unbounded."""
    axes = carrier_axes(space)
    if any(iv is None for iv in axes):
        return None
    return BoxUnion(len(axes), (Box(axes),))


def in_carrier(space: Space, p) -> bool:
    return all(iv is None or iv.contains_point(rat(v)) for iv, v in zip(carrier_axes(space), p))


def clip(space: Space, u: BoxUnion) -> BoxUnion:
    """``u ∩ carrier``, normalized."""
    _check(space, u)
    axes = carrier_axes(space)
    boxes = []
    for b in u.nonempty_boxes():
        c = Box(tuple(iv if ax is None else iv.intersect(ax) for iv, ax in zip(b.dims, axes)))
        if not c.is_empty:
            boxes.append(c)
    return normalize(BoxUnion(u.dim, tuple(boxes)))


def _check(space: Space, u: BoxUnion):
    if u.dim != dim(space):
        raise DimensionMismatch(f"set of dimension {u.dim} in a space of dimension {dim(space)}")


def _carrier_cuts(space: Space):
    return [() if iv is None or iv.is_empty else (iv.lo, iv.hi) for iv in carrier_axes(space)]


def open_violations(space: Space, u: BoxUnion) -> list[tuple]:
    """Rational points of ``u ∩ carrier`` that are limits of carrier points outside ``u``.

    Empty exactly when ``u`` is open in ``space``.  A cell of ``u`` is
    adjacent to a cell ``c'`` when it lies in the closure of ``c'``; that
    happens only along axes where the cell is a cut point, stepping to the
    neighbouring gaps.  Since every cell contains rational points densely,
    the same test is exact for rational-trace carriers.
    """
    _check(space, u)
    grid = Grid.from_unions([u], _carrier_cuts(space))
    inside = grid.occupancy(u)
    carrier = grid.carrier_occupancy(carrier_axes(space))
    a = inside & carrier
    escape = carrier & ~inside
    d = grid.dim
    bad = np.zeros(grid.shape, dtype=bool)
    offsets = np.array(np.meshgrid(*[[-1, 0, 1]] * d, indexing="ij")).reshape(d, -1).T
    for step in offsets:
        if not step.any():
            continue
        # cells of `a` that are cut points on every axis we step along
        src = a.copy()
        for axis, s in enumerate(step):
            if s:
                shape = [1] * d
                shape[axis] = -1
                odd = (np.arange(grid.shape[axis]) % 2 == 1).reshape(shape)
                src &= odd
        shifted = np.zeros(grid.shape, dtype=bool)
        dst_sl, src_sl = [], []
        for axis, s in enumerate(step):
            n = grid.shape[axis]
            if s == 1:
                src_sl.append(slice(0, n - 1))
                dst_sl.append(slice(1, n))
            elif s == -1:
                src_sl.append(slice(1, n))
                dst_sl.append(slice(0, n - 1))
            else:
                src_sl.append(slice(0, n))
                dst_sl.append(slice(0, n))
        # shifted[cell] = escape[cell + step]
        shifted[tuple(src_sl)] = escape[tuple(dst_sl)]
        bad |= src & shifted
    return [grid.rep_point(c) for c in grid.cells(bad)]


def is_open_in(space: Space, u: BoxUnion) -> bool:
    return not open_violations(space, u)


def project(space: Space, w: BoxUnion, side: str) -> BoxUnion:
    """Image of ``w ∩ carrier`` under the projection onto one factor."""
    if not isinstance(space, Product):
        raise NotAProduct("projection needs a product space")
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    w = clip(space, w)
    k = dim(space.left)
    if side == "left":
        boxes = tuple(Box(b.dims[:k]) for b in w.nonempty_boxes())
        return normalize(BoxUnion(k, boxes))
    boxes = tuple(Box(b.dims[k:]) for b in w.nonempty_boxes())
    return normalize(BoxUnion(dim(space.right), boxes))


def product_open(u: BoxUnion, v: BoxUnion) -> BoxUnion:
    """All pairwise box products: membership is the conjunction of the factors'."""
    boxes = tuple(a.times(b) for a in u.nonempty_boxes() for b in v.nonempty_boxes())
    return BoxUnion(u.dim + v.dim, boxes)


def split_box(space: Product, b: Box) -> tuple[Box, Box]:
    k = dim(space.left)
    return Box(b.dims[:k]), Box(b.dims[k:])


def restrict(a: BoxUnion, b: BoxUnion) -> BoxUnion:
    return normalize(intersect(a, b))

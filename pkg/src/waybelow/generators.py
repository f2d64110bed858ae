"""Seeded random instances for the law battery.

Every case gets its own ``random.Random`` keyed by ``(seed, law, index)``,
so a case can be regenerated on its own and the stream never depends on
how many cases ran before it.
"""
from __future__ import annotations

import random
from fractions import Fraction

from .geometry import Box, BoxUnion, Interval, elementary_cells, open_interval

SPAN = 4
DENOM = 4


def case_rng(seed: int, law: str, index: int) -> random.Random:
    return random.Random(f"{seed}:{law}:{index}")


def rand_rat(rng: random.Random, lo=-SPAN, hi=SPAN, den: int = DENOM) -> Fraction:
    return Fraction(rng.randint(int(lo * den), int(hi * den)), den)


def rand_interval(rng, opened: bool = True, lo=-SPAN, hi=SPAN) -> Interval:
    a = rand_rat(rng, lo, hi)
    b = rand_rat(rng, lo, hi)
    while b == a:
        b = rand_rat(rng, lo, hi)
    a, b = min(a, b), max(a, b)
    if opened:
        return Interval(a, b, True, True)
    return Interval(a, b, rng.random() < 0.5, rng.random() < 0.5)


def rand_box(rng, d: int, opened: bool = True) -> Box:
    return Box(tuple(rand_interval(rng, opened) for _ in range(d)))


def rand_open(rng, d: int, max_boxes: int = 3) -> BoxUnion:
    return BoxUnion(d, tuple(rand_box(rng, d) for _ in range(rng.randint(1, max_boxes))))


def rand_set(rng, d: int, max_boxes: int = 2) -> BoxUnion:
    """Arbitrary flags; sometimes a single point."""
    if rng.random() < 0.1:
        p = tuple(rand_rat(rng) for _ in range(d))
        return BoxUnion(d, (Box(tuple(Interval(v, v, False, False) for v in p)),))
    return BoxUnion(d, tuple(rand_box(rng, d, opened=False) for _ in range(rng.randint(1, max_boxes))))


def inner_box(rng, b: Box, opened: bool | None = None) -> Box:
    """A random box whose closure sits inside ``b`` (``b`` nondegenerate)."""
    dims = []
    for iv in b.dims:
        width = iv.hi - iv.lo
        a = iv.lo + width * Fraction(rng.randint(1, 7), 16)
        c = iv.hi - width * Fraction(rng.randint(1, 7), 16)
        flags = (True, True) if opened else (rng.random() < 0.5, rng.random() < 0.5)
        dims.append(Interval(a, c, *flags))
    return Box(tuple(dims))


def subset_of(rng, u: BoxUnion) -> BoxUnion:
    """A random subset of ``u``: pieces of its boxes intersected with a random box."""
    boxes = []
    for b in u.nonempty_boxes():
        if rng.random() < 0.7:
            boxes.append(b.intersect(rand_box(rng, u.dim, opened=False)))
    return BoxUnion(u.dim, tuple(boxes))


def cell_samples(u: BoxUnion) -> list[tuple[Fraction, ...]]:
    return [c.sample() for c in elementary_cells([u])]


def rand_rect_union(rng, max_rects: int = 4) -> BoxUnion:
    return BoxUnion(2, tuple(Box((rand_interval(rng), rand_interval(rng)))
                             for _ in range(rng.randint(1, max_rects))))


def interpolation_instance(rng):
    """``(s, t, w)`` in ``R × R`` with ``s × t`` well inside one rectangle of ``w``."""
    w = rand_rect_union(rng)
    host = w.boxes[rng.randrange(len(w.boxes))]
    if rng.random() < 0.05:
        return BoxUnion(1), BoxUnion(1), w
    s_box = inner_box(rng, Box((host.dims[0],)))
    t_box = inner_box(rng, Box((host.dims[1],)))
    s = BoxUnion(1, (s_box,))
    t = BoxUnion(1, (t_box,))
    if rng.random() < 0.3:
        s = BoxUnion(1, (s_box, inner_box(rng, Box((host.dims[0],)))))
    return s, t, w


def ascending_open_chain(rng, d: int, depth: int, scale: Fraction = Fraction(1)) -> list[BoxUnion]:
    """An ascending chain of open boxes, each endpoint moving outward linearly."""
    base = [rand_interval(rng, True, -1, 1) for _ in range(d)]
    grow_lo = [Fraction(rng.randint(0, 4), 4) * scale for _ in range(d)]
    grow_hi = [Fraction(rng.randint(0, 4), 4) * scale for _ in range(d)]
    chain = []
    for n in range(depth + 1):
        dims = tuple(open_interval(iv.lo - gl * n, iv.hi + gh * n)
                     for iv, gl, gh in zip(base, grow_lo, grow_hi))
        chain.append(BoxUnion(d, (Box(dims),)))
    return chain

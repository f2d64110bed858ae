"""Witnesses for the wedge-of-circles counter-example.

The set ``A ⊂ Q × ⋁ C_n`` meets circle ``n`` in
``{(r, θ) : π/n ≤ r ≤ π/n + max(θ, 1 - θ)}``.  Near ``(0, basepoint)`` each
finite wedge keeps ``A`` at distance ``≥ π/n``, so ``A`` is closed stage by
stage.  Yet every product neighbourhood of that point meets ``A``,
because the basepoint lies on every circle and ``π/n → 0``.

Circle indices here are the ones in the formula (``n ≥ 1``); they are one
more than zero-based indices that start at ``C_0``.  Index 0 is kept for
the canonical basepoint.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .geometry import rat

INDEX_SHIFT = 1


def _arctan_inv_bounds(x: int, terms: int) -> tuple[Fraction, Fraction]:
    """Rigorous bounds on ``arctan(1/x)`` from the alternating Taylor series."""
    total = Fraction(0)
    for k in range(terms):
        total += Fraction((-1) ** k, (2 * k + 1) * x ** (2 * k + 1))
    tail = Fraction(1, (2 * terms + 1) * x ** (2 * terms + 1))
    return (total, total + tail) if terms % 2 == 0 else (total - tail, total)


@lru_cache(maxsize=None)
def _pi_enclosure(terms: int) -> tuple[Fraction, Fraction]:
    # Machin: π = 16 arctan(1/5) - 4 arctan(1/239)
    a_lo, a_hi = _arctan_inv_bounds(5, terms)
    b_lo, b_hi = _arctan_inv_bounds(239, terms)
    return 16 * a_lo - 4 * b_hi, 16 * a_hi - 4 * b_lo


def _cf_terms(q: Fraction, limit: int) -> list[int]:
    out = []
    while len(out) < limit:
        a = q.numerator // q.denominator
        out.append(a)
        frac = q - a
        if frac == 0:
            break
        q = 1 / frac
    return out


@lru_cache(maxsize=None)
def _pi_cf(count: int) -> tuple[int, ...]:
    """The first ``count`` continued-fraction terms of π, certified by an enclosure."""
    terms = 8
    while True:
        lo, hi = _pi_enclosure(terms)
        a, b = _cf_terms(lo, count + 2), _cf_terms(hi, count + 2)
        common = []
        for x, y in zip(a, b):
            if x != y:
                break
            common.append(x)
        # the last agreeing term may still be truncated; keep a margin of one
        if len(common) > count:
            return tuple(common[:count])
        terms *= 2


def _convergents(count: int) -> list[Fraction]:
    out = []
    p, pp, q, qq = 1, 0, 0, 1
    for a in _pi_cf(count):
        p, pp = a * p + pp, p
        q, qq = a * q + qq, q
        out.append(Fraction(p, q))
    return out


@dataclass(frozen=True)
class PiBounds:
    """``lo < π < hi`` from consecutive convergents of π's continued fraction.

    Level 0 is ``333/106 < π < 355/113``; each level moves one convergent on,
    which nests the interval and strictly shrinks it.
    """
    level: int = 0

    @property
    def _pair(self):
        conv = _convergents(self.level + 4)
        return sorted(conv[self.level + 2: self.level + 4])

    @property
    def lo(self) -> Fraction:
        return self._pair[0]

    @property
    def hi(self) -> Fraction:
        return self._pair[1]

    def refine(self) -> PiBounds:
        return PiBounds(self.level + 1)


def pi_less_than(a, pi: PiBounds = PiBounds()) -> tuple[bool, PiBounds]:
    """Decide ``π < a`` for rational ``a``, refining until the bounds separate."""
    a = rat(a)
    while True:
        if a >= pi.hi:
            return True, pi
        if a <= pi.lo:
            return False, pi
        pi = pi.refine()


@dataclass(frozen=True)
class WedgePoint:
    circle_index: int
    theta: Fraction

    def __post_init__(self):
        theta = rat(self.theta) % 1
        object.__setattr__(self, "theta", theta)
        if self.circle_index < 0:
            raise ValueError("circle index must be non-negative")
        if self.circle_index == 0 and theta != 0:
            raise ValueError("index 0 is reserved for the basepoint")

    @property
    def is_basepoint(self) -> bool:
        return self.theta == 0

    def canonical(self) -> WedgePoint:
        return WedgePoint(0, Fraction(0)) if self.is_basepoint else self


@dataclass(frozen=True)
class ASetQuery:
    r: Fraction
    point: WedgePoint

    def __post_init__(self):
        object.__setattr__(self, "r", rat(self.r))

    def to_json(self):
        n = self.point.circle_index
        return {"r": f"{self.r.numerator}/{self.r.denominator}",
                "circle_index": n,
                "zero_based_circle": n - INDEX_SHIFT if n else None,
                "theta": f"{self.point.theta.numerator}/{self.point.theta.denominator}"}


def a_membership(q: ASetQuery, pi: PiBounds = PiBounds()) -> bool:
    """Exact test of ``π/n ≤ r ≤ π/n + max(θ, 1 - θ)``.

    Both sides compare π with a rational, so equality never happens and a
    finite refinement of the bounds decides each inequality.  The canonical
    basepoint ``(0, 0)`` lies on every circle; it is tested on the circle
    with the largest admissible upper bound.
    """
    n = q.point.circle_index
    r = q.r
    if n == 0:
        if r <= 0:
            return False
        n = 1
        while not pi_less_than(n * r, pi)[0]:
            n += 1
        # π/n ≤ r now holds for this smallest n
    theta = q.point.theta
    spread = max(theta, 1 - theta)
    # π/n ≤ r  ⇔  π < n r
    lower_ok, pi = pi_less_than(n * r, pi)
    if not lower_ok:
        return False
    # r ≤ π/n + spread  ⇔  n (r - spread) < π
    above, _ = pi_less_than(n * (r - spread), pi)
    return not above


@dataclass(frozen=True)
class StageSeparation:
    n: int
    radius: Fraction
    probes: int
    pi_lo: Fraction

    def to_json(self):
        return {"n": self.n, "zero_based_circle_max": self.n - INDEX_SHIFT,
                "radius": f"{self.radius.numerator}/{self.radius.denominator}",
                "probes": self.probes,
                "pi_lo": f"{self.pi_lo.numerator}/{self.pi_lo.denominator}"}


class VerificationFailed(AssertionError):
    pass


def stage_separation_witness(n: int) -> StageSeparation:
    """Radius ``3/n`` around ``(0, basepoint)`` free of ``A`` in the wedge of circles ``≤ n``.

    Members there have ``r ≥ π/i ≥ π/n > 3/n``; the bound ``3 < π`` is read
    off the level-0 bounds.  A grid of 50 probes ``(r, θ)`` inside the
    neighbourhood is then re-checked for membership on every circle ``i ≤ n``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    pi = PiBounds()
    if not pi.lo > 3:
        raise VerificationFailed("3 < π not certified")
    radius = Fraction(3, n)
    rs = [radius * Fraction(2 * k - 9, 10) for k in range(10)]
    thetas = [Fraction(k, 5) for k in range(5)]
    for r in rs:
        for theta in thetas:
            for i in range(1, n + 1):
                q = ASetQuery(r, WedgePoint(i, theta))
                if a_membership(q, pi):
                    raise VerificationFailed(f"{q} lies in A inside the separating neighbourhood")
    return StageSeparation(n, radius, len(rs) * len(thetas), pi.lo)


def product_limit_witness(delta, arc=None) -> ASetQuery:
    """A member of ``A`` in the product neighbourhood ``(-delta, delta) × V``.

    ``V`` may shrink each circle to an arc of width ``arc(n)`` around the
    basepoint; the witness sits on the basepoint, so the arcs never matter.
    The circle is the smallest ``n`` with ``π/n < delta`` and ``r`` is the
    midpoint between an upper bound of ``π/n`` and ``min(delta, π/n + 1)``.
    """
    delta = rat(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    pi = PiBounds()
    n = 1
    while True:
        below, pi = pi_less_than(n * delta, pi)
        if below:
            break
        n += 1
    while not (pi.hi / n < delta and pi.hi / n < pi.lo / n + 1):
        pi = pi.refine()
    upper = min(delta, pi.lo / n + 1)
    r = (pi.hi / n + upper) / 2
    q = ASetQuery(r, WedgePoint(n, Fraction(0)))
    if not a_membership(q):
        raise VerificationFailed(f"witness {q} is not in A")
    if arc is not None and any(rat(arc(i)) <= 0 for i in range(1, n + 1)):
        raise ValueError("arcs must be positive")
    return q


@dataclass(frozen=True)
class HamckeDemo:
    separations: tuple[StageSeparation, ...]
    limit_witnesses: tuple[ASetQuery, ...]

    def to_json(self):
        return {"separations": [s.to_json() for s in self.separations],
                "limit_witnesses": [w.to_json() for w in self.limit_witnesses],
                "index_shift": INDEX_SHIFT}


def not_closed_demo(k_max: int) -> HamckeDemo:
    """Witnesses in every neighbourhood ``(-1/k, 1/k)``, with the stage separations for ``n ≤ k_max``."""
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    witnesses = tuple(product_limit_witness(Fraction(1, k), lambda n: Fraction(1)) for k in range(1, k_max + 1))
    separations = tuple(stage_separation_witness(n) for n in range(1, k_max + 1))
    return HamckeDemo(separations, witnesses)

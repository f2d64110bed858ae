"""Ascending sequences of spaces, opens of their union, and neighbourhood chains.

Everything is truncated at a finite depth ``N``: a sequence is described by
a closed-form rule for its stages, an open of the union by its trace on each
stage, and the chain built for a point ``(x, y)`` by its first ``N + 1``
rectangles.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import floor

from .geometry import Box, BoxUnion, Interval, closed_interval, contains, member, open_interval, rat, union
from .interpolation import Inconclusive, InterpolationTrace, interpolate
from .relation import NotOpen, PointOutside, WayBelowError, WayBelowVerdict, core_compact_witness, way_below
from .spaces import EuclideanBox, EuclideanFull, Product, Space, clip, in_carrier, is_open_in, product_open


class ColimitError(WayBelowError):
    pass


class DepthExceeded(ColimitError):
    pass


class ChainError(ColimitError):
    def __init__(self, message, stage=None):
        super().__init__(message)
        self.stage = stage


@dataclass(frozen=True)
class AscendingSequence:
    """Stages ``X_n`` given by a rule; inclusions are the transition maps.

    ``growing_box``: ``[-(radius + step·n), radius + step·n]^dim``.
    ``full``: ``R^dim`` at every stage.  ``constant_box``: ``carrier`` at every stage.
    """
    kind: str = "growing_box"
    dim: int = 1
    radius: Fraction = Fraction(1)
    step: Fraction = Fraction(1)
    carrier: Box | None = None
    max_depth: int = 8
    offset: int = 0

    def __post_init__(self):
        object.__setattr__(self, "radius", rat(self.radius))
        object.__setattr__(self, "step", rat(self.step))
        if self.kind not in ("growing_box", "full", "constant_box"):
            raise ValueError(f"unknown sequence rule {self.kind!r}")
        if self.step < 0:
            raise ValueError("stages must grow")

    def _check(self, n: int):
        if not 0 <= n <= self.max_depth:
            raise DepthExceeded(f"stage {n} beyond max depth {self.max_depth}")

    def stage(self, n: int) -> Space:
        self._check(n)
        if self.kind == "full":
            return EuclideanFull(self.dim)
        if self.kind == "constant_box":
            return EuclideanBox(self.carrier)
        r = self.radius + self.step * (n + self.offset)
        return EuclideanBox(Box((closed_interval(-r, r),) * self.dim))

    def shifted(self, k: int) -> AscendingSequence:
        """The sequence ``n ↦ X_{n+k}``."""
        return replace(self, offset=self.offset + k, max_depth=self.max_depth - k)


@dataclass(frozen=True)
class ProductSequence:
    left: AscendingSequence
    right: AscendingSequence

    @property
    def max_depth(self) -> int:
        return min(self.left.max_depth, self.right.max_depth)

    def stage(self, n: int) -> Product:
        return Product(self.left.stage(n), self.right.stage(n))

    def shifted(self, k: int) -> ProductSequence:
        return ProductSequence(self.left.shifted(k), self.right.shifted(k))


@dataclass(frozen=True)
class ColimitOpen:
    """Stage-wise traces ``W_n`` of an open set of the union.

    ``explicit``: the listed stages.  ``full``: the whole growing box.
    ``staircase``: unit open squares centred at ``(c, c)`` for
    ``c ∈ ½Z``, ``|c| ≤ R_n + ½``, a strip around the diagonal.
    ``affine``: one box whose endpoints move linearly with ``n``.
    """
    kind: str
    max_depth: int = 8
    stages: tuple[BoxUnion, ...] = ()
    dim: int = 1
    radius: Fraction = Fraction(1)
    step: Fraction = Fraction(1)
    lo: tuple = ()
    lo_step: tuple = ()
    hi: tuple = ()
    hi_step: tuple = ()
    lo_open: tuple = ()
    hi_open: tuple = ()
    offset: int = 0

    def stage_open(self, n: int) -> BoxUnion:
        if not 0 <= n <= self.max_depth:
            raise DepthExceeded(f"stage {n} beyond max depth {self.max_depth}")
        m = n + self.offset
        if self.kind == "explicit":
            return self.stages[m]
        r = rat(self.radius) + rat(self.step) * m
        if self.kind == "full":
            return BoxUnion(self.dim, (Box((closed_interval(-r, r),) * self.dim),))
        if self.kind == "staircase":
            half = Fraction(1, 2)
            top = floor((r + half) * 2)
            squares = []
            for j in range(-top, top + 1):
                c = Fraction(j, 2)
                side = open_interval(c - half, c + half)
                squares.append(Box((side, side)))
            return BoxUnion(2, tuple(squares))
        if self.kind == "affine":
            dims = tuple(
                Interval(rat(a) + rat(da) * m, rat(b) + rat(db) * m, lo_o, hi_o)
                for a, da, b, db, lo_o, hi_o in zip(self.lo, self.lo_step, self.hi, self.hi_step,
                                                    self.lo_open, self.hi_open))
            return BoxUnion(len(dims), (Box(dims),))
        raise ValueError(f"unknown family rule {self.kind!r}")

    def shifted(self, k: int) -> ColimitOpen:
        return replace(self, offset=self.offset + k, max_depth=self.max_depth - k)


def explicit_family(stages) -> ColimitOpen:
    stages = tuple(stages)
    return ColimitOpen("explicit", max_depth=len(stages) - 1, stages=stages)


def _same_trace(space: Space, a: BoxUnion, b: BoxUnion) -> bool:
    a, b = clip(space, a), clip(space, b)
    return contains(a, b) and contains(b, a)


def check_open_at(seq, fam: ColimitOpen, p: int) -> bool:
    """``W_p`` is open in ``X_p`` and the traces agree on every earlier stage."""
    if p > seq.max_depth or p > fam.max_depth:
        raise DepthExceeded(f"stage {p} beyond max depth")
    if not is_open_in(seq.stage(p), fam.stage_open(p)):
        return False
    for m in range(p):
        # W_m = W_{m+1} ∩ X_m, chained up to p
        if not _same_trace(seq.stage(m), fam.stage_open(m), fam.stage_open(m + 1)):
            return False
    return True


def check_open_upto(seq, fam: ColimitOpen, depth: int) -> int | None:
    """First stage ``p ≤ depth`` where :func:`check_open_at` fails, or None.

    Same checks as calling :func:`check_open_at` for every ``p``, with each
    coherence pair tested once.
    """
    if depth > seq.max_depth or depth > fam.max_depth:
        raise DepthExceeded(f"stage {depth} beyond max depth")
    for p in range(depth + 1):
        if not is_open_in(seq.stage(p), fam.stage_open(p)):
            return p
        if p and not _same_trace(seq.stage(p - 1), fam.stage_open(p - 1), fam.stage_open(p)):
            return p
    return None


def chain_union(seq, chain, depth: int) -> ColimitOpen:
    """The open ``∪_n U_n`` of an ascending chain, as stage traces up to ``depth``.

    ``W_p = ∪_{p ≤ n ≤ depth} (U_n ∩ X_p)``.
    """
    chain = list(chain)[:depth + 1]
    if len(chain) != depth + 1:
        raise ColimitError("chain shorter than the requested depth")
    for n, u in enumerate(chain):
        if not is_open_in(seq.stage(n), u):
            raise NotOpen(f"chain member {n} is not open in its stage")
        if n and not contains(u, chain[n - 1]):
            raise ColimitError(f"chain is not ascending at {n}")
    stages = []
    for p in range(depth + 1):
        space = seq.stage(p)
        stages.append(clip(space, union(*chain[p:])))
    return explicit_family(stages)


@dataclass(frozen=True)
class ChainWitness:
    u_chain: tuple[BoxUnion, ...]
    v_chain: tuple[BoxUnion, ...]
    evidence: tuple[tuple[WayBelowVerdict, InterpolationTrace | None], ...]
    point: tuple[tuple[Fraction, ...], tuple[Fraction, ...]]
    depth: int

    def to_json(self):
        from .codec import point_to_json, union_to_json
        return {
            "depth": self.depth,
            "point": [point_to_json(self.point[0]), point_to_json(self.point[1])],
            "u_chain": [union_to_json(u) for u in self.u_chain],
            "v_chain": [union_to_json(v) for v in self.v_chain],
            "evidence": [{"way_below": v.to_json(), "trace": tr.to_json() if tr else None}
                         for v, tr in self.evidence],
        }


def build_chain(seq_x: AscendingSequence, seq_y: AscendingSequence, w: ColimitOpen, x, y,
                depth: int, max_refine: int = 4) -> ChainWitness:
    """Rectangles ``U_n × V_n ≪ W_n`` around ``(x, y)``, ascending in ``n``.

    Stage 0 comes from core-compactness of ``X_0 × Y_0``; each later stage
    interpolates the previous rectangle inside ``W_{n+1}``.
    """
    x = tuple(rat(v) for v in x)
    y = tuple(rat(v) for v in y)
    seq = ProductSequence(seq_x, seq_y)
    if depth > seq.max_depth or depth > w.max_depth:
        raise DepthExceeded("depth beyond the sequences' max depth")
    stage0 = seq.stage(0)
    if not in_carrier(stage0, x + y) or not member(x + y, w.stage_open(0)):
        raise PointOutside("(x, y) is not in W_0")
    bad = check_open_upto(seq, w, depth)
    if bad is not None:
        raise NotOpen(f"W is not a coherent open family at stage {bad}")
    dx = len(x)
    rect = core_compact_witness(stage0, x + y, w.stage_open(0)).boxes[0]
    u = clip(seq_x.stage(0), BoxUnion(dx, (Box(rect.dims[:dx]),)))
    v = clip(seq_y.stage(0), BoxUnion(len(y), (Box(rect.dims[dx:]),)))
    us, vs = [u], [v]
    evidence = [(way_below(stage0, product_open(u, v), w.stage_open(0)), None)]
    for n in range(1, depth + 1):
        xs, ys = seq_x.stage(n), seq_y.stage(n)
        try:
            res = interpolate(xs, ys, us[-1], vs[-1], w.stage_open(n), max_refine=max_refine)
        except Inconclusive as exc:
            raise ChainError(f"interpolation inconclusive at stage {n}", stage=n) from exc
        u, v = clip(xs, res.u_s), clip(ys, res.v_t)
        us.append(u)
        vs.append(v)
        evidence.append((way_below(seq.stage(n), product_open(u, v), w.stage_open(n)), res.trace))
    return ChainWitness(tuple(us), tuple(vs), tuple(evidence), (x, y), depth)


def verify_chain(witness: ChainWitness, seq_x: AscendingSequence, seq_y: AscendingSequence,
                 w: ColimitOpen) -> list[str]:
    """Every chain invariant, re-checked from scratch; returns the failures."""
    problems = []
    x, y = witness.point
    for n in range(witness.depth + 1):
        xs, ys = seq_x.stage(n), seq_y.stage(n)
        u, v = witness.u_chain[n], witness.v_chain[n]
        if not (member(x, u) and member(y, v)):
            problems.append(f"stage {n}: point not in U_n × V_n")
        if not (is_open_in(xs, u) and is_open_in(ys, v)):
            problems.append(f"stage {n}: U_n or V_n not open")
        if not way_below(Product(xs, ys), product_open(u, v), w.stage_open(n)).holds:
            problems.append(f"stage {n}: U_n × V_n not way-below W_n")
        if not witness.evidence[n][0].holds:
            problems.append(f"stage {n}: recorded evidence is negative")
        if n and not (contains(u, witness.u_chain[n - 1]) and contains(v, witness.v_chain[n - 1])):
            problems.append(f"stage {n}: chain not ascending")
    return problems


def first_stage(seq: ProductSequence, w: ColimitOpen, point, depth: int) -> int | None:
    for k in range(depth + 1):
        if in_carrier(seq.stage(k), point) and member(point, w.stage_open(k)):
            return k
    return None


@dataclass
class ProbeResult:
    point: tuple
    status: str
    first_stage: int | None = None
    problems: list = field(default_factory=list)

    def to_json(self):
        from .codec import point_to_json
        return {"point": [point_to_json(self.point[0]), point_to_json(self.point[1])],
                "status": self.status, "first_stage": self.first_stage, "problems": self.problems}


def rectangle_cover_check(seq_x: AscendingSequence, seq_y: AscendingSequence, w: ColimitOpen,
                          probes, depth: int) -> list[ProbeResult]:
    """For each probe of ``W``, a rectangle ``U × V`` of the union with ``probe ∈ U × V ⊆ W``.

    Probes first met at stage ``k`` are handled by re-indexing both
    sequences from ``k``.  Probes outside ``W_depth`` are skipped.
    """
    seq = ProductSequence(seq_x, seq_y)
    bad = check_open_upto(seq, w, depth)
    if bad is not None:
        raise NotOpen(f"W is not a coherent open family at stage {bad}")
    report = []
    for x, y in probes:
        x = tuple(rat(v) for v in x)
        y = tuple(rat(v) for v in y)
        k = first_stage(seq, w, x + y, depth)
        if k is None:
            report.append(ProbeResult((x, y), "skipped"))
            continue
        sx, sy, sw = seq_x.shifted(k), seq_y.shifted(k), w.shifted(k)
        n_top = depth - k
        witness = build_chain(sx, sy, sw, x, y, n_top)
        problems = verify_chain(witness, sx, sy, sw)
        u_fam = chain_union(sx, witness.u_chain, n_top)
        v_fam = chain_union(sy, witness.v_chain, n_top)
        for fam, sq in ((u_fam, sx), (v_fam, sy)):
            bad = check_open_upto(sq, fam, n_top)
            if bad is not None:
                problems.append(f"stage {bad + k}: union of the chain is not open")
        for p in range(n_top + 1):
            u_p, v_p = u_fam.stage_open(p), v_fam.stage_open(p)
            if not (member(x, u_p) and member(y, v_p)):
                problems.append(f"stage {p + k}: probe not in U × V")
            space = ProductSequence(sx, sy).stage(p)
            if not contains(clip(space, sw.stage_open(p)), clip(space, product_open(u_p, v_p))):
                problems.append(f"stage {p + k}: U × V leaves W")
        report.append(ProbeResult((x, y), "failed" if problems else "passed", k, problems))
    return report

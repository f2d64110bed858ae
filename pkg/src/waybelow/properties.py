"""Seeded law battery over the relation, interpolation and colimit modules.

Each law is a function of one random case.  It returns whether the law's
premise held (so a report can tell vacuous passes apart) and raises
:class:`LawViolation` with a JSON counterexample when the conclusion fails.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import codec
from .colimit import (AscendingSequence, ColimitOpen, ProductSequence, build_chain, chain_union,
                      check_open_upto, first_stage, verify_chain)
from .generators import (ascending_open_chain, case_rng, cell_samples, inner_box, interpolation_instance,
                         rand_box, rand_open, rand_rat, rand_set, subset_of)
from .geometry import Box, BoxUnion, contains, intersect, member, normalize, point_interval, union
from .interpolation import check_interpolation, interpolate
from .relation import core_compact_witness, oracle_way_below, way_below
from .spaces import EuclideanBox, EuclideanFull, Product, RationalTrace, clip, in_carrier, product_open, project

COLIMIT_CASE_CAP = 20


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    case_count: int = 200
    depth: int = 8
    oracle_budget: int = 50


class LawViolation(AssertionError):
    def __init__(self, message: str, instance: dict):
        super().__init__(message)
        self.instance = instance


def _u(u: BoxUnion) -> dict:
    return codec.union_to_json(u)


def _space(rng, d: int, rational: float = 0.0):
    roll = rng.random()
    if roll < rational:
        return RationalTrace(d, rand_box(rng, d, opened=False))
    if roll < rational + (1 - rational) / 2:
        return EuclideanFull(d)
    return EuclideanBox(Box(tuple(rand_box(rng, 1, opened=False).dims[0].closure() for _ in range(d))))


def _below_set(rng, space, t: BoxUnion) -> BoxUnion:
    """Usually a set with closure inside ``t``; sometimes an arbitrary one."""
    if isinstance(space, RationalTrace) and rng.random() < 0.5:
        pts = [b.sample() for b in t.nonempty_boxes()]
        return BoxUnion(t.dim, tuple(Box(tuple(point_interval(v) for v in p)) for p in pts))
    if rng.random() < 0.6:
        boxes = t.nonempty_boxes()
        return BoxUnion(t.dim, tuple(inner_box(rng, b) for b in rng.sample(boxes, rng.randint(1, len(boxes)))))
    return rand_set(rng, t.dim)


def _instance(space, **sets) -> dict:
    out = {"space": codec.space_to_json(space)}
    out.update({k: _u(v) for k, v in sets.items()})
    return out


# way-below laws -----------------------------------------------------------

def law_right_monotonicity(rng, cfg):
    d = rng.choice((1, 2))
    space = _space(rng, d, rational=0.15)
    t = rand_open(rng, d)
    s = _below_set(rng, space, t)
    q = union(t, rand_open(rng, d))
    if not way_below(space, s, t).holds:
        return False
    if not way_below(space, s, q).holds:
        raise LawViolation("s ≪ t and t ⊆ q but not s ≪ q", _instance(space, s=s, t=t, q=q))
    return True


def law_left_monotonicity(rng, cfg):
    d = rng.choice((1, 2))
    space = _space(rng, d, rational=0.15)
    t = rand_open(rng, d)
    s = _below_set(rng, space, t)
    r = subset_of(rng, s)
    if not contains(s, r) or not way_below(space, s, t).holds:
        return False
    if not way_below(space, r, t).holds:
        raise LawViolation("r ⊆ s ≪ t but not r ≪ t", _instance(space, r=r, s=s, t=t))
    return True


def law_finite_unions(rng, cfg):
    d = rng.choice((1, 2))
    space = _space(rng, d, rational=0.15)
    t = rand_open(rng, d)
    parts = [_below_set(rng, space, t) for _ in range(3)]
    if not all(way_below(space, s, t).holds for s in parts):
        return False
    if not way_below(space, union(*parts), t).holds:
        raise LawViolation("each s_i ≪ t but not their union",
                           _instance(space, t=t, s1=parts[0], s2=parts[1], s3=parts[2]))
    return True


def law_basis(rng, cfg):
    d = rng.choice((1, 2))
    space = _space(rng, d)
    w = clip(space, rand_open(rng, d))
    for p in cell_samples(w):
        u = core_compact_witness(space, p, w)
        if not member(p, u) or not way_below(space, u, w).holds:
            inst = _instance(space, w=w, u=u)
            inst["point"] = codec.point_to_json(p)
            raise LawViolation("basis open around a cell sample is not way-below w", inst)
    return not w.is_empty


def law_projection_image(rng, cfg):
    x_space, y_space = _space(rng, 1), _space(rng, 1)
    prod = Product(x_space, y_space)
    w = rand_open(rng, 2)
    host = Box((rand_box(rng, 1).dims[0], rand_box(rng, 1).dims[0]))
    if rng.random() < 0.7:
        host = w.boxes[0]
    s = BoxUnion(1, (inner_box(rng, Box(host.dims[:1])),))
    t = BoxUnion(1, (inner_box(rng, Box(host.dims[1:])),))
    st = product_open(s, t)
    if not way_below(prod, st, w).holds:
        return False
    for side, space in (("left", x_space), ("right", y_space)):
        if not way_below(space, project(prod, st, side), project(prod, w, side)).holds:
            raise LawViolation(f"{side} projection of s × t is not way-below the projection of w",
                               _instance(prod, s=s, t=t, w=w))
    return True


def law_product_core_compactness(rng, cfg):
    prod = Product(_space(rng, 1), _space(rng, 1))
    w = clip(prod, rand_open(rng, 2))
    probes = cell_samples(w)
    for p in probes:
        u = core_compact_witness(prod, p, w)
        if not member(p, u) or not way_below(prod, u, w).holds:
            inst = _instance(prod, w=w, u=u)
            inst["point"] = codec.point_to_json(p)
            raise LawViolation("no way-below neighbourhood found in the product", inst)
    return bool(probes)


def law_oracle_agreement(rng, cfg):
    d = rng.choice((1, 2))
    space = _space(rng, d)
    t = rand_open(rng, d)
    s = _below_set(rng, space, t)
    got = oracle_way_below(space, s, t, budget=cfg.oracle_budget)
    if got.holds is None:
        return False
    if got.holds != way_below(space, s, t).holds:
        inst = _instance(space, s=s, t=t)
        inst["oracle"] = got.holds
        raise LawViolation("decision procedure and cover oracle disagree", inst)
    return True


# interpolation laws -------------------------------------------------------

_LINE = EuclideanFull(1)


@lru_cache(maxsize=1024)
def _interpolation_case(seed: int, index: int):
    rng = case_rng(seed, "interpolation", index)
    s, t, w = interpolation_instance(rng)
    return s, t, w, interpolate(_LINE, _LINE, s, t, w)


def _interp_instance(s, t, w) -> dict:
    return {"s": _u(s), "t": _u(t), "w": _u(w)}


def replay_json(doc: dict) -> tuple[BoxUnion, BoxUnion]:
    """Rebuild ``(U_S, V_T)`` from a serialized trace, using only set operations."""
    if not doc["per_cell"]:
        nb = doc["neighbourhood_t"]
        return BoxUnion(1), codec.union_from_json(nb) if nb else BoxUnion(1)
    chosen = [doc["per_cell"][i] for i in doc["second_pass"]]
    u_boxes = [codec.box_from_json(c["u_c"]) for c in chosen]
    u_s = normalize(BoxUnion(u_boxes[0].dim, tuple(u_boxes)))
    v_t = codec.union_from_json(chosen[0]["v_c"])
    for c in chosen[1:]:
        v_t = intersect(v_t, codec.union_from_json(c["v_c"]))
    return u_s, normalize(v_t)


def law_round_trip(seed, index, cfg):
    s, t, w, res = _interpolation_case(seed, index)
    if replay_json(res.trace.to_json()) != (res.u_s, res.v_t):
        raise LawViolation("serialized trace does not replay to (U_S, V_T)", _interp_instance(s, t, w))
    return True


def law_idempotent_strengthening(seed, index, cfg):
    s, t, w, res = _interpolation_case(seed, index)
    again = interpolate(_LINE, _LINE, res.u_s, res.v_t, w)
    problems = check_interpolation(_LINE, _LINE, res.u_s, res.v_t, w, again)
    if problems:
        raise LawViolation("; ".join(problems), _interp_instance(res.u_s, res.v_t, w))
    return True


def law_shrinking_keeps_input(seed, index, cfg):
    s, t, w, res = _interpolation_case(seed, index)
    if not (contains(res.u_s, s) and contains(res.v_t, t)):
        raise LawViolation("U_S × V_T lost part of S × T", _interp_instance(s, t, w))
    return True


def law_interpolation_contract(seed, index, cfg):
    s, t, w, res = _interpolation_case(seed, index)
    problems = check_interpolation(_LINE, _LINE, s, t, w, res)
    if problems:
        raise LawViolation("; ".join(problems), _interp_instance(s, t, w))
    return True


# colimit laws -------------------------------------------------------------

def colimit_instance(seed: int, index: int, depth: int):
    """Growing-box sequences with either the diagonal strip or a random ascending open."""
    rng = case_rng(seed, "colimit", index)
    radius = Fraction(rng.randint(2, 4), 2)
    step = Fraction(rng.randint(1, 2), 2)
    sx = AscendingSequence("growing_box", 1, radius, step, max_depth=depth)
    sy = AscendingSequence("growing_box", 1, radius, step, max_depth=depth)
    seq = ProductSequence(sx, sy)
    if rng.random() < 0.3:
        w = ColimitOpen("staircase", max_depth=depth, radius=radius, step=step)
        point = (rand_rat(rng, -1, 1, 4),) * 2
    else:
        chain = ascending_open_chain(rng, 2, depth, Fraction(1, 2))
        w = chain_union(seq, chain, depth)
        point = chain[0].boxes[0].sample()
    return sx, sy, w, point


@lru_cache(maxsize=64)
def _chain_case(seed: int, index: int, depth: int):
    sx, sy, w, p = colimit_instance(seed, index, depth)
    return sx, sy, w, p, build_chain(sx, sy, w, p[:1], p[1:], depth)


def _colimit_json(sx, sy, w, p) -> dict:
    return {"seq_x": codec.sequence_to_json(sx), "seq_y": codec.sequence_to_json(sy),
            "w": codec.family_to_json(w), "point": codec.point_to_json(p)}


def law_chain_invariants(seed, index, cfg):
    sx, sy, w, p, wit = _chain_case(seed, index, cfg.depth)
    problems = verify_chain(wit, sx, sy, w)
    if problems:
        raise LawViolation("; ".join(problems), _colimit_json(sx, sy, w, p))
    return True


def law_chain_union_open(seed, index, cfg):
    sx, sy, w, p, wit = _chain_case(seed, index, cfg.depth)
    for seq, chain in ((sx, wit.u_chain), (sy, wit.v_chain)):
        bad = check_open_upto(seq, chain_union(seq, chain, cfg.depth), cfg.depth)
        if bad is not None:
            raise LawViolation(f"union of the chain fails openness at stage {bad}", _colimit_json(sx, sy, w, p))
    return True


def law_stage_zero_reduction(seed, index, cfg):
    sx, sy, w, _ = colimit_instance(seed, index, cfg.depth)
    seq = ProductSequence(sx, sy)
    top = clip(seq.stage(cfg.depth), w.stage_open(cfg.depth))
    late = [(k, q) for q in cell_samples(top)
            if (k := first_stage(seq, w, q, cfg.depth)) is not None and k > 0]
    if not late:
        return False
    k, q = late[len(late) // 2]
    shifted = (sx.shifted(k), sy.shifted(k), w.shifted(k))
    wit = build_chain(*shifted, q[:1], q[1:], cfg.depth - k)
    problems = verify_chain(wit, *shifted)
    if problems or not in_carrier(seq.stage(k), q):
        raise LawViolation("; ".join(problems) or "probe outside its first stage", _colimit_json(sx, sy, w, q))
    return True


def law_chain_determinism(seed, index, cfg):
    sx, sy, w, p, wit = _chain_case(seed, index, cfg.depth)
    again = build_chain(sx, sy, w, p[:1], p[1:], cfg.depth)
    if codec.dumps(again.to_json()) != codec.dumps(wit.to_json()):
        raise LawViolation("rebuilding the chain changed it", _colimit_json(sx, sy, w, p))
    return True


def law_ascending_union_open(seed, index, cfg):
    rng = case_rng(seed, "ascending", index)
    d = rng.choice((1, 2))
    seq = AscendingSequence("growing_box", d, Fraction(rng.randint(1, 4), 2), Fraction(rng.randint(0, 2), 2),
                            max_depth=cfg.depth)
    chain = ascending_open_chain(rng, d, cfg.depth, Fraction(rng.randint(0, 2), 2))
    fam = chain_union(seq, chain, cfg.depth)
    bad = check_open_upto(seq, fam, cfg.depth)
    if bad is not None:
        raise LawViolation(f"union of an ascending chain fails at stage {bad}",
                           {"seq": codec.sequence_to_json(seq), "chain": [_u(u) for u in chain]})
    return True


# runner -------------------------------------------------------------------

RNG_LAWS = (
    ("waybelow", "right_monotonicity", law_right_monotonicity),
    ("waybelow", "left_monotonicity", law_left_monotonicity),
    ("waybelow", "finite_unions", law_finite_unions),
    ("waybelow", "basis", law_basis),
    ("waybelow", "projection_image", law_projection_image),
    ("waybelow", "product_core_compactness", law_product_core_compactness),
)
ORACLE_LAW = ("waybelow", "oracle_agreement", law_oracle_agreement)
INTERPOLATION_LAWS = (
    ("interpolation", "round_trip", law_round_trip),
    ("interpolation", "idempotent_strengthening", law_idempotent_strengthening),
    ("interpolation", "shrinking_keeps_input", law_shrinking_keeps_input),
    ("interpolation", "interpolation_contract", law_interpolation_contract),
)
COLIMIT_LAWS = (
    ("colimit", "chain_invariants", law_chain_invariants),
    ("colimit", "chain_union_open", law_chain_union_open),
    ("colimit", "stage_zero_reduction", law_stage_zero_reduction),
    ("colimit", "chain_determinism", law_chain_determinism),
    ("colimit", "ascending_union_open", law_ascending_union_open),
)


def _run_law(module, name, cases, run_case) -> dict:
    entry = {"module": module, "law": name, "cases": cases, "premise_held": 0,
             "passed": True, "counterexample": None}
    for i in range(cases):
        try:
            if run_case(i):
                entry["premise_held"] += 1
        except LawViolation as exc:
            entry.update(passed=False, counterexample={"case": i, "reason": str(exc), "instance": exc.instance})
            break
        except Exception as exc:  # noqa: BLE001 - any crash is a law failure worth reporting
            entry.update(passed=False, counterexample={"case": i, "reason": f"{type(exc).__name__}: {exc}"})
            break
    if cases == 0:
        entry["note"] = "zero cases: vacuous pass"
    return entry


def run_rng_law(law, cfg: RunConfig, cases: int | None = None) -> dict:
    module, name, fn = law
    n = cfg.case_count if cases is None else cases
    return _run_law(module, name, n, lambda i: fn(case_rng(cfg.seed, name, i), cfg))


def run_indexed_law(law, cfg: RunConfig, cases: int) -> dict:
    module, name, fn = law
    return _run_law(module, name, cases, lambda i: fn(cfg.seed, i, cfg))


def run_properties(cfg: RunConfig = RunConfig(), modules=("waybelow", "interpolation", "colimit")) -> dict:
    laws = []
    if "waybelow" in modules:
        laws += [run_rng_law(law, cfg) for law in RNG_LAWS]
        oracle = run_rng_law(ORACLE_LAW, cfg)
        oracle["conclusive"] = oracle.pop("premise_held")
        laws.append(oracle)
    if "interpolation" in modules:
        laws += [run_indexed_law(law, cfg, cfg.case_count) for law in INTERPOLATION_LAWS]
    if "colimit" in modules:
        capped = min(cfg.case_count, COLIMIT_CASE_CAP)
        for law in COLIMIT_LAWS:
            n = cfg.case_count if law[1] == "ascending_union_open" else capped
            laws.append(run_indexed_law(law, cfg, n))
    return {"kind": "properties", "seed": cfg.seed, "case_count": cfg.case_count, "depth": cfg.depth,
            "oracle_budget": cfg.oracle_budget, "laws": laws, "all_passed": all(e["passed"] for e in laws)}

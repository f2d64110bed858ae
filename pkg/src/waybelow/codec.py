"""JSON encoding of rationals, box unions and spaces.

Rationals are always written as ``"p/q"`` strings so that documents are
exact and byte-stable.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .geometry import Box, BoxUnion, Interval, rat, rat_str
from .spaces import EuclideanBox, EuclideanFull, Product, RationalTrace, Space

SCHEMA = "waybelow/1"


class CodecError(ValueError):
    pass


def interval_to_json(iv: Interval) -> dict:
    return {"lo": rat_str(iv.lo), "hi": rat_str(iv.hi), "lo_open": iv.lo_open, "hi_open": iv.hi_open}


def interval_from_json(obj) -> Interval:
    try:
        return Interval(rat(obj["lo"]), rat(obj["hi"]), bool(obj["lo_open"]), bool(obj["hi_open"]))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise CodecError(f"bad interval {obj!r}") from exc


def box_to_json(b: Box) -> list:
    return [interval_to_json(iv) for iv in b.dims]


def box_from_json(obj) -> Box:
    if not isinstance(obj, list) or not obj:
        raise CodecError(f"bad box {obj!r}")
    return Box(tuple(interval_from_json(iv) for iv in obj))


def union_to_json(u: BoxUnion) -> dict:
    return {"dim": u.dim, "boxes": [box_to_json(b) for b in u.boxes]}


def union_from_json(obj) -> BoxUnion:
    try:
        return BoxUnion(int(obj["dim"]), tuple(box_from_json(b) for b in obj["boxes"]))
    except (KeyError, TypeError) as exc:
        raise CodecError(f"bad box union {obj!r}") from exc


def point_to_json(p) -> list:
    return [rat_str(rat(v)) for v in p]


def point_from_json(obj) -> tuple[Fraction, ...]:
    if isinstance(obj, (str, int)):
        obj = [obj]
    try:
        return tuple(rat(v) for v in obj)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise CodecError(f"bad point {obj!r}") from exc


def space_to_json(space: Space) -> dict:
    if isinstance(space, EuclideanFull):
        return {"kind": "euclidean_full", "dim": space.d}
    if isinstance(space, EuclideanBox):
        return {"kind": "euclidean_box", "carrier": box_to_json(space.carrier)}
    if isinstance(space, RationalTrace):
        return {"kind": "rational_trace", "dim": space.d, "carrier": box_to_json(space.carrier)}
    return {"kind": "product", "left": space_to_json(space.left), "right": space_to_json(space.right)}


def space_from_json(obj) -> Space:
    kind = obj.get("kind") if isinstance(obj, dict) else None
    if kind == "euclidean_full":
        return EuclideanFull(int(obj["dim"]))
    if kind == "euclidean_box":
        return EuclideanBox(box_from_json(obj["carrier"]))
    if kind == "rational_trace":
        carrier = box_from_json(obj["carrier"])
        return RationalTrace(int(obj.get("dim", carrier.dim)), carrier)
    if kind == "product":
        return Product(space_from_json(obj["left"]), space_from_json(obj["right"]))
    raise CodecError(f"unknown space {obj!r}")


def dumps(doc: dict) -> str:
    """Serialize a report with the schema tag first."""
    return json.dumps({"schema": SCHEMA, **doc}, indent=2, ensure_ascii=False)


def load_file(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _rats(values) -> list:
    return [rat_str(rat(v)) for v in values]


def sequence_to_json(seq) -> dict:
    out = {"kind": seq.kind, "dim": seq.dim, "max_depth": seq.max_depth}
    if seq.kind == "growing_box":
        out.update(radius=rat_str(seq.radius), step=rat_str(seq.step))
    if seq.kind == "constant_box":
        out["carrier"] = box_to_json(seq.carrier)
    if seq.offset:
        out["offset"] = seq.offset
    return out


def sequence_from_json(obj):
    from .colimit import AscendingSequence
    try:
        kind = obj["kind"]
        carrier = box_from_json(obj["carrier"]) if kind == "constant_box" else None
        dim = int(obj.get("dim", carrier.dim if carrier else 1))
        return AscendingSequence(kind, dim, rat(obj.get("radius", 1)), rat(obj.get("step", 1)),
                                 carrier, int(obj.get("max_depth", 8)), int(obj.get("offset", 0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise CodecError(f"bad sequence {obj!r}: {exc}") from exc


def family_to_json(fam) -> dict:
    out = {"kind": fam.kind, "max_depth": fam.max_depth}
    if fam.kind == "explicit":
        out["stages"] = [union_to_json(u) for u in fam.stages]
    elif fam.kind in ("full", "staircase"):
        out.update(dim=fam.dim, radius=rat_str(rat(fam.radius)), step=rat_str(rat(fam.step)))
    else:
        out.update(lo=_rats(fam.lo), lo_step=_rats(fam.lo_step), hi=_rats(fam.hi),
                   hi_step=_rats(fam.hi_step), lo_open=list(fam.lo_open), hi_open=list(fam.hi_open))
    if fam.offset:
        out["offset"] = fam.offset
    return out


def family_from_json(obj):
    from .colimit import ColimitOpen
    try:
        kind = obj["kind"]
        if kind == "explicit":
            stages = tuple(union_from_json(u) for u in obj["stages"])
            return ColimitOpen("explicit", int(obj.get("max_depth", len(stages) - 1)), stages,
                               offset=int(obj.get("offset", 0)))
        common = {"max_depth": int(obj.get("max_depth", 8)), "offset": int(obj.get("offset", 0))}
        if kind in ("full", "staircase"):
            return ColimitOpen(kind, dim=int(obj.get("dim", 2)), radius=rat(obj.get("radius", 1)),
                               step=rat(obj.get("step", 1)), **common)
        if kind == "affine":
            n = len(obj["lo"])
            return ColimitOpen("affine", lo=tuple(rat(v) for v in obj["lo"]),
                               lo_step=tuple(rat(v) for v in obj.get("lo_step", [0] * n)),
                               hi=tuple(rat(v) for v in obj["hi"]),
                               hi_step=tuple(rat(v) for v in obj.get("hi_step", [0] * n)),
                               lo_open=tuple(bool(v) for v in obj.get("lo_open", [True] * n)),
                               hi_open=tuple(bool(v) for v in obj.get("hi_open", [True] * n)), **common)
    except (KeyError, TypeError, ValueError) as exc:
        raise CodecError(f"bad family {obj!r}: {exc}") from exc
    raise CodecError(f"unknown family rule {obj.get('kind')!r}")

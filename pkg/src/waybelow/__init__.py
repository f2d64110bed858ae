"""Exact way-below decisions, product interpolation and colimit neighbourhood chains."""
from .colimit import (AscendingSequence, ChainWitness, ColimitOpen, build_chain, chain_union, check_open_at,
                      rectangle_cover_check, verify_chain)
from .counterexamples import PiBounds, a_membership, not_closed_demo, product_limit_witness, stage_separation_witness
from .geometry import Box, BoxUnion, Interval, box, closed_interval, contains, open_interval, point_interval
from .interpolation import check_interpolation, interpolate, replay_trace
from .properties import RunConfig, run_properties
from .relation import CoverFamily, core_compact_witness, oracle_way_below, verify_refutation, way_below
from .spaces import EuclideanBox, EuclideanFull, Product, RationalTrace, is_open_in

__all__ = [
    "AscendingSequence",
    "ChainWitness",
    "ColimitOpen",
    "build_chain",
    "chain_union",
    "check_open_at",
    "rectangle_cover_check",
    "verify_chain",
    "PiBounds",
    "a_membership",
    "not_closed_demo",
    "product_limit_witness",
    "stage_separation_witness",
    "Box",
    "BoxUnion",
    "Interval",
    "box",
    "closed_interval",
    "contains",
    "open_interval",
    "point_interval",
    "check_interpolation",
    "interpolate",
    "replay_trace",
    "RunConfig",
    "run_properties",
    "CoverFamily",
    "core_compact_witness",
    "oracle_way_below",
    "verify_refutation",
    "way_below",
    "EuclideanBox",
    "EuclideanFull",
    "Product",
    "RationalTrace",
    "is_open_in",
]

__version__ = "0.1.0"

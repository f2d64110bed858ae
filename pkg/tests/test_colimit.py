import random
from fractions import Fraction as F

import pytest

from conftest import brute_member
from waybelow.colimit import (AscendingSequence, ChainError, ColimitError, ColimitOpen, DepthExceeded,
                              ProductSequence, build_chain, chain_union, check_open_at, check_open_upto,
                              explicit_family, rectangle_cover_check, verify_chain)
from waybelow.generators import ascending_open_chain
from waybelow.geometry import Box, BoxUnion, Interval, closed_interval, contains, open_interval
from waybelow.relation import NotOpen, PointOutside
from waybelow.spaces import clip, product_open

o = open_interval
c = closed_interval
GROW = AscendingSequence("growing_box", 1, 1, 1, max_depth=8)


def line(*ivs):
    return BoxUnion(1, tuple(Box((iv,)) for iv in ivs))


def staircase():
    return ColimitOpen("staircase", max_depth=8)


def test_sequence_stages_grow():
    assert GROW.stage(0).carrier == Box((c(-1, 1),))
    assert GROW.stage(3).carrier == Box((c(-4, 4),))
    with pytest.raises(DepthExceeded):
        GROW.stage(9)
    assert GROW.shifted(2).stage(0) == GROW.stage(2)


def test_empty_family_is_open():
    fam = explicit_family([BoxUnion(1)] * 9)
    assert all(check_open_at(GROW, fam, p) for p in range(9))


def test_growing_open_intervals():
    # each (-n, n) is open in [-n-1, n+1], yet the traces disagree:
    # W_{n+1} ∩ X_n = (-n-1, n+1) while W_n = (-n, n)
    fam = ColimitOpen("affine", lo=(F(0),), lo_step=(F(-1),), hi=(F(0),), hi_step=(F(1),),
                      lo_open=(True,), hi_open=(True,))
    assert check_open_at(GROW, fam, 0)
    assert not check_open_at(GROW, fam, 5)
    # the union of that ascending chain is a genuine open of the colimit
    chain = [fam.stage_open(n) for n in range(9)]
    union_fam = chain_union(GROW, chain, 8)
    assert check_open_upto(GROW, union_fam, 8) is None
    assert check_open_at(GROW, union_fam, 5)


def test_closed_left_face_is_rejected_from_stage_one():
    full = AscendingSequence("full", 1, max_depth=8)
    fam = ColimitOpen("affine", lo=(F(0),), lo_step=(F(0),), hi=(F(0),), hi_step=(F(1),),
                      lo_open=(False,), hi_open=(True,))
    assert check_open_at(full, fam, 0)  # [0, 0) is empty
    assert not any(check_open_at(full, fam, p) for p in range(1, 9))


def test_chain_union_examples():
    assert chain_union(GROW, [BoxUnion(1)] * 9, 8).stage_open(3).is_empty
    chain = [line(o(-1 + F(1, n + 2), 1 - F(1, n + 2))) for n in range(9)]
    fam = chain_union(GROW, chain, 8)
    for p in range(9):
        assert fam.stage_open(p) == line(o(-1 + F(1, 10), 1 - F(1, 10)))
        assert check_open_at(GROW, fam, p)
    with pytest.raises(ColimitError):
        chain_union(GROW, list(reversed(chain)), 8)
    with pytest.raises(NotOpen):
        chain_union(GROW, [line(c(0, 1))] * 9, 8)


def test_random_ascending_chains_give_open_unions():
    rng = random.Random(11)
    for _ in range(10):
        d = rng.choice((1, 2))
        seq = AscendingSequence("growing_box", d, F(1, 2), F(1, 2), max_depth=8)
        chain = ascending_open_chain(rng, d, 8, F(1, 2))
        fam = chain_union(seq, chain, 8)
        assert check_open_upto(seq, fam, 8) is None
        # an independent look at coherence: W_p and W_{p+1} agree on sampled points of X_p
        for p in range(8):
            r = 1 + F(p, 2) - F(1, 2)
            for _ in range(20):
                q = tuple(F(rng.randint(-32, 32), 32) * r for _ in range(d))
                assert brute_member(q, fam.stage_open(p)) == brute_member(q, fam.stage_open(p + 1))


def test_chain_with_full_family():
    w = ColimitOpen("full", dim=2)
    wit = build_chain(GROW, GROW, w, (0,), (0,), 8)
    assert verify_chain(wit, GROW, GROW, w) == []
    for n in range(1, 9):
        assert contains(wit.u_chain[n], wit.u_chain[n - 1])
    assert wit.u_chain == wit.v_chain


def test_chain_hugging_the_diagonal():
    w = staircase()
    wit = build_chain(GROW, GROW, w, (0,), (0,), 8)
    assert verify_chain(wit, GROW, GROW, w) == []
    seq = ProductSequence(GROW, GROW)
    top = product_open(wit.u_chain[8], wit.v_chain[8])
    assert contains(clip(seq.stage(8), w.stage_open(8)), clip(seq.stage(8), top))


def test_chain_rejects_points_outside_w0():
    with pytest.raises(PointOutside):
        build_chain(GROW, GROW, staircase(), (F(1),), (F(-1),), 3)


def test_chain_rejects_incoherent_families():
    fam = ColimitOpen("affine", lo=(F(-1), F(-1)), lo_step=(F(-1), F(-1)), hi=(F(1), F(1)),
                      hi_step=(F(1), F(1)), lo_open=(True, True), hi_open=(True, True))
    with pytest.raises(NotOpen):
        build_chain(GROW, GROW, fam, (0,), (0,), 3)


def test_chain_reports_the_failing_stage():
    with pytest.raises(ChainError) as info:
        # max_refine=0 allows no refinement level at all
        build_chain(GROW, GROW, staircase(), (0,), (0,), 2, max_refine=0)
    assert info.value.stage == 1


def test_rectangle_cover_check():
    assert rectangle_cover_check(GROW, GROW, staircase(), [], 8) == []
    rng = random.Random(5)
    probes = []
    while len(probes) < 5:
        x = F(rng.randint(-40, 40), 8)
        y = x + F(rng.randint(-3, 3), 8)
        probes.append(((x,), (y,)))
    report = rectangle_cover_check(GROW, GROW, staircase(), probes, 8)
    assert [r.status for r in report] == ["passed"] * 5
    far = rectangle_cover_check(GROW, GROW, staircase(), [((F(0),), (F(5),))], 8)
    assert far[0].status == "skipped"


def test_stage_zero_reduction():
    probe = ((F(5),), (F(19, 4),))
    report = rectangle_cover_check(GROW, GROW, staircase(), [probe], 8)
    assert report[0].status == "passed" and report[0].first_stage == 4


def test_determinism():
    a = build_chain(GROW, GROW, staircase(), (F(1, 3),), (F(1, 2),), 4)
    b = build_chain(GROW, GROW, staircase(), (F(1, 3),), (F(1, 2),), 4)
    assert a.to_json() == b.to_json()


def test_interval_flags_in_affine_family():
    fam = ColimitOpen("affine", lo=(F(0),), lo_step=(F(0),), hi=(F(1),), hi_step=(F(0),),
                      lo_open=(True,), hi_open=(False,))
    assert fam.stage_open(2).boxes[0].dims[0] == Interval(0, 1, True, False)

from decimal import Decimal, getcontext
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import boxes, brute_member, critical_probes, rationals, unions
from waybelow.geometry import Box, BoxUnion, Interval, closed_interval, closure, contains, open_interval
from waybelow.relation import (CoverFamily, NonCoreCompact, NotOpen, PinnedIrrational, PointOutside,
                               SubcoverSelector, UnsupportedSpace, core_compact_witness, oracle_way_below,
                               verify_refutation, way_below)
from waybelow.spaces import EuclideanBox, EuclideanFull, Product, RationalTrace, in_carrier, is_open_in

o = open_interval
c = closed_interval
R1 = EuclideanFull(1)
getcontext().prec = 60
SQRT2 = Decimal(2).sqrt()


def line(*ivs):
    return BoxUnion(1, tuple(Box((iv,)) for iv in ivs))


def dec(q: F) -> Decimal:
    return Decimal(q.numerator) / Decimal(q.denominator)


# decision ------------------------------------------------------------------

def test_empty_set_is_way_below_everything():
    v = way_below(R1, BoxUnion(1), line(o(0, 5)))
    assert v.holds and v.certificate.kind == "empty"


def test_closure_inside_target():
    v = way_below(R1, line(o(0, 1)), line(o(-1, 2)))
    assert v.holds
    assert v.certificate.compact == line(c(0, 1))


def test_touching_boundary_fails_with_punctured_cover():
    v = way_below(R1, line(o(0, 1)), line(o(0, 2)))
    assert not v.holds
    r = v.refutation
    assert r.kind == "punctured" and r.center == (F(0),)
    # the family is {(1/k, 2)}
    assert [r.member(k) for k in (1, 2, 4)] == [line(o(1, 2)), line(o(F(1, 2), 2)), line(o(F(1, 4), 2))]
    assert verify_refutation(R1, line(o(0, 1)), line(o(0, 2)), r, 6)


def test_target_must_be_open():
    with pytest.raises(NotOpen):
        way_below(R1, line(o(0, 1)), line(c(0, 2)))


def test_relative_closure_at_the_carrier_edge():
    space = EuclideanBox(Box((c(0, 5),)))
    # [0,1) is open in [0,5] and its closure [0,1] sits inside [0,2)
    assert way_below(space, line(Interval(0, 1, False, True)), line(Interval(0, 2, False, True))).holds
    assert way_below(space, line(c(0, 5)), line(c(0, 5))).holds


def test_rational_trace_decision():
    q = RationalTrace(1, Box((c(0, 10),)))
    v = way_below(q, line(o(1, 2)), line(o(0, 3)))
    assert not v.holds and v.refutation.kind == "shrinking"
    pts = line(closed_interval(F(1, 2), F(1, 2)), closed_interval(2, 2))
    assert way_below(q, pts, line(o(0, 3))).holds
    assert not way_below(q, pts, line(o(1, 3))).holds


def test_mixed_products_are_unsupported():
    space = Product(R1, RationalTrace(1, Box((c(0, 1),))))
    with pytest.raises(UnsupportedSpace):
        way_below(space, BoxUnion.of(Box((o(0, 1), o(0, 1)))), BoxUnion.of(Box((o(-1, 2), o(-1, 2)))))


@given(st.integers(1, 2).flatmap(lambda d: st.tuples(unions(d), unions(d, opened=True))))
def test_euclidean_decision_matches_closure_oracle(st_):
    s, t = st_
    # closure of s from the probe grid: a probe is in cl(s) iff some box of s has it in its closed hull
    hull = BoxUnion(s.dim, tuple(b.closure() for b in s.nonempty_boxes()))
    expected = all(brute_member(p, t) for p in critical_probes(s, t) if brute_member(p, hull))
    assert way_below(EuclideanFull(s.dim), s, t).holds == expected


@given(st.integers(1, 2).flatmap(lambda d: st.tuples(unions(d), unions(d, opened=True))))
def test_certificates_select_real_subcovers(st_):
    s, t = st_
    v = way_below(EuclideanFull(s.dim), s, t)
    if not v.holds:
        return
    # the boxes of t, each split in two, form a finite open cover of t
    cover = []
    for b in t.nonempty_boxes():
        iv = b.dims[0]
        mid = (iv.lo + iv.hi) / 2
        cover.append(BoxUnion(s.dim, (Box((o(iv.lo, mid + F(1, 64)),) + b.dims[1:]),)))
        cover.append(BoxUnion(s.dim, (Box((o(mid - F(1, 64), iv.hi),) + b.dims[1:]),)))
    picked = v.certificate.select(cover)
    sub = BoxUnion(s.dim, tuple(bx for i in picked for bx in cover[i].boxes))
    assert contains(sub, s)


# pinned irrational and refutation ------------------------------------------

@given(rationals(-4, 4, 8), rationals(-4, 4, 8), rationals(-8, 8, 64))
def test_pinned_irrational_compare_matches_decimal(a, b, q):
    if a == b:
        return
    a, b = min(a, b), max(a, b)
    alpha = PinnedIrrational(a, b)
    exact = dec(a) + dec(b - a) * (SQRT2 - 1)
    assert alpha.compare(q) == (1 if dec(q) > exact else -1)
    lo, hi = alpha.bounds(3)
    assert dec(lo) < exact < dec(hi)


def test_shrinking_refutation_exhibits_31_missed_points():
    q = RationalTrace(1, Box((c(0, 10),)))
    s, t = line(o(1, 2)), line(o(0, 3))
    r = way_below(q, s, t).refutation
    check = verify_refutation(q, s, t, r, 5)
    assert check.ok and len(check.exhibits) == 31
    alpha = dec(F(1)) + (SQRT2 - 1)
    for family, p in check.exhibits:
        x = dec(p[0])
        assert 1 < x < 2
        # within 1/k of α for every k in the subfamily, so every member misses it
        assert all(abs(x - alpha) <= Decimal(1) / k for k in family)


def test_shrinking_refutation_first_twelve_members():
    q = RationalTrace(1, Box((c(0, 10),)))
    s, t = line(o(1, 2)), line(o(0, 3))
    check = verify_refutation(q, s, t, way_below(q, s, t).refutation, 12)
    assert check.ok and len(check.exhibits) == 2 ** 12 - 1


def test_refutation_checker_rejects_real_subcovers():
    s, t = line(o(0, 1)), line(o(-1, 2))
    fam = CoverFamily("finite", t, members=(line(o(-1, 1)), line(o(0, 2))))
    assert not verify_refutation(R1, s, t, fam, 2)
    assert verify_refutation(R1, s, t, fam, 0)
    bad = CoverFamily("finite", t, members=(line(c(-1, 1)),))
    with pytest.raises(NotOpen):
        verify_refutation(R1, s, t, bad, 1)


def test_selectors():
    assert SubcoverSelector("empty").select([line(o(0, 1))]) == []
    pts = SubcoverSelector("points", points=((F(1),), (F(3),)))
    assert pts.select([line(o(0, 2)), line(o(2, 4)), line(o(0, 4))]) == [0, 1]


# core-compactness ----------------------------------------------------------

def test_core_compact_witness_examples():
    assert core_compact_witness(R1, (0,), line(o(-1, 1))) == line(o(F(-1, 2), F(1, 2)))
    assert core_compact_witness(R1, (0,), line(o(-1, 1), o(2, 3))) == line(o(F(-1, 2), F(1, 2)))
    with pytest.raises(NonCoreCompact):
        core_compact_witness(RationalTrace(1, Box((c(0, 1),))), (F(1, 2),), line(o(0, 1)))
    with pytest.raises(PointOutside):
        core_compact_witness(R1, (5,), line(o(-1, 1)))


def test_core_compact_witness_at_the_carrier_edge():
    space = EuclideanBox(Box((c(0, 5),)))
    v = core_compact_witness(space, (0,), line(Interval(0, 1, False, True)))
    assert is_open_in(space, v) and brute_member((F(0),), v)
    assert way_below(space, v, line(Interval(0, 1, False, True))).holds


@given(st.integers(1, 2).flatmap(lambda d: st.tuples(unions(d, opened=True), boxes(d, opened=False))))
def test_core_compact_witness_postconditions(args):
    w, carrier = args
    if carrier.is_empty:
        return
    for space in (EuclideanFull(w.dim), EuclideanBox(Box(tuple(iv.closure() for iv in carrier.dims)))):
        for p in critical_probes(w):
            if not (brute_member(p, w) and in_carrier(space, p)):
                continue
            v = core_compact_witness(space, p, w)
            assert brute_member(p, v)
            assert is_open_in(space, v)
            assert way_below(space, v, w).holds


# cover oracle ----------------------------------------------------------------

def test_oracle_examples():
    assert oracle_way_below(R1, line(o(0, 1)), line(o(-1, 2))).holds is True
    res = oracle_way_below(R1, line(o(0, 1)), line(o(0, 2)))
    assert res.holds is False and res.witness.center == (F(0),)
    assert oracle_way_below(R1, BoxUnion(1), line(o(5, 6))).holds is True


def test_oracle_budget_can_run_out():
    s = line(*[o(k, k + F(1, 2)) for k in range(6)])
    res = oracle_way_below(R1, s, line(o(-1, 7)), budget=3)
    assert res.holds is None


def test_oracle_refuses_high_dimension():
    with pytest.raises(UnsupportedSpace):
        oracle_way_below(EuclideanFull(3), BoxUnion(3), BoxUnion(3))


@given(st.integers(1, 2).flatmap(lambda d: st.tuples(unions(d), unions(d, opened=True))))
def test_oracle_agrees_when_conclusive(st_):
    s, t = st_
    space = EuclideanFull(s.dim)
    res = oracle_way_below(space, s, t)
    if res.holds is not None:
        assert res.holds == way_below(space, s, t).holds
    if res.holds is False:
        # the oracle's exhibits approach the puncture from inside s
        for _, q in res.exhibits:
            assert brute_member(q, closure(s))

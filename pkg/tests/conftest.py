from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from waybelow.geometry import Box, BoxUnion, Interval

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def rationals(lo=-4, hi=4, den=4):
    return st.integers(lo * den, hi * den).map(lambda k: Fraction(k, den))


@st.composite
def intervals(draw, opened=None, allow_point=False):
    a = draw(rationals())
    b = draw(rationals())
    if a == b and allow_point:
        return Interval(a, a, False, False)
    if a == b:
        b = a + Fraction(1, 4)
    a, b = min(a, b), max(a, b)
    if opened:
        return Interval(a, b, True, True)
    return Interval(a, b, draw(st.booleans()), draw(st.booleans()))


@st.composite
def boxes(draw, d, opened=None):
    return Box(tuple(draw(intervals(opened, allow_point=not opened)) for _ in range(d)))


@st.composite
def unions(draw, d, opened=None, max_size=3):
    bs = draw(st.lists(boxes(d, opened), max_size=max_size))
    return BoxUnion(d, tuple(bs))


@st.composite
def points(draw, d):
    return tuple(draw(rationals(den=8)) for _ in range(d))


def critical_probes(*us):
    """Cuts of all inputs, midpoints between consecutive cuts, and one point beyond each end.

    Membership in any of the inputs is constant between cuts, so these
    probes decide every pointwise question about them exactly.
    """
    import itertools
    d = us[0].dim
    axes = []
    for axis in range(d):
        cuts = sorted({v for u in us for b in u.boxes for v in (b.dims[axis].lo, b.dims[axis].hi)} | {Fraction(0)})
        vals = list(cuts) + [(a + b) / 2 for a, b in zip(cuts, cuts[1:])] + [cuts[0] - 1, cuts[-1] + 1]
        axes.append(sorted(vals))
    return list(itertools.product(*axes))


def brute_member(p, u: BoxUnion) -> bool:
    """Membership straight from the interval definition, no library helpers."""
    for b in u.boxes:
        ok = True
        for v, iv in zip(p, b.dims):
            if v < iv.lo or v > iv.hi or (v == iv.lo and iv.lo_open) or (v == iv.hi and iv.hi_open):
                ok = False
                break
        if ok:
            return True
    return False


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for line in mod.LINES:
            terminalreporter.write_line(line)

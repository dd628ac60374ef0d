from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from largesets.intervals import (
    EMPTY,
    Interval,
    IntervalSet,
    PeriodicSet,
    Window,
    affine_image,
    boolean_combine,
    materialize_periodic,
    measure,
    min_unit_window_measure,
    normalize,
    unit_window_profile,
)

rats = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def interval_sets(draw, max_parts=8):
    pairs = draw(st.lists(st.tuples(rats, rats), max_size=max_parts))
    return normalize(pairs)


def brute_contains(pairs, x):
    return any(lo <= x < hi for lo, hi in pairs)


# -- normalize ---------------------------------------------------------------

def test_normalize_merges_adjacent():
    assert normalize([(0, 1), (1, 2)]).parts == (Interval(F(0), F(2)),)


def test_normalize_overlap_chain():
    assert normalize([(2, 3), (0, F(3, 2)), (1, F(5, 2))]).parts == (Interval(F(0), F(3)),)


def test_normalize_empty_and_degenerate():
    assert normalize([]) == EMPTY
    assert normalize([(1, 1), (3, 2)]) == EMPTY


@given(interval_sets())
def test_normalize_idempotent(s):
    assert normalize(s.parts) == s


@given(interval_sets())
def test_parts_sorted_disjoint_nonadjacent(s):
    for a, b in zip(s.parts, s.parts[1:]):
        assert a.lo < a.hi < b.lo < b.hi


# -- boolean_combine ---------------------------------------------------------

def test_intersect_example():
    a = IntervalSet.of((0, 1), (2, 3))
    b = IntervalSet.of((F(1, 2), F(5, 2)))
    assert boolean_combine(a, b, "intersect") == IntervalSet.of((F(1, 2), 1), (2, F(5, 2)))


def test_union_identity():
    a = IntervalSet.of((0, 1), (F(7, 3), 5))
    assert boolean_combine(a, EMPTY, "union") == a
    assert a | EMPTY == a


def test_difference_example():
    got = boolean_combine(IntervalSet.of((0, 10)), IntervalSet.of((1, 2), (3, 4)), "difference")
    assert got == IntervalSet.of((0, 1), (2, 3), (4, 10))


def test_unknown_mode():
    with pytest.raises(ValueError):
        boolean_combine(EMPTY, EMPTY, "xor")


@given(interval_sets(), interval_sets())
def test_inclusion_exclusion(a, b):
    assert measure(a | b) + measure(a & b) == measure(a) + measure(b)


@given(interval_sets(), interval_sets(), rats)
def test_combine_matches_pointwise(a, b, x):
    assert (a | b).contains(x) == (a.contains(x) or b.contains(x))
    assert (a & b).contains(x) == (a.contains(x) and b.contains(x))
    assert (a - b).contains(x) == (a.contains(x) and not b.contains(x))


# -- affine_image / measure --------------------------------------------------

def test_affine_examples():
    assert affine_image(IntervalSet.of((0, 1)), 2, 3) == IntervalSet.of((3, 5))
    got = affine_image(IntervalSet.of((0, 1), (2, 3)), -1, 0)
    assert got == IntervalSet.of((-3, -2), (-1, 0))
    x = IntervalSet.of((F(1, 3), 2))
    assert affine_image(x, 1, 0) == x


def test_affine_zero_scale_rejected():
    with pytest.raises(ValueError):
        affine_image(IntervalSet.of((0, 1)), 0, 1)


@given(interval_sets(), rats.filter(lambda c: c != 0), rats)
def test_affine_scales_measure(s, c, t):
    assert measure(affine_image(s, c, t)) == abs(c) * measure(s)


def test_measure_examples():
    assert measure(IntervalSet.of((0, 1), (2, 3))) == 2
    assert measure(EMPTY) == 0
    assert measure(IntervalSet.of((0, F(1, 3)), (F(1, 2), F(5, 6)))) == F(2, 3)


def test_json_roundtrip():
    s = IntervalSet.of((F(-7, 3), F(1, 2)), (5, F(31, 6)))
    assert IntervalSet.from_json(s.to_json()) == s
    assert s.to_json()[0] == [-7, 3, 1, 2]


# -- periodic ----------------------------------------------------------------

def test_materialize_strip():
    p = PeriodicSet.strip(1, F(1, 4))
    got = materialize_periodic(p, Window(0, 3))
    assert got == IntervalSet.of((0, F(1, 4)), (1, F(5, 4)), (2, F(9, 4)))


def test_materialize_period_three_halves():
    p = PeriodicSet(F(3, 2), IntervalSet.of((0, F(1, 2))))
    assert materialize_periodic(p, Window(1, 4)) == IntervalSet.of((F(3, 2), 2), (3, F(7, 2)))


def test_materialize_full_torus():
    p = PeriodicSet(F(2, 3), IntervalSet.of((0, F(2, 3))))
    assert materialize_periodic(p, Window(F(-1, 7), 5)) == IntervalSet.of((F(-1, 7), 5))


def test_pattern_outside_period_rejected():
    with pytest.raises(ValueError):
        PeriodicSet(1, IntervalSet.of((F(1, 2), F(3, 2))))


@settings(max_examples=60)
@given(
    st.fractions(min_value=F(1, 5), max_value=3, max_denominator=9),
    st.lists(st.tuples(st.fractions(0, 1, max_denominator=9), st.fractions(0, 1, max_denominator=9)),
             max_size=3),
    st.fractions(min_value=-6, max_value=6, max_denominator=7),
    st.fractions(min_value=1, max_value=6, max_denominator=5),
)
def test_materialize_matches_translates(period, raw, lo, width):
    pattern = normalize([(a * period, b * period) for a, b in raw])
    p = PeriodicSet(period, pattern)
    w = Window(lo, lo + width)
    K = int(width / period) + 3 + int(abs(lo) / period)
    union = normalize(
        (q.lo + k * period, q.hi + k * period) for k in range(-K, K + 1) for q in pattern.parts
    )
    assert materialize_periodic(p, w) == union.clip(w.lo, w.hi)


# -- unit windows ------------------------------------------------------------

def test_min_unit_window_strip():
    s = materialize_periodic(PeriodicSet.strip(1, F(3, 4)), Window(0, 10))
    assert min_unit_window_measure(s, Window(0, 10))[0] == F(3, 4)


def test_min_unit_window_full():
    assert min_unit_window_measure(IntervalSet.of((0, 10)), Window(0, 10)) == (1, 0)


def test_min_unit_window_gap():
    # a unit window starting at 1/2 sits exactly on the gap [1/2, 3/2)
    s = IntervalSet.of((0, F(1, 2)), (F(3, 2), 10))
    value, arg = min_unit_window_measure(s, Window(0, 10))
    assert value == 0 and arg == F(1, 2)
    assert unit_window_profile(s, 0) == F(1, 2)


@settings(max_examples=50)
@given(interval_sets(max_parts=6), st.fractions(min_value=-10, max_value=10, max_denominator=4),
       st.integers(min_value=1, max_value=8))
def test_min_is_attained_and_below_samples(s, lo, width):
    w = Window(lo, lo + width)
    value, arg = min_unit_window_measure(s, w)
    assert w.lo <= arg <= w.hi - 1
    assert unit_window_profile(s, arg) == value
    for k in range(0, 4 * width + 1):
        a = w.lo + F(k, 4) * (width - 1) / max(width, 1)
        assert unit_window_profile(s, a) >= value


def test_window_too_short():
    with pytest.raises(ValueError):
        Window(0, F(1, 2))
    assert Window.parse("-10:10") == Window(-10, 10)

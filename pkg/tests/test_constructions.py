import math
import pickle
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from largesets.constructions import (
    DepthError,
    PairIndex,
    avoider_from_descriptor,
    block_index,
    build_enumeration_avoider,
    build_integer_power,
    build_lemma_avoider,
    build_power_strip,
    lemma_parameters,
    pair,
    positive_rationals,
    reduced_length_rational,
    unpair,
)
from largesets.intervals import IntervalSet, Window, min_unit_window_measure
from largesets.rationals import approximant, frac
from largesets.sequences import Explicit, SequenceError, identity, squares

small_rats = st.fractions(min_value=-30, max_value=30, max_denominator=40)


# -- pairing -----------------------------------------------------------------

def test_pair_examples():
    assert pair(1, 0) == 1 and pair(1, 1) == 2 and pair(2, 0) == 3
    assert PairIndex.of(2, 0).k == 3


def test_unpair_bruteforce():
    table = {pair(m, n): (m, n) for m in range(1, 30) for n in range(0, 30)}
    for k in range(1, 200):
        assert unpair(k) == table[k]
    assert unpair(10) == (4, 0)


@given(st.integers(min_value=1, max_value=10**12))
def test_pair_inverse(k):
    assert pair(*unpair(k)) == k


def test_pair_domain():
    with pytest.raises(ValueError):
        pair(0, 3)
    with pytest.raises(ValueError):
        unpair(0)


# -- lemma avoider -----------------------------------------------------------

def test_lemma_parameters_examples():
    y = F(1618, 1000)
    alpha, beta = lemma_parameters(F(1, 2), y)
    assert beta == 1 - (F(1, 2) + y) / (1 + y)
    assert alpha == beta / 2
    a1, b1 = lemma_parameters(1, y)
    assert b1 == 1 / (1 + y) and a1 == 1 / (2 * (1 + y))


def test_lemma_rejects_bad_input():
    with pytest.raises(ValueError):
        build_lemma_avoider(0, 2)
    with pytest.raises(ValueError):
        build_lemma_avoider(F(1, 2), 1)


@given(st.integers(min_value=-10**6, max_value=10**6))
def test_lemma_contains_integers(m):
    assert build_lemma_avoider(F(1, 3), F(7, 4)).contains(m)


@pytest.mark.parametrize("eps", [F(1), F(1, 2), F(1, 10)])
def test_lemma_large(eps):
    a = build_lemma_avoider(eps, approximant("golden", F(1, 10**12)))
    assert a.approximate
    w = Window(-20, 20)
    assert min_unit_window_measure(a.materialize(w), w)[0] >= 1 - eps


def test_lemma_materialize_matches_membership():
    a = build_lemma_avoider(F(1, 2), F(13, 8))
    w = Window(0, 3)
    s = a.materialize(w)
    # one-period hand check: the two removed families inside [0, 3)
    cut = 1 - a.alpha
    removed = [(k + cut, k + 1) for k in range(3)] + [
        (a.y * (k + cut), a.y * (k + 1)) for k in range(2)
    ]
    assert s == (IntervalSet.of((0, 3)) - IntervalSet.of(*removed))
    for j in range(1, 3000):
        x = F(j, 1000)
        if x not in {p.hi for p in s.parts} | {p.lo for p in s.parts}:
            assert a.contains(x) == s.contains(x)


# -- power strip -------------------------------------------------------------

def test_reduced_length():
    assert reduced_length_rational(F(3, 2)) == 3
    assert reduced_length_rational(2) == 2
    assert reduced_length_rational(7) == 7
    with pytest.raises(ValueError):
        reduced_length_rational(1)


def test_power_strip_patterns():
    assert build_power_strip(2, F(1, 4)).width == F(1, 4)
    assert build_power_strip(F(3, 2), F(1, 6)).width == F(1, 6)
    with pytest.raises(ValueError):
        build_power_strip(2, F(1, 2))


def test_power_strip_window():
    a = build_power_strip(2, F(1, 4))
    assert a.materialize(Window(5, 6)) == IntervalSet.of((5, F(21, 4)))
    assert a.contains(F(21, 4)) and not a.contains(F(11, 2))


# -- integer power -----------------------------------------------------------

def test_block_index_bit_lengths():
    assert block_index(1) is None
    assert block_index(2) == 0 and block_index(3) == 0
    assert block_index(4) == 1 and block_index(15) == 1
    assert block_index(16) == 2 and block_index(255) == 2 and block_index(256) == 3
    for j in range(0, 12):
        lo = 2 ** (2**j)
        assert block_index(lo) == j and block_index(lo * lo - 1) == j


def test_integer_power_examples():
    a = build_integer_power(2, F(1, 4), N=8)
    assert a.N == 8 and a.width == F(3, 8) and a.target == F(1, 4)
    assert not a.contains(2)
    assert a.in_u(2)  # m = 2 in the first block, bin 0
    assert not a.contains(F(1, 2))  # <x> = 1/b
    big = 2 ** (2**10) + F(9, 10)
    assert not a.contains(big)


def test_integer_power_default_n_and_validation():
    assert build_integer_power(2, F(1, 4)).N == 9
    with pytest.raises(ValueError):
        build_integer_power(2, F(1, 4), N=7)
    with pytest.raises(ValueError):
        build_integer_power(2, F(1, 2))
    with pytest.raises(ValueError):
        build_integer_power(1, F(1, 4))


def test_integer_power_negative_side_mirrors():
    a = build_integer_power(3, F(1, 6), N=12)
    for x in (F(5, 2) + F(1, 97), F(17, 3) + F(1, 50), F(300, 7)):
        # -x lies in -U exactly when x lies in U
        assert a.in_u(x) == a.in_u(-(-x))
        z = -x
        assert a.contains(z) == (0 < frac(z) < a.width and not a.in_u(x))


@given(small_rats)
def test_integer_power_membership_matches_materialize(x):
    a = build_integer_power(2, F(1, 4), N=8)
    w = Window(math.floor(x) - 1, math.floor(x) + 2)
    s = a.materialize(w)
    ends = {p.lo for p in s.parts} | {p.hi for p in s.parts}
    if x not in ends:
        assert a.contains(x) == s.contains(x)


def test_integer_power_removed_per_cell():
    a = build_integer_power(2, F(1, 4), N=8)
    for m in range(-300, 300):
        cell = a.removed_stripes(Window(m, m + 1))
        assert cell.measure() <= F(1, 8)


# -- enumeration -------------------------------------------------------------

@pytest.fixture(scope="module")
def enum_small():
    return build_enumeration_avoider(squares(), positive_rationals(4), F(1, 2), 12)


def test_positive_rationals():
    assert positive_rationals(6) == [1, F(1, 2), 2, F(1, 3), F(3, 2), F(2, 3)]
    assert len(set(positive_rationals(500))) == 500


def test_enumeration_n(enum_small):
    assert enum_small.N == 8
    assert build_enumeration_avoider(identity(), [1], F(1, 3), 2).N == 12


def test_enumeration_depth_zero_removes_nothing():
    a = build_enumeration_avoider(squares(), [1, 2], F(1, 2), 0)
    assert a.stripes() == []
    # the first stripe a deeper build would add starts at 1*1 - 1 = 0
    assert a.region == (None, 0)
    w = Window(-5, 0)
    assert a.materialize(w) == IntervalSet.of((-5, 0))


def test_enumeration_stripe_widths_and_growth(enum_small):
    assert all(s.interval.hi - s.interval.lo == F(1, 8) for s in enum_small.stripes())
    assert enum_small.growth_violations() == []


def test_enumeration_first_coverage(enum_small):
    # (m, n) = (1, 0), bin 0, b_1 = 1, t = 0: the point a_sigma(8) is removed
    pt, stripe = enum_small.coverage_point("T1", 1, 0, 0, t=0)
    idx = enum_small.component("T1").sigma[8]
    assert pt == squares().term(idx)
    assert not enum_small.contains(pt)
    assert stripe.interval.lo <= pt <= stripe.interval.hi


def test_enumeration_coverage_all_cells(enum_small):
    for label in ("T1", "T2"):
        comp = enum_small.component(label)
        for k in range(1, enum_small.depth + 1):
            m, n = unpair(k)
            if m > len(comp.dilations):
                continue
            for i in range(enum_small.N):
                pt, _ = enum_small.coverage_point(label, m, n, i)
                assert not enum_small.contains(pt)


def test_enumeration_negative_dilations_mirror():
    a = build_enumeration_avoider(squares(), [1, F(-1, 2), -2], F(1, 2), 10)
    for label in ("T3", "T4"):
        comp = a.component(label)
        assert comp.stripes and all(s.interval.hi <= 0 for s in comp.stripes[3:])
        for k in range(1, 11):
            m, n = unpair(k)
            if m <= len(comp.dilations):
                for i in (0, 7):
                    pt, _ = a.coverage_point(label, m, n, i)
                    assert not a.contains(pt)


def test_enumeration_window_beyond_depth(enum_small):
    _, hi = enum_small.region
    with pytest.raises(DepthError):
        enum_small.materialize(Window(hi - 1, hi + 1))


def test_enumeration_large(enum_small):
    _, hi = enum_small.region
    w = Window(-10, min(hi, 4000))
    assert min_unit_window_measure(enum_small.materialize(w), w)[0] >= F(1, 2)


def test_enumeration_rejects_zero_and_short_sequences():
    with pytest.raises(ValueError):
        build_enumeration_avoider(squares(), [1, 0], F(1, 2), 3)
    with pytest.raises(SequenceError, match="only 20"):
        build_enumeration_avoider(Explicit(tuple(range(1, 21))), [1], F(1, 2), 5)


def test_enumeration_pickles(enum_small):
    again = pickle.loads(pickle.dumps(enum_small))
    assert again.contains(F(1, 3)) == enum_small.contains(F(1, 3))


# -- descriptors -------------------------------------------------------------

@pytest.mark.parametrize(
    "a",
    [
        build_lemma_avoider(F(1, 2), F(13, 8)),
        build_power_strip(F(3, 2), F(1, 6)),
        build_integer_power(2, F(1, 4), N=8),
        build_enumeration_avoider(squares(), [1, F(1, 2)], F(1, 2), 5),
    ],
    ids=lambda a: a.kind,
)
def test_descriptor_roundtrip(a):
    again = avoider_from_descriptor(a.descriptor())
    assert again.descriptor() == a.descriptor()

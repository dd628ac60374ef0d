import json
import math
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from largesets.sequences import (
    Block,
    Explicit,
    Geometric,
    IntegerPower,
    Polynomial,
    PrimePower,
    SequenceError,
    banach_density_estimate,
    growth_profile,
    identity,
    iroot,
    powers_of,
    prime_table,
    sequence_from_json,
    squares,
)


def test_geometric_term():
    assert Geometric(2).term(10) == 1024
    assert Geometric(F(3, 2)).terms(3) == [F(3, 2), F(9, 4), F(27, 8)]


def test_polynomial_term():
    assert squares().term(7) == 49
    assert Polynomial((1, F(1, 2), 3)).term(2) == 1 + 1 + 12


def test_polynomial_must_increase():
    with pytest.raises(SequenceError):
        Polynomial((0, 5, -1))  # 4, 6, 6 ...
    with pytest.raises(SequenceError):
        Polynomial((3,))


def test_geometric_ratio_must_exceed_one():
    with pytest.raises(SequenceError):
        Geometric(1)
    with pytest.raises(SequenceError):
        IntegerPower(F(5, 2))


def test_block_first_terms():
    assert Block().terms(6) == [5, 17, 18, 257, 258, 259]


def test_block_matches_enumeration():
    # sorted {f(i) + j : 1 <= j <= i} for i <= 20 with a table schedule
    f = [10 * i * i for i in range(1, 21)]
    b = Block(tuple(f))
    expect = sorted(fi + j for i, fi in enumerate(f, start=1) for j in range(1, i + 1))
    assert b.terms(len(expect)) == expect
    assert [b.term(n) for n in range(1, len(expect) + 1)] == expect


def test_block_overlap_rejected():
    with pytest.raises(SequenceError):
        Block((1, 2, 10))  # f(2) = 2 is not > f(1) + 1


@given(st.integers(min_value=1, max_value=10**6))
def test_block_locate(n):
    i, j = Block.locate(n)
    assert 1 <= j <= i
    assert i * (i - 1) // 2 + j == n


@pytest.mark.parametrize("seq", [Geometric(3), Block(), squares(), Polynomial((2, 7, 0, 1))])
def test_residues_match_terms(seq):
    for q in (1, 7, 1000, 2**20 + 7):
        assert seq.residues(40, q) == [int(t) % q for t in seq.terms(40)]


def test_explicit():
    e = Explicit((1, F(5, 2), 4))
    assert e.term(2) == F(5, 2)
    with pytest.raises(SequenceError):
        e.term(4)
    with pytest.raises(SequenceError):
        Explicit((1, 1))


def test_prime_table():
    assert prime_table(30) == (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)
    assert len(prime_table(10**5)) == 9592


def test_iroot():
    for x in (0, 1, 2, 10**40, 3**50 - 1, 3**50):
        for k in (2, 3, 5):
            r = iroot(x, k)
            assert r**k <= x < (r + 1) ** k


def test_prime_power_exact_and_approximate():
    p = PrimePower((F(1),), (F(1),))
    assert p.exact and p.terms(4) == [2, 3, 5, 7]
    half = PrimePower((F(1, 2),), (F(1),), digits=20)
    assert not half.exact
    t = half.term(1)  # sqrt(2)
    assert abs(t - F(14142135623730950488, 10**19)) < F(1, 10**18)
    assert t**2 <= 2 < (t + half.error_bound(1)) ** 2


def test_prime_power_beyond_sieve_names_bound():
    p = PrimePower((F(1),), (F(1),), sieve_bound=100)
    with pytest.raises(SequenceError, match="sieve_bound >="):
        p.term(26)


def test_json_roundtrip():
    for s in (Geometric(F(3, 2)), IntegerPower(2), squares(), Block(), Block((3, 5, 9)),
              Explicit((1, 2, 5)), PrimePower((F(1, 2), F(1)), (F(2), F(1, 3)))):
        again = sequence_from_json(json.dumps(s.to_json()))
        assert type(again) is type(s)
        assert again.terms(5 if not isinstance(s, Explicit) else 3) == s.terms(
            5 if not isinstance(s, Explicit) else 3
        )


def test_json_errors_name_field():
    with pytest.raises(SequenceError, match="^b:"):
        sequence_from_json({"kind": "geometric"})
    with pytest.raises(SequenceError, match="^kind:"):
        sequence_from_json({"kind": "bogus"})


def test_json_prime_power_with_approximant():
    s = sequence_from_json({"kind": "prime_power", "exponents": ["3/2"], "coeffs": ["sqrt2@1e-12"]})
    assert not s.exact
    assert s.error_bound(1) > 0


# -- density -----------------------------------------------------------------

def test_density_identity():
    for n in (1, 7, 100):
        assert banach_density_estimate(identity(), n, (0, 500), 1000).ratio == 1


def test_density_powers_of_two():
    d = banach_density_estimate(powers_of(2), 100, (0, 10**6), 40)
    assert d.ratio <= F(20, 100)
    assert d.count == 6  # 2, 4, ..., 64 in {1..100}


def test_density_blocks_full_at_block_start():
    b = Block()
    for i in range(1, 5):
        fi = 2 ** (2**i)
        d = banach_density_estimate(b, i, (fi, fi), 20)
        assert d.ratio == 1 and d.best_offset == fi


def test_density_monotone_in_range():
    s = squares()
    small = banach_density_estimate(s, 30, (0, 100), 200).ratio
    large = banach_density_estimate(s, 30, (0, 1000), 200).ratio
    assert large >= small


def test_density_bruteforce():
    s = Explicit((3, 4, 9, 10, 11, 30, 31, 33))
    A = set(s.floors(8))
    for n in (1, 3, 5):
        best = max(sum(1 for a in A if h < a <= h + n) for h in range(0, 40))
        assert banach_density_estimate(s, n, (0, 39), 8).count == best


def test_density_rejects_nonpositive_length():
    with pytest.raises(ValueError):
        banach_density_estimate(identity(), 0, (0, 1), 10)


# -- growth ------------------------------------------------------------------

def test_growth_profiles():
    sq = growth_profile(squares(), 30)
    assert all(a > b for a, b in zip(sq.ratios, sq.ratios[1:]))
    assert sq.one_separated
    g = growth_profile(powers_of(2), 20)
    assert set(g.ratios) == {2}
    blk = growth_profile(Block(), 10)
    assert blk.max_ratio > 10 and blk.min_ratio < F(11, 10)
    with pytest.raises(ValueError):
        growth_profile(squares(), 1)


def test_growth_half_step():
    assert not growth_profile(Polynomial((0, F(1, 2))), 5).one_separated


def test_floors():
    assert Geometric(F(3, 2)).floors(4) == [1, 2, 3, 5]
    assert math.floor(F(81, 16)) == 5

"""Explicit large sets that avoid affine copies of given sequences.

Each avoider offers an exact membership predicate ``contains`` on rationals
and ``materialize(window)``, an exact half-open :class:`IntervalSet` of the
same set on that window.  The two agree except at finitely many boundary
points per window (closed or open stripes vs. half-open storage).

Four constructions:

* :class:`LemmaAvoider`: ``T ∩ yT`` with ``T = {<x> <= 1 - alpha}``.
* :class:`PowerStrip`: ``{0 <= <x> <= 1/l(b) - eps}``.
* :class:`IntegerPowerAvoider`: a strip minus fractional bins over doubly
  exponential integer blocks, avoiding every copy of ``{b^n}``.
* :class:`EnumerationAvoider`: the line minus stripes placed along an
  enumeration of (dilation, integer shift) pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import ClassVar, Sequence

from .intervals import (
    EMPTY,
    Interval,
    IntervalSet,
    PeriodicSet,
    Window,
    affine_image,
    boolean_combine,
    materialize_periodic,
    normalize,
)
from .rationals import Approximant, RatLike, as_rat, frac, rat_str
from .sequences import Block, SequenceError, SequenceSpec, sequence_from_json


class DepthError(ValueError):
    """A window reaches past the region a lazily built avoider has materialized."""


# ---------------------------------------------------------------------------
# pairing

def pair(m: int, n: int) -> int:
    """Enumerate N x (N ∪ {0}): f(m, n) = (m+n)(m+n-1)/2 + m."""
    if m < 1 or n < 0:
        raise ValueError(f"pair needs m >= 1 and n >= 0, got ({m}, {n})")
    s = m + n
    return s * (s - 1) // 2 + m


def unpair(k: int) -> tuple[int, int]:
    """Inverse of :func:`pair`."""
    if k < 1:
        raise ValueError("unpair needs k >= 1")
    s, m = Block.locate(k)
    return m, s - m


@dataclass(frozen=True)
class PairIndex:
    m: int
    n: int
    k: int

    @classmethod
    def of(cls, m: int, n: int) -> "PairIndex":
        return cls(m, n, pair(m, n))


# ---------------------------------------------------------------------------
# base

class AvoiderSet:
    kind: ClassVar[str] = ""
    #: membership depends on <x> only
    period_one: ClassVar[bool] = False

    @property
    def target(self) -> Fraction:
        """The unit-window lower bound the construction promises."""
        raise NotImplementedError

    def contains(self, x: RatLike) -> bool:
        raise NotImplementedError

    def materialize(self, w: Window | Interval) -> IntervalSet:
        raise NotImplementedError

    def descriptor(self) -> dict:
        raise NotImplementedError

    @property
    def approximate(self) -> bool:
        return False

    def __contains__(self, x) -> bool:
        return self.contains(x)


def _strip(width: Fraction) -> PeriodicSet:
    return PeriodicSet.strip(1, width)


# ---------------------------------------------------------------------------
# S = T ∩ yT

@dataclass(frozen=True)
class LemmaAvoider(AvoiderSet):
    """``S = T ∩ yT``, ``T = {x : <x> <= 1 - alpha}``.

    For a sequence whose exceptional set E satisfies y ∉ E E^{-1}, S has no
    affine copy of it; that hypothesis cannot be checked, so ``y`` carries
    its provenance and escape witnesses are searched for instead.
    """

    epsilon: Fraction
    y: Fraction
    alpha: Fraction
    beta: Fraction
    y_source: Approximant | None = None
    kind: ClassVar[str] = "lemma2"

    @property
    def target(self) -> Fraction:
        return 1 - self.epsilon

    @property
    def approximate(self) -> bool:
        return self.y_source is not None

    def contains(self, x: RatLike) -> bool:
        x = as_rat(x)
        cut = 1 - self.alpha
        return frac(x) <= cut and frac(x / self.y) <= cut

    def materialize(self, w: Window | Interval) -> IntervalSet:
        strip = _strip(1 - self.alpha)
        t = materialize_periodic(strip, w)
        scaled = materialize_periodic(strip, Interval(w.lo / self.y, w.hi / self.y))
        return boolean_combine(t, affine_image(scaled, self.y, 0), "intersect")

    def descriptor(self) -> dict:
        d = {
            "kind": self.kind,
            "epsilon": rat_str(self.epsilon),
            "y": rat_str(self.y),
            "alpha": rat_str(self.alpha),
            "beta": rat_str(self.beta),
            "approximate": self.approximate,
        }
        if self.y_source:
            d["y_source"] = self.y_source.to_json()
        return d


def lemma_parameters(epsilon: RatLike, y: RatLike) -> tuple[Fraction, Fraction]:
    """Largest admissible (alpha, beta): beta = 1 - (1 - eps + y)/(1 + y), alpha = beta/2."""
    eps, y = as_rat(epsilon), as_rat(y)
    beta = 1 - (1 - eps + y) / (1 + y)
    return beta / 2, beta


def build_lemma_avoider(epsilon: RatLike, y: RatLike | Approximant) -> LemmaAvoider:
    source = y if isinstance(y, Approximant) else None
    yv = y.value if source else as_rat(y)
    eps = as_rat(epsilon)
    if not 0 < eps <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    if yv <= 1:
        raise ValueError("y must exceed 1")
    alpha, beta = lemma_parameters(eps, yv)
    return LemmaAvoider(eps, yv, alpha, beta, source)


# ---------------------------------------------------------------------------
# strip of width 1/l(b) - eps

def reduced_length_rational(b: RatLike) -> int:
    """l(p/q) = max(p, q) = p for b = p/q > 1 in lowest terms."""
    b = as_rat(b)
    if b <= 1:
        raise ValueError("reduced length is defined here for rationals b > 1")
    return b.numerator


@dataclass(frozen=True)
class PowerStrip(AvoiderSet):
    b: Fraction
    epsilon: Fraction
    kind: ClassVar[str] = "power_strip"
    period_one: ClassVar[bool] = True

    @property
    def reduced_length(self) -> int:
        return reduced_length_rational(self.b)

    @property
    def width(self) -> Fraction:
        return Fraction(1, self.reduced_length) - self.epsilon

    @property
    def target(self) -> Fraction:
        return self.width

    def contains(self, x: RatLike) -> bool:
        return frac(as_rat(x)) <= self.width

    def contains_frac(self, f: Fraction) -> bool:
        return f <= self.width

    def materialize(self, w: Window | Interval) -> IntervalSet:
        return materialize_periodic(_strip(self.width), w)

    def descriptor(self) -> dict:
        return {"kind": self.kind, "b": rat_str(self.b), "epsilon": rat_str(self.epsilon)}


def build_power_strip(b: RatLike, epsilon: RatLike) -> PowerStrip:
    b, eps = as_rat(b), as_rat(epsilon)
    ell = reduced_length_rational(b)
    if not 0 < eps < Fraction(1, ell):
        raise ValueError(f"epsilon must lie in (0, 1/{ell})")
    return PowerStrip(b, eps)


# ---------------------------------------------------------------------------
# integer b: strip minus doubly exponential blocks of fractional bins

def block_index(m: int) -> int | None:
    """j with 2^(2^j) <= m < 2^(2^(j+1)), or None for m < 2.

    Works on bit lengths only, so m may have millions of digits.
    """
    if m < 2:
        return None
    return (m.bit_length() - 1).bit_length() - 1


@dataclass(frozen=True)
class IntegerPowerAvoider(AvoiderSet):
    """``S = T ∩ ((R+ \\ U) ∪ -(R+ \\ U))`` for integer b >= 2.

    ``T = {0 < <x> < 1/b - eps/2}``; ``U`` removes, from each integer cell
    ``[m, m+1)`` with ``m`` in block ``J_j = [2^(2^j), 2^(2^(j+1)))``, the
    fractional bin ``[i/N, (i+1)/N)`` with ``i = j mod N``.
    """

    b: int
    epsilon: Fraction
    N: int
    max_cells: int = 10**6
    kind: ClassVar[str] = "integer_power"

    @property
    def width(self) -> Fraction:
        return Fraction(1, self.b) - self.epsilon / 2

    @property
    def target(self) -> Fraction:
        return Fraction(1, self.b) - self.epsilon

    def removed_bin(self, m: int) -> int | None:
        """Fractional bin removed from the cell of |x| with integer part m (m >= 0)."""
        j = block_index(m)
        return None if j is None else j % self.N

    def in_u(self, z: RatLike) -> bool:
        """Whether a nonnegative z lies in U."""
        z = as_rat(z)
        m, r = divmod(z.numerator, z.denominator)
        return self._in_bin(m, r, z.denominator)

    def _in_bin(self, m: int, r: int, d: int) -> bool:
        # integer part m, fractional part r/d; no big-number Fraction arithmetic
        i = self.removed_bin(m)
        if i is None:
            return False
        return i * d <= r * self.N < (i + 1) * d

    def contains(self, x: RatLike) -> bool:
        if isinstance(x, int):
            return False  # <x> = 0 is outside T
        x = as_rat(x)
        d = x.denominator
        fl, r = divmod(x.numerator, d)
        if not 0 < r or not Fraction(r, d) < self.width:
            return False
        if fl >= 0:
            return not self._in_bin(fl, r, d)
        # |x| = (-fl - 1) + (d - r)/d
        return not self._in_bin(-fl - 1, d - r, d)

    def _cell(self, m: int) -> list[tuple[Fraction, Fraction]]:
        kept = [(Fraction(m), m + self.width)]
        if m >= 0:
            i = self.removed_bin(m)
            if i is None:
                return kept
            cut = (m + Fraction(i, self.N), m + Fraction(i + 1, self.N))
        else:
            i = self.removed_bin(-m - 1)
            if i is None:
                return kept
            # |x| = (-m-1) + (1 - <x>), so bin i of |x| is (1-(i+1)/N, 1-i/N] in <x>
            cut = (m + 1 - Fraction(i + 1, self.N), m + 1 - Fraction(i, self.N))
        lo, hi = kept[0]
        out = []
        if cut[0] > lo:
            out.append((lo, min(hi, cut[0])))
        if cut[1] < hi:
            out.append((max(lo, cut[1]), hi))
        return out

    def materialize(self, w: Window | Interval) -> IntervalSet:
        m0, m1 = math.floor(w.lo), math.ceil(w.hi)
        if m1 - m0 > self.max_cells:
            raise DepthError(f"window spans {m1 - m0} cells; limit is {self.max_cells}")
        pieces = []
        for m in range(m0, m1):
            pieces.extend(self._cell(m))
        return normalize(pieces).clip(w.lo, w.hi)

    def removed_stripes(self, w: Window | Interval) -> IntervalSet:
        """U ∪ -U restricted to the window (before intersecting with T)."""
        m0, m1 = math.floor(w.lo), math.ceil(w.hi)
        if m1 - m0 > self.max_cells:
            raise DepthError(f"window spans {m1 - m0} cells; limit is {self.max_cells}")
        pieces = []
        for m in range(m0, m1):
            if m >= 0:
                i = self.removed_bin(m)
                if i is not None:
                    pieces.append((m + Fraction(i, self.N), m + Fraction(i + 1, self.N)))
            else:
                i = self.removed_bin(-m - 1)
                if i is not None:
                    pieces.append((m + 1 - Fraction(i + 1, self.N), m + 1 - Fraction(i, self.N)))
        return normalize(pieces).clip(w.lo, w.hi)

    def descriptor(self) -> dict:
        return {"kind": self.kind, "b": self.b, "epsilon": rat_str(self.epsilon), "N": self.N}


def build_integer_power(b: int, epsilon: RatLike, N: int | None = None) -> IntegerPowerAvoider:
    """N defaults to the least integer with 1/N < eps/2.

    An explicit N only needs 1/N <= eps/2: each unit window then loses at
    most 1/N <= eps/2 of the strip, which still meets the 1/b - eps target.
    """
    eps = as_rat(epsilon)
    if int(b) != b or b < 2:
        raise ValueError("b must be an integer >= 2")
    if not 0 < eps < Fraction(1, b):
        raise ValueError(f"epsilon must lie in (0, 1/{b})")
    if N is None:
        N = math.floor(2 / eps) + 1
    elif Fraction(1, N) > eps / 2:
        raise ValueError(f"N = {N} is too small: need 1/N <= epsilon/2")
    return IntegerPowerAvoider(int(b), eps, int(N))


# ---------------------------------------------------------------------------
# enumeration over (dilation, integer shift)

@dataclass(frozen=True)
class Stripe:
    k: int
    i: int
    m: int
    n: int
    index: int  # original sequence index sigma(kN + i)
    base: Fraction  # b_m * a_index + n (before mirroring)
    interval: Interval  # closed stripe in final coordinates, stored as [lo, hi]


@dataclass(frozen=True)
class Component:
    """One of the four stripe families: dilation sign x translation floor range."""

    sign: int
    label: str
    dilations: tuple[Fraction, ...]  # |b_1|, |b_2|, ... of this sign
    stripes: tuple[Stripe, ...]
    sigma: dict = field(compare=False, repr=False)
    frontier: Fraction | None  # first base beyond depth (None: no stripes ever)

    def shift(self, n: int) -> int:
        """Integer shift for raw enumeration coordinate n >= 0."""
        return _SHIFTS[self.label][1](n)

    def covers_region(self) -> tuple[Fraction | None, Fraction | None]:
        """Open region (lo, hi) on which the depth-limited stripes are complete."""
        if self.frontier is None:
            return None, None
        return (None, self.frontier) if self.sign > 0 else (-self.frontier, None)


def _same(n: int) -> int:
    return n


def _below(n: int) -> int:
    return -1 - n


def _negated(n: int) -> int:
    return -n


# sign of the dilation and the map from raw coordinate n >= 0 to floor(sign * t)
_SHIFTS = {
    "T1": (1, _same),  # b > 0, t >= 0
    "T2": (1, _below),  # b > 0, t < 0
    "T3": (-1, _negated),  # b < 0, t >= 0
    "T4": (-1, _same),  # b < 0, t < 0
}


class _IndexSearch:
    """Least sequence index past a threshold, by galloping then bisection.

    The greedy selection can push indices up geometrically (a switch from a
    large dilation to a small one needs a term many times larger), so terms
    are evaluated directly at the indices probed rather than scanned.
    """

    def __init__(self, seq: SequenceSpec, limit: int | None):
        cap = seq.length
        if limit is not None:
            cap = limit if cap is None else min(cap, limit)
        self.seq, self.cap = seq, cap

    def term(self, j: int) -> Fraction:
        return self.seq.term(j)

    def first_above(self, start: int, b: Fraction, n: int, threshold: Fraction | None) -> int:
        """Least j >= start with b * a_j + n > threshold (any j if threshold is None)."""
        self._check(start)
        if threshold is None or b * self.term(start) + n > threshold:
            return start
        lo, step = start, 1  # b * a_lo + n <= threshold
        while True:
            hi = lo + step
            if self.cap is not None and hi > self.cap:
                hi = self.cap
                if hi == lo or not b * self.term(hi) + n > threshold:
                    self._check(self.cap + 1)
                break
            if b * self.term(hi) + n > threshold:
                break
            lo, step = hi, 2 * step
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if b * self.term(mid) + n > threshold:
                hi = mid
            else:
                lo = mid
        return hi

    def _check(self, j: int) -> None:
        if self.cap is not None and j > self.cap:
            raise SequenceError(
                f"enumeration needs term {j} of the sequence but only {self.cap} are available"
            )


def _build_component(
    label: str, dils: tuple[Fraction, ...], search: _IndexSearch, N: int, depth: int
) -> Component:
    sign, shift = _SHIFTS[label]
    if not dils:
        return Component(sign, label, dils, (), {}, None)
    stripes: list[Stripe] = []
    sigma: dict[int, int] = {}
    orig = 0
    last_base: Fraction | None = None
    frontier = None
    k = 0
    while True:
        k += 1
        m, n_raw = unpair(k)
        if m > len(dils):
            continue
        b, n = dils[m - 1], shift(n_raw)
        for i in range(N):
            # i = 0: separation from the previous block (n may change);
            # i > 0: separation within the block
            orig = search.first_above(orig + 1, b, n, None if last_base is None else last_base + 2)
            base = b * search.term(orig) + n
            if k > depth:
                frontier = base
                break
            sigma[k * N + i] = orig
            lo, hi = base + Fraction(i, N), base + Fraction(i + 1, N)
            iv = Interval(lo, hi) if sign > 0 else Interval(-hi, -lo)
            stripes.append(Stripe(k, i, m, n, orig, base, iv))
            last_base = base
        if k > depth:
            break
    return Component(sign, label, dils, tuple(stripes), sigma, frontier)


@dataclass(frozen=True)
class EnumerationAvoider(AvoiderSet):
    """``S = R \\ (T1 ∪ T2 ∪ T3 ∪ T4)`` with each T meeting unit intervals in <= 1/N.

    Stripes are laid down for pairing indices k <= depth; ``region`` is the
    open interval on which this finite stage coincides with the full set.
    """

    seq: SequenceSpec
    B: tuple[Fraction, ...]
    epsilon: Fraction
    depth: int
    N: int
    components: tuple[Component, ...]
    kind: ClassVar[str] = "enumeration"

    @property
    def target(self) -> Fraction:
        return 1 - self.epsilon

    @property
    def region(self) -> tuple[Fraction | None, Fraction | None]:
        lo = hi = None
        for c in self.components:
            clo, chi = c.covers_region()
            if clo is not None:
                lo = clo if lo is None else max(lo, clo)
            if chi is not None:
                hi = chi if hi is None else min(hi, chi)
        return lo, hi

    def stripes(self) -> list[Stripe]:
        return [s for c in self.components for s in c.stripes]

    def component(self, label: str) -> Component:
        for c in self.components:
            if c.label == label:
                return c
        raise KeyError(label)

    @cached_property
    def _removed(self) -> tuple[IntervalSet, frozenset]:
        removed = normalize((s.interval.lo, s.interval.hi) for s in self.stripes())
        return removed, frozenset(s.interval.hi for s in self.stripes())

    def contains(self, x: RatLike) -> bool:
        # stripes are closed; the half-open union misses only right endpoints
        x = as_rat(x)
        removed, right_ends = self._removed
        return not (removed.contains(x) or x in right_ends)

    def _check_window(self, w) -> None:
        lo, hi = self.region
        if (lo is not None and w.lo < lo) or (hi is not None and w.hi > hi):
            raise DepthError(
                f"window [{w.lo}, {w.hi}) leaves the materialized region "
                f"({lo if lo is not None else '-inf'}, {hi if hi is not None else 'inf'}); "
                f"increase depth beyond {self.depth}"
            )

    def materialize(self, w: Window | Interval) -> IntervalSet:
        self._check_window(w)
        removed, _ = self._removed
        return boolean_combine(IntervalSet((Interval(w.lo, w.hi),)), removed, "difference")

    def stripe_set(self, label: str) -> IntervalSet:
        return normalize((s.interval.lo, s.interval.hi) for s in self.component(label).stripes)

    def coverage_point(self, label: str, m: int, n: int, i: int, t: RatLike | None = None):
        """The sequence point guaranteed to fall in a stripe for pairing cell (m, n) and bin i.

        ``n`` is the raw enumeration coordinate (>= 0); the actual integer
        shift is component-specific.  Returns (point, stripe).  Without
        ``t``, the translation at the left edge of the bin is used.
        """
        comp = self.component(label)
        k = pair(m, n)
        if k > self.depth:
            raise DepthError(f"pair({m}, {n}) = {k} exceeds depth {self.depth}")
        idx = comp.sigma[k * self.N + i]
        shift = comp.shift(n)
        b = comp.dilations[m - 1] * comp.sign
        if t is None:
            frac_t = Fraction(i, self.N)
            # translation t with floor(sign * t) = shift and <sign * t> in bin i
            t = comp.sign * (shift + frac_t)
        point = b * self.seq.term(idx) + as_rat(t)
        stripe = next(s for s in comp.stripes if s.k == k and s.i == i)
        return point, stripe

    def growth_violations(self) -> list[str]:
        """Check both growth inequalities on every pair of consecutive stripes."""
        bad = []
        for c in self.components:
            prev = None
            for s in c.stripes:
                if prev is not None:
                    if s.k == prev.k and not s.base > prev.base + 2:
                        bad.append(f"{c.label} k={s.k} i={s.i}: within-block gap too small")
                    if s.k != prev.k and not s.base > prev.base + 2:
                        bad.append(f"{c.label} k={s.k}: block start too close to k={prev.k}")
                prev = s
        return bad

    def descriptor(self) -> dict:
        lo, hi = self.region
        return {
            "kind": self.kind,
            "sequence": self.seq.to_json(),
            "B": [rat_str(b) for b in self.B],
            "epsilon": rat_str(self.epsilon),
            "depth": self.depth,
            "N": self.N,
            "region": [None if lo is None else rat_str(lo), None if hi is None else rat_str(hi)],
            "subsequence": {
                c.label: {str(j): o for j, o in sorted(c.sigma.items())} for c in self.components
            },
        }


def build_enumeration_avoider(
    seq: SequenceSpec,
    B: Sequence[RatLike],
    epsilon: RatLike,
    depth: int,
    max_terms: int | None = None,
) -> EnumerationAvoider:
    """Greedy realization of the four-stripe construction.

    N = ceil(4/eps).  Terms are picked in enumeration order so that every
    stripe base exceeds the previous one by more than 2, which gives both
    growth inequalities.  Dilations in ``B`` are split by sign and keep
    their order; indices m beyond the supplied list contribute no stripes.
    """
    Bs = tuple(as_rat(b) for b in B)
    if any(b == 0 for b in Bs):
        raise ValueError("B must not contain 0")
    eps = as_rat(epsilon)
    if not 0 < eps <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    if depth < 0:
        raise ValueError("depth must be >= 0")
    N = math.ceil(4 / eps)
    pos = tuple(b for b in Bs if b > 0)
    neg = tuple(-b for b in Bs if b < 0)
    search = _IndexSearch(seq, max_terms)
    comps = []
    for label, (sign, _) in _SHIFTS.items():
        dils = pos if sign > 0 else neg
        comps.append(_build_component(label, dils, search, N, depth))
    return EnumerationAvoider(seq, Bs, eps, depth, N, tuple(comps))


def positive_rationals(count: int) -> list[Fraction]:
    """The first ``count`` positive rationals in Calkin-Wilf order: 1, 1/2, 2, 1/3, 3/2, ..."""
    out, q = [], Fraction(1)
    for _ in range(count):
        out.append(q)
        q = 1 / (2 * math.floor(q) - q + 1)
    return out


# ---------------------------------------------------------------------------
# descriptors

def avoider_from_descriptor(d: dict) -> AvoiderSet:
    kind = d.get("kind")
    if kind == "lemma2":
        return build_lemma_avoider(as_rat(d["epsilon"]), as_rat(d["y"]))
    if kind == "power_strip":
        return build_power_strip(as_rat(d["b"]), as_rat(d["epsilon"]))
    if kind == "integer_power":
        return build_integer_power(int(d["b"]), as_rat(d["epsilon"]), d.get("N"))
    if kind == "enumeration":
        return build_enumeration_avoider(
            sequence_from_json(d["sequence"]), [as_rat(b) for b in d["B"]], as_rat(d["epsilon"]), int(d["depth"])
        )
    raise ValueError(f"kind: unknown avoider kind {kind!r}")

"""Exact arithmetic on finite unions of half-open intervals.

An :class:`IntervalSet` is a sorted tuple of disjoint, non-adjacent
half-open intervals ``[lo, hi)`` with :class:`~fractions.Fraction`
endpoints.  Closed and open intervals from constructions differ from their
half-open stand-ins by finitely many points, which never changes a measure.

Every value is immutable and every function is pure.
"""

from __future__ import annotations

import json
import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal, NamedTuple, Sequence

from .rationals import RatLike, as_rat


class Interval(NamedTuple):
    """Half-open ``[lo, hi)``; stored only when ``lo < hi``."""

    lo: Fraction
    hi: Fraction

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo


def interval(lo: RatLike, hi: RatLike) -> Interval:
    lo, hi = as_rat(lo), as_rat(hi)
    if not lo < hi:
        raise ValueError(f"empty interval [{lo}, {hi})")
    return Interval(lo, hi)


@dataclass(frozen=True)
class Window:
    """A finite search window ``[lo, hi)`` at least one unit long."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", as_rat(self.lo))
        object.__setattr__(self, "hi", as_rat(self.hi))
        if self.hi - self.lo < 1:
            raise ValueError(f"window [{self.lo}, {self.hi}) is shorter than 1")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @classmethod
    def parse(cls, text: str) -> "Window":
        """``"lo:hi"`` with rational endpoints, e.g. ``"-10:10"``."""
        lo, sep, hi = text.partition(":")
        if not sep:
            raise ValueError(f"window {text!r} is not of the form lo:hi")
        return cls(as_rat(lo), as_rat(hi))

    def as_interval(self) -> Interval:
        return Interval(self.lo, self.hi)


@dataclass(frozen=True)
class IntervalSet:
    """Canonical finite union of half-open intervals.

    Build through :func:`normalize` (or :meth:`of`) unless the parts are
    already known to be sorted, disjoint and non-adjacent.
    """

    parts: tuple[Interval, ...] = ()

    @classmethod
    def of(cls, *pairs) -> "IntervalSet":
        return normalize(pairs)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __bool__(self) -> bool:
        return bool(self.parts)

    def __or__(self, other: "IntervalSet") -> "IntervalSet":
        return boolean_combine(self, other, "union")

    def __and__(self, other: "IntervalSet") -> "IntervalSet":
        return boolean_combine(self, other, "intersect")

    def __sub__(self, other: "IntervalSet") -> "IntervalSet":
        return boolean_combine(self, other, "difference")

    def measure(self) -> Fraction:
        return measure(self)

    def contains(self, x: RatLike) -> bool:
        x = as_rat(x)
        i = bisect_right(self.parts, (x, math.inf)) - 1
        return i >= 0 and self.parts[i].lo <= x < self.parts[i].hi

    def clip(self, lo: RatLike, hi: RatLike) -> "IntervalSet":
        lo, hi = as_rat(lo), as_rat(hi)
        if not lo < hi:
            return IntervalSet()
        return boolean_combine(self, IntervalSet((Interval(lo, hi),)), "intersect")

    def to_json(self) -> list[list[int]]:
        return [
            [p.lo.numerator, p.lo.denominator, p.hi.numerator, p.hi.denominator]
            for p in self.parts
        ]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[int]] | str) -> "IntervalSet":
        if isinstance(data, str):
            data = json.loads(data)
        pairs = []
        for row in data:
            if len(row) != 4:
                raise ValueError(f"expected [lo_num, lo_den, hi_num, hi_den], got {row!r}")
            a, b, c, d = (int(v) for v in row)
            pairs.append((Fraction(a, b), Fraction(c, d)))
        return normalize(pairs)


EMPTY = IntervalSet()


def normalize(raw: Iterable) -> IntervalSet:
    """Sort, drop empty pieces, and merge overlapping or touching intervals."""
    pieces = []
    for item in raw:
        lo, hi = as_rat(item[0]), as_rat(item[1])
        if lo < hi:
            pieces.append((lo, hi))
    pieces.sort()
    out: list[Interval] = []
    for lo, hi in pieces:
        if out and lo <= out[-1].hi:
            if hi > out[-1].hi:
                out[-1] = Interval(out[-1].lo, hi)
        else:
            out.append(Interval(lo, hi))
    return IntervalSet(tuple(out))


Mode = Literal["union", "intersect", "difference"]


def boolean_combine(a: IntervalSet, b: IntervalSet, mode: Mode) -> IntervalSet:
    """Exact union, intersection or difference of two normalized sets."""
    if mode == "union":
        return _union(a.parts, b.parts)
    if mode == "intersect":
        return IntervalSet(tuple(_intersect(a.parts, b.parts)))
    if mode == "difference":
        return IntervalSet(tuple(_difference(a.parts, b.parts)))
    raise ValueError(f"unknown mode {mode!r}")


def _union(xs, ys) -> IntervalSet:
    out: list[Interval] = []
    i = j = 0
    while i < len(xs) or j < len(ys):
        if j >= len(ys) or (i < len(xs) and xs[i].lo <= ys[j].lo):
            nxt = xs[i]
            i += 1
        else:
            nxt = ys[j]
            j += 1
        if out and nxt.lo <= out[-1].hi:
            if nxt.hi > out[-1].hi:
                out[-1] = Interval(out[-1].lo, nxt.hi)
        else:
            out.append(nxt)
    return IntervalSet(tuple(out))


def _intersect(xs, ys) -> list[Interval]:
    out = []
    i = j = 0
    while i < len(xs) and j < len(ys):
        x, y = xs[i], ys[j]
        lo = x.lo if x.lo > y.lo else y.lo
        if x.hi < y.hi:
            hi = x.hi
            i += 1
        else:
            hi = y.hi
            j += 1
        if lo < hi:
            out.append(Interval(lo, hi))
    # non-adjacent inputs cannot produce touching pieces; no merge pass
    return out


def _difference(xs, ys) -> list[Interval]:
    out = []
    j = 0
    for x in xs:
        lo = x.lo
        while j < len(ys) and ys[j].hi <= lo:
            j += 1
        k = j
        while k < len(ys) and ys[k].lo < x.hi:
            if ys[k].lo > lo:
                out.append(Interval(lo, ys[k].lo))
            if ys[k].hi > lo:
                lo = ys[k].hi
            if lo >= x.hi:
                break
            k += 1
        if lo < x.hi:
            out.append(Interval(lo, x.hi))
    return out


def affine_image(s: IntervalSet, scale: RatLike, shift: RatLike) -> IntervalSet:
    """Image ``{scale*x + shift : x in s}``.

    A negative scale reverses each part; the result is again stored
    half-open, so the image of ``[lo, hi)`` becomes ``[scale*hi+shift,
    scale*lo+shift)``.  Only endpoints (measure zero) change sides.
    """
    c, t = as_rat(scale), as_rat(shift)
    if c == 0:
        raise ValueError("affine_image needs a nonzero scale")
    if c > 0:
        parts = tuple(Interval(c * p.lo + t, c * p.hi + t) for p in s.parts)
    else:
        parts = tuple(Interval(c * p.hi + t, c * p.lo + t) for p in reversed(s.parts))
    return IntervalSet(parts)


def measure(s: IntervalSet) -> Fraction:
    return sum((p.hi - p.lo for p in s.parts), Fraction(0))


@dataclass(frozen=True)
class PeriodicSet:
    """``pattern + period*Z`` with ``pattern`` inside ``[0, period)``."""

    period: Fraction
    pattern: IntervalSet

    def __post_init__(self):
        object.__setattr__(self, "period", as_rat(self.period))
        if self.period <= 0:
            raise ValueError("period must be positive")
        if self.pattern.parts and (
            self.pattern.parts[0].lo < 0 or self.pattern.parts[-1].hi > self.period
        ):
            raise ValueError("pattern must lie inside [0, period)")

    @classmethod
    def strip(cls, period: RatLike, width: RatLike) -> "PeriodicSet":
        """``period*Z + [0, width)``; width is clamped to the period."""
        period, width = as_rat(period), as_rat(width)
        width = min(width, period)
        return cls(period, normalize([(0, width)]))

    def contains(self, x: RatLike) -> bool:
        x = as_rat(x)
        return self.pattern.contains(x - math.floor(x / self.period) * self.period)

    def density(self) -> Fraction:
        return measure(self.pattern) / self.period


def materialize_periodic(p: PeriodicSet, w: Window | Interval) -> IntervalSet:
    """Exact ``(pattern + period*Z) ∩ [w.lo, w.hi)``."""
    lo, hi = w.lo, w.hi
    if not p.pattern.parts or not lo < hi:
        return EMPTY
    # integer arithmetic over a shared denominator is much cheaper than
    # repeated Fraction arithmetic for long windows
    den = math.lcm(
        p.period.denominator,
        lo.denominator,
        hi.denominator,
        *(e.denominator for part in p.pattern.parts for e in part),
    )
    per = p.period.numerator * (den // p.period.denominator)
    wlo = lo.numerator * (den // lo.denominator)
    whi = hi.numerator * (den // hi.denominator)
    pat = [
        (q.lo.numerator * (den // q.lo.denominator), q.hi.numerator * (den // q.hi.denominator))
        for q in p.pattern.parts
    ]
    full = len(pat) == 1 and pat[0] == (0, per)
    if full:
        return IntervalSet((Interval(lo, hi),))
    out: list[Interval] = []
    k0 = wlo // per
    k1 = -(-whi // per)
    prev_hi = None
    for k in range(k0, k1 + 1):
        base = k * per
        for a, b in pat:
            a, b = base + a, base + b
            if a < wlo:
                a = wlo
            if b > whi:
                b = whi
            if a >= b:
                continue
            if prev_hi is not None and a == prev_hi:
                last = out[-1]
                out[-1] = Interval(last.lo, Fraction(b, den))
            else:
                out.append(Interval(Fraction(a, den), Fraction(b, den)))
            prev_hi = b
    return IntervalSet(tuple(out))


def _cumulative(s: IntervalSet) -> tuple[list[Fraction], list[Fraction], list[Fraction]]:
    los = [p.lo for p in s.parts]
    his = [p.hi for p in s.parts]
    cum = [Fraction(0)]
    for p in s.parts:
        cum.append(cum[-1] + (p.hi - p.lo))
    return los, his, cum


def _mass_below(los, his, cum, x: Fraction) -> Fraction:
    """``|s ∩ (-inf, x)|``."""
    j = bisect_left(los, x)
    if j == 0:
        return Fraction(0)
    total = cum[j]
    if his[j - 1] > x:
        total -= his[j - 1] - x
    return total


def min_unit_window_measure(s: IntervalSet, w: Window) -> tuple[Fraction, Fraction]:
    """Exact ``min |s ∩ [a, a+1]|`` over ``a in [w.lo, w.hi - 1]``, with a minimizer.

    ``a -> |s ∩ [a, a+1]|`` is piecewise linear with kinks only where ``a``
    or ``a + 1`` meets an endpoint of ``s``, so the minimum is attained on
    that finite candidate set (plus the two ends of the range).
    """
    a_lo, a_hi = w.lo, w.hi - 1
    candidates = {a_lo, a_hi}
    for p in s.parts:
        for e in (p.lo, p.hi, p.lo - 1, p.hi - 1):
            if a_lo < e < a_hi:
                candidates.add(e)
    los, his, cum = _cumulative(s)
    best_val, best_a = None, None
    for a in sorted(candidates):
        v = _mass_below(los, his, cum, a + 1) - _mass_below(los, his, cum, a)
        if best_val is None or v < best_val:
            best_val, best_a = v, a
    return best_val, best_a


def unit_window_profile(s: IntervalSet, a: RatLike) -> Fraction:
    """``|s ∩ [a, a+1]|`` for a single offset."""
    a = as_rat(a)
    los, his, cum = _cumulative(s)
    return _mass_below(los, his, cum, a + 1) - _mass_below(los, his, cum, a)

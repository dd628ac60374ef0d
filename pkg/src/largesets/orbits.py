"""Fractional-part orbits <x a_n + t> and the statistics built on them.

For integer-valued sequences and a rational dilation x = p/q, every orbit
point has denominator dividing q (times the denominator of t), so orbits are
computed as integer residues and only the residue of a_n modulo q is ever
formed.  Grid probes vectorize the residue arithmetic with numpy; all
results stay exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .intervals import (
    Interval,
    PeriodicSet,
    Window,
    boolean_combine,
    materialize_periodic,
    measure,
)
from .rationals import RatLike, as_rat, frac, rat_str
from .sequences import SequenceSpec

_INT64_SAFE = 1 << 62


# ---------------------------------------------------------------------------
# orbits

def orbit_residues(s: SequenceSpec, x: RatLike, t: RatLike, N: int) -> tuple[list[int], int]:
    """Residues r_n and modulus M with <x a_n + t> = r_n / M, for integer-valued ``s``."""
    x, t = as_rat(x), as_rat(t)
    M = math.lcm(x.denominator, t.denominator)
    p = x.numerator * (M // x.denominator)
    u = t.numerator * (M // t.denominator)
    # x a_n = p a_n / M, so only a_n mod M matters
    return [(p * r + u) % M for r in s.residues(N, M)], M


def fractional_orbit(s: SequenceSpec, x: RatLike, t: RatLike, N: int) -> list[Fraction]:
    """Sorted multiset {<x a_n + t> : 1 <= n <= N}."""
    if N < 1:
        raise ValueError("N must be >= 1")
    x, t = as_rat(x), as_rat(t)
    if s.integer_valued:
        res, M = orbit_residues(s, x, t, N)
        return [Fraction(r, M) for r in sorted(res)]
    return sorted(frac(x * a + t) for a in s.terms(N))


def max_gap(points: Sequence[Fraction]) -> Fraction:
    """Length of the largest arc of the circle [0, 1) free of points (wrap-around included)."""
    if not points:
        raise ValueError("max_gap needs at least one point")
    pts = sorted(frac(as_rat(p)) for p in points)
    best = pts[0] + 1 - pts[-1]
    for a, b in zip(pts, pts[1:]):
        if b - a > best:
            best = b - a
    return best


def covering_arc(points: Sequence[Fraction]) -> Fraction:
    """Shortest arc of the circle containing every point: ``1 - max_gap``."""
    return 1 - max_gap(points)


def _common_denominator(points: Sequence[Fraction]) -> int:
    M = 1
    for p in points:
        M = math.lcm(M, p.denominator)
        if M > _INT64_SAFE:
            break
    return M


def star_discrepancy(points: Sequence[Fraction]) -> Fraction:
    """Exact D*_N = max_i max(i/N - p_(i), p_(i) - (i-1)/N) over the sorted points."""
    N = len(points)
    if N == 0:
        raise ValueError("star_discrepancy needs at least one point")
    pts = sorted(as_rat(p) for p in points)
    M = _common_denominator(pts)
    if M * N < _INT64_SAFE:
        r = np.array([p.numerator * (M // p.denominator) for p in pts], dtype=np.int64)
        i = np.arange(1, N + 1, dtype=np.int64)
        num = max(int((i * M - r * N).max()), int((r * N - (i - 1) * M).max()))
        return Fraction(num, N * M)
    best = Fraction(0)
    for k, p in enumerate(pts, start=1):
        best = max(best, Fraction(k, N) - p, p - Fraction(k - 1, N))
    return best


def star_discrepancy_bruteforce(points: Sequence[Fraction]) -> Fraction:
    """sup over anchored intervals [0, u) by direct counting.

    The supremum is approached at u equal to a point (from either side), so
    counting points strictly below and at-or-below each point suffices.
    Quadratic; meant for cross-checks at small N.
    """
    pts = [as_rat(p) for p in points]
    N = len(pts)
    best = Fraction(0)
    for u in pts:
        below = sum(1 for p in pts if p < u)
        upto = sum(1 for p in pts if p <= u)
        best = max(best, abs(Fraction(below, N) - u), abs(Fraction(upto, N) - u))
    return best


@dataclass(frozen=True)
class OrbitStats:
    x: Fraction
    N: int
    max_gap: Fraction
    star_discrepancy: Fraction
    histogram: tuple[int, ...]
    t: Fraction = Fraction(0)


def orbit_stats(s: SequenceSpec, x: RatLike, N: int, t: RatLike = 0, bins: int = 10) -> OrbitStats:
    pts = fractional_orbit(s, x, t, N)
    hist = [0] * bins
    for p in pts:
        hist[math.floor(p * bins)] += 1
    return OrbitStats(as_rat(x), N, max_gap(pts), star_discrepancy(pts), tuple(hist), as_rat(t))


# ---------------------------------------------------------------------------
# exceptional-set probes

@dataclass(frozen=True)
class Grid:
    """Arithmetic grid start, start + step, ..., start + (count-1)*step."""

    start: Fraction
    step: Fraction
    count: int

    def __post_init__(self):
        object.__setattr__(self, "start", as_rat(self.start))
        object.__setattr__(self, "step", as_rat(self.step))
        if self.step <= 0:
            raise ValueError("grid step must be positive")
        if self.count < 0:
            raise ValueError("grid count must be nonnegative")

    @classmethod
    def over(cls, lo: RatLike, hi: RatLike, step: RatLike) -> "Grid":
        """Closed grid lo, lo+step, ..., up to and including hi when it lands on it."""
        lo, hi, step = as_rat(lo), as_rat(hi), as_rat(step)
        return cls(lo, step, math.floor((hi - lo) / step) + 1)

    def points(self) -> list[Fraction]:
        return [self.start + j * self.step for j in range(self.count)]

    def to_json(self) -> dict:
        return {"start": rat_str(self.start), "step": rat_str(self.step), "count": self.count}


@dataclass(frozen=True)
class ExceptionalProbe:
    """Grid points whose orbit leaves an empty arc of length >= delta after N terms."""

    delta: Fraction
    N: int
    grid: Grid
    hits: tuple[Fraction, ...]
    gaps: tuple[Fraction, ...] = field(repr=False, default=())
    discrepancies: tuple[Fraction, ...] = field(repr=False, default=())

    def hits_at(self, delta: RatLike) -> list[Fraction]:
        """Re-threshold the stored gaps without recomputing orbits."""
        d = as_rat(delta)
        return [x for x, g in zip(self.grid.points(), self.gaps) if g >= d]

    def csv_rows(self) -> list[tuple[str, str, str]]:
        return [
            (rat_str(x), rat_str(g), rat_str(d))
            for x, g, d in zip(self.grid.points(), self.gaps, self.discrepancies)
        ]


def _grid_stats_residue(s: SequenceSpec, grid: Grid, N: int, chunk: int = 256):
    q = math.lcm(grid.start.denominator, grid.step.denominator)
    c0 = grid.start.numerator * (q // grid.start.denominator)
    dc = grid.step.numerator * (q // grid.step.denominator)
    res = s.residues(N, q)
    gaps, discs = [], []
    if q * q < _INT64_SAFE and N * q < _INT64_SAFE:
        r = np.array(res, dtype=np.int64)
        idx = np.arange(1, N + 1, dtype=np.int64)
        for j0 in range(0, grid.count, chunk):
            js = np.arange(j0, min(grid.count, j0 + chunk), dtype=np.int64)
            c = (c0 + js * dc) % q
            vals = np.sort((c[:, None] * r[None, :]) % q, axis=1)
            wrap = vals[:, 0] + q - vals[:, -1]
            inner = np.diff(vals, axis=1).max(axis=1) if N > 1 else np.zeros_like(wrap)
            g = np.maximum(wrap, inner)
            d = np.maximum((idx * q - vals * N).max(axis=1), (vals * N - (idx - 1) * q).max(axis=1))
            gaps.extend(Fraction(int(v), q) for v in g)
            discs.extend(Fraction(int(v), N * q) for v in d)
        return gaps, discs
    for j in range(grid.count):
        c = (c0 + j * dc) % q
        pts = [Fraction(c * rr % q, q) for rr in res]
        gaps.append(max_gap(pts))
        discs.append(star_discrepancy(pts))
    return gaps, discs


def exceptional_probe(s: SequenceSpec, delta: RatLike, N: int, grid: Grid) -> ExceptionalProbe:
    """Finite-N evidence for E({a_n}): grid points x with max_gap(<x a_n>) >= delta."""
    delta = as_rat(delta)
    if N < 1:
        raise ValueError("N must be >= 1")
    if s.integer_valued:
        gaps, discs = _grid_stats_residue(s, grid, N)
    else:
        terms = s.terms(N)
        gaps, discs = [], []
        for x in grid.points():
            pts = [frac(x * a) for a in terms]
            gaps.append(max_gap(pts))
            discs.append(star_discrepancy(pts))
    hits = tuple(x for x, g in zip(grid.points(), gaps) if g >= delta)
    return ExceptionalProbe(delta, N, grid, hits, tuple(gaps), tuple(discs))


@dataclass(frozen=True)
class DimensionEstimate:
    """Least-squares box-counting slope; a finite-N proxy, not a dimension."""

    scales: tuple[Fraction, ...]
    counts: tuple[int, ...]
    slope: float
    r2: float
    raw_slope: float

    def csv_rows(self) -> list[tuple[str, int]]:
        return [(rat_str(s), c) for s, c in zip(self.scales, self.counts)]


def box_count(points: Iterable[Fraction], scale: Fraction) -> int:
    return len({math.floor(p / scale) for p in points})


def box_dimension_estimate(p: ExceptionalProbe, scales: Sequence[RatLike]) -> DimensionEstimate:
    """Slope of log(boxes hit) against log(1/scale) for the probe's hit set.

    ``scales`` must be strictly decreasing and each an integer multiple of
    the grid step.  The slope is clamped to [0, 1] (``raw_slope`` keeps the
    unclamped fit); an empty hit set reports slope 0.
    """
    sc = [as_rat(v) for v in scales]
    if len(sc) < 2:
        raise ValueError("need at least two scales")
    if any(b >= a for a, b in zip(sc, sc[1:])):
        raise ValueError("scales must be strictly decreasing")
    for v in sc:
        if (v / p.grid.step).denominator != 1:
            raise ValueError(f"scale {v} is not a multiple of the grid step {p.grid.step}")
    counts = tuple(box_count(p.hits, v) for v in sc)
    if not p.hits:
        return DimensionEstimate(tuple(sc), counts, 0.0, 0.0, 0.0)
    xs = np.array([math.log(1 / float(v)) for v in sc])
    ys = np.log(np.array(counts, dtype=float))
    raw, intercept = np.polyfit(xs, ys, 1)
    fitted = raw * xs + intercept
    ss_res = float(((ys - fitted) ** 2).sum())
    ss_tot = float(((ys - ys.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return DimensionEstimate(tuple(sc), counts, float(min(1.0, max(0.0, raw))), r2, float(raw))


# ---------------------------------------------------------------------------
# two periodic strips, and the Chung-Erdos bound

@dataclass(frozen=True)
class CongruenceCase:
    alpha: Fraction
    beta: Fraction
    epsilon: Fraction
    window: Window

    def __post_init__(self):
        for name in ("alpha", "beta", "epsilon"):
            object.__setattr__(self, name, as_rat(getattr(self, name)))
        if self.epsilon <= 0 or self.alpha <= 0 or self.beta <= 0:
            raise ValueError("alpha, beta and epsilon must be positive")
        if self.epsilon >= min(self.alpha, self.beta):
            raise ValueError("epsilon must be smaller than min(alpha, beta)")


@dataclass(frozen=True)
class StripOverlap:
    exact: Fraction
    asymptotic: Fraction
    relative_error: Fraction


def strip_overlap_measure(alpha: RatLike, beta: RatLike, epsilon: RatLike, window: Window) -> Fraction:
    """|(alpha Z + [0, eps)) ∩ (beta Z + [0, eps)) ∩ window|, no hypotheses checked."""
    a = materialize_periodic(PeriodicSet.strip(alpha, epsilon), window)
    b = materialize_periodic(PeriodicSet.strip(beta, epsilon), window)
    return measure(boolean_combine(a, b, "intersect"))


def lemma41_exact_measure(c: CongruenceCase) -> StripOverlap:
    """Exact overlap of two strip lattices on a window against eps^2 * width / (alpha beta)."""
    exact = strip_overlap_measure(c.alpha, c.beta, c.epsilon, c.window)
    asym = c.epsilon**2 * c.window.width / (c.alpha * c.beta)
    return StripOverlap(exact, asym, abs(exact - asym) / asym)


@dataclass(frozen=True)
class ChungErdos:
    lhs: Fraction
    rhs: Fraction
    holds: bool


def chung_erdos_check(events: Sequence[PeriodicSet], window: Window) -> ChungErdos:
    """P(union B_i) against (sum P(B_i))^2 / sum_ij P(B_i ∩ B_j), uniform P on the window."""
    if not events:
        raise ValueError("need at least one event")
    w = window.width
    sets = [materialize_periodic(e, window) for e in events]
    probs = [measure(s) / w for s in sets]
    union = sets[0]
    for s in sets[1:]:
        union = boolean_combine(union, s, "union")
    lhs = measure(union) / w
    denom = sum(probs, Fraction(0))
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            denom += 2 * measure(boolean_combine(sets[i], sets[j], "intersect")) / w
    rhs = sum(probs, Fraction(0)) ** 2 / denom if denom else Fraction(0)
    return ChungErdos(lhs, rhs, lhs >= rhs)


# ---------------------------------------------------------------------------
# escaping a sequence of target arcs

def in_arc(point: Fraction, arc: Interval) -> bool:
    """Whether a torus point lies on the arc starting at ``arc.lo`` of length ``arc.hi - arc.lo``.

    Arcs with ``hi > 1`` wrap around; length >= 1 is the whole circle.
    """
    length = arc.hi - arc.lo
    if length >= 1:
        return True
    return frac(point - arc.lo) < length


def delta_escape_probe(
    s: SequenceSpec, deltas: Sequence[Interval], x: RatLike, N: int
) -> int | None:
    """Least n <= N with <a_n x> in Delta_n (deltas cycled), or None if x survives to depth N."""
    if not deltas:
        raise ValueError("need at least one target interval")
    for d in deltas:
        if not d.hi > d.lo:
            raise ValueError("target intervals must have positive length")
    x = as_rat(x)
    if s.integer_valued:
        res, M = orbit_residues(s, x, 0, N)
        vals = (Fraction(r, M) for r in res)
    else:
        vals = (frac(x * a) for a in s.terms(N))
    for n, v in enumerate(vals, start=1):
        if in_arc(v, deltas[(n - 1) % len(deltas)]):
            return n
    return None

"""Largeness certificates and escape-witness search for constructed avoiders."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

from .constructions import AvoiderSet
from .intervals import Interval, Window, min_unit_window_measure
from .rationals import RatLike, as_rat, rat_str
from .sequences import Geometric, SequenceSpec

DEFAULT_DEPTH = 10**4

WITNESS = "witness"
INCONCLUSIVE = "inconclusive"
NO_WITNESS = "certified_no_witness"


@dataclass(frozen=True)
class LargenessReport:
    target: Fraction
    min_measure: Fraction
    argmin_window: Fraction
    windows_checked: Window
    approximate: bool = False

    @property
    def passed(self) -> bool:
        return self.min_measure >= self.target

    def to_json(self) -> dict:
        return {
            "target": rat_str(self.target),
            "min_measure": rat_str(self.min_measure),
            "argmin_window": rat_str(self.argmin_window),
            "window": [rat_str(self.windows_checked.lo), rat_str(self.windows_checked.hi)],
            "pass": self.passed,
            "approximate": self.approximate,
        }


def verify_largeness(a: AvoiderSet, w: Window) -> LargenessReport:
    """Exact min over unit intervals in ``w`` of |S ∩ I|, judged against the avoider's target."""
    value, arg = min_unit_window_measure(a.materialize(w), w)
    return LargenessReport(a.target, value, arg, w, a.approximate)


@dataclass(frozen=True)
class EscapeWitness:
    """Outcome of searching n <= depth with x a_n + t outside the avoider.

    ``status`` is ``"witness"``, ``"inconclusive"`` (none found up to
    ``depth``), or ``"certified_no_witness"`` (periodicity shows none exists
    at any depth).
    """

    x: Fraction
    t: Fraction
    witness_index: int | None
    depth: int
    status: str
    certified: bool = True  # False when approximation error could flip the verdict

    def to_json(self) -> dict:
        return {
            "x": rat_str(self.x),
            "t": rat_str(self.t),
            "witness_index": self.witness_index,
            "depth": self.depth,
            "status": self.status,
            "certified": self.certified,
        }


@dataclass(frozen=True)
class PeriodCertificate:
    b: int
    modulus: int
    preperiod: int
    period: int

    def verify(self) -> bool:
        m = self.modulus
        return pow(self.b, self.preperiod + self.period, m) == pow(self.b, self.preperiod, m)


def eventual_period(b: int, modulus: int) -> PeriodCertificate:
    """Minimal preperiod and period of n -> b^n mod modulus (n >= 0)."""
    if b < 2 or modulus < 1:
        raise ValueError("need b >= 2 and modulus >= 1")
    seen: dict[int, int] = {}
    r, n = 1 % modulus, 0
    while r not in seen:
        seen[r] = n
        r = r * b % modulus
        n += 1
    return PeriodCertificate(b, modulus, seen[r], n - seen[r])


def _periodic_horizon(a: AvoiderSet, s: SequenceSpec, x: Fraction, t: Fraction) -> int | None:
    """Depth after which a witness-free scan certifies absence at every depth.

    Needs membership that depends on <z> only, an integer geometric sequence,
    and a rational x: then <x b^n + t> is a function of b^n mod den(x),
    which is eventually periodic.
    """
    if not (a.period_one and isinstance(s, Geometric) and s.integer_valued):
        return None
    cert = eventual_period(int(s.b), x.denominator)
    # residues for n >= 1 all occur among n = 1 .. max(pre, 1) + period - 1
    return max(cert.preperiod, 1) + cert.period - 1


def _margin_clear(a: AvoiderSet, z: Fraction, err: Fraction) -> bool:
    """No point of the avoider within ``err`` of z (so an approximate z still escapes)."""
    if err == 0:
        return True
    if a.contains(z - err) or a.contains(z + err):
        return False
    lo = math.floor(z - err)
    hood = a.materialize(Window(lo, max(lo + 1, math.ceil(z + err))))
    return not hood.clip(z - err, z + err)


def find_escape_witness(
    a: AvoiderSet,
    s: SequenceSpec,
    x: RatLike,
    t: RatLike,
    depth: int = DEFAULT_DEPTH,
    x_error: RatLike = 0,
    t_error: RatLike = 0,
) -> EscapeWitness:
    """Least n <= depth with x a_n + t not in the avoider.

    ``x_error``/``t_error`` bound how far the supplied rationals may be from
    the intended (possibly irrational) values; a witness is then certified
    only if the whole error ball around x a_n + t misses the set.
    """
    x, t = as_rat(x), as_rat(t)
    x_err, t_err = as_rat(x_error), as_rat(t_error)
    if x == 0:
        raise ValueError("the dilation x must be nonzero")
    exact = x_err == 0 and t_err == 0 and s.exact
    horizon = _periodic_horizon(a, s, x, t) if exact else None
    scan_to = depth if horizon is None else min(depth, horizon)
    for n, an in zip(range(1, scan_to + 1), s.iter_terms()):
        z = x * an + t
        if not a.contains(z):
            certified = True
            if not exact:
                err = abs(an) * x_err + t_err + abs(x) * s.error_bound(n)
                certified = _margin_clear(a, z, err)
            return EscapeWitness(x, t, n, depth, WITNESS, certified)
    if horizon is not None and horizon <= depth:
        return EscapeWitness(x, t, None, depth, NO_WITNESS)
    return EscapeWitness(x, t, None, depth, INCONCLUSIVE)


@dataclass(frozen=True)
class ScanResult:
    table: tuple[EscapeWitness, ...]

    @property
    def inconclusive(self) -> int:
        return sum(1 for w in self.table if w.status == INCONCLUSIVE)

    @property
    def no_witness(self) -> int:
        return sum(1 for w in self.table if w.status == NO_WITNESS)

    @property
    def max_witness_index(self) -> int | None:
        idx = [w.witness_index for w in self.table if w.witness_index is not None]
        return max(idx) if idx else None

    def csv_rows(self) -> list[tuple[str, str, str]]:
        return [
            (rat_str(w.x), rat_str(w.t), "" if w.witness_index is None else str(w.witness_index))
            for w in self.table
        ]

    def summary(self) -> dict:
        return {
            "cells": len(self.table),
            "max_witness_index": self.max_witness_index,
            "inconclusive": self.inconclusive,
            "certified_no_witness": self.no_witness,
        }


def _scan_cell(args) -> EscapeWitness:
    a, s, x, t, depth = args
    return find_escape_witness(a, s, x, t, depth)


def grid_escape_scan(
    a: AvoiderSet,
    s: SequenceSpec,
    x_grid: Sequence[RatLike],
    t_grid: Sequence[RatLike],
    depth: int = DEFAULT_DEPTH,
    workers: int = 1,
) -> ScanResult:
    """Witness search over every (x, t) pair; the table is sorted by (x, t)."""
    xs = sorted({as_rat(x) for x in x_grid})
    ts = sorted({as_rat(t) for t in t_grid})
    cells = [(a, s, x, t, depth) for x, t in product(xs, ts)]
    if workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            table = list(pool.map(_scan_cell, cells, chunksize=max(1, len(cells) // (4 * workers))))
    else:
        table = [_scan_cell(c) for c in cells]
    return ScanResult(tuple(table))

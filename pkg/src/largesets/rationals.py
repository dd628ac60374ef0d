"""Exact scalar helpers: parsing, fractional parts, and named irrational approximants.

Every endpoint in the package is a :class:`fractions.Fraction`.  Irrational
parameters enter as continued-fraction convergents whose error bound is kept
alongside the value, so a caller can always tell an exact verdict from an
approximate one.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

RatLike = Union[int, str, Fraction]


class PrecisionError(ValueError):
    """Raised when a requested precision cannot be supplied."""


def as_rat(value: RatLike) -> Fraction:
    """Coerce ints, ``"p/q"`` strings, decimal strings, and named approximants to a Fraction.

    Floats are refused: they would silently smuggle binary rounding into an
    exact pipeline.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        if "@" in value:
            return parse_approximant(value).value
        return Fraction(value.strip())
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def frac(x: Fraction) -> Fraction:
    """Fractional part in [0, 1)."""
    return x - math.floor(x)


def rat_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# --------------------------------------------------------------------------
# continued fractions

def _sqrt_cf(n: int) -> Iterator[int]:
    """Partial quotients of sqrt(n), n not a perfect square."""
    a0 = math.isqrt(n)
    yield a0
    m, d, a = 0, 1, a0
    while True:
        m = d * a - m
        d = (n - m * m) // d
        a = (a0 + m) // d
        yield a


def _golden_cf() -> Iterator[int]:
    while True:
        yield 1


def _cf_source(name: str) -> Iterator[int]:
    if name in ("golden", "phi"):
        return _golden_cf()
    m = re.fullmatch(r"sqrt(\d+)", name)
    if m:
        n = int(m.group(1))
        if math.isqrt(n) ** 2 == n:
            raise ValueError(f"sqrt{n} is rational; pass it as an integer")
        return _sqrt_cf(n)
    raise ValueError(f"unknown irrational {name!r} (known: golden, sqrt<n>)")


@dataclass(frozen=True)
class Approximant:
    """A rational stand-in for a named irrational, with a proven error bound."""

    name: str
    precision: Fraction
    value: Fraction
    error_bound: Fraction

    @property
    def label(self) -> str:
        return f"{self.name}@{self.precision}"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "precision": rat_str(self.precision),
            "value": rat_str(self.value),
            "error_bound": rat_str(self.error_bound),
        }


def approximant(name: str, precision: RatLike) -> Approximant:
    """First convergent p_k/q_k of ``name`` with 1/(q_k q_{k+1}) <= precision.

    The bound |x - p_k/q_k| < 1/(q_k q_{k+1}) holds for every convergent, so
    the recorded error is rigorous.
    """
    eps = as_rat(precision)
    if eps <= 0:
        raise PrecisionError("precision must be positive")
    if eps < Fraction(1, 10**200):
        raise PrecisionError(f"precision {eps} below supported 1e-200")
    quotients = _cf_source(name)
    p_prev, q_prev = 1, 0
    a = next(quotients)
    p, q = a, 1
    while True:
        a = next(quotients)
        p_next, q_next = a * p + p_prev, a * q + q_prev
        bound = Fraction(1, q * q_next)
        if bound <= eps:
            return Approximant(name, eps, Fraction(p, q), bound)
        p_prev, q_prev, p, q = p, q, p_next, q_next


def parse_approximant(text: str) -> Approximant:
    """Parse ``name@precision``, e.g. ``golden@1e-12`` or ``sqrt2@1/10**9``."""
    name, _, prec = text.partition("@")
    prec = prec.strip()
    m = re.fullmatch(r"1/10\*\*(\d+)", prec)
    precision = Fraction(1, 10 ** int(m.group(1))) if m else Fraction(prec)
    return approximant(name.strip(), precision)


def parse_scalar(text: str) -> tuple[Fraction, Approximant | None]:
    """Parse a command-line scalar; returns the value and its provenance if approximate."""
    if "@" in text:
        ap = parse_approximant(text)
        return ap.value, ap
    return Fraction(text.strip()), None

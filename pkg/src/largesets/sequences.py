"""Strictly increasing sequences a_1 < a_2 < ... with exact terms.

Every family exposes ``term(n)`` (1-based), ``terms(N)`` and, when all terms
are integers, ``residues(N, q)`` which yields ``a_n mod q`` without forming
the (possibly astronomically large) terms themselves.
"""

from __future__ import annotations

import json
import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import ClassVar, Iterator, Sequence

import numpy as np

from .rationals import Approximant, RatLike, as_rat, parse_scalar, rat_str


class SequenceError(ValueError):
    pass


class SequenceSpec:
    """Base class; subclasses set ``kind`` and implement ``term``."""

    kind: ClassVar[str] = ""
    integer_valued: bool = False
    name: str = ""

    def term(self, n: int) -> Fraction:
        raise NotImplementedError

    def error_bound(self, n: int) -> Fraction:
        """Absolute error of ``term(n)``; zero for exact families."""
        return Fraction(0)

    def terms(self, N: int) -> list[Fraction]:
        out = [self.term(n) for n in range(1, N + 1)]
        _check_increasing(out, self.name or self.kind)
        return out

    def iter_terms(self) -> Iterator[Fraction]:
        """a_1, a_2, ... lazily."""
        n = 1
        while True:
            yield self.term(n)
            n += 1

    def int_terms(self, N: int) -> list[int]:
        if not self.integer_valued:
            raise SequenceError(f"{self.kind} sequence is not integer valued")
        return [int(t) for t in self.terms(N)]

    def residues(self, N: int, q: int) -> list[int]:
        """``[a_n mod q for n in 1..N]`` for integer-valued families."""
        return [t % q for t in self.int_terms(N)]

    def floors(self, N: int) -> list[int]:
        return [math.floor(t) for t in self.terms(N)]

    def to_json(self) -> dict:
        raise NotImplementedError

    @property
    def exact(self) -> bool:
        return True

    @property
    def length(self) -> int | None:
        """Number of terms, or None for an infinite sequence."""
        return None


def _check_increasing(vals: Sequence[Fraction], label: str, start: int = 1) -> None:
    for k in range(1, len(vals)):
        if not vals[k] > vals[k - 1]:
            raise SequenceError(
                f"{label}: term {start + k} = {vals[k]} does not exceed term {start + k - 1}"
            )


@dataclass(frozen=True)
class Polynomial(SequenceSpec):
    """a_n = sum coeffs[i] * n**i (coefficients in ascending degree)."""

    coeffs: tuple[Fraction, ...]
    name: str = ""
    kind: ClassVar[str] = "polynomial"

    def __post_init__(self):
        cs = tuple(as_rat(c) for c in self.coeffs)
        while len(cs) > 1 and cs[-1] == 0:
            cs = cs[:-1]
        object.__setattr__(self, "coeffs", cs)
        if len(cs) < 2:
            raise SequenceError("polynomial sequence must be nonconstant")
        # a nonconstant polynomial is eventually monotone; demand it from n = 1
        _check_increasing([self.term(n) for n in range(1, len(cs) + 3)], self.label)

    @property
    def label(self) -> str:
        return self.name or "poly(" + ",".join(rat_str(c) for c in self.coeffs) + ")"

    @property
    def integer_valued(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def term(self, n: int) -> Fraction:
        _check_index(n)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * n + c
        return acc

    def residues(self, N: int, q: int) -> list[int]:
        if not self.integer_valued:
            raise SequenceError("polynomial has non-integer coefficients")
        cs = [int(c) % q for c in self.coeffs]
        out = []
        for n in range(1, N + 1):
            acc = 0
            for c in reversed(cs):
                acc = (acc * n + c) % q
            out.append(acc)
        return out

    def to_json(self) -> dict:
        return {"kind": self.kind, "coeffs": [rat_str(c) for c in self.coeffs]}


@dataclass(frozen=True)
class Geometric(SequenceSpec):
    """a_n = b**n for rational b > 1."""

    b: Fraction
    name: str = ""
    kind: ClassVar[str] = "geometric"

    def __post_init__(self):
        object.__setattr__(self, "b", as_rat(self.b))
        if self.b <= 1:
            raise SequenceError("geometric ratio must exceed 1")

    @property
    def integer_valued(self) -> bool:
        return self.b.denominator == 1

    def term(self, n: int) -> Fraction:
        _check_index(n)
        return self.b**n

    def terms(self, N: int) -> list[Fraction]:
        out, t = [], Fraction(1)
        for _ in range(N):
            t *= self.b
            out.append(t)
        return out

    def iter_terms(self) -> Iterator[Fraction]:
        t = Fraction(1)
        while True:
            t *= self.b
            yield t

    def residues(self, N: int, q: int) -> list[int]:
        if not self.integer_valued:
            raise SequenceError("geometric ratio is not an integer")
        b, r, out = int(self.b) % q, 1 % q, []
        for _ in range(N):
            r = r * b % q
            out.append(r)
        return out

    def to_json(self) -> dict:
        return {"kind": self.kind, "b": rat_str(self.b)}


@dataclass(frozen=True)
class IntegerPower(Geometric):
    """a_n = b**n for an integer base b >= 2."""

    kind: ClassVar[str] = "integer_power"

    def __post_init__(self):
        super().__post_init__()
        if self.b.denominator != 1 or self.b < 2:
            raise SequenceError("integer_power needs an integer base >= 2")

    @property
    def base(self) -> int:
        return int(self.b)

    def to_json(self) -> dict:
        return {"kind": self.kind, "b": int(self.b)}


DOUBLY_EXPONENTIAL = "doubly_exponential"


@dataclass(frozen=True)
class Block(SequenceSpec):
    """The sorted set {f(i) + j : 1 <= j <= i}.

    ``f`` is an explicit increasing table (f(1), f(2), ...) or the built-in
    schedule ``"doubly_exponential"``, f(i) = 2**(2**i).  Blocks must not
    overlap: f(i+1) > f(i) + i.
    """

    f: tuple[Fraction, ...] | str = DOUBLY_EXPONENTIAL
    name: str = ""
    kind: ClassVar[str] = "block"

    def __post_init__(self):
        if isinstance(self.f, str):
            if self.f != DOUBLY_EXPONENTIAL:
                raise SequenceError(f"unknown block schedule {self.f!r}")
        else:
            table = tuple(as_rat(v) for v in self.f)
            if not table:
                raise SequenceError("block schedule table is empty")
            for i in range(1, len(table)):
                if not table[i] > table[i - 1] + i:
                    raise SequenceError(
                        f"blocks overlap: f({i + 1}) = {table[i]} must exceed f({i}) + {i}"
                    )
            object.__setattr__(self, "f", table)

    @property
    def integer_valued(self) -> bool:
        return isinstance(self.f, str) or all(v.denominator == 1 for v in self.f)

    def schedule(self, i: int) -> Fraction:
        if isinstance(self.f, str):
            return Fraction(2 ** (2**i))
        if i > len(self.f):
            raise SequenceError(f"block schedule has {len(self.f)} entries; block {i} needed")
        return self.f[i - 1]

    @staticmethod
    def locate(n: int) -> tuple[int, int]:
        """Block index i and offset j (1 <= j <= i) of the n-th term."""
        _check_index(n)
        i = (math.isqrt(8 * n) + 1) // 2
        while i * (i + 1) // 2 < n:
            i += 1
        while i * (i - 1) // 2 >= n:
            i -= 1
        return i, n - i * (i - 1) // 2

    def term(self, n: int) -> Fraction:
        i, j = self.locate(n)
        return self.schedule(i) + j

    def terms(self, N: int) -> list[Fraction]:
        out: list[Fraction] = []
        i = 1
        while len(out) < N:
            fi = self.schedule(i)
            out.extend(fi + j for j in range(1, i + 1))
            i += 1
        return out[:N]

    def residues(self, N: int, q: int) -> list[int]:
        if not self.integer_valued:
            raise SequenceError("block schedule is not integer valued")
        out: list[int] = []
        i = 1
        while len(out) < N:
            if isinstance(self.f, str):
                fi = pow(2, 2**i, q)
            else:
                fi = int(self.f[i - 1]) % q
            out.extend((fi + j) % q for j in range(1, i + 1))
            i += 1
        return out[:N]

    def to_json(self) -> dict:
        f = self.f if isinstance(self.f, str) else [rat_str(v) for v in self.f]
        return {"kind": self.kind, "f": f}


@lru_cache(maxsize=8)
def prime_table(bound: int) -> tuple[int, ...]:
    """Primes up to ``bound`` (cached, read-only)."""
    if bound < 2:
        return ()
    sieve = np.ones(bound + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(bound) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return tuple(int(p) for p in np.flatnonzero(sieve))


def sieve_bound_for(n: int) -> int:
    """An upper bound for the n-th prime (Rosser's bound, n >= 6)."""
    if n < 6:
        return 13
    ln = math.log(n)
    return int(n * (ln + math.log(ln))) + 1


def iroot(x: int, k: int) -> int:
    """floor(x ** (1/k)) for x >= 0."""
    if x < 2:
        return x
    r = 1 << -(-x.bit_length() // k)
    while True:
        s = ((k - 1) * r + x // r ** (k - 1)) // k
        if s >= r:
            break
        r = s
    while r**k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


@dataclass(frozen=True)
class PrimePower(SequenceSpec):
    """a_n = sum alpha_j * p_n**theta_j over the primes p_1 = 2, p_2 = 3, ...

    Non-integer powers are evaluated as exact integer roots truncated at
    ``digits`` decimal places; approximant coefficients contribute their own
    recorded error.  ``error_bound(n)`` adds both up.
    """

    exponents: tuple[Fraction, ...]
    coeffs: tuple[Fraction, ...]
    coeff_errors: tuple[Fraction, ...] = ()
    sieve_bound: int = 10**6
    digits: int = 30
    name: str = ""
    kind: ClassVar[str] = "prime_power"

    def __post_init__(self):
        ex = tuple(as_rat(t) for t in self.exponents)
        cs = tuple(as_rat(c) for c in self.coeffs)
        errs = tuple(as_rat(e) for e in self.coeff_errors) or (Fraction(0),) * len(cs)
        if not ex or len(ex) != len(cs) or len(errs) != len(cs):
            raise SequenceError("exponents and coeffs must be nonempty and equally long")
        if any(t <= 0 for t in ex) or list(ex) != sorted(set(ex)):
            raise SequenceError("exponents must be positive and strictly increasing")
        if any(c == 0 for c in cs):
            raise SequenceError("coefficients must be nonzero")
        object.__setattr__(self, "exponents", ex)
        object.__setattr__(self, "coeffs", cs)
        object.__setattr__(self, "coeff_errors", errs)

    @property
    def exact(self) -> bool:
        return all(t.denominator == 1 for t in self.exponents) and not any(self.coeff_errors)

    def prime(self, n: int) -> int:
        _check_index(n)
        table = prime_table(self.sieve_bound)
        if n > len(table):
            raise SequenceError(
                f"prime p_{n} is beyond the sieve bound {self.sieve_bound}; "
                f"use sieve_bound >= {sieve_bound_for(n)}"
            )
        return table[n - 1]

    def _power(self, p: int, theta: Fraction) -> Fraction:
        a, b = theta.numerator, theta.denominator
        if b == 1:
            return Fraction(p**a)
        scale = 10 ** (self.digits + 3)
        return Fraction(iroot(p**a * scale**b, b), scale)

    def term(self, n: int) -> Fraction:
        p = self.prime(n)
        return sum((c * self._power(p, t) for c, t in zip(self.coeffs, self.exponents)), Fraction(0))

    def error_bound(self, n: int) -> Fraction:
        p = self.prime(n)
        trunc = Fraction(1, 10 ** (self.digits + 3))
        err = Fraction(0)
        for c, e, t in zip(self.coeffs, self.coeff_errors, self.exponents):
            pw = self._power(p, t)
            if t.denominator != 1:
                err += abs(c) * trunc
            err += e * (pw + trunc)
        return err

    def terms(self, N: int) -> list[Fraction]:
        out = [self.term(n) for n in range(1, N + 1)]
        _check_increasing(out, self.name or self.kind)
        return out

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "exponents": [rat_str(t) for t in self.exponents],
            "coeffs": [rat_str(c) for c in self.coeffs],
            "coeff_errors": [rat_str(e) for e in self.coeff_errors],
            "sieve_bound": self.sieve_bound,
            "digits": self.digits,
        }


@dataclass(frozen=True)
class Explicit(SequenceSpec):
    """A finite explicit list of terms."""

    values: tuple[Fraction, ...]
    name: str = ""
    kind: ClassVar[str] = "explicit"

    def __post_init__(self):
        vals = tuple(as_rat(v) for v in self.values)
        if not vals:
            raise SequenceError("explicit sequence is empty")
        _check_increasing(vals, self.name or "explicit")
        object.__setattr__(self, "values", vals)

    @property
    def integer_valued(self) -> bool:
        return all(v.denominator == 1 for v in self.values)

    @property
    def length(self) -> int:
        return len(self.values)

    def term(self, n: int) -> Fraction:
        _check_index(n)
        if n > len(self.values):
            raise SequenceError(f"explicit sequence has only {len(self.values)} terms; term {n} requested")
        return self.values[n - 1]

    def to_json(self) -> dict:
        return {"kind": self.kind, "terms": [rat_str(v) for v in self.values]}


def _check_index(n: int) -> None:
    if n < 1:
        raise SequenceError(f"sequence index must be >= 1, got {n}")


# convenience constructors

def identity() -> Polynomial:
    return Polynomial((0, 1), name="n")


def squares() -> Polynomial:
    return Polynomial((0, 0, 1), name="n^2")


def powers_of(b: RatLike) -> Geometric:
    b = as_rat(b)
    if b.denominator == 1 and b >= 2:
        return IntegerPower(b, name=f"{b}^n")
    return Geometric(b, name=f"({rat_str(b)})^n")


_KINDS = {cls.kind: cls for cls in (Polynomial, Geometric, IntegerPower, Block, PrimePower, Explicit)}


def sequence_from_json(data: dict | str) -> SequenceSpec:
    """Build a sequence from its JSON form, e.g. ``{"kind": "geometric", "b": "2"}``."""
    if isinstance(data, str):
        data = json.loads(data)
    kind = data.get("kind")
    if kind not in _KINDS:
        raise SequenceError(f"kind: unknown sequence kind {kind!r} (known: {sorted(_KINDS)})")
    name = data.get("name", "")
    try:
        if kind == "polynomial":
            return Polynomial(tuple(as_rat(c) for c in data["coeffs"]), name=name)
        if kind in ("geometric", "integer_power"):
            return _KINDS[kind](as_rat(data["b"]), name=name)
        if kind == "block":
            f = data.get("f", DOUBLY_EXPONENTIAL)
            return Block(f if isinstance(f, str) else tuple(as_rat(v) for v in f), name=name)
        if kind == "explicit":
            return Explicit(tuple(as_rat(v) for v in data["terms"]), name=name)
        coeffs, errs = [], []
        for c in data["coeffs"]:
            value, ap = parse_scalar(str(c))
            coeffs.append(value)
            errs.append(ap.error_bound if ap else Fraction(0))
        if "coeff_errors" in data and not any(errs):
            errs = [as_rat(e) for e in data["coeff_errors"]]
        return PrimePower(
            tuple(as_rat(t) for t in data["exponents"]),
            tuple(coeffs),
            tuple(errs),
            sieve_bound=int(data.get("sieve_bound", 10**6)),
            digits=int(data.get("digits", 30)),
            name=name,
        )
    except KeyError as exc:
        raise SequenceError(f"{exc.args[0]}: missing field for {kind} sequence") from None


# ---------------------------------------------------------------------------
# diagnostics

@dataclass(frozen=True)
class DensityEstimate:
    """Best hit ratio #(A ∩ {h+1..h+n}) / n over the offsets examined."""

    window_length: int
    best_offset: int
    count: int
    ratio: Fraction
    complete: bool = True  # False when the term budget did not reach past the last window


def banach_density_estimate(
    s: SequenceSpec, n: int, h_range: tuple[int, int], n_max_terms: int
) -> DensityEstimate:
    """Maximize the hit count of A = {floor(a_k) : k <= n_max_terms} over windows of length n.

    The count only changes when a window end crosses an element of A, so it
    suffices to try offsets h = a - 1 for a in A (clamped to ``h_range``)
    together with the two range ends.
    """
    if n <= 0:
        raise ValueError("window length must be positive")
    h_lo, h_hi = h_range
    if h_lo > h_hi:
        raise ValueError("empty h_range")
    A = sorted(set(s.floors(n_max_terms)))
    candidates = {h_lo, h_hi}
    lo_i = bisect_left(A, h_lo + 1)
    hi_i = bisect_right(A, h_hi + 1)
    candidates.update(a - 1 for a in A[lo_i:hi_i])
    best_h, best_c = h_lo, -1
    for h in sorted(candidates):
        c = bisect_right(A, h + n) - bisect_left(A, h + 1)
        if c > best_c:
            best_h, best_c = h, c
    complete = bool(A) and A[-1] > h_hi + n
    return DensityEstimate(n, best_h, best_c, Fraction(best_c, n), complete)


@dataclass(frozen=True)
class GrowthProfile:
    ratios: tuple[Fraction, ...]
    one_separated: bool

    @property
    def min_ratio(self) -> Fraction:
        return min(self.ratios)

    @property
    def max_ratio(self) -> Fraction:
        return max(self.ratios)


def growth_profile(s: SequenceSpec, N: int) -> GrowthProfile:
    """Consecutive ratios a_{n+1}/a_n for n < N, and whether a_{n+1} - a_n >= 1 throughout."""
    if N < 2:
        raise ValueError("growth_profile needs N >= 2")
    ts = s.terms(N)
    if any(t == 0 for t in ts[:-1]):
        raise SequenceError("ratio undefined: a zero term precedes another term")
    ratios = tuple(ts[k + 1] / ts[k] for k in range(N - 1))
    sep = all(ts[k + 1] - ts[k] >= 1 for k in range(N - 1))
    return GrowthProfile(ratios, sep)


"""Outward-rounded enclosures.

Endpoints are either exact (``int`` / ``Fraction``) or ``float``. Arithmetic on
two exact enclosures stays exact; as soon as a float is involved each endpoint
is rounded outward by one ulp, which is enough for IEEE-754 correctly rounded
``+ - * /``. Transcendental functions are not correctly rounded, so their
results are widened by a configurable number of ulps (default 2), set through
:func:`padding`.
"""

from __future__ import annotations

import contextlib
import contextvars
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

Real = Union[int, Fraction, float]

DEFAULT_PAD_ULPS = 2
_pad_ulps = contextvars.ContextVar("pad_ulps", default=DEFAULT_PAD_ULPS)

INF = math.inf


def pad_ulps() -> int:
    return _pad_ulps.get()


@contextlib.contextmanager
def padding(ulps: int):
    """Temporarily change the transcendental padding (in ulps)."""
    if ulps < 1:
        raise ValueError("padding must be at least one ulp")
    token = _pad_ulps.set(int(ulps))
    try:
        yield
    finally:
        _pad_ulps.reset(token)


def _is_exact(x) -> bool:
    return isinstance(x, Rational)


def down(x: Real) -> float:
    """Largest float <= x."""
    if isinstance(x, float):
        return x
    try:
        f = float(x)
    except OverflowError:
        return -INF if x < 0 else math.nextafter(INF, 0.0)
    if f > x:
        f = math.nextafter(f, -INF)
    return f


def up(x: Real) -> float:
    """Smallest float >= x."""
    if isinstance(x, float):
        return x
    try:
        f = float(x)
    except OverflowError:
        return INF if x > 0 else math.nextafter(-INF, 0.0)
    if f < x:
        f = math.nextafter(f, INF)
    return f


def _widen(lo: float, hi: float, ulps: int) -> tuple[float, float]:
    for _ in range(ulps):
        lo = math.nextafter(lo, -INF)
        hi = math.nextafter(hi, INF)
    return lo, hi


@dataclass(frozen=True)
class EvalValue:
    lower: Real
    upper: Real

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"empty enclosure [{self.lower}, {self.upper}]")

    @classmethod
    def exact(cls, x: Real) -> EvalValue:
        if isinstance(x, float):
            return cls(x, x)
        return cls(Fraction(x), Fraction(x))

    @classmethod
    def of(cls, x) -> EvalValue:
        return x if isinstance(x, EvalValue) else cls.exact(x)

    @property
    def is_exact(self) -> bool:
        return _is_exact(self.lower) and _is_exact(self.upper)

    @property
    def mid(self) -> float:
        return 0.5 * (float(self.lower) + float(self.upper))

    def contains(self, x: Real) -> bool:
        return self.lower <= x <= self.upper

    def floats(self) -> EvalValue:
        """The tightest float enclosure of this value."""
        return EvalValue(down(self.lower), up(self.upper))

    def _combine(self, other, op) -> EvalValue:
        other = EvalValue.of(other)
        if self.is_exact and other.is_exact:
            cands = [op(a, b) for a in (self.lower, self.upper) for b in (other.lower, other.upper)]
            return EvalValue(min(cands), max(cands))
        a, b = self.floats(), other.floats()
        cands = [op(x, y) for x in (a.lower, a.upper) for y in (b.lower, b.upper)]
        cands = [0.0 if math.isnan(v) else v for v in cands]
        lo, hi = _widen(min(cands), max(cands), 1)
        return EvalValue(lo, hi)

    def __add__(self, other):
        other = EvalValue.of(other)
        if self.is_exact and other.is_exact:
            return EvalValue(self.lower + other.lower, self.upper + other.upper)
        a, b = self.floats(), other.floats()
        lo, _ = _widen(a.lower + b.lower, a.lower + b.lower, 1)
        _, hi = _widen(a.upper + b.upper, a.upper + b.upper, 1)
        return EvalValue(lo, hi)

    __radd__ = __add__

    def __neg__(self):
        return EvalValue(-self.upper, -self.lower)

    def __sub__(self, other):
        return self + (-EvalValue.of(other))

    def __rsub__(self, other):
        return EvalValue.of(other) + (-self)

    def __mul__(self, other):
        return self._combine(other, lambda x, y: x * y)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = EvalValue.of(other)
        if other.lower <= 0 <= other.upper:
            raise ZeroDivisionError("divisor enclosure contains zero")
        return self._combine(other, lambda x, y: x / y)

    def __rtruediv__(self, other):
        return EvalValue.of(other) / self

    def __str__(self):
        return f"[{self.lower}, {self.upper}]"


def _monotone(v: EvalValue, f, increasing: bool, exact_points=()) -> EvalValue:
    v = EvalValue.of(v)
    if v.lower == v.upper:
        for x, fx in exact_points:
            if v.lower == x:
                return EvalValue.exact(fx)
    fv = v.floats()
    a, b = f(fv.lower), f(fv.upper)
    if not increasing:
        a, b = b, a
    lo, hi = _widen(a, b, pad_ulps())
    return EvalValue(lo, hi)


def exp(v) -> EvalValue:
    def f(x):
        try:
            return math.exp(x)
        except OverflowError:
            return INF
    out = _monotone(v, f, True, exact_points=((0, 1),))
    if not isinstance(out.lower, float):
        return out
    return EvalValue(max(out.lower, 0.0), out.upper)


def expm1(v) -> EvalValue:
    """Enclosure of ``exp(v) - 1``, accurate near zero."""
    def f(x):
        try:
            return math.expm1(x)
        except OverflowError:
            return INF
    out = _monotone(v, f, True, exact_points=((0, 0),))
    if not isinstance(out.lower, float):
        return out
    return EvalValue(max(out.lower, -1.0), out.upper)


def log(v) -> EvalValue:
    v = EvalValue.of(v)
    if v.lower <= 0:
        raise ValueError("log of an enclosure that is not strictly positive")

    def f(x):
        return INF if x == INF else math.log(x)
    return _monotone(v, f, True, exact_points=((1, 0),))


def log1m(v) -> EvalValue:
    """Enclosure of ``log(1 - v)`` for ``v < 1``, accurate for small ``v``."""
    v = EvalValue.of(v)
    if v.upper >= 1:
        raise ValueError("log1m needs v < 1")
    if v.lower == v.upper == 0:
        return EvalValue.exact(0)
    fv = v.floats()
    lo, hi = math.log1p(-fv.upper), math.log1p(-fv.lower)
    lo, hi = _widen(lo, hi, pad_ulps() + 1)
    return EvalValue(lo, hi)


def sqrt(v) -> EvalValue:
    v = EvalValue.of(v)
    if v.lower < 0:
        raise ValueError("sqrt of a negative enclosure")
    return _monotone(v, math.sqrt, True, exact_points=((0, 0), (1, 1)))


def power(base, p: Real) -> EvalValue:
    """``base ** p`` for a strictly positive base enclosure and a real exponent."""
    base = EvalValue.of(base)
    if base.lower <= 0:
        raise ValueError("power needs a strictly positive base")
    if p == 0:
        return EvalValue.exact(1)
    pf = float(p)
    if _is_exact(p) and Fraction(p).denominator == 1 and base.is_exact:
        k = int(p)
        return EvalValue(base.lower ** k, base.upper ** k) if k > 0 else EvalValue(base.upper ** k, base.lower ** k)

    def f(x):
        try:
            return x ** pf
        except OverflowError:
            return INF
    return _monotone(base, f, pf > 0)


def compare_le(lhs, rhs) -> str:
    """Three-valued ``lhs <= rhs``: 'holds', 'fails' or 'inconclusive'."""
    lhs, rhs = EvalValue.of(lhs), EvalValue.of(rhs)
    if lhs.upper <= rhs.lower:
        return "holds"
    if lhs.lower > rhs.upper:
        return "fails"
    return "inconclusive"

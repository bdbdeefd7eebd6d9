"""Truncated generating functions of walks and bridges, the connective-constant
bracket, and rate estimates for bridges of fixed height.

Polynomial quantities are computed exactly with :class:`fractions.Fraction`;
only logarithms, exponentials and roots go through floating point, and those
come back as outward-padded :class:`~sawbound.interval.EvalValue` enclosures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import interval as iv
from .census import Census
from .interval import EvalValue

# relative widening applied to the n-th roots in mu_bracket
ROOT_SLACK = 2.0 ** -40


class DivergentTailError(ValueError):
    """The geometric tail bound needs z * mu_high < 1."""


@dataclass(frozen=True)
class MuBracket:
    mu_low: float
    mu_high: float
    n_low: int
    n_high: int
    N: int

    @property
    def z_low(self) -> Fraction:
        """Exact rational ``1 / mu_high``, a lower bound on the critical point."""
        return 1 / Fraction(self.mu_high)

    @property
    def z_high(self) -> Fraction:
        return 1 / Fraction(self.mu_low)

    def contains(self, other: MuBracket) -> bool:
        return self.mu_low <= other.mu_low and other.mu_high <= self.mu_high


@dataclass(frozen=True)
class SeriesContext:
    census: Census
    z: Fraction

    def __post_init__(self):
        z = Fraction(self.z)
        if z < 0:
            raise ValueError("z must be >= 0")
        object.__setattr__(self, "z", z)


def _nth_root(x: int, n: int) -> tuple[float, bool]:
    """Float n-th root of a positive integer and whether it is exact."""
    r = math.exp(math.log(x) / n)
    k = round(r)
    if k ** n == x:
        return float(k), True
    return r, False


def mu_bracket(census: Census) -> MuBracket:
    """Rigorous bracket for the connective constant from a finite census.

    Every ``b_n ** (1/n)`` is a lower bound and every ``c_n ** (1/n)`` an
    upper bound, so the running extrema over ``1 <= n <= N`` are too.
    """
    if census.N < 1:
        raise ValueError("mu_bracket needs a census with N >= 1")
    lows, highs = [], []
    for n in range(1, census.N + 1):
        if census.b[n] > 0:
            r, exact = _nth_root(census.b[n], n)
            lows.append((r if exact else r * (1 - ROOT_SLACK), n))
        r, exact = _nth_root(census.c[n], n)
        highs.append((r if exact else r * (1 + ROOT_SLACK), n))
    # ties go to the shortest length
    lo, n_lo = max(lows, key=lambda t: (t[0], -t[1]))
    hi, n_hi = min(highs, key=lambda t: (t[0], -t[1]))
    return MuBracket(mu_low=lo, mu_high=hi, n_low=n_lo, n_high=n_hi, N=census.N)


def _poly(coeffs, z: Fraction) -> Fraction:
    total = Fraction(0)
    for a in reversed(coeffs):
        total = total * z + a
    return total


def chi_exact(census: Census, z) -> Fraction:
    return _poly(census.c, Fraction(z))


def B_exact(census: Census, z) -> Fraction:
    return _poly(census.b, Fraction(z))


def a_exact(census: Census, z, n: int) -> Fraction:
    if not 0 <= n <= census.N:
        raise ValueError(f"height {n} outside 0..{census.N}")
    return _poly([row[n] for row in census.bridge_by_height], Fraction(z))


def chi_trunc(ctx: SeriesContext) -> EvalValue:
    """Partial sum of the walk generating function; a lower bound on chi(z)."""
    return EvalValue.exact(chi_exact(ctx.census, ctx.z))


def B_trunc(ctx: SeriesContext) -> EvalValue:
    """Partial sum of the bridge generating function; a lower bound on B(z)."""
    return EvalValue.exact(B_exact(ctx.census, ctx.z))


def a_trunc(ctx: SeriesContext, n: int) -> EvalValue:
    """Partial sum over bridges ending at height ``n``; a lower bound on a(z; n)."""
    return EvalValue.exact(a_exact(ctx.census, ctx.z, n))


def B_tail_exact(census: Census, z, mu_high) -> Fraction:
    """Exact upper bound on B(z) using ``b_m <= mu_high**m`` beyond the census."""
    z = Fraction(z)
    q = z * Fraction(mu_high)
    if q >= 1:
        raise DivergentTailError(f"z * mu_high = {float(q):.6g} >= 1; tail bound diverges")
    return B_exact(census, z) + q ** (census.N + 1) / (1 - q)


def B_tail_bound(census: Census, z, mu_high) -> EvalValue:
    """Enclosure whose upper end bounds B(z) from above."""
    return EvalValue(B_exact(census, z), B_tail_exact(census, z, mu_high))


def exp_bridge_coeffs(census: Census) -> list[Fraction]:
    """Coefficients ``e_0 .. e_{N+1}`` of ``exp(2 (B(z) - 1))``.

    Uses ``k e_k = sum_{j=1}^{k} j f_j e_{k-j}`` with ``f_j = 2 b_j``. The
    unknown ``b_{N+1}`` is taken as 0, so ``e_{N+1}`` is only a lower bound on
    the true coefficient; ``e_0 .. e_N`` are exact.
    """
    N = census.N
    f = [0] + [2 * census.b[j] for j in range(1, N + 1)] + [0]
    e = [Fraction(1)]
    for k in range(1, N + 2):
        acc = sum(j * f[j] * e[k - j] for j in range(1, k + 1))
        e.append(Fraction(acc, k))
    return e


def xi_upper(census: Census, z) -> dict[int, float]:
    """Upper bounds on the bridge height rate ``xi(z)``, one per height.

    Since ``a(z; n) <= exp(-xi(z) n)`` for every ``n``, each entry
    ``-(1/n) log a_trunc(z, n)`` bounds ``xi(z)`` from above. Heights with no
    enumerated bridges give ``inf``.
    """
    z = Fraction(z)
    if z <= 0:
        raise ValueError("xi_upper needs z > 0")
    out = {}
    for n in range(1, census.N + 1):
        a = a_exact(census, z, n)
        if a == 0:
            out[n] = math.inf
            continue
        out[n] = (-(iv.log(a) / n)).upper
    return out

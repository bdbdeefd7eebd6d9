import math
from fractions import Fraction

import pytest

from sawbound.census import Census, enumerate_census
from sawbound.genfun import (B_tail_bound, B_tail_exact, DivergentTailError, SeriesContext,
                             a_trunc, a_exact, chi_trunc, exp_bridge_coeffs, mu_bracket,
                             xi_upper)


def _series_exp(f, order):
    """exp of a power series with f[0] = 0 by summing F^k / k! directly."""
    out = [Fraction(0)] * (order + 1)
    term = [Fraction(1)] + [Fraction(0)] * order
    k = 0
    while any(term):
        for i, t in enumerate(term):
            out[i] += t
        k += 1
        nxt = [Fraction(0)] * (order + 1)
        for i, t in enumerate(term):
            if t:
                for j in range(1, order + 1 - i):
                    nxt[i + j] += t * f[j]
        term = [x / k for x in nxt]
    return out


def test_bracket_small_examples():
    br = mu_bracket(enumerate_census(2, 1))
    assert (br.mu_low, br.mu_high) == (1.0, 4.0)
    br = mu_bracket(enumerate_census(2, 2))
    assert math.sqrt(3) * (1 - 2 ** -39) < br.mu_low < math.sqrt(3)
    assert math.sqrt(12) < br.mu_high < math.sqrt(12) * (1 + 2 ** -39)
    with pytest.raises(ValueError):
        mu_bracket(enumerate_census(2, 0))


def test_bracket_nested_and_contains_mu(census16):
    prev = None
    for N in range(1, 17):
        br = mu_bracket(census16.truncated(N))
        assert br.mu_low <= 2.63815853 <= br.mu_high
        if prev is not None:
            assert prev.contains(br)
        prev = br


def test_exp_coefficients_against_direct_series(census8):
    N = census8.N
    f = [0] + [2 * census8.b[j] for j in range(1, N + 1)] + [0]
    assert exp_bridge_coeffs(census8) == _series_exp(f, N + 1)
    e = exp_bridge_coeffs(enumerate_census(2, 3))
    assert e[:3] == [1, 2, 8]


def test_truncated_sums(census8):
    ctx = SeriesContext(census8, Fraction(1, 2))
    assert chi_trunc(ctx).lower == sum(Fraction(c, 2 ** n) for n, c in enumerate(census8.c))
    total = sum(a_exact(census8, Fraction(1, 2), h) for h in range(0, 9))
    assert total == sum(Fraction(b, 2 ** n) for n, b in enumerate(census8.b))
    assert a_trunc(ctx, 3).is_exact
    with pytest.raises(ValueError):
        SeriesContext(census8, -1)
    with pytest.raises(ValueError):
        a_exact(census8, 1, 9)


def test_tail_bound(census16):
    br = mu_bracket(census16)
    z = Fraction(1, 4)
    enc = B_tail_bound(census16, z, br.mu_high)
    assert enc.lower < enc.upper
    # the longer census must fall under the shorter one's tail bound
    assert B_tail_exact(census16.truncated(8), z, br.mu_high) >= enc.lower
    with pytest.raises(DivergentTailError):
        B_tail_exact(census16, Fraction(1, 2), br.mu_high)


def test_xi_upper(census12):
    br = mu_bracket(census12)
    ub = xi_upper(census12, br.z_low)
    assert set(ub) == set(range(1, 13))
    assert all(v >= 0 for v in ub.values())
    zero_row = Census(2, 1, (1, 4), (1, 1), ((1, 0), (0, 0)))
    assert xi_upper(zero_row, Fraction(1, 3)) == {1: math.inf}

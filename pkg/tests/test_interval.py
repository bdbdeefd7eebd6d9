import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from sawbound import interval as iv
from sawbound.interval import EvalValue, compare_le

mpmath.mp.dps = 50

positive = st.floats(min_value=1e-300, max_value=1e300, allow_nan=False)
moderate = st.floats(min_value=-700, max_value=700, allow_nan=False)


def _mp(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def _contains(enc, ref):
    return _mp(enc.lower) <= ref <= _mp(enc.upper)


@given(moderate)
def test_exp_encloses(x):
    assert _contains(iv.exp(x), mpmath.exp(mpmath.mpf(x)))


@given(positive)
def test_log_encloses(x):
    assert _contains(iv.log(x), mpmath.log(mpmath.mpf(x)))


@given(st.floats(min_value=0, max_value=1e300))
def test_sqrt_encloses(x):
    assert _contains(iv.sqrt(x), mpmath.sqrt(mpmath.mpf(x)))


@given(st.floats(min_value=-1e6, max_value=0.999999))
def test_log1m_encloses(x):
    assert _contains(iv.log1m(x), mpmath.log1p(-mpmath.mpf(x)))


@given(st.floats(min_value=-50, max_value=50))
def test_expm1_encloses(x):
    assert _contains(iv.expm1(x), mpmath.expm1(mpmath.mpf(x)))


@given(st.floats(min_value=1e-3, max_value=1e3), st.floats(min_value=-5, max_value=5))
def test_power_encloses(b, p):
    assert _contains(iv.power(b, p), mpmath.power(mpmath.mpf(b), mpmath.mpf(p)))


@given(st.fractions(), st.fractions())
def test_exact_arithmetic_stays_exact(a, b):
    x, y = EvalValue.exact(a), EvalValue.exact(b)
    assert (x + y).lower == a + b
    assert (x * y).upper == a * b
    assert (x - y).is_exact


@given(st.floats(-1e100, 1e100), st.floats(-1e100, 1e100))
def test_float_arithmetic_encloses(a, b):
    fa, fb = Fraction(a), Fraction(b)
    for op, ref in ((lambda u, v: u + v, fa + fb), (lambda u, v: u * v, fa * fb)):
        out = op(EvalValue.exact(a), EvalValue.exact(b) + EvalValue.exact(0.0))
        assert out.lower <= ref <= out.upper


def test_exact_points():
    assert iv.exp(0) == EvalValue.exact(1)
    assert iv.log(1) == EvalValue.exact(0)
    assert iv.sqrt(Fraction(1)).is_exact
    assert iv.expm1(0.0).lower == 0


def test_division_by_zero_enclosure():
    with pytest.raises(ZeroDivisionError):
        EvalValue.exact(1) / EvalValue(-1, 1)


def test_empty_enclosure_rejected():
    with pytest.raises(ValueError):
        EvalValue(2, 1)


def test_padding_widens():
    narrow = iv.exp(0.5)
    with iv.padding(4):
        wide = iv.exp(0.5)
    assert wide.lower < narrow.lower and narrow.upper < wide.upper
    assert iv.pad_ulps() == iv.DEFAULT_PAD_ULPS
    with pytest.raises(ValueError):
        with iv.padding(0):
            pass


def test_directed_rounding():
    third = Fraction(1, 3)
    assert iv.down(third) <= third <= iv.up(third)
    assert iv.up(10 ** 400) == math.inf


def test_compare_le():
    assert compare_le(1, 2) == "holds"
    assert compare_le(2, 2) == "holds"
    assert compare_le(3, 2) == "fails"
    assert compare_le(EvalValue(1, 3), 2) == "inconclusive"


@given(st.floats(0, 10), st.floats(0, 1), st.floats(0, 10), st.floats(0, 1))
def test_verdict_trichotomy(a, wa, b, wb):
    lhs, rhs = EvalValue(a, a + wa), EvalValue(b, b + wb)
    status = compare_le(lhs, rhs)
    assert status == "holds" if lhs.upper <= rhs.lower else True
    assert status == "fails" if lhs.lower > rhs.upper else True
    if status == "inconclusive":
        assert lhs.upper > rhs.lower and lhs.lower <= rhs.upper

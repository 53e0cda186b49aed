from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from calabi_liouville.logvalue import LogValue, logsumexp, signed_logsumexp

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False).filter(lambda x: abs(x) > 1e-300 or x == 0.0)


@given(finite)
def test_round_trip(x):
    # one ulp of the stored logarithm is a relative error of eps * |log x|
    rel = 4 * 2.0**-52 * max(1.0, abs(math.log(abs(x)))) if x else 0.0
    assert LogValue.from_float(x).to_float() == pytest.approx(x, rel=rel, abs=0.0)


@given(finite, finite)
def test_product_matches_float(a, b):
    got = (LogValue.from_float(a) * LogValue.from_float(b)).to_float()
    assert got == pytest.approx(a * b, rel=1e-13, abs=1e-300)


@given(finite, finite)
def test_sum_matches_float(a, b):
    got = (LogValue.from_float(a) + LogValue.from_float(b)).to_float()
    assert got == pytest.approx(a + b, rel=1e-12, abs=1e-9 * max(abs(a), abs(b), 1e-300))


def test_overflow_is_raised_not_inf():
    big = LogValue.from_log(800.0)
    with pytest.raises(OverflowError):
        big.to_float()
    assert (big / LogValue.from_log(799.0)).to_float() == pytest.approx(math.e)


def test_zero_is_absorbing():
    z = LogValue.from_float(0.0)
    assert (z * LogValue.from_log(900.0)).sign == 0
    assert (z + 3.0).to_float() == pytest.approx(3.0, rel=1e-15)


def test_nan_rejected():
    with pytest.raises(ValueError):
        LogValue.from_float(float("nan"))


def test_logsumexp_huge_terms():
    assert logsumexp([1000.0, 1000.0]) == pytest.approx(1000.0 + math.log(2.0))


def test_signed_logsumexp_cancellation():
    vals = [LogValue.from_float(5.0), LogValue.from_float(-5.0), LogValue.from_float(2.0)]
    assert signed_logsumexp(vals).to_float() == pytest.approx(2.0)

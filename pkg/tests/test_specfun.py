from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from calabi_liouville.errors import PoleError
from calabi_liouville.specfun import (
    bessel_hypergeom_bridge,
    gamma,
    kummer_M,
    kummer_M_series,
    log_bessel_I,
    log_bessel_K,
    log_gamma,
    log_kummer_M,
    log_kummer_M_via_bessel,
    log_tricomi_U,
    tri_T,
    tricomi_U,
    tricomi_U_connection,
)
from oracles import k_integer_order, mp_log_abs_M, mp_log_I, mp_log_K, mp_log_U, mp_M

orders = st.sampled_from([0.5, 1.0 / 3.0, 0.25, 0.2, 0.7, 1.5, 2.25])


def test_gamma_known_values():
    assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    assert gamma(-0.5) == pytest.approx(-2.0 * math.sqrt(math.pi), rel=1e-14)
    assert log_gamma(-1.5).sign == 1
    with pytest.raises(PoleError):
        log_gamma(-2.0)


@given(st.floats(min_value=-30.0, max_value=30.0).filter(lambda x: abs(x - round(x)) > 1e-3 or x > 0))
def test_gamma_recurrence(x):
    lhs = log_gamma(x + 1.0)
    rhs = log_gamma(x) * x
    assert lhs.sign == rhs.sign
    assert lhs.log_abs == pytest.approx(rhs.log_abs, abs=1e-12 * max(1.0, abs(lhs.log_abs)))


@given(orders, st.floats(min_value=0.01, max_value=500.0))
def test_bessel_against_mpmath(nu, y):
    assert log_bessel_I(nu, y).log_abs == pytest.approx(mp_log_I(nu, y), abs=1e-12 * max(1.0, y))
    assert log_bessel_K(nu, y).log_abs == pytest.approx(mp_log_K(nu, y), abs=1e-12 * max(1.0, y))


def test_bessel_far_asymptotics_stay_finite():
    assert log_bessel_I(0.25, 1e5).log_abs == pytest.approx(mp_log_I(0.25, 1e5), rel=1e-13)
    assert log_bessel_K(0.25, 1e5).log_abs == pytest.approx(mp_log_K(0.25, 1e5), rel=1e-13)


@pytest.mark.parametrize("order", [0, 1, 2])
@pytest.mark.parametrize("y", [0.1, 0.5, 1.0])
def test_integer_order_K_against_richardson(order, y):
    assert log_bessel_K(float(order), y).to_float() == pytest.approx(k_integer_order(order, y), rel=1e-10)


@given(
    st.floats(min_value=-10.0, max_value=5.0),
    st.sampled_from([0.5, 2.0 / 3.0, 0.75, 1.3]),
    st.floats(min_value=-40.0, max_value=40.0),
)
def test_kummer_against_mpmath(beta, alpha, y):
    ours = log_kummer_M(beta, alpha, y)
    ref = mp_M(beta, alpha, y)
    scale = max(1.0, abs(ref))
    if abs(ref) < 1e-6 * scale:
        assert abs(ours.to_float() - ref) < 1e-10 * scale
    else:
        assert ours.sign == (1 if ref > 0 else -1)
        assert ours.log_abs == pytest.approx(mp_log_abs_M(beta, alpha, y), abs=1e-9)


def test_kummer_large_argument_log_domain():
    assert log_kummer_M(0.3, 0.5, 2000.0).log_abs == pytest.approx(mp_log_abs_M(0.3, 0.5, 2000.0), rel=1e-12)


def test_kummer_terminating_polynomial():
    # M(-2, a, y) = 1 - 2y/a + y^2/(a(a+1))
    a, y = 0.75, 3.0
    assert kummer_M(-2.0, a, y) == pytest.approx(1 - 2 * y / a + y * y / (a * (a + 1)), rel=1e-14)


def test_kummer_pole():
    with pytest.raises(PoleError):
        kummer_M_series(0.5, -1.0, 1.0)


@given(st.floats(min_value=-8.0, max_value=0.4), st.floats(min_value=-60.0, max_value=-0.05))
def test_series_and_integral_routes_agree(beta, y):
    alpha = 0.5
    a, b = log_kummer_M(beta, alpha, y), log_kummer_M_via_bessel(beta, alpha, y)
    assert a.sign == b.sign
    assert a.log_abs == pytest.approx(b.log_abs, abs=1e-9)


@given(st.floats(min_value=0.05, max_value=12.0), st.sampled_from([0.5, 2.0 / 3.0, 0.75]), st.floats(min_value=0.2, max_value=60.0))
def test_tricomi_against_mpmath(a, b, x):
    assert log_tricomi_U(a, b, x).log_abs == pytest.approx(mp_log_U(a, b, x), abs=1e-10 * max(1.0, abs(mp_log_U(a, b, x))))


@pytest.mark.parametrize("a,b,x", [(0.3, 0.5, 2.0), (1.7, 2.0 / 3.0, 5.0), (4.0, 0.75, 1.0)])
def test_tricomi_connection_formula(a, b, x):
    assert tricomi_U_connection(a, b, x) == pytest.approx(tricomi_U(a, b, x), rel=1e-9)


def test_tri_T_is_e_power_times_U():
    beta, alpha, y = -1.2, 0.5, -3.0
    expected = tricomi_U(alpha - beta, alpha, -y) * math.exp(y)
    assert tri_T(beta, alpha, y).to_float() == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("nu", [0.5, 1.0 / 3.0, 0.25])
@pytest.mark.parametrize("y", [0.3, 2.0, 15.0])
def test_bessel_hypergeometric_bridge(nu, y):
    i_val, k_val = bessel_hypergeom_bridge(nu, y)
    assert i_val == pytest.approx(log_bessel_I(nu, y).to_float(), rel=1e-11)
    assert k_val == pytest.approx(log_bessel_K(nu, y).to_float(), rel=1e-11)


def test_half_integer_grid_vectorised():
    ys = np.geomspace(0.1, 30.0, 16)
    ratios = [log_bessel_K(0.5, y).to_float() / (math.sqrt(math.pi / (2 * y)) * math.exp(-y)) for y in ys]
    assert np.allclose(ratios, 1.0, rtol=1e-13, atol=0.0)

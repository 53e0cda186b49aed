from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from calabi_liouville.calabi_ode import HypergeomParams, Mode
from calabi_liouville.errors import DomainError
from calabi_liouville.estimates import (
    DEFAULT_NU,
    certify_bessel,
    certify_caseB,
    certify_product,
    certify_tri_ku_caseA,
    check_monotonicity,
    default_monotonicity_grid,
    default_y_grid,
)

q_case_a = st.floats(min_value=1.0, max_value=30.0)


def test_bessel_half_order_is_exact_constant():
    cert = certify_bessel(0.5, -default_y_grid(), "K")
    assert cert.passed
    assert cert.observed_lower_const == pytest.approx(math.sqrt(math.pi / 2), rel=1e-13)
    assert cert.observed_upper_const == pytest.approx(math.sqrt(math.pi / 2), rel=1e-13)


@pytest.mark.parametrize("nu", DEFAULT_NU)
@pytest.mark.parametrize("kind", ["K", "I", "I_small"])
def test_bessel_certificates_pass(nu, kind):
    grid = np.geomspace(0.01, 1.0, 32) if kind == "I_small" else -default_y_grid()
    assert certify_bessel(nu, grid, kind).passed


@given(st.integers(2, 4), q_case_a)
def test_case_a_and_product_pass(n, q):
    p = HypergeomParams.from_q(n, q)
    ys = default_y_grid(points=24)
    assert certify_tri_ku_caseA(p, ys).passed
    assert certify_product(p, ys).passed


@given(st.integers(2, 4), st.floats(min_value=0.0, max_value=1.0))
def test_case_b_pinned_upper(n, frac):
    q = -1.0 / n + frac * (1.0 + 1.0 / n)
    cert = certify_caseB(HypergeomParams.from_q(n, q), default_y_grid(points=24))
    assert cert.passed
    assert cert.parts[0].observed_upper_const <= 1.0 + 1e-12


@pytest.mark.parametrize("n", [2, 3])
def test_regimes_overlap_at_q_one(n):
    p = HypergeomParams.from_q(n, 1.0)
    ys = default_y_grid()
    assert certify_tri_ku_caseA(p, ys).passed and certify_caseB(p, ys).passed


@pytest.mark.parametrize("n,q", [(2, 2.0), (3, 10.0)])
def test_constants_stable_under_refinement(n, q):
    p = HypergeomParams.from_q(n, q)
    coarse = certify_tri_ku_caseA(p, default_y_grid(points=32))
    fine = certify_tri_ku_caseA(p, default_y_grid(points=128))
    assert fine.observed_upper_const == pytest.approx(coarse.observed_upper_const, rel=0.1)
    assert fine.observed_lower_const == pytest.approx(coarse.observed_lower_const, rel=0.1)


def test_records_are_pipe_separated():
    cert = certify_product(HypergeomParams.from_q(2, 5.0), default_y_grid(points=8))
    recs = cert.records()
    assert len(recs) == 1 + len(cert.parts)
    for rec in recs:
        fields = rec.split("|")
        assert len(fields) == 5 and fields[-1] in ("true", "false")


def test_grid_must_be_in_domain():
    with pytest.raises(DomainError):
        certify_tri_ku_caseA(HypergeomParams.from_q(2, 2.0), [-0.5, -2.0])


@given(
    st.integers(2, 3),
    st.integers(1, 3),
    st.floats(min_value=0.0, max_value=15.0),
    st.sampled_from([0.0, 1.0, 2.0]),
)
def test_monotonicity_property(n, j, extra, eta_scale):
    eta = eta_scale * 2.0 * math.sqrt(2.0 / n)
    mode = Mode(1, j, (n - 1) * j / 2.0 + extra)
    cert = check_monotonicity(mode, n, eta, default_monotonicity_grid(n, eta, points=24))
    assert cert.passed
    assert cert.observed_lower_const > 0.0


def test_monotonicity_rejects_small_z():
    with pytest.raises(DomainError):
        check_monotonicity(Mode(1, 1, 3.0), 2, 4.0, [1.0, 2.0, 5.0])


def test_single_point_grid_is_vacuous():
    cert = check_monotonicity(Mode(1, 1, 3.0), 2, 0.0, [2.0])
    assert cert.passed

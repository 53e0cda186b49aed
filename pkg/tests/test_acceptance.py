"""The twelve acceptance criteria at their stated tolerances.

Each test prints one ``PASS``/``FAIL`` line (see ``conftest.py`` for the
summary block).  Run ``pytest tests/test_acceptance.py -v``.
"""

from __future__ import annotations

import math
from fractions import Fraction
import subprocess
import sys

import numpy as np
import pytest

from calabi_liouville.calabi_ode import (
    HypergeomParams,
    Mode,
    fundamental_pair,
    log_derivative,
    ode_residual,
    wronskian_fd,
)
from calabi_liouville.estimates import (
    DEFAULT_Q,
    certify_caseB,
    certify_product,
    certify_tri_ku_caseA,
    check_monotonicity,
    default_monotonicity_grid,
    default_y_grid,
)
from calabi_liouville.poisson import (
    VERDICT_CONSTANT,
    VERDICT_LINEAR,
    ModeCoefficient,
    classify_dirichlet,
    classify_neumann,
    decaying_flux,
    decompose_harmonic,
    solve_mode,
)
from calabi_liouville.spectral import CalabiParams, toy_spectrum
from calabi_liouville.specfun import (
    _series_exact,
    kummer_M_series,
    log_bessel_I,
    log_bessel_K,
    log_kummer_M,
    log_kummer_M_via_bessel,
)
from oracles import half_integer_I, half_integer_K, ivp_backward

NUS = (0.5, 1.0 / 3.0, 0.25, 0.2)
KUMMER_ALPHAS = (0.5, 2.0 / 3.0, 0.75)
KUMMER_BETAS = np.linspace(-10.0, 0.0, 21)
KUMMER_YS = np.linspace(-20.0, 20.0, 41)


def report(number: int, ok: bool, detail: str) -> None:
    print(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


# --- 1 ---------------------------------------------------------------------


def test_criterion_01_bessel_wronskian():
    worst = 0.0
    for nu in NUS:
        for y in np.geomspace(0.5, 50.0, 64):
            h = 1e-3 * y
            li, lk = log_bessel_I(nu, y), log_bessel_K(nu, y)
            dli = log_derivative(lambda t: log_bessel_I(nu, t), y, h)
            dlk = log_derivative(lambda t: log_bessel_K(nu, t), y, h)
            w = (li * lk).to_float() * (dlk - dli)
            worst = max(worst, abs(y * w + 1.0))
    report(1, worst < 1e-9, f"max |y W + 1| = {worst:.2e}")
    assert worst < 1e-9


# --- 2 ---------------------------------------------------------------------


def test_criterion_02_half_integer_closed_forms():
    worst = 0.0
    for y in np.geomspace(0.1, 30.0, 64):
        worst = max(
            worst,
            abs(log_bessel_I(0.5, y).to_float() / half_integer_I(y) - 1.0),
            abs(log_bessel_K(0.5, y).to_float() / half_integer_K(y) - 1.0),
        )
    report(2, worst < 1e-12, f"max rel err = {worst:.2e}")
    assert worst < 1e-12


# --- 3 ---------------------------------------------------------------------


def _transformed(beta: float, alpha: float, y: float) -> float:
    """``e^y M(alpha - beta, alpha, -y)`` by the series of the transformed function.

    ``alpha - beta`` is formed exactly: its float rounding alone is amplified
    by the cancellation of the alternating series (about 1e10 at ``y = 20``).
    """
    return math.exp(y) * _series_exact(Fraction(alpha) - Fraction(beta), alpha, -y)


def test_criterion_03_kummer_transformation_and_recurrences():
    worst_t = worst_b = worst_a = 0.0
    for alpha in KUMMER_ALPHAS:
        for beta in KUMMER_BETAS:
            for y in KUMMER_YS:
                direct = kummer_M_series(beta, alpha, y)
                worst_t = max(worst_t, abs(direct - _transformed(beta, alpha, y)) / max(1.0, abs(direct)))
                m = log_kummer_M(beta, alpha, y).to_float()
                # beta-recurrence: M(b,a,y) = M(b+1,a,y) - (y/a) M(b+1,a+1,y)
                t1 = log_kummer_M(beta + 1.0, alpha, y).to_float()
                t2 = (y / alpha) * log_kummer_M(beta + 1.0, alpha + 1.0, y).to_float()
                worst_b = max(worst_b, abs(m - t1 + t2) / max(abs(m), abs(t1), abs(t2)))
                # alpha-recurrence
                s1 = (alpha + y) / alpha * log_kummer_M(beta, alpha + 1.0, y).to_float()
                s2 = (
                    (alpha - beta + 1.0) * y / (alpha * (alpha + 1.0))
                    * log_kummer_M(beta, alpha + 2.0, y).to_float()
                )
                worst_a = max(worst_a, abs(m - s1 + s2) / max(abs(m), abs(s1), abs(s2)))
    ok = max(worst_t, worst_b, worst_a) < 1e-10
    report(3, ok, f"transform {worst_t:.2e}, beta-rec {worst_b:.2e}, alpha-rec {worst_a:.2e}")
    assert ok


# --- 4 ---------------------------------------------------------------------


def test_criterion_04_cross_path_kummer_oracle():
    rng = np.random.default_rng(20240604)
    worst = 0.0
    for _ in range(200):
        alpha = float(rng.choice([0.5, 2.0 / 3.0, 0.75, rng.uniform(0.2, 1.5)]))
        beta = float(rng.uniform(-10.0, alpha - 0.05))
        y = -float(rng.uniform(0.01, 50.0))
        series = log_kummer_M(beta, alpha, y)
        integral = log_kummer_M_via_bessel(beta, alpha, y)
        assert series.sign == integral.sign == 1
        worst = max(worst, abs(math.expm1(series.log_abs - integral.log_abs)))
    report(4, worst < 1e-8, f"max rel diff over 200 points = {worst:.2e}")
    assert worst < 1e-8


# --- 5 ---------------------------------------------------------------------


def test_criterion_05_zero_mode_wronskian():
    lambda_d = 2.0
    worst = 0.0
    for n in (2, 3, 4):
        for lam in (lambda_d, 2 * lambda_d, 5 * lambda_d):
            pair = fundamental_pair(Mode(1, 0, lam), n)
            assert pair.w_const == -n / 2.0
            for z in (1.0, 2.0, 4.0, 8.0):
                worst = max(worst, abs(wronskian_fd(pair, z) / (-n / 2.0) - 1.0))
    report(5, worst < 1e-7, f"max rel err = {worst:.2e}")
    assert worst < 1e-7


# --- 6 ---------------------------------------------------------------------


def _random_modes(rng: np.random.Generator, count: int) -> list[tuple[Mode, int]]:
    out = []
    for _ in range(count):
        n = int(rng.integers(2, 5))
        j = int(rng.integers(0, 4))
        lam = (n - 1) * j / 2.0 + float(rng.uniform(0.5, 10.0))
        out.append((Mode(1, j, lam), n))
    return out


def test_criterion_06_generic_wronskian():
    pair = fundamental_pair(Mode(1, 1, 0.5), 2)
    closed = abs(pair.w_const + 2.0)
    measured = max(abs(wronskian_fd(pair, z) + 2.0) for z in (1.0, 2.0, 4.0))
    worst_std = worst_mean = 0.0
    zs = np.geomspace(1.0, 20.0, 20)
    for mode, n in _random_modes(np.random.default_rng(6), 10):
        p = fundamental_pair(mode, n)
        ws = np.array([wronskian_fd(p, z) for z in zs])
        worst_std = max(worst_std, float(np.std(ws) / abs(np.mean(ws))))
        worst_mean = max(worst_mean, abs(float(np.mean(ws)) / p.w_const - 1.0))
    ok = closed < 1e-12 and measured < 1e-7 and worst_std < 1e-6 and worst_mean < 1e-6
    report(6, ok, f"|W+2| = {measured:.2e}, rel std {worst_std:.2e}, mean err {worst_mean:.2e}")
    assert ok


# --- 7 ---------------------------------------------------------------------

RESIDUAL_MODES = [
    (Mode(0, 0, 0.0), 2),
    (Mode(1, 0, 2.0), 2),
    (Mode(1, 1, 0.5), 2),
    (Mode(1, 2, 6.0), 2),
    (Mode(1, 0, 3.0), 3),
    (Mode(1, 1, 1.0), 3),
    (Mode(1, 2, 5.0), 4),
]


def test_criterion_07_ode_residuals():
    worst_pair = 0.0
    for mode, n in RESIDUAL_MODES:
        pair = fundamental_pair(mode, n)
        for z in np.linspace(1.2, 7.8, 10):
            worst_pair = max(
                worst_pair,
                ode_residual(pair.eval_G, mode, n, z),
                ode_residual(pair.eval_D, mode, n, z),
            )
    worst_solve = 0.0
    for mode, n in RESIDUAL_MODES[:6]:
        xi = ModeCoefficient.exp_power(mode.k, 1.0, -1.0)
        sol = solve_mode(mode, n, xi, 1.0, 4.0)
        for z in np.linspace(1.2, 3.8, 10):
            worst_solve = max(worst_solve, ode_residual(sol, mode, n, z, rhs=sol.rhs))
    ok = worst_pair < 1e-6 and worst_solve < 1e-6
    report(7, ok, f"pairs {worst_pair:.2e}, solve_mode {worst_solve:.2e}")
    assert ok


# --- 8 ---------------------------------------------------------------------

# Backward integration from z = 4 amplifies the initial-data rounding by the
# growth of the decaying solution over [1, 4].  Modes where that growth
# exceeds about e^15 (weight j >= 1 for n = 3, large lam for n = 3) are
# checked against the collocation oracle in test_poisson.py instead.
IVP_MODES = [
    (Mode(1, 0, 2.0), 2),
    (Mode(1, 0, 8.0), 2),
    (Mode(1, 1, 0.5), 2),
    (Mode(1, 1, 3.0), 2),
    (Mode(1, 0, 1.0), 3),
    (Mode(1, 0, 3.0), 3),
]


def test_criterion_08_poisson_ivp_oracle():
    worst = 0.0
    zs = np.linspace(1.0, 4.0, 13)
    for mode, n in IVP_MODES:
        xi = ModeCoefficient.exp_power(1, 1.0, -1.0)
        sol = solve_mode(mode, n, xi, 1.0, 4.0)
        ref = ivp_backward(mode, n, xi.function(n), 4.0, 1.0, sol(4.0), sol.derivative(4.0), zs)
        ours = np.array([sol(z) for z in zs])
        worst = max(worst, float(np.max(np.abs(ours - ref) / np.abs(ref))))
    report(8, worst < 1e-6, f"sup rel err = {worst:.2e}")
    assert worst < 1e-6


# --- 9 ---------------------------------------------------------------------


def test_criterion_09_decay_rate_recovery():
    worst = 0.0
    for n in (2, 3):
        params = CalabiParams(n, 1.0, 2.0, 1.0)
        for lam in (2.0, 5.0, 20.0):
            mode = Mode(1, 0, lam)
            rate = 2.0 * math.sqrt(lam / n)
            s_lo, s_hi = 10.0 / rate, 50.0 / rate
            zs = np.linspace(s_lo ** (2.0 / n), s_hi ** (2.0 / n), 40)
            pair = fundamental_pair(mode, n)
            vals = [pair.eval_D(z).to_float() for z in zs]
            result = decompose_harmonic(
                [(Mode(0, 0, 0.0), zs, np.zeros_like(zs)), (mode, zs, vals)], params
            )
            worst = max(worst, abs(result.decay_exponent / rate - 1.0))
    report(9, worst < 0.02, f"max rel deviation of fitted exponent = {worst:.2e}")
    assert worst < 0.02


# --- 10 --------------------------------------------------------------------


def test_criterion_10_liouville_behaviour():
    verdicts = []
    for n, z0, lambda_d, seed in ((2, 1.0, 2.0, 0), (3, 1.5, 1.0, 1), (4, 2.0, 5.0, 2)):
        spec = toy_spectrum(CalabiParams(n, z0, lambda_d, 1.0), 3, 3, seed)
        res = classify_neumann(spec, 0.0, [0.0] * (len(spec) - 1))
        verdicts.append(res.verdict == VERDICT_CONSTANT and res.kappa0 == 0.0 and not res.decaying)
    rng = np.random.default_rng(10)
    slopes = [decaying_flux(mode, n, 1.5) for mode, n in _random_modes(rng, 20)]
    params = CalabiParams(2, 1.5, 2.0, 1.0)
    spec = toy_spectrum(params, 2, 3)
    dirichlet_ok = True
    for kappa in (1.0, -2.5):
        res = classify_dirichlet(spec, [0.0] * len(spec), flux=kappa)
        dirichlet_ok &= res.verdict == VERDICT_LINEAR and not res.decaying
        dirichlet_ok &= all(
            abs(res.evaluate(z) - kappa * (z - params.z0)) <= 1e-14 * max(1.0, abs(kappa * z))
            for z in np.linspace(params.z0, 10.0, 12)
        )
    ok = all(verdicts) and all(s < 0 for s in slopes) and dirichlet_ok
    report(10, ok, f"neumann {verdicts}, max D'(z0) = {max(slopes):.2e}, dirichlet {dirichlet_ok}")
    assert ok


# --- 11 --------------------------------------------------------------------


def test_criterion_11_estimate_certificates():
    failures = []
    lambda_d = 2.0
    for n in (2, 3):
        ys = default_y_grid()
        for q in DEFAULT_Q[:5]:
            p = HypergeomParams.from_q(n, q)
            for cert in (certify_tri_ku_caseA(p, ys), certify_product(p, ys)):
                if not cert.passed:
                    failures.append(cert.record())
        for q in (-1.0 / n, 0.0, 0.5, 1.0):
            cert = certify_caseB(HypergeomParams.from_q(n, q), ys)
            tri = cert.parts[0]
            if not cert.passed or tri.observed_upper_const > 1.0:
                failures.append(cert.record())
        delta_b = 2.0 * math.sqrt(lambda_d / n)
        for eta in (0.0, delta_b, 2.0 * delta_b):
            for j, extra in ((1, 0.0), (1, 3.0), (2, 10.0)):
                mode = Mode(1, j, (n - 1) * j / 2.0 + extra)
                cert = check_monotonicity(mode, n, eta, default_monotonicity_grid(n, eta))
                if not cert.passed:
                    failures.append(cert.record())
    report(11, not failures, f"{len(failures)} failing certificates")
    assert not failures, failures


# --- 12 --------------------------------------------------------------------

CLI_RUNS = [
    ["specfun", "--fn", "K", "--nu", "0.5", "--y", "1,2,5"],
    ["certify", "--what", "all", "--npts", "16"],
    ["solve", "--n", "2", "--j", "1", "--lam", "3", "--npts", "6"],
    ["classify", "--neumann", "--kappa0", "0", "--n", "3"],
    ["classify", "--dirichlet", "--flux", "1"],
    ["spectrum", "--n", "2", "--j-max", "2", "--per-weight", "4", "--seed", "7", "--jitter", "0.3"],
]


@pytest.mark.parametrize("argv", CLI_RUNS, ids=[r[0] + str(i) for i, r in enumerate(CLI_RUNS)])
def test_criterion_12_cli_determinism(argv, tmp_path):
    outputs = []
    for attempt in range(2):
        path = tmp_path / f"out{attempt}.txt"
        proc = subprocess.run(
            [sys.executable, "-m", "calabi_liouville", *argv, "--jobs", "1", "--output", str(path)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        outputs.append(path.read_bytes())
    ok = outputs[0] == outputs[1] and len(outputs[0]) > 0
    report(12, ok, f"{argv[0]}: {len(outputs[0])} bytes, identical={outputs[0] == outputs[1]}")
    assert ok

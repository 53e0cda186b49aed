r"""Gamma, modified Bessel and confluent hypergeometric functions.

Everything is evaluated from scratch in double precision and is available in
the log domain through :class:`~calabi_liouville.logvalue.LogValue`.  The
linear-domain wrappers raise ``OverflowError`` instead of returning ``inf``.

Regime policy (thresholds are module constants):

========================  ==================================================
function                  path
========================  ==================================================
``I_nu``                  power series for ``y <= 30``; trapezoid rule on the
                          even integrand ``exp(y cos t) cos(nu t)`` up to
                          ``1e3``; Hankel asymptotic series beyond
``K_nu``                  defining combination of ``I_{+-nu}`` for ``y <= 1``
                          and ``nu`` away from integers; trapezoid rule on
                          ``exp(-y cosh t) cosh(nu t)`` up to ``1e3``;
                          asymptotic series beyond
``M(beta, alpha, y)``     negative ``y``: Kummer transformation to a series
                          with positive argument; positive argument: series
                          (scaled beyond ``30``), asymptotic beyond ``1e3``
``U(beta, alpha, y)``     trapezoid rule in ``s = log t`` centred on the peak
                          of the integrand; asymptotic beyond ``1e3``
========================  ==================================================

The trapezoid rule converges geometrically for integrands analytic in a strip
and negligible at the ends, which is why it is used for every integral here.
The adaptive engine in :mod:`calabi_liouville.quadrature` stays independent
and is used only by the oracle path :func:`log_kummer_M_via_bessel` and by tests.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import ConvergenceError, DomainError, PoleError
from .logvalue import ONE, ZERO, LogValue, logsumexp, signed_logsumexp

SERIES_MAX = 30.0
INTEGRAL_MAX = 1.0e3
K_SERIES_MAX = 1.0
K_SERIES_MIN_DIST = 0.1
MAX_TERMS = 10_000
REL_STOP = 1e-17
# exp(-TRAP_NATS) is the relative truncation level for trapezoid sums; the
# node spacing is chosen so the discretization error is exp(-TRAP_RATE).
TRAP_NATS = 46.0
TRAP_RATE = 44.0
# Cancellation factor beyond which the direct Kummer series is redone exactly.
EXACT_CANCEL = 1e3

_LOG_PI = math.log(math.pi)
_LOG_2PI = math.log(2.0 * math.pi)
_GL_X, _GL_W = np.polynomial.legendre.leggauss(64)


def _is_nonpositive_int(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


def _is_int(x: float) -> bool:
    return x == math.floor(x)


def _sinpi(x: float) -> float:
    m = round(x)
    s = math.sin(math.pi * (x - m))
    return -s if m % 2 else s


# ---------------------------------------------------------------- gamma ----


def log_gamma(x: float) -> LogValue:
    """Sign and ``log|Gamma(x)|``; reflection formula for negative ``x``."""
    if _is_nonpositive_int(x):
        raise PoleError(f"Gamma has a pole at {x}")
    if x > 0:
        return LogValue(1, math.lgamma(x))
    s = _sinpi(x)
    return LogValue(1 if s > 0 else -1, _LOG_PI - math.log(abs(s)) - math.lgamma(1.0 - x))


def gamma(x: float) -> float:
    return log_gamma(x).to_float()


def log_rgamma(x: float) -> LogValue:
    """``1/Gamma(x)``, which is zero at the poles of Gamma."""
    if _is_nonpositive_int(x):
        return ZERO
    g = log_gamma(x)
    return LogValue(g.sign, -g.log_abs)


# --------------------------------------------------------------- Bessel ----


def _log_I_series(nu: float, y: float) -> LogValue:
    lead = log_rgamma(nu + 1.0) * LogValue(1, nu * math.log(y / 2.0))
    q = y * y / 4.0
    term, terms, running = 1.0, [1.0], 1.0
    for k in range(1, MAX_TERMS):
        nxt = term * q / (k * (k + nu))
        terms.append(nxt)
        running += nxt
        if abs(nxt) < REL_STOP * abs(running) and abs(nxt) < abs(term):
            return lead * LogValue.from_float(math.fsum(terms))
        term = nxt
    raise ConvergenceError(f"I series did not converge for nu={nu}, y={y}")


def _trapezoid_strip(y: float) -> float:
    """Node spacing for integrands whose log has curvature ~ ``y`` at the peak."""
    d = min(1.0, 1.0 / math.sqrt(y)) if y > 0 else 1.0
    return 2.0 * math.pi * d / TRAP_RATE


def _log_I_integral(nu: float, y: float) -> LogValue:
    h = _trapezoid_strip(y)
    # y (1 - cos t) exceeds TRAP_NATS beyond theta_max
    c = 1.0 - TRAP_NATS / y
    theta_max = math.pi if c <= -1.0 else math.acos(c)
    theta = h * np.arange(int(theta_max / h) + 1)
    vals = np.exp(-2.0 * y * np.sin(theta / 2.0) ** 2) * np.cos(nu * theta)
    vals[0] *= 0.5
    body = h * math.fsum(vals)
    first = LogValue.from_float(body) * LogValue(1, y - _LOG_PI)
    s = _sinpi(nu)
    if s == 0.0:
        return first
    # second piece is O(exp(-y)); a fixed Gauss-Legendre panel is ample
    t_max = 1.0
    while 2.0 * y * math.sinh(t_max / 2.0) ** 2 + nu * t_max < TRAP_NATS:
        t_max *= 2.0
    t = 0.5 * t_max * (_GL_X + 1.0)
    tail = 0.5 * t_max * float(np.dot(_GL_W, np.exp(-2.0 * y * np.sinh(t / 2.0) ** 2 - nu * t)))
    second = LogValue.from_float(-s * tail) * LogValue(1, -y - _LOG_PI)
    return signed_logsumexp([first, second])


def _hankel_sum(nu: float, y: float, alternate: bool) -> float | None:
    mu = 4.0 * nu * nu
    term, total = 1.0, 1.0
    for k in range(1, 200):
        nxt = term * (mu - (2 * k - 1) ** 2) / (8.0 * k * y)
        if alternate:
            nxt = -nxt
        if abs(nxt) > abs(term):
            return None
        total += nxt
        if abs(nxt) < REL_STOP * abs(total):
            return total
        term = nxt
    return None


def log_bessel_I(nu: float, y: float) -> LogValue:
    """``I_nu(y)`` for real ``nu`` and ``y >= 0``."""
    if y < 0:
        raise DomainError(f"bessel_I requires y >= 0, got {y}")
    if nu < 0 and _is_int(nu):
        nu = -nu
    if y == 0.0:
        if nu == 0.0:
            return ONE
        if nu > 0:
            return ZERO
        raise DomainError(f"I_{nu}(0) is infinite")
    if y <= SERIES_MAX:
        return _log_I_series(nu, y)
    if y <= INTEGRAL_MAX:
        return _log_I_integral(nu, y)
    s = _hankel_sum(nu, y, alternate=True)
    if s is None:
        return _log_I_integral(nu, y)
    return LogValue(1, y - 0.5 * (_LOG_2PI + math.log(y)) + math.log(s))


def bessel_I(nu: float, y: float) -> float:
    return log_bessel_I(nu, y).to_float()


def log_bessel_K_series(nu: float, y: float) -> LogValue:
    """``pi/(2 sin(nu pi)) (I_{-nu} - I_nu)`` by the power series.

    Exposed for cross-path checks. Loses about ``2y/ln 10`` digits to
    cancellation and is undefined at integer ``nu``.
    """
    if _is_int(nu):
        raise PoleError("defining combination is singular at integer order")
    if y <= 0:
        raise DomainError(f"bessel_K requires y > 0, got {y}")
    diff = _log_I_series(-nu, y) - _log_I_series(nu, y)
    return diff * LogValue.from_float(math.pi / (2.0 * _sinpi(nu)))


def _log_K_integral(nu: float, y: float) -> LogValue:
    h = _trapezoid_strip(y)
    t_max = math.acosh(1.0 + TRAP_NATS / y)
    while y * (math.cosh(t_max) - 1.0) - nu * t_max < TRAP_NATS:
        t_max += 1.0
    t = h * np.arange(int(t_max / h) + 1)
    nt = nu * t
    log_cosh = nt + np.log1p(np.exp(-2.0 * nt)) - math.log(2.0)
    logs = -2.0 * y * np.sinh(t / 2.0) ** 2 + log_cosh
    logs[0] += math.log(0.5)
    return LogValue(1, -y + math.log(h) + logsumexp(logs))


def log_bessel_K(nu: float, y: float) -> LogValue:
    """``K_nu(y)`` for real ``nu`` and ``y > 0``; symmetric in ``nu`` by construction."""
    if y <= 0:
        raise DomainError(f"bessel_K requires y > 0, got {y}")
    nu = abs(nu)
    if y <= K_SERIES_MAX and abs(nu - round(nu)) >= K_SERIES_MIN_DIST:
        return log_bessel_K_series(nu, y)
    if y <= INTEGRAL_MAX:
        return _log_K_integral(nu, y)
    s = _hankel_sum(nu, y, alternate=False)
    if s is None:
        return _log_K_integral(nu, y)
    return LogValue(1, -y + 0.5 * (_LOG_PI - math.log(2.0 * y)) + math.log(s))


def bessel_K(nu: float, y: float) -> float:
    return log_bessel_K(nu, y).to_float()


# --------------------------------------------------------------- Kummer ----


def _series_float(a: float, b: float, x: float) -> tuple[float, float]:
    """Direct series in floats: returns ``(sum, max |term|)``."""
    term, terms, big, running = 1.0, [1.0], 1.0, 1.0
    for k in range(MAX_TERMS):
        if a + k == 0.0:
            return math.fsum(terms), big
        nxt = term * (a + k) / (b + k) * x / (k + 1)
        terms.append(nxt)
        running += nxt
        big = max(big, abs(nxt))
        if abs(nxt) < REL_STOP * abs(running) and abs(nxt) < abs(term):
            total = math.fsum(terms)
            if abs(nxt) < REL_STOP * abs(total) or total == 0.0:
                return total, big
        term = nxt
    raise ConvergenceError(f"Kummer series did not converge for ({a}, {b}, {x})")


def _series_exact(a: float, b: float, x: float) -> float:
    """Direct series with exact rational accumulation at the float inputs."""
    fa, fb, fx = Fraction(a), Fraction(b), Fraction(x)
    term, total = Fraction(1), Fraction(1)
    prev = 1.0
    for k in range(MAX_TERMS):
        if fa + k == 0:
            return float(total)
        term = term * (fa + k) / (fb + k) * fx / (k + 1)
        total += term
        ft = abs(float(term))
        if ft < REL_STOP * abs(float(total)) and ft < prev:
            return float(total)
        prev = ft
        # keep the rationals small: round to a dyadic with 256 significant bits
        if term.denominator.bit_length() > 4000:
            if ft == 0.0:
                term = Fraction(0)
            else:
                shift = 256 - math.frexp(ft)[1]
                term = Fraction(round(term * 2**shift), 2**shift)
    raise ConvergenceError(f"Kummer series did not converge for ({a}, {b}, {x})")


def kummer_M_series(beta: float, alpha: float, y: float) -> float:
    """The defining power series of ``M(beta, alpha, y)``, no transformation.

    Summed in floats; redone in exact rational arithmetic when the terms
    cancel by more than ``EXACT_CANCEL``.
    """
    if _is_nonpositive_int(alpha):
        raise PoleError(f"M has a pole at alpha={alpha}")
    value, big = _series_float(beta, alpha, y)
    if big > EXACT_CANCEL * max(abs(value), 1e-300):
        return _series_exact(beta, alpha, y)
    return value


def _log_series_scaled(a: float, b: float, x: float) -> LogValue:
    """Positive-term series (``a, b, x > 0``) with rescaling and compensation."""
    log_scale = 0.0
    term, total, comp = 1.0, 1.0, 0.0
    for k in range(MAX_TERMS):
        term *= (a + k) / (b + k) * x / (k + 1)
        t = total + term
        comp += (total - t) + term if abs(total) >= abs(term) else (term - t) + total
        total = t
        if total > 1e280:
            total *= 1e-280
            term *= 1e-280
            comp *= 1e-280
            log_scale += 280.0 * math.log(10.0)
        ratio = (a + k + 1) / (b + k + 1) * x / (k + 2)
        if term < REL_STOP * total and ratio < 1.0:
            return LogValue(1, log_scale + math.log(total + comp))
    raise ConvergenceError(f"Kummer series exceeded {MAX_TERMS} terms at x={x}")


def _log_series_window(a: float, b: float, x: float) -> LogValue:
    """Positive-term series summed only around its largest terms."""
    k_peak = max(0, int(round(x + a - b)))
    half = int(10.0 * math.sqrt(x + abs(a)) + 10.0)
    k_lo, k_hi = max(0, k_peak - half), k_peak + half
    if k_hi - k_lo > MAX_TERMS:
        raise ConvergenceError(f"Kummer series window exceeds {MAX_TERMS} terms at x={x}")
    log_lo = (
        math.lgamma(a + k_lo) - math.lgamma(a) - math.lgamma(b + k_lo) + math.lgamma(b)
        + k_lo * math.log(x) - math.lgamma(k_lo + 1.0)
    )
    k = np.arange(k_lo, k_hi, dtype=float)
    steps = np.log((a + k) / (b + k) * x / (k + 1.0))
    logs = log_lo + np.concatenate(([0.0], np.cumsum(steps)))
    return LogValue(1, logsumexp(logs))


def _log_M_asymptotic(a: float, b: float, x: float) -> LogValue | None:
    """``Gamma(b)/Gamma(a) e^x x^(a-b) sum (b-a)_k (1-a)_k / (k! x^k)`` if it converges."""
    term, terms = 1.0, [1.0]
    for k in range(200):
        nxt = term * (b - a + k) * (1.0 - a + k) / ((k + 1) * x)
        if abs(nxt) > abs(term):
            return None
        terms.append(nxt)
        if abs(nxt) < REL_STOP * abs(math.fsum(terms)):
            s = LogValue.from_float(math.fsum(terms))
            return log_gamma(b) * log_rgamma(a) * LogValue(1, x + (a - b) * math.log(x)) * s
        term = nxt
    return None


def _log_M_positive(a: float, b: float, x: float) -> LogValue:
    """``M(a, b, x)`` for ``x > 0``."""
    if a > 0 and b > 0:
        if x <= INTEGRAL_MAX:
            return _log_series_scaled(a, b, x)
        asym = _log_M_asymptotic(a, b, x)
        return asym if asym is not None else _log_series_window(a, b, x)
    if x > 700.0:
        raise DomainError(f"M({a}, {b}, {x}) with sign-changing terms is only supported for x <= 700")
    return LogValue.from_float(kummer_M_series(a, b, x))


def log_kummer_M(beta: float, alpha: float, y: float) -> LogValue:
    """Kummer's function ``M(beta, alpha, y)``.

    Negative arguments go through ``M(beta, alpha, y) = e^y M(alpha-beta, alpha, -y)``
    so the summed series has a positive argument.
    """
    if _is_nonpositive_int(alpha):
        raise PoleError(f"M has a pole at alpha={alpha}")
    if y == 0.0:
        return ONE
    if beta == alpha:
        return LogValue(1, y)
    if _is_nonpositive_int(beta) and abs(y) <= 700.0:
        return LogValue.from_float(kummer_M_series(beta, alpha, y))
    if y < 0:
        if alpha > 0:
            return LogValue(1, y) * _log_M_positive(alpha - beta, alpha, -y)
        return LogValue.from_float(kummer_M_series(beta, alpha, y))
    return _log_M_positive(beta, alpha, y)


def kummer_M(beta: float, alpha: float, y: float) -> float:
    return log_kummer_M(beta, alpha, y).to_float()


# -------------------------------------------------------------- Tricomi ----


def _log_U_integral(a: float, b: float, x: float) -> LogValue:
    r"""``U(a, b, x) = Gamma(a)^{-1} \int_R exp(phi(s)) ds`` with ``t = e^s``."""
    c = b - a - 1.0

    def phi(s: np.ndarray | float):
        return -x * np.exp(s) + a * s + c * np.logaddexp(0.0, s)

    # peak: x e^s = a + c sigma(s); the root is unique for a > 0
    lo, hi = -60.0, 60.0

    def g(s: float) -> float:
        return x * math.exp(min(s, 700.0)) - a - c / (1.0 + math.exp(-s))

    while g(lo) > 0:
        lo -= 60.0
    while g(hi) < 0:
        hi += 60.0
    # safeguarded Newton: fall back to bisection whenever a step leaves the bracket
    s_star = 0.5 * (lo + hi)
    for _ in range(200):
        gs = g(s_star)
        if gs > 0:
            hi = s_star
        else:
            lo = s_star
        sig = 1.0 / (1.0 + math.exp(-s_star))
        slope = x * math.exp(min(s_star, 700.0)) - c * sig * (1.0 - sig)
        step = s_star - gs / slope if slope > 0 else lo - 1.0
        s_new = step if lo < step < hi else 0.5 * (lo + hi)
        if abs(s_new - s_star) < 1e-13 * max(1.0, abs(s_star)) or hi - lo < 1e-13:
            s_star = s_new
            break
        s_star = s_new
    sig = 1.0 / (1.0 + math.exp(-s_star))
    curv = a + c * sig * sig
    h = _trapezoid_strip(curv)
    top = float(phi(s_star))
    slope_left = max(a, 1e-3)
    left = s_star - 1.0
    while float(phi(left)) > top - TRAP_NATS:
        left -= max(1.0, 0.5 * TRAP_NATS / slope_left)
    right = s_star + 1.0
    while float(phi(right)) > top - TRAP_NATS:
        right += 1.0
    n_left = int((s_star - left) / h) + 1
    n_right = int((right - s_star) / h) + 1
    if n_left + n_right > 400_000:
        raise ConvergenceError(f"U({a}, {b}, {x}) needs too many nodes")
    s = s_star + h * np.arange(-n_left, n_right + 1)
    return LogValue(1, math.log(h) + logsumexp(phi(s))) * log_rgamma(a)


def _log_U_asymptotic(a: float, b: float, x: float) -> LogValue | None:
    term, terms = 1.0, [1.0]
    for k in range(200):
        nxt = -term * (a + k) * (a - b + 1.0 + k) / ((k + 1) * x)
        if abs(nxt) > abs(term):
            return None
        terms.append(nxt)
        if abs(nxt) < REL_STOP * abs(math.fsum(terms)):
            return LogValue(1, -a * math.log(x)) * LogValue.from_float(math.fsum(terms))
        term = nxt
    return None


def log_tricomi_U(beta: float, alpha: float, y: float) -> LogValue:
    """Tricomi's function ``U(beta, alpha, y)`` for ``beta > 0``, ``y > 0``."""
    if beta <= 0:
        raise DomainError(f"tricomi_U integral path requires beta > 0, got {beta}")
    if y <= 0:
        raise DomainError(f"tricomi_U requires y > 0, got {y}")
    if y > INTEGRAL_MAX:
        asym = _log_U_asymptotic(beta, alpha, y)
        if asym is not None:
            return asym
    return _log_U_integral(beta, alpha, y)


def tricomi_U(beta: float, alpha: float, y: float) -> float:
    return log_tricomi_U(beta, alpha, y).to_float()


def tricomi_U_connection(beta: float, alpha: float, y: float) -> float:
    """Two-term Kummer combination for ``U``; valid for non-integer ``alpha``.

    Works for any ``beta`` but cancels badly once ``y`` is large.
    """
    if _is_int(alpha):
        raise PoleError("connection formula needs non-integer alpha")
    first = log_gamma(1.0 - alpha) * log_rgamma(1.0 + beta - alpha) * log_kummer_M(beta, alpha, y)
    second = (
        log_gamma(alpha - 1.0) * log_rgamma(beta)
        * LogValue(1, (1.0 - alpha) * math.log(y))
        * log_kummer_M(1.0 + beta - alpha, 2.0 - alpha, y)
    )
    return (first + second).to_float()


def tri_T(beta: float, alpha: float, y: float) -> LogValue:
    """Decaying solution ``e^y U(alpha - beta, alpha, -y)`` on the negative axis."""
    if not alpha > beta:
        raise DomainError(f"tri_T requires alpha > beta, got alpha={alpha}, beta={beta}")
    if y >= 0:
        raise DomainError(f"tri_T requires y < 0, got {y}")
    return LogValue(1, y) * log_tricomi_U(alpha - beta, alpha, -y)


# ---------------------------------------------------------------- paths ----


def log_kummer_M_via_bessel(beta: float, alpha: float, y: float, tol: float = 1e-12) -> LogValue:
    """``M(beta, alpha, y)`` for ``y <= 0`` through a Bessel-kernel integral.

    With ``x = -y`` and ``t = u^2``::

        M = Gamma(alpha)/Gamma(alpha-beta) x^{(1-alpha)/2}
            * int_0^inf 2 u^{alpha-2 beta} I_{alpha-1}(2 sqrt(x) u) e^{-u^2-x} du

    The integral is done by the adaptive engine, so this path shares nothing
    with the series used by :func:`log_kummer_M`.
    """
    from .quadrature import integrate_finite

    if y > 0:
        raise DomainError(f"Bessel-integral path requires y <= 0, got {y}")
    if not alpha > beta:
        raise DomainError("Bessel-integral path requires alpha > beta")
    if y == 0.0:
        return ONE
    x = -y
    rx = math.sqrt(x)
    nu = alpha - 1.0
    p = alpha - 2.0 * beta

    def f(u: float) -> float:
        if u == 0.0:
            return 0.0 if 2.0 * (alpha - beta) - 1.0 > 0 else math.inf
        lv = log_bessel_I(nu, 2.0 * rx * u)
        return 2.0 * lv.sign * math.exp(lv.log_abs + p * math.log(u) - u * u - x)

    # integrand ~ u^{2a-1} exp(-(u - sqrt x)^2) with a = alpha - beta; split at
    # the peak and flatten the endpoint power with u = v^(1/a) when a < 1
    a = alpha - beta
    split = max(rx, 1.0)
    upper = split + 12.0 + math.sqrt(max(p, 0.0) + 1.0)
    if a < 1.0:
        def head(v: float) -> float:
            return 0.0 if v == 0.0 else f(v ** (1.0 / a)) * v ** (1.0 / a - 1.0) / a

        first = integrate_finite(head, 0.0, split ** a, tol=0.0, rel_tol=tol).value
    else:
        first = integrate_finite(f, 0.0, split, tol=0.0, rel_tol=tol).value
    total = first + integrate_finite(f, split, upper, tol=0.0, rel_tol=tol).value
    pref = log_gamma(alpha) * log_rgamma(alpha - beta) * LogValue(1, 0.5 * (1.0 - alpha) * math.log(x))
    return pref * LogValue.from_float(total)


def log_bessel_hypergeom_bridge(nu: float, y: float) -> tuple[LogValue, LogValue]:
    """``(I_nu(y), K_nu(y))`` rebuilt from ``M`` and ``U``."""
    if nu <= 0 or y <= 0:
        raise DomainError("bridge requires nu > 0 and y > 0")
    i_val = (
        LogValue(1, nu * math.log(y / 2.0) - y) * log_rgamma(nu + 1.0)
        * log_kummer_M(nu + 0.5, 2.0 * nu + 1.0, 2.0 * y)
    )
    k_val = LogValue(1, 0.5 * _LOG_PI + nu * math.log(2.0 * y) - y) * log_tricomi_U(
        nu + 0.5, 2.0 * nu + 1.0, 2.0 * y
    )
    return i_val, k_val


def bessel_hypergeom_bridge(nu: float, y: float) -> tuple[float, float]:
    i_val, k_val = log_bessel_hypergeom_bridge(nu, y)
    return i_val.to_float(), k_val.to_float()

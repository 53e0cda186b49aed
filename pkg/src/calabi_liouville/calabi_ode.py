r"""Per-mode fundamental solutions of the radial ODE.

Each mode ``(k, j, lambda)`` of the cross-section reduces the Laplacian to

.. math::

    u'' - \left(\tfrac{j^2 n^2}{4} z^n + n\lambda\right) z^{n-2} u = z^{n-1}\,\xi(z).

With ``zeta = z**n`` the homogeneous equation becomes a confluent
hypergeometric equation (``j >= 1``) or, for ``j = 0``, a modified Bessel
equation of order ``1/n`` in ``2 sqrt(lambda/n) z**(n/2)``.  This module builds
the growing/decaying pair ``(G, D)`` for each branch, the Laplace-method
profile functions that control them, and finite-difference utilities used to
check them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .errors import DomainError
from .logvalue import LogValue
from .specfun import (
    log_bessel_I,
    log_bessel_K,
    log_gamma,
    log_kummer_M,
    log_rgamma,
    tri_T,
)

LINEAR_EXPONENT_MAX = 600.0


@dataclass(frozen=True)
class Mode:
    """One cross-section mode: index ``k``, circle weight ``j``, divisor eigenvalue ``lam``."""

    k: int
    j: int
    lam: float

    def __post_init__(self) -> None:
        if self.k < 0 or self.j < 0 or self.lam < 0:
            raise DomainError(f"mode fields must be non-negative: {self}")
        if self.k == 0 and (self.j != 0 or self.lam != 0):
            raise DomainError("mode k = 0 must have j = 0 and lambda = 0")
        if self.k > 0 and self.j == 0 and self.lam <= 0:
            raise DomainError("a zero-weight mode with k > 0 needs lambda > 0")

    def check(self, n: int, lambda_D: float | None = None) -> Mode:
        """Raise unless the mode is admissible for dimension ``n`` (and gap ``lambda_D``)."""
        if n < 2:
            raise DomainError(f"n must be >= 2, got {n}")
        if self.lam < (n - 1) * self.j / 2.0:
            raise DomainError(
                f"lambda = {self.lam} is below the bound (n-1) j / 2 = {(n - 1) * self.j / 2.0}"
            )
        if lambda_D is not None and self.j == 0 and self.k > 0 and self.lam < lambda_D:
            raise DomainError(f"zero-weight eigenvalue {self.lam} is below lambda_D = {lambda_D}")
        return self


@dataclass(frozen=True)
class HypergeomParams:
    """Parameters of the nonzero-mode equation.

    ``alpha = 1 - 1/n``, ``beta = (1 - 1/n)/2 - lambda/(j n)``,
    ``q = alpha - beta - 1`` and ``gamma_n = 1/2 + 1/n``.
    """

    alpha: float
    beta: float
    q: float
    gamma_n: float

    def __post_init__(self) -> None:
        tol = 1e-12
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.beta > tol:
            raise DomainError(f"beta must be <= 0, got {self.beta}")
        if not 0.5 < self.gamma_n <= 1.0:
            raise DomainError(f"gamma_n must lie in (1/2, 1], got {self.gamma_n}")
        if abs(self.q - (self.alpha - self.beta - 1.0)) > tol * max(1.0, abs(self.q)):
            raise DomainError("q must equal alpha - beta - 1")
        if self.q < -(self.gamma_n - 0.5) - tol:
            raise DomainError(f"q must be >= -1/n, got {self.q}")

    @property
    def n(self) -> int:
        return round(1.0 / (self.gamma_n - 0.5))

    @classmethod
    def from_q(cls, n: int, q: float) -> HypergeomParams:
        """Pack with ``alpha = 1 - 1/n`` and the requested ``q``."""
        alpha = 1.0 - 1.0 / n
        return cls(alpha, alpha - q - 1.0, q, 0.5 + 1.0 / n)


def hyper_params(mode: Mode, n: int) -> HypergeomParams:
    if mode.j < 1:
        raise DomainError("hyper_params needs j >= 1; zero-weight modes use the Bessel branch")
    mode.check(n)
    alpha = 1.0 - 1.0 / n
    beta = 0.5 * alpha - mode.lam / (mode.j * n)
    # at lambda = (n-1) j / 2 beta vanishes exactly; remove the rounding residue
    if abs(beta) < 1e-15:
        beta = 0.0
    return HypergeomParams(alpha, beta, alpha - beta - 1.0, 0.5 + 1.0 / n)


def zeta_map(z: float, n: int) -> float:
    return z**n


def zeta_map_inverse(zeta: float, n: int) -> float:
    return zeta ** (1.0 / n)


def potential(mode: Mode, n: int, z: float) -> float:
    """Coefficient ``q(z)`` in ``u'' = q(z) u``."""
    return (mode.j**2 * n**2 / 4.0 * z**n + n * mode.lam) * z ** (n - 2)


# ------------------------------------------------------------ pairs ----


@dataclass(frozen=True)
class FundamentalPair:
    """Growing/decaying solutions ``(G, D)`` with ``W = G D' - G' D = w_const``."""

    mode: Mode
    n: int
    w_const: float
    eval_G: Callable[[float], LogValue] = field(repr=False)
    eval_D: Callable[[float], LogValue] = field(repr=False)

    def _linear_guard(self, z: float) -> None:
        if self.mode.j * z**self.n / 2.0 > LINEAR_EXPONENT_MAX:
            raise OverflowError(
                f"linear-domain evaluation refused at z={z}: j z^n / 2 exceeds {LINEAR_EXPONENT_MAX}"
            )

    def G(self, z: float) -> float:
        self._linear_guard(z)
        return self.eval_G(z).to_float()

    def D(self, z: float) -> float:
        self._linear_guard(z)
        return self.eval_D(z).to_float()


def fundamental_pair(mode: Mode, n: int) -> FundamentalPair:
    mode.check(n)
    if mode.k == 0:
        return FundamentalPair(
            mode, n, 1.0, lambda z: LogValue(1, 0.0), lambda z: LogValue.from_float(z)
        )
    if mode.j == 0:
        rate = 2.0 * math.sqrt(mode.lam / n)
        order = 1.0 / n

        def g_zero(z: float) -> LogValue:
            return LogValue(1, 0.5 * math.log(z)) * log_bessel_I(order, rate * z ** (n / 2.0))

        def d_zero(z: float) -> LogValue:
            return LogValue(1, 0.5 * math.log(z)) * log_bessel_K(order, rate * z ** (n / 2.0))

        return FundamentalPair(mode, n, -n / 2.0, g_zero, d_zero)

    hp = hyper_params(mode, n)
    j = mode.j
    w = (log_gamma(hp.alpha - 1.0) * log_rgamma(hp.alpha - hp.beta)).to_float() * j ** (1.0 / n)

    def g_hyp(z: float) -> LogValue:
        y = -j * z**n
        return LogValue(1, -0.5 * y) * log_kummer_M(hp.beta, hp.alpha, y)

    def d_hyp(z: float) -> LogValue:
        y = -j * z**n
        return LogValue(1, -0.5 * y) * tri_T(hp.beta, hp.alpha, y)

    return FundamentalPair(mode, n, w, g_hyp, d_hyp)


# ---------------------------------------------------- finite differences ----


def default_step(z: float) -> float:
    """Step used for first-derivative (Wronskian) checks."""
    return max(1e-5, 1e-5 * z)


def fd_derivatives(f: Callable[[float], float], z: float, h: float) -> tuple[float, float, float]:
    """``(f, f', f'')`` at ``z`` from the quartic through five realized nodes.

    The nodes ``z + i h`` are rounded to doubles and the interpolant is
    differentiated in exact rational arithmetic, so the stencil is exact for
    polynomials of degree <= 4 sampled without error.  On an equispaced grid
    this is the standard fourth-order central stencil.
    """
    nodes = [z + i * h for i in (-2, -1, 0, 1, 2)]
    vals = [f(x) for x in nodes]
    xs = [Fraction(x) for x in nodes]
    x0 = Fraction(z)
    d1 = Fraction(0)
    d2 = Fraction(0)
    for i, (xi, fi) in enumerate(zip(xs, vals)):
        others = [xs[m] for m in range(5) if m != i]
        denom = Fraction(1)
        for xm in others:
            denom *= xi - xm
        diffs = [x0 - xm for xm in others]
        # first and second derivatives of prod(x - xm) at x0
        p1 = Fraction(0)
        p2 = Fraction(0)
        for a in range(4):
            prod_a = Fraction(1)
            for b in range(4):
                if b != a:
                    prod_a *= diffs[b]
            p1 += prod_a
            for b in range(4):
                if b == a:
                    continue
                prod_ab = Fraction(1)
                for c in range(4):
                    if c not in (a, b):
                        prod_ab *= diffs[c]
                p2 += prod_ab
        weight = Fraction(fi)
        d1 += weight * p1 / denom
        d2 += weight * p2 / denom
    return vals[2], float(d1), float(d2)


def _log_abs(evaluator: Callable[[float], LogValue]) -> Callable[[float], float]:
    return lambda x: evaluator(x).log_abs


def log_derivative(evaluator: Callable[[float], LogValue], z: float, h: float | None = None) -> float:
    """``d/dz log|u|`` for a log-domain evaluator."""
    return fd_derivatives(_log_abs(evaluator), z, default_step(z) if h is None else h)[1]


def wronskian_fd(pair: FundamentalPair, z: float, h: float | None = None) -> float:
    """Central-difference ``G D' - G' D``, formed as ``G D (log D' - log G')``."""
    h = default_step(z) if h is None else h
    g, d = pair.eval_G(z), pair.eval_D(z)
    dlg = log_derivative(pair.eval_G, z, h)
    dld = log_derivative(pair.eval_D, z, h)
    return ((g * d).to_float()) * (dld - dlg)


def residual_step(mode: Mode, n: int, z: float) -> float:
    """Second-derivative step: balances truncation against rounding on the scale ``1/sqrt(q)``."""
    q = potential(mode, n, z)
    scale = z if q <= 0 else min(z, 1.0 / math.sqrt(q))
    return 5e-3 * scale


def ode_residual(
    u: Callable[[float], float] | Callable[[float], LogValue],
    mode: Mode,
    n: int,
    z: float,
    rhs: Callable[[float], float] | None = None,
    h: float | None = None,
) -> float:
    """Scaled residual ``|u'' - q u - z^{n-1} rhs| / max(|u''|, |q u|, |z^{n-1} rhs|)``.

    ``u`` may return floats or :class:`LogValue`.  Log-domain solutions are
    handled through ``u''/u = (log u)'' + (log u)'^2`` and require ``rhs = None``.
    """
    if z < 1.0:
        raise DomainError(f"residual checks are defined for z >= 1, got {z}")
    q = potential(mode, n, z)
    sample = u(z)
    if isinstance(sample, LogValue):
        if rhs is not None:
            raise DomainError("log-domain residual needs a homogeneous equation")
        if sample.sign == 0:
            return 0.0
        step = 1e-3 * z if h is None else h
        _, l1, l2 = fd_derivatives(_log_abs(u), z, step)
        upp = l2 + l1 * l1
        # u''/u is assembled from two parts that cancel exactly when u'' = 0 (G = 1, D = z)
        scale = max(abs(upp), abs(q), abs(l2), l1 * l1)
        return 0.0 if scale == 0.0 else abs(upp - q) / scale
    step = residual_step(mode, n, z) if h is None else h
    val, _, upp = fd_derivatives(u, z, step)
    src = 0.0 if rhs is None else z ** (n - 1) * rhs(z)
    terms = (abs(upp), abs(q * val), abs(src))
    scale = max(terms)
    return 0.0 if scale == 0.0 else abs(upp - q * val - src) / scale


# ------------------------------------------------------ Laplace method ----


def _t0(q: float, x: float) -> float:
    r = 4.0 * q / x
    return 0.5 * r / (1.0 + math.sqrt(1.0 + r))


def _u0(params: HypergeomParams, x: float) -> float:
    return 0.5 * math.sqrt(x) * (1.0 + math.sqrt(1.0 + (4.0 * params.q + 2.0 * params.gamma_n) / x))


def profile_F(params: HypergeomParams, y: float, t: float) -> float:
    """``F(t) = y t + Q log(t / (t + 1))``."""
    return y * t + params.q * math.log(t / (t + 1.0))


def profile_G(params: HypergeomParams, y: float, u: float) -> float:
    """``G(u) = -u^2 + 2 sqrt(-y) u + (2Q + gamma_n) log u``."""
    return -u * u + 2.0 * math.sqrt(-y) * u + (2.0 * params.q + params.gamma_n) * math.log(u)


def laplace_profile(params: HypergeomParams, y: float) -> tuple[float, float, float, float]:
    """Critical points and critical values ``(t0, u0, F(t0), G(u0))`` at ``y <= -1``."""
    if y > -1.0:
        raise DomainError(f"laplace_profile needs y <= -1, got {y}")
    if params.q <= 0:
        raise DomainError(f"t0 exists only for Q > 0, got Q = {params.q}")
    x = -y
    t0, u0 = _t0(params.q, x), _u0(params, x)
    return t0, u0, profile_F(params, y, t0), profile_G(params, y, u0)


def ghat_only(params: HypergeomParams, y: float) -> float:
    """``y/2 + G(u0)``; defined whenever ``2Q + gamma_n >= 0``."""
    if y > -1.0:
        raise DomainError(f"profile needs y <= -1, got {y}")
    return 0.5 * y + profile_G(params, y, _u0(params, -y))


def fhat_of_y(params: HypergeomParams, y: float) -> float:
    t0, _, f0, _ = laplace_profile(params, y)
    return 0.5 * y + f0


def fhat_ghat(mode: Mode, n: int, z: float) -> tuple[float, float]:
    """``(F_hat(z), G_hat(z))`` with ``y = -j z^n``."""
    if z < 1.0:
        raise DomainError(f"fhat_ghat needs z >= 1, got {z}")
    params = hyper_params(mode, n)
    y = -mode.j * z**n
    _, _, f0, g0 = laplace_profile(params, y)
    return 0.5 * y + f0, 0.5 * y + g0

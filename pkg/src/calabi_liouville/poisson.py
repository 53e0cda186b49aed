"""Per-mode particular solutions, spectral synthesis and Liouville classification.

For a mode with fundamental pair ``(G, D)`` and Wronskian ``W`` the particular
solution of ``u'' - q u = z^(n-1) xi`` is

    u(z) = G(z)/W * int_z^inf D xi r^(n-1) dr + D(z)/W * int_{z1}^z G xi r^(n-1) dr.

Both integrals are evaluated with the integrand divided by ``D(z)`` resp.
``G(z)``; the ratios are at most one on the integration range, so the
quadrature runs on bounded numbers and the huge/tiny prefactor ``G(z) D(z)``
is applied once, in log form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence, TextIO

import numpy as np
from scipy.interpolate import CubicSpline

from .calabi_ode import FundamentalPair, Mode, fundamental_pair, log_derivative
from .errors import (
    ConvergenceError,
    DomainError,
    FitError,
    InconsistentDataError,
    NormalizationMissingError,
    NumericalError,
    TailTooLargeError,
)
from .logvalue import LogValue
from .quadrature import integrate_finite
from .spectral import CalabiParams, SpectrumTable, assemble_Lambda, sup_norm_weight

TAIL_NATS = 40.0
SOLVE_REL_TOL = 1e-13
TAIL_MAX_STEPS = 400
POWER_SLACK = 0.05

CLOSED_FORM = "closed_form"
SAMPLED = "sampled"

VERDICT_LINEAR = "linear_plus_decaying"
VERDICT_CONSTANT = "constant"
VERDICT_GAP = "gap_violation"


# ------------------------------------------------------- coefficients ----


@dataclass(frozen=True)
class ModeCoefficient:
    """Right-hand side ``xi_k`` of one mode.

    ``closed_form`` payloads are mappings with a ``family`` key:

    * ``{"family": "zero"}``
    * ``{"family": "exp_power", "amp": a, "rate": r, "power": p}`` meaning
      ``a z^p exp(r z^(n/2))`` (``rate`` and ``power`` default to 0).

    ``sampled`` payloads are ``(z_grid, values)``; the function is the cubic
    spline through the samples and zero outside the grid.

    ``bound`` optionally overrides the envelope ``(B, eta0)`` with
    ``|xi(z)| <= B exp(eta0 z^(n/2))`` for ``z >= 1``.
    """

    mode_index: int
    kind: str
    payload: object
    bound: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        if self.mode_index < 0:
            raise DomainError("mode_index must be non-negative")
        if self.kind == CLOSED_FORM:
            fam = dict(self.payload).get("family")
            if fam not in ("zero", "exp_power"):
                raise DomainError(f"unknown right-hand-side family {fam!r}")
        elif self.kind == SAMPLED:
            zs, vals = self.payload
            zs = np.asarray(zs, dtype=float)
            vals = np.asarray(vals, dtype=float)
            if zs.ndim != 1 or zs.shape != vals.shape or zs.size < 2:
                raise DomainError("sampled payload needs matching 1-d grids of length >= 2")
            if not np.all(np.diff(zs) > 0):
                raise DomainError("sampled grid must be strictly increasing")
            if not (np.all(np.isfinite(zs)) and np.all(np.isfinite(vals))):
                raise DomainError("sampled payload must be finite")
        else:
            raise DomainError(f"unknown coefficient kind {self.kind!r}")

    @classmethod
    def zero(cls, mode_index: int) -> ModeCoefficient:
        return cls(mode_index, CLOSED_FORM, {"family": "zero"})

    @classmethod
    def exp_power(
        cls, mode_index: int, amp: float, rate: float = 0.0, power: float = 0.0
    ) -> ModeCoefficient:
        return cls(
            mode_index, CLOSED_FORM, {"family": "exp_power", "amp": amp, "rate": rate, "power": power}
        )

    @classmethod
    def sampled(cls, mode_index: int, z_grid: Sequence[float], values: Sequence[float]) -> ModeCoefficient:
        return cls(mode_index, SAMPLED, (tuple(map(float, z_grid)), tuple(map(float, values))))

    def scaled(self, factor: float) -> ModeCoefficient:
        """The coefficient of ``factor * xi``."""
        bound = None if self.bound is None else (abs(factor) * self.bound[0], self.bound[1])
        if self.kind == SAMPLED:
            zs, vals = self.payload
            return ModeCoefficient(self.mode_index, SAMPLED, (zs, tuple(factor * v for v in vals)), bound)
        p = dict(self.payload)
        if p["family"] == "zero" or factor == 0.0:
            return ModeCoefficient(self.mode_index, CLOSED_FORM, {"family": "zero"}, bound)
        p["amp"] = factor * p["amp"]
        return ModeCoefficient(self.mode_index, CLOSED_FORM, p, bound)

    @property
    def support_end(self) -> float:
        if self.kind == SAMPLED:
            return self.payload[0][-1]
        return math.inf

    def is_zero(self) -> bool:
        if self.kind == SAMPLED:
            return not any(self.payload[1])
        p = dict(self.payload)
        return p["family"] == "zero" or p.get("amp", 0.0) == 0.0

    def function(self, n: int) -> Callable[[float], float]:
        if self.kind == SAMPLED:
            zs, vals = self.payload
            spline = CubicSpline(np.asarray(zs), np.asarray(vals))
            lo, hi = zs[0], zs[-1]

            def sampled_xi(z: float) -> float:
                return float(spline(z)) if lo <= z <= hi else 0.0

            return sampled_xi
        p = dict(self.payload)
        if p["family"] == "zero":
            return lambda z: 0.0
        amp, rate, power = float(p["amp"]), float(p.get("rate", 0.0)), float(p.get("power", 0.0))
        half = n / 2.0

        def exp_power(z: float) -> float:
            return amp * z**power * math.exp(rate * z**half)

        return exp_power

    def envelope(self, n: int) -> tuple[float, float]:
        """``(B, eta0)`` with ``|xi(z)| <= B exp(eta0 z^(n/2))`` on ``z >= 1``."""
        if self.bound is not None:
            return self.bound
        if self.kind == SAMPLED:
            return float(np.max(np.abs(self.payload[1]))), 0.0
        p = dict(self.payload)
        if p["family"] == "zero":
            return 0.0, 0.0
        amp, rate, power = abs(float(p["amp"])), float(p.get("rate", 0.0)), float(p.get("power", 0.0))
        if power <= 0.0:
            return amp, rate
        # z^p <= (2p / (n e eps))^(2p/n) exp(eps z^(n/2)) with eps = POWER_SLACK
        e = 2.0 * power / n
        const = (e / (math.e * POWER_SLACK)) ** e
        return amp * max(1.0, const), rate + POWER_SLACK


# ---------------------------------------------------------- solve_mode ----


def _integrate_scaled(f: Callable[[float], float], a: float, b: float, rel_tol: float) -> float:
    """``int_a^b f`` to ``rel_tol`` relative to ``int_a^b |f|``."""
    if a == b:
        return 0.0
    sign = 1.0
    if a > b:
        a, b, sign = b, a, -1.0
    mass = integrate_finite(lambda r: abs(f(r)), a, b, tol=1e-300, rel_tol=1e-3).value
    if mass == 0.0:
        return 0.0
    res = integrate_finite(f, a, b, tol=rel_tol * mass, rel_tol=rel_tol)
    return sign * res.value


class ModeSolution:
    """Evaluator for the variation-of-parameters solution of one mode.

    For ``k = 0`` neither basis function decays, so both integrals are anchored
    at ``z1``: ``u(z) = int_{z1}^z (z - r) r^(n-1) xi(r) dr``.
    """

    def __init__(
        self,
        mode: Mode,
        n: int,
        xi: ModeCoefficient,
        z1: float,
        z_max: float,
        rel_tol: float = SOLVE_REL_TOL,
    ) -> None:
        if z1 < 1.0:
            raise DomainError(f"z1 must be >= 1, got {z1}")
        if not z_max > z1:
            raise DomainError("need z_max > z1")
        if xi.kind == SAMPLED:
            zs = xi.payload[0]
            if zs[0] < z1 * (1.0 - 1e-12) or zs[-1] > z_max * (1.0 + 1e-12):
                raise DomainError("sampled grid must lie inside [z1, z_max]")
        self.mode = mode
        self.n = n
        self.xi = xi
        self.z1 = float(z1)
        self.z_max = float(z_max)
        self.rel_tol = rel_tol
        self.pair: FundamentalPair = fundamental_pair(mode, n)
        self._xi = xi.function(n)
        self._zero = xi.is_zero()
        self._B, self._eta0 = xi.envelope(n)
        # quadrature nodes repeat between the mass pass and the main pass
        self._log_g: dict[float, float] = {}
        self._log_d: dict[float, float] = {}

    def _lg(self, r: float) -> float:
        v = self._log_g.get(r)
        if v is None:
            v = self._log_g[r] = self.pair.eval_G(r).log_abs
        return v

    def _ld(self, r: float) -> float:
        v = self._log_d.get(r)
        if v is None:
            v = self._log_d[r] = self.pair.eval_D(r).log_abs
        return v

    # -- integrands -------------------------------------------------------

    def _source(self, r: float) -> float:
        return self._xi(r) * r ** (self.n - 1)

    def _log_envelope(self, r: float) -> float:
        return self._ld(r) + self._eta0 * r ** (self.n / 2.0) + (self.n - 1) * math.log(r)

    def _tail_end(self, z: float) -> float:
        """First ``T > z`` where the envelope of ``D xi r^(n-1)`` is 40 nats below its value at ``z``."""
        end = self.xi.support_end
        if z >= end:
            return z
        target = self._log_envelope(z) - TAIL_NATS
        r = z
        for _ in range(TAIL_MAX_STEPS):
            slope = -log_derivative(lambda s: LogValue(1, self._log_envelope(s)), r)
            step = 10.0 / slope if slope > 0 else r
            r = r + min(max(step, 1e-6 * r), r)
            if r >= end:
                return end
            if self._log_envelope(r) < target:
                return r
        raise ConvergenceError(
            f"tail of mode {self.mode} does not decay: envelope still above target at r={r:.6g}"
        )

    # -- evaluation -------------------------------------------------------

    def _scaled_integrals(self, z: float) -> tuple[float, float, float, float]:
        """``(log G(z), log D(z), A, B)`` with ``A = int_z^T D/D(z) f``, ``B = int_{z1}^z G/G(z) f``."""
        lg, ld = self._lg(z), self._ld(z)
        tail = self._tail_end(z)

        def upper(r: float) -> float:
            return math.exp(self._ld(r) - ld) * self._source(r)

        def lower(r: float) -> float:
            return math.exp(self._lg(r) - lg) * self._source(r)

        a = _integrate_scaled(upper, z, tail, self.rel_tol) if tail > z else 0.0
        b = _integrate_scaled(lower, self.z1, z, self.rel_tol)
        return lg, ld, a, b

    def log_value(self, z: float) -> LogValue:
        if self._zero:
            return LogValue(0, -math.inf)
        if self.mode.k == 0:
            return LogValue.from_float(self(z))
        lg, ld, a, b = self._scaled_integrals(z)
        return LogValue(1, lg + ld) * LogValue.from_float((a + b) / self.pair.w_const)

    def __call__(self, z: float) -> float:
        if self._zero:
            return 0.0
        if self.mode.k == 0:
            return _integrate_scaled(lambda r: (z - r) * self._source(r), self.z1, z, self.rel_tol)
        return self.log_value(z).to_float()

    def derivative(self, z: float) -> float:
        """``u'(z) = (G'(z) I1 + D'(z) I2) / W``, with logarithmic derivatives by finite differences."""
        if self._zero:
            return 0.0
        if self.mode.k == 0:
            return _integrate_scaled(self._source, self.z1, z, self.rel_tol)
        lg, ld, a, b = self._scaled_integrals(z)
        dlg = log_derivative(self.pair.eval_G, z)
        dld = log_derivative(self.pair.eval_D, z)
        combo = (dlg * a + dld * b) / self.pair.w_const
        return (LogValue(1, lg + ld) * LogValue.from_float(combo)).to_float()

    def rhs(self, z: float) -> float:
        return self._xi(z)


def solve_mode(
    mode: Mode, n: int, xi: ModeCoefficient, z1: float, z_max: float, rel_tol: float = SOLVE_REL_TOL
) -> ModeSolution:
    mode.check(n)
    return ModeSolution(mode, n, xi, z1, z_max, rel_tol)


# ------------------------------------------------------- growth bound ----


def mode_growth_bound(
    mode: Mode, params: CalabiParams, B_k: float, eta0: float, eta: float
) -> Callable[[float], float]:
    """Envelope ``z -> B_k Lambda_k^(1/(2n)) exp(eta z^(n/2))`` for a nonzero mode."""
    if abs(eta0) >= params.delta_b / 2.0:
        raise DomainError(f"|eta0| = {abs(eta0)} must be below delta_b / 2 = {params.delta_b / 2.0}")
    if not eta > eta0:
        raise DomainError("need eta > eta0")
    if mode.k == 0:
        raise DomainError("the growth envelope is stated for nonzero modes")
    if B_k < 0:
        raise DomainError("B_k must be non-negative")
    big = assemble_Lambda(mode, params)
    scale = B_k * big ** (1.0 / (2.0 * params.n))
    half = params.n / 2.0

    def envelope(z: float) -> float:
        return scale * math.exp(eta * z**half) if scale else 0.0

    return envelope


# ----------------------------------------------------------- synthesis ----


@dataclass
class Synthesis:
    spectrum: SpectrumTable
    solutions: dict[int, ModeSolution]
    weights: dict[int, float]
    tail_bound: float

    def mode(self, k: int) -> ModeSolution:
        return self.solutions[k]

    def field(self, z: float) -> float:
        """Sum of the per-mode solutions, in ascending mode order."""
        return math.fsum(self.solutions[k](z) for k in sorted(self.solutions))

    def envelope(self, z: float) -> float:
        """``sum_k |u_k(z)| max(1, Lambda_k)^(n/2)``: a bound for the sup over the cross-section."""
        return math.fsum(abs(self.solutions[k](z)) * self.weights[k] for k in sorted(self.solutions))


def synthesize(
    spectrum: SpectrumTable,
    coefficients: Sequence[ModeCoefficient],
    trunc_N: int,
    z1: float | None = None,
    z_max: float = 10.0,
    tol: float = 1e-8,
) -> Synthesis:
    """Solve the first ``trunc_N`` modes and bound the rest.

    The tail bound is ``sum_{k >= trunc_N} B_k Lambda_k^(1/(2n)) max(1, Lambda_k)^(n/2)``,
    i.e. the growth envelope in units of ``exp(eta z^(n/2))``.  Modes of the
    table without a coefficient have ``xi_k = 0``.
    """
    if not 0 <= trunc_N <= len(spectrum):
        raise DomainError(f"trunc_N must lie in [0, {len(spectrum)}]")
    params = spectrum.params
    n = params.n
    z1 = max(1.0, params.z0) if z1 is None else z1
    by_index: dict[int, ModeCoefficient] = {}
    for c in coefficients:
        if c.mode_index >= len(spectrum):
            raise DomainError(f"coefficient for unknown mode index {c.mode_index}")
        if c.mode_index in by_index:
            raise DomainError(f"duplicate coefficient for mode {c.mode_index}")
        by_index[c.mode_index] = c
    tail = 0.0
    for k in range(trunc_N, len(spectrum)):
        c = by_index.get(k)
        if c is None or c.is_zero():
            continue
        big = spectrum.entries[k].Lambda
        b, _ = c.envelope(n)
        tail += b * big ** (1.0 / (2.0 * n)) * sup_norm_weight(big, n)
    if tail > tol:
        raise TailTooLargeError(tail, tol)
    solutions, weights = {}, {}
    for k in range(trunc_N):
        if k not in by_index:
            continue
        entry = spectrum.entries[k]
        solutions[k] = solve_mode(entry.mode, n, by_index[k], z1, z_max)
        weights[k] = sup_norm_weight(entry.Lambda, n)
    return Synthesis(spectrum, solutions, weights, tail)


# ------------------------------------------------------ classification ----


@dataclass
class GrowthClass:
    """``u = kappa0 z + c0 + sum_k c_k D_k``."""

    kappa0: float
    c0: float
    decay_exponent: float
    residual: float
    verdict: str
    decaying: tuple[tuple[FundamentalPair, float], ...] = ()
    growing_fraction: dict[int, float] = field(default_factory=dict)

    @property
    def coefficients(self) -> dict[int, float]:
        return {pair.mode.k: c for pair, c in self.decaying}

    def evaluate(self, z: float) -> float:
        terms = [self.kappa0 * z, self.c0]
        terms.extend(c * pair.eval_D(z).to_float() for pair, c in self.decaying if c != 0.0)
        return math.fsum(terms)


def _verdict(kappa0: float, kappa_tol: float) -> str:
    return VERDICT_CONSTANT if abs(kappa0) <= kappa_tol else VERDICT_LINEAR


def _analytic_decay(mode: Mode, n: int) -> float:
    """Rate ``delta`` in ``D ~ exp(-delta z^(n/2))``; weight-``j >= 1`` modes decay faster than any such rate."""
    return 2.0 * math.sqrt(mode.lam / n) if mode.j == 0 else math.inf


def _safe_exp(x: float) -> float:
    return math.exp(min(x, 700.0))


def decompose_harmonic(
    per_mode_samples: Sequence[tuple[Mode, Sequence[float], Sequence[float]]],
    params: CalabiParams,
    kappa_tol: float = 1e-9,
    growth_tol: float = 1e-6,
) -> GrowthClass:
    """Fit ``kappa0 z + c0`` on mode 0 and a decay rate for every other mode.

    A growing component is detected by projecting each nonzero mode onto
    ``(G_k, D_k)`` with rows weighted by ``1/|u_k|``; the verdict is
    ``gap_violation`` when the ``G_k`` part exceeds ``growth_tol`` of ``|u_k|``
    at the end of the grid.
    """
    n = params.n
    zero = [s for s in per_mode_samples if s[0].k == 0]
    if len(zero) != 1:
        raise FitError("exactly one set of mode-0 samples is required")
    for mode, zs, vals in per_mode_samples:
        if len(zs) != len(vals):
            raise FitError(f"mode {mode.k}: grid and values differ in length")
        if len(zs) < 4:
            raise FitError(f"mode {mode.k}: need at least 4 samples, got {len(zs)}")
    _, z0s, v0s = zero[0]
    z0a = np.asarray(z0s, dtype=float)
    v0a = np.asarray(v0s, dtype=float)
    design = np.column_stack((z0a, np.ones_like(z0a)))
    (kappa0, c0), *_ = np.linalg.lstsq(design, v0a, rcond=None)
    misfit = v0a - design @ np.array([kappa0, c0])
    scale0 = max(float(np.max(np.abs(v0a))), 1e-300)
    residual = float(np.sqrt(np.mean(misfit**2))) / scale0

    decay = math.inf
    decaying: list[tuple[FundamentalPair, float]] = []
    growing: dict[int, float] = {}
    for mode, zs, vals in per_mode_samples:
        if mode.k == 0:
            continue
        za = np.asarray(zs, dtype=float)
        va = np.asarray(vals, dtype=float)
        if not np.any(va):
            continue
        pair = fundamental_pair(mode, n)
        # decay rate from the upper half of the grid
        half = len(za) // 2
        zu, vu = za[half:], va[half:]
        keep = vu != 0.0
        if np.count_nonzero(keep) >= 2:
            x = zu[keep] ** (n / 2.0)
            slope, intercept = np.polyfit(x, np.log(np.abs(vu[keep])), 1)
            fit = slope * x + intercept
            residual = max(residual, float(np.sqrt(np.mean((np.log(np.abs(vu[keep])) - fit) ** 2))))
            if slope < 0:
                decay = min(decay, -float(slope))
        # projection onto (G, D)
        weight = np.where(va != 0.0, np.abs(va), 1.0)
        lg = np.array([pair.eval_G(z).log_abs for z in za])
        ld = np.array([pair.eval_D(z).log_abs for z in za])
        lw = np.log(weight)
        cols = np.column_stack(
            [np.array([_safe_exp(a - w) for a, w in zip(lg, lw)]),
             np.array([_safe_exp(a - w) for a, w in zip(ld, lw)])]
        )
        norms = np.linalg.norm(cols, axis=0)
        norms[norms == 0.0] = 1.0
        coef, *_ = np.linalg.lstsq(cols / norms, va / weight, rcond=None)
        c_g, c_d = coef / norms
        frac = abs(c_g) * _safe_exp(lg[-1] - lw[-1])
        growing[mode.k] = float(frac)
        decaying.append((pair, float(c_d)))
    verdict = _verdict(kappa0, kappa_tol * max(1.0, abs(c0)))
    if any(f > growth_tol for f in growing.values()):
        verdict = VERDICT_GAP
    return GrowthClass(float(kappa0), float(c0), decay, residual, verdict, tuple(decaying), growing)


def decaying_flux(mode: Mode, n: int, z: float) -> float:
    """``D_k'(z)`` as ``D_k(z) * (log D_k)'(z)``."""
    pair = fundamental_pair(mode, n)
    d = pair.eval_D(z)
    return (d * LogValue.from_float(log_derivative(pair.eval_D, z))).to_float()


def _per_mode(values: Sequence[float] | Mapping[int, float], count: int, what: str) -> dict[int, float]:
    if isinstance(values, Mapping):
        out = {int(k): float(v) for k, v in values.items()}
        if any(k < 1 or k >= count for k in out):
            raise DomainError(f"{what}: mode index out of range")
        return out
    vals = list(values)
    if len(vals) != count - 1:
        raise DomainError(f"{what}: expected {count - 1} values (one per nonzero mode), got {len(vals)}")
    return {k: float(v) for k, v in enumerate(vals, start=1)}


def _check_growth(growth_exponent: float | None, params: CalabiParams) -> None:
    if growth_exponent is not None and growth_exponent >= params.delta_b:
        raise DomainError(
            f"growth exponent {growth_exponent} is not below delta_b = {params.delta_b}; no classification"
        )


def classify_neumann(
    spectrum: SpectrumTable,
    kappa0: float,
    mode_fluxes: Sequence[float] | Mapping[int, float],
    params: CalabiParams | None = None,
    *,
    ell0: float = 0.0,
    growth_exponent: float | None = None,
    assert_constant: bool = False,
) -> GrowthClass:
    """Harmonic functions with prescribed ``z``-flux at ``z0`` and sub-gap growth.

    Each nonzero mode is ``c_k D_k`` with ``c_k = flux_k / D_k'(z0)``.  The
    additive constant is not fixed by Neumann data; ``ell0`` supplies it.
    """
    params = spectrum.params if params is None else params
    _check_growth(growth_exponent, params)
    fluxes = _per_mode(mode_fluxes, len(spectrum), "mode_fluxes")
    if assert_constant and (kappa0 != 0.0 or any(fluxes.values())):
        raise InconsistentDataError("nonzero flux supplied for a problem asserted to have constant solutions")
    n, z0 = params.n, params.z0
    decaying = []
    decay = math.inf
    for k in range(1, len(spectrum)):
        mode = spectrum.entries[k].mode
        slope = decaying_flux(mode, n, z0)
        if not slope < 0.0:
            raise NumericalError(f"D_k'(z0) = {slope} is not negative for mode {mode}")
        flux = fluxes.get(k, 0.0)
        if flux != 0.0:
            decaying.append((fundamental_pair(mode, n), flux / slope))
            decay = min(decay, _analytic_decay(mode, n))
    return GrowthClass(float(kappa0), float(ell0), decay, 0.0, _verdict(kappa0, 0.0), tuple(decaying))


def classify_dirichlet(
    spectrum: SpectrumTable,
    boundary_values: Sequence[float],
    params: CalabiParams | None = None,
    *,
    flux: float | None = None,
    growth_exponent: float | None = None,
) -> GrowthClass:
    """Harmonic functions with prescribed values at ``z0`` and sub-gap growth.

    ``boundary_values[k]`` is the value of mode ``k`` at ``z0``; mode 0 must
    vanish.  The slope ``kappa0`` is fixed by the normalization ``flux``.
    Nonzero values on the other modes give ``c_k = value / D_k(z0)``; they are
    incompatible with the zero-data problem and are flagged ``gap_violation``.
    """
    params = spectrum.params if params is None else params
    _check_growth(growth_exponent, params)
    values = list(boundary_values)
    if len(values) != len(spectrum):
        raise DomainError(f"expected {len(spectrum)} boundary values, got {len(values)}")
    if values[0] != 0.0:
        raise DomainError("the mode-0 boundary value must be 0")
    if flux is None:
        raise NormalizationMissingError("the slope kappa0 is free; supply a flux normalization")
    n, z0 = params.n, params.z0
    decaying = []
    decay = math.inf
    for k in range(1, len(spectrum)):
        if values[k] == 0.0:
            continue
        mode = spectrum.entries[k].mode
        pair = fundamental_pair(mode, n)
        decaying.append((pair, values[k] / pair.eval_D(z0).to_float()))
        decay = min(decay, _analytic_decay(mode, n))
    verdict = VERDICT_GAP if decaying else _verdict(flux, 0.0)
    return GrowthClass(float(flux), -float(flux) * z0, decay, 0.0, verdict, tuple(decaying))


# --------------------------------------------------------------- export ----


def export_field(
    stream: TextIO,
    z_grid: Sequence[float],
    values: Sequence[float],
    per_mode: Mapping[int, Sequence[float]] | None = None,
) -> None:
    """Columnar text ``z,value[,u_k...]`` in ``%.16e``."""
    cols = [] if per_mode is None else sorted(per_mode)
    stream.write(",".join(["z", "value"] + [f"u_{k}" for k in cols]) + "\n")
    for i, z in enumerate(z_grid):
        row = [z, values[i]] + [per_mode[k][i] for k in cols]
        stream.write(",".join(f"{float(v):.16e}" for v in row) + "\n")

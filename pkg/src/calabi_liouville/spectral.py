"""Cross-section eigendata, spectral gaps and a synthetic spectrum generator.

The toy spectrum is an arithmetic ladder ``lambda = (n-1) j / 2 + lambda_D m``.
It is *not* the spectrum of any real divisor: it exists to exercise the
summation, truncation and classification code with admissible data.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import TextIO

import numpy as np

from .calabi_ode import Mode
from .errors import DomainError


@dataclass(frozen=True)
class CalabiParams:
    n: int
    z0: float
    lambda_D: float
    delta: float

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"n must be an integer >= 2, got {self.n}")
        for name in ("z0", "lambda_D", "delta"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise DomainError(f"{name} must be positive and finite, got {value}")

    @property
    def delta_b(self) -> float:
        return 2.0 * math.sqrt(self.lambda_D / self.n)

    @property
    def eps_X(self) -> float:
        return min(self.delta, self.delta_b)

    def header(self) -> str:
        return f"# CalabiParams n={self.n} z0={self.z0!r} lambda_D={self.lambda_D!r} delta={self.delta!r}"

    @classmethod
    def from_header(cls, line: str) -> CalabiParams:
        fields = dict(tok.split("=", 1) for tok in line.split()[2:])
        return cls(int(fields["n"]), float(fields["z0"]), float(fields["lambda_D"]), float(fields["delta"]))


def assemble_Lambda(mode: Mode, params: CalabiParams) -> float:
    """Cross-section eigenvalue ``lambda/z0 + n z0^(n-1) j^2``."""
    return mode.lam / params.z0 + params.n * params.z0 ** (params.n - 1) * mode.j**2


def gap_constants(params: CalabiParams) -> tuple[float, float]:
    return params.delta_b, params.eps_X


@dataclass(frozen=True)
class SpectrumEntry:
    mode: Mode
    Lambda: float


@dataclass(frozen=True)
class SpectrumTable:
    """Modes sorted by ``Lambda``; ``entries[0]`` is the constant mode."""

    params: CalabiParams
    entries: tuple[SpectrumEntry, ...]

    def __post_init__(self) -> None:
        if not self.entries or self.entries[0].mode.k != 0 or self.entries[0].Lambda != 0.0:
            raise DomainError("spectrum must start with the k = 0 mode at Lambda = 0")
        last = -1.0
        for e in self.entries:
            e.mode.check(self.params.n, self.params.lambda_D)
            if e.Lambda < last:
                raise DomainError("spectrum entries must be sorted by Lambda")
            expected = assemble_Lambda(e.mode, self.params)
            if abs(e.Lambda - expected) > 1e-12 * max(1.0, expected):
                raise DomainError(f"Lambda mismatch for {e.mode}: {e.Lambda} != {expected}")
            last = e.Lambda

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def modes(self) -> tuple[Mode, ...]:
        return tuple(e.mode for e in self.entries)

    def write(self, stream: TextIO) -> None:
        stream.write(self.params.header() + "\n")
        stream.write("k,j,lambda,Lambda\n")
        for e in self.entries:
            stream.write(f"{e.mode.k},{e.mode.j},{e.mode.lam:.17e},{e.Lambda:.17e}\n")

    def to_text(self) -> str:
        buf = io.StringIO()
        self.write(buf)
        return buf.getvalue()

    @classmethod
    def from_text(cls, text: str) -> SpectrumTable:
        # other comment lines (e.g. CLI provenance) may precede the parameter header
        lines = [
            ln for ln in text.splitlines()
            if ln.strip() and (not ln.startswith("#") or ln.startswith("# CalabiParams"))
        ]
        if not lines or not lines[0].startswith("# CalabiParams"):
            raise ValueError("missing '# CalabiParams' header line")
        params = CalabiParams.from_header(lines[0])
        if lines[1].strip() != "k,j,lambda,Lambda":
            raise ValueError(f"unexpected column header {lines[1]!r}")
        entries = []
        for ln in lines[2:]:
            k, j, lam, big = ln.split(",")
            entries.append(SpectrumEntry(Mode(int(k), int(j), float(lam)), float(big)))
        return cls(params, tuple(entries))


def _sort_key(item: tuple[int, float, float]) -> tuple[float, int, float]:
    j, lam, big = item
    return (big, j, lam)


def toy_spectrum(
    params: CalabiParams, j_max: int, per_weight: int, seed: int = 0, jitter: float = 0.0
) -> SpectrumTable:
    """Synthetic admissible spectrum.

    Weight ``j = 0`` contributes the constant mode and ``per_weight - 1``
    rungs ``lambda_D m``; each weight ``j >= 1`` contributes ``per_weight`` rungs
    ``(n-1) j / 2 + lambda_D m`` with ``m >= 1``.  ``jitter`` in ``[0, 1)`` moves
    every rung except the lowest zero-weight one up by a seeded uniform
    fraction of ``lambda_D``; with the default ``jitter = 0`` the seed has no effect.
    """
    if j_max < 0 or per_weight < 1:
        raise DomainError("need j_max >= 0 and per_weight >= 1")
    if not 0.0 <= jitter < 1.0:
        raise DomainError("jitter must lie in [0, 1)")
    rng = np.random.default_rng(seed)
    n = params.n
    raw: list[tuple[int, float, float]] = []
    for j in range(j_max + 1):
        base = (n - 1) * j / 2.0
        rungs = range(1, per_weight) if j == 0 else range(1, per_weight + 1)
        for m in rungs:
            shift = jitter * float(rng.random())
            if j == 0 and m == 1:
                shift = 0.0
            lam = base + params.lambda_D * (m + shift)
            raw.append((j, lam, assemble_Lambda(Mode(1, j, lam), params)))
    raw.sort(key=_sort_key)
    entries = [SpectrumEntry(Mode(0, 0, 0.0), 0.0)]
    for idx, (j, lam, big) in enumerate(raw, start=1):
        entries.append(SpectrumEntry(Mode(idx, j, lam), big))
    return SpectrumTable(params, tuple(entries))


def default_K0(n: int) -> int:
    return 2 * n + 1


def fourier_decay_bound(Lambda: float, K0: int, c_norm: float) -> float:
    """Coefficient bound ``c_norm / Lambda^K0`` (unit relative constant)."""
    if Lambda <= 0:
        raise DomainError("Lambda must be positive")
    if K0 < 1 or c_norm < 0:
        raise DomainError("need K0 >= 1 and c_norm >= 0")
    return c_norm / Lambda**K0


def eigenfunction_sup_exponent(n: int, deriv_order: int = 0) -> float:
    """Exponent ``e`` in ``|nabla^k phi| <= C Lambda^e`` for unit-L2 eigenfunctions."""
    if n < 2 or deriv_order < 0:
        raise DomainError("need n >= 2 and deriv_order >= 0")
    if deriv_order == 0:
        return n / 2.0
    m = 2 * n - 1
    return 0.5 * (m // 2) + (deriv_order + 1) / 2.0


def sup_norm_weight(Lambda: float, n: int) -> float:
    """``max(1, Lambda)^(n/2)``: the constant mode and low modes get weight >= 1."""
    return max(1.0, Lambda) ** eigenfunction_sup_exponent(n, 0)

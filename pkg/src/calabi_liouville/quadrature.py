"""Globally adaptive Gauss-Kronrod (7, 15) quadrature.

This engine is the brute-force reference for the integral representations
evaluated elsewhere in the package, so it deliberately depends on nothing but
numpy and the Kronrod node table below.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConvergenceError

PANEL_BUDGET = 10_000
TRUNCATION_LEVEL = 1e-18
TRUNCATION_CAP = 1e6

# Kronrod 15-point abscissae on [-1, 1] (non-negative half) and weights;
# the odd-indexed entries are the 7-point Gauss nodes.
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate((-_XK[:-1], _XK[::-1]))
_W15 = np.concatenate((_WK[:-1], _WK[::-1]))
_W7 = np.zeros(15)
_W7[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate((_WG[:-1], _WG[::-1]))


@dataclass(frozen=True)
class QuadResult:
    value: float
    abs_error_estimate: float
    panels_used: int


def _panel(f: Callable[[float], float], a: float, b: float) -> tuple[float, float]:
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    fx = np.array([f(mid + half * x) for x in _NODES], dtype=float)
    if not np.all(np.isfinite(fx)):
        raise ConvergenceError(f"integrand not finite on [{a}, {b}]")
    k15 = half * float(np.dot(_W15, fx))
    g7 = half * float(np.dot(_W7, fx))
    err = abs(k15 - g7)
    # QUADPACK-style rescaling: the raw difference overestimates badly once
    # the Kronrod sum has converged
    resasc = half * float(np.dot(_W15, np.abs(fx - k15 / (2.0 * half))))
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    floor = 50.0 * np.finfo(float).eps * half * float(np.dot(_W15, np.abs(fx)))
    return k15, max(err, floor)


def integrate_finite(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-12,
    *,
    rel_tol: float = 0.0,
    panel_budget: int = PANEL_BUDGET,
) -> QuadResult:
    """Integrate ``f`` over ``[a, b]``.

    The panel with the largest error estimate is bisected until the summed
    estimate drops below ``max(tol, rel_tol * |value|)``.
    """
    if not a < b:
        raise ValueError(f"integrate_finite needs a < b, got [{a}, {b}]")
    if tol < 0 or rel_tol < 0 or (tol == 0 and rel_tol == 0):
        raise ValueError("need tol > 0 or rel_tol > 0")
    val, err = _panel(f, a, b)
    heap = [(-err, a, b, val)]
    total_val, total_err, panels = val, err, 1
    while total_err > max(tol, rel_tol * abs(total_val)):
        if panels >= panel_budget:
            raise ConvergenceError(
                f"panel budget {panel_budget} exhausted on [{a}, {b}]: error estimate {total_err:.3e}"
            )
        neg_err, lo, hi, v = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            # interval cannot be split further in floating point
            heapq.heappush(heap, (neg_err, lo, hi, v))
            break
        v1, e1 = _panel(f, lo, mid)
        v2, e2 = _panel(f, mid, hi)
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
        panels += 1
        total_val += v1 + v2 - v
        total_err += e1 + e2 + neg_err
        if panels % 64 == 0:
            # resum from scratch to stop drift in the running totals
            total_val = math.fsum(item[3] for item in heap)
            total_err = math.fsum(-item[0] for item in heap)
    total_val = math.fsum(item[3] for item in heap)
    total_err = math.fsum(-item[0] for item in heap)
    return QuadResult(total_val, total_err, panels)


def integrate_semi_infinite(
    f: Callable[[float], float],
    a: float,
    decay_hint: float,
    tol: float = 1e-12,
    *,
    rel_tol: float = 0.0,
    panel_budget: int = PANEL_BUDGET,
) -> QuadResult:
    """Integrate ``f`` over ``[a, inf)`` for ``f`` dominated by ``exp(-decay_hint t)``.

    Truncates at the first ``T`` with ``exp(-decay_hint (T - a)) < 1e-18 |f(a + 1)|``
    and confirms ``|f(T)|`` is below that level too, doubling ``T - a`` if not.
    """
    if decay_hint <= 0:
        raise ValueError("decay_hint must be positive")
    ref = abs(f(a + 1.0))
    if ref == 0.0 or not math.isfinite(ref):
        ref = max(abs(f(a + 0.5)), abs(f(a + 2.0)), 1e-300)
    level = TRUNCATION_LEVEL * ref
    width = max(1.0, -math.log(level) / decay_hint) if level < 1.0 else 1.0
    while abs(f(a + width)) > level:
        width *= 2.0
        if width > TRUNCATION_CAP:
            raise ConvergenceError(f"no truncation point below a + {TRUNCATION_CAP:g}")
    return integrate_finite(f, a, a + width, tol, rel_tol=rel_tol, panel_budget=panel_budget)

"""Signed log-domain numbers.

A :class:`LogValue` stores ``sign * exp(log_abs)`` so that quantities such as
``exp(j z**n / 2)`` or ``Gamma(Q + 1)`` can be multiplied and compared long
after a double would have overflowed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

NEG_INF = float("-inf")


@dataclass(frozen=True)
class LogValue:
    """``sign * exp(log_abs)`` with ``sign`` in ``{-1, 0, 1}``."""

    sign: int
    log_abs: float

    def __post_init__(self) -> None:
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or 1, got {self.sign!r}")
        if self.sign != 0 and math.isnan(self.log_abs):
            raise ValueError("log_abs is NaN")

    @classmethod
    def from_float(cls, x: float) -> LogValue:
        if x == 0.0:
            return ZERO
        if math.isnan(x):
            raise ValueError("cannot encode NaN")
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @classmethod
    def from_log(cls, log_abs: float, sign: int = 1) -> LogValue:
        if sign == 0 or log_abs == NEG_INF:
            return ZERO
        return cls(sign, log_abs)

    def to_float(self) -> float:
        """Materialize; raises ``OverflowError`` rather than returning inf."""
        if self.sign == 0:
            return 0.0
        if self.log_abs > 709.782712893384:
            raise OverflowError(f"exp({self.log_abs}) overflows a double")
        return self.sign * math.exp(self.log_abs)

    def __float__(self) -> float:
        return self.to_float()

    def __mul__(self, other: LogValue | float) -> LogValue:
        other = _coerce(other)
        if self.sign == 0 or other.sign == 0:
            return ZERO
        return LogValue(self.sign * other.sign, self.log_abs + other.log_abs)

    __rmul__ = __mul__

    def __truediv__(self, other: LogValue | float) -> LogValue:
        other = _coerce(other)
        if other.sign == 0:
            raise ZeroDivisionError("division by a zero LogValue")
        if self.sign == 0:
            return ZERO
        return LogValue(self.sign * other.sign, self.log_abs - other.log_abs)

    def __rtruediv__(self, other: float) -> LogValue:
        return _coerce(other) / self

    def __neg__(self) -> LogValue:
        return LogValue(-self.sign, self.log_abs)

    def __add__(self, other: LogValue | float) -> LogValue:
        return signed_logsumexp([self, _coerce(other)])

    __radd__ = __add__

    def __sub__(self, other: LogValue | float) -> LogValue:
        return signed_logsumexp([self, -_coerce(other)])

    def __pow__(self, p: float) -> LogValue:
        if self.sign < 0:
            raise ValueError("real power of a negative LogValue")
        if self.sign == 0:
            if p > 0:
                return ZERO
            raise ZeroDivisionError("non-positive power of zero")
        return LogValue(1, p * self.log_abs)

    def __abs__(self) -> LogValue:
        return LogValue(abs(self.sign), self.log_abs)


ZERO = LogValue(0, NEG_INF)
ONE = LogValue(1, 0.0)


def _coerce(x: LogValue | float) -> LogValue:
    return x if isinstance(x, LogValue) else LogValue.from_float(float(x))


def logsumexp(logs: Iterable[float] | np.ndarray) -> float:
    """``log(sum(exp(logs)))`` without overflow; empty input gives -inf."""
    arr = np.asarray(logs, dtype=float)
    if arr.size == 0:
        return NEG_INF
    top = float(np.max(arr))
    if top == NEG_INF or math.isinf(top):
        return top
    return top + math.log(math.fsum(np.exp(arr - top)))


def signed_logsumexp(values: Iterable[LogValue]) -> LogValue:
    """Sum of signed log-domain values.

    Positive and negative parts are accumulated separately and merged once, so
    the only cancellation is the final subtraction.
    """
    vals = list(values)
    pos = [v.log_abs for v in vals if v.sign > 0]
    neg = [v.log_abs for v in vals if v.sign < 0]
    lp, ln = logsumexp(pos), logsumexp(neg)
    if lp == ln:
        return ZERO
    if lp > ln:
        return LogValue.from_log(lp + math.log1p(-math.exp(ln - lp)), 1)
    return LogValue.from_log(ln + math.log1p(-math.exp(lp - ln)), -1)

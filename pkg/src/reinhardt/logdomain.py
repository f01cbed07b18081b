"""Log-domain arithmetic for nonnegative reals.

Monomial moments grow like exp(4k) in the diagonal index, so every
quantity that could overflow is carried as its natural logarithm, with
-inf encoding an exact zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

LOG_ZERO = float("-inf")


def log_add_exp(la: float, lb: float) -> float:
    """log(exp(la) + exp(lb)), max-shifted so it never overflows."""
    if la == LOG_ZERO:
        return lb
    if lb == LOG_ZERO:
        return la
    if la < lb:
        la, lb = lb, la
    return la + math.log1p(math.exp(lb - la))


def log_sub_exp(la: float, lb: float) -> float:
    """log(exp(la) - exp(lb)) for la >= lb."""
    if lb == LOG_ZERO:
        return la
    if lb > la:
        raise ValueError(f"log_sub_exp would be negative: {la} < {lb}")
    if lb == la:
        return LOG_ZERO
    return la + math.log(-math.expm1(lb - la))


def log_sum_exp(logs) -> float:
    """log(sum(exp(l) for l in logs)); empty input gives LOG_ZERO."""
    logs = list(logs)
    if not logs:
        return LOG_ZERO
    m = max(logs)
    if m == LOG_ZERO or math.isinf(m):
        return m
    return m + math.log(math.fsum(math.exp(l - m) for l in logs))


@dataclass(frozen=True, order=True)
class LogValue:
    """A nonnegative real stored as its natural logarithm.

    ``log == -inf`` represents the value 0.  Multiplication and division
    are exact log additions; addition uses max-shifted summation.
    """

    log: float

    @staticmethod
    def of(value: float) -> "LogValue":
        if value < 0:
            raise ValueError(f"LogValue requires a nonnegative real, got {value}")
        return LogValue(math.log(value) if value > 0 else LOG_ZERO)

    @property
    def value(self) -> float:
        """The plain real; overflows to inf when log is large."""
        if self.log == LOG_ZERO:
            return 0.0
        try:
            return math.exp(self.log)
        except OverflowError:
            return math.inf

    def is_zero(self) -> bool:
        return self.log == LOG_ZERO

    def __mul__(self, other: "LogValue") -> "LogValue":
        if self.is_zero() or other.is_zero():
            return LogValue(LOG_ZERO)
        return LogValue(self.log + other.log)

    def __truediv__(self, other: "LogValue") -> "LogValue":
        if other.is_zero():
            raise ZeroDivisionError("division by LogValue zero")
        if self.is_zero():
            return LogValue(LOG_ZERO)
        return LogValue(self.log - other.log)

    def __add__(self, other: "LogValue") -> "LogValue":
        return LogValue(log_add_exp(self.log, other.log))

    def __repr__(self) -> str:
        return f"LogValue(log={self.log!r})"


LogValue.ZERO = LogValue(LOG_ZERO)
LogValue.ONE = LogValue(0.0)

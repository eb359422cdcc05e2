"""Log-domain scalars and the few special functions the closed forms need.

Normalization factors grow like Gamma(N + 1/lambda1), which overflows IEEE
doubles already near N ~ 170 for a single Schmidt mode.  Every chi-scale
quantity in this package is therefore carried as a natural-log magnitude
(:class:`LogValue`); plain floats are reserved for coefficients,
probabilities and ratios that stay far below 1e15.

Provided here:

* ``LogValue`` / ``SignedLogValue``     log-domain carriers
* ``log_sum_exp``                       shift-stable summation
* ``log_gamma``                         ln Gamma(x) for x > 0
* ``log_upper_incomplete_gamma_int``    ln Gamma(n, x) for integer n >= 1
* ``log_2f1_terminating``               2F1(1, -N; c; z) as a finite sum
* ``log_factorials``                    cached table of ln k!
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import PoleError

__all__ = [
    "LogValue",
    "SignedLogValue",
    "log_sum_exp",
    "log_gamma",
    "log_upper_incomplete_gamma_int",
    "log_2f1_terminating",
    "log_factorials",
]

_NEG_INF = float("-inf")


@dataclass(frozen=True)
class LogValue:
    """A non-negative real stored as ln(magnitude); -inf encodes exact zero."""

    log: float

    @classmethod
    def from_value(cls, value: float) -> "LogValue":
        if value < 0:
            raise ValueError(f"LogValue represents non-negative reals, got {value}")
        return cls(math.log(value)) if value > 0 else cls(_NEG_INF)

    @classmethod
    def from_log(cls, log: float) -> "LogValue":
        return cls(float(log))

    @classmethod
    def zero(cls) -> "LogValue":
        return cls(_NEG_INF)

    @classmethod
    def one(cls) -> "LogValue":
        return cls(0.0)

    @property
    def is_zero(self) -> bool:
        return self.log == _NEG_INF

    @property
    def value(self) -> float:
        """exp(log); saturates to float(inf) instead of raising."""
        try:
            return math.exp(self.log)
        except OverflowError:
            return math.inf

    def __float__(self) -> float:
        return self.value

    def __mul__(self, other: "LogValue") -> "LogValue":
        return LogValue(self.log + other.log)

    def __truediv__(self, other: "LogValue") -> "LogValue":
        if other.is_zero:
            raise ZeroDivisionError("division by LogValue zero")
        if self.is_zero:
            return LogValue(_NEG_INF)
        return LogValue(self.log - other.log)

    def __add__(self, other: "LogValue") -> "LogValue":
        return LogValue(float(np.logaddexp(self.log, other.log)))

    def __lt__(self, other: "LogValue") -> bool:
        return self.log < other.log

    def __le__(self, other: "LogValue") -> bool:
        return self.log <= other.log

    def __gt__(self, other: "LogValue") -> bool:
        return self.log > other.log

    def __ge__(self, other: "LogValue") -> bool:
        return self.log >= other.log

    def ratio_to(self, other: "LogValue") -> float:
        """self / other as a plain float (caller guarantees it is moderate)."""
        return math.exp(self.log - other.log)


@dataclass(frozen=True)
class SignedLogValue:
    """Log magnitude plus sign.  Only the terminating 2F1 sum needs signs;
    all physically meaningful results are positive and are asserted so via
    :meth:`as_positive`."""

    sign: int  # -1, 0, +1
    log: float

    @property
    def value(self) -> float:
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * math.exp(self.log)
        except OverflowError:
            return self.sign * math.inf

    def as_positive(self) -> LogValue:
        if self.sign < 0:
            raise ValueError("expected a positive result, got a negative sum")
        return LogValue(self.log if self.sign > 0 else _NEG_INF)


def log_sum_exp(terms: Iterable[LogValue]) -> LogValue:
    """ln sum(exp(t_i)), max-shifted.  Empty input yields the zero element."""
    logs = np.array([t.log for t in terms], dtype=float)
    if logs.size == 0:
        return LogValue.zero()
    m = float(np.max(logs))
    if not math.isfinite(m):
        return LogValue(m)
    return LogValue(m + math.log(float(np.sum(np.exp(logs - m)))))


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if x <= 0:
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


# ---------------------------------------------------------------------------
# cached ln k! table (integer arguments only; grown on demand)
# ---------------------------------------------------------------------------

_logfact_lock = threading.Lock()
_logfact_table = np.zeros(2)


def log_factorials(n: int) -> np.ndarray:
    """Array t with t[k] = ln k! for k = 0..n (possibly longer)."""
    global _logfact_table
    table = _logfact_table
    if table.size > n:
        return table
    with _logfact_lock:
        table = _logfact_table
        if table.size > n:
            return table
        size = max(n + 1, 2 * table.size)
        new = np.empty(size)
        old = table.size
        new[:old] = table
        for k in range(old, size):
            new[k] = math.lgamma(k + 1)
        _logfact_table = new
        return new


def log_upper_incomplete_gamma_int(n: int, x: float) -> LogValue:
    """ln Gamma(n, x) for integer order n >= 1 and x >= 0.

    Uses the terminating expansion

        Gamma(n, x) = (n-1)! e^{-x} sum_{k=0}^{n-1} x^k / k!

    evaluated with a max-shifted log sum.  Terms with k well above x decay
    super-geometrically, so the sum is truncated once it provably cannot
    move the double-precision result.
    """
    if n < 1 or int(n) != n:
        raise ValueError(f"order must be an integer >= 1, got {n}")
    if x < 0:
        raise ValueError(f"x must be >= 0, got {x}")
    n = int(n)
    if x == 0.0:
        return LogValue(math.lgamma(n))
    # past k ~ x the terms fall off like a Gaussian of width sqrt(x)
    k_max = n - 1
    cutoff = int(x + 80.0 * math.sqrt(x + 1.0) + 500.0)
    if cutoff < k_max:
        k_max = cutoff
    k = np.arange(k_max + 1)
    terms = k * math.log(x) - log_factorials(k_max)[: k_max + 1]
    m = float(np.max(terms))
    s = m + math.log(float(np.sum(np.exp(terms - m))))
    return LogValue(math.lgamma(n) - x + s)


def log_2f1_terminating(n: int, c: float, z: float) -> SignedLogValue:
    """2F1(1, -N; c; z) as the finite sum sum_{k=0}^{N} [(-N)_k / (c)_k] z^k.

    The term recurrence multiplies by (k - N) * z / (c + k), so (c)_k must
    not vanish for k < N; a pole before termination raises PoleError.
    Signs are tracked per term and the positive/negative parts are combined
    at the end.
    """
    if n < 0 or int(n) != n:
        raise ValueError(f"series order must be an integer >= 0, got {n}")
    n = int(n)
    for k in range(n):
        if c + k == 0.0:
            raise PoleError(f"(c)_k vanishes at k = {k + 1} with c = {c}")
    pos = [0.0]  # k = 0 term is 1
    neg: list[float] = []
    log_t = 0.0
    sign = 1
    for k in range(n):
        factor = (k - n) * z / (c + k)
        if factor == 0.0:
            break  # all remaining terms vanish
        if factor < 0:
            sign = -sign
        log_t += math.log(abs(factor))
        (pos if sign > 0 else neg).append(log_t)
    lp = log_sum_exp(LogValue(v) for v in pos)
    ln = log_sum_exp(LogValue(v) for v in neg)
    if ln.is_zero:
        return SignedLogValue(1, lp.log)
    if lp.log == ln.log:
        return SignedLogValue(0, _NEG_INF)
    if lp.log > ln.log:
        return SignedLogValue(1, lp.log + math.log1p(-math.exp(ln.log - lp.log)))
    return SignedLogValue(-1, ln.log + math.log1p(-math.exp(lp.log - ln.log)))

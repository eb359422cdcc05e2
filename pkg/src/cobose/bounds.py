"""Closed-form and construction-based bounds on chi_N and its ratio.

The tight two-parameter bounds come from evaluating the grouped chi engine
on the extremal spectra of :mod:`cobose.extremal`.  The single-parameter
families are closed forms:

* purity only:   P N + 1  <=  ratio  <=  sqrt(P) G(N+2, x)/G(N+1, x)
                 <= sqrt(P) N + 1,  with x = (1 - sqrt(P))/sqrt(P),
* lambda1 only:  lambda1 (N+1) <= lambda1 G(N+2, y)/G(N+1, y)
                 <= ratio <= lambda1 N + 1,  with y = (1 - lambda1)/lambda1,

where G is the upper incomplete gamma function.  The boundary-distribution
normalization factors (uniform, peaked, P_min-limit, P_max) have their own
closed forms in terms of incomplete gamma functions and terminating 2F1
sums; those must agree with the grouped engine on the corresponding
constructed spectra, which is the main internal consistency check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chi import ChiSeries, chi_grouped
from .errors import ResourceCapError
from .extremal import (
    build_lambda_max,
    build_lambda_min,
    build_peaked,
    build_pmax,
    build_pmin_limit,
    build_uniform,
)
from .schmidt import _ceil_tol, _floor_tol
from .special import (
    LogValue,
    log_2f1_terminating,
    log_gamma,
    log_upper_incomplete_gamma_int,
)

__all__ = [
    "BoundBundle",
    "HierarchyReport",
    "tight_bounds",
    "extremal_chi_series",
    "purity_bounds",
    "lambda1_bounds",
    "chi_closed_forms",
    "chi_max_gamma_sum",
    "chi_min_geometric_sum",
    "check_hierarchy",
]

TIGHT_SERIES_CAP = 10_000
CLOSED_FORM_CAP = 10_000_000

CLOSED_FORM_KINDS = (
    "uniform",
    "peaked",
    "pmin_limit",
    "pmax",
    "purity_lower_env",
    "purity_upper_env",
    "lambda1_lower_env",
    "lambda1_upper_env",
)


@dataclass(frozen=True)
class BoundBundle:
    """All bounds for one (lambda1, P, N) point.

    ``tight_lower``/``tight_upper`` bound chi_N itself (log domain); the
    ratio fields bound chi_{N+1}/chi_N.  ``purity_triple`` is
    (P N + 1, gamma-ratio upper, sqrt(P) N + 1); ``lambda1_triple`` is
    (lambda1 (N+1), gamma-ratio lower, lambda1 N + 1).
    """

    n: int
    lambda1: float
    purity: float
    tight_lower: LogValue
    tight_upper: LogValue
    ratio_tight_lower: float
    ratio_tight_upper: float
    purity_triple: tuple[float, float, float]
    lambda1_triple: tuple[float, float, float]


def extremal_chi_series(
    lambda1: float, purity: float, n_max: int, max_n: int = TIGHT_SERIES_CAP
) -> tuple[ChiSeries, ChiSeries]:
    """(minimizing, maximizing) chi series for the given (lambda1, P)."""
    if n_max > max_n:
        raise ResourceCapError(
            f"tight-bound series capped at n = {max_n} (raise max_n to override)"
        )
    lo = build_lambda_min(lambda1, purity)
    hi = build_lambda_max(lambda1, purity)
    return chi_grouped(lo.result, n_max), chi_grouped(hi.result, n_max)


def tight_bounds(
    lambda1: float, purity: float, n: int, max_n: int = TIGHT_SERIES_CAP
) -> BoundBundle:
    """Evaluate every bound family at a single N."""
    if n < 1:
        raise ValueError("n must be >= 1")
    lo_series, hi_series = extremal_chi_series(lambda1, purity, n + 1, max_n=max_n)
    return BoundBundle(
        n=n,
        lambda1=lambda1,
        purity=purity,
        tight_lower=lo_series.chi(n),
        tight_upper=hi_series.chi(n),
        ratio_tight_lower=lo_series.ratio(n),
        ratio_tight_upper=hi_series.ratio(n),
        purity_triple=purity_bounds(purity, n),
        lambda1_triple=lambda1_bounds(lambda1, n),
    )


def _gamma_ratio(n: int, x: float) -> float:
    """Gamma(n+2, x) / Gamma(n+1, x) as a plain float (it is <= n + 1 + x)."""
    num = log_upper_incomplete_gamma_int(n + 2, x)
    den = log_upper_incomplete_gamma_int(n + 1, x)
    return math.exp(num.log - den.log)


def purity_bounds(purity: float, n: int) -> tuple[float, float, float]:
    """(lower, gamma-ratio upper, cap) for the ratio, from the purity alone."""
    if not 0 < purity <= 1:
        raise ValueError(f"purity must lie in (0, 1], got {purity}")
    if n < 1:
        raise ValueError("n must be >= 1")
    root = math.sqrt(purity)
    x = (1.0 - root) / root
    return (purity * n + 1.0, root * _gamma_ratio(n, x), root * n + 1.0)


def lambda1_bounds(lambda1: float, n: int) -> tuple[float, float, float]:
    """(floor, gamma-ratio lower, upper) for the ratio, from lambda1 alone."""
    if not 0 < lambda1 <= 1:
        raise ValueError(f"lambda1 must lie in (0, 1], got {lambda1}")
    if n < 1:
        raise ValueError("n must be >= 1")
    y = (1.0 - lambda1) / lambda1
    return (lambda1 * (n + 1.0), lambda1 * _gamma_ratio(n, y), lambda1 * n + 1.0)


def chi_closed_forms(kind: str, parameter: float, n: int, max_n: int = CLOSED_FORM_CAP) -> LogValue:
    """chi_N of a named boundary distribution, by its closed form.

    ``parameter`` is the purity for the uniform/peaked kinds and their
    envelopes, and lambda1 for the pmin_limit/pmax kinds and theirs.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > max_n:
        raise ResourceCapError(f"closed forms capped at n = {max_n}")
    if not 0 < parameter <= 1:
        raise ValueError(f"parameter must lie in (0, 1], got {parameter}")
    p = parameter
    if kind == "uniform":
        s = _ceil_tol(1.0 / p)
        if s < 2:
            return LogValue(log_gamma(n + 1.0))
        disc = max(0.0, (p * s - 1.0) / (s - 1.0))
        lam1 = (math.sqrt(disc) + 1.0) / s
        lam_s = 1.0 - lam1 * (s - 1)
        f21 = log_2f1_terminating(n, 2.0 - n - s, lam_s / lam1).as_positive()
        return LogValue(
            n * math.log(lam1) + log_gamma(n + s - 1.0) - log_gamma(s - 1.0) + f21.log
        )
    if kind == "peaked":
        x = 1.0 / math.sqrt(p) - 1.0
        g = log_upper_incomplete_gamma_int(n + 1, x)
        return LogValue(x + 0.5 * n * math.log(p) + g.log)
    if kind == "pmin_limit":
        y = 1.0 / p - 1.0
        g = log_upper_incomplete_gamma_int(n + 1, y)
        return LogValue(y + n * math.log(p) + g.log)
    if kind == "pmax":
        f = _floor_tol(1.0 / p)
        rem = max(0.0, 1.0 - p * f)
        f21 = log_2f1_terminating(n, 1.0 - n - f, rem / p).as_positive()
        return LogValue(n * math.log(p) + log_gamma(n + f) - log_gamma(f) + f21.log)
    if kind == "purity_lower_env":
        return LogValue(n * math.log(p) + log_gamma(n + 1.0 / p) - log_gamma(1.0 / p))
    if kind == "purity_upper_env":
        r = 1.0 / math.sqrt(p)
        return LogValue(0.5 * n * math.log(p) + log_gamma(n + r) - log_gamma(r))
    if kind == "lambda1_lower_env":
        return LogValue(n * math.log(p) + log_gamma(n + 1.0))
    if kind == "lambda1_upper_env":
        return LogValue(n * math.log(p) + log_gamma(n + 1.0 / p) - log_gamma(1.0 / p))
    raise ValueError(f"unknown closed-form kind {kind!r}; expected one of {CLOSED_FORM_KINDS}")


# ---------------------------------------------------------------------------
# double-sum forms for the extremal spectra; cross-checks of the grouped
# engine, not production paths
# ---------------------------------------------------------------------------


def chi_max_gamma_sum(lambda1: float, purity: float, n: int) -> LogValue:
    """chi_N of the maximizing spectrum as a single sum over incomplete
    gamma functions."""
    c = build_lambda_max(lambda1, purity)
    big_l = int(c.diagnostics.get("L", 1))
    lam_l = c.diagnostics.get("lambda_L", c.result.lambda1)
    tail = c.diagnostics.get("tail_mass", c.result.tail_mass)
    x = tail / lam_l
    lgn = log_gamma(n + 1.0)
    if big_l == 1:
        g = log_upper_incomplete_gamma_int(n + 1, x)
        return LogValue(x + n * math.log(lam_l) + g.log)
    terms = []
    for m in range(n + 1):
        g = log_upper_incomplete_gamma_int(n - m + 1, x)
        terms.append(
            m * math.log(lambda1)
            + (n - m) * math.log(lam_l)
            - log_gamma(n - m + 1.0)
            + log_gamma(m + big_l - 1.0)
            - log_gamma(float(m + 1))
            - log_gamma(float(big_l - 1))
            + g.log
        )
    arr = np.asarray(terms)
    peak = float(np.max(arr))
    total = peak + math.log(float(np.sum(np.exp(arr - peak))))
    return LogValue(lgn + x + total)


def chi_min_geometric_sum(lambda1: float, purity: float, n: int) -> LogValue:
    """chi_N of the minimizing spectrum via the telescoped inner sum
    (lambda1^{K+1} - lambda_S^{K+1}) / (lambda1 - lambda_S)."""
    c = build_lambda_min(lambda1, purity)
    if "degenerate" in c.diagnostics:
        # P = lambda1^2 limit: same closed form as the pmin-limit spectrum
        y = c.result.tail_mass / lambda1
        g = log_upper_incomplete_gamma_int(n + 1, y)
        return LogValue(y + n * math.log(lambda1) + g.log)
    s = int(c.diagnostics.get("S", 2))
    if s == 2:
        lam2 = 1.0 - lambda1
        return LogValue(log_gamma(n + 1.0) + _log_geometric_block(lambda1, lam2, n))
    lam2 = c.diagnostics["lambda_2"]
    lam_s = max(c.diagnostics["lambda_S"], 0.0)
    terms = []
    for m in range(n + 1):
        terms.append(
            m * math.log(lam2)
            + log_gamma(m + s - 2.0)
            - log_gamma(float(m + 1))
            - log_gamma(float(s - 2))
            + _log_geometric_block(lambda1, lam_s, n - m)
        )
    arr = np.asarray(terms)
    peak = float(np.max(arr))
    total = peak + math.log(float(np.sum(np.exp(arr - peak))))
    return LogValue(log_gamma(n + 1.0) + total)


def _log_geometric_block(a: float, b: float, k: int) -> float:
    """ln[(a^{k+1} - b^{k+1}) / (a - b)] for 0 <= b <= a, with the
    confluent limit (k+1) a^k when a and b coincide."""
    if b <= 0.0:
        return k * math.log(a)
    if (a - b) <= 1e-12 * a:
        return math.log(k + 1.0) + k * math.log(a)
    z = (k + 1) * (math.log(b) - math.log(a))
    return (k + 1) * math.log(a) + math.log1p(-math.exp(z)) - math.log(a - b)


# ---------------------------------------------------------------------------
# inequality hierarchy
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HierarchyReport:
    """Per-inequality verdicts for the four-link ratio chain

        1 <= chi_N/chi_{N-1} <= chi_{N+1}/chi_N
          <= (N+1)/N chi_N/chi_{N-1} <= N+1.

    Slacks are log-domain; negative slack beyond tolerance means violation.
    """

    ok: bool
    worst_slack: dict[str, float]
    passed: dict[str, np.ndarray]
    n_checked: int


def check_hierarchy(cs: ChiSeries, tol: float = 1e-10) -> HierarchyReport:
    if len(cs) < 3:
        raise ValueError("need at least chi_0..chi_2 to check the chain")
    lr = np.diff(cs.log_chi)  # lr[k] = ln(chi_{k+1}/chi_k)
    n = np.arange(1.0, len(lr))
    slack = {
        "a": lr[:-1],
        "b": lr[1:] - lr[:-1],
        "c": np.log((n + 1.0) / n) + lr[:-1] - lr[1:],
        "d": np.log(n) - lr[:-1],
    }
    passed = {k: v >= -tol for k, v in slack.items()}
    worst = {k: float(np.min(v)) for k, v in slack.items()}
    ok = all(bool(np.all(p)) for p in passed.values())
    return HierarchyReport(ok=ok, worst_slack=worst, passed=passed, n_checked=len(n))

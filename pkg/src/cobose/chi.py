"""Normalization factors chi_N by three independent routes.

chi_N is N! times the complete homogeneous symmetric polynomial of degree N
in the Schmidt coefficients.  Everything internal works with the scaled
sequence h_n = chi_n / n!, whose generating function factorizes over value
groups; that gives:

* ``chi_bruteforce_exact``  exact rational enumeration (the ground truth,
  deliberately small instances only),
* ``chi_recursive``         the power-sum recursion
                            h_n = (1/n) sum_{m=1}^{n} M(m) h_{n-m},
* ``chi_grouped``           per-group closed forms stitched together by
                            binomial convolution (the production engine).

For a group of S equal coefficients lam, chi_n = lam^n (n+S-1)!/(S-1)!, and
an infinitesimal tail of total mass t contributes chi_n = t^n; merging two
independent coefficient sets A, B obeys
chi_N^{AB} = sum_M chi_M^A chi_{N-M}^B binom(N, M), which in h-space is a
plain Cauchy convolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations_with_replacement

import numpy as np

from ._backend import chi_log_h_series, convolve_log_h
from .errors import ResourceCapError
from .schmidt import SchmidtDistribution
from .special import LogValue, log_factorials

__all__ = [
    "ChiSeries",
    "chi_bruteforce_exact",
    "chi_recursive",
    "chi_grouped",
    "chi_series",
    "normalization_ratio_series",
    "commutator_expectation",
]

_NEG_INF = float("-inf")

BRUTEFORCE_MAX_N = 12
BRUTEFORCE_MAX_MODES = 8


@dataclass(frozen=True)
class ChiSeries:
    """chi_0..chi_N for one distribution, in log domain.

    ``exact`` carries the same series as Fractions when an exact engine
    produced it.  Ratios chi_{n+1}/chi_n are plain floats: they never exceed
    n + 1.
    """

    dist: SchmidtDistribution
    log_chi: np.ndarray
    exact: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        lc = self.log_chi
        if lc[0] != 0.0:
            raise AssertionError("chi_0 must be exactly 1")
        if len(lc) > 1 and abs(lc[1]) > 1e-8:
            raise AssertionError(f"chi_1 must be 1, got log {lc[1]!r}")

    def __len__(self) -> int:
        return len(self.log_chi)

    @property
    def n_max(self) -> int:
        return len(self.log_chi) - 1

    def chi(self, n: int) -> LogValue:
        return LogValue(float(self.log_chi[n]))

    @cached_property
    def ratios(self) -> np.ndarray:
        """ratios[n] = chi_{n+1} / chi_n, n = 0..N-1."""
        return np.exp(np.diff(self.log_chi))

    def ratio(self, n: int) -> float:
        return float(self.ratios[n])


# ---------------------------------------------------------------------------
# raw series builders (inputs need not be normalized; occupation statistics
# evaluate reduced coefficient sets whose mass is deliberately < 1)
# ---------------------------------------------------------------------------


def _log_power_sums(groups, tail_mass: float, n_max: int, normalized: bool) -> np.ndarray:
    """log M(m) for m = 0..n_max (index 0 unused).  Tail enters only m = 1."""
    lm = np.full(n_max + 1, _NEG_INF)
    if n_max < 1:
        return lm
    mass = math.fsum(v * k for v, k in groups) + tail_mass
    lm[1] = 0.0 if normalized else math.log(mass)
    if n_max >= 2 and groups:
        m = np.arange(2, n_max + 1, dtype=float)
        rows = np.array(
            [math.log(k) + m * math.log(v) for v, k in groups]
        )
        lm[2:] = np.logaddexp.reduce(rows, axis=0) if len(groups) > 1 else rows[0]
    return lm


def _group_log_h(value: float, mult: int, n_max: int) -> np.ndarray:
    """log h_n for ``mult`` equal coefficients: h_n = v^n binom(n+S-1, n)."""
    lf = log_factorials(n_max + mult)
    n = np.arange(n_max + 1)
    return n * math.log(value) + lf[n + mult - 1] - lf[mult - 1] - lf[n]


def _tail_log_h(tail_mass: float, n_max: int) -> np.ndarray:
    """log h_n for the infinitesimal tail: h_n = t^n / n!."""
    lf = log_factorials(n_max)
    n = np.arange(n_max + 1)
    return n * math.log(tail_mass) - lf[: n_max + 1]


def raw_log_h_grouped(groups, tail_mass: float, n_max: int) -> np.ndarray:
    """Grouped-engine log h-series for an arbitrary coefficient set."""
    parts = [_group_log_h(v, k, n_max) for v, k in groups]
    if tail_mass > 0.0:
        parts.append(_tail_log_h(tail_mass, n_max))
    if not parts:
        out = np.full(n_max + 1, _NEG_INF)
        out[0] = 0.0
        return out
    acc = parts[0]
    for part in parts[1:]:
        acc = convolve_log_h(acc, part, n_max + 1)
    return np.asarray(acc)


def raw_log_h_recursive(groups, tail_mass: float, n_max: int, normalized: bool = False) -> np.ndarray:
    """Power-sum-recursion log h-series for an arbitrary coefficient set."""
    lm = _log_power_sums(groups, tail_mass, n_max, normalized)
    return np.asarray(chi_log_h_series(lm, n_max))


def _finish_series(d: SchmidtDistribution, lh: np.ndarray, exact=None) -> ChiSeries:
    n_max = len(lh) - 1
    lh = np.array(lh, dtype=float)
    lh[0] = 0.0
    # chi_1 = M(1) = 1 exactly for a normalized distribution; residue at this
    # entry is log-magnitude quantization from lgamma of huge multiplicities
    if n_max >= 1 and abs(lh[1]) < 1e-8:
        lh[1] = 0.0
    log_chi = lh + log_factorials(n_max)[: n_max + 1]
    return ChiSeries(dist=d, log_chi=log_chi, exact=exact)


# ---------------------------------------------------------------------------
# exact rational engines
# ---------------------------------------------------------------------------


def _exact_groups_or_raise(d: SchmidtDistribution):
    if d.exact_groups is None:
        raise ResourceCapError(
            "exact evaluation requires a distribution built from rational values"
        )
    return d.exact_groups


def _exact_h_grouped(groups, tail: Fraction, n_max: int) -> list[Fraction]:
    parts: list[list[Fraction]] = []
    for v, k in groups:
        parts.append([v**n * math.comb(n + k - 1, n) for n in range(n_max + 1)])
    if tail > 0:
        parts.append([tail**n / Fraction(math.factorial(n)) for n in range(n_max + 1)])
    if not parts:
        return [Fraction(1)] + [Fraction(0)] * n_max
    acc = parts[0]
    for part in parts[1:]:
        acc = [
            sum((acc[m] * part[n - m] for m in range(n + 1)), Fraction(0))
            for n in range(n_max + 1)
        ]
    return acc


def _exact_h_recursive(groups, tail: Fraction, n_max: int) -> list[Fraction]:
    mass = sum((Fraction(v) * k for v, k in groups), Fraction(0)) + tail
    power = {1: mass}
    for m in range(2, n_max + 1):
        power[m] = sum((k * v**m for v, k in groups), Fraction(0))
    h = [Fraction(1)]
    for n in range(1, n_max + 1):
        h.append(sum((power[m] * h[n - m] for m in range(1, n + 1)), Fraction(0)) / n)
    return h


def _exact_to_series(d: SchmidtDistribution, h: list[Fraction]) -> ChiSeries:
    chi = tuple(h[n] * math.factorial(n) for n in range(len(h)))
    log_chi = np.array([_log_fraction(c) for c in chi])
    return ChiSeries(dist=d, log_chi=log_chi, exact=chi)


def _log_fraction(fr: Fraction) -> float:
    if fr == 0:
        return _NEG_INF
    # math.log accepts arbitrarily large ints, so this never overflows
    return math.log(fr.numerator) - math.log(fr.denominator)


# ---------------------------------------------------------------------------
# public engines
# ---------------------------------------------------------------------------


def _compositions(total: int, parts: int):
    """All occupation vectors (m_1..m_parts) with sum == total."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def chi_bruteforce_exact(d: SchmidtDistribution, n: int) -> Fraction:
    """Ground-truth chi_N by exact enumeration of occupation vectors.

    chi_N = N! * sum over all occupation vectors of prod_j lambda_j^{m_j};
    each vector corresponds to exactly one non-decreasing index tuple of the
    defining polynomial, so no combinatorial weight appears.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if d.has_tail:
        raise ResourceCapError("the brute-force oracle handles finite distributions only")
    values = d.flat_exact_values()
    if n > BRUTEFORCE_MAX_N or len(values) > BRUTEFORCE_MAX_MODES:
        raise ResourceCapError(
            f"oracle capped at n <= {BRUTEFORCE_MAX_N}, modes <= {BRUTEFORCE_MAX_MODES}"
        )
    total = Fraction(0)
    for occ in _compositions(n, len(values)):
        term = Fraction(1)
        for v, m in zip(values, occ):
            if m:
                term *= v**m
        total += term
    return total * math.factorial(n)


def _chi_exact_by_index_tuples(d: SchmidtDistribution, n: int) -> Fraction:
    """Same sum as :func:`chi_bruteforce_exact`, enumerated the other way:
    over non-decreasing index tuples.  The two must agree term for term."""
    values = d.flat_exact_values()
    total = Fraction(0)
    for tup in combinations_with_replacement(values, n):
        total += math.prod(tup, start=Fraction(1))
    return total * math.factorial(n)


def chi_recursive(d: SchmidtDistribution, n_max: int, exact: bool = False) -> ChiSeries:
    """Whole series chi_0..chi_N via the power-sum recursion; O(N^2)."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if exact:
        groups = _exact_groups_or_raise(d)
        return _exact_to_series(d, _exact_h_recursive(groups, d.exact_tail, n_max))
    lh = raw_log_h_recursive(d.groups, d.tail_mass, n_max, normalized=True)
    return _finish_series(d, lh)


def chi_grouped(d: SchmidtDistribution, n_max: int, exact: bool = False) -> ChiSeries:
    """Whole series via per-group closed forms plus binomial convolution.

    This is the production engine: cost O(G * N * w) for G groups, where w
    is the width of the dominant convolution window (w << N away from the
    bosonic/super-bosonic crossover)."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if exact:
        groups = _exact_groups_or_raise(d)
        return _exact_to_series(d, _exact_h_grouped(groups, d.exact_tail, n_max))
    lh = raw_log_h_grouped(d.groups, d.tail_mass, n_max)
    return _finish_series(d, lh)


def chi_series(d: SchmidtDistribution, n_max: int, engine: str = "grouped") -> ChiSeries:
    """Engine dispatcher used by the CLI; ``oracle`` builds the exact series."""
    if engine == "grouped":
        return chi_grouped(d, n_max)
    if engine == "recursive":
        return chi_recursive(d, n_max)
    if engine == "oracle":
        _exact_groups_or_raise(d)
        if d.has_tail or n_max > BRUTEFORCE_MAX_N or d.mode_count > BRUTEFORCE_MAX_MODES:
            raise ResourceCapError(
                f"oracle engine capped at n <= {BRUTEFORCE_MAX_N}, "
                f"modes <= {BRUTEFORCE_MAX_MODES}, no tail"
            )
        h = [chi_bruteforce_exact(d, n) / math.factorial(n) for n in range(n_max + 1)]
        return _exact_to_series(d, h)
    raise ValueError(f"unknown engine {engine!r}")


def normalization_ratio_series(cs: ChiSeries) -> np.ndarray:
    """ratios[n] = exp(log chi_{n+1} - log chi_n)."""
    if len(cs) < 2:
        raise ValueError("series must contain at least chi_0 and chi_1")
    return cs.ratios


def commutator_expectation(d: SchmidtDistribution, n: int) -> float:
    """<N|[c, c+]|N> = 2 chi_{N+1}/chi_N - 1 (1 for ideal bosons)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    cs = chi_grouped(d, n + 1)
    return 2.0 * cs.ratio(n) - 1.0

"""Counting statistics of composites in a single Schmidt mode.

For a mode with coefficient lam inside a distribution whose scaled series is
h_n = chi_n / n!, the probability of finding m of the N composites in that
mode reduces to

    P(m) = lam^m h'_{N-m} / h_N,

where h' belongs to the coefficient set with one copy of lam removed (the
factorials of the textbook form cancel in h-space).  Probabilities are
assembled in log domain and exponentiated once at the end; values below the
double-precision floor come out as exact zeros.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .chi import raw_log_h_grouped, raw_log_h_recursive
from .errors import CoboseError
from .schmidt import SchmidtDistribution

__all__ = [
    "OccupationPmf",
    "mode_occupation_pmf",
    "mean_occupation",
    "occupation_sum_rule",
    "tail_occupation_mean",
    "occupation_fraction_curve",
]


@dataclass(frozen=True)
class OccupationPmf:
    """P(m) for m = 0..N in one Schmidt mode, plus the mean occupation."""

    mode_value: float
    n: int
    pmf: np.ndarray
    mean: float

    @property
    def fraction(self) -> float:
        """Mean occupation as a fraction of the total composite number."""
        return self.mean / self.n


def _select_mode(d: SchmidtDistribution, group: int, position: int) -> tuple[float, list]:
    if not d.groups:
        raise ValueError("distribution has no finite modes to interrogate")
    if not 0 <= group < len(d.groups):
        raise ValueError(f"group index {group} out of range (have {len(d.groups)} groups)")
    value, mult = d.groups[group]
    if not 0 <= position < mult:
        raise ValueError(f"position {position} out of range for multiplicity {mult}")
    reduced = [list(g) for g in d.groups]
    if mult == 1:
        del reduced[group]
    else:
        reduced[group][1] = mult - 1
    return value, [tuple(g) for g in reduced]


def _raw_series(groups, tail: float, n_max: int, engine: str) -> np.ndarray:
    if engine == "grouped":
        return raw_log_h_grouped(groups, tail, n_max)
    if engine == "recursive":
        return raw_log_h_recursive(groups, tail, n_max)
    raise ValueError(f"unknown engine {engine!r}")


def mode_occupation_pmf(
    d: SchmidtDistribution,
    n: int,
    group: int = 0,
    position: int = 0,
    engine: str = "grouped",
) -> OccupationPmf:
    """Occupation probabilities of one mode of the given group."""
    if n < 1:
        raise ValueError("n must be >= 1")
    value, reduced = _select_mode(d, group, position)
    lh_red = _raw_series(reduced, d.tail_mass, n, engine)
    lh_full = _raw_series(list(d.groups), d.tail_mass, n, engine)
    m = np.arange(n + 1)
    log_p = m * math.log(value) + lh_red[::-1] - lh_full[n]
    pmf = np.exp(log_p)
    total = float(pmf.sum())
    if abs(total - 1.0) > 1e-10:
        raise CoboseError(
            f"occupation pmf sums to {total!r}; engines are inconsistent"
        )
    mean = float(np.dot(m, pmf))
    return OccupationPmf(mode_value=value, n=n, pmf=pmf, mean=mean)


def mean_occupation(
    d: SchmidtDistribution, n: int, group: int = 0, position: int = 0
) -> tuple[float, float]:
    """(mean occupation, fraction of N) for one mode."""
    pmf = mode_occupation_pmf(d, n, group=group, position=position)
    return pmf.mean, pmf.fraction


def occupation_sum_rule(d: SchmidtDistribution, n: int) -> float:
    """Sum of mean occupations over all finite modes.

    Particle conservation makes this N for a finite distribution, which is
    the checkable statement; tailed spectra are rejected because the tail
    mean is only defined by subtraction (see :func:`tail_occupation_mean`).
    """
    if d.has_tail:
        raise ValueError("sum rule applies to finite distributions only")
    total = 0.0
    for g, (_, mult) in enumerate(d.groups):
        mean, _ = mean_occupation(d, n, group=g)
        total += mult * mean
    return total


def tail_occupation_mean(d: SchmidtDistribution, n: int) -> float:
    """Mean number of composites in the infinitesimal tail, by subtraction.

    Each individual tail mode holds zero particles in the limit; only the
    aggregate is meaningful."""
    finite = 0.0
    for g, (_, mult) in enumerate(d.groups):
        mean, _ = mean_occupation(d, n, group=g)
        finite += mult * mean
    return n - finite


def occupation_fraction_curve(
    d: SchmidtDistribution,
    n_values: Sequence[int],
    group: int = 0,
    position: int = 0,
    engine: str = "grouped",
) -> np.ndarray:
    """Fractions mean/N over a grid of N, sharing one series evaluation.

    The reduced and full h-series are prefixes of the same arrays for every
    N, so only the largest N pays the series cost."""
    n_values = list(n_values)
    if not n_values or any(int(v) != v or v < 1 for v in n_values):
        raise ValueError("n_values must be positive integers")
    n_top = int(max(n_values))
    value, reduced = _select_mode(d, group, position)
    lh_red = _raw_series(reduced, d.tail_mass, n_top, engine)
    lh_full = _raw_series(list(d.groups), d.tail_mass, n_top, engine)
    log_lam = math.log(value)
    out = np.empty(len(n_values))
    for i, n in enumerate(n_values):
        n = int(n)
        m = np.arange(n + 1)
        log_p = m * log_lam + lh_red[n::-1] - lh_full[n]
        pmf = np.exp(log_p)
        total = float(pmf.sum())
        if abs(total - 1.0) > 1e-10:
            raise CoboseError(f"occupation pmf sums to {total!r} at n = {n}")
        out[i] = float(np.dot(m, pmf)) / n
    return out

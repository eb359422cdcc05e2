"""Schmidt-coefficient distributions and their (lambda1, purity) geometry.

A distribution is a multiset of coefficients lambda_1 >= lambda_2 >= ... > 0
summing to one, stored as value groups with multiplicities, plus an optional
``tail_mass``: the combined weight of infinitely many infinitesimal
coefficients in the large-mode-count limit.  The tail carries first-moment
mass only; it contributes nothing to any power sum of order m >= 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import DistributionError

__all__ = [
    "SchmidtDistribution",
    "FeasibilityRange",
    "make_distribution",
    "power_sum",
    "entanglement_measures",
    "feasible_lambda1_range",
    "feasible_purity_range",
]

MASS_TOL = 1e-12  # |sum - 1| allowed without normalize=True
MERGE_RTOL = 1e-14  # values this close (relative) collapse into one group

_ExactScalar = (int, Fraction)


@dataclass(frozen=True)
class SchmidtDistribution:
    """Validated, immutable coefficient multiset.

    ``groups`` is sorted by descending value; ``exact_groups`` mirrors it in
    exact rationals when the inputs allowed that (needed by the brute-force
    engine and the exact evaluation modes).
    """

    groups: tuple[tuple[float, int], ...]
    tail_mass: float = 0.0
    exact_groups: tuple[tuple[Fraction, int], ...] | None = None
    exact_tail: Fraction | None = None
    lambda1: float = field(init=False, default=0.0)
    purity: float = field(init=False, default=0.0)

    def __post_init__(self):
        lam1 = self.groups[0][0] if self.groups else 0.0
        pur = math.fsum(k * v * v for v, k in self.groups)
        object.__setattr__(self, "lambda1", lam1)
        object.__setattr__(self, "purity", pur)

    @cached_property
    def values(self) -> np.ndarray:
        return np.array([v for v, _ in self.groups], dtype=float)

    @cached_property
    def multiplicities(self) -> np.ndarray:
        return np.array([k for _, k in self.groups], dtype=float)

    @property
    def mode_count(self) -> int:
        """Number of finite (non-infinitesimal) modes."""
        return int(sum(k for _, k in self.groups))

    @property
    def has_tail(self) -> bool:
        return self.tail_mass > 0.0

    @property
    def total_modes(self) -> float:
        """Finite mode count, or inf when an infinitesimal tail is present."""
        return math.inf if self.has_tail else float(self.mode_count)

    @property
    def is_exact(self) -> bool:
        return self.exact_groups is not None

    def flat_values(self) -> list[float]:
        """Finite coefficients expanded by multiplicity, descending."""
        out: list[float] = []
        for v, k in self.groups:
            out.extend([v] * k)
        return out

    def flat_exact_values(self) -> list[Fraction]:
        if self.exact_groups is None:
            raise DistributionError("distribution was not built from exact rationals")
        out: list[Fraction] = []
        for v, k in self.exact_groups:
            out.extend([v] * k)
        return out


@dataclass(frozen=True)
class FeasibilityRange:
    """Closed interval [lower, upper] of the free parameter."""

    lower: float
    upper: float


def _as_groups(values_or_groups: Sequence) -> list[tuple[object, int]]:
    groups: list[tuple[object, int]] = []
    for item in values_or_groups:
        if isinstance(item, (tuple, list)):
            if len(item) != 2:
                raise DistributionError(f"group entries must be (value, multiplicity), got {item!r}")
            v, k = item
        else:
            v, k = item, 1
        if int(k) != k or k < 1:
            raise DistributionError(f"multiplicity must be a positive integer, got {k!r}")
        groups.append((v, int(k)))
    return groups


def make_distribution(
    values_or_groups: Sequence,
    tail_mass=0.0,
    normalize: bool = False,
) -> SchmidtDistribution:
    """Build a validated distribution from values or (value, mult) pairs.

    Zero values are dropped, negatives raise.  Equal values (within
    ``MERGE_RTOL`` relative) are merged into one group.  Unless ``normalize``
    is set, the total mass must already be 1 within ``MASS_TOL``; with it,
    values and tail are rescaled by the total.  Inputs given entirely as
    int/Fraction are also kept in exact form.
    """
    raw = _as_groups(values_or_groups)
    exact_in = all(isinstance(v, _ExactScalar) for v, _ in raw) and (
        isinstance(tail_mass, _ExactScalar) or tail_mass == 0
    )

    for v, _ in raw:
        if v < 0:
            raise DistributionError(f"negative Schmidt coefficient: {v}")
    if tail_mass < 0 or tail_mass >= 1:
        raise DistributionError(f"tail_mass must lie in [0, 1), got {tail_mass}")

    raw = [(v, k) for v, k in raw if v > 0]
    if not raw and tail_mass == 0:
        raise DistributionError("distribution has zero total mass")

    if exact_in:
        exact = [(Fraction(v), k) for v, k in raw]
        exact_tail = Fraction(tail_mass) if isinstance(tail_mass, _ExactScalar) else Fraction(0)
        total = sum(v * k for v, k in exact) + exact_tail
        if total <= 0:
            raise DistributionError("distribution has zero total mass")
        if normalize:
            exact = [(v / total, k) for v, k in exact]
            exact_tail = exact_tail / total
        elif abs(float(total) - 1.0) > MASS_TOL:
            raise DistributionError(
                f"coefficients sum to {float(total)!r}, not 1 (pass normalize=True to rescale)"
            )
        exact.sort(key=lambda g: g[0], reverse=True)
        merged_exact: list[tuple[Fraction, int]] = []
        for v, k in exact:
            if merged_exact and merged_exact[-1][0] == v:
                merged_exact[-1] = (v, merged_exact[-1][1] + k)
            else:
                merged_exact.append((v, k))
        groups = tuple((float(v), k) for v, k in merged_exact)
        return SchmidtDistribution(
            groups=groups,
            tail_mass=float(exact_tail),
            exact_groups=tuple(merged_exact),
            exact_tail=exact_tail,
        )

    vals = [(float(v), k) for v, k in raw]
    tail = float(tail_mass)
    total = math.fsum(v * k for v, k in vals) + tail
    if total <= 0:
        raise DistributionError("distribution has zero total mass")
    if normalize:
        vals = [(v / total, k) for v, k in vals]
        tail = tail / total
    elif abs(total - 1.0) > MASS_TOL:
        raise DistributionError(
            f"coefficients sum to {total!r}, not 1 (pass normalize=True to rescale)"
        )
    vals.sort(key=lambda g: g[0], reverse=True)
    merged: list[tuple[float, int]] = []
    for v, k in vals:
        if merged and abs(merged[-1][0] - v) <= MERGE_RTOL * merged[-1][0]:
            merged[-1] = (merged[-1][0], merged[-1][1] + k)
        else:
            merged.append((v, k))
    return SchmidtDistribution(groups=tuple(merged), tail_mass=tail)


def power_sum(d: SchmidtDistribution, m: int) -> float:
    """M(m) = sum_j lambda_j^m.  The tail contributes only at m = 1, where
    normalization makes the answer exactly 1."""
    if m < 1 or int(m) != m:
        raise ValueError(f"power-sum order must be an integer >= 1, got {m}")
    if m == 1:
        return 1.0
    return float(np.dot(d.multiplicities, d.values ** int(m))) if d.groups else 0.0


def entanglement_measures(d: SchmidtDistribution) -> tuple[float, float]:
    """(geometric entanglement 1 - lambda1, Schmidt number 1/purity)."""
    e_g = 1.0 - d.lambda1
    k = 1.0 / d.purity if d.purity > 0 else math.inf
    return e_g, k


def _ceil_tol(x: float, rel: float = 1e-9) -> int:
    """ceil that forgives upward float noise at integer boundaries."""
    return int(math.ceil(x - rel * max(1.0, abs(x))))


def _floor_tol(x: float, rel: float = 1e-9) -> int:
    """floor that forgives downward float noise at integer boundaries."""
    return int(math.floor(x + rel * max(1.0, abs(x))))


def feasible_lambda1_range(purity: float) -> FeasibilityRange:
    """Allowed interval of the largest coefficient, given the purity.

    The minimum is attained by the uniform distribution on ceil(1/P) modes,
    the maximum lambda1 = sqrt(P) by the peaked one.
    """
    if not 0 < purity <= 1:
        raise ValueError(f"purity must lie in (0, 1], got {purity}")
    if purity == 1.0:
        return FeasibilityRange(1.0, 1.0)
    s = _ceil_tol(1.0 / purity)
    if s < 2:
        return FeasibilityRange(1.0, 1.0)
    disc = max(0.0, (purity * s - 1.0) / (s - 1.0))
    lo = (math.sqrt(disc) + 1.0) / s
    return FeasibilityRange(lo, math.sqrt(purity))


def feasible_purity_range(lambda1: float) -> FeasibilityRange:
    """Allowed purity interval for a given largest coefficient.

    The minimum lambda1^2 comes from spreading the rest infinitesimally; the
    maximum from repeating lambda1 floor(1/lambda1) times plus one remainder.
    """
    if not 0 < lambda1 <= 1:
        raise ValueError(f"lambda1 must lie in (0, 1], got {lambda1}")
    f = _floor_tol(1.0 / lambda1)
    rem = max(0.0, 1.0 - lambda1 * f)
    return FeasibilityRange(lambda1 * lambda1, lambda1 * lambda1 * f + rem * rem)

"""Constructions of the power-sum-extremal Schmidt distributions.

At fixed (lambda1, P) the remaining coefficients satisfy

    sum_{j>=2} lambda_j = 1 - lambda1,
    sum_{j>=2} lambda_j^2 = P - lambda1^2,
    0 <= lambda_j <= lambda1,

and every power sum M(m >= 3) is maximized by repeating lambda1 as often as
the purity budget allows (L - 1 times, L = ceil(P/lambda1^2)), topping up
with one coefficient lambda_L and pushing all remaining mass into an
infinitesimal tail.  It is minimized by the opposite strategy: a single
block of equal mid-sized coefficients plus one closing coefficient, with
S = 1 + ceil((1-lambda1)^2 / (P-lambda1^2)) modes in total.  Because the
normalization factor is monotone in every power sum, these two spectra
bound chi_N and the normalization ratio for every admissible distribution.

Four boundary cases get dedicated builders: uniform / peaked (the extremes
in lambda1 at fixed P) and the P_min-limit / P_max spectra (extremes in P at
fixed lambda1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import FeasibilityError
from .schmidt import (
    SchmidtDistribution,
    _ceil_tol,
    _floor_tol,
    feasible_purity_range,
    make_distribution,
)

__all__ = [
    "ExtremalConstruction",
    "build_lambda_max",
    "build_lambda_min",
    "build_uniform",
    "build_peaked",
    "build_pmin_limit",
    "build_pmax",
    "assert_feasible",
]

# below this purity excess over lambda1^2 the minimizing solve degenerates
DEGENERATE_GAP = 1e-12
_FEAS_TOL = 1e-9
_DISC_TOL = 1e-12


@dataclass(frozen=True)
class ExtremalConstruction:
    kind: str
    result: SchmidtDistribution
    diagnostics: dict[str, float] = field(default_factory=dict)


def assert_feasible(lambda1: float, purity: float) -> None:
    if not 0 < lambda1 <= 1:
        raise FeasibilityError(f"lambda1 must lie in (0, 1], got {lambda1}")
    if not 0 < purity <= 1:
        raise FeasibilityError(f"purity must lie in (0, 1], got {purity}")
    p_range = feasible_purity_range(lambda1)
    if purity < p_range.lower - _FEAS_TOL * max(p_range.lower, 1e-300):
        raise FeasibilityError(
            f"purity {purity} below lambda1^2 = {p_range.lower} (infeasible pair)"
        )
    if purity > p_range.upper + _FEAS_TOL * p_range.upper:
        raise FeasibilityError(
            f"purity {purity} above P_max(lambda1) = {p_range.upper} (infeasible pair)"
        )


def _clamped_sqrt(x: float, what: str) -> float:
    """sqrt with forgiveness for tiny negative rounding; loud otherwise."""
    if x < 0:
        if x > -_DISC_TOL:
            return 0.0
        raise FeasibilityError(
            f"negative discriminant ({x!r}) while solving {what}; "
            "the (lambda1, purity) pair sits outside the feasible region"
        )
    return math.sqrt(x)


def build_lambda_max(lambda1: float, purity: float) -> ExtremalConstruction:
    """Power-sum maximizer at fixed (lambda1, P), in the infinite-mode limit.

    lambda1 repeated L-1 times, one top-up coefficient
    lambda_L = sqrt(P - (L-1) lambda1^2), and tail mass for the rest.  When
    P/lambda1^2 is an integer the top-up equals lambda1 and merges into the
    leading group.
    """
    assert_feasible(lambda1, purity)
    if purity - lambda1 * lambda1 < DEGENERATE_GAP:
        return _pmin_limit_as(lambda1, "max")
    big_l = _ceil_tol(purity / (lambda1 * lambda1))
    lam_l = _clamped_sqrt(purity - (big_l - 1) * lambda1 * lambda1, "the top-up coefficient")
    # cancellation in the square root blurs the exact-integer P/lambda1^2
    # boundary; snap so the top-up merges and multiplicities count cleanly
    if lam_l >= lambda1 * (1.0 - 1e-10):
        lam_l = lambda1
    tail = 1.0 - (big_l - 1) * lambda1 - lam_l
    if tail < 0:
        if tail < -1e-10:
            raise FeasibilityError(
                f"lambda_max construction spills mass (tail = {tail!r}) "
                f"for lambda1 = {lambda1}, purity = {purity}"
            )
        tail = 0.0
    groups = []
    if big_l > 1:
        groups.append((lambda1, big_l - 1))
    if lam_l > 0:
        groups.append((lam_l, 1))
    dist = make_distribution(groups, tail_mass=tail, normalize=True)
    return ExtremalConstruction(
        kind="max",
        result=dist,
        diagnostics={"L": float(big_l), "lambda_L": lam_l, "tail_mass": tail},
    )


def build_lambda_min(lambda1: float, purity: float) -> ExtremalConstruction:
    """Power-sum minimizer at fixed (lambda1, P): a finite spectrum
    lambda1 >= lambda_2 = ... = lambda_{S-1} >= lambda_S."""
    assert_feasible(lambda1, purity)
    gap = purity - lambda1 * lambda1
    if gap < DEGENERATE_GAP:
        return _pmin_limit_as(lambda1, "min")
    rest = 1.0 - lambda1
    s = 1 + _ceil_tol(rest * rest / gap)
    if s == 2:
        dist = make_distribution([(lambda1, 1), (rest, 1)], normalize=True)
        return ExtremalConstruction(kind="min", result=dist, diagnostics={"S": 2.0})
    disc = (s - 2) * (lambda1 * (2.0 - s * lambda1) + (s - 1) * purity - 1.0)
    r_prime = _clamped_sqrt(disc, "the minimizing spectrum")
    lam2 = rest / (s - 1) + r_prime / ((s - 2) * (s - 1))
    lam_s = (rest - r_prime) / (s - 1)
    groups = [(lambda1, 1), (min(lam2, lambda1), s - 2)]
    if lam_s > 0:
        groups.append((lam_s, 1))
    dist = make_distribution(groups, normalize=True)
    return ExtremalConstruction(
        kind="min",
        result=dist,
        diagnostics={"S": float(s), "R_prime": r_prime, "lambda_2": lam2, "lambda_S": lam_s},
    )


def build_uniform(purity: float) -> ExtremalConstruction:
    """The spectrum with the smallest possible lambda1 for this purity:
    S - 1 equal leading coefficients plus one closing coefficient."""
    if not 0 < purity <= 1:
        raise FeasibilityError(f"purity must lie in (0, 1], got {purity}")
    s = _ceil_tol(1.0 / purity)
    if s < 2:
        dist = make_distribution([1.0])
        return ExtremalConstruction(kind="uniform", result=dist, diagnostics={"S": 1.0})
    disc = max(0.0, (purity * s - 1.0) / (s - 1.0))
    lam1 = (math.sqrt(disc) + 1.0) / s
    lam_s = 1.0 - lam1 * (s - 1)
    groups = [(lam1, s - 1)]
    if lam_s > 0:
        groups.append((lam_s, 1))
    dist = make_distribution(groups, normalize=True)
    return ExtremalConstruction(
        kind="uniform", result=dist, diagnostics={"S": float(s), "lambda_S": lam_s}
    )


def build_peaked(purity: float) -> ExtremalConstruction:
    """The spectrum with the largest possible lambda1 = sqrt(P): one finite
    coefficient, everything else infinitesimal."""
    if not 0 < purity <= 1:
        raise FeasibilityError(f"purity must lie in (0, 1], got {purity}")
    lam1 = math.sqrt(purity)
    dist = make_distribution([lam1], tail_mass=1.0 - lam1, normalize=True)
    return ExtremalConstruction(kind="peaked", result=dist, diagnostics={"lambda_1": lam1})


def build_pmin_limit(lambda1: float) -> ExtremalConstruction:
    """Minimal-purity spectrum at fixed lambda1: P = lambda1^2, all other
    mass infinitesimal."""
    if not 0 < lambda1 <= 1:
        raise FeasibilityError(f"lambda1 must lie in (0, 1], got {lambda1}")
    dist = make_distribution([lambda1], tail_mass=1.0 - lambda1, normalize=True)
    return ExtremalConstruction(kind="pmin_limit", result=dist, diagnostics={})


def _pmin_limit_as(lambda1: float, kind: str) -> ExtremalConstruction:
    c = build_pmin_limit(lambda1)
    return ExtremalConstruction(kind=kind, result=c.result, diagnostics={"degenerate": 1.0})


def build_pmax(lambda1: float) -> ExtremalConstruction:
    """Maximal-purity spectrum at fixed lambda1: floor(1/lambda1) copies of
    lambda1 plus one remainder coefficient (omitted when zero)."""
    if not 0 < lambda1 <= 1:
        raise FeasibilityError(f"lambda1 must lie in (0, 1], got {lambda1}")
    f = _floor_tol(1.0 / lambda1)
    rem = 1.0 - lambda1 * f
    groups = [(lambda1, f)]
    if rem > 1e-15:
        groups.append((rem, 1))
    dist = make_distribution(groups, normalize=True)
    return ExtremalConstruction(
        kind="pmax", result=dist, diagnostics={"copies": float(f), "remainder": max(rem, 0.0)}
    )

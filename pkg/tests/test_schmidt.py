import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import minimize

from cobose import (
    DistributionError,
    entanglement_measures,
    feasible_lambda1_range,
    feasible_purity_range,
    make_distribution,
    power_sum,
)
from tests.conftest import random_distribution


class TestMakeDistribution:
    def test_two_equal_coefficients(self):
        d = make_distribution([0.5, 0.5])
        assert d.groups == ((0.5, 2),)
        assert d.lambda1 == 0.5
        assert d.purity == pytest.approx(0.5, abs=1e-15)

    def test_single_mode(self):
        d = make_distribution([1.0])
        assert d.lambda1 == 1.0 and d.purity == 1.0
        assert d.total_modes == 1

    def test_tail_carries_no_purity(self):
        d = make_distribution([0.31], tail_mass=0.69)
        assert d.purity == pytest.approx(0.31**2, rel=1e-15)
        assert d.total_modes == math.inf

    def test_group_input_and_merge(self):
        d = make_distribution([(0.3, 2), (0.4, 1)])
        assert d.groups == ((0.4, 1), (0.3, 2))

    def test_nearby_values_merge(self):
        v = 0.25
        d = make_distribution([v, v * (1 + 5e-15), 0.5], normalize=True)
        assert len(d.groups) == 2
        assert d.groups[1][1] == 2

    def test_zero_values_dropped(self):
        d = make_distribution([0.6, 0.0, 0.4])
        assert d.mode_count == 2

    def test_negative_value_rejected(self):
        with pytest.raises(DistributionError):
            make_distribution([0.9, -0.1])

    def test_bad_mass_rejected(self):
        with pytest.raises(DistributionError):
            make_distribution([0.5, 0.6])

    def test_normalize_rescales(self):
        d = make_distribution([0.5, 0.6], normalize=True)
        assert d.lambda1 == pytest.approx(0.6 / 1.1, rel=1e-15)

    def test_zero_mass_rejected(self):
        with pytest.raises(DistributionError):
            make_distribution([0.0, 0.0])

    def test_bad_multiplicity(self):
        with pytest.raises(DistributionError):
            make_distribution([(0.5, 0), (0.5, 1)])

    def test_exact_inputs_kept(self):
        d = make_distribution([Fraction(1, 3), Fraction(2, 3)])
        assert d.exact_groups == ((Fraction(2, 3), 1), (Fraction(1, 3), 1))

    def test_tail_bounds(self):
        with pytest.raises(DistributionError):
            make_distribution([0.5], tail_mass=1.0)

    def test_lambda1_purity_ordering_invariant(self, rng):
        for _ in range(100):
            d = random_distribution(rng, tailed=bool(rng.integers(2)))
            assert d.lambda1**2 <= d.purity * (1 + 1e-12)
            assert d.purity <= d.lambda1 * (1 + 1e-12)


class TestPowerSum:
    def test_two_equal(self):
        d = make_distribution([0.5, 0.5])
        assert power_sum(d, 2) == pytest.approx(0.5, rel=1e-15)

    def test_first_moment_is_exactly_one(self, rng):
        for _ in range(20):
            d = random_distribution(rng, tailed=True)
            assert power_sum(d, 1) == 1.0

    def test_tail_excluded_above_first_order(self):
        d = make_distribution([0.31], tail_mass=0.69)
        assert power_sum(d, 3) == pytest.approx(0.31**3, rel=1e-15)

    def test_order_validated(self):
        d = make_distribution([1.0])
        with pytest.raises(ValueError):
            power_sum(d, 0)

    def test_strictly_decreasing_for_multimode(self, rng):
        for _ in range(30):
            d = random_distribution(rng)
            sums = [power_sum(d, m) for m in range(2, 10)]
            assert all(a > b for a, b in zip(sums, sums[1:]))

    @given(
        st.lists(st.floats(0.01, 1.0), min_size=2, max_size=6),
        st.integers(2, 9),
    )
    @settings(max_examples=60, deadline=None)
    def test_permutation_and_split_invariance(self, raw, m):
        d1 = make_distribution(raw, normalize=True)
        d2 = make_distribution(list(reversed(raw)), normalize=True)
        # duplicating each entry halves the weights but keeps the multiset shape
        assert power_sum(d1, m) == pytest.approx(power_sum(d2, m), rel=1e-12)

    def test_merge_roundtrip(self, rng):
        for _ in range(20):
            k = int(rng.integers(2, 5))
            v = float(rng.uniform(0.05, 0.2))
            rest = 1 - k * v
            flat = make_distribution([v] * k + [rest])
            grouped = make_distribution([(v, k), (rest, 1)])
            for m in range(1, 8):
                assert power_sum(flat, m) == pytest.approx(power_sum(grouped, m), rel=1e-14)


class TestEntanglementMeasures:
    def test_product_state(self):
        assert entanglement_measures(make_distribution([1.0])) == (0.0, 1.0)

    def test_two_equal(self):
        e_g, k = entanglement_measures(make_distribution([0.5, 0.5]))
        assert e_g == 0.5
        assert k == pytest.approx(2.0, rel=1e-15)

    def test_tailed(self):
        e_g, k = entanglement_measures(make_distribution([0.31], tail_mass=0.69))
        assert e_g == pytest.approx(0.69, rel=1e-15)
        assert k == pytest.approx(1 / 0.0961, rel=1e-12)


def _min_lambda1_numeric(purity: float, modes: int) -> float:
    """Independent check: minimize a smooth max over the constrained simplex."""
    beta = 400.0

    def soft_max(x):
        return np.log(np.exp(beta * x).sum()) / beta

    best = 1.0
    rng = np.random.default_rng(5)
    for _ in range(8):
        x0 = rng.dirichlet(np.ones(modes))
        res = minimize(
            soft_max,
            x0,
            constraints=[
                {"type": "eq", "fun": lambda x: x.sum() - 1.0},
                {"type": "eq", "fun": lambda x: (x**2).sum() - purity},
            ],
            bounds=[(0.0, 1.0)] * modes,
            method="SLSQP",
            options={"maxiter": 400, "ftol": 1e-14},
        )
        if res.success:
            best = min(best, float(np.max(res.x)))
    return best


class TestFeasibleLambda1Range:
    def test_quarter(self):
        r = feasible_lambda1_range(0.25)
        assert r.lower == pytest.approx(0.25, abs=1e-14)
        assert r.upper == pytest.approx(0.5, rel=1e-15)

    def test_pure(self):
        r = feasible_lambda1_range(1.0)
        assert (r.lower, r.upper) == (1.0, 1.0)

    def test_tiny_purity(self):
        r = feasible_lambda1_range(1e-4)
        assert r.lower == pytest.approx(1e-4, rel=1e-12)
        assert r.upper == pytest.approx(1e-2, rel=1e-15)

    @pytest.mark.parametrize("purity", [0.25, 0.3])
    def test_lower_end_against_optimizer(self, purity):
        r = feasible_lambda1_range(purity)
        modes = math.ceil(1 / purity)
        numeric = _min_lambda1_numeric(purity, modes)
        assert numeric == pytest.approx(r.lower, abs=2e-6)

    def test_domain(self):
        with pytest.raises(ValueError):
            feasible_lambda1_range(0.0)
        with pytest.raises(ValueError):
            feasible_lambda1_range(1.2)


class TestFeasiblePurityRange:
    def test_two_fifths(self):
        r = feasible_purity_range(0.4)
        assert r.lower == pytest.approx(0.16, rel=1e-15)
        assert r.upper == pytest.approx(0.36, rel=1e-14)

    def test_exact_division(self):
        r = feasible_purity_range(0.5)
        assert r.upper == pytest.approx(0.5, rel=1e-15)

    def test_single_mode(self):
        r = feasible_purity_range(1.0)
        assert (r.lower, r.upper) == (1.0, 1.0)

    def test_upper_end_against_random_search(self, rng):
        lam1 = 0.4
        r = feasible_purity_range(lam1)
        best = 0.0
        for _ in range(20000):
            s = int(rng.integers(3, 7))
            w = rng.uniform(0, lam1, size=s)
            total = w.sum()
            if total < 1e-9:
                continue
            w = np.minimum(w / total, lam1)
            w[0] += 1.0 - w.sum()  # repair mass; may break the cap, so recheck
            if w[0] > lam1 + 1e-12:
                continue
            best = max(best, float((w**2).sum()))
        assert best <= r.upper + 1e-12
        assert best > 0.9 * r.upper  # the search actually approaches the bound

    def test_domain(self):
        with pytest.raises(ValueError):
            feasible_purity_range(0.0)


def test_random_distributions_lie_inside_their_own_ranges(rng):
    for _ in range(200):
        d = random_distribution(rng, tailed=bool(rng.integers(2)))
        lr = feasible_lambda1_range(d.purity)
        pr = feasible_purity_range(d.lambda1)
        assert lr.lower - 1e-10 <= d.lambda1 <= lr.upper + 1e-10
        assert pr.lower - 1e-10 <= d.purity <= pr.upper + 1e-10

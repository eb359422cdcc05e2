"""Backend equivalence: the compiled kernels and the NumPy fallback must be
interchangeable, and the windowed convolution must reproduce a full scan."""

import math

import numpy as np
import pytest

from cobose import _kernels_py
from cobose._backend import backend_name
from cobose.chi import _group_log_h, _tail_log_h

try:
    from cobose import _kernels
except ImportError:
    _kernels = None

needs_compiled = pytest.mark.skipif(_kernels is None, reason="compiled kernels unavailable")


def _reference_convolution(a, b, n_out):
    out = np.empty(n_out)
    for n in range(n_out):
        lo, hi = max(0, n - (len(b) - 1)), min(n, len(a) - 1)
        terms = [a[m] + b[n - m] for m in range(lo, hi + 1)]
        out[n] = _kernels_py.logsumexp(np.array(terms))
    return out


def test_logsumexp_matches_reference(rng):
    for _ in range(50):
        a = rng.normal(scale=200.0, size=int(rng.integers(1, 50)))
        m = a.max()
        ref = m + math.log(np.exp(a - m).sum())
        assert _kernels_py.logsumexp(a) == pytest.approx(ref, rel=1e-14)


def test_logsumexp_edge_cases():
    assert _kernels_py.logsumexp(np.array([])) == -math.inf
    assert _kernels_py.logsumexp(np.array([-math.inf, -math.inf])) == -math.inf
    assert _kernels_py.logsumexp(np.array([-math.inf, 0.0])) == pytest.approx(0.0)


def test_windowed_convolution_equals_full_scan():
    n = 400
    a = _group_log_h(1e-2, 7, n)
    b = _tail_log_h(0.93, n)
    got = np.asarray(_kernels_py.convolve_log_h(a, b, n + 1))
    ref = _reference_convolution(a, b, n + 1)
    np.testing.assert_allclose(got, ref, rtol=0, atol=1e-12)


def test_convolution_against_direct_h_polynomial():
    # two single coefficients: h_n = sum_{i+j=n} x^i y^j has a closed form
    n = 60
    x, y = 0.6, 0.4
    a = np.arange(n + 1) * math.log(x)
    b = np.arange(n + 1) * math.log(y)
    got = np.exp(np.asarray(_kernels_py.convolve_log_h(a, b, n + 1)))
    k = np.arange(n + 1)
    ref = (x ** (k + 1) - y ** (k + 1)) / (x - y)
    np.testing.assert_allclose(got, ref, rtol=1e-12)


def test_chi_log_h_series_known_case():
    # single mode with coefficient 1: M(m) = 1, h_n = 1
    n = 30
    lm = np.zeros(n + 1)
    lh = np.asarray(_kernels_py.chi_log_h_series(lm, n))
    np.testing.assert_allclose(lh, 0.0, atol=1e-12)


@needs_compiled
def test_backends_agree(rng):
    assert backend_name() in ("cython", "python")
    for _ in range(30):
        n = int(rng.integers(2, 300))
        lm = np.concatenate(([(-math.inf)], -rng.uniform(0.1, 5.0) * np.arange(1, n + 1)))
        lm[1] = 0.0
        py = np.asarray(_kernels_py.chi_log_h_series(lm, n))
        cy = np.asarray(_kernels.chi_log_h_series(lm, n))
        np.testing.assert_allclose(py, cy, rtol=0, atol=1e-11)

        a = _group_log_h(float(rng.uniform(0.01, 0.4)), int(rng.integers(1, 10)), n)
        b = _tail_log_h(float(rng.uniform(0.2, 0.95)), n)
        pc = np.asarray(_kernels_py.convolve_log_h(a, b, n + 1))
        cc = np.asarray(_kernels.convolve_log_h(a, b, n + 1))
        np.testing.assert_allclose(pc, cc, rtol=0, atol=1e-11)


@needs_compiled
def test_compiled_logsumexp_agrees(rng):
    for _ in range(30):
        a = np.ascontiguousarray(rng.normal(scale=300.0, size=int(rng.integers(1, 64))))
        assert _kernels.logsumexp(a) == pytest.approx(_kernels_py.logsumexp(a), abs=1e-12)

"""NumPy implementations of the hot log-domain kernels.

``cobose._kernels`` (Cython) provides the same three functions; the backend
module picks whichever is importable.  Everything here operates on raw
float64 arrays of natural logs, with -inf encoding exact zero.

The series convolved by :func:`convolve_log_h` are logs of h_n = chi_n / n!,
which are log-concave for every admissible coefficient set (that is the
(c) branch of the normalization-ratio inequality chain, and log-concavity
survives convolution).  The per-degree sums are therefore unimodal in the
split index and only a window around the peak can contribute at double
precision, which is what makes grouped evaluation fast at large N.
"""

import math

import numpy as np

_NEG_INF = float("-inf")
_WINDOW_CUT = 60.0  # e^-60 ~ 9e-27: far below double-precision visibility


def logsumexp(a):
    """Max-shifted ln sum(exp(a)) over a 1-d array."""
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return _NEG_INF
    m = float(np.max(a))
    if not math.isfinite(m):
        return m
    return m + math.log(float(np.sum(np.exp(a - m))))


def chi_log_h_series(log_m, n_max):
    """Newton-Girard recursion in h-space: h_n = (1/n) sum_m M(m) h_{n-m}.

    ``log_m[m]`` holds ln M(m) for m = 1..n_max (index 0 is ignored).
    Returns ln h_n for n = 0..n_max.  Cost O(n_max^2).
    """
    lm = np.ascontiguousarray(log_m, dtype=float)
    lh = np.empty(n_max + 1)
    lh[0] = 0.0
    for n in range(1, n_max + 1):
        t = lh[:n] + lm[n:0:-1]
        m = float(np.max(t))
        if not math.isfinite(m):
            lh[n] = m
            continue
        lh[n] = m + math.log(float(np.sum(np.exp(t - m)))) - math.log(n)
    return lh


def convolve_log_h(a, b, n_out=-1):
    """c[n] = ln sum_M exp(a[M] + b[n-M]) for log-concave log-series a, b.

    Only indices whose term lies within ``_WINDOW_CUT`` of the unimodal peak
    are summed.  ``n_out`` truncates the output length (default: full
    convolution length).
    """
    la = [float(v) for v in a]
    lb = [float(v) for v in b]
    na = len(la) - 1
    nb = len(lb) - 1
    full = na + nb
    if n_out < 0:
        n_out = full + 1
    out = np.empty(n_out)
    prev = 0
    for n in range(n_out):
        lo = max(0, n - nb)
        hi = min(n, na)
        if lo > hi:
            out[n] = _NEG_INF
            continue
        m = min(max(prev, lo), hi)
        tm = la[m] + lb[n - m]
        while m < hi and la[m + 1] + lb[n - m - 1] > tm:
            m += 1
            tm = la[m] + lb[n - m]
        while m > lo and la[m - 1] + lb[n - m + 1] > tm:
            m -= 1
            tm = la[m] + lb[n - m]
        if tm == _NEG_INF:
            out[n] = _NEG_INF
            prev = m
            continue
        cut = tm - _WINDOW_CUT
        terms = [1.0]
        i = m - 1
        while i >= lo:
            t = la[i] + lb[n - i]
            if t < cut:
                break
            terms.append(math.exp(t - tm))
            i -= 1
        i = m + 1
        while i <= hi:
            t = la[i] + lb[n - i]
            if t < cut:
                break
            terms.append(math.exp(t - tm))
            i += 1
        out[n] = tm + math.log(math.fsum(terms))
        prev = m
    return out

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled log-domain kernels.

Same contracts as cobose._kernels_py (the NumPy fallback); see there for the
unimodal-window argument behind convolve_log_h.
"""

from libc.math cimport exp, log, INFINITY

import numpy as np

DEF WINDOW_CUT = 60.0


cpdef double logsumexp(double[::1] a):
    cdef Py_ssize_t i, n = a.shape[0]
    cdef double m = -INFINITY
    cdef double s = 0.0, comp = 0.0, y, t
    if n == 0:
        return -INFINITY
    for i in range(n):
        if a[i] > m:
            m = a[i]
    if m == -INFINITY or m == INFINITY:
        return m
    for i in range(n):
        # Kahan compensation keeps long sums honest
        y = exp(a[i] - m) - comp
        t = s + y
        comp = (t - s) - y
        s = t
    return m + log(s)


def chi_log_h_series(double[::1] log_m, Py_ssize_t n_max):
    out_arr = np.empty(n_max + 1, dtype=np.float64)
    buf_arr = np.empty(n_max if n_max > 0 else 1, dtype=np.float64)
    cdef double[::1] lh = out_arr
    cdef double[::1] buf = buf_arr
    cdef Py_ssize_t n, k
    cdef double m, s, comp, y, t, v
    lh[0] = 0.0
    for n in range(1, n_max + 1):
        m = -INFINITY
        for k in range(n):
            v = lh[k] + log_m[n - k]
            buf[k] = v
            if v > m:
                m = v
        if m == -INFINITY:
            lh[n] = -INFINITY
            continue
        s = 0.0
        comp = 0.0
        for k in range(n):
            y = exp(buf[k] - m) - comp
            t = s + y
            comp = (t - s) - y
            s = t
        lh[n] = m + log(s) - log(<double> n)
    return out_arr


def convolve_log_h(double[::1] a, double[::1] b, Py_ssize_t n_out=-1):
    cdef Py_ssize_t na = a.shape[0] - 1
    cdef Py_ssize_t nb = b.shape[0] - 1
    cdef Py_ssize_t full = na + nb
    if n_out < 0:
        n_out = full + 1
    out_arr = np.empty(n_out, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t n, lo, hi, m, i, prev = 0
    cdef double tm, tt, cut, s, comp, y, t
    for n in range(n_out):
        lo = n - nb
        if lo < 0:
            lo = 0
        hi = n if n < na else na
        if lo > hi:
            out[n] = -INFINITY
            continue
        m = prev
        if m < lo:
            m = lo
        if m > hi:
            m = hi
        tm = a[m] + b[n - m]
        while m < hi and a[m + 1] + b[n - m - 1] > tm:
            m += 1
            tm = a[m] + b[n - m]
        while m > lo and a[m - 1] + b[n - m + 1] > tm:
            m -= 1
            tm = a[m] + b[n - m]
        if tm == -INFINITY:
            out[n] = -INFINITY
            prev = m
            continue
        cut = tm - WINDOW_CUT
        s = 1.0
        comp = 0.0
        i = m - 1
        while i >= lo:
            tt = a[i] + b[n - i]
            if tt < cut:
                break
            y = exp(tt - tm) - comp
            t = s + y
            comp = (t - s) - y
            s = t
            i -= 1
        i = m + 1
        while i <= hi:
            tt = a[i] + b[n - i]
            if tt < cut:
                break
            y = exp(tt - tm) - comp
            t = s + y
            comp = (t - s) - y
            s = t
            i += 1
        out[n] = tm + log(s)
        prev = m
    return out_arr

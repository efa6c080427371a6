# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled chordal stepping kernels.

Same contract as ``loewner._chordal_numpy``; that module's docstrings are
authoritative.  The trace recurrence is O(n^2) scalar work, which is why it
lives here.
"""

import numpy as np

from libc.math cimport copysign, fabs, sqrt

cdef extern from "complex.h" nogil:
    double complex csqrt(double complex)
    double cimag(double complex)
    double creal(double complex)
    double cabs(double complex)

BACKEND_NAME = "cython"


cdef inline double complex _sqrt_upper(double complex x) noexcept nogil:
    cdef double complex u = csqrt(x)
    if cimag(u) < 0.0:
        u = -u
    if cimag(u) == 0.0:
        u = fabs(creal(u))
    return u


cdef inline void _sqrt_upper_parts(double a, double b,
                                   double* p, double* q) noexcept nogil:
    # upper-half-plane root of a + b i in real arithmetic; the hot loops
    # use this to keep gcc from routing every step through libc complex
    # helpers.  On the real axis the nonnegative real root is taken.
    # a*a + b*b is formed directly: trace data lives many orders of
    # magnitude inside the overflow scale this would need hypot for.
    cdef double r, t
    if b == 0.0:
        if a >= 0.0:
            p[0] = sqrt(a)
            q[0] = 0.0
        else:
            p[0] = 0.0
            q[0] = sqrt(-a)
        return
    r = sqrt(a * a + b * b)
    t = sqrt(0.5 * (r + fabs(a)))
    if a >= 0.0:
        p[0] = copysign(t, b)
        q[0] = fabs(b) / (2.0 * t)
    else:
        p[0] = b / (2.0 * t)
        q[0] = t


def sqrt_upper(x):
    """Vectorized upper half-plane square root (numpy path; not hot)."""
    u = np.sqrt(np.asarray(x, dtype=complex))
    u = np.where(u.imag < 0.0, -u, u)
    on_axis = u.imag == 0.0
    if np.any(on_axis):
        u = np.where(on_axis, np.abs(u.real) + 0.0j, u)
    return u


def sqrt_upper_scalar(x):
    cdef double complex u = _sqrt_upper(x)
    return complex(u)


def up_flow(w0, double[::1] xi, double[::1] dt, double swallow_eps):
    cdef double complex w = w0
    cdef double complex u, q
    cdef double sigma
    cdef double eps2 = swallow_eps * swallow_eps
    cdef Py_ssize_t c, n = xi.shape[0]
    for c in range(n):
        u = w - xi[c]
        q = u * u
        sigma = -creal(q) / 4.0
        if sigma < 0.0:
            sigma = 0.0
        if sigma > dt[c]:
            sigma = dt[c]
        if sigma < dt[c] and cabs(q + 4.0 * sigma) < eps2:
            return complex(w), c, sigma
        w = xi[c] + _sqrt_upper(q + 4.0 * dt[c])
    return complex(w), -1, 0.0


def up_flow_batch(w0, double[::1] xi, double[::1] dt, double swallow_eps):
    w0 = np.ascontiguousarray(w0, dtype=np.complex128)
    cdef double complex[::1] win = w0
    cdef Py_ssize_t m = win.shape[0], n = xi.shape[0], i, c
    values = np.empty(m, dtype=np.complex128)
    cells = np.full(m, -1, dtype=np.int64)
    sigmas = np.zeros(m, dtype=np.float64)
    cdef double complex[::1] vv = values
    cdef long long[::1] cc = cells
    cdef double[::1] ss = sigmas
    cdef double complex w, u, q
    cdef double sigma
    cdef double eps2 = swallow_eps * swallow_eps
    with nogil:
        for i in range(m):
            w = win[i]
            for c in range(n):
                u = w - xi[c]
                q = u * u
                sigma = -creal(q) / 4.0
                if sigma < 0.0:
                    sigma = 0.0
                if sigma > dt[c]:
                    sigma = dt[c]
                if sigma < dt[c] and cabs(q + 4.0 * sigma) < eps2:
                    cc[i] = c
                    ss[i] = sigma
                    break
                w = xi[c] + _sqrt_upper(q + 4.0 * dt[c])
            vv[i] = w
    return values, cells, sigmas


def down_flow(z0, double[::1] xi, double[::1] dt):
    cdef double complex w = z0
    cdef double complex u
    cdef Py_ssize_t c
    for c in range(xi.shape[0] - 1, -1, -1):
        u = w - xi[c]
        w = xi[c] + _sqrt_upper(u * u - 4.0 * dt[c])
    return complex(w)


def down_flow_batch(z0, double[::1] xi, double[::1] dt):
    z0 = np.ascontiguousarray(z0, dtype=np.complex128)
    cdef Py_ssize_t m = z0.shape[0], n = xi.shape[0], i, c
    out = np.array(z0)
    cdef double[::1] o = out.view(np.float64)
    cdef double x, fourdt, re, im, p, q
    with nogil:
        for i in range(m):
            re = o[2 * i]
            im = o[2 * i + 1]
            for c in range(n - 1, -1, -1):
                x = xi[c]
                fourdt = 4.0 * dt[c]
                re = re - x
                _sqrt_upper_parts(re * re - im * im - fourdt,
                                  2.0 * re * im, &p, &q)
                re = x + p
                im = q
            o[2 * i] = re
            o[2 * i + 1] = im
    return out


def trace_points(double[::1] xi, double[::1] dt, double complex[::1] seeds):
    cdef Py_ssize_t n = xi.shape[0], c, j
    out = np.array(seeds)
    cdef double[::1] o = out.view(np.float64)
    cdef double x, fourdt, re, im, p, q
    with nogil:
        for c in range(n - 1, -1, -1):
            x = xi[c]
            fourdt = 4.0 * dt[c]
            for j in range(c, n):
                re = o[2 * j] - x
                im = o[2 * j + 1]
                _sqrt_upper_parts(re * re - im * im - fourdt,
                                  2.0 * re * im, &p, &q)
                o[2 * j] = x + p
                o[2 * j + 1] = q
    return out

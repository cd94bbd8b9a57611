# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: double power sums on point sets and tensor grids.

Coefficients, powers and accumulators are ``long double``; the polynomial
sums cancel heavily, and the extra bits keep float64 results accurate.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef long double ld


cdef inline ld _ipow(ld base, long e) nogil:
    cdef ld out = 1.0
    cdef ld b = base
    if e < 0:
        b = 1.0 / base
        e = -e
    while e:
        if e & 1:
            out *= b
        b *= b
        e >>= 1
    return out


def double_power_sum(coef, ex, ey, x, y):
    cdef const ld[:, ::1] c = np.ascontiguousarray(coef, dtype=np.longdouble)
    cdef const long[::1] e_x = np.ascontiguousarray(ex, dtype=np.int64)
    cdef const long[::1] e_y = np.ascontiguousarray(ey, dtype=np.int64)
    cdef const ld[::1] xv = np.ascontiguousarray(x, dtype=np.longdouble)
    cdef const ld[::1] yv = np.ascontiguousarray(y, dtype=np.longdouble)
    cdef Py_ssize_t n = xv.shape[0]
    cdef Py_ssize_t ns = c.shape[0]
    cdef Py_ssize_t nr = c.shape[1]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    ypow_arr = np.empty(nr, dtype=np.longdouble)
    cdef ld[::1] ypow = ypow_arr
    cdef Py_ssize_t i, s, r
    cdef ld acc, row
    with nogil:
        for i in range(n):
            for r in range(nr):
                ypow[r] = _ipow(yv[i], e_y[r])
            acc = 0.0
            for s in range(ns):
                row = 0.0
                for r in range(nr):
                    row += c[s, r] * ypow[r]
                acc += row * _ipow(xv[i], e_x[s])
            out[i] = <double>acc
    return out_arr


def double_power_grid(coef, ex, ey, xs, ys):
    cdef const ld[:, ::1] c = np.ascontiguousarray(coef, dtype=np.longdouble)
    cdef const long[::1] e_x = np.ascontiguousarray(ex, dtype=np.int64)
    cdef const long[::1] e_y = np.ascontiguousarray(ey, dtype=np.int64)
    cdef const ld[::1] xv = np.ascontiguousarray(xs, dtype=np.longdouble)
    cdef const ld[::1] yv = np.ascontiguousarray(ys, dtype=np.longdouble)
    cdef Py_ssize_t nx = xv.shape[0]
    cdef Py_ssize_t ny = yv.shape[0]
    cdef Py_ssize_t ns = c.shape[0]
    cdef Py_ssize_t nr = c.shape[1]
    acc_arr = np.zeros((nx, ny), dtype=np.longdouble)
    tmp_arr = np.zeros((ny, ns), dtype=np.longdouble)
    cdef ld[:, ::1] acc = acc_arr
    cdef ld[:, ::1] tmp = tmp_arr
    cdef Py_ssize_t i, j, s, r
    cdef ld p
    with nogil:
        # tmp[j, s] = sum_r c[s, r] * y_j**ey[r]
        for j in range(ny):
            for r in range(nr):
                p = _ipow(yv[j], e_y[r])
                for s in range(ns):
                    tmp[j, s] += c[s, r] * p
        for i in range(nx):
            for s in range(ns):
                p = _ipow(xv[i], e_x[s])
                for j in range(ny):
                    acc[i, j] += p * tmp[j, s]
    return acc_arr.astype(np.float64)


def weighted_grid_sum(wx, wy, values):
    cdef const double[::1] a = np.ascontiguousarray(wx, dtype=np.float64)
    cdef const double[::1] b = np.ascontiguousarray(wy, dtype=np.float64)
    cdef const double[:, ::1] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef Py_ssize_t i, j
    cdef ld acc = 0.0, row
    with nogil:
        for i in range(v.shape[0]):
            row = 0.0
            for j in range(v.shape[1]):
                row += <ld>b[j] * v[i, j]
            acc += <ld>a[i] * row
    return float(acc)

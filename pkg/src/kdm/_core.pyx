# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled evaluation kernels. Mirrors kdm._core_py exactly; the pure
version is the reference, this one just avoids the broadcast temporaries."""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, exp, fabs, sin, sqrt

cnp.import_array()

GAUSSIAN = 0
LAPLACIAN = 1
MATERN32 = 2
MATERN52 = 3
RATQUAD2 = 4
RATQUAD5 = 5


def gram(int family, double[:, ::1] X, double[:, ::1] Z, double[::1] inv_sigma):
    cdef Py_ssize_t n = X.shape[0], p = Z.shape[0], d = X.shape[1]
    cdef Py_ssize_t i, m, j
    cdef double q, r, s
    out_arr = np.empty((n, p), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double sqrt3 = sqrt(3.0), sqrt5 = sqrt(5.0)
    for i in range(n):
        for m in range(p):
            q = 0.0
            if family == LAPLACIAN:
                for j in range(d):
                    q += fabs((X[i, j] - Z[m, j]) * inv_sigma[j])
                out[i, m] = exp(-q)
                continue
            for j in range(d):
                r = (X[i, j] - Z[m, j]) * inv_sigma[j]
                q += r * r
            if family == GAUSSIAN:
                out[i, m] = exp(-0.5 * q)
            elif family == MATERN32:
                s = sqrt(3.0 * q)
                out[i, m] = (1.0 + s) * exp(-s)
            elif family == MATERN52:
                s = sqrt(5.0 * q)
                out[i, m] = (1.0 + s + s * s / 3.0) * exp(-s)
            elif family == RATQUAD2:
                s = 1.0 + q / 4.0
                out[i, m] = 1.0 / (s * s)
            elif family == RATQUAD5:
                s = 1.0 + q / 10.0
                out[i, m] = 1.0 / (s * s * s * s * s)
            else:
                raise ValueError(f"unknown family code {family}")
    return out_arr


def gaussian_cross_derivs(double[:, ::1] X, double[:, ::1] Z, double[::1] inv_sigma):
    cdef Py_ssize_t n = X.shape[0], p = Z.shape[0], d = X.shape[1]
    cdef Py_ssize_t i, m, j
    cdef double q, r, k
    out_arr = np.empty((n * d, p), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    for i in range(n):
        for m in range(p):
            q = 0.0
            for j in range(d):
                r = (X[i, j] - Z[m, j]) * inv_sigma[j]
                q += r * r
            k = exp(-0.5 * q)
            for j in range(d):
                out[i * d + j, m] = -(X[i, j] - Z[m, j]) * inv_sigma[j] * inv_sigma[j] * k
    return out_arr


def cos_features(double[:, ::1] X, double[:, ::1] W, double[::1] b):
    cdef Py_ssize_t p = W.shape[0]
    phase_arr = np.asarray(X) @ np.asarray(W).T
    cdef double[:, ::1] phase = phase_arr
    cdef Py_ssize_t n = phase.shape[0]
    cdef Py_ssize_t i, m
    cdef double c = sqrt(2.0 / p)
    out_arr = np.empty((n, p), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    for i in range(n):
        for m in range(p):
            out[i, m] = c * cos(phase[i, m] + b[m])
    return out_arr


def cos_feature_derivs(double[:, ::1] X, double[:, ::1] W, double[::1] b):
    cdef Py_ssize_t n = X.shape[0], p = W.shape[0], d = X.shape[1]
    phase_arr = np.asarray(X) @ np.asarray(W).T
    cdef double[:, ::1] phase = phase_arr
    cdef Py_ssize_t i, m, j
    cdef double g
    cdef double c = sqrt(2.0 / p)
    out_arr = np.empty((n * d, p), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    for i in range(n):
        for m in range(p):
            g = -c * sin(phase[i, m] + b[m])
            for j in range(d):
                out[i * d + j, m] = g * W[m, j]
    return out_arr

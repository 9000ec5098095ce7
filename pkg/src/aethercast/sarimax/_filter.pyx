# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Cython Kalman filter kernel: shared covariance recursion, one propagated
state vector per data column. Mirrors _filter_py.filter_columns exactly."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"


def filter_columns(cnp.ndarray[cnp.float64_t, ndim=2] T,
                   cnp.ndarray[cnp.float64_t, ndim=2] RRt,
                   cnp.ndarray[cnp.float64_t, ndim=2] P0,
                   cnp.ndarray[cnp.float64_t, ndim=2] Y):
    cdef Py_ssize_t n = Y.shape[0]
    cdef Py_ssize_t m = Y.shape[1]
    cdef Py_ssize_t r = T.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] nu = np.empty((n, m))
    cdef cnp.ndarray[cnp.float64_t, ndim=1] F = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] P = P0.copy()
    cdef cnp.ndarray[cnp.float64_t, ndim=2] A = np.zeros((r, m))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] TP = np.empty((r, r))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] TA = np.empty((r, m))
    cdef cnp.ndarray[cnp.float64_t, ndim=1] M = np.empty(r)
    cdef double[:, :] Tv = T
    cdef double[:, :] RRtv = RRt
    cdef double[:, :] Pv = P
    cdef double[:, :] Av = A
    cdef double[:, :] TPv = TP
    cdef double[:, :] TAv = TA
    cdef double[:, :] Yv = Y
    cdef double[:, :] nuv = nu
    cdef double[:] Fv = F
    cdef double[:] Mv = M
    cdef Py_ssize_t t, i, j, k
    cdef double f, acc, g

    for t in range(n):
        f = Pv[0, 0]
        Fv[t] = f
        for j in range(m):
            nuv[t, j] = Yv[t, j] - Av[0, j]
        # TP = T @ P ; M = TP[:, 0]
        for i in range(r):
            for j in range(r):
                acc = 0.0
                for k in range(r):
                    acc += Tv[i, k] * Pv[k, j]
                TPv[i, j] = acc
            Mv[i] = TPv[i, 0]
        # TA = T @ A
        for i in range(r):
            for j in range(m):
                acc = 0.0
                for k in range(r):
                    acc += Tv[i, k] * Av[k, j]
                TAv[i, j] = acc
        if f > 0.0:
            for i in range(r):
                g = Mv[i] / f
                for j in range(m):
                    Av[i, j] = TAv[i, j] + g * nuv[t, j]
        else:
            for i in range(r):
                for j in range(m):
                    Av[i, j] = TAv[i, j]
        # P = TP @ T' - M M'/f + RRt, symmetrized
        for i in range(r):
            for j in range(i, r):
                acc = 0.0
                for k in range(r):
                    acc += TPv[i, k] * Tv[j, k]
                if f > 0.0:
                    acc -= Mv[i] * Mv[j] / f
                acc += RRtv[i, j]
                Pv[i, j] = acc
                Pv[j, i] = acc
    return nu, F, A

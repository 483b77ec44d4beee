# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: lattice enumeration and per-element descent.

Mirrors `irsma.kernels._pure` exactly in candidate ordering and tie
handling (lexicographic scan, first strict minimum wins; per-element scan
accepts only strict decreases). See that module for the contract.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "cython"


cdef inline double _sq_abs(double complex z) noexcept:
    return z.real * z.real + z.imag * z.imag


cdef inline double _value_at(const double complex[::1] cq1, const double complex[::1] cq2,
                             double complex hd1, double complex hd2,
                             double a1, double a2,
                             const double complex[::1] table,
                             const long long[::1] levels, Py_ssize_t m) noexcept:
    cdef double complex s1 = hd1
    cdef double complex s2 = hd2
    cdef Py_ssize_t i
    cdef double value = 0.0
    if a1 != 0.0:
        for i in range(m):
            s1 = s1 + cq1[i] * table[levels[i]]
        value += a1 / _sq_abs(s1)
    if a2 != 0.0:
        for i in range(m):
            s2 = s2 + cq2[i] * table[levels[i]]
        value += a2 / _sq_abs(s2)
    return value


def evaluate_levels(levels, table, cq1, cq2, hd1, hd2, a1, a2):
    """Objective at a single level vector (kernel arithmetic)."""
    cdef const long long[::1] lv = np.ascontiguousarray(levels, dtype=np.int64)
    cdef const double complex[::1] c1 = np.ascontiguousarray(cq1, dtype=np.complex128)
    cdef const double complex[::1] c2 = np.ascontiguousarray(cq2, dtype=np.complex128)
    cdef const double complex[::1] tb = np.ascontiguousarray(table, dtype=np.complex128)
    return _value_at(c1, c2, hd1, hd2, a1, a2, tb, lv, lv.shape[0])


def enumerate_weighted_inverse(cq1, cq2, hd1, hd2, a1, a2, num_levels, table):
    """Scan all L^M level vectors; return (best_levels, best_value, evaluations)."""
    cdef const double complex[::1] c1 = np.ascontiguousarray(cq1, dtype=np.complex128)
    cdef const double complex[::1] c2 = np.ascontiguousarray(cq2, dtype=np.complex128)
    cdef const double complex[::1] tb = np.ascontiguousarray(table, dtype=np.complex128)
    cdef double complex h1 = hd1
    cdef double complex h2 = hd2
    cdef double w1 = a1
    cdef double w2 = a2
    cdef Py_ssize_t m = c1.shape[0]
    cdef long long L = num_levels
    cdef long long total = 1
    cdef Py_ssize_t i
    for i in range(m):
        total *= L

    digits_arr = np.zeros(m, dtype=np.int64)
    best_arr = np.zeros(m, dtype=np.int64)
    cdef long long[::1] digits = digits_arr
    cdef long long[::1] best = best_arr

    cdef double best_value = np.inf
    cdef double value
    cdef long long n
    cdef Py_ssize_t col
    for n in range(total):
        value = _value_at(c1, c2, h1, h2, w1, w2, tb, digits, m)
        if value < best_value:
            best_value = value
            best[:] = digits
        # lexicographic odometer: element m-1 is the least significant digit
        col = m - 1
        while col >= 0:
            digits[col] += 1
            if digits[col] < L:
                break
            digits[col] = 0
            col -= 1
    return best_arr, best_value, int(total)


def ao_sweeps(cq1, cq2, hd1, hd2, a1, a2, num_levels, table, start_levels,
              start_value, max_sweeps, rel_tol):
    """Cyclic one-element descent; see the pure twin for semantics."""
    cdef const double complex[::1] c1 = np.ascontiguousarray(cq1, dtype=np.complex128)
    cdef const double complex[::1] c2 = np.ascontiguousarray(cq2, dtype=np.complex128)
    cdef const double complex[::1] tb = np.ascontiguousarray(table, dtype=np.complex128)
    cdef double complex h1 = hd1
    cdef double complex h2 = hd2
    cdef double w1 = a1
    cdef double w2 = a2
    cdef double tol = rel_tol
    cdef Py_ssize_t m = c1.shape[0]
    cdef long long L = num_levels

    levels_arr = np.array(start_levels, dtype=np.int64)
    cdef long long[::1] levels = levels_arr

    cdef double current = start_value
    cdef double before, value, cand_best
    cdef double complex p1, p2, s1, s2
    cdef Py_ssize_t elem, i, sweep
    cdef long long lev, cand_level
    cdef long long evaluations = 0
    trace = []
    for sweep in range(max_sweeps):
        before = current
        for elem in range(m):
            p1 = h1
            p2 = h2
            for i in range(m):
                if i != elem:
                    p1 = p1 + c1[i] * tb[levels[i]]
                    p2 = p2 + c2[i] * tb[levels[i]]
            cand_best = np.inf
            cand_level = levels[elem]
            for lev in range(L):
                value = 0.0
                if w1 != 0.0:
                    s1 = p1 + c1[elem] * tb[lev]
                    value += w1 / _sq_abs(s1)
                if w2 != 0.0:
                    s2 = p2 + c2[elem] * tb[lev]
                    value += w2 / _sq_abs(s2)
                if value < cand_best:
                    cand_best = value
                    cand_level = lev
            evaluations += L
            # mirror of the pure twin: the incumbent level never "improves"
            if cand_level != levels[elem] and cand_best < current:
                levels[elem] = cand_level
                current = cand_best
        trace.append(current)
        if before - current <= tol * before:
            break
    return levels_arr, trace, int(evaluations)

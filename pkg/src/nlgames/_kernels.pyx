# cython: language_level=3
"""Compiled versions of the hot loops in ``_kernels_py``."""
import numpy as np
from libc.math cimport cos, sin, sqrt



def payoff_block(const signed char[:] table_flat, const long long[:] x_index,
                 const long long[:, :] input_digits, const long long[:] offsets,
                 long long start, long long stop):
    cdef Py_ssize_t n_in = x_index.shape[0]
    cdef Py_ssize_t n = input_digits.shape[1]
    out = np.empty((stop - start, n_in), dtype=np.int8)
    cdef signed char[:, :] o = out
    cdef long long code, a_idx
    cdef Py_ssize_t j, i
    with nogil:
        for code in range(start, stop):
            for j in range(n_in):
                a_idx = 0
                for i in range(n):
                    a_idx = (a_idx << 1) | ((code >> (offsets[i] + input_digits[j, i])) & 1)
                o[code - start, j] = table_flat[(x_index[j] << n) + a_idx]
    return out


def best_response(const signed char[:] table_flat, const long long[:] x_index,
                  const long long[:, :] input_digits, const long long[:] offsets,
                  const long long[:] weights, long long start, long long stop):
    cdef Py_ssize_t n_in = x_index.shape[0]
    cdef Py_ssize_t n = input_digits.shape[1]
    cdef long long code, a_idx, score
    cdef long long best_code = -1
    cdef long long best_score = 0
    cdef Py_ssize_t j, i
    with nogil:
        for code in range(start, stop):
            score = 0
            for j in range(n_in):
                a_idx = 0
                for i in range(n):
                    a_idx = (a_idx << 1) | ((code >> (offsets[i] + input_digits[j, i])) & 1)
                score += weights[j] * table_flat[(x_index[j] << n) + a_idx]
            if best_code < 0 or score > best_score:
                best_code = code
                best_score = score
    return best_code, best_score


def circle_moduli(coeffs, thetas):
    c = np.asarray(coeffs, dtype=np.complex128)
    cdef const double[:] re = np.ascontiguousarray(c.real)
    cdef const double[:] im = np.ascontiguousarray(c.imag)
    cdef const double[:] th = np.ascontiguousarray(thetas, dtype=np.float64)
    out = np.empty(th.shape[0])
    cdef double[:] o = out
    cdef Py_ssize_t t, k
    cdef Py_ssize_t deg = re.shape[0] - 1
    cdef double zr, zi, ar, ai, tmp
    with nogil:
        for t in range(th.shape[0]):
            zr = cos(th[t])
            zi = sin(th[t])
            ar = re[deg]
            ai = im[deg]
            for k in range(deg - 1, -1, -1):
                tmp = ar * zr - ai * zi + re[k]
                ai = ar * zi + ai * zr + im[k]
                ar = tmp
            o[t] = sqrt(ar * ar + ai * ai)
    return out

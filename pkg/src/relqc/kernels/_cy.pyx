# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled state-vector kernels; same contract as ``relqc.kernels._py``."""
import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef double SQRT1_2 = 0.7071067811865475244


cdef inline Py_ssize_t _bit(int n, int q):
    return (<Py_ssize_t>1) << (n - 1 - q)


def apply_pauli(cnp.ndarray state, int n, int target, int z, int x):
    cdef double complex[::1] src = np.ascontiguousarray(state, dtype=np.complex128)
    cdef cnp.ndarray out = np.empty(src.shape[0], dtype=np.complex128)
    cdef double complex[::1] dst = out
    cdef Py_ssize_t size = src.shape[0]
    cdef Py_ssize_t mask = _bit(n, target)
    cdef Py_ssize_t i, j
    for i in range(size):
        # (Z^z X^x psi)[i] = (-1)^{z b_i} psi[i ^ (x * mask)]
        j = i ^ mask if x else i
        if z and (i & mask):
            dst[i] = -src[j]
        else:
            dst[i] = src[j]
    return out


def bell_project(cnp.ndarray state, int n, int q1, int q2, int m, int nb):
    cdef double complex[::1] src = np.ascontiguousarray(state, dtype=np.complex128)
    cdef Py_ssize_t size = src.shape[0]
    cdef cnp.ndarray out = np.zeros(size, dtype=np.complex128)
    cdef double complex[::1] dst = out
    cdef Py_ssize_t b1 = _bit(n, q1)
    cdef Py_ssize_t b2 = _bit(n, q2)
    cdef Py_ssize_t i, i0, i1
    cdef double sign = -1.0 if m else 1.0
    cdef double complex c
    for i in range(size):
        if i & b1 or i & b2:
            continue
        # i has q1 = q2 = 0; the Bell components are (0, nb) and (1, 1 - nb)
        i0 = i | (b2 if nb else 0)
        i1 = i | b1 | (0 if nb else b2)
        c = SQRT1_2 * (src[i0] + sign * src[i1])
        dst[i0] = SQRT1_2 * c
        dst[i1] = sign * SQRT1_2 * c
    return out


def basis_project(cnp.ndarray state, int n, int q, int basis, int outcome):
    cdef double complex[::1] src = np.ascontiguousarray(state, dtype=np.complex128)
    cdef Py_ssize_t size = src.shape[0]
    cdef cnp.ndarray out = np.zeros(size, dtype=np.complex128)
    cdef double complex[::1] dst = out
    cdef Py_ssize_t mask = _bit(n, q)
    cdef Py_ssize_t i
    cdef double sign = -1.0 if outcome else 1.0
    cdef double complex c
    for i in range(size):
        if i & mask:
            continue
        if basis == 0:
            if outcome:
                dst[i | mask] = src[i | mask]
            else:
                dst[i] = src[i]
        else:
            c = 0.5 * (src[i] + sign * src[i | mask])
            dst[i] = c
            dst[i | mask] = sign * c
    return out

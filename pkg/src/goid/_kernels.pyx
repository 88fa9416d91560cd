# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernels: exact int64 matrix products and the monotone-table scan."""

import numpy as np
cimport numpy as cnp
from cpython.mem cimport PyMem_Free, PyMem_Malloc

cnp.import_array()


cdef extern from *:
    """
    static inline int goid_mul_ovf(long long a, long long b, long long *out) {
        return __builtin_smulll_overflow(a, b, out);
    }
    static inline int goid_add_ovf(long long a, long long b, long long *out) {
        return __builtin_saddll_overflow(a, b, out);
    }
    """
    int goid_mul_ovf(long long a, long long b, long long *out) nogil
    int goid_add_ovf(long long a, long long b, long long *out) nogil


def int_matmul(a, b):
    """Exact product of two int64 matrices; raises OverflowError on overflow."""
    cdef cnp.int64_t[:, ::1] A = np.ascontiguousarray(a, dtype=np.int64)
    cdef cnp.int64_t[:, ::1] B = np.ascontiguousarray(b, dtype=np.int64)
    cdef Py_ssize_t n = A.shape[0], m = A.shape[1], p = B.shape[1]
    if B.shape[0] != m:
        raise ValueError("shape mismatch")
    out = np.zeros((n, p), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] C = out
    cdef Py_ssize_t i, j, k
    cdef long long aik, prod, acc
    cdef int bad = 0
    with nogil:
        for i in range(n):
            for k in range(m):
                aik = A[i, k]
                if aik == 0:
                    continue
                for j in range(p):
                    if B[k, j] == 0:
                        continue
                    if goid_mul_ovf(aik, B[k, j], &prod):
                        bad = 1
                        break
                    if goid_add_ovf(C[i, j], prod, &acc):
                        bad = 1
                        break
                    C[i, j] = acc
                if bad:
                    break
            if bad:
                break
    if bad:
        raise OverflowError("int64 overflow in exact product")
    return out


def monotone_scan(int n, int vmax):
    """Scan strictly increasing tables phi(1..n) with values in 1..vmax.

    Returns ``(total, surjective, stabilized)`` where ``stabilized`` lists the
    tables whose last three or more values form a geometric progression.
    """
    if n < 1 or vmax < n:
        return 0, 0, []
    cdef long long *phi = <long long *> PyMem_Malloc(n * sizeof(long long))
    if phi == NULL:
        raise MemoryError()
    cdef long long total = 0, surj = 0
    cdef int i, j, tail, onto
    stabilized = []
    try:
        for i in range(n):
            phi[i] = i + 1
        while True:
            total += 1
            onto = 1
            for i in range(n):
                if phi[i] != i + 1:
                    onto = 0
                    break
            surj += onto
            tail = 2
            i = n - 2
            while i >= 1 and phi[i + 1] * phi[i - 1] == phi[i] * phi[i]:
                tail += 1
                i -= 1
            if n >= 3 and tail >= 3:
                stabilized.append(tuple([phi[j] for j in range(n)]))
            # next combination in lexicographic order
            i = n - 1
            while i >= 0 and phi[i] == vmax - (n - 1 - i):
                i -= 1
            if i < 0:
                break
            phi[i] += 1
            for j in range(i + 1, n):
                phi[j] = phi[j - 1] + 1
    finally:
        PyMem_Free(phi)
    return total, surj, stabilized

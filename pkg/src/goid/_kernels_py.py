"""Pure-Python versions of the compiled kernels, with identical results."""

from itertools import combinations

import numpy as np

_INT64_MAX = 2**63 - 1


def int_matmul(a, b):
    """Exact product of two int64 matrices; raises OverflowError on overflow."""
    A = np.asarray(a, dtype=np.int64)
    B = np.asarray(b, dtype=np.int64)
    if A.shape[1] != B.shape[0]:
        raise ValueError("shape mismatch")
    amax = int(np.abs(A).max()) if A.size else 0
    bmax = int(np.abs(B).max()) if B.size else 0
    if amax * bmax * max(A.shape[1], 1) <= _INT64_MAX:
        return A @ B
    exact = A.astype(object) @ B.astype(object)
    if exact.size and max(abs(int(v)) for v in exact.flat) > _INT64_MAX:
        raise OverflowError("int64 overflow in exact product")
    return exact.astype(np.int64)


def monotone_scan(n, vmax):
    """Scan strictly increasing tables phi(1..n) with values in 1..vmax."""
    if n < 1 or vmax < n:
        return 0, 0, []
    total = surj = 0
    stabilized = []
    ident = tuple(range(1, n + 1))
    for phi in combinations(range(1, vmax + 1), n):
        total += 1
        if phi == ident:
            surj += 1
        tail = 2
        i = n - 2
        while i >= 1 and phi[i + 1] * phi[i - 1] == phi[i] * phi[i]:
            tail += 1
            i -= 1
        if n >= 3 and tail >= 3:
            stabilized.append(phi)
    return total, surj, stabilized

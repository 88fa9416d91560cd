"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``GOID_PURE_PYTHON=1`` to force the fallback.  Both backends return the
same values; ``int_matmul`` may raise OverflowError in either, and callers
then redo the product with Python integers.
"""

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("GOID_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        _impl = _compiled
        BACKEND = "compiled"

int_matmul = _impl.int_matmul
monotone_scan = _impl.monotone_scan


def exact_matmul(a, b):
    """Exact integer product, staying in int64 when it fits."""
    import numpy as np

    if a.dtype != object and b.dtype != object:
        try:
            return int_matmul(a, b)
        except OverflowError:
            pass
    return np.asarray(a, dtype=object) @ np.asarray(b, dtype=object)

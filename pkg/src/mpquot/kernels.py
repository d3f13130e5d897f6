"""Kernel backend selection.

The compiled extension is preferred; the pure-numpy module is the fallback.
Both expose ``inv_power_sums`` with identical semantics, so everything above
this layer is backend-agnostic.
"""

import os

import numpy as np

try:
    from . import _kernels as _impl

    _BACKEND = "compiled"
except ImportError:
    from . import _kernels_py as _impl

    _BACKEND = "python"


def backend_name() -> str:
    """Which kernel implementation was selected at import: 'compiled' or 'python'."""
    return _BACKEND


def thread_count() -> int:
    """Worker cap for parallel sample evaluation; MPQ_THREADS overrides."""
    env = os.environ.get("MPQ_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            return 1
    return min(8, os.cpu_count() or 1)


def inv_power_sums(points, centers, weights=None, power=1):
    """sums[i] = sum_j w[j] / |points[i] - centers[j]|**power, plus nearest distances.

    Terms are accumulated in ascending order of magnitude. Distances of zero
    produce an inf sum (callers decide whether that is an error).
    """
    X = np.ascontiguousarray(points, dtype=np.float64)
    C = np.ascontiguousarray(centers, dtype=np.float64)
    if X.ndim != 2 or C.ndim != 2:
        raise ValueError("points and centers must be 2-d arrays")
    if weights is None:
        w = np.ones(C.shape[0], dtype=np.float64)
    else:
        w = np.ascontiguousarray(weights, dtype=np.float64)
    return _impl.inv_power_sums(X, C, w, int(power))

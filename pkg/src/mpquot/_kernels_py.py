"""Pure-numpy implementation of the hot kernel.

Same contract as the compiled extension ``mpquot._kernels``; used as the
fallback when the extension is not built.
"""

import numpy as np

# Rows per chunk are bounded so the (rows, centers) temporaries stay small.
_CHUNK_BUDGET = 4_000_000


def inv_power_sums(points, centers, weights, power):
    """Weighted inverse-power distance sums with ordered accumulation.

    sums[i] = sum_j weights[j] / |points[i] - centers[j]|**power, the terms
    added in ascending order of magnitude; nearest[i] = min_j |points[i] - centers[j]|.
    """
    m = points.shape[0]
    k = centers.shape[0]
    sums = np.zeros(m, dtype=np.float64)
    nearest = np.full(m, np.inf, dtype=np.float64)
    if m == 0 or k == 0:
        return sums, nearest
    if centers.shape[1] != points.shape[1]:
        raise ValueError("points and centers disagree on dimension")
    if weights.shape[0] != k:
        raise ValueError("weights length mismatch")
    step = max(1, _CHUNK_BUDGET // (k * points.shape[1]))
    for a in range(0, m, step):
        block = points[a:a + step]
        diff = block[:, None, :] - centers[None, :, :]
        dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
        nearest[a:a + step] = dist.min(axis=1)
        with np.errstate(divide="ignore"):
            terms = weights[None, :] / dist ** power
        terms.sort(axis=1)
        sums[a:a + step] = terms.sum(axis=1)
    return sums, nearest

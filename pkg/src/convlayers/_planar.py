"""Compiled monotone-chain kernels for planar peeling.

Points are passed pre-sorted by (x, y).  A point is kept on a chain only if
it lies more than ``eps`` (Euclidean) to the left of the line through its
chain neighbours, so points on hull edges are not vertices.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _chain_marks(xs, ys, order, m, eps, stack, mark):
    # Lower chain over order[0..m), then upper chain in reverse.
    for direction in range(2):
        top = 0
        for t in range(m):
            j = order[t] if direction == 0 else order[m - 1 - t]
            while top >= 2:
                a = stack[top - 2]
                b = stack[top - 1]
                ex = xs[j] - xs[a]
                ey = ys[j] - ys[a]
                # Counter-clockwise turn a -> b -> j, scaled by |j - a|.
                turn = (xs[b] - xs[a]) * ey - (ys[b] - ys[a]) * ex
                if turn <= eps * np.sqrt(ex * ex + ey * ey):
                    top -= 1
                else:
                    break
            stack[top] = j
            top += 1
        for t in range(top):
            mark[stack[t]] = True


@njit(cache=True)
def extreme_mask_sorted(xs, ys, eps):
    """Vertex mask for points already sorted by (x, y)."""
    n = xs.shape[0]
    mark = np.zeros(n, dtype=np.bool_)
    if n <= 2:
        mark[:] = True
        return mark
    order = np.arange(n)
    stack = np.empty(n, dtype=np.int64)
    _chain_marks(xs, ys, order, n, eps, stack, mark)
    return mark


@njit(cache=True)
def peel_sorted(xs, ys, eps):
    """Layer index (1-based) of every point; points sorted by (x, y)."""
    n = xs.shape[0]
    depth = np.zeros(n, dtype=np.int64)
    alive = np.arange(n)
    m = n
    stack = np.empty(n, dtype=np.int64)
    mark = np.zeros(n, dtype=np.bool_)
    layer = 0
    while m > 0:
        layer += 1
        if m <= 2:
            for t in range(m):
                depth[alive[t]] = layer
            break
        _chain_marks(xs, ys, alive, m, eps, stack, mark)
        k = 0
        for t in range(m):
            j = alive[t]
            if mark[j]:
                depth[j] = layer
                mark[j] = False
            else:
                alive[k] = j
                k += 1
        m = k
    return depth

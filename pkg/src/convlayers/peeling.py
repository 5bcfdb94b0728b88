"""Extreme points and the convex peeling process.

A point is extreme when its L-infinity distance to the convex hull of the
other points exceeds ``eps``.  Points on a hull facet that are not vertices
are therefore kept for a later round.

Three interchangeable vertex tests are provided:

``"lp"``
    one linear program per point against all other points.
``"hull"``
    Qhull proposes candidates; each is confirmed by a separating direction
    built from its incident facet normals, and by a linear program against
    the other candidates when that certificate is inconclusive.
``"oracle"``
    planar only; a pure-Python monotone chain with a strict-turn filter.

``peel(method="auto")`` uses a compiled planar chain in d = 2, direct
sorting in d = 1 and ``"hull"`` otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, QhullError

from . import _planar
from .geom import EPS_GEOM, GeometryError, as_points, check_distinct

MAX_DIM = 8


@dataclass
class Layering:
    """Convex layers of a point set, outermost first.

    ``layers[k]`` holds the sorted indices removed in round ``k + 1``;
    ``depths[i]`` is the (1-based) round in which point ``i`` was removed.
    """

    layers: list[np.ndarray]
    depths: np.ndarray = field(repr=False)

    @property
    def count(self) -> int:
        return len(self.layers)

    @property
    def sizes(self) -> list[int]:
        return [len(layer) for layer in self.layers]

    @classmethod
    def from_depths(cls, depths: np.ndarray) -> "Layering":
        depths = np.asarray(depths, dtype=np.int64)
        if len(depths) == 0:
            return cls([], depths)
        order = np.argsort(depths, kind="stable")
        bounds = np.searchsorted(depths[order], np.arange(1, depths.max() + 2))
        layers = [np.sort(order[bounds[k]:bounds[k + 1]])
                  for k in range(len(bounds) - 1)]
        return cls(layers, depths)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Layering):
            return NotImplemented
        return np.array_equal(self.depths, other.depths)


def hull_distance_lp(x: np.ndarray, Y: np.ndarray) -> float:
    """L-infinity distance from ``x`` to conv(Y), by linear programming."""
    k, d = Y.shape
    if k == 0:
        return np.inf
    # variables: lambda_1..lambda_k, s ; minimise s
    c = np.zeros(k + 1)
    c[-1] = 1.0
    A_ub = np.block([[Y.T, -np.ones((d, 1))], [-Y.T, -np.ones((d, 1))]])
    b_ub = np.concatenate([x, -x])
    A_eq = np.ones((1, k + 1))
    A_eq[0, -1] = 0.0
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=[1.0],
                  bounds=(0, None), method="highs",
                  options={"primal_feasibility_tolerance": 1e-10,
                           "dual_feasibility_tolerance": 1e-10})
    if res.status != 0:
        raise GeometryError(f"vertex LP failed: {res.message}")
    return float(res.x[-1])


def _extreme_lp(X: np.ndarray, eps: float) -> np.ndarray:
    n = len(X)
    if n <= 1:
        return np.arange(n)
    keep = np.ones(n, dtype=bool)
    out = []
    for i in range(n):
        keep[i] = False
        if hull_distance_lp(X[i], X[keep]) > eps:
            out.append(i)
        keep[i] = True
    return np.asarray(out, dtype=np.int64)


def _affine_reduce(X: np.ndarray, eps: float) -> np.ndarray | None:
    """Coordinates of X in its affine hull, or None if X is full-dimensional.

    The hull is taken with tolerance: every point lies within ``eps`` of the
    returned subspace.
    """
    c = X.mean(axis=0)
    Z = X - c
    _, s, Vt = np.linalg.svd(Z, full_matrices=False)
    d = X.shape[1]
    for r in range(d):
        B = Vt[:r]
        resid = Z - (Z @ B.T) @ B if r else Z
        if np.max(np.abs(resid)) <= eps:
            return Z @ B.T
    return None


def _extreme_line(t: np.ndarray) -> np.ndarray:
    if len(t) == 1:
        return np.array([0])
    lo, hi = int(np.argmin(t)), int(np.argmax(t))
    return np.array(sorted({lo, hi}), dtype=np.int64)


def _extreme_planar(X: np.ndarray, eps: float) -> np.ndarray:
    order = np.lexsort((X[:, 1], X[:, 0]))
    S = X[order]
    mask = _planar.extreme_mask_sorted(np.ascontiguousarray(S[:, 0]),
                                       np.ascontiguousarray(S[:, 1]), eps)
    return np.sort(order[mask])


def _extreme_hull(X: np.ndarray, eps: float) -> np.ndarray:
    n, d = X.shape
    if n <= 2:
        return np.arange(n)
    if d == 1:
        return _extreme_line(X[:, 0])
    Z = _affine_reduce(X, eps)
    if Z is not None:
        if Z.shape[1] == 0:
            return np.arange(n)
        return _extreme_hull(Z, eps)
    try:
        hull = ConvexHull(X)
    except QhullError:
        return _extreme_lp(X, eps)
    cand = np.asarray(hull.vertices, dtype=np.int64)
    simplices = hull.simplices
    # Sum of incident facet normals lies inside the normal cone at a vertex.
    U = np.zeros((n, d))
    normals = hull.equations[:, :d]
    for col in range(simplices.shape[1]):
        np.add.at(U, simplices[:, col], normals)
    U /= np.maximum(np.abs(U).sum(axis=1, keepdims=True), 1e-300)
    # The runner-up vertex for a linear functional is adjacent to the maximiser,
    # so comparing against hull-graph neighbours bounds the margin.
    a = np.concatenate([simplices[:, i] for i in range(d) for j in range(d) if i != j])
    b = np.concatenate([simplices[:, j] for i in range(d) for j in range(d) if i != j])
    gap = np.einsum("ij,ij->i", U[a], X[a] - X[b])
    margin = np.full(n, np.inf)
    np.minimum.at(margin, a, gap)
    keep = margin[cand] > eps
    if not keep.all():
        P = X[cand]
        for j in np.flatnonzero(~keep):
            keep[j] = hull_distance_lp(P[j], np.delete(P, j, axis=0)) > eps
    return np.sort(cand[keep])


def extreme_points(X, eps: float = EPS_GEOM, method: str = "hull") -> np.ndarray:
    """Indices of the vertices of conv(X)."""
    X = as_points(X)
    if len(X) == 0:
        raise GeometryError("extreme points of an empty set")
    if X.shape[1] > MAX_DIM:
        raise GeometryError(f"dimension {X.shape[1]} exceeds the supported {MAX_DIM}")
    check_distinct(X)
    if method == "lp":
        return _extreme_lp(X, eps)
    if method == "hull":
        return _extreme_hull(X, eps)
    if method == "oracle":
        return extreme_points_2d_oracle(X, eps)
    raise GeometryError(f"unknown method {method!r}")


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def extreme_points_2d_oracle(X, eps: float = EPS_GEOM) -> np.ndarray:
    """Planar hull vertices by Andrew's monotone chain.

    Independent of the LP and Qhull paths; used to cross-check them.
    """
    X = as_points(X)
    if X.shape[1] != 2:
        raise GeometryError("the planar oracle needs dim = 2")
    pts = sorted((float(x), float(y), i) for i, (x, y) in enumerate(X))
    if len(pts) <= 2:
        return np.asarray(sorted(p[2] for p in pts), dtype=np.int64)

    def chain(seq):
        h = []
        for p in seq:
            while len(h) >= 2:
                o, a = h[-2], h[-1]
                span = ((p[0] - o[0]) ** 2 + (p[1] - o[1]) ** 2) ** 0.5
                if _cross(o, a, p) <= eps * span:
                    h.pop()
                else:
                    break
            h.append(p)
        return h

    verts = {p[2] for p in chain(pts)} | {p[2] for p in chain(reversed(pts))}
    return np.asarray(sorted(verts), dtype=np.int64)


def peel(X, eps: float = EPS_GEOM, method: str = "auto") -> Layering:
    """Peel X to the empty set, one round of extreme points at a time."""
    X = as_points(X)
    n, d = X.shape
    if n == 0:
        raise GeometryError("cannot peel an empty set")
    if d > MAX_DIM:
        raise GeometryError(f"dimension {d} exceeds the supported {MAX_DIM}")
    check_distinct(X)

    if d == 1 and method in ("auto", "hull"):
        order = np.argsort(X[:, 0], kind="stable")
        rank = np.empty(n, dtype=np.int64)
        rank[order] = np.arange(n)
        return Layering.from_depths(np.minimum(rank, n - 1 - rank) + 1)

    if d == 2 and method == "auto":
        order = np.lexsort((X[:, 1], X[:, 0]))
        S = X[order]
        depth_sorted = _planar.peel_sorted(np.ascontiguousarray(S[:, 0]),
                                           np.ascontiguousarray(S[:, 1]), eps)
        depths = np.empty(n, dtype=np.int64)
        depths[order] = depth_sorted
        return Layering.from_depths(depths)

    if method == "auto":
        method = "hull"
    depths = np.zeros(n, dtype=np.int64)
    alive = np.arange(n)
    layer = 0
    while len(alive):
        layer += 1
        ext = extreme_points(X[alive], eps, method)
        if len(ext) == 0:  # pragma: no cover - a nonempty set has a vertex
            raise GeometryError("no extreme point found; eps too large?")
        depths[alive[ext]] = layer
        alive = np.delete(alive, ext)
    return Layering.from_depths(depths)


def layer_number(X, eps: float = EPS_GEOM, method: str = "auto") -> int:
    """Number of peeling rounds; 0 for an empty set."""
    X = np.asarray(X, dtype=float)
    if X.size == 0:
        return 0
    return peel(X, eps, method).count

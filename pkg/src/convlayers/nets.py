"""Maximal delta-separated sets on spheres (and hence delta-nets)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError, cKDTree

from .geom import EPS_GEOM, GeometryError, make_rng, min_distance, unit_vectors

# Residual uncovered fraction targeted by the rejection phase.
RESIDUAL_AREA = 1e-4
BATCH = 4096


@dataclass(frozen=True)
class SphereNet:
    dim: int
    radius: float
    delta: float
    points: np.ndarray
    seed: int

    @property
    def size(self) -> int:
        return len(self.points)

    def sidecar(self) -> dict:
        return {"dim": self.dim, "radius": self.radius, "delta": self.delta,
                "seed": self.seed, "size": self.size}


def rejection_limit(d: int, delta: float, scale: float = 1.0) -> int:
    """Consecutive rejections that end the greedy phase."""
    return math.ceil(scale * delta ** -(d - 1) * math.log(1 / RESIDUAL_AREA))


def _greedy_extend(cand: np.ndarray, delta: float, tree: cKDTree | None) -> np.ndarray:
    """Acceptance flags for ``cand`` processed in order against ``tree``'s points.

    Equivalent to inserting candidates one at a time: the first survivor is
    always accepted, and every later survivor closer than delta to it is
    rejected.
    """
    ok = np.ones(len(cand), dtype=bool)
    if tree is not None:
        dist, _ = tree.query(cand, k=1)
        ok = dist >= delta
    rest = np.flatnonzero(ok)
    ok[:] = False
    while len(rest):
        head = rest[0]
        ok[head] = True
        rest = rest[1:]
        if len(rest):
            gap = np.linalg.norm(cand[rest] - cand[head], axis=1)
            rest = rest[gap >= delta]
    return ok


def _deep_holes(pts: np.ndarray, delta: float) -> np.ndarray:
    """Sphere points at distance >= delta from every point of ``pts``.

    The points farthest from a set on the unit sphere are its spherical
    Voronoi vertices, i.e. the outer unit normals of the hull facets; a facet
    at offset b is at distance sqrt(2 - 2b) from its own vertices, which are
    the nearest points of the set.
    """
    try:
        hull = ConvexHull(pts)
    except QhullError:
        return np.empty((0, pts.shape[1]))
    normals = hull.equations[:, :-1]
    offset = -hull.equations[:, -1]
    far = np.sqrt(np.maximum(2.0 - 2.0 * offset, 0.0)) >= delta
    return normals[far] / np.linalg.norm(normals[far], axis=1, keepdims=True)


def maximal_separated_net(d: int, radius: float, delta: float, seed: int) -> SphereNet:
    """Greedy maximal delta-separated set on the sphere of the given radius.

    Uniform candidates are inserted when they keep the set delta-separated,
    until a run of consecutive rejections long enough to leave roughly
    ``RESIDUAL_AREA`` of the sphere uncovered.  A completion pass then inserts
    the remaining deep holes (points at distance >= delta from the set, found
    exactly from the hull facets) until there are none, so the result is
    maximal.
    """
    if d < 1:
        raise GeometryError("dimension must be >= 1")
    if not radius > 0:
        raise GeometryError("radius must be positive")
    if not delta > 0:
        raise GeometryError("delta must be positive")
    rng = make_rng(seed, d)
    if d == 1:
        pts = np.array([[-radius], [radius]])
        return SphereNet(d, radius, delta, pts, seed)
    if delta >= 2 * radius:
        p = unit_vectors(rng, 1, d)[0]
        return SphereNet(d, radius, delta, radius * np.vstack([p, -p]), seed)

    dl = delta / radius
    limit = rejection_limit(d, dl)
    pts = unit_vectors(rng, 1, d)
    run = 0
    while run < limit:
        cand = unit_vectors(rng, BATCH, d)
        ok = _greedy_extend(cand, dl, cKDTree(pts))
        # Truncate where the consecutive-rejection run reaches the limit.
        stop = len(cand)
        r = run
        for t in range(len(cand)):
            if ok[t]:
                r = 0
            else:
                r += 1
                if r >= limit:
                    stop = t + 1
                    break
        run = r
        if stop < len(cand):
            ok[stop:] = False
        if ok.any():
            pts = np.vstack([pts, cand[ok]])

    for _ in range(10_000):
        holes = _deep_holes(pts, dl)
        if len(holes) == 0:
            break
        holes = holes[np.lexsort(holes.T[::-1])]
        ok = _greedy_extend(holes, dl, cKDTree(pts))
        if not ok.any():
            break
        pts = np.vstack([pts, holes[ok]])
    else:  # pragma: no cover
        raise GeometryError("net completion did not converge")
    return SphereNet(d, radius, delta, radius * pts, seed)


def is_delta_net(net: SphereNet, samples: int = 10_000, seed: int = 0) -> float:
    """Worst (nearest-net-point distance - delta) over uniform sphere samples.

    Negative means every sample was strictly within delta of the net.
    """
    if samples < 1:
        raise GeometryError("samples must be >= 1")
    rng = make_rng(seed, net.dim, 7)
    Y = net.radius * unit_vectors(rng, samples, net.dim)
    dist, _ = cKDTree(net.points).query(Y, k=1)
    return float(dist.max() - net.delta)


def cardinality_ratio(net: SphereNet) -> float:
    return net.size * (net.delta / net.radius) ** (net.dim - 1)


def check_net(net: SphereNet, eps: float = EPS_GEOM) -> dict:
    """Separation and on-sphere diagnostics of a generated net."""
    norms = np.linalg.norm(net.points, axis=1)
    mu = min_distance(net.points) if net.size > 1 else math.inf
    return {
        "size": net.size,
        "min_distance": mu,
        "separated": bool(mu >= net.delta - eps) or net.delta >= 2 * net.radius,
        "on_sphere": bool(np.max(np.abs(norms - net.radius)) <= eps),
    }

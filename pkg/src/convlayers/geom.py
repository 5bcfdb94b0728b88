"""Dimension-generic point sets, distances and unit-ball constants."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

EPS_GEOM = 1e-9


class GeometryError(ValueError):
    """Raised for inputs outside an operation's domain."""


class DuplicatePointsError(GeometryError):
    pass


@dataclass(frozen=True)
class BallConstants:
    dim: int
    kappa: float
    surface: float


def ball_constants(d: int) -> BallConstants:
    """Volume of the unit ball and surface area of its boundary sphere."""
    if d < 1:
        raise GeometryError(f"dimension must be >= 1, got {d}")
    kappa = math.pi ** (d / 2) / math.gamma(d / 2 + 1)
    return BallConstants(d, kappa, d * kappa)


def as_points(X, dim: int | None = None) -> np.ndarray:
    """Coerce ``X`` to a float (n, d) array and validate it.

    A 1-D sequence is read as n points on the line.
    """
    arr = np.asarray(X, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise GeometryError(f"expected an (n, d) array, got shape {arr.shape}")
    if dim is not None and arr.shape[1] != dim:
        raise GeometryError(f"expected dimension {dim}, got {arr.shape[1]}")
    if arr.shape[1] < 1:
        raise GeometryError("dimension must be >= 1")
    if not np.all(np.isfinite(arr)):
        raise GeometryError("non-finite coordinates")
    return arr


def check_distinct(X: np.ndarray) -> None:
    if len(X) < 2:
        return
    order = np.lexsort(X.T[::-1])
    S = X[order]
    same = np.all(S[1:] == S[:-1], axis=1)
    if same.any():
        k = int(np.flatnonzero(same)[0])
        raise DuplicatePointsError(
            f"coincident points at indices {int(order[k])} and {int(order[k + 1])}"
        )


def _sqdist(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    # Summed coordinate by coordinate so that the brute-force and bucketed
    # paths round identically.
    out = (A[..., 0] - B[..., 0]) ** 2
    for k in range(1, A.shape[-1]):
        out = out + (A[..., k] - B[..., k]) ** 2
    return out


def min_distance_brute(X) -> float:
    X = as_points(X)
    n = len(X)
    if n < 2:
        raise GeometryError("minimum distance needs at least two points")
    best = math.inf
    for i in range(n - 1):
        best = min(best, float(_sqdist(X[i + 1:], X[i]).min()))
    return math.sqrt(best)


def min_distance(X, method: str = "grid") -> float:
    """Minimum pairwise Euclidean distance mu(X).

    ``method="grid"`` buckets points into cells whose side is an upper bound
    on the answer, so only neighbouring cells need comparing.  The result is
    bit-identical to ``method="brute"``.
    """
    X = as_points(X)
    n = len(X)
    if n < 2:
        raise GeometryError("minimum distance needs at least two points")
    if method == "brute" or n <= 64:
        return min_distance_brute(X)
    if method != "grid":
        raise GeometryError(f"unknown method {method!r}")

    order = np.lexsort(X.T[::-1])
    S = X[order]
    upper = float(_sqdist(S[1:], S[:-1]).min())
    if upper == 0.0:
        return 0.0
    h = math.sqrt(upper)
    d = X.shape[1]
    keys = np.floor((X - X.min(axis=0)) / h).astype(np.int64)
    cells: dict[tuple, list[int]] = {}
    for i, key in enumerate(map(tuple, keys)):
        cells.setdefault(key, []).append(i)
    cells_np = {k: np.asarray(v) for k, v in cells.items()}

    # Half of the neighbour offsets; the other half is covered by symmetry.
    offsets = [o for o in product((-1, 0, 1), repeat=d) if o > (0,) * d]
    best = upper
    for key, idx in cells_np.items():
        P = X[idx]
        if len(idx) > 1:
            D = _sqdist(P[:, None, :], P[None, :, :])
            iu = np.triu_indices(len(idx), 1)
            best = min(best, float(D[iu].min()))
        for off in offsets:
            other = cells_np.get(tuple(a + b for a, b in zip(key, off)))
            if other is None:
                continue
            D = _sqdist(P[:, None, :], X[other][None, :, :])
            best = min(best, float(D.min()))
    return math.sqrt(best)


def support_value(X, u, tol: float = 1e-12) -> float:
    """max over x in X of <u, x> for a unit direction u."""
    X = as_points(X)
    u = np.asarray(u, dtype=float).ravel()
    if len(X) == 0:
        raise GeometryError("support value of an empty set")
    if u.shape != (X.shape[1],):
        raise GeometryError("direction has the wrong dimension")
    if abs(np.linalg.norm(u) - 1.0) > tol:
        raise GeometryError("direction must be a unit vector")
    return float((X @ u).max())


def unit_vectors(rng: np.random.Generator, count: int, d: int) -> np.ndarray:
    """Uniform points on S^{d-1} via normalised Gaussians."""
    G = rng.standard_normal((count, d))
    norms = np.linalg.norm(G, axis=1)
    while np.any(norms == 0.0):  # pragma: no cover - probability zero
        bad = norms == 0.0
        G[bad] = rng.standard_normal((int(bad.sum()), d))
        norms = np.linalg.norm(G, axis=1)
    return G / norms[:, None]


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    """Counter-based generator for the stream ``(seed, *keys)``.

    Distinct key paths give independent streams, so sub-generators and sweep
    rows are reproducible on their own.
    """
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.Philox(ss))


def derive_seed(seed: int, *keys: int) -> int:
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, np.uint64)[0] >> np.uint64(1))

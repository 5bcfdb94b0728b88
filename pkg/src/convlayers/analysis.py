"""Measurements on peeled point sets.

Evenness estimates, the outward push onto the sphere, cap counts, the
dimensionless bound ratios recorded per sweep row, log-log exponent fits and
the exact exponent recurrence.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import lsq_linear
from scipy.spatial import cKDTree

from .constructions import ConstructionSpec, build
from .formats import SweepRow
from .geom import EPS_GEOM, GeometryError, as_points, ball_constants, make_rng, min_distance, unit_vectors
from .peeling import extreme_points, peel

FIT_DISCARD = 0.2
CAP_DIRECTIONS = 1_000


@dataclass(frozen=True)
class SweepRecord:
    spec: ConstructionSpec
    n: int
    mu: float
    layers: int
    max_layer: int
    wall_seconds: float

    def __post_init__(self):
        if self.layers < 1 or self.max_layer > self.n or not self.mu > 0:
            raise GeometryError(f"inconsistent sweep record: {self}")

    def to_row(self) -> SweepRow:
        s = self.spec
        return SweepRow(s.kind, s.dim, s.size_param, s.seed, self.n, self.mu,
                        self.layers, self.max_layer, self.wall_seconds)

    @classmethod
    def from_row(cls, row: SweepRow) -> "SweepRecord":
        spec = ConstructionSpec(row.kind, row.dim, row.size_param, row.seed)
        return cls(spec, row.n, row.mu, row.layers, row.max_layer, row.wall_seconds)


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r2: float
    count: int
    discarded_prefix: int = 0

    def to_json(self) -> dict:
        return {"slope": self.slope, "intercept": self.intercept, "r2": self.r2,
                "count": self.count, "discarded_prefix": self.discarded_prefix}


def measure(spec: ConstructionSpec, eps: float = EPS_GEOM) -> SweepRecord:
    """Build, peel and summarise one construction instance."""
    start = time.perf_counter()
    X, _ = build(spec)
    layering = peel(X, eps)
    mu = min_distance(X) if len(X) > 1 else math.inf
    return SweepRecord(spec, len(X), mu, layering.count, max(layering.sizes),
                       time.perf_counter() - start)


# --- evenness ----------------------------------------------------------------

def evenness_alpha(X, samples: int = 1_000, seed: int = 0) -> float:
    """Lower estimate of the evenness constant alpha from random balls.

    Each ball has its centre uniform in the radius-2 ball and radius uniform in
    (0, 1].  A ball holding k points forces ceil(alpha |X| Vol) >= k, that is
    alpha > (k - 1) / (|X| Vol); the estimate is the largest such bound, or 0
    when no sampled ball constrains alpha.
    """
    X = as_points(X)
    if len(X) == 0:
        raise GeometryError("evenness of an empty set")
    if samples < 1:
        raise GeometryError("samples must be >= 1")
    n, d = X.shape
    rng = make_rng(seed, d, 19)
    centers = unit_vectors(rng, samples, d) * (2.0 * rng.random(samples) ** (1.0 / d))[:, None]
    radii = 1.0 - rng.random(samples)  # uniform in (0, 1]
    counts = cKDTree(X).query_ball_point(centers, radii, return_length=True)
    vol = ball_constants(d).kappa * radii ** d
    return float(max(0.0, np.max((counts - 1) / (n * vol))))


# --- outward push ------------------------------------------------------------

def outer_normal(X: np.ndarray, i: int, eps: float = EPS_GEOM) -> np.ndarray:
    """Max-margin outer unit normal of conv X at vertex X[i].

    The shortest w with <w, X[i] - y> >= 1 for every other y is unique, so no
    tie breaking is needed; it is found as a least-distance program reduced
    to one nonnegative least-squares solve.
    """
    G = X[i] - np.delete(X, i, axis=0)
    E = np.vstack([G.T, np.ones((1, len(G)))])
    f = np.zeros(E.shape[0])
    f[-1] = 1.0
    # Bounded-variable least squares; scipy's nnls can stop short of the KKT point.
    lam = lsq_linear(E, f, bounds=(0.0, np.inf), method="bvls", tol=1e-14).x
    r = E @ lam - f
    if abs(r[-1]) <= 1e-15:
        raise GeometryError(f"no outer normal found at index {i}")
    w = -r[:-1] / r[-1]
    u = w / np.linalg.norm(w)
    if np.max(-(G @ u)) > eps:
        raise GeometryError(f"no outer normal found at index {i}")
    return u


def outward_push(X, eps: float = EPS_GEOM) -> np.ndarray:
    """Move every point of a convex-position set in the unit ball onto the sphere.

    Each interior point x moves along an outer normal u of the original hull,
    to the sphere.  Normals are taken on the input set, so moving x and y by
    a u and b v changes |x - y|^2 by
    2a<u, x - y> - 2b<v, x - y> + |a u - b v|^2 >= 0: no distance shrinks,
    whatever the order.
    """
    X = as_points(X)
    n, d = X.shape
    if n < 2:
        raise GeometryError("outward_push needs at least two points")
    if np.max(np.linalg.norm(X, axis=1)) > 1.0 + eps:
        raise GeometryError("points must lie in the unit ball")
    if len(extreme_points(X, eps)) != n:
        raise GeometryError("input is not in convex position")
    out = np.empty_like(X)
    for i in range(n):
        x = X[i]
        r = np.linalg.norm(x)
        if abs(r - 1.0) <= 1e-12:
            out[i] = x / r
            continue
        u = outer_normal(X, i, eps)
        b = float(x @ u)
        lam = -b + math.sqrt(b * b + 1.0 - r * r)
        y = x + lam * u
        out[i] = y / np.linalg.norm(y)
    return out


# --- caps ----------------------------------------------------------------------

def cap_count(X, u, inner_radius: float, outer_radius: float = 1.0) -> int:
    """Points y of X with |y| <= outer_radius and <y, u> >= inner_radius."""
    X = as_points(X)
    u = np.asarray(u, dtype=float).ravel()
    if not 0 < inner_radius < outer_radius:
        raise GeometryError("need 0 < inner_radius < outer_radius")
    inside = np.linalg.norm(X, axis=1) <= outer_radius + EPS_GEOM
    return int(np.count_nonzero(inside & (X @ u >= inner_radius - EPS_GEOM)))


def cap_profile(X, directions: int = CAP_DIRECTIONS, seed: int = 0) -> dict:
    """Sampled largest cap counts for the shells (1 - j/N) B^d, N = floor(n^(2/d)).

    For each shell j the cap of B_{j-1} minus B_j in direction u holds the
    points with |y| <= 1 - (j-1)/N and <y, u> >= 1 - j/N.  The maximum is
    estimated over ``directions`` random directions, so it is a lower bound
    on the true maximum (``sampled`` is always True).
    """
    X = as_points(X)
    n, d = X.shape
    N = max(1, math.floor(n ** (2.0 / d)))
    norms = np.linalg.norm(X, axis=1)
    U = unit_vectors(make_rng(seed, d, 23), directions, d)
    # Shell index range of each point: ceil(N(1 - t)) .. floor(N(1 - |y|)) + 1.
    hi = np.minimum(np.floor(N * (1.0 - norms) + 1e-9).astype(np.int64) + 1, N)
    best = np.zeros(N + 1, dtype=np.int64)
    for u in U:
        t = X @ u
        lo = np.maximum(np.ceil(N * (1.0 - t) - 1e-9).astype(np.int64), 1)
        ok = lo <= hi
        diff = np.zeros(N + 2, dtype=np.int64)
        np.add.at(diff, lo[ok], 1)
        np.add.at(diff, hi[ok] + 1, -1)
        np.maximum(best, np.cumsum(diff)[: N + 1], out=best)
    core = int(np.count_nonzero(norms <= 1.0 - (N - 1) / N + EPS_GEOM)) if N > 1 else n
    return {"N": N, "directions": directions, "sampled": True,
            "max_cap": int(best[1:].max()), "per_shell": best[1:].tolist(),
            "core": core}


# --- bounds and fits ---------------------------------------------------------

def check_bounds(record: SweepRecord) -> dict:
    """Dimensionless ratios L/n^(1/d), L/n^(2/d) and max_layer * mu^(d-1)."""
    d, n = record.spec.dim, record.n
    return {"lower": record.layers / n ** (1.0 / d),
            "upper": record.layers / n ** (2.0 / d),
            "convex": record.max_layer * record.mu ** (d - 1)}


def top_decade(records: list[SweepRecord]) -> list[SweepRecord]:
    """Records whose size is within a factor 10 of the largest, sorted by n."""
    top = max(r.n for r in records)
    return sorted((r for r in records if r.n * 10 >= top), key=lambda r: r.n)


def band_drift(values, direction: str) -> float:
    """Worst adverse drift of a ratio sequence ordered by increasing size.

    ``"lower"``: largest factor by which a later value falls below an earlier
    one (a lower bound should not erode).  ``"upper"``: largest factor by
    which a later value exceeds an earlier one.  ``"both"``: max / min.
    """
    v = np.asarray(values, dtype=float)
    if len(v) == 0 or np.any(v <= 0):
        raise GeometryError("band drift needs positive values")
    if direction == "both":
        return float(v.max() / v.min())
    if direction == "lower":
        return float(max(np.max(np.maximum.accumulate(v) / v), 1.0))
    if direction == "upper":
        return float(max(np.max(v / np.minimum.accumulate(v)), 1.0))
    raise GeometryError(f"unknown direction {direction!r}")


def size_means(records: list[SweepRecord], key) -> tuple[np.ndarray, np.ndarray]:
    """Mean set size and mean ``key(record)`` per size parameter, by increasing size."""
    groups: dict[int, list[SweepRecord]] = {}
    for r in records:
        groups.setdefault(r.spec.size_param, []).append(r)
    order = sorted(groups)
    sizes = np.array([np.mean([r.n for r in groups[s]]) for s in order])
    return sizes, np.array([np.mean([key(r) for r in groups[s]]) for s in order])


def fit_exponent(points, discard: float = FIT_DISCARD) -> FitResult:
    """Least-squares slope of log L against log n.

    The smallest ``discard`` fraction of distinct n values is dropped first,
    as long as at least three points remain.
    """
    P = np.asarray(list(points), dtype=float).reshape(-1, 2)
    if len(P) < 3:
        raise GeometryError("a fit needs at least three points")
    if np.any(P <= 0) or not np.all(np.isfinite(P)):
        raise GeometryError("fit values must be positive and finite")
    if not 0 <= discard < 1:
        raise GeometryError("discard must be in [0, 1)")
    P = P[np.argsort(P[:, 0], kind="stable")]
    distinct = np.unique(P[:, 0])
    drop = int(math.floor(discard * len(distinct)))
    while drop > 0 and np.count_nonzero(P[:, 0] > distinct[drop - 1]) < 3:
        drop -= 1
    if drop:
        P = P[P[:, 0] > distinct[drop - 1]]
    x, y = np.log(P[:, 0]), np.log(P[:, 1])
    if np.ptp(x) == 0:
        raise GeometryError("a fit needs at least two distinct n values")
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - float(np.sum(resid ** 2)) / ss_tot
    return FitResult(float(slope), float(intercept), r2, len(P), len(distinct[:drop]))


def closed_form_exponent(d: int) -> Fraction:
    if d < 1:
        raise GeometryError("dimension must be >= 1")
    return Fraction(2, d) - Fraction(2, d * 2 ** d)


def theoretical_exponent(d: int) -> Fraction:
    """Exponent L_d from 2 d L_d = 2 + (d - 1) L_{d-1}, L_1 = 1.

    Cross-checked against the closed form 2/d - 2/(d 2^d) in exact arithmetic.
    """
    if d < 1:
        raise GeometryError("dimension must be >= 1")
    value = Fraction(1)
    for k in range(2, d + 1):
        value = (2 + (k - 1) * value) / (2 * k)
    if value != closed_form_exponent(d):  # pragma: no cover - identity
        raise ArithmeticError(f"recurrence and closed form disagree at d={d}")
    return value

"""Verification suites shared by the command line and the test-suite.

Every suite returns a JSON-ready report with a list of named checks, each
carrying its measured margin and a ``pass`` flag, plus an overall ``pass``.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial.distance import pdist

from .analysis import SweepRecord, band_drift, check_bounds, outward_push, size_means, top_decade
from .constructions import recursive_family
from .geom import EPS_GEOM, GeometryError, derive_seed, make_rng, unit_vectors
from .nets import cardinality_ratio, check_net, is_delta_net, maximal_separated_net
from .peeling import extreme_points, peel
from .tangent import verify_tangent

SUITES = ("nets", "tangent", "push", "bounds", "shells")
BAND_FACTOR = 2.0


def _check(name: str, value, passed: bool, **extra) -> dict:
    out = {"check": name, "value": value, "pass": bool(passed)}
    out.update(extra)
    return out


def _report(suite: str, params: dict, checks: list[dict]) -> dict:
    return {"suite": suite, "params": params, "checks": checks,
            "pass": all(c["pass"] for c in checks)}


def nets_suite(dim: int, deltas, seed: int = 0, samples: int = 10_000) -> dict:
    """Covering margins of each net and stability of |net| * delta^(d-1)."""
    checks, ratios = [], []
    for delta in deltas:
        net = maximal_separated_net(dim, 1.0, delta, seed)
        margin = is_delta_net(net, samples, seed)
        info = check_net(net)
        ratios.append(cardinality_ratio(net))
        checks.append(_check(f"covering delta={delta}", margin, margin < 0,
                             size=net.size, ratio=ratios[-1]))
        checks.append(_check(f"separated delta={delta}", info["min_distance"],
                             info["separated"] and info["on_sphere"]))
    if len(ratios) > 1:
        drift = band_drift(ratios, "both")
        checks.append(_check("cardinality ratio drift", drift, drift <= BAND_FACTOR))
    return _report("nets", {"dim": dim, "deltas": list(deltas), "seed": seed,
                            "samples": samples}, checks)


def tangent_suite(dim: int, deltas, seed: int = 0) -> dict:
    checks = []
    for delta in deltas:
        net = maximal_separated_net(dim, 1.0, delta, seed)
        for rep in verify_tangent(net, seed=seed):
            checks.append(_check(f"{rep['lemma']} delta={delta}", rep["worst_margin"],
                                 rep["pass"], samples=rep["samples"]))
    return _report("tangent", {"dim": dim, "deltas": list(deltas), "seed": seed}, checks)


def random_convex_instance(rng: np.random.Generator, dim: int, size: int,
                           scale: float = 0.9) -> np.ndarray:
    """Vertices of the hull of ``size`` points at random radii in scale * B^d."""
    P = unit_vectors(rng, size, dim) * rng.uniform(0.3, scale, (size, 1))
    return P[extreme_points(P)]


def push_suite(dims, count: int, seed: int = 0, size: int = 30) -> dict:
    """Outward push on random convex-position instances."""
    worst_norm, worst_dist = 0.0, -np.inf
    total = 0
    for dim in dims:
        rng = make_rng(seed, dim, 29)
        for _ in range(count):
            P = random_convex_instance(rng, dim, size)
            if len(P) < 2:
                continue
            Q = outward_push(P)
            worst_norm = max(worst_norm, float(np.max(np.abs(np.linalg.norm(Q, axis=1) - 1.0))))
            worst_dist = max(worst_dist, float(np.max(pdist(P) - pdist(Q))))
            total += 1
    checks = [_check("unit norm error", worst_norm, worst_norm <= 1e-12),
              _check("largest distance decrease", worst_dist, worst_dist <= EPS_GEOM)]
    return _report("push", {"dims": list(dims), "count": count, "seed": seed,
                            "instances": total}, checks)


def band_report(records: list[SweepRecord], convex_band: bool = True) -> dict:
    """Band stability of the bound ratios of one family sweep.

    Over the top size decade the lower ratio L/n^(1/d) may not erode, and the
    upper ratio L/n^(2/d) may not grow, by more than a factor 2.  Optionally
    max_layer * mu^(d-1), which is bounded above for separated sets in convex
    position, may not grow by more than a factor 2 over the whole sweep.
    """
    checks = []
    top = top_decade(records)
    for key, direction in (("lower", "lower"), ("upper", "upper")):
        _, vals = size_means(top, lambda r, k=key: check_bounds(r)[k])
        drift = band_drift(vals, direction)
        checks.append(_check(f"{key} ratio drift", drift, drift <= BAND_FACTOR,
                             min=float(vals.min()), max=float(vals.max())))
    if convex_band:
        _, vals = size_means(records, lambda r: check_bounds(r)["convex"])
        drift = band_drift(vals, "upper")
        checks.append(_check("max_layer*mu^(d-1) drift", drift, drift <= BAND_FACTOR,
                             min=float(vals.min()), max=float(vals.max())))
    spec = records[0].spec
    return _report("bounds", {"kind": spec.kind, "dim": spec.dim,
                              "sizes": sorted({r.spec.size_param for r in records})}, checks)


def shells_suite(dim: int, n: int, seed: int = 0, eps: float = EPS_GEOM) -> dict:
    """Peel a recursive member and check the shell-by-shell layer count."""
    if dim < 2:
        raise GeometryError("shells suite needs dim >= 2")
    X, trace = recursive_family(dim, n, seed)
    top = trace.top
    layering = peel(X, eps)
    child, _ = recursive_family(dim - 1, top.m, derive_seed(seed, dim))
    L_child = peel(child, eps).count
    expected = top.N * L_child + 1
    shell = (len(X) - 1) // top.N
    depths = layering.depths
    lockstep = all(
        depths[i * shell:(i + 1) * shell].min() == i * L_child + 1
        and depths[i * shell:(i + 1) * shell].max() == (i + 1) * L_child
        for i in range(top.N))
    origin_last = depths[-1] == layering.count and layering.sizes[-1] == 1
    radius = float(np.linalg.norm(X, axis=1).max())
    checks = [_check("layer number", layering.count, layering.count == expected,
                     expected=expected, shells=top.N, child_layers=L_child),
              _check("shells peel in lockstep", lockstep, lockstep),
              _check("origin peeled last", bool(origin_last), origin_last),
              _check("max norm", radius, radius < 1.0)]
    return _report("shells", {"dim": dim, "n": n, "seed": seed, "size": len(X)}, checks)

"""Tangent polytopes of spherical nets.

The polytope ``P = {y : <y, x> <= 1 for every net point x}`` is never built
explicitly; every check reduces to radial or support evaluations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geom import EPS_GEOM, GeometryError, make_rng, unit_vectors
from .nets import SphereNet

DIRECTION_SAMPLES = 10_000
FRAME_SAMPLES = 1_000


class UnboundedRayError(GeometryError):
    pass


class DegenerateBoundError(GeometryError):
    pass


@dataclass(frozen=True)
class TangentPolytope:
    net: SphereNet

    def __post_init__(self):
        if abs(self.net.radius - 1.0) > EPS_GEOM:
            raise GeometryError("tangent polytopes are built on unit-sphere nets")

    @property
    def contacts(self) -> np.ndarray:
        return self.net.points


def _radial(contacts: np.ndarray, P: np.ndarray) -> np.ndarray:
    top = (P @ contacts.T).max(axis=1)
    if np.any(top <= 0):
        raise UnboundedRayError("ray leaves every halfspace; polytope unbounded")
    return 1.0 / top


def radial_exit(P: TangentPolytope, p, eps: float = EPS_GEOM) -> float:
    """Distance from the origin to the boundary of P along unit direction p."""
    p = np.asarray(p, dtype=float).ravel()
    if abs(np.linalg.norm(p) - 1.0) > eps:
        raise GeometryError("direction must be a unit vector")
    return float(_radial(P.contacts, p[None, :])[0])


def _require_bound(delta: float) -> float:
    if delta * delta >= 2.0:
        raise DegenerateBoundError(f"1/(1 - delta^2/2) undefined for delta={delta}")
    return 1.0 - delta * delta / 2.0


def check_outer_bound(P: TangentPolytope, samples: int = DIRECTION_SAMPLES,
                      seed: int = 0) -> float:
    """max over sampled directions of radial_exit - 1/(1 - delta^2/2)."""
    shrink = _require_bound(P.net.delta)
    U = unit_vectors(make_rng(seed, P.net.dim, 11), samples, P.net.dim)
    return float(_radial(P.contacts, U).max() - 1.0 / shrink)


def check_inner_bound(net: SphereNet, samples: int = DIRECTION_SAMPLES,
                      seed: int = 0) -> float:
    """min over sampled directions of support(net, u) - (1 - delta^2/2).

    A ball of radius r sits inside conv(net) exactly when the support function
    is at least r in every direction.
    """
    U = unit_vectors(make_rng(seed, net.dim, 13), samples, net.dim)
    support = (U @ net.points.T).max(axis=1)
    return float(support.min() - (1.0 - net.delta ** 2 / 2.0))


def tangent_frame(x, eps: float = EPS_GEOM) -> np.ndarray:
    """Orthonormal basis of the hyperplane orthogonal to unit vector x.

    Rows are Gram-Schmidt images of the coordinate axes, skipping the axis
    where |x_k| is largest (lowest index on ties); each row is then signed so
    its last nonzero component is positive.
    """
    x = np.asarray(x, dtype=float).ravel()
    norm = np.linalg.norm(x)
    if norm == 0.0:
        raise GeometryError("zero vector has no tangent frame")
    if abs(norm - 1.0) > eps:
        raise GeometryError("tangent frames need a unit vector")
    d = len(x)
    skip = int(np.argmax(np.abs(x)))
    basis = [x]
    frame = []
    for k in range(d):
        if k == skip:
            continue
        v = np.zeros(d)
        v[k] = 1.0
        for _ in range(2):
            for b in basis:
                v = v - (v @ b) * b
        v /= np.linalg.norm(v)
        nz = np.flatnonzero(np.abs(v) > 1e-12)
        if v[nz[-1]] < 0:
            v = -v
        basis.append(v)
        frame.append(v)
    return np.array(frame).reshape(d - 1, d)


def check_face_inradius(P: TangentPolytope, x, samples: int = FRAME_SAMPLES,
                        seed: int = 0) -> float:
    """Worst violation of <q, x'> <= 1 over q on the delta/2 circle about x in H(x)."""
    x = np.asarray(x, dtype=float).ravel()
    hit = np.flatnonzero(np.all(np.abs(P.contacts - x) <= EPS_GEOM, axis=1))
    if len(hit) == 0:
        raise GeometryError("x is not a point of the net")
    d = P.net.dim
    frame = tangent_frame(x)
    rng = make_rng(seed, d, 17)
    W = unit_vectors(rng, samples, d - 1) @ frame if d > 1 else np.zeros((samples, d))
    Q = x + (P.net.delta / 2.0) * W
    return float((Q @ P.contacts.T).max() - 1.0)


def check_all_faces(P: TangentPolytope, samples: int = FRAME_SAMPLES,
                    seed: int = 0) -> float:
    return max(check_face_inradius(P, x, samples, seed + i)
               for i, x in enumerate(P.contacts))


def lemma_report(lemma: str, delta: float, samples: int, worst: float,
                 passed: bool) -> dict:
    return {"lemma": lemma, "delta": delta, "samples": samples,
            "worst_margin": worst, "pass": bool(passed)}


def verify_tangent(net: SphereNet, samples: int = DIRECTION_SAMPLES,
                   frame_samples: int = FRAME_SAMPLES, seed: int = 0,
                   eps: float = EPS_GEOM) -> list[dict]:
    """Outer bound, inner bound and face inradius checks for one net."""
    P = TangentPolytope(net)
    outer = check_outer_bound(P, samples, seed)
    inner = check_inner_bound(net, samples, seed)
    faces = check_all_faces(P, frame_samples, seed)
    return [
        lemma_report("outer_bound", net.delta, samples, outer, outer <= eps),
        lemma_report("inner_bound", net.delta, samples, inner, inner >= -eps),
        lemma_report("face_inradius", net.delta, frame_samples, faces, faces <= eps),
    ]

"""Point-set families: the 1-D base line, nested net shells, the recursive
tangent-polytope family, the planar spiral, the planar grid and random balls.
"""

from __future__ import annotations

import functools
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .geom import EPS_GEOM, GeometryError, derive_seed, make_rng, unit_vectors
from .nets import maximal_separated_net
from .tangent import tangent_frame

KINDS = ("base_line", "shell_family", "recursive", "spiral", "grid", "random_ball")
MAX_RECURSIVE_DIM = 5


class ThresholdError(GeometryError):
    """The recursive parameters collapse to zero for this (d, n)."""

    def __init__(self, d: int, n: int, min_n: int):
        self.d, self.n, self.min_n = d, n, min_n
        super().__init__(
            f"recursive family needs n >= {min_n} in dimension {d} (got n={n})")


class SpiralNestingError(GeometryError):
    def __init__(self, depth: int, reason: str):
        self.depth = depth
        super().__init__(f"spiral nesting failed after {depth} layers: {reason}")


@dataclass(frozen=True)
class ConstructionSpec:
    kind: str
    dim: int
    size_param: int
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise GeometryError(f"unknown construction {self.kind!r}")
        if self.dim < 1 or self.size_param < 1:
            raise GeometryError("dim and size_param must be >= 1")
        if self.kind in ("spiral", "grid") and self.dim != 2:
            raise GeometryError(f"{self.kind} is planar (dim must be 2)")
        if self.kind == "base_line" and self.dim != 1:
            raise GeometryError("base_line has dim 1")
        if self.kind == "shell_family" and self.dim < 2:
            raise GeometryError("shell_family needs dim >= 2")

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict) -> "ConstructionSpec":
        return cls(obj["kind"], int(obj["dim"]), int(obj["size_param"]),
                   int(obj.get("seed", 0)))


def base_line(n: int) -> np.ndarray:
    """The 2n + 1 points i/n, i = -n..n."""
    if n < 1:
        raise GeometryError("base_line needs n >= 1")
    return (np.arange(-n, n + 1) / n).reshape(-1, 1)


def shell_family(d: int, i: int, seed: int = 0) -> np.ndarray:
    """i concentric copies (1 + j/i) D of a maximal 1/i-separated set D on S(1/2).

    Copies are stacked innermost first; copy j occupies rows
    ``j*|D| .. (j+1)*|D|``.
    """
    if d < 2 or i < 2:
        raise GeometryError("shell_family needs d >= 2 and i >= 2")
    D = maximal_separated_net(d, 0.5, 1.0 / i, seed).points
    return np.vstack([(1.0 + j / i) * D for j in range(i)])


# --- recursive family -------------------------------------------------------

def iroot(a: int, k: int) -> int:
    """Largest integer m with m**k <= a."""
    if a < 0 or k < 1:
        raise ValueError("iroot needs a >= 0 and k >= 1")
    if a < 2:
        return a
    m = int(round(a ** (1.0 / k)))
    while m ** k > a:
        m -= 1
    while (m + 1) ** k <= a:
        m += 1
    return m


def recursive_params(d: int, n: int) -> tuple[float, int, int]:
    """(delta, m, N) with delta = n^(-1/2d), m = floor(delta^-(d-1)), N = floor(1/(4 delta^2)).

    The floors are taken in exact integer arithmetic.
    """
    delta = n ** (-1.0 / (2 * d))
    m = iroot(n ** (d - 1), 2 * d)
    N = iroot(n, d) // 4
    return delta, m, N


def admissible(d: int, n: int) -> bool:
    if d == 1:
        return n >= 1
    _, m, N = recursive_params(d, n)
    return N >= 1 and m >= 1 and admissible(d - 1, m)


def min_admissible_n(d: int) -> int:
    if d == 1:
        return 1
    hi = 1
    while not admissible(d, hi):
        hi *= 2
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if admissible(d, mid):
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class TraceLevel:
    d: int
    n: int
    delta: float | None = None
    m: int | None = None
    N: int | None = None
    net_size: int | None = None
    radii: list[float] = field(default_factory=list)
    size: int = 0
    layers: int = 0


@dataclass(frozen=True)
class RecursiveTrace:
    levels: tuple[TraceLevel, ...]

    @property
    def top(self) -> TraceLevel:
        return self.levels[0]

    def to_json(self) -> dict:
        return {"levels": [asdict(lv) for lv in self.levels]}


@functools.lru_cache(maxsize=64)
def _recursive(d: int, n: int, seed: int) -> tuple[np.ndarray, RecursiveTrace]:
    if d == 1:
        pts = base_line(n)
        pts.setflags(write=False)
        return pts, RecursiveTrace((TraceLevel(1, n, size=len(pts), layers=n + 1),))
    delta, m, N = recursive_params(d, n)
    child, child_trace = _recursive(d - 1, m, derive_seed(seed, d))
    D = maximal_separated_net(d, 1.0, delta, seed).points
    scale = delta / 4.0
    S = np.vstack([x + scale * (child @ tangent_frame(x)) for x in D])
    radii = [1.0 - 2.0 * i * delta * delta for i in range(1, N + 1)]
    pts = np.vstack([r * S for r in radii] + [np.zeros((1, d))])
    pts.setflags(write=False)
    level = TraceLevel(d, n, delta, m, N, len(D), radii, len(pts),
                       N * child_trace.top.layers + 1)
    return pts, RecursiveTrace((level,) + child_trace.levels)


def recursive_family(d: int, n: int, seed: int = 0) -> tuple[np.ndarray, RecursiveTrace]:
    """Recursive tangent-polytope family and its per-level parameters.

    For d >= 2: a maximal delta-separated unit-sphere net D, a (d-1)-dimensional
    member X_m embedded in every tangent hyperplane H(x), x in D, scaled by
    delta/4 about x; N shells r_i S, r_i = 1 - 2 i delta^2; and the origin.
    Shells are stored outermost first, the origin last.  ``layers`` in the
    trace is the layer number predicted by exact lockstep peeling.
    """
    if d < 1:
        raise GeometryError("dimension must be >= 1")
    if d > MAX_RECURSIVE_DIM:
        raise GeometryError(f"recursive family limited to d <= {MAX_RECURSIVE_DIM}")
    if not admissible(d, n):
        raise ThresholdError(d, n, min_admissible_n(d))
    pts, trace = _recursive(d, n, seed)
    return pts.copy(), trace


# --- planar families ---------------------------------------------------------

@dataclass(frozen=True)
class SpiralInfo:
    vertices: int
    max_layers: int
    step: float
    layers: int
    stop_reason: str


def spiral_planar(n: int, eps: float = EPS_GEOM, info: bool = False):
    """Interlocking spiral of regular K-gons, K = round(n^(1/4)).

    Layer 0 is inscribed in the unit circle; each next layer slides every
    vertex n^(-1/2) along its side in counter-clockwise order.  Generation
    stops after round(n^(3/4)) layers or once successive windings of the
    spiral would come closer than the slide, which keeps the minimum distance
    of order n^(-1/2).  Every layer is checked to be in strictly convex
    position and inside its predecessor.
    """
    if n < 16:
        raise GeometryError("spiral_planar needs n >= 16")
    K = max(3, round(n ** 0.25))
    M = round(n ** 0.75)
    s = n ** -0.5
    ang = 2 * np.pi * np.arange(K) / K
    V = np.column_stack([np.cos(ang), np.sin(ang)])
    layers = [V]
    reason = "max_layers"
    while len(layers) < M:
        E = np.roll(V, -1, axis=0) - V
        side = np.linalg.norm(E, axis=1)
        # A vertex needs side/s layers to sweep one side, dropping the radius
        # by about side*sin(pi/K) per winding; stop once windings would sit
        # closer than the slide itself.
        if side.min() * np.sin(np.pi / K) < s:
            reason = "winding_gap_below_step"
            break
        W = V + s * E / side[:, None]
        _check_nested(V, E, side, W, eps, len(layers))
        layers.append(W)
        V = W
    pts = np.vstack(layers)
    if info:
        return pts, SpiralInfo(K, M, s, len(layers), reason)
    return pts


def _check_nested(V, E, side, W, eps, depth):
    # W strictly convex, counter-clockwise
    F = np.roll(W, -1, axis=0) - W
    turn = F[:, 0] * np.roll(F, -1, axis=0)[:, 1] - F[:, 1] * np.roll(F, -1, axis=0)[:, 0]
    if np.any(turn <= eps):
        raise SpiralNestingError(depth, "layer not in strictly convex position")
    # every new vertex inside every edge halfplane of the previous layer
    rel = W[None, :, :] - V[:, None, :]
    cross = E[:, None, 0] * rel[:, :, 1] - E[:, None, 1] * rel[:, :, 0]
    if np.any(cross < -eps * side[:, None]):
        raise SpiralNestingError(depth, "layer leaves the previous hull")


def grid_planar(n: int) -> np.ndarray:
    """sqrt(n) x sqrt(n) square grid centred at the origin, corners on S^1."""
    k = math.isqrt(n)
    if n < 4 or k * k != n:
        raise GeometryError(f"grid needs a perfect square n >= 4, got {n}")
    h = math.sqrt(2.0) / (k - 1)
    c = h * (np.arange(k) - (k - 1) / 2)
    gx, gy = np.meshgrid(c, c, indexing="ij")
    return np.column_stack([gx.ravel(), gy.ravel()])


def grid_spacing(n: int) -> float:
    return math.sqrt(2.0) / (math.isqrt(n) - 1)


def random_ball(d: int, n: int, seed: int = 0) -> np.ndarray:
    """n i.i.d. uniform points in B^d."""
    if d < 1 or n < 1:
        raise GeometryError("random_ball needs d >= 1 and n >= 1")
    rng = make_rng(seed, d, 3)
    U = unit_vectors(rng, n, d)
    r = rng.random(n) ** (1.0 / d)
    return U * r[:, None]


def build(spec: ConstructionSpec):
    """Generate the point set for ``spec``; returns (points, extra or None)."""
    k, d, n, seed = spec.kind, spec.dim, spec.size_param, spec.seed
    if k == "base_line":
        return base_line(n), None
    if k == "shell_family":
        return shell_family(d, n, seed), None
    if k == "recursive":
        return recursive_family(d, n, seed)
    if k == "spiral":
        return spiral_planar(n, info=True)
    if k == "grid":
        return grid_planar(n), None
    return random_ball(d, n, seed), None

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convlayers.geom import GeometryError, make_rng, unit_vectors
from convlayers.nets import SphereNet, maximal_separated_net
from convlayers.tangent import (DegenerateBoundError, TangentPolytope, UnboundedRayError,
                                check_face_inradius, check_inner_bound, check_outer_bound,
                                radial_exit, tangent_frame, verify_tangent)

SQUARE = SphereNet(2, 1.0, math.sqrt(2), np.array([[1.0, 0], [0, 1], [-1, 0], [0, -1]]), 0)
_ang = np.arange(8) * np.pi / 4
OCTAGON = SphereNet(2, 1.0, 2 * math.sin(math.pi / 8), np.column_stack([np.cos(_ang), np.sin(_ang)]), 0)


def test_radial_exit_square():
    P = TangentPolytope(SQUARE)
    assert radial_exit(P, np.array([1, 1]) / math.sqrt(2)) == pytest.approx(math.sqrt(2))
    assert radial_exit(P, [1.0, 0.0]) == 1.0


def test_unbounded_ray():
    net = SphereNet(2, 1.0, 2.0, np.array([[1.0, 0.0], [0.0, 1.0]]), 0)
    with pytest.raises(UnboundedRayError):
        radial_exit(TangentPolytope(net), [-1.0, 0.0])


def test_octagon_bounds():
    P = TangentPolytope(OCTAGON)
    U = unit_vectors(make_rng(0), 1000, 2)
    lam = [radial_exit(P, u) for u in U]
    assert max(lam) <= 1 / math.cos(math.pi / 8) + 1e-12
    assert check_outer_bound(P) <= 0
    # support minimum of the octagon is cos(pi/8)
    assert check_inner_bound(OCTAGON) >= math.cos(math.pi / 8) - (1 - OCTAGON.delta ** 2 / 2) - 1e-3
    for x in OCTAGON.points:
        # the disk lies in x's own face plane, so that contact is met with equality
        assert check_face_inradius(P, x) <= 1e-9


def test_square_outer_bound_is_degenerate():
    with pytest.raises(DegenerateBoundError):
        check_outer_bound(TangentPolytope(SQUARE))


def test_face_check_rejects_foreign_point():
    with pytest.raises(GeometryError):
        check_face_inradius(TangentPolytope(OCTAGON), [0.6, 0.8])


def test_generated_3d_net_margins():
    net = maximal_separated_net(3, 1.0, 0.3, seed=0)
    reports = verify_tangent(net)
    assert [r["lemma"] for r in reports] == ["outer_bound", "inner_bound", "face_inradius"]
    assert all(r["pass"] for r in reports)


def test_sandwich_and_radial_at_least_one():
    net = maximal_separated_net(3, 1.0, 0.25, seed=1)
    P = TangentPolytope(net)
    shrink = 1 - net.delta ** 2 / 2
    for u in unit_vectors(make_rng(2), 300, 3):
        lam = radial_exit(P, u)
        assert 1 - 1e-12 <= lam <= 1 / shrink
        assert (net.points @ u).max() >= shrink
    assert radial_exit(P, net.points[0]) == pytest.approx(1.0, abs=1e-12)


def test_tangent_frame_examples():
    assert tangent_frame([1.0, 0.0]).tolist() == [[0.0, 1.0]]
    assert tangent_frame([0.0, 0.0, 1.0]).tolist() == [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]
    with pytest.raises(GeometryError):
        tangent_frame([0.0, 0.0])


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2 ** 32 - 1))
def test_tangent_frame_orthonormal(d, seed):
    X = unit_vectors(make_rng(seed), 250, d)
    for x in X:
        F = tangent_frame(x)
        assert F.shape == (d - 1, d)
        assert np.abs(F @ x).max() <= 1e-12
        assert np.abs(F @ F.T - np.eye(d - 1)).max() <= 1e-12
        assert np.array_equal(F, tangent_frame(x))

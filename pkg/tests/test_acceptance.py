"""Acceptance suite: one test per acceptance criterion, tolerances pinned below.

Run with ``pytest tests/test_acceptance.py -v``; each criterion prints a
single PASSED or FAILED line.  Several checks sweep families up to about two
million points and take minutes.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from convlayers.analysis import fit_exponent, theoretical_exponent
from convlayers.constructions import base_line, shell_family, spiral_planar
from convlayers.geom import EPS_GEOM, make_rng, min_distance
from convlayers.peeling import extreme_points, peel
from convlayers.verify import band_report, nets_suite, push_suite, shells_suite, tangent_suite

from sweeps import FAMILIES, family, fit_points, span_decades

SLOPE_2D_RECURSIVE, TOL_2D_RECURSIVE = 0.75, 0.08
SLOPE_3D_RECURSIVE, TOL_3D_RECURSIVE = 7 / 12, 0.10
SLOPE_RANDOM, TOL_RANDOM = 2 / 3, 0.10
SLOPE_GRID, TOL_GRID = 2 / 3, 0.07
SLOPE_SPIRAL, TOL_SPIRAL = 0.75, 0.08
BAND = 2.0
UNIT_TOL = 1e-12
NET_SAMPLES = 10_000
ORACLE_SETS = 200


def test_criterion_01_base_line_layer_law():
    for n in range(1, 201):
        assert peel(base_line(n)).count == n + 1, n


@pytest.mark.parametrize("d", [2, 3])
def test_criterion_02_shell_family_exact(d):
    failures = []
    for i in range(2, 21):
        X = shell_family(d, i)
        layering = peel(X)
        assert layering.count == i
        size = len(X) // i
        for k, layer in enumerate(layering.layers):
            j = i - 1 - k  # the outermost copy goes first
            assert np.array_equal(layer, np.arange(j * size, (j + 1) * size)), (i, k)
        mu = min_distance(X)
        if mu < 1.0 / i - EPS_GEOM:
            failures.append((i, mu, 1.0 / i))
    assert not failures, f"min_distance below 1/i for (i, mu, 1/i) = {failures}"


@pytest.mark.parametrize("n", [256, 1296, 4096])
def test_criterion_03_recursive_lockstep_2d(n):
    report = shells_suite(2, n)
    assert report["pass"], report


def test_criterion_04_recursive_exponent_2d():
    records = family("recursive d=2")
    assert span_decades(records) >= 2
    fit = fit_exponent(fit_points(records))
    print(f"recursive d=2 slope {fit.slope:.4f} (r2 {fit.r2:.4f}, {fit.count} points)")
    assert abs(fit.slope - SLOPE_2D_RECURSIVE) <= TOL_2D_RECURSIVE


def test_criterion_05_recursive_exponent_3d():
    records = family("recursive d=3")
    assert span_decades(records) >= 0.95
    fit = fit_exponent(fit_points(records))
    print(f"recursive d=3 slope {fit.slope:.4f} (r2 {fit.r2:.4f}, {fit.count} points)")
    assert abs(fit.slope - SLOPE_3D_RECURSIVE) <= TOL_3D_RECURSIVE


def test_criterion_06_exponent_identity():
    assert theoretical_exponent(1) == 1
    assert theoretical_exponent(2) == Fraction(3, 4)
    assert theoretical_exponent(3) == Fraction(7, 12)
    for d in range(1, 31):
        recurrence = Fraction(1)
        for k in range(2, d + 1):
            recurrence = (2 + (k - 1) * recurrence) / (2 * k)
        assert recurrence == Fraction(2, d) - Fraction(2, d * 2 ** d)
        assert theoretical_exponent(d) == recurrence


def test_criterion_07_random_ball_exponent():
    records = family("random_ball d=2")
    assert min(r.n for r in records) == 1000 and max(r.n for r in records) == 100_000
    assert len({r.spec.seed for r in records}) == 10
    fit = fit_exponent(fit_points(records))
    print(f"random_ball d=2 slope {fit.slope:.4f}")
    assert abs(fit.slope - SLOPE_RANDOM) <= TOL_RANDOM


def test_criterion_08_grid_exponent():
    records = family("grid d=2")
    assert min(r.n for r in records) >= 100 and max(r.n for r in records) <= 100_000
    fit = fit_exponent(fit_points(records))
    print(f"grid slope {fit.slope:.4f}")
    assert abs(fit.slope - SLOPE_GRID) <= TOL_GRID


@pytest.mark.parametrize("d, deltas", [(2, [0.3, 0.1, 0.03]), (3, [0.5, 0.2, 0.1, 0.05])])
def test_criterion_09_net_stability(d, deltas):
    assert max(deltas) / min(deltas) >= 10
    report = nets_suite(d, deltas, seed=0, samples=NET_SAMPLES)
    assert report["pass"], report


@pytest.mark.parametrize("d", [2, 3])
def test_criterion_10_tangent_margins(d):
    report = tangent_suite(d, [0.1, 0.2, 0.3])
    assert report["pass"], report


def test_criterion_11_push_and_layer_band():
    reports = [push_suite([d], count, seed=0) for d, count in ((2, 34), (3, 33), (4, 33))]
    assert sum(r["params"]["instances"] for r in reports) == 100
    for rep in reports:
        assert rep["checks"][0]["value"] <= UNIT_TOL
        assert rep["pass"], rep
    drifts = {}
    for name in FAMILIES:
        check = band_report(list(family(name)))["checks"][2]
        drifts[name] = check["value"]
    print("max_layer*mu^(d-1) drift:", drifts)
    assert all(v <= BAND for v in drifts.values()), drifts


def _random_planar(rng, n, engineered):
    if not engineered:
        return rng.random((n, 2))
    # Lattice points plus midpoints of random pairs force collinear triples.
    k = n // 2
    P = rng.integers(0, 12, size=(k, 2)) / 8.0
    a, b = rng.integers(0, k, size=(2, n - k))
    X = np.vstack([P, (P[a] + P[b]) / 2])
    return np.unique(X, axis=0)


def test_criterion_12_lp_matches_monotone_chain():
    rng = make_rng(0, 12)
    sizes = [4 + (53 * t) % 147 for t in range(ORACLE_SETS - 1)] + [500]
    collinear = 0
    for t, n in enumerate(sizes):
        X = _random_planar(rng, n, engineered=(t % 2 == 1 or n == 500))
        alive = np.arange(len(X))
        while len(alive):
            lp = extreme_points(X[alive], method="lp")
            chain = extreme_points(X[alive], method="oracle")
            assert np.array_equal(lp, chain), (t, n)
            alive = np.delete(alive, chain)
        if t % 2 == 1:
            collinear += 1
    assert len(sizes) == ORACLE_SETS and max(sizes) <= 500 and collinear >= 100


@pytest.mark.parametrize("name", list(FAMILIES))
def test_criterion_13_bound_bands(name):
    report = band_report(list(family(name)), convex_band=False)
    print(name, [(c["check"], round(c["value"], 3)) for c in report["checks"]])
    assert report["pass"], report


def test_criterion_14_spiral():
    for n in (1_000, 30_000, 300_000):
        _, info = spiral_planar(n, info=True)  # raises if nesting breaks
        assert info.layers >= 2
    records = family("spiral d=2")
    fit = fit_exponent(fit_points(records))
    print(f"spiral slope {fit.slope:.4f}")
    assert abs(fit.slope - SLOPE_SPIRAL) <= TOL_SPIRAL
    assert math.isfinite(fit.r2)

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from convlayers.formats import (FormatError, SweepRow, format_layers, format_pset,
                                format_sweep, parse_layers, parse_pset, parse_sweep)


def test_pset_layout():
    text = format_pset(np.array([[0.1, -2.0], [1.0, 3.5]]))
    assert text == "2 2\n0.10000000000000001 -2\n1 3.5\n"


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(0, 20), st.integers(1, 4)),
              elements=st.floats(-1e6, 1e6, allow_nan=False)))
def test_pset_round_trip_is_exact(X):
    assert np.array_equal(parse_pset(format_pset(X)).reshape(X.shape), X)


@pytest.mark.parametrize("text, line", [
    ("", 1), ("2\n", 1), ("2 1\n0.5\n", 2), ("2 2\n0 0\n1 x\n", 3), ("2 3\n0 0\n", 2),
])
def test_pset_errors_carry_line_numbers(text, line):
    with pytest.raises(FormatError) as info:
        parse_pset(text)
    assert info.value.line == line


def test_layers_round_trip():
    layers = [np.array([0, 8]), np.array([1, 7]), np.array([4])]
    text = format_layers(layers, 5)
    assert text.splitlines()[0] == "3 5"
    back, n = parse_layers(text)
    assert n == 5 and all(np.array_equal(a, b) for a, b in zip(layers, back))


def test_sweep_round_trip():
    rows = [SweepRow("grid", 2, 100, 0, 100, 0.1571348402636772, 12, 36, 0.01),
            SweepRow("recursive", 3, 10, 0, 0, math.nan, -1, 0, 0.0, "refused")]
    text = format_sweep(rows)
    assert text.splitlines()[0] == "kind,dim,size_param,seed,n,mu,layers,max_layer,wall_seconds,note"
    back = parse_sweep(text)
    assert back[0].mu == rows[0].mu and back[0].layers == 12
    assert back[1].layers == -1 and back[1].note == "refused"


def test_sweep_missing_columns():
    with pytest.raises(FormatError):
        parse_sweep("kind,dim\ngrid,2\n")

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qspeed import DensityState, DomainError, PureState, StateFileError
from qspeed.statefile import dumps, loads, read_state_file, write_state_file

from conftest import random_density, random_pure


def same_state(a, b):
    assert type(a) is type(b)
    assert a.hbar == b.hbar
    np.testing.assert_array_equal(a.energies, b.energies)
    if isinstance(a, PureState):
        np.testing.assert_array_equal(a.amplitudes, b.amplitudes)
    else:
        np.testing.assert_array_equal(a.matrix, b.matrix)


def test_pure_round_trip(rng, tmp_path):
    for _ in range(20):
        s = random_pure(rng)
        path = tmp_path / "s.json"
        write_state_file(s, path)
        same_state(s, read_state_file(path))


def test_mixed_round_trip(rng):
    for _ in range(20):
        s = random_density(rng, d=int(rng.integers(1, 5)))
        same_state(s, loads(dumps(s)))


def test_output_is_bit_stable(rng):
    s = random_density(rng, d=3)
    text = dumps(s)
    assert dumps(loads(text)) == text


@settings(max_examples=50, deadline=None)
@given(
    st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=1, max_size=6),
    st.floats(1e-3, 1e3),
    st.integers(0, 2**32 - 1),
)
def test_round_trip_property(energies, hbar, seed):
    amp = np.random.default_rng(seed).normal(size=(len(energies), 2)) @ [1, 1j]
    s = PureState.from_arrays(energies, amp / np.linalg.norm(amp), hbar)
    same_state(s, loads(dumps(s)))


def test_default_hbar():
    s = loads('{"pure": [{"energy": 0, "amp": [1, 0]}]}')
    assert s.hbar == 1.0


def test_mixed_file():
    text = json.dumps(
        {"hbar": 2, "mixed": {"energies": [0, 1], "matrix": [[[0.5, 0], [0, 0.25]], [[0, -0.25], [0.5, 0]]]}}
    )
    s = loads(text)
    assert isinstance(s, DensityState)
    assert s.hbar == 2.0
    assert s.matrix[0, 1] == 0.25j


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        "[]",
        '{"pure": [{"energy": 0, "amplitdue": [1, 0]}]}',
        '{"pure": [{"energy": 0, "amp": [1, 0]}], "extra": 1}',
        '{"pure": [{"energy": 0}]}',
        '{"pure": []}',
        '{"hbar": 1}',
        '{"pure": [{"energy": 0, "amp": [1, 0]}], "mixed": {"energies": [0], "matrix": [[[1, 0]]]}}',
        '{"pure": [{"energy": "zero", "amp": [1, 0]}]}',
        '{"pure": [{"energy": 0, "amp": [1]}]}',
        '{"pure": [{"energy": true, "amp": [1, 0]}]}',
        '{"mixed": {"energies": [0, 1], "matrix": [[[1, 0]]]}}',
        '{"mixed": {"energies": [0], "matrix": [[[1, 0]]], "note": "x"}}',
    ],
)
def test_schema_errors(text):
    with pytest.raises(StateFileError):
        loads(text)


def test_unphysical_state_is_domain_error():
    with pytest.raises(DomainError) as info:
        loads('{"pure": [{"energy": 0, "amp": [2, 0]}]}')
    assert not isinstance(info.value, StateFileError)
    with pytest.raises(DomainError):
        loads('{"mixed": {"energies": [0, 1], "matrix": [[[1.5, 0], [0, 0]], [[0, 0], [-0.5, 0]]]}}')


def test_missing_file(tmp_path):
    with pytest.raises(StateFileError):
        read_state_file(tmp_path / "nope.json")


def test_nonfinite_refused():
    s = PureState.from_arrays([0.0, 1.0], [0.6, 0.8])
    bad = PureState(np.array([0.0, np.inf]), s.amplitudes, 1.0)
    with pytest.raises(StateFileError):
        dumps(bad)

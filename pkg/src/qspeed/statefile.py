"""JSON state files.

A file holds an optional ``hbar`` and exactly one of::

    {"pure": [{"energy": -1.0, "amp": [0.7071067811865476, 0.0]}, ...]}
    {"mixed": {"energies": [...], "matrix": [[[re, im], ...], ...]}}

Unknown keys are rejected. Floats are written with ``repr`` so a file
written here parses back to bit-identical arrays.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Union

import numpy as np

from .errors import StateFileError
from .spectral import DensityState, PureState

_TOP_KEYS = {"hbar", "pure", "mixed"}


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise StateFileError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _complex(value, where: str) -> complex:
    if not (isinstance(value, list) and len(value) == 2):
        raise StateFileError(f"{where}: expected [re, im], got {value!r}")
    return complex(_number(value[0], where), _number(value[1], where))


def _check_keys(obj, allowed: set, where: str):
    if not isinstance(obj, dict):
        raise StateFileError(f"{where}: expected an object")
    unknown = set(obj) - allowed
    if unknown:
        raise StateFileError(f"{where}: unknown field(s) {sorted(unknown)}")


def parse_state(data) -> Union[PureState, DensityState]:
    """Build a state from decoded JSON. Schema problems raise
    :class:`StateFileError`; a well-formed but unphysical state raises the
    state constructor's domain error."""
    _check_keys(data, _TOP_KEYS, "state file")
    hbar = _number(data.get("hbar", 1.0), "hbar")
    if ("pure" in data) == ("mixed" in data):
        raise StateFileError("state file needs exactly one of 'pure' or 'mixed'")
    if "pure" in data:
        levels = data["pure"]
        if not isinstance(levels, list) or not levels:
            raise StateFileError("pure: expected a nonempty list of levels")
        energies, amps = [], []
        for i, level in enumerate(levels):
            where = f"pure[{i}]"
            _check_keys(level, {"energy", "amp"}, where)
            if set(level) != {"energy", "amp"}:
                raise StateFileError(f"{where}: needs 'energy' and 'amp'")
            energies.append(_number(level["energy"], where + ".energy"))
            amps.append(_complex(level["amp"], where + ".amp"))
        return PureState.from_arrays(energies, amps, hbar)
    mixed = data["mixed"]
    _check_keys(mixed, {"energies", "matrix"}, "mixed")
    if set(mixed) != {"energies", "matrix"}:
        raise StateFileError("mixed: needs 'energies' and 'matrix'")
    if not isinstance(mixed["energies"], list) or not isinstance(mixed["matrix"], list):
        raise StateFileError("mixed: energies and matrix must be lists")
    energies = [_number(e, "mixed.energies") for e in mixed["energies"]]
    d = len(energies)
    rows = mixed["matrix"]
    if len(rows) != d or any(not isinstance(r, list) or len(r) != d for r in rows):
        raise StateFileError(f"mixed.matrix: expected a {d}x{d} array of [re, im]")
    matrix = [[_complex(x, f"mixed.matrix[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(rows)]
    return DensityState.from_arrays(energies, matrix, hbar)


def loads(text: str):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"invalid JSON: {exc}") from None
    return parse_state(data)


def read_state_file(path) -> Union[PureState, DensityState]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise StateFileError(f"cannot read {path}: {exc}") from None
    return loads(text)


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def state_to_dict(state) -> dict:
    out: dict = {"hbar": float(state.hbar)}
    if isinstance(state, PureState):
        out["pure"] = [
            {"energy": float(e), "amp": _pair(a)} for e, a in zip(state.energies, state.amplitudes)
        ]
    else:
        out["mixed"] = {
            "energies": [float(e) for e in state.energies],
            "matrix": [[_pair(z) for z in row] for row in np.asarray(state.matrix)],
        }
    return out


def dumps(state) -> str:
    data = state_to_dict(state)
    if not all(math.isfinite(e) for e in _floats(data)):
        raise StateFileError("state contains non-finite numbers")
    return json.dumps(data, indent=1)


def _floats(obj):
    if isinstance(obj, float):
        yield obj
    elif isinstance(obj, dict):
        for v in obj.values():
            yield from _floats(v)
    elif isinstance(obj, list):
        for v in obj:
            yield from _floats(v)


def write_state_file(state, path) -> None:
    Path(path).write_text(dumps(state) + "\n")

import json

import numpy as np
import pytest

from km_forge.algebra import FiniteHeytingAlgebra, boolean, chain


@pytest.fixture
def chain2() -> FiniteHeytingAlgebra:
    return chain(2)


@pytest.fixture
def chain3() -> FiniteHeytingAlgebra:
    return chain(3)


@pytest.fixture
def boolean4() -> FiniteHeytingAlgebra:
    return boolean(2)


@pytest.fixture
def m3_order() -> np.ndarray:
    """The diamond 0 < a, b, c < 1: a lattice, not distributive."""
    return np.array([
        [1, 1, 1, 1, 1],
        [0, 1, 0, 0, 1],
        [0, 0, 1, 0, 1],
        [0, 0, 0, 1, 1],
        [0, 0, 0, 0, 1],
    ], dtype=bool)


def write_json(path, data) -> str:
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


@pytest.fixture
def json_file(tmp_path):
    def make(name: str, data) -> str:
        return write_json(tmp_path / name, data)
    return make


@pytest.fixture
def chain3_file(tmp_path) -> str:
    return write_json(tmp_path / "3chain.json", {
        "name": "3-chain",
        "elements": ["0", "m", "1"],
        "leq": [[True, True, True], [False, True, True], [False, False, True]],
    })


@pytest.fixture
def boolean4_file(tmp_path) -> str:
    return write_json(tmp_path / "b4.json", {"poset": {"points": 2, "leq": [[True, False], [False, True]]}})


@pytest.fixture
def m3_file(tmp_path, m3_order) -> str:
    return write_json(tmp_path / "m3.json", {
        "name": "M3",
        "elements": ["0", "a", "b", "c", "1"],
        "leq": m3_order.tolist(),
    })

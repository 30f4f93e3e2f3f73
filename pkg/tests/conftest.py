import json
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from chamberlab.coxeter import CoxeterMatrix


@pytest.fixture(scope="session")
def m444():
    return CoxeterMatrix(["a", "b", "c"], [[1, 4, 4], [4, 1, 4], [4, 4, 1]])


@pytest.fixture(scope="session")
def m345():
    return CoxeterMatrix(["a", "b", "c"], [[1, 3, 4], [3, 1, 5], [4, 5, 1]])


@pytest.fixture(scope="session")
def m4444():
    m = [[4] * 4 for _ in range(4)]
    for i in range(4):
        m[i][i] = 1
    return CoxeterMatrix(["a", "b", "c", "d"], m)


def write_diagram(path, generators, m):
    path.write_text(json.dumps({"generators": generators, "m": m}))
    return str(path)


@pytest.fixture
def diagram_444(tmp_path):
    return write_diagram(tmp_path / "d444.json", ["a", "b", "c"],
                         [[1, 4, 4], [4, 1, 4], [4, 4, 1]])


@pytest.fixture
def diagram_345(tmp_path):
    return write_diagram(tmp_path / "d345.json", ["a", "b", "c"],
                         [[1, 3, 4], [3, 1, 5], [4, 5, 1]])


@pytest.fixture
def diagram_333(tmp_path):
    return write_diagram(tmp_path / "d333.json", ["a", "b", "c"],
                         [[1, 3, 3], [3, 1, 3], [3, 3, 1]])

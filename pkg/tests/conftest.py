import json

import pytest

from roothall.ffield import make_field
from roothall.quiver_repr import ModuleRegistry, Quiver


def quiver_doc(name, vertices, arrows):
    return {
        "name": name,
        "vertices": list(vertices),
        "arrows": [{"id": i, "src": s, "tgt": t} for i, s, t in arrows],
    }


def a1_quiver():
    return Quiver.from_dict(quiver_doc("A1", ["1"], []))


def a2_quiver():
    return Quiver.from_dict(quiver_doc("A2", ["1", "2"], [("a", "1", "2")]))


def a3_quiver():
    return Quiver.from_dict(quiver_doc("A3", ["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")]))


def kronecker_quiver():
    return Quiver.from_dict(quiver_doc("Kronecker", ["1", "2"], [("a", "1", "2"), ("b", "1", "2")]))


def quiver_json(q):
    return json.dumps(q.to_dict())


@pytest.fixture(scope="session")
def f2():
    return make_field(2)


@pytest.fixture(scope="session")
def f3():
    return make_field(3)


@pytest.fixture(scope="session")
def a2_reg_f3():
    return ModuleRegistry(a2_quiver(), make_field(3), (4, 4))


@pytest.fixture(scope="session")
def a3_reg_f3():
    return ModuleRegistry(a3_quiver(), make_field(3), (4, 4, 4))


def named_ind(reg, dims):
    for i, r in enumerate(reg.ind):
        if r.dims == tuple(dims):
            return i
    raise AssertionError(f"no indecomposable with dims {dims}")

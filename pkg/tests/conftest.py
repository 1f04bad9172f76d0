import pytest

from nlca.calculus import Engine
from nlca.pbw import Reducer

from builders import BUILDERS

CONCRETE = ("virasoro", "free_boson", "free_fermion", "affine_sl2", "w3")


@pytest.fixture(scope="session")
def presentations():
    return {name: fn() for name, fn in BUILDERS.items()}


@pytest.fixture(scope="session")
def engines(presentations):
    return {name: Engine(presentations[name]) for name in BUILDERS}


@pytest.fixture(scope="session")
def reducers(engines):
    return {name: Reducer(engines[name]) for name in BUILDERS}


@pytest.fixture(scope="session")
def virasoro(presentations):
    return presentations["virasoro"]


@pytest.fixture(scope="session")
def free_boson(presentations):
    return presentations["free_boson"]


@pytest.fixture(scope="session")
def free_fermion(presentations):
    return presentations["free_fermion"]


@pytest.fixture(scope="session")
def affine_sl2(presentations):
    return presentations["affine_sl2"]


@pytest.fixture(scope="session")
def w3(presentations):
    return presentations["w3"]


@pytest.fixture(scope="session")
def w3_ansatz(presentations):
    return presentations["w3_ansatz"]

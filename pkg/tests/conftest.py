import pathlib

import pytest

from vkh.diagram import load_diagram
from vkh.random_diagrams import random_corpus

DATA = pathlib.Path(__file__).resolve().parents[1] / "src" / "vkh" / "data"

CORPUS_SEED = 20260826


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def unknot():
    return load_diagram(DATA / "unknot.vtd")


@pytest.fixture(scope="session")
def trefoil():
    return load_diagram(DATA / "trefoil.vtd")


@pytest.fixture(scope="session")
def v_trefoil():
    return load_diagram(DATA / "v_trefoil.vtd")


@pytest.fixture(scope="session")
def fig42():
    return load_diagram(DATA / "fig42.vtd")


@pytest.fixture(scope="session")
def nonnice():
    return load_diagram(DATA / "nonnice.vtd")


@pytest.fixture(scope="session")
def braid3():
    return load_diagram(DATA / "braid3.vtd")


@pytest.fixture(scope="session")
def corpus():
    """The 200-diagram seeded corpus used across the larger suites."""
    return random_corpus(CORPUS_SEED, 200)


@pytest.fixture(scope="session")
def small_corpus(corpus):
    return corpus[:25]

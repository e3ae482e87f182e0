import pytest

from holonomy2 import corpus
from holonomy2.fintop import FiniteTopSpace
from holonomy2.holonomy import WStructure, full_wstructure


@pytest.fixture
def z2z2():
    return corpus.z2z2()


@pytest.fixture
def pair2():
    return corpus.pair2()


@pytest.fixture
def pairz2():
    return corpus.pairz2()


@pytest.fixture
def z4():
    return corpus.z4_interior()


@pytest.fixture
def all_cms():
    return corpus.corpus()


def discrete_item(cm):
    cm = corpus.with_topology(cm, "discrete")
    w = full_wstructure(cm, FiniteTopSpace.discrete(cm.C.arrows))
    return cm, w


def indiscrete_item(cm):
    cm = corpus.with_topology(cm, "indiscrete")
    w = full_wstructure(cm, FiniteTopSpace.indiscrete(cm.C.arrows))
    return cm, w


def sierpinski_pairz2_item():
    cm = corpus.with_topology(corpus.pairz2(), "sierpinski")
    w = WStructure(cm.C.arrows, corpus.sierpinski_bundle_topology(cm.C.arrows))
    return cm, w


def sierpinski_space():
    return FiniteTopSpace.from_opens("ab", [[], ["a"], ["a", "b"]])

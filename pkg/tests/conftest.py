import pytest

from beliefnet import kernels
from beliefnet.data import load
from beliefnet.network import BeliefNetwork, Cpt, Variable, validated


def make_net(name, node_defs):
    """node_defs: list of (id, values, parents, flat cpt)."""
    variables = tuple(Variable(vid, vid, tuple(values)) for vid, values, _, _ in node_defs)
    cpts = tuple(Cpt(vid, tuple(parents), tuple(table)) for vid, _, parents, table in node_defs)
    return validated(BeliefNetwork(name, variables, cpts))


@pytest.fixture
def coin_net():
    return make_net("coin", [("C", ["h", "t"], [], [0.6, 0.4])])


@pytest.fixture
def ab_net():
    return make_net("ab", [
        ("A", ["a0", "a1"], [], [0.3, 0.7]),
        ("B", ["b0", "b1"], ["A"], [0.9, 0.1, 0.2, 0.8]),
    ])


@pytest.fixture
def collider_net():
    return make_net("collider", [
        ("A", ["a0", "a1"], [], [0.5, 0.5]),
        ("B", ["b0", "b1"], [], [0.4, 0.6]),
        ("C", ["c0", "c1"], ["A", "B"], [0.9, 0.1, 0.5, 0.5, 0.3, 0.7, 0.2, 0.8]),
    ])


@pytest.fixture(scope="session")
def asia_net():
    return load("asia")


@pytest.fixture(scope="session")
def alarm_net():
    return load("alarm")


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    previous = kernels.set_backend(request.param)
    yield request.param
    kernels.set_backend(previous)

import pytest

from fibercomm.covers import build_cover, enumerate_subgroups, lift_map
from fibercomm.graph import MarkedGraph, OrientedEdge, rose
from fibercomm.maps import GraphMap


@pytest.fixture(scope="session")
def fib():
    """a -> ab, b -> a on the rank-2 rose; stretch = golden ratio."""
    g = rose(("a", "b"))
    return GraphMap(g, {"v0": "v0"}, {"a": ("a", "b"), "b": ("a",)})


@pytest.fixture(scope="session")
def plast():
    """a -> b, b -> c, c -> ab; stretch = plastic number (x^3 - x - 1)."""
    g = rose(("a", "b", "c"))
    return GraphMap(g, {"v0": "v0"}, {"a": ("b",), "b": ("c",), "c": ("a", "b")})


@pytest.fixture(scope="session")
def parity_subgroup():
    """Index-2 subgroup of F(a,b): words with even b-exponent sum."""
    subs = enumerate_subgroups(2, 2)
    for H in subs:
        if H.contains(("a",)) and not H.contains(("b",)) and H.contains(("b", "b")):
            return H
    raise AssertionError("parity subgroup not found")


@pytest.fixture(scope="session")
def double_cover(fib, parity_subgroup):
    return build_cover(fib.domain, parity_subgroup)


@pytest.fixture(scope="session")
def fib3_lift(fib, double_cover):
    lifted = lift_map(fib, double_cover, 3)
    assert lifted is not None
    return lifted


@pytest.fixture(scope="session")
def foldme():
    """Two edges out of u with equal images: foldable into a train track."""
    edges = {
        "e1": OrientedEdge("e1", "u", "w1"),
        "e2": OrientedEdge("e2", "u", "w2"),
        "c1": OrientedEdge("c1", "w1", "u"),
        "c2": OrientedEdge("c2", "w2", "u"),
    }
    g = MarkedGraph(("u", "w1", "w2"), edges, frozenset({"e1", "e2"}))
    return GraphMap(
        g,
        {"u": "u", "w1": "w2", "w2": "w2"},
        {
            "e1": ("e1", "c1", "e2"),
            "e2": ("e1", "c1", "e2"),
            "c1": ("c2",),
            "c2": ("c2", "e2", "c2"),
        },
    )

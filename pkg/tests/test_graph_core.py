"""Tests for graphs, spanning trees, tree paths, and sign classification."""
import pytest

from gogkit.errors import Disconnected, SameVertex
from gogkit.graph_core import (
    NEGATIVE,
    NEUTRAL,
    POSITIVE,
    FiniteGraph,
    classify,
    spanning_tree,
    tree_path,
    tree_path_oriented,
)


def graph(vertices, edges):
    return FiniteGraph(
        tuple(vertices),
        tuple(e for e, _, _ in edges),
        {e: a for e, a, _ in edges},
        {e: b for e, _, b in edges},
    )


def test_endpoint_validation():
    with pytest.raises(ValueError):
        graph(["a"], [("e", "a", "b")])


def test_spanning_tree_deterministic():
    g = graph(["a", "b", "c"], [("e1", "a", "b"), ("e2", "b", "c"), ("e3", "c", "a")])
    t = spanning_tree(g)
    # BFS from "a" reaches b via e1 and c via e3, leaving the cycle edge e2 out.
    assert t.edges == frozenset({"e1", "e3"})
    assert spanning_tree(g).edges == t.edges


def test_spanning_tree_tie_break_by_edge_id():
    g = graph(["a", "b"], [("e2", "a", "b"), ("e1", "b", "a")])
    assert spanning_tree(g).edges == frozenset({"e1"})


def test_disconnected_lists_components():
    g = graph(["a", "b", "c"], [("e", "a", "b")])
    with pytest.raises(Disconnected) as exc:
        spanning_tree(g)
    assert exc.value.components == [["a", "b"], ["c"]]


def test_tree_paths():
    g = graph(["a", "b", "c"], [("e1", "a", "b"), ("e2", "b", "c")])
    t = spanning_tree(g)
    assert tree_path(t, "a", "c") == ["e1", "e2"]
    assert tree_path_oriented(t, "a", "c") == [("e1", 1), ("e2", 1)]
    assert tree_path_oriented(t, "c", "a") == [("e2", -1), ("e1", -1)]
    assert tree_path(t, "b", "b") == []


def test_loops_never_enter_tree():
    g = graph(["a", "b"], [("l", "a", "a"), ("e", "a", "b")])
    assert spanning_tree(g).edges == frozenset({"e"})


def test_classify_amalgam(c4c6):
    signs = classify(c4c6.tree, "v", "w")
    assert signs.base_edge == "e"
    assert signs.vertex_signs == {"v": NEUTRAL, "w": POSITIVE}
    assert signs.edge_signs == {"e": NEUTRAL}


def test_classify_path_from_middle(c4c2c4):
    signs = classify(c4c2c4.tree, "m", "w")
    assert signs.base_edge == "e2"
    assert signs.vertex_signs == {"u": NEGATIVE, "m": NEUTRAL, "w": POSITIVE}
    assert signs.edge_signs == {"e1": NEGATIVE, "e2": NEUTRAL}


def test_classify_path_from_end(c4c2c4):
    signs = classify(c4c2c4.tree, "u", "w")
    assert signs.base_edge == "e1"
    assert signs.vertex_signs == {"u": NEUTRAL, "m": POSITIVE, "w": POSITIVE}
    assert signs.edge_signs == {"e1": NEUTRAL, "e2": POSITIVE}


def test_classify_same_vertex(c4c6):
    with pytest.raises(SameVertex):
        classify(c4c6.tree, "v", "v")

import pytest
from hypothesis import given
from hypothesis import strategies as st
import numpy as np

from netstar.corpus import random_connected_graph
from netstar.errors import DisconnectedGraph
from netstar.graph import Graph, figure1_graph, figure2_graph, path_graph, star_graph, two_vertex_graph


def test_star_graph_is_valid():
    assert star_graph(1).validate() == []
    assert star_graph(1).edge_star("v1") == ["e1"]


def test_tadpole_detected():
    g = Graph(("v1",), (("e1", "v1"),), (("i1", "v1", "v1"),))
    assert any(p.startswith("tadpole:") for p in g.validate())


def test_disconnected_pair_detected():
    g = Graph(("v1", "v2"), (("e1", "v1"), ("e2", "v2")), ())
    assert any(p.startswith("connectivity:") for p in g.validate())
    assert g.connectivity("v1", "v2") == (0, [])


def test_other_violations():
    assert Graph((), (), ()).validate()[0].startswith("empty:")
    g = Graph(("v1",), (("e1", "v1"), ("e1", "v1")), ())
    assert any(p.startswith("duplicate:") for p in g.validate())
    g = Graph(("v1",), (("e1", "v9"),), ())
    assert any(p.startswith("unknown-vertex:") for p in g.validate())
    g = two_vertex_graph(1, 1, 1, lengths=[-1.0])
    assert any(p.startswith("lengths:") for p in g.validate())


def test_figure1_shapes():
    g = figure1_graph()
    assert g.validate() == []
    assert g.edge_star("v1") == ["e1", "e2", "e3", "i1", "i2", "i3", "i4", "i5"]
    assert g.degree("v1") == 8
    # external edges precede internal ones in every edge star
    assert g.edge_star("v2") == ["e4", "e5", "i1", "i2", "i3", "i4", "i5"]
    assert g.degree("v2") == 7
    assert g.connectivity("v1", "v2")[0] == 5
    assert g.n_external + 2 * g.n_internal == 15


def test_figure2_shapes():
    g = figure2_graph()
    assert g.validate() == []
    assert (g.n_external, g.n_internal) == (7, 6)
    assert g.degree("v1") == 8
    assert g.connectivity("v1", "v2")[0] == 3
    assert g.connectivity("v2", "v3")[0] == 1
    assert g.connectivity("v1", "v3")[0] == 2
    assert g.connectivity("v2", "v1") == g.connectivity("v1", "v2")


def test_composition_order_path():
    g = path_graph(3)
    order, bars = g.composition_order("v1")
    assert order == ["v1", "v2", "v3"]
    assert bars == [[], ["i1"], ["i2"]]


def test_composition_order_figure2():
    order, bars = figure2_graph().composition_order("v1")
    assert order == ["v1", "v2", "v3"]
    assert [len(b) for b in bars] == [0, 3, 3]


def test_composition_order_single_vertex():
    assert star_graph(2).composition_order() == (["v1"], [[]])


def test_composition_order_disconnected():
    g = Graph(("v1", "v2"), (("e1", "v1"), ("e2", "v2")), ())
    with pytest.raises(DisconnectedGraph):
        g.composition_order()


def test_incidence_index_is_vertex_major():
    g = figure1_graph()
    idx = g.incidence_index()
    assert len(idx) == 15
    assert idx[:8] == [(e, "v1") for e in g.edge_star("v1")]
    assert idx[8:] == [(e, "v2") for e in g.edge_star("v2")]


@given(st.integers(0, 2**32 - 1), st.integers(1, 6))
def test_random_graphs_valid(seed, n):
    g = random_connected_graph(np.random.default_rng(seed), n)
    assert g.validate() == []
    order, bars = g.composition_order()
    assert sorted(order) == sorted(g.vertices)
    # every internal edge is glued exactly once
    assert sorted(i for b in bars for i in b) == sorted(g.internal_ids)
    assert sum(g.degree(v) for v in g.vertices) == g.n_external + 2 * g.n_internal


@given(st.integers(0, 2**32 - 1), st.integers(2, 6))
def test_composition_order_any_start(seed, n):
    g = random_connected_graph(np.random.default_rng(seed), n)
    for v in g.vertices:
        order, bars = g.composition_order(v)
        assert order[0] == v
        for k in range(1, len(order)):
            assert bars[k], "each new vertex must be adjacent to its predecessors"

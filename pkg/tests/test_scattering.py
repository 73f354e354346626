import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netstar import blocklin
from netstar.corpus import random_connected_graph, random_unitary, random_unitary_data, swap_matrix
from netstar.errors import (
    DataMismatch,
    MissingLengths,
    NonComposable,
    NonInvertibleInteriorBlock,
    NonpositiveEnergy,
    SizeGuardExceeded,
)
from netstar.graph import Graph, figure1_graph, figure2_graph, path_graph, star_graph, two_vertex_graph
from netstar.scattering import (
    assemble_lagrangian,
    compose_iterative,
    connecting_from_metric,
    exterior_inverse_check,
    grassmann_verify,
    make_network_data,
    metric_network_data,
    reduce,
    star_product,
)

from oracles import cofactor_det


def literal_two_vertex_schur(X1, X2, V, p):
    """Schur complement of the displayed 2x2 block layout, with numpy only."""
    n1, m1 = X1.shape[0] - p, X2.shape[0] - p
    A, B, C, D = X1[:n1, :n1], X1[:n1, n1:], X1[n1:, :n1], X1[n1:, n1:]
    E, F, G, H = X2[:m1, :m1], X2[:m1, m1:], X2[m1:, :m1], X2[m1:, m1:]
    Vi = np.linalg.inv(V)
    Z = np.zeros
    ext = np.block([[A, Z((n1, m1))], [Z((m1, n1)), E]])
    ei = np.block([[B, Z((n1, p))], [Z((m1, p)), F]])
    ie = np.block([[C, Z((p, m1))], [Z((p, n1)), G]])
    T = np.block([[D, -Vi], [-V, H]])
    return ext - ei @ np.linalg.inv(T) @ ie, T


def two_vertex_instance(rng, n1, m1, p):
    X1, X2, V = random_unitary(n1 + p, rng), random_unitary(m1 + p, rng), random_unitary(p, rng)
    g = two_vertex_graph(n1, m1, p)
    return g, X1, X2, V, make_network_data(g, {"v1": X1, "v2": X2}, {("v1", "v2"): V})


# --- metric connecting matrices -------------------------------------------

def test_connecting_from_metric_examples():
    g = two_vertex_graph(1, 1, 1, lengths=[1.0])
    np.testing.assert_allclose(connecting_from_metric(g, "v1", "v2", np.pi**2), [[-1]], atol=1e-15)
    g2 = two_vertex_graph(1, 1, 2, lengths=[1.0, 2.0])
    V = connecting_from_metric(g2, "v1", "v2", 4.0)
    np.testing.assert_allclose(V, np.diag(np.exp([2j, 4j])))
    assert blocklin.unitarity_defect(V) <= 1e-14
    np.testing.assert_allclose(connecting_from_metric(g2, "v2", "v1", 4.0) @ V, np.eye(2), atol=1e-15)


def test_connecting_from_metric_errors():
    g = two_vertex_graph(1, 1, 1, lengths=[1.0])
    with pytest.raises(NonpositiveEnergy):
        connecting_from_metric(g, "v1", "v2", 0.0)
    with pytest.raises(MissingLengths):
        connecting_from_metric(two_vertex_graph(1, 1, 1), "v1", "v2", 1.0)


# --- assembly and reduction -----------------------------------------------

def test_lagrangian_sizes(rng):
    for g, size in [(figure1_graph(), 15), (figure2_graph(), 19)]:
        L = assemble_lagrangian(g, random_unitary_data(g, rng))
        assert L.entries.shape == (size, size)


def test_lagrangian_block_layout(rng):
    g, X1, X2, V, data = two_vertex_instance(rng, 1, 2, 2)
    L = assemble_lagrangian(g, data)
    # incidence order: (e1,v1) (i1,v1) (i2,v1) (e2,v2) (e3,v2) (i1,v2) (i2,v2)
    np.testing.assert_allclose(L.entries[:3, :3], X1)
    np.testing.assert_allclose(L.entries[3:, 3:], X2)
    np.testing.assert_allclose(L.entries[1:3, 5:7], -np.linalg.inv(V), atol=1e-14)
    np.testing.assert_allclose(L.entries[5:7, 1:3], -V)
    assert not np.any(L.entries[0, 3:])


def test_single_vertex(rng):
    g = star_graph(3)
    X = random_unitary(3, rng)
    data = make_network_data(g, {"v1": X}, {})
    L = assemble_lagrangian(g, data)
    np.testing.assert_array_equal(L.entries, X)
    red = reduce(L)
    np.testing.assert_allclose(red.K, X)
    assert red.det_T == 1
    it = compose_iterative(g, data)
    np.testing.assert_array_equal(it.K, X)
    assert it.det_T == 1
    assert exterior_inverse_check(L, red.K) <= 1e-14


def test_reduce_matches_literal_block_form(rng):
    for n1, m1, p in [(1, 1, 1), (2, 1, 3), (0, 2, 2), (3, 3, 1)]:
        g, X1, X2, V, data = two_vertex_instance(rng, n1, m1, p)
        red = reduce(assemble_lagrangian(g, data))
        K, T = literal_two_vertex_schur(X1, X2, V, p)
        assert blocklin.max_abs(red.K - K) <= 1e-12
        assert abs(red.det_T - cofactor_det(T)) <= 1e-12
        assert red.diagnostics["unitarity_defect"] <= 1e-12
        assert red.diagnostics["det_defect"] <= 1e-12


def test_reduce_singular_interior():
    g = two_vertex_graph(1, 1, 1)
    data = make_network_data(g, {"v1": np.eye(2), "v2": np.eye(2)}, {("v1", "v2"): [[1.0]]})
    with pytest.raises(NonInvertibleInteriorBlock) as err:
        reduce(assemble_lagrangian(g, data))
    assert "interior" in str(err.value)


def test_assemble_rejects_bad_data(rng):
    g = two_vertex_graph(1, 1, 1)
    with pytest.raises(DataMismatch):
        assemble_lagrangian(g, make_network_data(g, {"v1": np.eye(2), "v2": np.eye(3)}, {("v1", "v2"): [[1]]}))
    with pytest.raises(DataMismatch):
        assemble_lagrangian(g, make_network_data(g, {"v1": np.eye(2), "v2": np.eye(2)}, {}))


def test_reverse_connecting_matrix_is_inverted(rng):
    g, X1, X2, V, data = two_vertex_instance(rng, 1, 1, 2)
    flipped = make_network_data(g, {"v1": X1, "v2": X2}, {("v2", "v1"): np.linalg.inv(V)})
    np.testing.assert_allclose(flipped.V("v1", "v2"), V, atol=1e-14)
    np.testing.assert_allclose(flipped.V("v2", "v1") @ V, np.eye(2), atol=1e-14)


# --- exterior inverse check -----------------------------------------------

def test_exterior_inverse_check(rng):
    g = figure2_graph()
    L = assemble_lagrangian(g, random_unitary_data(g, rng))
    K = reduce(L).K
    assert exterior_inverse_check(L, K) <= 1e-9
    perturbed = K.copy()
    perturbed[0, 0] += 1e-3
    assert exterior_inverse_check(L, perturbed) > 1e-9


# --- star product ---------------------------------------------------------

def test_star_product_perfect_transmission():
    S = swap_matrix()
    np.testing.assert_allclose(star_product(S, S, [[1.0]], 1), S)


@pytest.mark.parametrize("theta", [0.3, 1.0, 2.5])
def test_star_product_phase(theta):
    S = swap_matrix()
    K = star_product(S, S, [[np.exp(1j * theta)]], 1)
    np.testing.assert_allclose(K, [[0, np.exp(-1j * theta)], [np.exp(1j * theta), 0]], atol=1e-15)
    g = two_vertex_graph(1, 1, 1)
    data = make_network_data(g, {"v1": S, "v2": S}, {("v1", "v2"): [[np.exp(1j * theta)]]})
    np.testing.assert_allclose(reduce(assemble_lagrangian(g, data)).K, K, atol=1e-15)


def test_star_product_figure1_shapes(rng):
    K = star_product(random_unitary(8, rng), random_unitary(7, rng), random_unitary(5, rng), 5)
    assert K.shape == (5, 5)
    assert blocklin.unitarity_defect(K) <= 1e-10


@given(st.integers(0, 4), st.integers(0, 4), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_star_equals_schur(n1, m1, p, seed):
    rng = np.random.default_rng(seed)
    g, X1, X2, V, data = two_vertex_instance(rng, n1, m1, p)
    K = star_product(X1, X2, V, p)
    red = reduce(assemble_lagrangian(g, data))
    assert blocklin.max_abs(K - red.K) <= 1e-9
    assert blocklin.unitarity_defect(K) <= 1e-9


def test_star_product_noncomposable():
    # D = H = 1 and V = 1 make the resolvent 1 - V D V^-1 H vanish
    X = np.eye(2)
    with pytest.raises(NonComposable):
        star_product(X, X, [[1.0]], 1)


def test_star_product_shape_error():
    with pytest.raises(DataMismatch):
        star_product(np.eye(2), np.eye(2), np.eye(2), 3)


# --- iterative composition ------------------------------------------------

def test_compose_path_of_swaps():
    g = path_graph(3)
    S = swap_matrix()
    data = make_network_data(g, {v: S for v in g.vertices}, {("v1", "v2"): [[1]], ("v2", "v3"): [[1]]})
    np.testing.assert_allclose(compose_iterative(g, data).K, S)
    np.testing.assert_allclose(reduce(assemble_lagrangian(g, data)).K, S)


def test_compose_figure2(rng):
    g = figure2_graph()
    data = random_unitary_data(g, rng)
    red = reduce(assemble_lagrangian(g, data))
    it = compose_iterative(g, data)
    assert blocklin.max_abs(it.K - red.K) <= 1e-9
    assert abs(it.det_T - red.det_T) <= 1e-9 * abs(red.det_T)
    assert red.diagnostics["unitarity_defect"] <= 1e-10
    assert it.diagnostics["order"] == ["v1", "v2", "v3"]
    assert len(it.diagnostics["step_det_T"]) == 3


def test_compose_order_independence(rng):
    g = figure2_graph()
    data = random_unitary_data(g, rng)
    ref = reduce(assemble_lagrangian(g, data))
    for order in (["v1", "v2", "v3"], ["v3", "v1", "v2"], ["v2", "v3", "v1"], ["v3", "v2", "v1"]):
        it = compose_iterative(g, data, order=order)
        assert blocklin.max_abs(it.K - ref.K) <= 1e-9
        assert abs(it.det_T - ref.det_T) <= 1e-9 * abs(ref.det_T)


def test_compose_rejects_bad_order(rng):
    g = path_graph(3)
    data = random_unitary_data(g, rng)
    with pytest.raises(DataMismatch):
        compose_iterative(g, data, order=["v1", "v3", "v2"])
    with pytest.raises(DataMismatch):
        compose_iterative(g, data, order=["v1", "v2"])


def test_compose_reports_failing_step():
    g = path_graph(3)
    I2 = np.eye(2)
    data = make_network_data(
        g, {"v1": swap_matrix(), "v2": I2, "v3": I2}, {("v1", "v2"): [[1]], ("v2", "v3"): [[1]]}
    )
    with pytest.raises(NonComposable) as err:
        compose_iterative(g, data)
    assert err.value.step == 3


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1), st.integers(2, 6))
def test_compose_equals_reduce(seed, n):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(rng, n)
    data = random_unitary_data(g, rng)
    L = assemble_lagrangian(g, data)
    red = reduce(L)
    it = compose_iterative(g, data)
    assert blocklin.max_abs(it.K - red.K) <= 1e-8
    assert abs(it.det_T - red.det_T) <= 1e-8 * abs(red.det_T)
    assert max(it.diagnostics["step_unitarity_defect"]) <= 1e-9
    assert red.diagnostics["det_defect"] <= 1e-8
    assert exterior_inverse_check(L, red.K) <= 1e-9


def test_metric_data_is_unitary_for_all_energies(rng):
    g0 = figure2_graph()
    g = Graph(g0.vertices, g0.external_edges, g0.internal_edges, {i: 1.0 + k / 7 for k, i in enumerate(g0.internal_ids)})
    X = {v: random_unitary(g.degree(v), rng) for v in g.vertices}
    for E in (0.1, 1.0, 7.3, 50.0):
        red = reduce(assemble_lagrangian(g, metric_network_data(g, X, E)))
        assert red.diagnostics["unitarity_defect"] <= 1e-10


# --- symbolic check -------------------------------------------------------

def test_grassmann_verify_examples(rng):
    g = two_vertex_graph(1, 1, 1)
    assert grassmann_verify(g, random_unitary_data(g, rng)).defect <= 1e-10
    g = star_graph(2)
    rep = grassmann_verify(g, random_unitary_data(g, rng))
    assert rep.defect == 0 and rep.det_T == 1
    g = path_graph(3)
    assert grassmann_verify(g, random_unitary_data(g, rng)).defect <= 1e-10


def test_grassmann_verify_size_guard(rng):
    g = figure1_graph()
    with pytest.raises(SizeGuardExceeded):
        grassmann_verify(g, random_unitary_data(g, rng))

"""Random and fixed test instances shared by the self-test, scripts and tests."""

from __future__ import annotations

import numpy as np

from .graph import Graph, figure1_graph, figure2_graph, path_graph, star_graph, two_vertex_graph
from .scattering import NetworkData, make_network_data


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR with the phase fix."""
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


def random_complex(n: int, rng: np.random.Generator, m: int | None = None) -> np.ndarray:
    m = n if m is None else m
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))


def random_spd(n: int, rng: np.random.Generator, floor: float = 0.1) -> np.ndarray:
    M = rng.standard_normal((n, n))
    return M @ M.T + floor * np.eye(n)


def random_connected_graph(
    rng: np.random.Generator,
    n_vertices: int,
    max_channels: int = 3,
    max_external: int = 2,
    extra_edge_prob: float = 0.4,
) -> Graph:
    """Random spanning tree plus extra adjacencies, 1..max_channels parallel
    lines per adjacent pair, 0..max_external external edges per vertex (at
    least one overall)."""
    vs = [f"v{k + 1}" for k in range(n_vertices)]
    pairs = []
    for k in range(1, n_vertices):
        pairs.append((vs[int(rng.integers(k))], vs[k]))
    for a in range(n_vertices):
        for b in range(a + 1, n_vertices):
            if (vs[a], vs[b]) not in pairs and (vs[b], vs[a]) not in pairs and rng.random() < extra_edge_prob:
                pairs.append((vs[a], vs[b]))
    internal = []
    for u, w in pairs:
        for _ in range(int(rng.integers(1, max_channels + 1))):
            internal.append((f"i{len(internal) + 1}", u, w))
    order = rng.permutation(len(internal))
    internal = [(f"i{k + 1}", internal[j][1], internal[j][2]) for k, j in enumerate(order)]
    ext = []
    for v in vs:
        for _ in range(int(rng.integers(0, max_external + 1))):
            ext.append((f"e{len(ext) + 1}", v))
    if not ext:
        ext.append(("e1", vs[int(rng.integers(n_vertices))]))
    return Graph(tuple(vs), tuple(ext), tuple(internal))


def random_unitary_data(g: Graph, rng: np.random.Generator) -> NetworkData:
    X = {v: random_unitary(g.degree(v), rng) for v in g.vertices}
    V = {}
    for a, v in enumerate(g.vertices):
        for w in g.vertices[a + 1:]:
            k, _ = g.connectivity(v, w)
            if k:
                V[(v, w)] = random_unitary(k, rng)
    return make_network_data(g, X, V)


def random_positive_data(g: Graph, rng: np.random.Generator, noise: float = 0.5) -> NetworkData:
    """Real symmetric ``X(v) = 3 I + noise * sym`` and orthogonal ``V``,
    rescaled so that every ``X(v) > (n(V) - 1) I`` with margin."""
    floor = max(2.0, float(g.n_vertices - 1)) + 1.0
    X = {}
    for v in g.vertices:
        n = g.degree(v)
        S = rng.standard_normal((n, n))
        S = (S + S.T) / 2
        S *= noise / max(1.0, np.linalg.norm(S, 2))
        X[v] = floor * np.eye(n) + S
    V = {}
    for a, v in enumerate(g.vertices):
        for w in g.vertices[a + 1:]:
            k, _ = g.connectivity(v, w)
            if k:
                V[(v, w)] = random_orthogonal(k, rng)
    return make_network_data(g, X, V)


def swap_matrix() -> np.ndarray:
    """Perfect transmission between two channels."""
    return np.array([[0, 1], [1, 0]], dtype=complex)


def small_corpus(rng: np.random.Generator) -> list[tuple[str, Graph, NetworkData]]:
    """Graphs with |E| + 2|I| <= 10 and random unitary data, for the
    symbolic end-to-end check."""
    graphs = [
        ("star-1", star_graph(1)),
        ("star-3", star_graph(3)),
        ("two-vertex-1-1-1", two_vertex_graph(1, 1, 1)),
        ("two-vertex-2-1-1", two_vertex_graph(2, 1, 1)),
        ("two-vertex-1-1-2", two_vertex_graph(1, 1, 2)),
        ("two-vertex-1-0-2", two_vertex_graph(1, 0, 2)),
        ("two-vertex-1-1-3", two_vertex_graph(1, 1, 3)),
        ("two-vertex-1-1-4", two_vertex_graph(1, 1, 4)),
        ("path-3", path_graph(3)),
        ("path-3-all", path_graph(3, ends_only=False)),
        ("triangle", Graph(
            ("v1", "v2", "v3"),
            (("e1", "v1"), ("e2", "v2"), ("e3", "v3")),
            (("i1", "v1", "v2"), ("i2", "v2", "v3"), ("i3", "v1", "v3")),
        )),
        ("path-4", path_graph(4)),
    ]
    return [(name, g, random_unitary_data(g, rng)) for name, g in graphs]


__all__ = [
    "figure1_graph",
    "figure2_graph",
    "path_graph",
    "random_complex",
    "random_connected_graph",
    "random_orthogonal",
    "random_positive_data",
    "random_spd",
    "random_unitary",
    "random_unitary_data",
    "small_corpus",
    "star_graph",
    "swap_matrix",
    "two_vertex_graph",
]

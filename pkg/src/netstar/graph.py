"""Finite noncompact graphs with fixed orderings.

Vertex and edge ids are opaque strings. Every ordering used downstream is
the list position in the input: vertices in ``vertices`` order, edges with
all external edges first and then the internal ones. Incidence pairs
``(edge, vertex)`` are ordered by vertex first, then by edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import DisconnectedGraph


@dataclass(frozen=True)
class Graph:
    vertices: tuple[str, ...]
    external_edges: tuple[tuple[str, str], ...]
    internal_edges: tuple[tuple[str, str, str], ...]
    lengths: Mapping[str, float] | None = None
    _edge_pos: dict = field(init=False, repr=False, compare=False)
    _vertex_pos: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "external_edges", tuple(tuple(e) for e in self.external_edges))
        object.__setattr__(self, "internal_edges", tuple(tuple(i) for i in self.internal_edges))
        if self.lengths is not None:
            object.__setattr__(self, "lengths", dict(self.lengths))
        order = [e for e, _ in self.external_edges] + [i for i, _, _ in self.internal_edges]
        object.__setattr__(self, "_edge_pos", {e: k for k, e in enumerate(order)})
        object.__setattr__(self, "_vertex_pos", {v: k for k, v in enumerate(self.vertices)})

    # sizes and lookups

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_external(self) -> int:
        return len(self.external_edges)

    @property
    def n_internal(self) -> int:
        return len(self.internal_edges)

    @property
    def is_metric(self) -> bool:
        return self.lengths is not None

    @property
    def external_ids(self) -> list[str]:
        return [e for e, _ in self.external_edges]

    @property
    def internal_ids(self) -> list[str]:
        return [i for i, _, _ in self.internal_edges]

    @property
    def edge_ids(self) -> list[str]:
        return self.external_ids + self.internal_ids

    def edge_position(self, edge: str) -> int:
        return self._edge_pos[edge]

    def vertex_position(self, v: str) -> int:
        return self._vertex_pos[v]

    def is_external(self, edge: str) -> bool:
        return self._edge_pos[edge] < self.n_external

    def endpoints(self, edge: str) -> tuple[str, ...]:
        k = self._edge_pos[edge]
        if k < self.n_external:
            return (self.external_edges[k][1],)
        _, a, b = self.internal_edges[k - self.n_external]
        return (a, b)

    # structure queries

    def edge_star(self, v: str) -> list[str]:
        """Edges terminating at ``v`` in edge order."""
        if v not in self._vertex_pos:
            raise KeyError(v)
        return [e for e in self.edge_ids if v in self.endpoints(e)]

    def degree(self, v: str) -> int:
        return len(self.edge_star(v))

    def shared_edges(self, v: str, w: str) -> list[str]:
        """Internal edges joining ``v`` and ``w`` (``v != w``), in edge order."""
        if v == w:
            raise ValueError("shared_edges needs two distinct vertices")
        return [i for i, a, b in self.internal_edges if {a, b} == {v, w}]

    def connectivity(self, v: str, w: str) -> tuple[int, list[str]]:
        edges = self.shared_edges(v, w)
        return len(edges), edges

    def neighbours(self, v: str) -> list[str]:
        out = set()
        for _, a, b in self.internal_edges:
            if a == v and b != v:
                out.add(b)
            elif b == v and a != v:
                out.add(a)
        return sorted(out, key=self._vertex_pos.__getitem__)

    def incidence_index(self) -> list[tuple[str, str]]:
        """The ordered incidence pairs ``(edge, vertex)``, vertex-major."""
        return [(e, v) for v in self.vertices for e in self.edge_star(v)]

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            for w in self.neighbours(stack.pop()):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def validate(self) -> list[str]:
        """List of violated invariants; an empty list means the graph is valid."""
        problems = []
        if not self.vertices:
            return ["empty: the graph has no vertices"]
        if len(set(self.vertices)) != len(self.vertices):
            problems.append("duplicate: vertex ids are not unique")
        ids = self.edge_ids
        if len(set(ids)) != len(ids):
            problems.append("duplicate: edge ids are not unique")
        known = set(self.vertices)
        for e, v in self.external_edges:
            if v not in known:
                problems.append(f"unknown-vertex: external edge {e} ends at unknown vertex {v}")
        for i, a, b in self.internal_edges:
            for v in (a, b):
                if v not in known:
                    problems.append(f"unknown-vertex: internal edge {i} ends at unknown vertex {v}")
            if a == b:
                problems.append(f"tadpole: internal edge {i} starts and ends at {a}")
        if problems:
            return problems
        for v in self.vertices:
            if self.degree(v) == 0:
                problems.append(f"degree: vertex {v} has no incident edges")
        if not self.is_connected():
            problems.append("connectivity: the graph is not connected")
        if self.n_internal < self.n_vertices - 1:
            problems.append("connectivity: fewer internal edges than n(V) - 1")
        if self.lengths is not None:
            if set(self.lengths) != set(self.internal_ids):
                problems.append("lengths: lengths must cover exactly the internal edges")
            for i, a in self.lengths.items():
                if not a > 0:
                    problems.append(f"lengths: edge {i} has non-positive length {a}")
        return problems

    def composition_order(self, start: str | None = None) -> tuple[list[str], list[list[str]]]:
        """Vertex order for the iterative composition.

        Each new vertex is adjacent to the ones already chosen; ties go to
        the earliest vertex in the fixed order. Returns the order and, per
        step, the edges joining the new vertex to its predecessors (empty
        for the first vertex).
        """
        if start is None:
            start = self.vertices[0]
        if start not in self._vertex_pos:
            raise KeyError(start)
        order = [start]
        chosen = {start}
        bars: list[list[str]] = [[]]
        while len(order) < self.n_vertices:
            nxt = None
            for v in self.vertices:
                if v not in chosen and any(self.shared_edges(u, v) for u in order):
                    nxt = v
                    break
            if nxt is None:
                raise DisconnectedGraph(f"no vertex adjacent to {sorted(chosen)}")
            shared = {i for u in order for i in self.shared_edges(u, nxt)}
            bars.append([i for i in self.internal_ids if i in shared])
            order.append(nxt)
            chosen.add(nxt)
        return order, bars


def star_graph(n_external: int, vertex: str = "v1") -> Graph:
    return Graph((vertex,), tuple((f"e{k + 1}", vertex) for k in range(n_external)), ())


def two_vertex_graph(n1: int, m1: int, p: int, lengths: list[float] | None = None) -> Graph:
    """Vertices ``v1, v2`` with ``n1`` and ``m1`` external edges joined by ``p`` lines."""
    ext = [(f"e{k + 1}", "v1") for k in range(n1)] + [(f"e{n1 + k + 1}", "v2") for k in range(m1)]
    internal = [(f"i{k + 1}", "v1", "v2") for k in range(p)]
    lens = None if lengths is None else {f"i{k + 1}": a for k, a in enumerate(lengths)}
    return Graph(("v1", "v2"), tuple(ext), tuple(internal), lens)


def path_graph(n: int, ends_only: bool = True) -> Graph:
    """``n`` vertices in a line, one external edge at each end (or at every vertex)."""
    vs = tuple(f"v{k + 1}" for k in range(n))
    if ends_only and n > 1:
        ext = (("e1", vs[0]), ("e2", vs[-1]))
    else:
        ext = tuple((f"e{k + 1}", v) for k, v in enumerate(vs))
    internal = tuple((f"i{k + 1}", vs[k], vs[k + 1]) for k in range(n - 1))
    return Graph(vs, ext, internal)


def figure1_graph() -> Graph:
    """Two vertices, 3 + 2 external edges, 5 parallel internal edges."""
    return Graph(
        ("v1", "v2"),
        (("e1", "v1"), ("e2", "v1"), ("e3", "v1"), ("e4", "v2"), ("e5", "v2")),
        tuple((f"i{k}", "v1", "v2") for k in range(1, 6)),
    )


def figure2_graph() -> Graph:
    """Three vertices, 7 external and 6 internal edges (n(v1,v2)=3, n(v1,v3)=2, n(v2,v3)=1)."""
    return Graph(
        ("v1", "v2", "v3"),
        (("e1", "v1"), ("e2", "v1"), ("e3", "v1"), ("e4", "v2"), ("e5", "v2"), ("e6", "v3"), ("e7", "v3")),
        (
            ("i1", "v1", "v2"), ("i2", "v1", "v2"), ("i3", "v1", "v2"),
            ("i4", "v1", "v3"), ("i5", "v1", "v3"),
            ("i6", "v2", "v3"),
        ),
    )

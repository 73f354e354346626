"""JSON network documents.

Layout::

    {
      "vertices": ["v1", "v2"],
      "external_edges": [{"id": "e1", "vertex": "v1"}, ...],
      "internal_edges": [{"id": "i1", "from": "v1", "to": "v2", "length": 1.0}, ...],
      "vertex_matrices": {"v1": {"index_order": ["e1", "i1"], "data": [[re, im], ...]}},
      "connecting_matrices": {"v1|v2": {"index_order": ["i1"], "data": [[re, im]]}}
    }

Matrix data is row-major with every entry a two-element ``[re, im]`` list.
``length`` is optional but must then be given for every internal edge;
connecting matrices and lengths are mutually exclusive sources of ``V``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from .errors import DataMismatch, NetstarError
from .graph import Graph
from .scattering import NetworkData, check_data, make_network_data, metric_network_data


class DocumentError(NetstarError):
    """The document is malformed (not a validation failure)."""


@dataclass
class LabelledMatrix:
    index_order: list[str]
    data: np.ndarray

    def __eq__(self, other):
        return (
            isinstance(other, LabelledMatrix)
            and self.index_order == other.index_order
            and self.data.shape == other.data.shape
            and np.array_equal(self.data, other.data)
        )


@dataclass
class NetworkDocument:
    graph: Graph
    vertex_matrices: dict[str, LabelledMatrix]
    connecting_matrices: dict[tuple[str, str], LabelledMatrix] | None = None

    @property
    def is_metric(self) -> bool:
        return self.graph.is_metric


def encode_matrix(index_order, M) -> dict:
    M = np.asarray(M, dtype=complex)
    return {
        "index_order": list(index_order),
        "data": [[float(z.real), float(z.imag)] for z in M.ravel()],
    }


def decode_matrix(obj: Any, where: str) -> LabelledMatrix:
    if not isinstance(obj, dict) or "index_order" not in obj or "data" not in obj:
        raise DocumentError(f"{where}: matrix needs 'index_order' and 'data'")
    order = obj["index_order"]
    data = obj["data"]
    if not isinstance(order, list) or not all(isinstance(s, str) for s in order):
        raise DocumentError(f"{where}: index_order must be a list of edge ids")
    if not isinstance(data, list):
        raise DocumentError(f"{where}: data must be a list of [re, im] pairs")
    n = len(order)
    if len(data) != n * n:
        raise DocumentError(f"{where}: expected {n * n} entries for a {n}x{n} matrix, got {len(data)}")
    vals = []
    for z in data:
        if (
            not isinstance(z, list)
            or len(z) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in z)
        ):
            raise DocumentError(f"{where}: entries must be [re, im] number pairs, got {z!r}")
        vals.append(complex(z[0], z[1]))
    return LabelledMatrix(order, np.array(vals, dtype=complex).reshape(n, n))


def _require(obj: dict, key: str, kind, where: str):
    if key not in obj:
        raise DocumentError(f"{where}: missing key {key!r}")
    if not isinstance(obj[key], kind):
        raise DocumentError(f"{where}: {key!r} has the wrong type")
    return obj[key]


def parse_document(obj: Any) -> NetworkDocument:
    if not isinstance(obj, dict):
        raise DocumentError("document must be a JSON object")
    vertices = _require(obj, "vertices", list, "document")
    if not all(isinstance(v, str) for v in vertices):
        raise DocumentError("vertices must be strings")
    ext = []
    for k, e in enumerate(_require(obj, "external_edges", list, "document")):
        where = f"external_edges[{k}]"
        if not isinstance(e, dict):
            raise DocumentError(f"{where}: expected an object")
        ext.append((_require(e, "id", str, where), _require(e, "vertex", str, where)))
    internal = []
    lengths = {}
    for k, e in enumerate(_require(obj, "internal_edges", list, "document")):
        where = f"internal_edges[{k}]"
        if not isinstance(e, dict):
            raise DocumentError(f"{where}: expected an object")
        iid = _require(e, "id", str, where)
        internal.append((iid, _require(e, "from", str, where), _require(e, "to", str, where)))
        if "length" in e:
            a = e["length"]
            if not isinstance(a, (int, float)) or isinstance(a, bool):
                raise DocumentError(f"{where}: length must be a number")
            lengths[iid] = float(a)
    graph = Graph(tuple(vertices), tuple(ext), tuple(internal), lengths or None)

    vm = {}
    for v, m in _require(obj, "vertex_matrices", dict, "document").items():
        vm[v] = decode_matrix(m, f"vertex_matrices[{v}]")
    cm = None
    if obj.get("connecting_matrices") is not None:
        raw = obj["connecting_matrices"]
        if not isinstance(raw, dict):
            raise DocumentError("connecting_matrices must be an object")
        cm = {}
        for key, m in raw.items():
            parts = key.split("|")
            if len(parts) != 2 or not all(parts):
                raise DocumentError(f"connecting_matrices: key {key!r} is not of the form 'v|w'")
            cm[(parts[0], parts[1])] = decode_matrix(m, f"connecting_matrices[{key}]")
    return NetworkDocument(graph, vm, cm)


def serialize_document(doc: NetworkDocument) -> dict:
    g = doc.graph
    internal = []
    for iid, a, b in g.internal_edges:
        item = {"id": iid, "from": a, "to": b}
        if g.lengths is not None and iid in g.lengths:
            item["length"] = g.lengths[iid]
        internal.append(item)
    out = {
        "vertices": list(g.vertices),
        "external_edges": [{"id": e, "vertex": v} for e, v in g.external_edges],
        "internal_edges": internal,
        "vertex_matrices": {v: encode_matrix(m.index_order, m.data) for v, m in doc.vertex_matrices.items()},
    }
    if doc.connecting_matrices is not None:
        out["connecting_matrices"] = {
            f"{v}|{w}": encode_matrix(m.index_order, m.data) for (v, w), m in doc.connecting_matrices.items()
        }
    return out


def load_document(path) -> NetworkDocument:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: invalid JSON ({exc})") from None
    return parse_document(obj)


def dump_document(doc: NetworkDocument, path) -> None:
    Path(path).write_text(json.dumps(serialize_document(doc), indent=1) + "\n", encoding="utf-8")


def document_problems(doc: NetworkDocument) -> list[str]:
    """Validation diagnostics for a parsed document (empty when valid)."""
    g = doc.graph
    problems = g.validate()
    if problems:
        return problems
    has_lengths = g.lengths is not None
    if g.n_internal and has_lengths == (doc.connecting_matrices is not None):
        problems.append(
            "v-source: exactly one of connecting_matrices or internal edge lengths must supply V"
        )
    for v in g.vertices:
        m = doc.vertex_matrices.get(v)
        if m is None:
            problems.append(f"missing: no vertex matrix for {v}")
        elif m.index_order != g.edge_star(v):
            problems.append(f"index-order: X({v}) index_order {m.index_order} != edge star {g.edge_star(v)}")
    for v in doc.vertex_matrices:
        if v not in g.vertices:
            problems.append(f"unknown: vertex matrix for unknown vertex {v}")
    if doc.connecting_matrices is not None:
        for (v, w), m in doc.connecting_matrices.items():
            if v not in g.vertices or w not in g.vertices or v == w:
                problems.append(f"unknown: connecting matrix key {v}|{w}")
                continue
            shared = g.shared_edges(v, w)
            if m.index_order != shared:
                problems.append(f"index-order: V({v},{w}) index_order {m.index_order} != shared edges {shared}")
    if problems:
        return problems
    if doc.connecting_matrices is not None or not g.n_internal:
        try:
            problems.extend(check_data(g, to_network_data(doc)))
        except NetstarError as exc:
            problems.append(f"data: {exc}")
    return problems


def to_network_data(doc: NetworkDocument, energy: float | None = None) -> NetworkData:
    X = {v: m.data for v, m in doc.vertex_matrices.items()}
    if doc.connecting_matrices is None and doc.graph.n_internal:
        if energy is None:
            raise DataMismatch("metric document needs an energy")
        return metric_network_data(doc.graph, X, energy)
    V = {k: m.data for k, m in (doc.connecting_matrices or {}).items()}
    return make_network_data(doc.graph, X, V)


def build_document(g: Graph, data: NetworkData | None = None, X=None) -> NetworkDocument:
    """Document for ``g`` from network data (or only vertex matrices for a metric graph)."""
    if data is not None:
        X = data.vertex_matrices
    vm = {v: LabelledMatrix(g.edge_star(v), np.asarray(X[v], dtype=complex)) for v in g.vertices}
    cm = None
    if data is not None and not g.is_metric:
        cm = {
            (v, w): LabelledMatrix(g.shared_edges(v, w), np.asarray(m, dtype=complex))
            for (v, w), m in data.connecting_matrices.items()
        }
    return NetworkDocument(g, vm, cm)

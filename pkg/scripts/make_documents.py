"""Write the example network documents used by the README and the CLI tests.

    python3 scripts/make_documents.py [outdir]
"""

import json
import sys
from pathlib import Path

import numpy as np

from netstar.corpus import random_unitary, random_unitary_data, swap_matrix
from netstar.document import NetworkDocument, build_document, dump_document, serialize_document
from netstar.graph import Graph, figure1_graph, figure2_graph, star_graph, two_vertex_graph
from netstar.scattering import make_network_data


def metric_line_document(rng) -> NetworkDocument:
    """Two vertices joined by one line of length 1, each with one lead."""
    g = two_vertex_graph(1, 1, 1, lengths=[1.0])
    X = {v: random_unitary(2, rng) for v in g.vertices}
    return build_document(g, X=X)


def metric_figure2_document(rng) -> NetworkDocument:
    g0 = figure2_graph()
    lengths = {iid: float(a) for iid, a in zip(g0.internal_ids, rng.uniform(0.5, 2.0, g0.n_internal))}
    g = Graph(g0.vertices, g0.external_edges, g0.internal_edges, lengths)
    X = {v: random_unitary(g.degree(v), rng) for v in g.vertices}
    return build_document(g, X=X)


def perfect_transmission_document() -> NetworkDocument:
    g = two_vertex_graph(1, 1, 1)
    data = make_network_data(g, {"v1": swap_matrix(), "v2": swap_matrix()}, {("v1", "v2"): np.eye(1)})
    return build_document(g, data)


def tadpole_document() -> dict:
    g = star_graph(1)
    obj = serialize_document(build_document(g, X={"v1": np.eye(1)}))
    obj["internal_edges"] = [{"id": "i1", "from": "v1", "to": "v1"}]
    obj["connecting_matrices"] = {}
    return obj


def main(outdir="data", seed=20240611):
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    for name, g in [("fig1", figure1_graph()), ("fig2", figure2_graph())]:
        dump_document(build_document(g, random_unitary_data(g, rng)), out / f"{name}.json")
    dump_document(metric_line_document(rng), out / "metric_line.json")
    dump_document(metric_figure2_document(rng), out / "metric_fig2.json")
    dump_document(perfect_transmission_document(), out / "transmission.json")
    dump_document(build_document(star_graph(3), X={"v1": random_unitary(3, rng)}), out / "single_vertex.json")
    (out / "tadpole.json").write_text(json.dumps(tadpole_document(), indent=1) + "\n")
    (out / "malformed.json").write_text('{"vertices": ["v1"], "external_edges": [\n')
    print(f"wrote documents to {out}/")


if __name__ == "__main__":
    main(*sys.argv[1:2])

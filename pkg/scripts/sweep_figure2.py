"""Energy sweep of the three-vertex example network with metric lines.

Prints the total transmission out of lead e1 into the other leads and the
unitarity defect of K_G per energy, and writes the full matrix to a CSV.

    python3 scripts/sweep_figure2.py [--steps 200] [--out data/fig2_sweep.csv]
"""

import argparse
from pathlib import Path

import numpy as np

from netstar import blocklin
from netstar.corpus import random_unitary
from netstar.graph import Graph, figure2_graph
from netstar.scattering import assemble_lagrangian, compose_iterative, metric_network_data, reduce


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--steps", type=int, default=200)
    ap.add_argument("--e-max", type=float, default=40.0)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", default="data/fig2_sweep.csv")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    g0 = figure2_graph()
    lengths = dict(zip(g0.internal_ids, rng.uniform(0.5, 2.0, g0.n_internal)))
    g = Graph(g0.vertices, g0.external_edges, g0.internal_edges, lengths)
    X = {v: random_unitary(g.degree(v), rng) for v in g.vertices}

    energies = np.linspace(args.e_max / args.steps, args.e_max, args.steps)
    rows = []
    worst_unitarity = worst_gap = 0.0
    for E in energies:
        data = metric_network_data(g, X, E)
        red = reduce(assemble_lagrangian(g, data))
        it = compose_iterative(g, data)
        worst_gap = max(worst_gap, blocklin.max_abs(red.K - it.K))
        defect = blocklin.unitarity_defect(red.K)
        worst_unitarity = max(worst_unitarity, defect)
        rows.append((E, red.K, defect))

    print(f"{'energy':>8}  {'T(e1)':>8}  {'R(e1)':>8}")
    for E, K, _ in rows[:: max(1, len(rows) // 20)]:
        col = np.abs(K[:, 0]) ** 2
        print(f"{E:8.3f}  {col[1:].sum():8.5f}  {col[0]:8.5f}")
    print(f"max unitarity defect {worst_unitarity:.2e}; max |K_schur - K_star| {worst_gap:.2e}")

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    ext = g.external_ids
    with out.open("w") as fh:
        fh.write("energy,row,col,re,im,unitarity_defect\n")
        for E, K, defect in rows:
            for a, b in np.ndindex(K.shape):
                fh.write(f"{E:.17g},{ext[a]},{ext[b]},{K[a, b].real:.17g},{K[a, b].imag:.17g},{defect:.17g}\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()

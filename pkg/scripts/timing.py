"""Wall-clock comparison of the Schur reduction and the iterative star
product on path and random graphs of growing size.

    python3 scripts/timing.py
"""

import time

import numpy as np

from netstar import blocklin
from netstar.corpus import random_connected_graph, random_unitary_data
from netstar.graph import Graph
from netstar.scattering import assemble_lagrangian, compose_iterative, reduce


def ladder(n, channels=2):
    """n vertices in a line joined by ``channels`` parallel lines, one lead at each vertex."""
    vs = tuple(f"v{k + 1}" for k in range(n))
    ext = tuple((f"e{k + 1}", v) for k, v in enumerate(vs))
    internal = []
    for k in range(n - 1):
        for _ in range(channels):
            internal.append((f"i{len(internal) + 1}", vs[k], vs[k + 1]))
    return Graph(vs, ext, tuple(internal))


def best_of(fn, repeat=3):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    rng = np.random.default_rng(3)
    print(f"{'graph':<14} {'|L_G|':>6} {'schur ms':>9} {'star ms':>9} {'max|dK|':>9}")
    cases = [(f"ladder-{n}", ladder(n)) for n in (4, 8, 16, 32, 64)]
    cases += [(f"random-{n}", random_connected_graph(rng, n)) for n in (6, 12, 24)]
    for name, g in cases:
        data = random_unitary_data(g, rng)
        t_schur, red = best_of(lambda: reduce(assemble_lagrangian(g, data)))
        t_star, it = best_of(lambda: compose_iterative(g, data))
        size = g.n_external + 2 * g.n_internal
        print(f"{name:<14} {size:>6d} {1e3 * t_schur:>9.2f} {1e3 * t_star:>9.2f} {blocklin.max_abs(red.K - it.K):>9.1e}")


if __name__ == "__main__":
    main()

"""Lagrangian assembly, Schur reduction and the generalized star product.

Conventions
-----------
* ``NetworkData`` stores each connecting matrix once, for the direction
  ``(v, w)`` with ``v`` before ``w`` in the vertex order; the reverse
  direction is its inverse.
* The Lagrangian matrix is indexed by the incidence pairs ``(edge, vertex)``
  of :meth:`Graph.incidence_index`. Its diagonal blocks are the vertex
  matrices. The coupling block with rows at ``v`` and columns at ``w`` is
  ``-V(w, v) = -V(v, w)^{-1}``. For two vertices this is the block layout

      [[A,  B,  0,     0   ],
       [C,  D,  0,  -V^{-1}],
       [0,  0,  E,     F   ],
       [0, -V,  G,     H   ]]      with V = V(v1, v2),

  so that reducing it gives ``X(v1) *_V X(v2)`` with the star product below.
* Reduction moves the exterior pairs first (in external edge order) and
  takes the Schur complement of the interior block.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import blocklin
from . import grassmann as gr
from .errors import (
    DataMismatch,
    MissingLengths,
    NonComposable,
    NonInvertibleInteriorBlock,
    NonpositiveEnergy,
    SingularMatrix,
    SizeGuardExceeded,
)
from .graph import Graph

Label = tuple[str, str]


@dataclass(frozen=True)
class NetworkData:
    vertex_matrices: Mapping[str, np.ndarray]
    connecting_matrices: Mapping[tuple[str, str], np.ndarray]

    def X(self, v: str) -> np.ndarray:
        return self.vertex_matrices[v]

    def V(self, v: str, w: str) -> np.ndarray:
        """Connecting matrix ``V(v, w)``, inverting the stored one if needed."""
        if (v, w) in self.connecting_matrices:
            return self.connecting_matrices[(v, w)]
        if (w, v) in self.connecting_matrices:
            return blocklin.inv(self.connecting_matrices[(w, v)])
        raise KeyError((v, w))


def make_network_data(
    g: Graph,
    vertex_matrices: Mapping[str, object],
    connecting_matrices: Mapping[tuple[str, str], object],
) -> NetworkData:
    """Normalize user data: complex arrays, connecting matrices stored for
    the forward direction only."""
    X = {v: blocklin.as_matrix(m) for v, m in vertex_matrices.items()}
    V: dict[tuple[str, str], np.ndarray] = {}
    for (v, w), m in connecting_matrices.items():
        m = blocklin.as_matrix(m)
        if g.vertex_position(v) > g.vertex_position(w):
            v, w, m = w, v, blocklin.inv(m)
        if (v, w) in V:
            raise DataMismatch(f"connecting matrix for {v}|{w} given twice")
        V[(v, w)] = m
    return NetworkData(X, V)


def check_data(g: Graph, data: NetworkData) -> list[str]:
    """Consistency problems between ``data`` and ``g`` (empty when fine)."""
    problems = []
    for v in g.vertices:
        n = g.degree(v)
        if v not in data.vertex_matrices:
            problems.append(f"missing: no vertex matrix for {v}")
        elif data.vertex_matrices[v].shape != (n, n):
            problems.append(f"shape: X({v}) has shape {data.vertex_matrices[v].shape}, expected ({n}, {n})")
    for v in data.vertex_matrices:
        if v not in g._vertex_pos:
            problems.append(f"unknown: vertex matrix for unknown vertex {v}")
    pairs = set()
    for a, v in enumerate(g.vertices):
        for w in g.vertices[a + 1:]:
            k, _ = g.connectivity(v, w)
            if k:
                pairs.add((v, w))
                m = data.connecting_matrices.get((v, w))
                if m is None:
                    problems.append(f"missing: no connecting matrix for {v}|{w}")
                elif m.shape != (k, k):
                    problems.append(f"shape: V({v},{w}) has shape {m.shape}, expected ({k}, {k})")
                elif not blocklin.is_invertible(m):
                    problems.append(f"singular: V({v},{w}) is not invertible")
    for key in data.connecting_matrices:
        if key not in pairs:
            problems.append(f"unknown: connecting matrix for non-adjacent pair {key[0]}|{key[1]}")
    return problems


def connecting_from_metric(g: Graph, v: str, w: str, energy: float) -> np.ndarray:
    """``diag(exp(i sqrt(E) a_i))`` over the edges joining ``v`` and ``w``.

    This is ``V(v, w)`` when ``v`` precedes ``w``; the reverse direction
    gets the inverse (complex conjugate).
    """
    if not g.is_metric:
        raise MissingLengths("graph has no edge lengths")
    if not energy > 0:
        raise NonpositiveEnergy(f"energy must be positive, got {energy}")
    edges = g.shared_edges(v, w)
    if not edges:
        raise DataMismatch(f"{v} and {w} are not adjacent")
    k = np.sqrt(energy)
    phases = np.exp(1j * k * np.array([g.lengths[i] for i in edges], dtype=float))
    if g.vertex_position(v) > g.vertex_position(w):
        phases = phases.conj()
    return np.diag(phases)


def metric_network_data(g: Graph, vertex_matrices: Mapping[str, object], energy: float) -> NetworkData:
    V = {}
    for a, v in enumerate(g.vertices):
        for w in g.vertices[a + 1:]:
            if g.shared_edges(v, w):
                V[(v, w)] = connecting_from_metric(g, v, w, energy)
    return make_network_data(g, vertex_matrices, V)


@dataclass(frozen=True)
class LagrangianMatrix:
    index: tuple[Label, ...]
    entries: np.ndarray
    external: tuple[str, ...]

    @property
    def size(self) -> int:
        return len(self.index)

    def position(self, label: Label) -> int:
        return self.index.index(label)

    def exterior_positions(self) -> list[int]:
        """Positions of the exterior pairs, in external edge order."""
        where = {e: k for k, (e, _) in enumerate(self.index)}
        return [where[e] for e in self.external]

    def interior_positions(self) -> list[int]:
        ext = set(self.external)
        return [k for k, (e, _) in enumerate(self.index) if e not in ext]


@dataclass
class ReductionResult:
    K: np.ndarray
    det_T: complex
    external: tuple[str, ...]
    diagnostics: dict = field(default_factory=dict)


def assemble_lagrangian(g: Graph, data: NetworkData) -> LagrangianMatrix:
    problems = check_data(g, data)
    if problems:
        raise DataMismatch("; ".join(problems))
    index = g.incidence_index()
    pos = {lab: k for k, lab in enumerate(index)}
    L = np.zeros((len(index), len(index)), dtype=complex)
    for v in g.vertices:
        rows = [pos[(e, v)] for e in g.edge_star(v)]
        L[np.ix_(rows, rows)] = data.X(v)
    for (v, w), W in data.connecting_matrices.items():
        shared = g.shared_edges(v, w)
        at_v = [pos[(i, v)] for i in shared]
        at_w = [pos[(i, w)] for i in shared]
        L[np.ix_(at_v, at_w)] = -blocklin.inv(W)
        L[np.ix_(at_w, at_v)] = -W
    return LagrangianMatrix(tuple(index), L, tuple(g.external_ids))


def reduce(L: LagrangianMatrix) -> ReductionResult:
    """Eliminate the interior pairs by a Schur complement."""
    ext = L.exterior_positions()
    interior = L.interior_positions()
    perm = ext + interior
    P = L.entries[np.ix_(perm, perm)]
    nE = len(ext)
    T = P[nE:, nE:]
    if T.size:
        blocklin.require_invertible(T, NonInvertibleInteriorBlock)
    K = blocklin.schur_complement(P, nE)
    det_T = blocklin.det(T)
    det_L = blocklin.det(L.entries)
    det_K = blocklin.det(K)
    diagnostics = {
        "cond_T": blocklin.condition_number(T),
        "sigma_min_T": blocklin.min_singular_value(T),
        "unitarity_defect": blocklin.unitarity_defect(K),
        "det_L": det_L,
        "det_defect": _relative(det_L, det_T * det_K),
    }
    return ReductionResult(K, det_T, L.external, diagnostics)


def _relative(a: complex, b: complex) -> float:
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def exterior_inverse_check(L: LagrangianMatrix, K) -> float:
    """Max deviation between ``K^{-1}`` and the exterior block of ``L^{-1}``."""
    ext = L.exterior_positions()
    Linv = blocklin.inv(L.entries)
    Kinv = blocklin.inv(K)
    return blocklin.max_abs(Kinv - Linv[np.ix_(ext, ext)])


def star_product(X1, X2, V, p: int) -> np.ndarray:
    """Generalized star product ``X1 *_V X2`` across ``p`` shared channels.

    ``X1 = [[A, B], [C, D]]`` and ``X2 = [[E, F], [G, H]]`` with the shared
    channels in the trailing ``p x p`` blocks ``D`` and ``H``. Returns

        [[A + B K2 H V C,   B K2 G          ],
         [F K1 C,           E + F K1 D V^-1 G]]

    with ``K1 = (1 - V D V^-1 H)^-1 V`` and ``K2 = (1 - V^-1 H V D)^-1 V^-1``.
    """
    X1 = blocklin.as_matrix(X1)
    X2 = blocklin.as_matrix(X2)
    V = blocklin.as_matrix(V)
    n1 = X1.shape[0] - p
    m1 = X2.shape[0] - p
    if n1 < 0 or m1 < 0 or V.shape != (p, p):
        raise DataMismatch(f"incompatible shapes X1 {X1.shape}, X2 {X2.shape}, V {V.shape} for p={p}")
    A, B, C, D = blocklin.split(X1, n1)
    E, F, G, H = blocklin.split(X2, m1)
    blocklin.require_invertible(V, SingularMatrix, what="connecting matrix")
    Vinv = blocklin.inv(V)
    eye = np.eye(p)
    R1 = eye - V @ D @ Vinv @ H
    R2 = eye - Vinv @ H @ V @ D
    blocklin.require_invertible(R1, NonComposable)
    blocklin.require_invertible(R2, NonComposable)
    K1 = blocklin.solve(R1, V)
    K2 = blocklin.solve(R2, Vinv)
    out = np.empty((n1 + m1, n1 + m1), dtype=complex)
    out[:n1, :n1] = A + B @ K2 @ H @ V @ C
    out[:n1, n1:] = B @ K2 @ G
    out[n1:, :n1] = F @ K1 @ C
    out[n1:, n1:] = E + F @ K1 @ D @ Vinv @ G
    return out


def _bars_for_order(g: Graph, order: list[str]) -> list[list[str]]:
    if sorted(order) != sorted(g.vertices) or len(set(order)) != len(order):
        raise DataMismatch(f"order {order} is not a permutation of the vertices")
    bars = [[]]
    for l in range(1, len(order)):
        shared = {i for u in order[:l] for i in g.shared_edges(u, order[l])}
        if not shared:
            raise DataMismatch(f"vertex {order[l]} is not adjacent to its predecessors")
        bars.append([i for i in g.internal_ids if i in shared])
    return bars


def compose_iterative(
    g: Graph,
    data: NetworkData,
    order: list[str] | None = None,
    start: str | None = None,
) -> ReductionResult:
    """Build ``K_G`` vertex by vertex with the generalized star product.

    Rows and columns of the intermediate matrices carry ``(edge, vertex)``
    labels; before each step the channels being glued are moved to the
    trailing block by label.
    """
    problems = check_data(g, data)
    if problems:
        raise DataMismatch("; ".join(problems))
    if order is None:
        order, bars = g.composition_order(start)
    else:
        order = list(order)
        bars = _bars_for_order(g, order)

    v1 = order[0]
    labels: list[Label] = [(e, v1) for e in g.edge_star(v1)]
    K = data.X(v1).copy()
    det_T = 1.0 + 0j
    step_det = [det_T]
    step_unitarity = [blocklin.unitarity_defect(K)]
    step_sigma = []

    for l in range(1, len(order)):
        v = order[l]
        glued = bars[l]
        glued_set = set(glued)
        where = {lab: k for k, lab in enumerate(labels)}
        owner = {e: u for e, u in labels if e in glued_set}

        keep1 = [lab for lab in labels if lab[0] not in glued_set]
        inner1 = [(i, owner[i]) for i in glued]
        perm1 = [where[lab] for lab in keep1 + inner1]
        X1 = K[np.ix_(perm1, perm1)]

        star_v = g.edge_star(v)
        keep2 = [e for e in star_v if e not in glued_set]
        spos = {e: k for k, e in enumerate(star_v)}
        perm2 = [spos[e] for e in keep2 + glued]
        X2 = data.X(v)[np.ix_(perm2, perm2)]

        p = len(glued)
        Vbar = np.zeros((p, p), dtype=complex)
        gpos = {i: k for k, i in enumerate(glued)}
        for u in order[:l]:
            shared = g.shared_edges(u, v)
            if not shared:
                continue
            idx = [gpos[i] for i in shared]
            Vbar[np.ix_(idx, idx)] = data.V(u, v)

        T_step = np.block([[X1[-p:, -p:], -blocklin.inv(Vbar)], [-Vbar, X2[-p:, -p:]]])
        step_sigma.append(blocklin.min_singular_value(T_step))
        try:
            K = star_product(X1, X2, Vbar, p)
        except NonComposable as exc:
            raise NonComposable(exc.sigma_min, step=l + 1) from None
        d = blocklin.det(T_step)
        det_T *= d
        step_det.append(d)
        step_unitarity.append(blocklin.unitarity_defect(K))
        labels = keep1 + [(e, v) for e in keep2]

    where = {e: k for k, (e, _) in enumerate(labels)}
    final = [where[e] for e in g.external_ids]
    K = K[np.ix_(final, final)]
    diagnostics = {
        "order": list(order),
        "step_det_T": step_det,
        "step_unitarity_defect": step_unitarity,
        "step_sigma_min": step_sigma,
        "unitarity_defect": blocklin.unitarity_defect(K),
    }
    return ReductionResult(K, det_T, tuple(g.external_ids), diagnostics)


@dataclass(frozen=True)
class GrassmannReport:
    defect: float
    n_pairs: int
    n_terms: int
    det_T: complex


def grassmann_verify(g: Graph, data: NetworkData) -> GrassmannReport:
    """Integrate ``exp(-etabar . L eta)`` over the interior pairs symbolically
    and compare with ``det T * exp(-etabar_E . K eta_E)`` coefficient-wise."""
    L = assemble_lagrangian(g, data)
    N = L.size
    if N > gr.MAX_PAIRS:
        raise SizeGuardExceeded(f"|E| + 2|I| = {N} exceeds {gr.MAX_PAIRS}")
    red = reduce(L)
    alg = gr.Algebra.single(N, "eta")
    integrand = gr.exp_quadratic(alg, L.entries, "eta")
    interior = 0
    for k in L.interior_positions():
        interior |= 1 << k
    integrated = gr.berezin_integrate(integrand, None, interior)
    M = gr.embed(red.K, N, L.exterior_positions())
    expected = gr.exp_quadratic(alg, M, "eta") * red.det_T
    return GrassmannReport(gr.max_defect(integrated, expected), N, len(integrated.coeffs), red.det_T)

"""Deterministic self-test harness run by ``netstar selftest``.

Every suite draws from its own generator derived from the master seed, so
suites are independent of each other and of the order they run in. The
report contains no timings so that two runs with the same seed produce the
same bytes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import blocklin
from . import grassmann as gr
from .corpus import (
    random_complex,
    random_connected_graph,
    random_orthogonal,
    random_positive_data,
    random_spd,
    random_unitary,
    random_unitary_data,
    small_corpus,
)
from .gaussian import bosonic_reduce, gaussian_marginalize, min_eig, positivity_bound_check, sample_gaussian
from .graph import two_vertex_graph
from .scattering import (
    assemble_lagrangian,
    compose_iterative,
    exterior_inverse_check,
    grassmann_verify,
    make_network_data,
    reduce,
    star_product,
)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    cases: int
    max_defect: float
    tolerance: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.name:<26} {status}  cases={self.cases:<5d} max_defect={self.max_defect:.3e}  tol={self.tolerance:.0e}"


SIZES = {
    "quick": dict(det=60, det_n=4, src_n=2, exh_n=2, star=150, graphs=25, spd=200, starpos=40, mc=False),
    "full": dict(det=500, det_n=5, src_n=3, exh_n=3, star=1000, graphs=200, spd=500, starpos=100, mc=True),
}


def _result(name, defects, tol, cases=None, extra_ok=True) -> SuiteResult:
    worst = max(defects, default=0.0)
    return SuiteResult(name, bool(worst <= tol and extra_ok), len(defects) if cases is None else cases, worst, tol)


def suite_gauss_det(rng, size) -> SuiteResult:
    defects = []
    for _ in range(size["det"]):
        n = int(rng.integers(1, size["det_n"] + 1))
        A = random_complex(n, rng)
        d = blocklin.det(A)
        defects.append(abs(gr.gauss_integral(A) - d) / (1 + abs(d)))
    return _result("grassmann.determinant", defects, 1e-10)


def suite_sources(rng, size) -> SuiteResult:
    defects = []
    for n in range(1, size["src_n"] + 1):
        for _ in range(3):
            A = random_complex(n, rng) + 2 * np.eye(n)
            alg = gr.Algebra(gr.GeneratorFamily("a", n), gr.GeneratorFamily("b", n))
            lhs = gr.berezin_integrate(gr.exp_quadratic(alg, A, "a", sources="b"), "a")
            rhs = gr.exp_bilinear(alg, blocklin.inv(A), "b", "b") * blocklin.det(A)
            defects.append(gr.max_defect(lhs, rhs))
    return _result("grassmann.sources", defects, 1e-10)


def _all_monomials(alg: gr.Algebra):
    full = (1 << alg.nslots) - 1
    for J in range(full + 1):
        for K in range(full + 1):
            yield alg.element({(J, K): 1.0})


def suite_fubini_translation(rng, size) -> SuiteResult:
    defects = []
    n = size["exh_n"]
    alg = gr.Algebra.single(n)
    idx = list(range(1, n + 1))
    splits = [(set(s), set(idx) - set(s)) for k in range(n + 1) for s in itertools.combinations(idx, k)]
    for alpha in _all_monomials(alg):
        for L1, L2 in splits:
            one = gr.berezin_integrate(alpha, "a", sorted(L1 | L2))
            two = gr.integrate_stepwise(alpha, "a", sorted(L1), sorted(L2))
            defects.append(gr.max_defect(one, two))
    alg2 = gr.Algebra(gr.GeneratorFamily("a", n), gr.GeneratorFamily("b", n))
    for alpha in _all_monomials(alg2):
        lhs = gr.berezin_integrate(gr.translate(alpha, "a", "b"), "a")
        rhs = gr.berezin_integrate(alpha, "a")
        defects.append(gr.max_defect(lhs, rhs))
    return _result("grassmann.fubini+shift", defects, 0.0)


def suite_partial(rng, size) -> SuiteResult:
    defects = []
    for n in range(1, 5):
        for p in range(0, n):
            A = random_complex(n, rng) + 3 * np.eye(n)
            d22, residual = gr.partial_gauss(A, p)
            S = blocklin.schur_complement(A, p)
            alg = gr.Algebra.single(n)
            expected = gr.exp_quadratic(alg, gr.embed(S, n, range(p)))
            defects.append(gr.max_defect(residual, expected))
            defects.append(abs(d22 - blocklin.det(A[p:, p:])) / (1 + abs(d22)))
    return _result("grassmann.partial", defects, 1e-12)


def suite_schur_det(rng, size) -> SuiteResult:
    defects = []
    for _ in range(50):
        n = int(rng.integers(1, 13))
        A = random_complex(n, rng)
        for p in range(n + 1):
            dA = blocklin.det(A)
            rhs = blocklin.det(A[p:, p:]) * blocklin.det(blocklin.schur_complement(A, p))
            defects.append(abs(dA - rhs) / abs(dA))
    return _result("blocklin.schur_det", defects, 1e-9)


def suite_star_vs_schur(rng, size) -> SuiteResult:
    defects = []
    for _ in range(size["star"]):
        n1, m1, p = (int(x) for x in rng.integers(0, 5, size=3))
        p = max(p, 1)
        X1, X2, V = random_unitary(n1 + p, rng), random_unitary(m1 + p, rng), random_unitary(p, rng)
        g = two_vertex_graph(n1, m1, p)
        data = make_network_data(g, {"v1": X1, "v2": X2}, {("v1", "v2"): V})
        L = assemble_lagrangian(g, data)
        red = reduce(L)
        K = star_product(X1, X2, V, p)
        defects.append(blocklin.max_abs(K - red.K))
        defects.append(blocklin.unitarity_defect(K))
    return _result("scattering.star_vs_schur", defects, 1e-9, cases=size["star"])


def suite_compose(rng, size) -> SuiteResult:
    defects = []
    inverse_ok = True
    for _ in range(size["graphs"]):
        g = random_connected_graph(rng, int(rng.integers(2, 7)))
        data = random_unitary_data(g, rng)
        L = assemble_lagrangian(g, data)
        red = reduce(L)
        it = compose_iterative(g, data)
        defects.append(blocklin.max_abs(it.K - red.K))
        defects.append(abs(it.det_T - red.det_T) / abs(red.det_T))
        defects.append(red.diagnostics["det_defect"])
        defects.append(max(it.diagnostics["step_unitarity_defect"]))
        inverse_ok &= exterior_inverse_check(L, red.K) <= 1e-9
    return _result("scattering.compose", defects, 1e-8, cases=size["graphs"], extra_ok=inverse_ok)


def suite_symbolic(rng, size) -> SuiteResult:
    defects = [grassmann_verify(g, data).defect for _, g, data in small_corpus(rng)]
    return _result("scattering.symbolic", defects, 1e-10)


def suite_positivity(rng, size) -> SuiteResult:
    defects = []
    ok = True
    for _ in range(size["spd"]):
        n = int(rng.integers(2, 7))
        A = random_spd(n, rng)
        kappa = 0.9 * min_eig(A)
        rep = positivity_bound_check(A, kappa, int(rng.integers(1, n)))
        ok &= rep.precondition_ok and rep.passed
        A_hat, d22 = gaussian_marginalize(A, 1)
        defects.append(abs(np.linalg.det(A) - d22 * np.linalg.det(A_hat)) / np.linalg.det(A))
    for _ in range(size["starpos"]):
        n1, m1, p = (int(x) for x in rng.integers(1, 4, size=3))
        X1 = _spd_above(n1 + p, 3.0, rng)
        X2 = _spd_above(m1 + p, 3.0, rng)
        K = star_product(X1, X2, random_orthogonal(p, rng), p)
        defects.append(max(0.0, 2.0 - min_eig(K)))
    for _ in range(size["starpos"] // 2):
        g = random_connected_graph(rng, int(rng.integers(2, 5)))
        data = random_positive_data(g, rng)
        bos = bosonic_reduce(g, data)
        fer = reduce(assemble_lagrangian(g, data))
        defects.append(blocklin.max_abs(bos.K - fer.K))
    return _result("gaussian.positivity", defects, 1e-9, extra_ok=ok)


def _spd_above(n: int, kappa: float, rng) -> np.ndarray:
    """Random SPD matrix with smallest eigenvalue exactly ``kappa``."""
    Q = random_orthogonal(n, rng)
    lam = kappa + rng.exponential(1.0, n)
    lam[0] = kappa
    return (Q * lam) @ Q.T


def suite_monte_carlo(rng, size) -> SuiteResult:
    A = random_spd(3, rng, floor=0.5)
    seed = int(rng.integers(2**63))
    rep = sample_gaussian(A, 100_000, seed)
    again = sample_gaussian(A, 100_000, seed)
    same = bool(np.array_equal(rep.covariance, again.covariance))
    return SuiteResult("gaussian.monte_carlo", rep.covariance_z <= 3.0 and same, 1, rep.covariance_z, 3.0)


SUITES: list[tuple[str, Callable]] = [
    ("grassmann.determinant", suite_gauss_det),
    ("grassmann.sources", suite_sources),
    ("grassmann.fubini+shift", suite_fubini_translation),
    ("grassmann.partial", suite_partial),
    ("blocklin.schur_det", suite_schur_det),
    ("scattering.star_vs_schur", suite_star_vs_schur),
    ("scattering.compose", suite_compose),
    ("scattering.symbolic", suite_symbolic),
    ("gaussian.positivity", suite_positivity),
    ("gaussian.monte_carlo", suite_monte_carlo),
]


def run(seed: int = 1, level: str = "quick") -> tuple[bool, list[str]]:
    size = SIZES[level]
    lines = [f"netstar selftest seed={seed} level={level}"]
    ok = True
    children = np.random.SeedSequence(seed).spawn(len(SUITES))
    for (name, fn), child in zip(SUITES, children):
        if name == "gaussian.monte_carlo" and not size["mc"]:
            lines.append(f"{name:<26} SKIP  (full level only)")
            continue
        rng = np.random.default_rng(child)
        try:
            res = fn(rng, size)
        except Exception as exc:  # a crashing suite is a failing suite
            lines.append(f"{name:<26} FAIL  error={type(exc).__name__}: {exc}")
            ok = False
            continue
        lines.append(res.line())
        ok &= res.passed
    lines.append("RESULT " + ("PASS" if ok else "FAIL"))
    return ok, lines

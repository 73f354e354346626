"""Independent reference implementations used by the test suite.

Nothing here calls into netstar's numerical routines: determinants are
computed by cofactor expansion, inverses through the adjugate, and the
Grassmann oracle works on explicit generator words with bubble-sort signs.
"""

from __future__ import annotations

import itertools

import numpy as np


def cofactor_det(A) -> complex:
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    if n == 0:
        return 1.0 + 0j
    if n == 1:
        return A[0, 0]
    total = 0j
    for j in range(n):
        minor = np.delete(A[1:], j, axis=1)
        total += (-1) ** j * A[0, j] * cofactor_det(minor)
    return total


def adjugate_inverse(A) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    C = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            minor = np.delete(np.delete(A, i, axis=0), j, axis=1)
            C[i, j] = (-1) ** (i + j) * cofactor_det(minor)
    return C.T / cofactor_det(A)


def inverse_2x2(A) -> np.ndarray:
    (a, b), (c, d) = np.asarray(A, dtype=complex)
    return np.array([[d, -b], [-c, a]]) / (a * d - b * c)


# --- Grassmann words -------------------------------------------------------
#
# A generator is (family, index, is_bar). An element is a dict from a sorted
# tuple of distinct generators to a coefficient. The oracle's own sort key is
# deliberately unrelated to the package's canonical order.


def _key(g):
    fam, i, bar = g
    return (fam, i, not bar)


def _normalize(word):
    """Sort a generator word; returns (sign, sorted word) or (0, None)."""
    if len(set(word)) != len(word):
        return 0, None
    w = list(word)
    sign = 1
    for a in range(len(w)):
        for b in range(len(w) - 1 - a):
            if _key(w[b]) > _key(w[b + 1]):
                w[b], w[b + 1] = w[b + 1], w[b]
                sign = -sign
    return sign, tuple(w)


def w_add(x, y):
    out = dict(x)
    for k, v in y.items():
        out[k] = out.get(k, 0) + v
    return out


def w_mul(x, y):
    out = {}
    for (kx, vx), (ky, vy) in itertools.product(x.items(), y.items()):
        s, w = _normalize(kx + ky)
        if s:
            out[w] = out.get(w, 0) + s * vx * vy
    return out


def w_word(*gens, coeff=1.0):
    s, w = _normalize(gens)
    return {w: s * coeff} if s else {}


def w_integrate_pair(x, fam, i):
    """``int dabar_i da_i``, normalised by ``int abar_i a_i = -1``."""
    out = {}
    bar, plain = (fam, i, True), (fam, i, False)
    for word, c in x.items():
        if bar not in word or plain not in word:
            continue
        rest = tuple(g for g in word if g not in (bar, plain))
        sign = _permutation_sign(word, (bar, plain) + rest)
        out[rest] = out.get(rest, 0) - sign * c
    return out


def _permutation_sign(src, dst):
    pos = {g: k for k, g in enumerate(src)}
    perm = [pos[g] for g in dst]
    sign = 1
    seen = [False] * len(perm)
    for k in range(len(perm)):
        if seen[k]:
            continue
        length = 0
        j = k
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def w_integrate(x, fam, indices):
    for i in indices:
        x = w_integrate_pair(x, fam, i)
    return x


def w_exp_quadratic(A, fam="a"):
    """``exp(-abar.A a)`` as the product over all entries of ``1 - A_ij abar_i a_j``."""
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    out = {(): 1.0}
    for i in range(n):
        for j in range(n):
            if A[i, j] != 0:
                out = w_mul(out, w_add({(): 1.0}, w_word((fam, i + 1, True), (fam, j + 1, False), coeff=-A[i, j])))
    return out


def w_clean(x, tol=0.0):
    return {k: v for k, v in x.items() if abs(v) > tol}


def from_package(alpha) -> dict:
    """Convert a netstar GrassmannElement into oracle words."""
    alg = alpha.algebra
    names = []
    for fam in alg.families:
        names += [(fam.name, k + 1) for k in range(fam.size)]
    out = {}
    for (J, K), c in alpha.coeffs.items():
        bars = [s for s in range(alg.nslots) if J >> s & 1]
        plains = [s for s in range(alg.nslots) if K >> s & 1]
        word = [(*names[s], True) for s in sorted(bars, reverse=True)]
        word += [(*names[s], False) for s in sorted(plains)]
        s, w = _normalize(tuple(word))
        out[w] = out.get(w, 0) + s * c
    return out


def word_defect(x, y) -> float:
    keys = x.keys() | y.keys()
    return max((abs(x.get(k, 0) - y.get(k, 0)) for k in keys), default=0.0)

"""Exact finite Grassmann algebra with Berezin integration.

Generators come in conjugate pairs ``(abar_i, a_i)`` grouped into named
families. All families of an :class:`Algebra` share one flat slot numbering
(family-major, index-minor), and an element is a sparse map

    (J, K) -> coefficient

where ``J`` and ``K`` are bitmasks over the slots. The key ``(J, K)`` stands
for the canonical monomial ``abar_J a_K``:

* ``abar_J`` lists the barred generators with slot numbers *decreasing*,
* ``a_K`` lists the plain generators with slot numbers *increasing*.

With this choice ``abar_L a_L`` is the product of the commuting pairs
``abar_i a_i`` (i in L), so ``abar_2 abar_1 a_1 a_2 = (abar_1 a_1)(abar_2 a_2)``.

Berezin integration over a slot set ``L`` follows the subset rule

    int abar_J a_K dabar_L da_L = 0                                    if L not in J or K
                                = (-1)^|L| s * abar_{J\\L} a_{K\\L}    otherwise

with ``abar_J a_K = s * abar_{J\\L} a_{K\\L} abar_L a_L``.

Coefficients are complex doubles. Identities built from integer data hold
exactly; everything else is compared with :func:`max_defect`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from . import blocklin
from .errors import FamilyMismatch, SingularBlock, SingularMatrix, SizeGuardExceeded

MAX_PAIRS = 12

Key = tuple[int, int]


@dataclass(frozen=True)
class GeneratorFamily:
    name: str
    size: int

    def __post_init__(self):
        if self.size < 0:
            raise ValueError(f"family {self.name!r} has negative size")


class Algebra:
    """An ordered list of generator families sharing one slot numbering."""

    def __init__(self, *families: GeneratorFamily):
        names = [f.name for f in families]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate family names in {names}")
        self.families = tuple(families)
        self.offsets: dict[str, int] = {}
        pos = 0
        for f in families:
            self.offsets[f.name] = pos
            pos += f.size
        self.nslots = pos
        if pos > MAX_PAIRS:
            raise SizeGuardExceeded(f"{pos} conjugate pairs exceed the limit of {MAX_PAIRS}")

    @classmethod
    def single(cls, n: int, name: str = "a") -> "Algebra":
        return cls(GeneratorFamily(name, n))

    def __eq__(self, other):
        return isinstance(other, Algebra) and self.families == other.families

    def __hash__(self):
        return hash(self.families)

    def __repr__(self):
        inner = ", ".join(f"{f.name}[{f.size}]" for f in self.families)
        return f"Algebra({inner})"

    def family(self, name: str) -> GeneratorFamily:
        for f in self.families:
            if f.name == name:
                return f
        raise KeyError(name)

    def slot(self, name: str, i: int) -> int:
        """Flat slot of generator ``i`` (1-based) of family ``name``."""
        f = self.family(name)
        if not 1 <= i <= f.size:
            raise IndexError(f"index {i} outside 1..{f.size} of family {name!r}")
        return self.offsets[name] + i - 1

    def mask(self, name: str, indices: Iterable[int] | None = None) -> int:
        """Slot bitmask for ``indices`` of a family (all of it when None)."""
        f = self.family(name)
        if indices is None:
            indices = range(1, f.size + 1)
        m = 0
        for i in indices:
            m |= 1 << self.slot(name, i)
        return m

    # element constructors

    def element(self, coeffs: Mapping[Key, complex]) -> "GrassmannElement":
        return GrassmannElement(self, coeffs)

    def zero(self) -> "GrassmannElement":
        return GrassmannElement(self, {})

    def scalar(self, c: complex) -> "GrassmannElement":
        return GrassmannElement(self, {(0, 0): c})

    def one(self) -> "GrassmannElement":
        return self.scalar(1.0)

    def bar(self, name: str, i: int) -> "GrassmannElement":
        return GrassmannElement(self, {(1 << self.slot(name, i), 0): 1.0})

    def gen(self, name: str, i: int) -> "GrassmannElement":
        return GrassmannElement(self, {(0, 1 << self.slot(name, i)): 1.0})


def _bits(m: int):
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


def _merge_parity(J1: int, K1: int, J2: int, K2: int) -> int:
    """Parity of the permutation taking the word ``abar_J1 a_K1 abar_J2 a_K2``
    to canonical order. The masks must be pairwise disjoint (J1/J2, K1/K2)."""
    n = K1.bit_count() * J2.bit_count()
    m = J2
    while m:
        low = m & -m
        n += (J1 & (low - 1)).bit_count()
        m ^= low
    m = K2
    while m:
        low = m & -m
        n += (K1 & ~((low << 1) - 1)).bit_count()
        m ^= low
    return n & 1


def _mul_coeffs(a: Mapping[Key, complex], b: Mapping[Key, complex]) -> dict[Key, complex]:
    out: dict[Key, complex] = {}
    for (J1, K1), c1 in a.items():
        for (J2, K2), c2 in b.items():
            if J1 & J2 or K1 & K2:
                continue
            c = c1 * c2
            if _merge_parity(J1, K1, J2, K2):
                c = -c
            key = (J1 | J2, K1 | K2)
            out[key] = out.get(key, 0) + c
    return out


class GrassmannElement:
    """Immutable element of a finite Grassmann algebra."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: Algebra, coeffs: Mapping[Key, complex]):
        self.algebra = algebra
        self.coeffs = {k: complex(v) for k, v in coeffs.items() if v != 0}

    def _check(self, other: "GrassmannElement"):
        if self.algebra != other.algebra:
            raise FamilyMismatch(f"{self.algebra!r} vs {other.algebra!r}")

    def _coerce(self, other) -> "GrassmannElement":
        if isinstance(other, GrassmannElement):
            self._check(other)
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return self.algebra.scalar(complex(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return GrassmannElement(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return GrassmannElement(self.algebra, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return GrassmannElement(self.algebra, {k: v * other for k, v in self.coeffs.items()})
        if not isinstance(other, GrassmannElement):
            return NotImplemented
        return multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self * other
        return NotImplemented

    def __truediv__(self, c):
        return self * (1 / c)

    def __eq__(self, other):
        if not isinstance(other, GrassmannElement):
            return NotImplemented
        return self.algebra == other.algebra and self.coeffs == other.coeffs

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for (J, K), c in sorted(self.coeffs.items()):
            terms.append(f"({c:g})*{self._monomial_name(J, K)}")
        return " + ".join(terms)

    def _monomial_name(self, J: int, K: int) -> str:
        if J == 0 and K == 0:
            return "1"
        names = []
        for s in sorted(_bits(J), reverse=True):
            names.append(self._slot_name(s, bar=True))
        for s in sorted(_bits(K)):
            names.append(self._slot_name(s, bar=False))
        return "".join(names)

    def _slot_name(self, s: int, bar: bool) -> str:
        for f in self.algebra.families:
            off = self.algebra.offsets[f.name]
            if off <= s < off + f.size:
                return f"{f.name}{'~' if bar else ''}{s - off + 1}"
        raise IndexError(s)

    def is_even(self) -> bool:
        return all((J.bit_count() + K.bit_count()) % 2 == 0 for J, K in self.coeffs)

    def degree(self) -> int:
        return max((J.bit_count() + K.bit_count() for J, K in self.coeffs), default=0)


def scalar_part(alpha: GrassmannElement) -> complex:
    """Coefficient of the unit, i.e. ``alpha`` at zero generators."""
    return alpha.coeffs.get((0, 0), 0j)


def multiply(alpha: GrassmannElement, beta: GrassmannElement) -> GrassmannElement:
    alpha._check(beta)
    return GrassmannElement(alpha.algebra, _mul_coeffs(alpha.coeffs, beta.coeffs))


def _resolve_mask(alg: Algebra, family: str | None, L) -> int:
    if family is None:
        if not isinstance(L, int):
            raise TypeError("a raw slot mask is required when no family is given")
        return L
    return alg.mask(family, L)


def integration_sign(J: int, K: int, L: int) -> int:
    """The sign ``s`` with ``abar_J a_K = s * abar_{J\\L} a_{K\\L} abar_L a_L``."""
    return -1 if _merge_parity(J & ~L, K & ~L, L, L) else 1


def berezin_integrate(alpha: GrassmannElement, family: str | None, L=None) -> GrassmannElement:
    """Integrate ``alpha`` against the volume form ``dabar_L da_L``.

    ``L`` is an iterable of 1-based indices of ``family`` (``None`` means the
    whole family). With ``family=None``, ``L`` is taken as a raw slot mask.
    """
    mask = _resolve_mask(alpha.algebra, family, L)
    if mask == 0:
        return alpha
    base = -1 if mask.bit_count() % 2 else 1
    out: dict[Key, complex] = {}
    for (J, K), c in alpha.coeffs.items():
        if J & mask != mask or K & mask != mask:
            continue
        key = (J & ~mask, K & ~mask)
        out[key] = out.get(key, 0) + base * integration_sign(J, K, mask) * c
    return GrassmannElement(alpha.algebra, out)


def volume_sign(L1: int, L2: int) -> int:
    """Sign relating ``abar_L2 a_L2 abar_L1 a_L1`` to ``abar_L a_L`` (L = L1 | L2).

    Integrating first over ``L1`` and then over ``L2`` equals this sign times
    the single integral over ``L``.
    """
    if L1 & L2:
        raise ValueError("volume forms overlap")
    return -1 if _merge_parity(L2, L2, L1, L1) else 1


def integrate_stepwise(alpha: GrassmannElement, family: str | None, L1, L2) -> GrassmannElement:
    alg = alpha.algebra
    m1 = _resolve_mask(alg, family, L1)
    if family is not None and L2 is not None and not list(L2):
        m2 = 0
    else:
        m2 = _resolve_mask(alg, family, L2)
    if m1 & m2:
        raise ValueError("L1 and L2 must be disjoint")
    step = berezin_integrate(berezin_integrate(alpha, None, m1), None, m2)
    return step * volume_sign(m1, m2)


def translate(alpha: GrassmannElement, from_family: str, by_family: str | None) -> GrassmannElement:
    """Substitute ``abar_i -> abar_i - bbar_i`` and ``a_i -> a_i - b_i``.

    Each canonical monomial is rebuilt factor by factor in its canonical word
    order, so no sign bookkeeping beyond :func:`multiply` is needed.
    """
    alg = alpha.algebra
    if by_family is None:
        return alpha
    f, g = alg.family(from_family), alg.family(by_family)
    if f.size != g.size:
        raise ValueError(f"family sizes differ: {f.size} vs {g.size}")
    src = alg.offsets[from_family]
    dst = alg.offsets[by_family]
    shift = {src + k: dst + k for k in range(f.size)}

    out: dict[Key, complex] = {}
    for (J, K), c in alpha.coeffs.items():
        acc: dict[Key, complex] = {(0, 0): c}
        word = [(s, True) for s in sorted(_bits(J), reverse=True)]
        word += [(s, False) for s in sorted(_bits(K))]
        for s, is_bar in word:
            if is_bar:
                factor = {(1 << s, 0): 1.0}
                if s in shift:
                    factor[(1 << shift[s], 0)] = -1.0
            else:
                factor = {(0, 1 << s): 1.0}
                if s in shift:
                    factor[(0, 1 << shift[s])] = -1.0
            acc = _mul_coeffs(acc, factor)
        for k, v in acc.items():
            out[k] = out.get(k, 0) + v
    return GrassmannElement(alg, out)


def exp(alpha: GrassmannElement) -> GrassmannElement:
    """Exponential by the terminating power series."""
    alg = alpha.algebra
    s = scalar_part(alpha)
    nil = dict(alpha.coeffs)
    nil.pop((0, 0), None)
    total: dict[Key, complex] = {(0, 0): 1.0}
    term: dict[Key, complex] = {(0, 0): 1.0}
    for k in range(1, 2 * alg.nslots + 1):
        term = {key: v / k for key, v in _mul_coeffs(term, nil).items() if v != 0}
        if not term:
            break
        for key, v in term.items():
            total[key] = total.get(key, 0) + v
    return GrassmannElement(alg, total) * np.exp(s)


def exp_bilinear(alg: Algebra, M, bar_family: str, plain_family: str) -> GrassmannElement:
    """``exp(sum_ij M_ij xbar_i y_j)`` with ``xbar`` from ``bar_family`` and
    ``y`` from ``plain_family``.

    The exponent is a sum of the even, mutually commuting, square-zero
    elements ``xbar_i (M y)_i``, so the exponential is the product of the
    factors ``1 + xbar_i (M y)_i``.
    """
    M = np.asarray(M, dtype=complex)
    fx, fy = alg.family(bar_family), alg.family(plain_family)
    if M.shape != (fx.size, fy.size):
        raise ValueError(f"matrix shape {M.shape} does not match families ({fx.size}, {fy.size})")
    ox, oy = alg.offsets[bar_family], alg.offsets[plain_family]
    acc: dict[Key, complex] = {(0, 0): 1.0}
    for i in range(fx.size):
        factor: dict[Key, complex] = {(0, 0): 1.0}
        for j in range(fy.size):
            if M[i, j] != 0:
                factor[(1 << (ox + i), 1 << (oy + j))] = M[i, j]
        if len(factor) > 1:
            acc = _mul_coeffs(acc, factor)
    return GrassmannElement(alg, acc)


def exp_quadratic(
    alg: Algebra,
    A,
    family: str = "a",
    sources: str | None = None,
) -> GrassmannElement:
    """``exp(-abar.A a + bbar.a + abar.b)``; the source terms are present only
    when ``sources`` names the family ``b``."""
    A = np.asarray(A, dtype=complex)
    n = alg.family(family).size
    if A.shape != (n, n):
        raise ValueError(f"matrix shape {A.shape} does not match family size {n}")
    out = exp_bilinear(alg, -A, family, family)
    if sources is not None:
        eye = np.eye(n)
        out = out * exp_bilinear(alg, eye, sources, family) * exp_bilinear(alg, eye, family, sources)
    return out


def gauss_integral(A) -> complex:
    """Gauss-Grassmann integral of ``exp(-abar.A a)`` over all pairs."""
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    if n == 0:
        return 1.0 + 0j
    alg = Algebra.single(n)
    return scalar_part(berezin_integrate(exp_quadratic(alg, A), "a"))


def moment(A, i: int, j: int) -> complex:
    """``int a_i abar_j exp(-abar.A a)`` over all pairs (1-based indices)."""
    A = np.asarray(A, dtype=complex)
    blocklin.require_invertible(A, SingularMatrix)
    alg = Algebra.single(A.shape[0])
    integrand = alg.gen("a", i) * alg.bar("a", j) * exp_quadratic(alg, A)
    return scalar_part(berezin_integrate(integrand, "a"))


def first_moment(A, i: int, bar: bool = False) -> complex:
    A = np.asarray(A, dtype=complex)
    alg = Algebra.single(A.shape[0])
    g = alg.bar("a", i) if bar else alg.gen("a", i)
    return scalar_part(berezin_integrate(g * exp_quadratic(alg, A), "a"))


def partial_gauss(A, p: int) -> tuple[complex, GrassmannElement]:
    """Integrate ``exp(-abar.A a)`` over pairs ``p+1..n`` only.

    Returns ``(det A22, residual)`` where ``residual`` is the integral
    divided by ``det A22``; it lives in the algebra of all ``n`` pairs but
    only involves the first ``p``.
    """
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    blocklin.require_invertible(A[p:, p:], SingularBlock)
    alg = Algebra.single(n)
    result = berezin_integrate(exp_quadratic(alg, A), "a", range(p + 1, n + 1))
    d22 = scalar_part(result)
    return d22, result / d22


def max_defect(alpha: GrassmannElement, beta: GrassmannElement) -> float:
    """Largest coefficient-wise modulus of ``alpha - beta``."""
    alpha._check(beta)
    keys = alpha.coeffs.keys() | beta.coeffs.keys()
    return max((abs(alpha.coeffs.get(k, 0) - beta.coeffs.get(k, 0)) for k in keys), default=0.0)


def max_coefficient(alpha: GrassmannElement) -> float:
    return max((abs(v) for v in alpha.coeffs.values()), default=0.0)


def allclose(alpha: GrassmannElement, beta: GrassmannElement, atol: float = 1e-12) -> bool:
    scale = max(1.0, max_coefficient(alpha), max_coefficient(beta))
    return max_defect(alpha, beta) <= atol * scale


def embed(M, n: int, rows: Iterable[int], cols: Iterable[int] | None = None) -> np.ndarray:
    """Place ``M`` into an ``n x n`` zero matrix at the given 0-based slots."""
    rows = list(rows)
    cols = rows if cols is None else list(cols)
    out = np.zeros((n, n), dtype=complex)
    out[np.ix_(rows, cols)] = np.asarray(M, dtype=complex)
    return out


def n_monomials(n: int) -> int:
    """Dimension of the algebra on ``n`` pairs."""
    return 4**n

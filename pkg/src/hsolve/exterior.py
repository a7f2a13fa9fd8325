"""Exterior powers, the Chevalley-Eilenberg complex and Weil operators.

Wedge bases are lexicographic on strictly increasing index tuples. Forms and
multivectors share the same coordinates and pair by the determinant pairing
``<e_I^*, e_J> = [I == J]``.

Sign conventions:

* ``d`` on 1-forms is ``d(alpha)(x, y) = -alpha([x, y])``; extended by the
  graded Leibniz rule.
* ``delta`` is the boundary ``sum_{r<s} (-1)^(r+s+1) [x_r, x_s] ^ ...``.

With these two conventions ``d`` is exactly the negative transpose of
``delta`` in every degree, i.e. ``<d a, xi> = DUALITY_SIGN * <a, delta xi>``
with ``DUALITY_SIGN = -1``.  :func:`duality_sign` recomputes the constant
from degree 1 -> 2 on a given algebra.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Sequence

from . import linalg as la
from .algebra import LieAlgebra
from .errors import InputError, InternalError
from .linalg import ZERO, ONE

DUALITY_SIGN = -1


@lru_cache(maxsize=None)
def wedge_basis(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    if k < 0 or k > n:
        return ()
    return tuple(combinations(range(n), k))


@lru_cache(maxsize=None)
def wedge_index(n: int, k: int) -> dict[tuple[int, ...], int]:
    return {I: a for a, I in enumerate(wedge_basis(n, k))}


def sort_sign(seq: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the sorting permutation; 0 when an index repeats."""
    s = list(seq)
    if len(set(s)) != len(s):
        return 0, ()
    sign = 1
    for i in range(len(s)):  # insertion sort counting transpositions
        j = i
        while j > 0 and s[j - 1] > s[j]:
            s[j - 1], s[j] = s[j], s[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(s)


@dataclass(frozen=True)
class Multivector:
    """Element of ``Lambda^k V`` (``kind='vector'``) or ``Lambda^k V^*`` (``'form'``)."""

    degree: int
    dim: int
    coords: tuple[Fraction, ...]
    kind: str = "vector"

    def __post_init__(self):
        if self.kind not in ("vector", "form"):
            raise InputError(f"unknown multivector kind {self.kind!r}")
        expected = comb(self.dim, self.degree) if 0 <= self.degree <= self.dim else 0
        if len(self.coords) != expected:
            raise InputError("coordinate vector has the wrong length for the wedge basis")

    @classmethod
    def zero(cls, dim: int, degree: int, kind: str = "vector") -> "Multivector":
        return cls(degree, dim, la.zeros(len(wedge_basis(dim, degree))), kind)

    @classmethod
    def from_terms(cls, dim: int, terms, kind: str = "vector") -> "Multivector":
        """Build from ``[(coefficient, (i1, ..., ik)), ...]`` with any index order."""
        terms = list(terms)
        if not terms:
            raise InputError("from_terms needs at least one term to know the degree")
        k = len(terms[0][1])
        coords = [ZERO] * len(wedge_basis(dim, k))
        index = wedge_index(dim, k)
        for c, I in terms:
            if len(I) != k:
                raise InputError("mixed degrees in multivector terms")
            if any(not 0 <= i < dim for i in I):
                raise InputError(f"wedge index out of range in {I}")
            sign, J = sort_sign(I)
            if sign:
                coords[index[J]] += sign * la.to_q(c)
        return cls(k, dim, tuple(coords), kind)

    @classmethod
    def wedge_vectors(cls, *vectors, kind: str = "vector") -> "Multivector":
        """Decomposable element ``v_1 ^ ... ^ v_k``."""
        n = len(vectors[0])
        k = len(vectors)
        coords = tuple(la.det([[v[i] for v in vectors] for i in I]) for I in wedge_basis(n, k))
        return cls(k, n, coords, kind)

    def __add__(self, other: "Multivector") -> "Multivector":
        self._check(other)
        return Multivector(self.degree, self.dim, la.add(self.coords, other.coords), self.kind)

    def __sub__(self, other: "Multivector") -> "Multivector":
        self._check(other)
        return Multivector(self.degree, self.dim, la.sub(self.coords, other.coords), self.kind)

    def __neg__(self):
        return Multivector(self.degree, self.dim, la.scale(-1, self.coords), self.kind)

    def __mul__(self, c) -> "Multivector":
        return Multivector(self.degree, self.dim, la.scale(la.to_q(c), self.coords), self.kind)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    def terms(self):
        return [(c, I) for c, I in zip(self.coords, wedge_basis(self.dim, self.degree)) if c]

    def _check(self, other):
        if (self.degree, self.dim, self.kind) != (other.degree, other.dim, other.kind):
            raise InputError("incompatible multivectors")


def wedge(a: Multivector, b: Multivector) -> Multivector:
    if a.dim != b.dim or a.kind != b.kind:
        raise InputError("wedge of incompatible multivectors")
    n, k = a.dim, a.degree + b.degree
    if k > n:
        return Multivector(k, n, (), a.kind)
    coords = [ZERO] * comb(n, k)
    index = wedge_index(n, k)
    for ca, I in a.terms():
        for cb, J in b.terms():
            sign, K = sort_sign(I + J)
            if sign:
                coords[index[K]] += sign * ca * cb
    return Multivector(k, n, tuple(coords), a.kind)


def pairing(alpha: Multivector, xi: Multivector) -> Fraction:
    if alpha.kind != "form" or xi.kind != "vector" or alpha.degree != xi.degree or alpha.dim != xi.dim:
        raise InputError("pairing needs a k-form and a k-multivector of the same dimension")
    return la.dot(alpha.coords, xi.coords)


# ---------------------------------------------------------------------------
# induced maps on exterior powers


def exterior_power(A, k: int, src_dim: int | None = None):
    """Matrix of ``Lambda^k A`` (rows: wedge basis of the target)."""
    m = len(A)
    n = src_dim if src_dim is not None else (len(A[0]) if A else 0)
    rows_basis = wedge_basis(m, k)
    cols_basis = wedge_basis(n, k)
    if k == 2:
        return tuple(tuple(A[a][i] * A[b][j] - A[a][j] * A[b][i] for (i, j) in cols_basis)
                     for (a, b) in rows_basis)
    return tuple(tuple(la.det([[A[r][c] for c in J] for r in I]) for J in cols_basis)
                 for I in rows_basis)


def derivation_power(A, k: int):
    """Matrix of the derivation extension of ``A`` to ``Lambda^k``."""
    n = len(A)
    basis = wedge_basis(n, k)
    index = wedge_index(n, k)
    cols = []
    for I in basis:
        col = [ZERO] * len(basis)
        for pos, i in enumerate(I):
            for r in range(n):
                a = A[r][i]
                if not a:
                    continue
                sign, J = sort_sign(I[:pos] + (r,) + I[pos + 1:])
                if sign:
                    col[index[J]] += sign * a
        cols.append(tuple(col))
    return la.from_columns(cols, len(basis))


def bivector_matrix(xi: Multivector):
    """Antisymmetric matrix ``X`` with ``X[a][b] = xi(e_a^*, e_b^*)``."""
    if xi.degree != 2:
        raise InputError("expected a degree-2 element")
    n = xi.dim
    X = [[ZERO] * n for _ in range(n)]
    for c, (i, j) in zip(xi.coords, wedge_basis(n, 2)):
        if c:
            X[i][j] = c
            X[j][i] = -c
    return tuple(tuple(r) for r in X)


def matrix_bivector(X, kind: str = "vector") -> Multivector:
    n = len(X)
    for i in range(n):
        for j in range(n):
            if X[i][j] != -X[j][i]:
                raise InputError("matrix is not antisymmetric")
    return Multivector(2, n, tuple(la.to_q(X[i][j]) for i, j in wedge_basis(n, 2)), kind)


def apply_linear(A, xi: Multivector) -> Multivector:
    """Push a multivector forward along ``A`` (functorial action)."""
    if len(A[0]) != xi.dim if A else xi.dim != 0:
        raise InputError("dimension mismatch in push-forward")
    M = exterior_power(A, xi.degree, xi.dim)
    return Multivector(xi.degree, len(A), la.matvec(M, xi.coords), xi.kind)


# ---------------------------------------------------------------------------
# Chevalley-Eilenberg


class CEComplex:
    """Differentials of the CE complex of a Lie algebra, cached per degree.

    ``d(k)`` maps ``Lambda^k g^* -> Lambda^{k+1} g^*`` and ``delta(k)`` maps
    ``Lambda^{k+1} g -> Lambda^k g``.  Both are stored sparsely as lists of
    columns ``{row: value}``.  The cache is guarded by a lock; concurrent first
    access computes the same value.
    """

    def __init__(self, algebra: LieAlgebra):
        self.algebra = algebra
        self.n = algebra.dim
        self._cache: dict[tuple[str, int], list[dict[int, Fraction]]] = {}
        self._lock = threading.Lock()

    def _cached(self, key, build):
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        value = build()
        with self._lock:
            return self._cache.setdefault(key, value)

    def _d_one(self) -> list[dict[int, Fraction]]:
        n = self.n
        index = wedge_index(n, 2)
        cols: list[dict[int, Fraction]] = [{} for _ in range(n)]
        for i, j, k, c in self.algebra.constants:
            r = index[(i, j)]
            cols[k][r] = cols[k].get(r, ZERO) - c
        return cols

    def d_sparse(self, k: int) -> list[dict[int, Fraction]]:
        def build():
            n = self.n
            if k < 0 or k >= n:
                return [{} for _ in wedge_basis(n, k)] if 0 <= k <= n else []
            if k == 0:
                return [{}]
            d1 = self._d_one()
            if k == 1:
                return d1
            index = wedge_index(n, k + 1)
            pairs = wedge_basis(n, 2)
            cols = []
            for I in wedge_basis(n, k):
                col: dict[int, Fraction] = {}
                for pos, i in enumerate(I):
                    # (-1)^pos e_{i_0} ^ ... ^ d(e_i) ^ ... from Leibniz
                    for r, c in d1[i].items():
                        a, b = pairs[r]
                        sign, J = sort_sign(I[:pos] + (a, b) + I[pos + 1:])
                        if sign:
                            idx = index[J]
                            col[idx] = col.get(idx, ZERO) + (-1) ** pos * sign * c
                cols.append({r: v for r, v in col.items() if v})
            return cols
        return self._cached(("d", k), build)

    def delta_sparse(self, k: int) -> list[dict[int, Fraction]]:
        """Columns of ``delta_k : Lambda^{k+1} g -> Lambda^k g``."""
        def build():
            n = self.n
            if k < 0 or k + 1 > n:
                return []
            if k == 0:
                return [{} for _ in wedge_basis(n, 1)]
            table = self.algebra._table
            index = wedge_index(n, k)
            cols = []
            for I in wedge_basis(n, k + 1):
                col: dict[int, Fraction] = {}
                for r in range(k + 1):
                    for s in range(r + 1, k + 1):
                        br = table.get((I[r], I[s]))
                        if not br:
                            continue
                        rest = I[:r] + I[r + 1:s] + I[s + 1:]
                        # (-1)^(r+s+1) for 1-based positions is the same for 0-based
                        base = 1 if (r + s) % 2 else -1
                        for m, c in br.items():
                            sign, J = sort_sign((m,) + rest)
                            if sign:
                                idx = index[J]
                                col[idx] = col.get(idx, ZERO) + base * sign * c
                cols.append({r: v for r, v in col.items() if v})
            return cols
        return self._cached(("delta", k), build)

    def d_matrix(self, k: int):
        return _dense(self.d_sparse(k), comb(self.n, k + 1) if k + 1 <= self.n else 0)

    def delta_matrix(self, k: int):
        return _dense(self.delta_sparse(k), comb(self.n, k) if 0 <= k <= self.n else 0)

    def d(self, alpha: Multivector) -> Multivector:
        if alpha.kind != "form" or alpha.dim != self.n:
            raise InputError("d acts on forms of the algebra's dimension")
        k = alpha.degree
        if k > self.n:
            raise InputError(f"degree {k} exceeds dimension {self.n}")
        if k == self.n:
            return Multivector(k + 1, self.n, (), "form")
        return Multivector(k + 1, self.n, _apply(self.d_sparse(k), alpha.coords, comb(self.n, k + 1)), "form")

    def delta(self, xi: Multivector) -> Multivector:
        if xi.kind != "vector" or xi.dim != self.n:
            raise InputError("delta acts on multivectors of the algebra's dimension")
        k = xi.degree
        if k < 1:
            raise InputError("delta is defined from degree 1")
        if k == 1:
            return Multivector(0, self.n, (ZERO,), "vector")
        return Multivector(k - 1, self.n, _apply(self.delta_sparse(k - 1), xi.coords, comb(self.n, k - 1)), "vector")

    def rank_d(self, k: int) -> int:
        if k < 1 or k >= self.n:
            return 0
        return _sparse_rank(self.d_sparse(k), comb(self.n, k + 1))

    def rank_delta(self, k: int) -> int:
        if k < 1 or k + 1 > self.n:
            return 0
        return _sparse_rank(self.delta_sparse(k), comb(self.n, k))

    def d_squared_zero(self) -> bool:
        """``d_{k+1} d_k = 0`` for every degree."""
        for k in range(1, self.n - 1):
            first = self.d_sparse(k)
            second = self.d_sparse(k + 1)
            for col in first:
                acc: dict[int, Fraction] = {}
                for r, v in col.items():
                    for r2, w in second[r].items():
                        acc[r2] = acc.get(r2, ZERO) + v * w
                if any(acc.values()):
                    return False
        return True

    def delta_squared_zero(self) -> bool:
        for k in range(1, self.n - 1):
            outer = self.delta_sparse(k)  # Lambda^{k+1} -> Lambda^k
            inner = self.delta_sparse(k - 1) if k - 1 >= 1 else None
            if inner is None:
                continue
            for col in outer:
                acc: dict[int, Fraction] = {}
                for r, v in col.items():
                    for r2, w in inner[r].items():
                        acc[r2] = acc.get(r2, ZERO) + v * w
                if any(acc.values()):
                    return False
        return True

    def cycles(self, k: int) -> list[tuple[Fraction, ...]]:
        """Basis of ``ker(delta_{k-1})`` in ``Lambda^k g``."""
        dim_k = comb(self.n, k)
        if k <= 1:
            return [la.unit(dim_k, i) for i in range(dim_k)]
        M = self.delta_matrix(k - 1)
        return la.nullspace(M, dim_k)


def _dense(cols: list[dict[int, Fraction]], nrows: int):
    rows = [[ZERO] * len(cols) for _ in range(nrows)]
    for j, col in enumerate(cols):
        for r, v in col.items():
            rows[r][j] = v
    return tuple(tuple(r) for r in rows)


def _apply(cols, coords, nrows):
    out = [ZERO] * nrows
    for c, col in zip(coords, cols):
        if c:
            for r, v in col.items():
                out[r] += c * v
    return tuple(out)


def _sparse_rank(cols, nrows) -> int:
    rows = [c for c in (_dense(cols, nrows) if cols else ()) if any(c)]
    return la.rank(rows, len(cols)) if rows else 0


def duality_sign(cx: CEComplex) -> int | None:
    """Sign ``s`` with ``<d a, xi> = s <a, delta xi>`` measured on degree 1 -> 2.

    ``None`` when the algebra is abelian (both sides vanish).
    """
    for (i, j, k, c) in cx.algebra.constants:
        lhs = -c  # <d e_k^*, e_i ^ e_j>
        rhs = c   # <e_k^*, [e_i, e_j]>
        return 1 if lhs == rhs else -1
    return None


def betti_numbers(cx: CEComplex) -> list[int]:
    """``b_k = dim ker d_k - rank d_{k-1}``; checked against the delta complex."""
    n = cx.n
    rd = [0] + [cx.rank_d(k) for k in range(1, n)] + [0]  # rd[k] = rank of d_k
    betti = []
    for k in range(n + 1):
        ker = comb(n, k) - (rd[k] if k < n else 0)
        betti.append(ker - (rd[k - 1] if k >= 1 else 0))
    rdel = {k: cx.rank_delta(k) for k in range(1, n)}
    homology = []
    for k in range(n + 1):
        ker = comb(n, k) - rdel.get(k - 1, 0)
        homology.append(ker - rdel.get(k, 0))
    if homology != betti:
        raise InternalError(f"cohomology {betti} and homology {homology} ranks disagree")
    return betti


# ---------------------------------------------------------------------------
# complex-structure types on bivectors


def sigma_matrix(L, s):
    """Involution ``Lambda^2 L / s`` on bivectors (``L^2 = -s Id``)."""
    s = la.to_q(s)
    if s <= 0:
        raise InputError("scale must be positive")
    return la.matscale(ONE / s, exterior_power(L, 2))


def pq_projections(xi: Multivector, L, s) -> tuple[Multivector, Multivector]:
    """Split a real bivector into its ``(2,0)+(0,2)`` and ``(1,1)`` parts."""
    if xi.degree != 2 or len(L) != xi.dim:
        raise InputError("pq_projections needs a bivector and an operator of matching dimension")
    S = sigma_matrix(L, s)
    sx = la.matvec(S, xi.coords)
    half = Fraction(1, 2)
    inv = tuple(half * (a + b) for a, b in zip(xi.coords, sx))
    anti = tuple(half * (a - b) for a, b in zip(xi.coords, sx))
    return (Multivector(2, xi.dim, anti, xi.kind), Multivector(2, xi.dim, inv, xi.kind))


def weil_matrix(L):
    """Derivation extension of ``L`` to ``Lambda^2``."""
    return _weil_matrix(tuple(tuple(la.to_q(x) for x in row) for row in L))


@lru_cache(maxsize=4096)
def _weil_matrix(L):
    return derivation_power(L, 2)


def weil_operator(H, direction, xi: Multivector) -> Multivector:
    from .structures import induced_structure
    L, _ = induced_structure(H, direction)
    if xi.degree != 2 or xi.dim != len(L):
        raise InputError("weil_operator acts on bivectors of the structure's dimension")
    return Multivector(2, xi.dim, la.matvec(weil_matrix(L), xi.coords), xi.kind)

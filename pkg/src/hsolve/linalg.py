"""Exact linear algebra over the rationals (and the Gaussian rationals).

Vectors are tuples of ``Fraction``; matrices are tuples of row tuples.
Elimination routines only rely on field arithmetic and truthiness, so they
also run over :class:`GaussianRational`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import InputError

ZERO = Fraction(0)
ONE = Fraction(1)


def to_q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise InputError(f"refusing inexact float {x!r}; use a string or Fraction")
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InputError(f"not a rational number: {x!r}") from exc


def vec(xs: Iterable) -> tuple[Fraction, ...]:
    return tuple(to_q(x) for x in xs)


def mat(rows: Iterable[Iterable]) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(vec(r) for r in rows)


def zeros(n: int) -> tuple[Fraction, ...]:
    return (ZERO,) * n


def unit(n: int, i: int) -> tuple[Fraction, ...]:
    v = [ZERO] * n
    v[i] = ONE
    return tuple(v)


def identity(n: int):
    return tuple(unit(n, i) for i in range(n))


def zero_matrix(m: int, n: int):
    return tuple((ZERO,) * n for _ in range(m))


def is_zero(v) -> bool:
    return not any(v)


def add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v):
    return tuple(c * a for a in v)


def dot(u, v):
    return sum((a * b for a, b in zip(u, v)), ZERO)


def lincomb(coeffs, vectors, n: int):
    out = [ZERO] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for i, a in enumerate(v):
                if a:
                    out[i] += c * a
    return tuple(out)


def matvec(A, v):
    return tuple(sum((a * b for a, b in zip(row, v) if a and b), ZERO) for row in A)


def transpose(A, ncols: int | None = None):
    if not A:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*A))


def matmul(A, B):
    Bt = transpose(B)
    return tuple(tuple(sum((a * b for a, b in zip(row, col) if a and b), ZERO) for col in Bt)
                 for row in A)


def matadd(A, B):
    return tuple(add(r, s) for r, s in zip(A, B))


def matscale(c, A):
    return tuple(scale(c, r) for r in A)


def column(A, j):
    return tuple(row[j] for row in A)


def from_columns(cols, nrows: int):
    if not cols:
        return tuple(() for _ in range(nrows))
    return tuple(zip(*cols))


def det(A) -> Fraction:
    """Determinant by exact Gaussian elimination."""
    n = len(A)
    M = [list(r) for r in A]
    result = ONE
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c]), None)
        if p is None:
            return ZERO
        if p != c:
            M[c], M[p] = M[p], M[c]
            result = -result
        piv = M[c][c]
        result *= piv
        for r in range(c + 1, n):
            f = M[r][c]
            if f:
                f = f / piv
                Mr, Mc = M[r], M[c]
                for k in range(c, n):
                    if Mc[k]:
                        Mr[k] -= f * Mc[k]
    return result


# ---------------------------------------------------------------------------
# elimination


def rref(rows: Sequence[Sequence], ncols: int):
    """Reduced row echelon form with unit pivots.

    Returns ``(nonzero_rows, pivot_columns)``.
    """
    M = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    nrows = len(M)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if M[i][c]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        if piv != 1:
            inv = 1 / piv
            M[r] = [x * inv if x else x for x in M[r]]
        Mr = M[r]
        nz = [k for k in range(c, ncols) if Mr[k]]
        for i in range(nrows):
            if i != r:
                f = M[i][c]
                if f:
                    Mi = M[i]
                    for k in nz:
                        Mi[k] -= f * Mr[k]
        pivots.append(c)
        r += 1
    return [tuple(row) for row in M[:r]], pivots


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    if not rows:
        return 0
    if ncols is None:
        ncols = len(rows[0])
    return len(rref(rows, ncols)[1])


def nullspace(A: Sequence[Sequence], ncols: int) -> list[tuple]:
    """Basis of ``{x : A x = 0}``, one vector per free column."""
    R, pivots = rref(A, ncols) if A else ([], [])
    pivset = set(pivots)
    zero = ZERO
    if R and not isinstance(R[0][0], Fraction):
        zero = R[0][0] * 0
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        x = [zero] * ncols
        x[f] = zero + 1
        for row, p in zip(R, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def solve(A: Sequence[Sequence], b: Sequence, ncols: int):
    """One solution of ``A x = b`` or ``None``."""
    aug = [tuple(row) + (bi,) for row, bi in zip(A, b)]
    R, pivots = rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [ZERO] * ncols
    for row, p in zip(R, pivots):
        x[p] = row[ncols]
    return tuple(x)


def primitive_integer(v) -> tuple[int, ...]:
    """Positive rescaling of a rational vector to a primitive integer vector."""
    den = 1
    for a in v:
        den = lcm(den, Fraction(a).denominator)
    ints = [int(Fraction(a) * den) for a in v]
    g = 0
    for a in ints:
        g = gcd(g, a)
    if g == 0:
        return tuple(ints)
    return tuple(a // g for a in ints)


def format_q(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True)
class Subspace:
    """Subspace of Q^n held as its canonical RREF basis.

    Two subspaces are equal iff their RREF bases coincide, so the default
    dataclass equality is subspace equality.
    """

    ambient_dim: int
    basis: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        rows = []
        for v in vectors:
            v = vec(v)
            if len(v) != ambient_dim:
                raise InputError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
            if any(v):
                rows.append(v)
        R, _ = rref(rows, ambient_dim) if rows else ([], [])
        return cls(ambient_dim, tuple(R))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, ())

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, identity(n))

    @classmethod
    def coordinate(cls, n: int, indices: Iterable[int]) -> "Subspace":
        return cls.span([unit(n, i) for i in indices], n)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(i for i, a in enumerate(row) if a) for row in self.basis)

    @cached_property
    def free_columns(self) -> tuple[int, ...]:
        piv = set(self.pivots)
        return tuple(i for i in range(self.ambient_dim) if i not in piv)

    def is_zero(self) -> bool:
        return not self.basis

    def reduce(self, v) -> tuple[Fraction, ...]:
        """Remainder of ``v`` modulo this subspace (zero on pivot columns)."""
        out = list(v)
        for row, p in zip(self.basis, self.pivots):
            c = out[p]
            if c:
                for k, a in enumerate(row):
                    if a:
                        out[k] -= c * a
        return tuple(out)

    def contains(self, v) -> bool:
        if len(v) != self.ambient_dim:
            raise InputError("dimension mismatch in membership test")
        return not any(self.reduce(v))

    __contains__ = contains

    def issubset(self, other: "Subspace") -> bool:
        self._check(other)
        return all(other.contains(v) for v in self.basis)

    __le__ = issubset

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.basis + other.basis, self.ambient_dim)

    def intersection(self, other: "Subspace") -> "Subspace":
        self._check(other)
        n = self.ambient_dim
        a, b = self.basis, other.basis
        if not a or not b:
            return Subspace.zero(n)
        # solve sum x_i a_i - sum y_j b_j = 0
        cols = list(a) + [scale(-1, v) for v in b]
        A = transpose(cols)
        vecs = []
        for sol in nullspace(A, len(cols)):
            vecs.append(lincomb(sol[:len(a)], a, n))
        return Subspace.span(vecs, n)

    def image(self, A) -> "Subspace":
        """Image under the matrix ``A`` (acting on column vectors)."""
        return Subspace.span([matvec(A, v) for v in self.basis], len(A))

    def is_invariant(self, A) -> bool:
        return all(self.contains(matvec(A, v)) for v in self.basis)

    def coordinates(self, v) -> tuple[Fraction, ...]:
        """Coordinates of ``v`` in the RREF basis; raises if ``v`` is outside."""
        if not self.contains(v):
            raise InputError("vector does not lie in the subspace")
        return tuple(v[p] for p in self.pivots)

    def inclusion_matrix(self):
        """n x dim matrix whose columns are the basis vectors."""
        return from_columns(self.basis, self.ambient_dim)

    def _check(self, other: "Subspace"):
        if self.ambient_dim != other.ambient_dim:
            raise InputError(
                f"ambient dimension mismatch: {self.ambient_dim} vs {other.ambient_dim}")


def annihilator(S: Subspace) -> Subspace:
    """Subspace of the dual killing ``S`` (dual coordinates)."""
    if S.is_zero():
        return Subspace.full(S.ambient_dim)
    return Subspace.span(nullspace(S.basis, S.ambient_dim), S.ambient_dim)


def projection_modulo(S: Subspace):
    """Matrix of Q^n -> Q^n / S using the free columns of ``S`` as quotient basis.

    Returns ``(P, lift)`` where ``P`` is (n - dim S) x n and ``lift`` is the
    n x (n - dim S) section sending quotient basis vectors to unit vectors.
    """
    n = S.ambient_dim
    free = S.free_columns
    cols = [tuple(S.reduce(unit(n, j))[f] for f in free) for j in range(n)]
    P = from_columns(cols, len(free))
    lift = from_columns([unit(n, f) for f in free], n)
    return P, lift


# ---------------------------------------------------------------------------
# symmetric forms


def charpoly(A) -> list[Fraction]:
    """Coefficients ``[1, c1, ..., cn]`` of ``det(t I - A)`` (Faddeev-LeVerrier).

    Runs on the integer matrix ``D A`` (``D`` a common denominator), where
    every division is exact, and rescales ``c_k`` by ``D^k`` at the end.
    """
    n = len(A)
    den = 1
    for row in A:
        for x in row:
            den = lcm(den, Fraction(x).denominator)
    B = [[int(Fraction(x) * den) for x in row] for row in A]
    coeffs = [1]
    M = [[0] * n for _ in range(n)]
    c = 1
    for k in range(1, n + 1):
        M = [[sum(B[i][m] * M[m][j] for m in range(n)) + (c if i == j else 0) for j in range(n)]
             for i in range(n)]
        tr = sum(B[i][m] * M[m][i] for i in range(n) for m in range(n))
        c, r = divmod(-tr, k)
        if r:
            raise ArithmeticError("non-integral Faddeev-LeVerrier step")
        coeffs.append(c)
    return [Fraction(c, den ** k) for k, c in enumerate(coeffs)]


def symmetric_sign_class(S) -> str:
    """Classify a symmetric rational matrix from its characteristic polynomial.

    All roots of the characteristic polynomial of a symmetric matrix are real,
    so they are all >= 0 exactly when the coefficients alternate weakly in sign.
    Returns one of ``zero``, ``positive_definite``, ``positive``, ``negative``,
    ``indefinite`` (``negative`` covers semidefinite and definite).
    """
    cs = charpoly(S)
    n = len(cs) - 1
    if all(c == 0 for c in cs[1:]):
        return "zero"
    psd = all((-1) ** k * cs[k] >= 0 for k in range(n + 1))
    if psd:
        return "positive_definite" if cs[n] != 0 else "positive"
    nsd = all(c >= 0 for c in cs)
    if nsd:
        return "negative"
    return "indefinite"


def congruence_diagonalize(S):
    """Find invertible ``P`` with ``P^T S P`` diagonal (symmetric Gaussian elimination).

    Returns ``(diagonal, P)``; column ``k`` of ``P`` is a vector on which the
    quadratic form takes the value ``diagonal[k]``.
    """
    n = len(S)
    A = [list(r) for r in S]
    P = [list(r) for r in identity(n)]

    def col_op(dst, src, f):  # column dst += f * column src, then same for rows
        for i in range(n):
            A[i][dst] += f * A[i][src]
        for j in range(n):
            A[dst][j] += f * A[src][j]
        for i in range(n):
            P[i][dst] += f * P[i][src]

    def swap(a, b):
        for row in A:
            row[a], row[b] = row[b], row[a]
        A[a], A[b] = A[b], A[a]
        for row in P:
            row[a], row[b] = row[b], row[a]

    for k in range(n):
        if not A[k][k]:
            p = next((i for i in range(k + 1, n) if A[i][i]), None)
            if p is not None:
                swap(k, p)
            else:
                q = next((j for j in range(k + 1, n) if A[k][j]), None)
                if q is None:
                    continue
                col_op(k, q, ONE)  # now A[k][k] = 2 A[k][q] != 0
        piv = A[k][k]
        for j in range(k + 1, n):
            if A[k][j]:
                col_op(j, k, -A[k][j] / piv)
    return [A[i][i] for i in range(n)], tuple(tuple(r) for r in P)


def quadratic_value(S, x) -> Fraction:
    return dot(x, matvec(S, x))


# ---------------------------------------------------------------------------
# Gaussian rationals


@dataclass(frozen=True)
class GaussianRational:
    """Element ``re + im*i`` of Q(i)."""

    re: Fraction = ZERO
    im: Fraction = ZERO

    @staticmethod
    def of(x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        return GaussianRational(to_q(x), ZERO)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.of(other)
            except InputError:
                return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __add__(self, o):
        o = GaussianRational.of(o)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-GaussianRational.of(o))

    def __rsub__(self, o):
        return GaussianRational.of(o) - self

    def __mul__(self, o):
        o = GaussianRational.of(o)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = GaussianRational.of(o)
        n = o.re * o.re + o.im * o.im
        if not n:
            raise ZeroDivisionError("division by zero in Q(i)")
        return self * GaussianRational(o.re / n, -o.im / n)

    def __rtruediv__(self, o):
        return GaussianRational.of(o) / self

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __repr__(self):
        return f"({format_q(self.re)}{'+' if self.im >= 0 else '-'}{format_q(abs(self.im))}i)"


GI = GaussianRational(ZERO, ONE)


def complexify(v):
    return tuple(GaussianRational.of(a) for a in v)

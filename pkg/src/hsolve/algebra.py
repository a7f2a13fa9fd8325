"""Finite-dimensional Lie algebras with exact rational structure constants."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from . import linalg as la
from .errors import InputError, NotAnIdealError, NotASubalgebraError
from .linalg import ZERO, Subspace


@dataclass(frozen=True)
class LieAlgebra:
    """Lie algebra over Q given by sparse structure constants.

    ``constants`` holds ``(i, j, k, c)`` meaning ``[e_i, e_j]`` has ``c`` on
    ``e_k``; always ``i < j``, ``c != 0``, sorted.  Indices are 0-based.
    """

    basis_names: tuple[str, ...]
    constants: tuple[tuple[int, int, int, Fraction], ...] = ()
    name: str = ""

    @classmethod
    def build(cls, basis_names: Sequence[str] | int,
              brackets: Mapping[tuple, Mapping] | Iterable[tuple] = (),
              name: str = "") -> "LieAlgebra":
        """Normalizing constructor.

        ``brackets`` is either a mapping ``(i, j) -> {k: c}`` or an iterable of
        ``(i, j, k, c)``; indices may be names or integers, pairs in either
        order.  Repeated entries for the same ``(i, j, k)`` accumulate.
        """
        if isinstance(basis_names, int):
            basis_names = [f"e{i + 1}" for i in range(basis_names)]
        names = tuple(basis_names)
        if not names:
            raise InputError("Lie algebra must have positive dimension")
        if len(set(names)) != len(names):
            raise InputError(f"duplicate basis names in {names}")
        n = len(names)
        lookup = {nm: i for i, nm in enumerate(names)}

        def idx(x):
            if isinstance(x, str):
                if x not in lookup:
                    raise InputError(f"unknown basis element {x!r}")
                return lookup[x]
            if not isinstance(x, int) or not 0 <= x < n:
                raise InputError(f"structure constant index {x!r} out of range 0..{n - 1}")
            return x

        entries: list[tuple] = []
        if isinstance(brackets, Mapping):
            for (a, b), image in brackets.items():
                for k, c in image.items():
                    entries.append((a, b, k, c))
        else:
            entries = list(brackets)

        acc: dict[tuple[int, int, int], Fraction] = {}
        for entry in entries:
            if len(entry) != 4:
                raise InputError(f"malformed structure constant entry {entry!r}")
            a, b, k, c = entry
            i, j, k = idx(a), idx(b), idx(k)
            c = la.to_q(c)
            if i == j:
                if c:
                    raise InputError(f"[{names[i]}, {names[i]}] must vanish")
                continue
            if i > j:
                i, j, c = j, i, -c
            acc[(i, j, k)] = acc.get((i, j, k), ZERO) + c
        consts = tuple(sorted((i, j, k, c) for (i, j, k), c in acc.items() if c))
        return cls(names, consts, name)

    @classmethod
    def abelian(cls, n: int, name: str = "") -> "LieAlgebra":
        return cls.build(n, (), name)

    @property
    def dim(self) -> int:
        return len(self.basis_names)

    @cached_property
    def _table(self) -> dict[tuple[int, int], dict[int, Fraction]]:
        table: dict[tuple[int, int], dict[int, Fraction]] = {}
        for i, j, k, c in self.constants:
            table.setdefault((i, j), {})[k] = c
            table.setdefault((j, i), {})[k] = -c
        return table

    def basis_bracket(self, i: int, j: int) -> tuple[Fraction, ...]:
        out = [ZERO] * self.dim
        for k, c in self._table.get((i, j), {}).items():
            out[k] = c
        return tuple(out)

    def constant(self, i: int, j: int, k: int) -> Fraction:
        return self._table.get((i, j), {}).get(k, ZERO)

    def is_abelian(self) -> bool:
        return not self.constants

    def bracket(self, u: Sequence, v: Sequence) -> tuple:
        """Bilinear extension of the structure constants.

        Works over any ring whose elements multiply with ``Fraction``
        (used with Gaussian rationals for complexified brackets).
        """
        n = self.dim
        if len(u) != n or len(v) != n:
            raise InputError(f"bracket of vectors of length {len(u)}, {len(v)} in dimension {n}")
        out = [ZERO] * n
        for i, j, k, c in self.constants:
            w = u[i] * v[j] - u[j] * v[i]
            if w:
                out[k] = out[k] + w * c
        return tuple(out)

    def ad(self, i: int):
        """Matrix of ``ad(e_i)``."""
        cols = [self.basis_bracket(i, j) for j in range(self.dim)]
        return la.from_columns(cols, self.dim)

    def vector(self, expr: Mapping[str, object]) -> tuple[Fraction, ...]:
        """Vector from a ``{name: coefficient}`` mapping."""
        out = [ZERO] * self.dim
        for nm, c in expr.items():
            if nm not in self.basis_names:
                raise InputError(f"unknown basis element {nm!r}")
            out[self.basis_names.index(nm)] += la.to_q(c)
        return tuple(out)

    def e(self, name_or_index) -> tuple[Fraction, ...]:
        i = name_or_index
        if isinstance(i, str):
            i = self.basis_names.index(i)
        return la.unit(self.dim, i)

    def span(self, *names) -> Subspace:
        return Subspace.span([self.e(nm) for nm in names], self.dim)


@dataclass(frozen=True)
class JacobiReport:
    ok: bool
    triple: tuple[int, int, int] | None = None
    residual: tuple[Fraction, ...] | None = None
    names: tuple[str, str, str] | None = field(default=None, compare=False)

    def __bool__(self):
        return self.ok


def jacobiator(algebra: LieAlgebra, i: int, j: int, k: int) -> tuple[Fraction, ...]:
    n = algebra.dim
    out = [ZERO] * n
    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
        for m, coef in algebra._table.get((a, b), {}).items():
            for r, coef2 in algebra._table.get((m, c), {}).items():
                out[r] += coef * coef2
    return tuple(out)


def validate(algebra: LieAlgebra) -> JacobiReport:
    """Exact Jacobi check over all basis triples ``i < j < k`` in lex order."""
    for i, j, k in combinations(range(algebra.dim), 3):
        res = jacobiator(algebra, i, j, k)
        if any(res):
            nm = algebra.basis_names
            return JacobiReport(False, (i, j, k), res, (nm[i], nm[j], nm[k]))
    return JacobiReport(True)


def bracket(algebra: LieAlgebra, u, v):
    return algebra.bracket(la.vec(u), la.vec(v))


def bracket_subspaces(algebra: LieAlgebra, A: Subspace, B: Subspace) -> Subspace:
    n = algebra.dim
    if A.ambient_dim != n or B.ambient_dim != n:
        raise InputError("subspace ambient dimension does not match the algebra")
    return Subspace.span([algebra.bracket(a, b) for a in A.basis for b in B.basis], n)


def derived_algebra(algebra: LieAlgebra) -> Subspace:
    g = Subspace.full(algebra.dim)
    return bracket_subspaces(algebra, g, g)


def lower_central_series(algebra: LieAlgebra) -> list[Subspace]:
    """``[g_0, g_1, ...]`` without repeats; ends at 0 iff nilpotent."""
    g = Subspace.full(algebra.dim)
    series = [g]
    while True:
        nxt = bracket_subspaces(algebra, series[-1], g)
        if nxt == series[-1]:
            return series
        series.append(nxt)
        if nxt.is_zero():
            return series


def is_nilpotent(algebra: LieAlgebra) -> bool:
    return lower_central_series(algebra)[-1].is_zero()


def is_subalgebra(algebra: LieAlgebra, S: Subspace) -> bool:
    return bracket_subspaces(algebra, S, S).issubset(S)


def is_ideal(algebra: LieAlgebra, S: Subspace) -> bool:
    return bracket_subspaces(algebra, S, Subspace.full(algebra.dim)).issubset(S)


def is_rational_subalgebra(algebra: LieAlgebra, S: Subspace) -> bool:
    """Bracket closure of ``S``.

    With rational structure constants and a rational basis for ``S`` the
    rationality condition is automatic, so only closure remains to check.
    """
    return is_subalgebra(algebra, S)


@dataclass(frozen=True)
class QuotientMap:
    source_dim: int
    target_dim: int
    matrix: tuple[tuple[Fraction, ...], ...]
    kernel: Subspace

    def __call__(self, v):
        return la.matvec(self.matrix, v)


def quotient(algebra: LieAlgebra, ideal: Subspace, name: str = "") -> tuple[LieAlgebra, QuotientMap]:
    """Quotient algebra; the free (non-pivot) coordinates of ``ideal`` give its basis."""
    n = algebra.dim
    if ideal.ambient_dim != n:
        raise InputError("ideal lives in a different ambient dimension")
    for a in ideal.basis:
        for j in range(n):
            w = algebra.bracket(a, la.unit(n, j))
            if not ideal.contains(w):
                raise NotAnIdealError(
                    f"subspace is not an ideal: bracket of basis vector {a} with "
                    f"{algebra.basis_names[j]} leaves it", pair=(a, j))
    P, _ = la.projection_modulo(ideal)
    free = ideal.free_columns
    if not free:
        raise InputError("quotient by the whole algebra is zero-dimensional")
    entries = []
    for a, i in enumerate(free):
        for b in range(a + 1, len(free)):
            image = la.matvec(P, algebra.basis_bracket(i, free[b]))
            entries.extend((a, b, k, c) for k, c in enumerate(image) if c)
    names = tuple(algebra.basis_names[i] for i in free)
    q = LieAlgebra.build(names, entries, name or (algebra.name and f"{algebra.name}/ideal"))
    return q, QuotientMap(n, len(free), P, ideal)


def subalgebra(algebra: LieAlgebra, S: Subspace, name: str = "") -> LieAlgebra:
    """``S`` as a Lie algebra in the coordinates of its RREF basis."""
    if S.is_zero():
        raise InputError("zero subspace has no algebra structure of positive dimension")
    if not is_subalgebra(algebra, S):
        raise NotASubalgebraError("subspace is not closed under the bracket")
    entries = []
    B = S.basis
    for a in range(len(B)):
        for b in range(a + 1, len(B)):
            coords = S.coordinates(algebra.bracket(B[a], B[b]))
            entries.extend((a, b, k, c) for k, c in enumerate(coords) if c)
    names = tuple(f"s{i + 1}" for i in range(len(B)))
    return LieAlgebra.build(names, entries, name)


def change_basis(algebra: LieAlgebra, P, name: str = "") -> LieAlgebra:
    """Structure constants in the basis ``f_j = sum_i P[i][j] e_i`` (P invertible)."""
    n = algebra.dim
    cols = [la.column(P, j) for j in range(n)]
    if la.rank(cols, n) != n:
        raise InputError("change of basis matrix is singular")
    entries = []
    for a in range(n):
        for b in range(a + 1, n):
            w = algebra.bracket(cols[a], cols[b])
            coords = la.solve(P, w, n)
            entries.extend((a, b, k, c) for k, c in enumerate(coords) if c)
    return LieAlgebra.build(algebra.basis_names, entries, name or algebra.name)

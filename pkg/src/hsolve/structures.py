"""Complex and hypercomplex structure operators on a Lie algebra.

Covers integrability (Nijenhuis tensor and the (1,0)-subalgebra criterion,
which must agree), abelian complex structures, the filtration by the
I-invariant hulls of the lower central series, the quaternionic filtration
and the decision whether it reaches zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .algebra import (LieAlgebra, bracket_subspaces, is_subalgebra, lower_central_series)
from .errors import (InputError, InternalError, NotIntegrableError, NotNilpotentError,
                     PropertyViolation)
from .linalg import GI, ZERO, GaussianRational, Subspace


@dataclass(frozen=True)
class LinearOperator:
    """Square rational matrix acting on column coordinate vectors."""

    matrix: tuple[tuple[Fraction, ...], ...]
    name: str = ""

    @classmethod
    def of(cls, rows, name: str = "") -> "LinearOperator":
        M = la.mat(rows)
        n = len(M)
        if n == 0 or any(len(r) != n for r in M):
            raise InputError(f"operator {name or ''} is not a non-empty square matrix")
        return cls(M, name)

    @classmethod
    def from_images(cls, algebra: LieAlgebra, images: dict, name: str = "") -> "LinearOperator":
        """Operator from ``{basis_name: {basis_name: coeff}}``; unlisted images are 0."""
        n = algebra.dim
        cols = [la.zeros(n) for _ in range(n)]
        for src, img in images.items():
            cols[algebra.basis_names.index(src)] = algebra.vector(img)
        return cls(la.from_columns(cols, n), name)

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def __call__(self, v):
        return la.matvec(self.matrix, v)

    def __matmul__(self, other: "LinearOperator") -> "LinearOperator":
        return LinearOperator(la.matmul(self.matrix, other.matrix))

    def __neg__(self):
        return LinearOperator(la.matscale(-1, self.matrix), self.name and f"-{self.name}")

    def __eq__(self, other):
        return isinstance(other, LinearOperator) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def squares_to(self, c) -> bool:
        sq = la.matmul(self.matrix, self.matrix)
        return sq == la.matscale(la.to_q(c), la.identity(self.dim))

    def is_almost_complex(self) -> bool:
        return self.squares_to(-1)


def _require_almost_complex(I: LinearOperator, algebra: LieAlgebra | None = None):
    if algebra is not None and I.dim != algebra.dim:
        raise InputError(f"operator of size {I.dim} on an algebra of dimension {algebra.dim}")
    if not I.is_almost_complex():
        raise InputError(f"operator {I.name or ''} does not square to -Id")


@dataclass(frozen=True)
class HypercomplexStructure:
    I: LinearOperator
    J: LinearOperator
    K: LinearOperator

    def __post_init__(self):
        n = self.I.dim
        if self.J.dim != n or self.K.dim != n:
            raise InputError("I, J, K have different sizes")
        problems = quaternion_relation_defects(self.I, self.J, self.K)
        if problems:
            raise InputError("quaternionic relations fail: " + ", ".join(problems))

    @classmethod
    def from_IJ(cls, I: LinearOperator, J: LinearOperator) -> "HypercomplexStructure":
        return cls(I, J, LinearOperator(la.matmul(I.matrix, J.matrix), "K"))

    @property
    def dim(self) -> int:
        return self.I.dim

    @property
    def operators(self) -> tuple[LinearOperator, LinearOperator, LinearOperator]:
        return (self.I, self.J, self.K)


def quaternion_relation_defects(I, J, K) -> list[str]:
    """Names of the quaternionic relations that fail (empty when all hold)."""
    out = []
    n = I.dim
    minus = la.matscale(-1, la.identity(n))
    for nm, op in (("I^2", I), ("J^2", J), ("K^2", K)):
        if la.matmul(op.matrix, op.matrix) != minus:
            out.append(f"{nm} != -Id")
    IJ = la.matmul(I.matrix, J.matrix)
    JI = la.matmul(J.matrix, I.matrix)
    if IJ != K.matrix:
        out.append("IJ != K")
    if JI != la.matscale(-1, K.matrix):
        out.append("JI != -K")
    return out


def standard_quaternionic(n: int) -> HypercomplexStructure:
    """Right quaternion action on ``R^n`` (``n = 4m``): blocks ``e0, Ie0, Je0, Ke0``."""
    if n % 4:
        raise InputError("quaternionic dimension must be divisible by 4")
    I = [[ZERO] * n for _ in range(n)]
    J = [[ZERO] * n for _ in range(n)]
    for b in range(0, n, 4):
        e0, e1, e2, e3 = b, b + 1, b + 2, b + 3
        # I: e0 -> e1 -> -e0, e2 -> e3 -> -e2 (columns are images)
        I[e1][e0] = 1; I[e0][e1] = -1; I[e3][e2] = 1; I[e2][e3] = -1
        # J: e0 -> e2 -> -e0, e1 -> -e3, e3 -> e1
        J[e2][e0] = 1; J[e0][e2] = -1; J[e3][e1] = -1; J[e1][e3] = 1
    return HypercomplexStructure.from_IJ(LinearOperator.of(I, "I"), LinearOperator.of(J, "J"))


@dataclass(frozen=True)
class SphereDirection:
    """Unnormalized direction ``(a : b : c)`` standing for ``aI + bJ + cK``.

    Opposite triples are different directions; positive multiples are the same.
    """

    a: Fraction
    b: Fraction
    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", la.to_q(self.a))
        object.__setattr__(self, "b", la.to_q(self.b))
        object.__setattr__(self, "c", la.to_q(self.c))
        if not (self.a or self.b or self.c):
            raise InputError("zero direction")

    @property
    def scale(self) -> Fraction:
        return self.a * self.a + self.b * self.b + self.c * self.c

    def canonical(self) -> tuple[int, int, int]:
        return la.primitive_integer((self.a, self.b, self.c))

    def same_ray(self, other: "SphereDirection") -> bool:
        return self.canonical() == other.canonical()

    def __neg__(self):
        return SphereDirection(-self.a, -self.b, -self.c)

    def __str__(self):
        return ",".join(la.format_q(x) for x in (self.a, self.b, self.c))


def induced_structure(H: HypercomplexStructure, d: SphereDirection) -> tuple[tuple, Fraction]:
    """``(aI + bJ + cK, a^2 + b^2 + c^2)``; the operator squares to ``-s Id``."""
    if not isinstance(d, SphereDirection):
        d = SphereDirection(*d)
    I, J, K = (op.matrix for op in H.operators)
    L = tuple(tuple(d.a * x + d.b * y + d.c * z for x, y, z in zip(ri, rj, rk))
              for ri, rj, rk in zip(I, J, K))
    s = d.scale
    if la.matmul(L, L) != la.matscale(-s, la.identity(len(L))):
        raise InternalError("induced operator does not square to -s Id")
    return L, s


def rational_sqrt(q: Fraction) -> Fraction | None:
    from math import isqrt
    q = la.to_q(q)
    if q < 0:
        return None
    n, d = isqrt(q.numerator), isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def normalized_structure(H: HypercomplexStructure, d: SphereDirection) -> LinearOperator | None:
    """True complex structure for ``d`` when ``|d|`` is rational, else ``None``."""
    L, s = induced_structure(H, d)
    r = rational_sqrt(s)
    if r is None:
        return None
    return LinearOperator(la.matscale(1 / r, L), f"L({d})")


# ---------------------------------------------------------------------------
# integrability


def nijenhuis(algebra: LieAlgebra, I: LinearOperator, u, v):
    """``[u,v] + I[Iu,v] + I[u,Iv] - [Iu,Iv]``."""
    _require_almost_complex(I, algebra)
    u, v = la.vec(u), la.vec(v)
    br = algebra.bracket
    Iu, Iv = I(u), I(v)
    return la.sub(la.add(la.add(br(u, v), I(br(Iu, v))), I(br(u, Iv))), br(Iu, Iv))


def holomorphic_basis(I: LinearOperator) -> list[tuple]:
    """Basis of ``ker(I - i Id)`` over the Gaussian rationals."""
    n = I.dim
    M = [[GaussianRational.of(I.matrix[r][c]) - (GI if r == c else 0) for c in range(n)]
         for r in range(n)]
    return la.nullspace(M, n)


def _complex_apply(I: LinearOperator, w):
    return tuple(sum((GaussianRational.of(a) * x for a, x in zip(row, w) if a), GaussianRational())
                 for row in I.matrix)


def _in_holomorphic(I: LinearOperator, w) -> bool:
    Iw = _complex_apply(I, w)
    return all(a == GI * b for a, b in zip(Iw, w))


def _complex_bracket(algebra: LieAlgebra, u, v):
    return tuple(GaussianRational.of(x) for x in algebra.bracket(u, v))


@dataclass(frozen=True)
class IntegrabilityResult:
    integrable: bool
    witness: tuple[int, int] | None = None
    value: tuple[Fraction, ...] | None = None
    witness_names: tuple[str, str] | None = field(default=None, compare=False)

    def __bool__(self):
        return self.integrable


def is_integrable(algebra: LieAlgebra, I: LinearOperator) -> IntegrabilityResult:
    """Nijenhuis test on basis pairs, cross-checked in the complexification."""
    _require_almost_complex(I, algebra)
    n = algebra.dim
    witness = None
    for i in range(n):
        for j in range(i + 1, n):
            N = nijenhuis(algebra, I, la.unit(n, i), la.unit(n, j))
            if any(N):
                witness = (i, j, N)
                break
        if witness:
            break
    hol = holomorphic_basis(I)
    closed = all(_in_holomorphic(I, _complex_bracket(algebra, u, v))
                 for a, u in enumerate(hol) for v in hol[a + 1:])
    if closed != (witness is None):
        raise InternalError("Nijenhuis tensor and (1,0)-closure disagree on integrability")
    if witness is None:
        return IntegrabilityResult(True)
    i, j, N = witness
    nm = algebra.basis_names
    return IntegrabilityResult(False, (i, j), N, (nm[i], nm[j]))


def is_abelian_structure(algebra: LieAlgebra, I: LinearOperator) -> bool:
    """Whether the (1,0)-subalgebra is abelian."""
    res = is_integrable(algebra, I)
    if not res:
        raise NotIntegrableError("complex structure is not integrable", res.witness)
    hol = holomorphic_basis(I)
    return all(not any(_complex_bracket(algebra, u, v)) for a, u in enumerate(hol) for v in hol[a + 1:])


# ---------------------------------------------------------------------------
# filtrations


def invariant_hull(S: Subspace, operators: Sequence[LinearOperator]) -> Subspace:
    """``S + sum_op op(S)``."""
    vecs = list(S.basis)
    for op in operators:
        if op.dim != S.ambient_dim:
            raise InputError("operator and subspace dimensions differ")
        vecs.extend(op(v) for v in S.basis)
    return Subspace.span(vecs, S.ambient_dim)


@dataclass
class FiltrationReport:
    terms: list[Subspace]
    failures: list[str] = field(default_factory=list)
    reached_zero: bool = True

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def dims(self) -> list[int]:
        return [t.dim for t in self.terms]


def i_filtration(algebra: LieAlgebra, I: LinearOperator) -> FiltrationReport:
    """``g_k^I = g_k + I g_k`` for ``k >= 1`` with the expected properties checked."""
    res = is_integrable(algebra, I)
    if not res:
        raise NotIntegrableError("complex structure is not integrable", res.witness)
    lcs = lower_central_series(algebra)
    if not lcs[-1].is_zero():
        raise NotNilpotentError("lower central series stabilizes at a nonzero ideal")
    terms = [invariant_hull(gk, [I]) for gk in lcs[1:]]
    failures = []
    full = Subspace.full(algebra.dim)
    for k, t in enumerate(terms, start=1):
        if not t.is_invariant(I.matrix):
            failures.append(f"g_{k}^I is not I-invariant")
        nxt = terms[k] if k < len(terms) else Subspace.zero(algebra.dim)
        if not bracket_subspaces(algebra, t, t).issubset(nxt):
            failures.append(f"[g_{k}^I, g_{k}^I] is not contained in g_{k + 1}^I")
    if terms and terms[0] == full:
        failures.append("g_1^I equals g")
    return FiltrationReport(terms, failures)


def quaternionic_span(H: HypercomplexStructure, S: Subspace) -> Subspace:
    T = invariant_hull(S, H.operators)
    if not all(T.is_invariant(op.matrix) for op in H.operators):
        raise InternalError("quaternionic hull is not H-invariant")
    return T


def check_hypercomplex(algebra: LieAlgebra, H: HypercomplexStructure) -> None:
    if H.dim != algebra.dim:
        raise InputError("hypercomplex structure and algebra dimensions differ")
    for op, nm in zip(H.operators, "IJK"):
        res = is_integrable(algebra, op)
        if not res:
            raise NotIntegrableError(f"{nm} is not integrable (witness {res.witness_names})",
                                     res.witness)


def h_filtration(algebra: LieAlgebra, H: HypercomplexStructure) -> FiltrationReport:
    """``g_1^H = H[g,g]``, ``g_i^H = H[g_{i-1}^H, g_{i-1}^H]`` until 0 or a repeat."""
    if H.dim != algebra.dim:
        raise InputError("hypercomplex structure and algebra dimensions differ")
    g = Subspace.full(algebra.dim)
    terms = [quaternionic_span(H, bracket_subspaces(algebra, g, g))]
    failures = []
    while not terms[-1].is_zero():
        nxt = quaternionic_span(H, bracket_subspaces(algebra, terms[-1], terms[-1]))
        if nxt == terms[-1]:
            break
        terms.append(nxt)
    for i, t in enumerate(terms, start=1):
        if not is_subalgebra(algebra, t):
            failures.append(f"g_{i}^H is not a subalgebra")
        if not all(t.is_invariant(op.matrix) for op in H.operators):
            failures.append(f"g_{i}^H is not H-invariant")
        if i > 1 and not t.issubset(terms[i - 2]):
            failures.append(f"g_{i}^H is not contained in g_{i - 1}^H")
    return FiltrationReport(terms, failures, terms[-1].is_zero())


@dataclass(frozen=True)
class HSolvability:
    solvable: bool
    steps: int | None = None
    stable: Subspace | None = None

    def __bool__(self):
        return self.solvable

    def __str__(self):
        if self.solvable:
            return f"solvable({self.steps})"
        return f"stabilized_nonzero(dim {self.stable.dim})"


def is_h_solvable(algebra: LieAlgebra, H: HypercomplexStructure) -> HSolvability:
    rep = h_filtration(algebra, H)
    if rep.failures:
        raise PropertyViolation("quaternionic filtration diagnostics failed: " + "; ".join(rep.failures),
                                rep)
    if rep.reached_zero:
        return HSolvability(True, len(rep.terms))
    return HSolvability(False, stable=rep.terms[-1])


def restrict_operator(op: LinearOperator, S: Subspace) -> LinearOperator:
    """Matrix of ``op`` on an invariant subspace in its RREF-basis coordinates."""
    cols = [S.coordinates(op(v)) for v in S.basis]
    return LinearOperator(la.from_columns(cols, S.dim), op.name)


def restrict_structure(H: HypercomplexStructure, S: Subspace) -> HypercomplexStructure:
    return HypercomplexStructure(*(restrict_operator(op, S) for op in H.operators))


def induced_on_quotient(op: LinearOperator, P, lift) -> LinearOperator:
    """Operator induced on ``V/W`` from projection ``P`` and section ``lift``."""
    return LinearOperator(la.matmul(P, la.matmul(op.matrix, lift)), op.name)

"""The connection nabla^+ and the quaternionic double g + g.

The doubled bracket is ``[(a,b),(c,d)] = ([a,c], nabla_a d - nabla_c b)``,
the semidirect product of ``g`` with ``g`` viewed as a module through
``nabla``.  With ``[a,b]`` in the first slot instead (the formula as printed
in the source of this construction) the expression depends on ``b`` but not
on ``c`` and is neither bilinear nor antisymmetric;
:func:`literal_bracket_defects` evaluates that reading so the failure can be
inspected.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from . import linalg as la
from .algebra import LieAlgebra, validate
from .errors import CertificationError, NotIntegrableError
from .linalg import ZERO
from .structures import (HypercomplexStructure, LinearOperator, is_integrable,
                         quaternion_relation_defects)


@dataclass(frozen=True)
class Connection:
    """Left-invariant connection: ``nabla_{e_i} e_j = sum_k coeffs[i][j][k] e_k``."""

    algebra: LieAlgebra
    coeffs: tuple[tuple[tuple[Fraction, ...], ...], ...]

    @classmethod
    def zero(cls, algebra: LieAlgebra) -> "Connection":
        n = algebra.dim
        return cls(algebra, tuple(tuple(la.zeros(n) for _ in range(n)) for _ in range(n)))

    def __call__(self, a, b):
        """``nabla_a b`` for vectors ``a``, ``b``."""
        n = self.algebra.dim
        out = [ZERO] * n
        for i, ai in enumerate(a):
            if not ai:
                continue
            row = self.coeffs[i]
            for j, bj in enumerate(b):
                if not bj:
                    continue
                w = ai * bj
                for k, c in enumerate(row[j]):
                    if c:
                        out[k] += w * c
        return tuple(out)

    def operator(self, a):
        """Matrix of ``nabla_a``."""
        n = self.algebra.dim
        return la.from_columns([self(a, la.unit(n, j)) for j in range(n)], n)


def nabla_plus(algebra: LieAlgebra, I: LinearOperator) -> Connection:
    """``nabla_a b = ([a,b] + I[Ia,b]) / 2`` on basis pairs."""
    res = is_integrable(algebra, I)
    if not res:
        raise NotIntegrableError("nabla^+ needs an integrable complex structure", res.witness)
    n = algebra.dim
    half = Fraction(1, 2)
    rows = []
    for i in range(n):
        ei = la.unit(n, i)
        Iei = I(ei)
        row = []
        for j in range(n):
            ej = la.unit(n, j)
            v = la.add(algebra.bracket(ei, ej), I(algebra.bracket(Iei, ej)))
            row.append(la.scale(half, v))
        rows.append(tuple(row))
    return Connection(algebra, tuple(rows))


@dataclass
class ConnectionCertificate:
    torsion_free: bool
    flat: bool
    complex_linear: bool
    torsion_witness: tuple | None = None
    curvature_witness: tuple | None = None
    linearity_witness: tuple | None = None
    residuals: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.torsion_free and self.flat and self.complex_linear


def certify_connection(algebra: LieAlgebra, I: LinearOperator, conn: Connection) -> ConnectionCertificate:
    """Torsion, curvature and ``nabla I = 0`` on all basis tuples, first failure reported."""
    n = algebra.dim
    e = [la.unit(n, i) for i in range(n)]
    names = algebra.basis_names
    cert = ConnectionCertificate(True, True, True)
    for a in range(n):
        for b in range(a + 1, n):
            T = la.sub(la.sub(conn(e[a], e[b]), conn(e[b], e[a])), algebra.bracket(e[a], e[b]))
            if any(T):
                cert.torsion_free = False
                cert.torsion_witness = (names[a], names[b])
                cert.residuals["torsion"] = T
                break
        if not cert.torsion_free:
            break
    for a, b, c in product(range(n), repeat=3):
        if a >= b:
            continue
        R = la.sub(la.sub(conn(e[a], conn(e[b], e[c])), conn(e[b], conn(e[a], e[c]))),
                   conn(algebra.bracket(e[a], e[b]), e[c]))
        if any(R):
            cert.flat = False
            cert.curvature_witness = (names[a], names[b], names[c])
            cert.residuals["curvature"] = R
            break
    for a, b in product(range(n), repeat=2):
        D = la.sub(conn(e[a], I(e[b])), I(conn(e[a], e[b])))
        if any(D):
            cert.complex_linear = False
            cert.linearity_witness = (names[a], names[b])
            cert.residuals["complex_linearity"] = D
            break
    return cert


def double_bracket(algebra: LieAlgebra, conn: Connection, u, v):
    n = algebra.dim
    a, b = u[:n], u[n:]
    c, d = v[:n], v[n:]
    return algebra.bracket(a, c) + la.sub(conn(a, d), conn(c, b))


def literal_bracket(algebra: LieAlgebra, conn: Connection, u, v):
    """The printed formula ``([a,b], nabla_a d - nabla_c b)``."""
    n = algebra.dim
    a, b = u[:n], u[n:]
    c, d = v[:n], v[n:]
    return algebra.bracket(a, b) + la.sub(conn(a, d), conn(c, b))


def double_names(algebra: LieAlgebra) -> tuple[str, ...]:
    return tuple(algebra.basis_names) + tuple("d" + nm for nm in algebra.basis_names)


def double_structure(I: LinearOperator) -> HypercomplexStructure:
    """``I(a,b) = (Ia, -Ib)``, ``J(a,b) = (-b, a)``, ``K(a,b) = (-Ib, -Ia)``."""
    n = I.dim
    Z = la.zero_matrix(n, n)
    Id = la.identity(n)
    M = I.matrix
    mI = la.matscale(-1, M)

    def block(A, B, C, D):
        return tuple(ra + rb for ra, rb in zip(A, B)) + tuple(rc + rd for rc, rd in zip(C, D))

    In = LinearOperator(block(M, Z, Z, mI), "I")
    Jn = LinearOperator(block(Z, la.matscale(-1, Id), Id, Z), "J")
    Kn = LinearOperator(block(Z, mI, mI, Z), "K")
    defects = quaternion_relation_defects(In, Jn, Kn)
    if defects:
        raise CertificationError("doubled operators violate the quaternionic relations: " + ", ".join(defects))
    return HypercomplexStructure(In, Jn, Kn)


def double(algebra: LieAlgebra, I: LinearOperator, conn: Connection | None = None,
           name: str = "") -> tuple[LieAlgebra, HypercomplexStructure]:
    """Build ``g+ = g + g`` with its hypercomplex structure; every step is certified."""
    if conn is None:
        conn = nabla_plus(algebra, I)
    cert = certify_connection(algebra, I, conn)
    if not cert.ok:
        raise CertificationError("connection is not torsion-free, flat and complex-linear", cert)
    n = algebra.dim
    entries = []
    for i in range(2 * n):
        for j in range(i + 1, 2 * n):
            w = double_bracket(algebra, conn, la.unit(2 * n, i), la.unit(2 * n, j))
            entries.extend((i, j, k, c) for k, c in enumerate(w) if c)
    g2 = LieAlgebra.build(double_names(algebra), entries,
                          name or (algebra.name and f"{algebra.name}-double"))
    rep = validate(g2)
    if not rep:
        raise CertificationError(f"doubled bracket violates Jacobi at {rep.names}", rep)
    H = double_structure(I)
    for op in H.operators:
        res = is_integrable(g2, op)
        if not res:
            raise CertificationError(f"doubled {op.name} is not integrable at {res.witness_names}", res)
    return g2, H


@dataclass
class LiteralBracketReport:
    bilinear: bool
    antisymmetric: bool
    jacobi: bool
    bilinearity_witness: tuple | None = None
    antisymmetry_witness: tuple | None = None
    jacobi_witness: tuple | None = None

    @property
    def is_lie_bracket(self) -> bool:
        return self.bilinear and self.antisymmetric and self.jacobi


def literal_bracket_defects(algebra: LieAlgebra, I: LinearOperator,
                            conn: Connection | None = None) -> LiteralBracketReport:
    """Check the printed double-bracket formula on vectors ``(e_i, e_j)``.

    Basis vectors of ``g + g`` have a zero component, where the printed
    first slot ``[a,b]`` vanishes, so the probes use pairs ``(e_i, e_j)``.
    """
    if conn is None:
        conn = nabla_plus(algebra, I)
    n = algebra.dim
    names = double_names(algebra)
    probes = []
    for i in range(n):
        for j in range(n):
            probes.append((f"({algebra.basis_names[i]},{algebra.basis_names[j]})",
                           la.unit(n, i) + la.unit(n, j)))
    probes += [(names[k], la.unit(2 * n, k)) for k in range(2 * n)]

    def br(u, v):
        return literal_bracket(algebra, conn, u, v)

    rep = LiteralBracketReport(True, True, True)
    zero = la.zeros(2 * n)
    for nm, u in probes:
        if any(br(u, zero)):
            rep.bilinear = False
            rep.bilinearity_witness = (nm, "0")
            break
    for (nu, u), (nv, v) in product(probes, repeat=2):
        if la.add(br(u, v), br(v, u)) != zero:
            rep.antisymmetric = False
            rep.antisymmetry_witness = (nu, nv)
            break
    for (nu, u), (nv, v), (nw, w) in product(probes[:n * n], repeat=3):
        J = la.add(la.add(br(br(u, v), w), br(br(v, w), u)), br(br(w, u), v))
        if any(J):
            rep.jacobi = False
            rep.jacobi_witness = (nu, nv, nw)
            break
    return rep


def check_double_projection(algebra: LieAlgebra, g2: LieAlgebra) -> bool:
    """Projection to the first summand is a morphism and the second summand an abelian ideal."""
    n = algebra.dim
    for i in range(2 * n):
        for j in range(i + 1, 2 * n):
            w = g2.basis_bracket(i, j)
            a = la.unit(2 * n, i)[:n]
            b = la.unit(2 * n, j)[:n]
            if w[:n] != algebra.bracket(a, b):
                return False
            if i >= n and j >= n and any(w):
                return False
    return True

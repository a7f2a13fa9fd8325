"""Positive (1,1)-bivectors and the exceptional directions on the twistor sphere.

Complex structures act on the dual space by the contragredient action; for
an unnormalized ``L'`` with ``L'^2 = -s Id`` we use ``beta -> -beta o L'``,
a positive multiple of it.  A real bivector ``xi`` of type (1,1) is then
*positive* when the real quadratic form

    q(beta) = xi(beta, -beta o L')

is positive semidefinite.  Evaluating the complex condition
``xi(alpha, I alpha-bar) >= 0`` on ``alpha = beta - sqrt(-1) I beta`` gives the
same form up to a positive factor, so the verdict does not depend on which
of the two is used, nor on positive rescaling of ``xi`` or of the direction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, lcm

import numpy as np

from . import linalg as la
from .algebra import LieAlgebra, QuotientMap, is_subalgebra, quotient, subalgebra
from .errors import (InputError, InternalError, NotASubalgebraError, NotHSolvableError,
                     PreconditionError, PropertyViolation, TypeMismatchError)
from .exterior import (CEComplex, Multivector, apply_linear, bivector_matrix, exterior_power,
                       wedge_basis, weil_matrix)
from .linalg import Subspace
from .structures import (HypercomplexStructure, SphereDirection, h_filtration, induced_on_quotient,
                         induced_structure, is_h_solvable, restrict_structure)

POSITIVE = ("positive", "positive_definite")


@dataclass(frozen=True)
class PositivityVerdict:
    verdict: str
    witness: tuple[Fraction, ...] | None = None
    value: Fraction | None = None

    @property
    def is_positive(self) -> bool:
        return self.verdict in POSITIVE

    def __str__(self):
        return self.verdict


def _operator_matrix(L):
    return L.matrix if hasattr(L, "matrix") else L


def is_type_11(xi: Multivector, L) -> bool:
    L = _operator_matrix(L)
    return not any(la.matvec(weil_matrix(L), xi.coords))


def form_matrix(xi: Multivector, L):
    """Symmetric matrix of ``q(beta) = xi(beta, -beta o L')``."""
    L = _operator_matrix(L)
    X = bivector_matrix(xi)
    XLt = la.matmul(X, la.transpose(L))
    half = Fraction(1, 2)
    n = len(X)
    return tuple(tuple(-half * (XLt[a][b] + XLt[b][a]) for b in range(n)) for a in range(n))


def positivity_test(xi: Multivector, L, s) -> PositivityVerdict:
    L = _operator_matrix(L)
    s = la.to_q(s)
    if s <= 0:
        raise InputError("scale must be positive")
    if xi.degree != 2 or xi.dim != len(L):
        raise InputError("positivity_test needs a bivector matching the operator size")
    if la.matmul(L, L) != la.matscale(-s, la.identity(len(L))):
        raise InputError("operator does not square to -s Id")
    if not is_type_11(xi, L):
        raise TypeMismatchError("bivector is not of type (1,1) for this structure")
    Q = form_matrix(xi, L)
    verdict = la.symmetric_sign_class(Q)
    if verdict in ("indefinite", "negative"):
        diag, P = la.congruence_diagonalize(Q)
        k = next(i for i, d in enumerate(diag) if d < 0)
        w = la.column(P, k)
        value = la.quadratic_value(Q, w)
        if value >= 0:
            raise InternalError("congruence diagonalization produced a non-negative witness")
        return PositivityVerdict(verdict, w, value)
    return PositivityVerdict(verdict)


def bivector_kernel(xi: Multivector) -> Subspace:
    """``{x in V^* : xi(x, .) = 0}``."""
    X = bivector_matrix(xi)
    return Subspace.span(la.nullspace(X, xi.dim), xi.dim) if any(xi.coords) else Subspace.full(xi.dim)


def degenerate_directions(xi: Multivector, L, s) -> Subspace:
    """Null space of ``q`` for a positive ``xi``; it must equal ``ker xi``."""
    verdict = positivity_test(xi, L, s)
    if verdict.verdict not in ("positive", "positive_definite", "zero"):
        raise PreconditionError(f"bivector is {verdict.verdict}, not positive")
    Q = form_matrix(xi, L)
    null_q = Subspace.span(la.nullspace(Q, xi.dim), xi.dim)
    ker = bivector_kernel(xi)
    if null_q != ker:
        raise InternalError("null space of q differs from the kernel of a positive bivector")
    return null_q


@dataclass(frozen=True)
class CompatibleStructures:
    kind: str  # "unique" | "none" | "invariant_all"
    direction: SphereDirection | None = None
    positivity: PositivityVerdict | None = None


def weil_images(H: HypercomplexStructure, xi: Multivector):
    return [la.matvec(weil_matrix(op.matrix), xi.coords) for op in H.operators]


def compatible_structures(H: HypercomplexStructure, xi: Multivector) -> CompatibleStructures:
    """Directions ``L`` on the sphere for which ``xi`` is a positive (1,1)-bivector."""
    if xi.degree != 2 or xi.dim != H.dim:
        raise InputError("bivector and hypercomplex structure dimensions differ")
    if xi.is_zero():
        return CompatibleStructures("invariant_all")
    cols = weil_images(H, xi)
    sols = la.nullspace(la.from_columns(cols, len(xi.coords)), 3)
    if not sols:
        return CompatibleStructures("none")
    if len(sols) == 3:
        for op in H.operators:
            if positivity_test(xi, op, 1).is_positive:
                raise InternalError("su(2)-invariant nonzero bivector tested positive")
        return CompatibleStructures("invariant_all")
    if len(sols) == 2:
        raise InternalError("Weil operators annihilate a 2-dimensional family of directions")
    v = la.primitive_integer(sols[0])
    for cand in (SphereDirection(*v), SphereDirection(*(-x for x in v))):
        L, s = induced_structure(H, cand)
        verdict = positivity_test(xi, L, s)
        if verdict.is_positive:
            return CompatibleStructures("unique", cand, verdict)
    return CompatibleStructures("none")


def quotient_bivector(r: QuotientMap, xi: Multivector) -> Multivector:
    if xi.degree != 2 or xi.dim != r.source_dim:
        raise InputError("bivector does not live on the source of the quotient map")
    return apply_linear(r.matrix, xi)


@dataclass(frozen=True)
class Confined:
    bivector: Multivector      # coordinates in Lambda^2 of the subspace's RREF basis
    subspace: Subspace


@dataclass(frozen=True)
class NotInKernel:
    image: Multivector         # nonzero image in Lambda^2(W/W_1)


def confine_to_subspace(xi: Multivector, w1: Subspace, L=None, s=None,
                        H: HypercomplexStructure | None = None):
    """Rewrite a positive ``xi`` whose image in ``Lambda^2(W/W_1)`` vanishes as an element of ``Lambda^2 W_1``."""
    if w1.ambient_dim != xi.dim:
        raise InputError("subspace and bivector dimensions differ")
    if L is not None:
        L = _operator_matrix(L)
        verdict = positivity_test(xi, L, 1 if s is None else s)
        if not verdict.is_positive:
            raise PreconditionError(f"bivector is {verdict.verdict} for the supplied structure")
    elif H is not None:
        res = compatible_structures(H, xi)
        if res.kind != "unique":
            raise PreconditionError("no direction certifies the bivector as positive")
        L, _ = induced_structure(H, res.direction)
    else:
        raise PreconditionError("need a structure (L, s) or a hypercomplex triple to certify positivity")
    # the kernel lemma is applied to the annihilator of W_1, which needs L(W_1) = W_1
    if not w1.is_invariant(L):
        raise PreconditionError("W_1 is not invariant under the certifying structure")
    P, _ = la.projection_modulo(w1)
    if P:
        image = apply_linear(P, xi)
        if not image.is_zero():
            return NotInKernel(image)
    if w1.is_zero():
        raise PropertyViolation("positive bivector with vanishing image but W_1 = 0")
    B = w1.inclusion_matrix()
    M = exterior_power(B, 2, w1.dim)
    eta = la.solve(M, xi.coords, comb(w1.dim, 2))
    if eta is None:
        raise PropertyViolation("bivector lies in W ^ W_1 but not in Lambda^2 W_1; positivity violated",
                                diagnostic=xi)
    return Confined(Multivector(2, w1.dim, eta, xi.kind), w1)


# ---------------------------------------------------------------------------
# exceptional directions


def height_coefficients(bound: int) -> list[Fraction]:
    """Rationals ``p/q`` with ``|p| <= bound`` and ``1 <= q <= bound``."""
    vals = {Fraction(p, q) for q in range(1, bound + 1) for p in range(-bound, bound + 1)}
    return sorted(vals)


@dataclass(frozen=True)
class ExceptionalEntry:
    level: int
    cycle: Multivector          # 2-cycle of g^H_{level-1}, ambient coordinates of Lambda^2 g
    image: Multivector          # its image in Lambda^2 a_level
    direction: tuple[int, int, int]
    positivity: str


@dataclass
class LevelData:
    """Everything needed to analyse one level of the quaternionic filtration."""

    level: int
    source: Subspace                 # g^H_{i-1} in g
    target: Subspace                 # g^H_i in g
    sub: LieAlgebra                  # g^H_{i-1} in its own coordinates
    quotient_algebra: LieAlgebra     # a_i
    projection: QuotientMap          # g^H_{i-1} -> a_i
    structure: HypercomplexStructure  # induced on a_i
    cycles: list                     # basis of Z_2(g^H_{i-1}) adapted to r_i
    images: list                     # r_i of the first len(images) cycles: basis of s_i


def level_data(algebra: LieAlgebra, H: HypercomplexStructure) -> list[LevelData]:
    rep = h_filtration(algebra, H)
    if rep.failures:
        raise PropertyViolation("quaternionic filtration diagnostics failed: " + "; ".join(rep.failures), rep)
    if not rep.reached_zero:
        raise NotHSolvableError("quaternionic filtration stabilizes at a nonzero subalgebra")
    n = algebra.dim
    terms = [Subspace.full(n)] + [t for t in rep.terms]
    levels = []
    for i in range(1, len(terms)):
        src, tgt = terms[i - 1], terms[i]
        if src.is_zero():
            break
        sub = subalgebra(algebra, src, f"g^H_{i - 1}")
        Hs = restrict_structure(H, src)
        tgt_sub = Subspace.span([src.coordinates(v) for v in tgt.basis], src.dim)
        a, r = quotient(sub, tgt_sub, f"a_{i}")
        _, lift = la.projection_modulo(tgt_sub)
        Ha = HypercomplexStructure(*(induced_on_quotient(op, r.matrix, lift) for op in Hs.operators))
        if not a.is_abelian():
            raise PropertyViolation(f"a_{i} is not abelian")
        cx = CEComplex(sub)
        z2 = cx.cycles(2)
        R2 = exterior_power(r.matrix, 2, src.dim)
        imgs = [la.matvec(R2, z) for z in z2]
        Nq = comb(a.dim, 2)
        basis = Subspace.span(imgs, Nq).basis if Nq else ()
        adapted = []
        if basis:
            A = la.from_columns(imgs, Nq)
            for b in basis:
                y = la.solve(A, b, len(imgs))
                adapted.append(la.lincomb(y, z2, len(z2[0])))
        levels.append(LevelData(i, src, tgt, sub, a, r, Ha, adapted, list(basis)))
    return levels


def _int_matrix(rows) -> tuple[int, list[list[int]]]:
    den = 1
    for r in rows:
        for x in r:
            den = lcm(den, Fraction(x).denominator)
    return den, [[int(Fraction(x) * den) for x in r] for r in rows]


def _rank_deficient_mask(WI, WJ, WK):
    """Rows where the ``N x 3`` matrix ``[WI WJ WK]`` has rank < 3 (exact integer minors)."""
    N = WI.shape[1]
    mask = np.ones(WI.shape[0], dtype=bool)
    for a, b, c in itertools.combinations(range(N), 3):
        m = (WI[:, a] * (WJ[:, b] * WK[:, c] - WJ[:, c] * WK[:, b])
             - WI[:, b] * (WJ[:, a] * WK[:, c] - WJ[:, c] * WK[:, a])
             + WI[:, c] * (WJ[:, a] * WK[:, b] - WJ[:, b] * WK[:, a]))
        mask &= (m == 0)
    return mask


def _primitive_rows(X):
    if X.dtype == object:
        return np.array([la.primitive_integer([int(v) for v in row]) for row in X], dtype=object)
    g = np.gcd.reduce(np.abs(X), axis=1)
    g[g == 0] = 1
    return X // g[:, None]


def _kernel_directions(WI, WJ, WK):
    """Integer kernel vector of each ``N x 3`` matrix ``[WI WJ WK]`` of rank 2.

    Rows of rank other than 2 get the zero vector.
    """
    W = np.stack([WI, WJ, WK], axis=2)
    out = np.zeros((W.shape[0], 3), dtype=W.dtype)
    todo = np.ones(W.shape[0], dtype=bool)
    for p, q in itertools.combinations(range(W.shape[1]), 2):
        v = np.cross(W[:, p, :], W[:, q, :])
        hit = todo & np.any(v != 0, axis=1)
        out[hit] = v[hit]
        todo &= ~hit
        if not todo.any():
            break
    return _primitive_rows(out)


def _psd_mask(Q):
    """Exact PSD test of a batch of integer symmetric matrices.

    Faddeev-LeVerrier in integer arithmetic (every division is exact), then
    weak sign alternation of the characteristic polynomial.
    """
    b, n, _ = Q.shape
    eye = np.broadcast_to(np.eye(n, dtype=np.int64).astype(Q.dtype), (b, n, n))
    M = np.zeros_like(Q)
    c = np.ones(b, dtype=Q.dtype)
    ok = np.ones(b, dtype=bool)
    for k in range(1, n + 1):
        M = Q @ M + c[:, None, None] * eye
        tr = np.trace(Q @ M, axis1=1, axis2=2)
        if np.any(tr % k != 0):
            raise InternalError("non-integral characteristic polynomial coefficient")
        c = -(tr // k)
        ok &= (c * (-1) ** k) >= 0
    return ok


def _candidate_rays(images, H: HypercomplexStructure, coeffs: list[Fraction]):
    """Smallest positive image ray per direction among height-bounded combos.

    Returns ``{direction: (ray, combo)}``.  All arithmetic is exact: integer
    numpy arrays, switched to Python integers when int64 could overflow.
    The combos are filtered by the rank of ``[W_I xi, W_J xi, W_K xi]``; the
    kernel gives the direction up to sign, and the sign is fixed by the PSD
    test of ``q`` for ``+v`` then ``-v``.
    """
    p = len(images)
    n = H.dim
    D = 1
    for c in coeffs:
        D = lcm(D, c.denominator)
    int_coeffs = [int(c * D) for c in coeffs]
    _, B = _int_matrix(images)
    ops = [op.matrix for op in H.operators]
    weils = [weil_matrix(M) for M in ops]
    # common denominators keep directions and positivity unchanged
    wden, _ = _int_matrix([x for W in weils for x in W])
    Wint = [[[int(x * wden) for x in row] for row in W] for W in weils]
    oden, _ = _int_matrix([x for M in ops for x in M])
    Oint = [[[int(x * oden) for x in row] for row in M] for M in ops]
    N = len(B[0])
    maxc = max(abs(c) for c in int_coeffs)
    maxb = max((abs(x) for r in B for x in r), default=0)
    maxw = max((abs(x) for W in Wint for r in W for x in r), default=0)
    maxo = max((abs(x) for M in Oint for r in M for x in r), default=0)
    bound_x = p * maxc * maxb
    bound_w = bound_x * maxw * N
    if 6 * bound_w ** 3 >= 2 ** 62:
        dtype = object
    else:
        dtype = np.int64
    Bm = np.array(B, dtype=dtype)
    Ws = [np.array(W, dtype=dtype) for W in Wint]
    Os = [np.array(M, dtype=dtype) for M in Oint]
    coeff_arr = np.array(int_coeffs, dtype=dtype)
    pairs = wedge_basis(n, 2)
    rows_i = np.array([i for i, _ in pairs], dtype=np.int64)
    rows_j = np.array([j for _, j in pairs], dtype=np.int64)
    best: dict[tuple[int, int, int], tuple] = {}
    it = itertools.product(range(len(coeffs)), repeat=p)
    while True:
        block = list(itertools.islice(it, 100_000))
        if not block:
            break
        idx = np.array(block, dtype=np.int64)
        X = coeff_arr[idx] @ Bm
        keep = np.any(X != 0, axis=1)
        idx, X = idx[keep], X[keep]
        if not len(X):
            continue
        WI, WJ, WK = (X @ W.T for W in Ws)
        keep = _rank_deficient_mask(WI, WJ, WK)
        idx, X, WI, WJ, WK = idx[keep], X[keep], WI[keep], WJ[keep], WK[keep]
        if not len(X):
            continue
        V = _kernel_directions(WI, WJ, WK)
        keep = np.any(V != 0, axis=1)
        idx, X, V = idx[keep], X[keep], V[keep]
        if not len(X):
            continue
        if 6 * n * int(np.abs(X).max()) * int(np.abs(V).max()) * maxo >= 2 ** 62:
            X, V = X.astype(object), V.astype(object)
        Xm = np.zeros((len(X), n, n), dtype=X.dtype)
        Xm[:, rows_i, rows_j] = X
        Xm[:, rows_j, rows_i] = -X
        Oi = [O.astype(X.dtype) for O in Os]
        L = (V[:, 0, None, None] * Oi[0] + V[:, 1, None, None] * Oi[1]
             + V[:, 2, None, None] * Oi[2])
        XLt = Xm @ np.transpose(L, (0, 2, 1))
        Q = -(XLt + np.transpose(XLt, (0, 2, 1)))
        # entry bound for the Faddeev-LeVerrier intermediates
        q = int(np.abs(Q).max())
        if Q.dtype != object and 2 ** n * n ** (n // 2 + 1) * n ** (n + 1) * q ** n >= 2 ** 62:
            Q = Q.astype(object)
        plus = _psd_mask(Q)
        minus = ~plus & _psd_mask(-Q)
        V = np.where(minus[:, None], -V, V)
        keep = plus | minus
        idx, X, V = idx[keep], _primitive_rows(X[keep]), V[keep]
        for row_idx, ray, v in zip(idx, X, V):
            d = tuple(int(x) for x in v)
            ray = tuple(int(x) for x in ray)
            if d not in best or ray < best[d][0]:
                best[d] = (ray, tuple(coeffs[k] for k in row_idx))
    return best


def exceptional_directions(algebra: LieAlgebra, H: HypercomplexStructure,
                           height_bound: int) -> list[ExceptionalEntry]:
    """Height-bounded witnesses for the exceptional directions of each filtration level.

    For each level ``i`` the rational 2-cycles of ``g^H_{i-1}`` are combined with
    coefficients of height at most ``height_bound`` (over a cycle basis whose
    vectors map onto a basis of ``r_i(Z_2)``), pushed to ``Lambda^2 a_i`` and
    tested for a compatible positive direction.  One entry per
    ``(level, direction)``; the witness kept is the one with the
    lexicographically smallest primitive image ray.  Every entry is re-checked
    with :func:`compatible_structures` in exact rational arithmetic.
    """
    if height_bound < 0:
        raise InputError("height bound must be non-negative")
    verdict = is_h_solvable(algebra, H)
    if not verdict:
        raise NotHSolvableError("algebra is not H-solvable for this structure")
    if height_bound == 0:
        return []
    coeffs = height_coefficients(height_bound)
    entries = []
    for lv in level_data(algebra, H):
        if not lv.images:
            continue
        best = _candidate_rays(lv.images, lv.structure, coeffs)
        push = exterior_power(lv.source.inclusion_matrix(), 2, lv.source.dim)
        for direction, (_, combo) in best.items():
            img = Multivector(2, lv.quotient_algebra.dim,
                              la.lincomb(combo, lv.images, len(lv.images[0])))
            res = compatible_structures(lv.structure, img)
            if res.kind != "unique" or res.direction.canonical() != direction:
                raise InternalError(f"level {lv.level}: exact recheck disagrees for direction {direction}")
            cyc_sub = la.lincomb(combo, lv.cycles, len(lv.cycles[0]))
            cycle = Multivector(2, algebra.dim, la.matvec(push, cyc_sub))
            entries.append(ExceptionalEntry(lv.level, cycle, img, direction, res.positivity.verdict))
    entries.sort(key=lambda e: (e.level, e.cycle.coords, e.direction))
    return entries


def certify_exceptional(algebra: LieAlgebra, H: HypercomplexStructure,
                        entries: list[ExceptionalEntry]) -> list[str]:
    """Re-verify every entry; returns a list of failures (empty when all pass)."""
    failures = []
    levels = {lv.level: lv for lv in level_data(algebra, H)}
    cx = CEComplex(algebra)
    for e in entries:
        lv = levels[e.level]
        # cycle condition in the ambient algebra: the subalgebra bracket is the restriction
        if not cx.delta(e.cycle).is_zero():
            failures.append(f"level {e.level}: witness is not a cycle")
        L, s = induced_structure(lv.structure, SphereDirection(*e.direction))
        if not is_type_11(e.image, L):
            failures.append(f"level {e.level}: image not annihilated by W_L")
        elif not positivity_test(e.image, L, s).is_positive:
            failures.append(f"level {e.level}: image not positive")
    return failures


# ---------------------------------------------------------------------------
# transversal Kahler forms


@dataclass
class TransversalKahlerResult:
    ok: bool
    closed: bool
    type_11: bool
    kernel_matches: bool
    transversally_positive: bool
    diagnostics: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.ok


def is_transversal_kahler(cx: CEComplex, omega: Multivector, f: Subspace, L, s) -> TransversalKahlerResult:
    """Closed, type (1,1), kernel exactly ``f`` and positive definite on ``g/f``."""
    algebra = cx.algebra
    L = _operator_matrix(L)
    s = la.to_q(s)
    n = algebra.dim
    if omega.kind != "form" or omega.degree != 2 or omega.dim != n:
        raise InputError("omega must be a 2-form on the algebra")
    if f.ambient_dim != n:
        raise InputError("f lives in a different ambient dimension")
    if not is_subalgebra(algebra, f):
        raise NotASubalgebraError("f is not a subalgebra")
    if s <= 0 or la.matmul(L, L) != la.matscale(-s, la.identity(n)):
        raise InputError("operator does not square to -s Id with s > 0")
    diags = []
    closed = cx.d(omega).is_zero()
    if not closed:
        diags.append("d omega != 0")
    Om = bivector_matrix(omega)
    pulled = la.matscale(1 / s, la.matmul(la.transpose(L), la.matmul(Om, L)))
    type_11 = pulled == Om
    if not type_11:
        diags.append("omega is not of type (1,1)")
    kernel = Subspace.span(la.nullspace(Om, n), n) if any(omega.coords) else Subspace.full(n)
    kernel_matches = kernel == f
    if not kernel_matches:
        diags.append(f"ker omega has dimension {kernel.dim} and differs from f")
    OmL = la.matmul(Om, L)
    half = Fraction(1, 2)
    Q = tuple(tuple(half * (OmL[a][b] + OmL[b][a]) for b in range(n)) for a in range(n))
    _, lift = la.projection_modulo(f)
    if f.dim == n:
        positive = True
    else:
        G = la.matmul(la.transpose(lift), la.matmul(Q, lift))
        positive = la.symmetric_sign_class(G) == "positive_definite"
    if not positive:
        diags.append("induced form on g/f is not positive definite")
    ok = closed and type_11 and kernel_matches and positive
    return TransversalKahlerResult(ok, closed, type_11, kernel_matches, positive, diags)

from fractions import Fraction

import pytest
import sympy

from hsolve import linalg as la
from hsolve.linalg import Subspace


def test_rref_is_idempotent_and_canonical():
    S = Subspace.span([(2, 4, 0), (1, 2, 1), (3, 6, 1)], 3)
    assert S.dim == 2
    again = Subspace.span(S.basis, 3)
    assert again == S
    assert Subspace.span([(1, 2, 0), (0, 0, 5)], 3) == S


def test_nullspace_and_rank():
    A = [[1, 2, 3], [2, 4, 6]]
    assert la.rank(A, 3) == 1
    ns = la.nullspace(A, 3)
    assert len(ns) == 2
    assert all(not any(la.matvec(la.mat(A), v)) for v in ns)


def test_subspace_operations():
    x = Subspace.coordinate(4, [0, 1])
    y = Subspace.coordinate(4, [1, 2])
    assert (x + y).dim == 3
    assert x.intersection(y) == Subspace.coordinate(4, [1])
    assert Subspace.zero(4).issubset(x) and x.issubset(Subspace.full(4))
    assert x.contains((3, Fraction(1, 2), 0, 0)) and not x.contains((0, 0, 1, 0))


def test_projection_modulo_kills_subspace():
    S = Subspace.span([(1, 1, 0)], 3)
    P, lift = la.projection_modulo(S)
    assert not any(la.matvec(P, (1, 1, 0)))
    assert la.matmul(P, lift) == la.identity(2)


def test_charpoly_matches_sympy():
    A = [[Fraction(1, 2), 3, 0], [1, -1, Fraction(2, 3)], [0, 4, 5]]
    ours = la.charpoly(A)
    ref = sympy.Matrix([[sympy.Rational(str(x)) for x in row] for row in A]).charpoly().all_coeffs()
    assert [Fraction(str(c)) for c in ref] == list(ours)


@pytest.mark.parametrize("S, verdict", [
    ([[2, 0], [0, 3]], "positive_definite"),
    ([[1, 1], [1, 1]], "positive"),
    ([[1, 0], [0, -1]], "indefinite"),
    ([[-1, 0], [0, -2]], "negative"),
    ([[0, 0], [0, 0]], "zero"),
])
def test_symmetric_sign_class(S, verdict):
    assert la.symmetric_sign_class(la.mat(S)) == verdict


def test_congruence_diagonalize():
    S = la.mat([[0, 1], [1, 0]])
    diag, P = la.congruence_diagonalize(S)
    D = la.matmul(la.transpose(P), la.matmul(S, P))
    assert all(D[i][j] == (diag[i] if i == j else 0) for i in range(2) for j in range(2))
    assert sorted(x > 0 for x in diag) == [False, True]


def test_gaussian_rationals():
    i = la.GaussianRational(0, 1)
    assert i * i == la.GaussianRational.of(-1)
    assert (1 + i) / (1 + i) == la.GaussianRational.of(1)

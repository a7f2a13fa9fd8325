from fractions import Fraction

import pytest

from hsolve import (InputError, LieAlgebra, LinearOperator, NotIntegrableError, SphereDirection,
                    h_filtration, i_filtration, induced_structure, is_abelian_structure, is_h_solvable,
                    is_integrable, standard_quaternionic)
from hsolve import linalg as la
from hsolve.algebra import derived_algebra
from hsolve.linalg import Subspace
from hsolve.structures import (holomorphic_basis, nijenhuis, normalized_structure, quaternion_relation_defects,
                               quaternionic_span)


def test_kodaira_I_is_integrable_and_abelian(kodaira):
    g, I = kodaira
    assert is_integrable(g, I)
    assert is_abelian_structure(g, I)


def test_bad_structure_on_kodaira_has_nijenhuis_witness(kodaira):
    g, _ = kodaira
    Ip = LinearOperator.from_images(g, {"x": {"z": 1}, "y": {"t": 1}, "z": {"x": -1}, "t": {"y": -1}})
    assert Ip.is_almost_complex()
    res = is_integrable(g, Ip)
    assert not res
    assert res.witness_names == ("x", "y")
    assert any(nijenhuis(g, Ip, g.e("x"), g.e("y")))
    with pytest.raises(NotIntegrableError):
        i_filtration(g, Ip)


def test_operator_must_square_to_minus_one(kodaira):
    g, _ = kodaira
    with pytest.raises(InputError):
        is_integrable(g, LinearOperator.of(la.identity(4)))


def test_holomorphic_basis_dimension(kodaira):
    _, I = kodaira
    assert len(holomorphic_basis(I)) == 2


def test_iwasawa_i_filtration(iwasawa):
    g, I = iwasawa
    rep = i_filtration(g, I)
    assert rep.ok
    assert rep.terms[0] == g.span("e5", "e6")
    assert not is_abelian_structure(g, I)


def test_kodaira_i_filtration(kodaira):
    g, I = kodaira
    rep = i_filtration(g, I)
    assert rep.terms[0] == g.span("z", "t")


def test_standard_quaternionic_relations():
    for n in (4, 8):
        H = standard_quaternionic(n)
        assert quaternion_relation_defects(H.I, H.J, H.K) == []
        assert H.K == H.I @ H.J
    with pytest.raises(InputError):
        standard_quaternionic(6)


def test_standard_J_images():
    H = standard_quaternionic(4)
    e = [la.unit(4, i) for i in range(4)]
    assert H.J(e[0]) == e[2]
    assert H.J(e[1]) == la.scale(-1, e[3])
    assert H.J(e[2]) == la.scale(-1, e[0])
    assert H.J(e[3]) == e[1]


def test_quaternionic_span_of_double_derived_algebra(kodaira_double):
    g2, H = kodaira_double
    S = quaternionic_span(H, derived_algebra(g2))
    assert S == g2.span("z", "t", "dz", "dt")
    assert quaternionic_span(H, S) == S


def test_double_h_filtration(kodaira_double):
    g2, H = kodaira_double
    rep = h_filtration(g2, H)
    assert rep.ok and rep.reached_zero
    assert rep.terms == [g2.span("z", "t", "dz", "dt"), Subspace.zero(8)]
    assert str(is_h_solvable(g2, H)) == "solvable(2)"


def test_i_filtration_contained_in_h_filtration(kodaira_double):
    g2, H = kodaira_double
    assert i_filtration(g2, H.I).terms[0].issubset(h_filtration(g2, H).terms[0])


def test_abelian_is_solvable_in_one_step():
    for n in (4, 8):
        v = is_h_solvable(LieAlgebra.abelian(n), standard_quaternionic(n))
        assert v and v.steps == 1
        assert h_filtration(LieAlgebra.abelian(n), standard_quaternionic(n)).terms == [Subspace.zero(n)]


@pytest.mark.parametrize("d, s, normalizable", [((1, 0, 0), 1, True), ((0, 3, 4), 25, True),
                                                ((1, 1, 1), 3, False)])
def test_induced_structure(d, s, normalizable):
    H = standard_quaternionic(4)
    L, scale = induced_structure(H, SphereDirection(*d))
    assert scale == s
    assert la.matmul(L, L) == la.matscale(-s, la.identity(4))
    assert (normalized_structure(H, SphereDirection(*d)) is not None) == normalizable


def test_orthogonal_directions_anticommute():
    H = standard_quaternionic(4)
    A, _ = induced_structure(H, SphereDirection(1, 2, 2))
    B, _ = induced_structure(H, SphereDirection(2, -1, 0))
    assert la.matadd(la.matmul(A, B), la.matmul(B, A)) == la.zero_matrix(4, 4)


def test_sphere_direction_rays():
    assert SphereDirection(2, 0, 0).same_ray(SphereDirection(Fraction(1, 3), 0, 0))
    assert not SphereDirection(1, 0, 0).same_ray(SphereDirection(-1, 0, 0))
    with pytest.raises(InputError):
        SphereDirection(0, 0, 0)


def test_double_I_is_not_abelian(kodaira_double):
    g2, H = kodaira_double
    assert not is_abelian_structure(g2, H.I)

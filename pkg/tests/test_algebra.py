from fractions import Fraction

import pytest

from hsolve import (InputError, LieAlgebra, NotAnIdealError, derived_algebra, is_ideal, is_nilpotent,
                    is_rational_subalgebra, lower_central_series, quotient, subalgebra, validate)
from hsolve.linalg import Subspace


def test_kodaira_passes_jacobi(kodaira):
    g, _ = kodaira
    assert validate(g)
    assert g.dim == 4 and not g.is_abelian()


def test_jacobi_failure_reports_first_triple():
    g = LieAlgebra.build(["e1", "e2", "e3"], {("e1", "e2"): {"e3": 1}, ("e1", "e3"): {"e1": 1}})
    rep = validate(g)
    assert not rep
    assert rep.triple == (0, 1, 2)
    assert rep.names == ("e1", "e2", "e3")
    assert any(rep.residual)


def test_bracket_is_bilinear(kodaira):
    g, _ = kodaira
    assert g.bracket(g.vector({"x": 1, "y": 1}), g.e("y")) == g.e("z")
    assert g.bracket(g.e("y"), g.e("x")) == g.vector({"z": -1})
    assert g.bracket(g.vector({"x": Fraction(1, 2)}), g.vector({"y": 4})) == g.vector({"z": 2})


def test_build_rejects_bad_indices():
    with pytest.raises(InputError):
        LieAlgebra.build(3, [(0, 5, 1, 1)])
    with pytest.raises(InputError):
        LieAlgebra.build(["a", "a"])
    with pytest.raises(InputError):
        LieAlgebra.build(["a", "b"], {("a", "c"): {"b": 1}})


def test_build_normalizes_pair_order():
    g1 = LieAlgebra.build(["a", "b", "c"], {("b", "a"): {"c": -1}})
    g2 = LieAlgebra.build(["a", "b", "c"], {("a", "b"): {"c": 1}})
    assert g1.constants == g2.constants


def test_lower_central_series(kodaira):
    g, _ = kodaira
    series = lower_central_series(g)
    assert [s.dim for s in series] == [4, 1, 0]
    assert series[1] == g.span("z")
    assert is_nilpotent(g)


def test_non_nilpotent_series_stabilizes():
    g = LieAlgebra.build(["a", "b"], {("a", "b"): {"b": 1}})
    series = lower_central_series(g)
    assert series[-1].dim == 1
    assert not is_nilpotent(g)


def test_quotient_of_kodaira_is_abelian(kodaira):
    g, _ = kodaira
    a, r = quotient(g, g.span("z", "t"))
    assert a.dim == 2 and a.is_abelian()
    assert r(g.e("z")) == (0, 0)
    assert r(g.e("x")) == (1, 0)


def test_quotient_by_zero_is_identity(kodaira):
    g, _ = kodaira
    a, r = quotient(g, Subspace.zero(4))
    assert a.constants == g.constants
    assert r.matrix == tuple(tuple(Fraction(int(i == j)) for j in range(4)) for i in range(4))


def test_quotient_by_non_ideal_raises(kodaira):
    g, _ = kodaira
    with pytest.raises(NotAnIdealError):
        quotient(g, g.span("x"))


def test_subalgebras(kodaira):
    g, _ = kodaira
    assert is_rational_subalgebra(g, g.span("z", "t"))
    assert is_rational_subalgebra(g, g.span("x", "z"))
    assert not is_rational_subalgebra(g, g.span("x", "y"))
    assert is_ideal(g, g.span("z")) and not is_ideal(g, g.span("x", "t"))
    h = subalgebra(g, g.span("x", "y", "z"))
    assert h.dim == 3 and validate(h) and not h.is_abelian()


def test_derived_algebra_of_double(kodaira_double):
    g2, _ = kodaira_double
    assert derived_algebra(g2) == g2.span("z", "dz", "dt")

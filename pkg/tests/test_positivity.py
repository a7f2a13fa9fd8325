from fractions import Fraction

import pytest

from hsolve import (CEComplex, LieAlgebra, Multivector, PreconditionError, TypeMismatchError, bivector_kernel,
                    compatible_structures, confine_to_subspace, degenerate_directions, exceptional_directions,
                    is_transversal_kahler, positivity_test, quotient, quotient_bivector, standard_quaternionic)
from hsolve import NotASubalgebraError
from hsolve import linalg as la
from hsolve.linalg import Subspace
from hsolve.positivity import (Confined, NotInKernel, certify_exceptional, form_matrix, height_coefficients)
from hsolve.structures import SphereDirection, induced_structure

H4 = standard_quaternionic(4)


def vec(n, *terms):
    return Multivector.from_terms(n, terms)


def form(n, *terms):
    return Multivector.from_terms(n, terms, kind="form")


XI = vec(4, (1, (0, 1)), (1, (2, 3)))
INV = vec(4, (1, (0, 1)), (-1, (2, 3)))


def test_positivity_examples():
    assert positivity_test(XI, H4.I, 1).verdict == "positive_definite"
    assert positivity_test(Multivector.zero(4, 2), H4.I, 1).verdict == "zero"
    v = positivity_test(INV, H4.I, 1)
    assert v.verdict == "indefinite"
    assert v.value < 0
    assert v.witness[0] == v.witness[1] == 0
    assert la.quadratic_value(form_matrix(INV, H4.I), v.witness) == v.value


def test_positivity_rejects_wrong_type():
    with pytest.raises(TypeMismatchError):
        positivity_test(XI, H4.J, 1)


def test_positivity_is_scale_invariant():
    xi = vec(4, (2, (0, 1)), (1, (2, 3)))
    L, s = induced_structure(H4, SphereDirection(1, 0, 0))
    base = positivity_test(xi, L, s).verdict
    for c in (Fraction(1, 7), 3):
        assert positivity_test(c * xi, L, s).verdict == base
        Lc = la.matscale(c, L)
        assert positivity_test(xi, Lc, s * c * c).verdict == base


def test_bivector_kernel_examples():
    assert bivector_kernel(vec(4, (1, (0, 1)))) == Subspace.coordinate(4, [2, 3])
    assert bivector_kernel(Multivector.zero(4, 2)) == Subspace.full(4)
    assert bivector_kernel(XI).is_zero()


def test_degenerate_directions_examples():
    assert degenerate_directions(vec(4, (1, (0, 1))), H4.I, 1) == Subspace.coordinate(4, [2, 3])
    assert degenerate_directions(XI, H4.I, 1).is_zero()
    assert degenerate_directions(Multivector.zero(4, 2), H4.I, 1) == Subspace.full(4)
    with pytest.raises(PreconditionError):
        degenerate_directions(INV, H4.I, 1)


def test_confine_to_subspace_examples():
    w1 = Subspace.coordinate(4, [0, 1])
    res = confine_to_subspace(vec(4, (1, (0, 1))), w1, H4.I.matrix, 1)
    assert isinstance(res, Confined)
    assert res.bivector.coords == (1,)
    res = confine_to_subspace(XI, w1, H4.I.matrix, 1)
    assert isinstance(res, NotInKernel)
    assert res.image.coords == (1,)
    with pytest.raises(PreconditionError):
        confine_to_subspace(INV, w1, H=H4)
    # (e0 + e1) ^ e2 is positive for J - K, which does not preserve span{e0, e1}
    decomposable = vec(4, (1, (0, 2)), (1, (2, 1)))
    assert compatible_structures(H4, decomposable).direction.canonical() == (0, 1, -1)
    with pytest.raises(PreconditionError):
        confine_to_subspace(decomposable, w1, H=H4)


def test_confine_in_eight_dimensions():
    H8 = standard_quaternionic(8)
    w1 = Subspace.coordinate(8, [4, 5, 6, 7])
    xi = vec(8, (1, (4, 5)), (1, (6, 7)))
    res = confine_to_subspace(xi, w1, H=H8)
    assert isinstance(res, Confined) and res.bivector.dim == 4


def test_compatible_structures_examples():
    res = compatible_structures(H4, XI)
    assert res.kind == "unique"
    assert res.direction.canonical() == (1, 0, 0)
    assert res.positivity.verdict == "positive_definite"
    assert compatible_structures(H4, INV).kind == "invariant_all"
    assert compatible_structures(H4, Multivector.zero(4, 2)).kind == "invariant_all"
    assert compatible_structures(H4, -XI).direction.canonical() == (-1, 0, 0)


def test_quotient_bivector_on_kodaira(kodaira):
    g, _ = kodaira
    a, r = quotient(g, g.span("z", "t"))
    assert quotient_bivector(r, vec(4, (1, (0, 1)))) == vec(2, (1, (0, 1)))
    assert quotient_bivector(r, vec(4, (1, (0, 2)))).is_zero()
    _, ident = quotient(g, Subspace.zero(4))
    assert quotient_bivector(ident, XI) == XI


def test_height_coefficients():
    assert len(height_coefficients(1)) == 3
    assert len(height_coefficients(2)) == 7


def test_exceptional_height_zero_is_empty(kodaira_double):
    g2, H = kodaira_double
    assert exceptional_directions(g2, H, 0) == []


def test_exceptional_height_one_self_certifies(kodaira_double):
    g2, H = kodaira_double
    entries = exceptional_directions(g2, H, 1)
    assert entries
    assert certify_exceptional(g2, H, entries) == []
    assert len({(e.level, e.direction) for e in entries}) == len(entries)
    keys = [(e.level, e.cycle.coords, e.direction) for e in entries]
    assert keys == sorted(keys)


def test_exceptional_on_abelian_model_has_level_one():
    # the only level is g / g^H_1 = g itself; its 2-cycles are all of Lambda^2
    entries = exceptional_directions(LieAlgebra.abelian(4), H4, 1)
    assert entries and {e.level for e in entries} == {1}
    assert certify_exceptional(LieAlgebra.abelian(4), H4, entries) == []


def test_transversal_kahler_kodaira(kodaira):
    g, I = kodaira
    cx = CEComplex(g)
    res = is_transversal_kahler(cx, form(4, (1, (0, 1))), g.span("z", "t"), I, 1)
    assert res and res.closed and res.kernel_matches


def test_transversal_kahler_detects_non_closed(kodaira):
    g, I = kodaira
    cx = CEComplex(g)
    res = is_transversal_kahler(cx, form(4, (1, (2, 3))), g.span("x", "z"), I, 1)
    assert not res and not res.closed
    with pytest.raises(NotASubalgebraError):
        is_transversal_kahler(cx, form(4, (1, (2, 3))), g.span("x", "y"), I, 1)


def test_transversal_kahler_zero_form(kodaira):
    g, I = kodaira
    cx = CEComplex(g)
    zero = Multivector.zero(4, 2, "form")
    assert not is_transversal_kahler(cx, zero, g.span("z", "t"), I, 1)
    assert is_transversal_kahler(cx, zero, Subspace.full(4), I, 1)

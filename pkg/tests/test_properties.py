"""Randomized properties over exact rational inputs."""


from hypothesis import given, settings
from hypothesis import strategies as st

from hsolve import CEComplex, LieAlgebra, betti_numbers, Multivector, parse, serialize, standard_quaternionic, validate, wedge
from hsolve import linalg as la
from hsolve.exterior import pq_projections
from hsolve.fileformat import from_algebra
from hsolve.linalg import Subspace
from hsolve.positivity import bivector_kernel, degenerate_directions
from hsolve.structures import SphereDirection, induced_structure

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)
directions = st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)).filter(any)


@st.composite
def two_step_nilpotent(draw):
    """Brackets of the first ``n - m`` generators land in the last ``m``; Jacobi holds automatically."""
    n = draw(st.integers(3, 6))
    m = draw(st.integers(1, n - 2))
    entries = []
    for i in range(n - m):
        for j in range(i + 1, n - m):
            for k in range(n - m, n):
                c = draw(rationals)
                if c:
                    entries.append((i, j, k, c))
    return LieAlgebra.build(n, entries)


@given(st.lists(st.lists(rationals, min_size=4, max_size=4), max_size=5))
def test_rref_is_canonical(vectors):
    S = Subspace.span(vectors, 4)
    assert Subspace.span(S.basis, 4) == S
    assert Subspace.span(list(reversed(vectors)), 4) == S
    assert all(S.contains(v) for v in vectors)


@given(st.lists(rationals, min_size=6, max_size=6), st.lists(rationals, min_size=4, max_size=4))
def test_wedge_anticommutes_on_odd_degrees(bi, v):
    xi = Multivector(2, 4, tuple(bi))
    a = Multivector(1, 4, tuple(v))
    assert wedge(xi, a) == wedge(a, xi)
    assert wedge(a, a).is_zero()


@given(st.lists(rationals, min_size=6, max_size=6), directions)
def test_pq_parts_sum(bi, d):
    H = standard_quaternionic(4)
    L, s = induced_structure(H, SphereDirection(*d))
    xi = Multivector(2, 4, tuple(bi))
    a, b = pq_projections(xi, L, s)
    assert a + b == xi
    assert pq_projections(b, L, s)[1] == b


@settings(max_examples=40, deadline=None)
@given(two_step_nilpotent())
def test_two_step_algebras(g):
    assert validate(g)
    cx = CEComplex(g)
    assert cx.d_squared_zero() and cx.delta_squared_zero()
    b = betti_numbers(cx)
    assert sum((-1) ** k * x for k, x in enumerate(b)) == 0
    assert b[0] == 1 and sum(b) <= 2 ** g.dim


@settings(max_examples=40, deadline=None)
@given(two_step_nilpotent())
def test_serialize_round_trip(g):
    text = serialize(from_algebra(g, name="random"))
    again = parse(text)
    assert again.algebra().constants == g.constants
    assert serialize(again) == text


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(rationals, min_size=8, max_size=8), min_size=1, max_size=4), directions)
def test_kernel_lemma(betas, d):
    H = standard_quaternionic(8)
    L, s = induced_structure(H, SphereDirection(*d))
    xi = Multivector.zero(8, 2)
    for beta in betas:
        xi = xi + Multivector.wedge_vectors(la.vec(beta), la.matvec(L, beta))
    # beta ^ L beta is positive for the orientation used in positivity_test
    assert degenerate_directions(xi, L, s) == bivector_kernel(xi)

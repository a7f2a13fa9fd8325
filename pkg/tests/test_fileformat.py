from fractions import Fraction
from pathlib import Path

import pytest

from hsolve import ParseError, catalog, parse, serialize
from hsolve.fileformat import format_linear, from_algebra, parse_linear_expr
from hsolve.structures import quaternion_relation_defects


def test_kodaira_catalog_entry():
    af = catalog.load("kodaira")
    assert af.dim == 4 and af.basis == ("x", "y", "z", "t")
    assert af.brackets == {(0, 1): {2: Fraction(1)}}
    assert set(af.operators) == {"I"}
    assert "abelian_structure_expected" in af.flags


def test_catalog_contents():
    assert {"abelian-4", "abelian-8", "heisenberg-3", "kodaira", "iwasawa", "kodaira-double"} <= set(catalog.names())
    H = catalog.load("abelian-8").structure()
    assert quaternion_relation_defects(H.I, H.J, H.K) == []
    assert catalog.load("iwasawa").dim == 6


def test_golden_double_matches_generated():
    assert catalog.text("kodaira-double") == catalog.generate_double()


def test_empty_bracket_list_is_abelian():
    af = parse("basis: a b c\n")
    assert af.algebra().is_abelian() and af.dim == 3


@pytest.mark.parametrize("name", catalog.names())
def test_round_trip_is_idempotent(name):
    once = serialize(parse(catalog.text(name)))
    assert serialize(parse(once)) == once


def test_round_trip_normalizes():
    text = "# c\nbasis: a b c\n[b, a] = -2/4 c + 0 a\nname: ex\n"
    out = serialize(parse(text))
    assert out == "name: ex\nbasis: a b c\n[a, b] = 1/2 c\n"


def test_parse_from_path(tmp_path):
    p = tmp_path / "h.alg"
    p.write_text("basis: x y z\n[x, y] = z\n")
    af = parse(Path(p))
    assert af.algebra().constants == ((0, 1, 2, Fraction(1)),)


@pytest.mark.parametrize("text, line, col, fragment", [
    ("basis: x y z\n[x, y] = z\n[x, z] = x\n", 2, 1, "Jacobi identity fails on (x, y, z)"),
    ("basis: x y\n[x, w] = y\n", 2, 5, "unknown basis element 'w'"),
    ("basis: x y\n[x, y] = x\n[y, x] = y\n", 3, 1, "declared twice"),
    ("basis: a b\noperator I:\n 1 0\n 0 1\n", 2, 1, "does not square to -Id"),
    ("name: foo\n", 1, None, "missing 'basis:'"),
    ("basis: x y\nflags: hypercomplex\n", None, None, "hypercomplex"),
])
def test_parse_errors_are_located(text, line, col, fragment):
    with pytest.raises(ParseError) as info:
        parse(text)
    err = info.value
    assert fragment in str(err)
    if line is not None:
        assert err.line == line
    if col is not None:
        assert err.column == col


def test_linear_expressions():
    coeffs, err = parse_linear_expr("1/2 y - 3 t + z", ["x", "y", "z", "t"])
    assert err is None and coeffs == {1: Fraction(1, 2), 3: Fraction(-3), 2: Fraction(1)}
    assert format_linear(coeffs, ["x", "y", "z", "t"]) == "1/2 y + z - 3 t"
    assert parse_linear_expr("0", ["x"]) == ({}, None)


def test_from_algebra_round_trip(kodaira_double):
    g2, H = kodaira_double
    af = from_algebra(g2, {"I": H.I, "J": H.J, "K": H.K}, flags=("hypercomplex",))
    again = parse(serialize(af))
    assert again.algebra().constants == g2.constants
    assert again.structure().K == H.K

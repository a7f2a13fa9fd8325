import json

import pytest

from hsolve import catalog
from hsolve.cli import COMMANDS, Options, main, parse_direction, parse_form, parse_subspace, run
from hsolve.errors import InputError


def structured(capsys, *argv):
    code = main([*argv, "--format", "structured"])
    return code, json.loads(capsys.readouterr().out)


def test_betti_kodaira(capsys):
    code, data = structured(capsys, "betti", "kodaira")
    assert code == 0
    assert data["result"]["betti_numbers"] == [1, 3, 4, 3, 1]


def test_hsolvable_kodaira_double(capsys):
    code, data = structured(capsys, "hsolvable", "kodaira-double")
    assert code == 0 and data["result"]["h_solvable"] == "solvable(2)"


def test_validate_abelian(capsys):
    code, data = structured(capsys, "validate", "abelian-4")
    assert code == 0 and data["status"] == "ok" and data["result"]["jacobi"]


def test_double_report(capsys):
    code, data = structured(capsys, "double", "kodaira", "--strict-paper-bracket")
    res = data["result"]
    assert code == 0
    assert res["dimension"] == 8 and res["h_solvable"] == "solvable(2)"
    assert res["abelian_structure_I"] is False
    assert res["derived_algebra"] == ["z", "dz", "dt"]
    assert res["algebra"] == catalog.text("kodaira-double")
    assert "paper_bracket" in res


def test_double_of_iwasawa_is_an_input_error(capsys):
    code, data = structured(capsys, "double", "iwasawa")
    assert code == 1
    assert data["result"]["connection"]["torsion_witness"] == ["e1", "e3"]


def test_jacobi_failure_file_exits_one(tmp_path, capsys):
    p = tmp_path / "bad.alg"
    p.write_text("basis: x y z\n[x, y] = z\n[x, z] = x\n")
    code, data = structured(capsys, "validate", str(p))
    assert code == 1 and data["status"] == "input_error"
    assert "(x, y, z)" in data["messages"][0]


def test_missing_target_and_bad_flags(capsys):
    assert main(["betti", "no-such-entry"]) == 1
    with pytest.raises(SystemExit) as info:
        main(["betti", "kodaira", "--height", "lots"])
    assert info.value.code == 1
    assert main(["exceptional", "kodaira-double", "--direction", "0,0,0"]) == 1
    capsys.readouterr()


def test_exceptional_search_cap(capsys):
    code, data = structured(capsys, "exceptional", "abelian-8")
    assert code == 1 and "combinations" in data["messages"][0]


def test_transversal_kahler_command(capsys):
    code, data = structured(capsys, "transversal-kahler", "kodaira", "--form", "x*^y*", "--subspace", "z, t")
    assert code == 0 and data["result"]["transversal_kahler"] is True


def test_all_merges_in_name_order(capsys):
    code, data = structured(capsys, "betti", "all", "--jobs", "2")
    assert code == 0
    assert [r["input"]["name"] for r in data["reports"]] == catalog.names()


def test_option_parsers():
    names = ("x", "y", "z", "t")
    assert parse_direction("1,-2,3/4") == (1, -2, 0.75)
    with pytest.raises(InputError):
        parse_direction("1,2")
    assert parse_form("x*^y* - 1/2 z^t", names).coords == (1, 0, 0, 0, 0, -0.5)
    assert parse_subspace("z, t + x", names).dim == 2


@pytest.mark.parametrize("command", COMMANDS)
def test_every_command_runs_on_kodaira(command):
    rep = run(command, "kodaira", Options())
    assert rep.status in ("ok", "input_error")
    assert rep.to_json() == run(command, "kodaira", Options()).to_json()

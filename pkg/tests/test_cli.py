import io
import json

import pytest

from app import run


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_dims_json():
    code, out, _ = invoke("dims", "--m", "2", "--max-k", "14")
    assert code == 0
    doc = json.loads(out)
    assert doc["dimensions"][-1] == 1161
    assert doc["total"] == sum(doc["dimensions"])


def test_dims_csv():
    code, out, _ = invoke("dims", "--m", "2", "--max-k", "3", "--csv")
    assert code == 0
    assert out == "k,dim\n1,2\n2,1\n3,2\n"


def test_cone_command():
    code, out, _ = invoke("cone", "--type", "1,2,3;2,1,2")
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "feasible"
    assert doc["v"] == ["-28/1", "-4/1", "12/1"]


def test_screen_command():
    code, out, _ = invoke("screen", "--max-m", "6", "--max-p", "4")
    assert code == 0
    survivors = json.loads(out)["survivors"]
    assert survivors == [[2, 3], [2, 4], [3, 3], [3, 4], [4, 3], [5, 3]]


def test_solve_command():
    code, out, _ = invoke("solve", "--m", "2", "--p", "4", "--equations")
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "einstein"
    assert doc["C"] == "1/16"
    assert doc["params"]["xi2"] == "9/4"
    assert [eq["label"] for eq in doc["system"]["equations"]] == ["e_1", "e_12", "e_121", "e_1211"]


def test_solve_float_output():
    code, out, _ = invoke("solve", "--m", "2", "--p", "4", "--float")
    assert code == 0
    assert json.loads(out)["C"] == {"exact": "1/16", "float": 0.0625}


def test_extend_command():
    code, out, _ = invoke("extend", "--m", "2", "--p", "4")
    assert code == 0
    doc = json.loads(out)
    assert doc["dim"] == 9
    assert doc["einstein_constant"] == "-9/2"
    assert doc["is_einstein"] is True


def test_extend_rejects_non_einstein():
    code, _, err = invoke("extend", "--m", "3", "--p", "4")
    assert code == 1
    assert err.startswith("nilsolv:")


def test_ricci_with_parameter_file(tmp_path):
    params = tmp_path / "params.json"
    params.write_text(json.dumps({"lambda2": "1"}), encoding="utf-8")
    code, out, _ = invoke("ricci", "--m", "2", "--p", "2", "--params", str(params))
    assert code == 0
    doc = json.loads(out)
    assert doc["scalar_curvature"] == "-1/2"
    assert doc["ricci"][2][2] == "1/2"


def test_missing_parameter_file(tmp_path):
    code, _, err = invoke("ricci", "--m", "2", "--p", "2", "--params", str(tmp_path / "nope.json"))
    assert code == 1
    assert "not found" in err


def test_classify_text():
    code, out, _ = invoke("classify", "--max-m", "2", "--max-p", "3", "--text")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split() == ["m", "p", "verdict", "error"]
    assert len(lines) == 4
    assert all("einstein" in line for line in lines[1:])


@pytest.mark.parametrize(
    "argv, code",
    [
        (["dims"], 1),
        (["cone", "--type", "1,1;1,1"], 1),
        (["basis", "--m", "2", "--p", "14"], 2),
        (["flow", "--m", "2", "--p", "3", "--tol", "0"], 1),
    ],
)
def test_exit_codes(argv, code):
    result, _, err = invoke(*argv)
    assert result == code
    assert err.startswith("nilsolv:")


def test_solve_refutes_f34():
    code, out, _ = invoke("solve", "--m", "3", "--p", "4")
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "not_einstein"
    assert doc["certificate"]["kind"] == "univariate"
    assert doc["certificate"]["coefficients"] == [16, 171, 99]


def test_identical_runs_are_identical():
    assert invoke("screen", "--max-m", "3", "--max-p", "5") == invoke("screen", "--max-m", "3", "--max-p", "5")


def test_csv_falls_back_to_json_without_a_table():
    code, out, _ = invoke("cone", "--type", "1,2;1,1", "--csv")
    assert code == 0
    assert json.loads(out)["verdict"] in ("feasible", "infeasible")


def test_csv_is_documented_in_help(capsys):
    assert run(["cone", "--help"]) == 0
    assert "other commands print JSON" in " ".join(capsys.readouterr().out.split())

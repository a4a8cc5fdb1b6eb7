import json
import subprocess
import sys

import pytest
from gmpy2 import mpq

from phl.cli import dumps, load_manifest, main, parse_report_scalar
from phl.fields import GaussianRational, format_scalar

CY = {"name": "cy-manifest", "dim": 2, "vars": ["x", "y"], "field": "rational",
      "gamma": {"1,0,0": "y^2"}, "order": 5}


def write(tmp_path, doc, name="m.json"):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_inspect_manifest_matches_catalog(tmp_path, capsys):
    code, out, _ = run(capsys, "inspect", write(tmp_path, CY), "--json")
    assert code == 0
    rep = json.loads(out)
    code, out2, _ = run(capsys, "inspect", "cy2d", "--json")
    cat = json.loads(out2)
    for key in ("ricci", "rho", "weyl", "cotton_york"):
        assert rep[key] == cat[key]
    assert rep["ricci"]["components"] == {"0,0": "2*y"}
    assert rep["cotton_york"]["components"] == {"0,1,0": "2", "1,0,0": "-2"}
    assert rep["weyl"] == {"zero": True}


def test_report_round_trip(tmp_path, capsys):
    out_file = tmp_path / "r.json"
    code, out, _ = run(capsys, "inspect", "non-einstein:2", "--json", "--out", str(out_file))
    assert code == 0
    assert out.strip() == out_file.read_text().strip()
    rep = json.loads(out)
    assert dumps(rep) == out.strip()
    assert rep["rho"]["at_base"] == [["0", "0"], ["0", "1"]]
    assert rep["rho"]["nondegenerate_at_base"] is False
    assert rep["einstein"]["einstein"] is False


@pytest.mark.parametrize("value", [mpq(-3, 7), mpq(5), GaussianRational(mpq(1, 2), -2),
                                   GaussianRational(0, mpq(3, 4)), GaussianRational(-1, 1)])
def test_scalar_round_trip(value):
    text = format_scalar(value)
    back = parse_report_scalar(text)
    assert back == value


def test_cone_commands(capsys):
    assert run(capsys, "cone", "cy2d")[0] == 0
    code, out, _ = run(capsys, "cone", "symplectic:4", "--kind", "symplectic", "--json")
    assert code == 0 and json.loads(out)["cone"]["ricci_zero"] is True
    code, out, _ = run(capsys, "cone", "cquadric:2", "--kind", "complex", "--json",
                       "--base", "generic")
    assert code == 0 and json.loads(out)["cone"]["J_parallel"] is True


def test_zero_data_cone_reports_ricci(capsys):
    code, out, _ = run(capsys, "cone", "symplectic:4", "--kind", "symplectic", "--zero-data",
                       "--json")
    rep = json.loads(out)
    assert rep["cone"]["torsion_zero"] is True
    assert code == (0 if rep["cone"]["ricci_zero"] else 1)


def test_holonomy_json(capsys):
    code, out, _ = run(capsys, "holonomy", "cy2d", "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["holonomy"]["dims_by_depth"] == [1, 3, 5, 5]
    assert rep["holonomy"]["dimension"] == 5
    assert rep["input"]["base"] == "generic"
    assert rep["classification"]["label"] == "unrecognized"


def test_gaussian_manifest(tmp_path):
    doc = {"dim": 1, "vars": ["z"], "field": "gaussian", "gamma": {"0,0,0": "i*z"}}
    built = load_manifest(write(tmp_path, doc), 3)
    assert built.conn.christoffel(0, 0, 0).coefficient((1,)) == GaussianRational(0, 1)


@pytest.mark.parametrize("doc,fragment", [
    ("{not json", "line 1"),
    ({"dim": 2, "vars": ["x", "y"]}, "'gamma'"),
    ({"dim": 2, "vars": ["x"], "gamma": {}}, "'vars'"),
    ({"dim": 2, "vars": ["x", "y"], "gamma": {"0,2,0": "x"}}, "gamma['0,2,0']"),
    ({"dim": 2, "vars": ["x", "y"], "gamma": {"0,0": "x"}}, "gamma['0,0']"),
    ({"dim": 2, "vars": ["x", "y"], "gamma": {"0,0,0": "x +"}}, "gamma['0,0,0']"),
    ({"dim": 2, "vars": ["x", "y"], "field": "real", "gamma": {}}, "field"),
])
def test_manifest_errors_name_location(tmp_path, capsys, doc, fragment):
    code, _, err = run(capsys, "inspect", write(tmp_path, doc))
    assert code == 2
    assert fragment in err


def test_usage_errors(capsys):
    assert run(capsys, "inspect", "nope:1")[0] == 2
    assert run(capsys, "cone", "cy2d", "--kind", "symplectic")[0] == 2
    assert run(capsys, "holonomy", "symplectic:4", "--kind", "symplectic", "--order", "3")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["cone", "cy2d", "--kind", "quaternionic"])
    assert exc.value.code == 2


def test_torsion_manifest_is_rejected(tmp_path, capsys):
    twisted = {"dim": 2, "vars": ["x", "y"], "gamma": {"0,0,1": "x"}}
    code, _, err = run(capsys, "inspect", write(tmp_path, twisted))
    assert code == 2 and "torsion" in err


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "phl.cli", "inspect", "flat:3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "W zero=True" in proc.stdout

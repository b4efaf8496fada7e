import json

import pytest

from treecocycles.cellcomplex import chain_to_json, make_C
from treecocycles.cli import main


def run(capsys, *argv):
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def canon(rows):
    return sorted(json.dumps(r, sort_keys=True) for r in rows)


@pytest.fixture
def c_file(tmp_path):
    path = tmp_path / "c2.json"
    chain = make_C(2, 0, 0) - make_C(2, 0, 1) - make_C(2, 1, 0) + make_C(2, 1, 1)
    path.write_text(json.dumps(chain_to_json(chain)))
    return str(path)


@pytest.mark.parametrize(
    "argv, status, expected",
    [
        (["val", "(t^2+t)", "--place", "zero"], 0, 1),
        (["val", "t^-3 + t", "--place", "inf"], 0, -1),
        (["dist", "zero:0", "zero:3"], 0, 3),
        (["dist", "inf:2", "inf:-2"], 0, 4),
    ],
)
def test_golden_values(capsys, argv, status, expected):
    code, out, _ = run(capsys, *argv)
    assert code == status
    payload = json.loads(out)
    assert payload.get("valuation", payload.get("distance")) == expected


def test_valuation_of_zero_is_infinite(capsys):
    code, out, _ = run(capsys, "val", "0", "--format", "text")
    assert code == 0 and out.strip() == "+inf"


def test_act_on_vertex(capsys):
    code, out, _ = run(capsys, "act", "t,0;0,t^-1", "zero:1", "--format", "text")
    assert code == 0 and out.strip() == "<0:1>"
    code, _, err = run(capsys, "act", "1,t;t,t^2", "zero:1")
    assert code == 2 and "singular" in err


def test_act_on_chain_round_trips(capsys, c_file, tmp_path):
    out_path = tmp_path / "moved.json"
    assert main(["act", "1,t^3;0,1", "--chain", c_file, "--out", str(out_path)]) == 0
    moved = json.loads(out_path.read_text())
    assert len(moved) == 4
    assert main(["act", "1,-t^3;0,1", "--chain", str(out_path)]) == 0
    back, _ = capsys.readouterr()
    assert canon(json.loads(back)) == canon(json.loads(open(c_file).read()))


def test_phi(capsys, c_file, tmp_path):
    code, out, _ = run(capsys, "phi", "2", c_file)
    assert code == 0 and json.loads(out)["phi"] == "1"
    empty = tmp_path / "empty.json"
    empty.write_text("[]")
    code, out, _ = run(capsys, "phi", "2", str(empty))
    assert code == 0 and json.loads(out)["phi"] == "0"
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "phi", "2", str(bad))
    assert code == 2 and err.startswith("error:")
    code, _, _ = run(capsys, "phi", "2", str(tmp_path / "missing.json"))
    assert code == 2


def test_pairing(capsys):
    code, out, _ = run(capsys, "pairing", "--k", "2")
    payload = json.loads(out)
    assert code == 0 and payload["triangular"]
    assert payload["matrix"] == [["1", "0"], ["0", "1"]]
    code, _, _ = run(capsys, "pairing", "--k", "1", "--field", "fp:7")
    assert code == 1
    code, _, err = run(capsys, "pairing", "--k", "1", "--threshold", "50")
    assert code == 1 and "warning:" in err


def test_usage_errors(capsys):
    assert run(capsys, "verify", "lemma99")[0] == 2
    assert run(capsys, "dist", "zero", "zero:1")[0] == 2
    assert run(capsys, "val", "t^", "--place", "zero")[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "dist", "zero:0", "zero:1", "--field", "fp:4")[0] == 2
    assert run(capsys, "render", "ball")[0] == 2
    assert run(capsys, "verify", "p1", "--ring", "fp")[0] == 2


def test_verify_is_deterministic(capsys):
    first = run(capsys, "verify", "all", "--seed", "7", "--samples", "5")
    second = run(capsys, "verify", "all", "--seed", "7", "--samples", "5")
    assert first[0] == 0 and first[1] == second[1]
    payload = json.loads(first[1])
    assert payload["verdict"] == "PASS"
    assert first[1] == json.dumps(payload, sort_keys=True, indent=2) + "\n"


def test_verify_text_format(capsys):
    code, out, _ = run(capsys, "verify", "tree", "--field", "fp:2", "--format", "text")
    assert code == 0 and out.startswith("tree") and "PASS" in out


def test_render(capsys, c_file):
    code, out, _ = run(capsys, "render", "ball", "--field", "fp:2", "--radius", "2")
    assert code == 0 and out.startswith("digraph ball")
    assert out.count("[label=") == 10
    code, out, _ = run(capsys, "render", "chain", c_file)
    assert code == 0 and "cluster_inf" in out and "cluster_zero" in out

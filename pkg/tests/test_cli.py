import json
import os
import subprocess
import sys

import pytest

from fadhm.cli import main
from fadhm.problem import SpecError, jordan_spec, parse_spec


@pytest.fixture
def write(tmp_path):
    def _write(name, data):
        p = tmp_path / name
        p.write_text(data if isinstance(data, str) else json.dumps(data))
        return str(p)
    return _write


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_valid_jordan():
    spec = parse_spec(json.dumps(jordan_spec(2)))
    assert spec.dims == {"1": 2} and spec.framing == {"1": 1}
    assert spec.filtration.at("1", 2) == (1, 2)
    assert parse_spec(json.dumps(spec.to_json())).to_json() == spec.to_json()


def test_integer_vertex_ids():
    data = {"quiver": {"vertices": [1, 2], "arrows": [{"name": "a", "tail": 1, "head": 2}]},
            "dimension": {"1": 1, "2": 1}}
    spec = parse_spec(data)
    assert spec.quiver.vertices == ("1", "2")
    assert spec.to_json() == data


def test_every_violation_reported():
    data = {"quiver": {"vertices": ["1", "1"], "arrows": [{"name": "r", "tail": "1", "head": "9"}]},
            "dimension": {"1": -1}, "filtration": {"1": [1, 3]}, "bogus": 1}
    with pytest.raises(SpecError) as info:
        parse_spec(data)
    paths = [p for p, _ in info.value.violations]
    assert "bogus" in paths
    assert "quiver.vertices[1]" in paths
    assert "quiver.arrows[0].head" in paths
    assert "dimension.1" in paths


def test_filtration_path():
    data = jordan_spec(2)
    data["filtration"]["1"] = [1, 3]
    with pytest.raises(SpecError) as info:
        parse_spec(data)
    assert [p for p, _ in info.value.violations] == ["filtration.1"]


def test_malformed_json(write, capsys):
    code, _, err = run(["moment", write("bad.json", "{not json")], capsys)
    assert code == 2 and "malformed JSON" in err


def test_moment_command(write, capsys):
    code, out, _ = run(["moment", write("j2.json", jordan_spec(2))], capsys)
    assert code == 0
    res = json.loads(out)["results"]
    assert [c["polynomial"] for c in res["components"]] == [
        "r12*s21 + i1*j1", "-r11*s21 + r22*s21 + i2*j1", "-r12*s21 + i2*j2"]


def test_ci_exact_command(write, capsys):
    code, out, _ = run(["ci", write("j2.json", jordan_spec(2)), "--mode", "exact", "--certificate"], capsys)
    res = json.loads(out)["results"]
    assert code == 0 and res["verdict"]["status"] == "PROVED_CI"
    assert res["verdict"]["evidence"]["dimension"] == 7
    assert res["verdict"]["certificate"]["basis"]


def test_ci_budget_exit_code(write, capsys):
    code, out, _ = run(["ci", write("j3.json", jordan_spec(3)), "--budget-pairs", "1"], capsys)
    assert code == 3
    assert json.loads(out)["results"]["verdict"]["status"] == "INCONCLUSIVE"


def test_ci_prob_and_shortcut(write, capsys):
    path = write("p.json", jordan_spec(3, blocks=(1, 2)))
    code, out, _ = run(["ci", path, "--mode", "prob", "--samples", "10", "--seed", "3"], capsys)
    assert code == 0 and json.loads(out)["results"]["verdict"]["status"] == "LIKELY_CI"
    code, out, _ = run(["ci", path, "--mode", "shortcut"], capsys)
    assert json.loads(out)["results"]["verdict"]["status"] == "NO_DECISION"


def test_double_invariants_semiinv(write, capsys):
    a2 = {"quiver": {"vertices": ["1", "2"], "arrows": [{"name": "x", "tail": "1", "head": "2"}]},
          "dimension": {"1": 2, "2": 2}, "filtration": {"1": [1, 2], "2": [1, 2]}}
    path = write("a2.json", a2)
    code, out, _ = run(["double", path], capsys)
    assert json.loads(out)["results"]["nvars"] == 6
    code, out, _ = run(["invariants", path, "--degree", "2"], capsys)
    res = json.loads(out)["results"]
    assert res["dim"] == res["diagonal_polynomial_count"] == 6
    code, out, _ = run(["semiinv", path, "--degree", "1", "--weight=-1,0,1,0"], capsys)
    assert json.loads(out)["results"]["basis"] == ["x11"]
    code, _, err = run(["semiinv", path, "--weight", "1,0"], capsys)
    assert code == 2


def test_relations_command(write, capsys):
    code, out, _ = run(["relations", write("j1.json", jordan_spec(1)), "--degree", "1"], capsys)
    res = json.loads(out)["results"]
    assert code == 0 and res["relations"] == ["g1"]


def test_gs_commands(tmp_path, capsys):
    out_file = tmp_path / "pt.json"
    assert main(["gs", "sample", "--n", "2", "--seed", "1", "--out", str(out_file)]) == 0
    code, out, _ = run(["gs", "map", str(out_file)], capsys)
    assert code == 0 and json.loads(out)["results"]["in_diagonal_locus"] is False
    code, out, _ = run(["gs", "idempotents", "--n", "2", "--symbolic"], capsys)
    res = json.loads(out)["results"]
    assert code == 0 and res["checks"]["all"]
    assert res["L"][0] == [["1", "(r12)/(r11 - r22)"], ["0", "0"]]
    code, out, _ = run(["gs", "witness", "--target", "1,2,5,7"], capsys)
    assert code == 0 and json.loads(out)["results"]["all_round_trip"]
    code, _, _ = run(["gs", "witness", "--target", "1,1,5,7"], capsys)
    assert code == 2
    code, out, _ = run(["gs", "orbit-check", "--n", "2", "--samples", "5", "--points", "2"], capsys)
    assert code == 0 and json.loads(out)["results"]["passed"]


def test_pretty_output(write, capsys):
    code, out, _ = run(["moment", write("j1.json", jordan_spec(1)), "--pretty"], capsys)
    assert code == 0 and out.startswith("moment\n") and "i1*j1" in out


def test_timing_is_opt_in(write, capsys):
    path = write("j2.json", jordan_spec(2))
    _, plain, _ = run(["ci", path], capsys)
    _, timed, _ = run(["ci", path, "--timing"], capsys)
    assert "timing" not in json.loads(plain) and "timing" in json.loads(timed)


def test_numba_switch_off():
    env = dict(os.environ, FADHM_NUMBA="0")
    code = "from fadhm import _kernels as K; print(K.HAVE_NUMBA, K.min_hitting_set is K.min_hitting_set_py)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["False", "True"]

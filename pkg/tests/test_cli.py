import json

import numpy as np
import pytest

from gframe.cli import main
from gframe.serialize import dump_json, load_system, system_to_dict
from gframe.generate import random_system


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_example_and_validate(tmp_path, capsys):
    path = str(tmp_path / "ui.json")
    code, _, _ = _run(capsys, "example", "--alpha", "2", "--beta", "3",
                      "--rank", "3", "--nodes", "11", "--out", path)
    assert code == 0
    code, out, _ = _run(capsys, "validate", path)
    assert code == 0
    doc = json.loads(out)
    assert doc["status"] == "pass"
    assert doc["results"]["algebra"] == {"kind": "diagonal", "dim": 3}
    assert doc["tool"]["name"] == "gframe"


def test_example_parity_gate(tmp_path, capsys):
    code, _, err = _run(capsys, "example", "--alpha", "1", "--beta", "1",
                        "--rank", "3", "--nodes", "4")
    assert code == 2
    assert "odd" in err


def test_bounds_unit_interval(tmp_path, capsys):
    path = str(tmp_path / "ui.json")
    _run(capsys, "example", "--alpha", "1", "--beta", "1", "--rank", "3",
         "--nodes", "11", "--out", path)
    code, out, _ = _run(capsys, "bounds", path)
    assert code == 0
    doc = json.loads(out)
    assert doc["results"]["scalar_lower"] == pytest.approx(1 / np.sqrt(27), abs=1e-9)
    assert doc["results"]["scalar_upper"] == pytest.approx(1 / np.sqrt(3), abs=1e-9)


def test_frame_op_dual_reconstruct_multiplier(tmp_path, capsys):
    path = str(tmp_path / "sys.json")
    _run(capsys, "random", "--seed", "4", "--out", path)
    for command in ("frame-op", "dual", "reconstruct", "multiplier"):
        code, out, _ = _run(capsys, command, path, "--samples", "20")
        assert code == 0, (command, out)
        assert json.loads(out)["status"] == "pass"


def test_theorem_command_single_and_all(tmp_path, capsys):
    code, out, _ = _run(capsys, "theorem", "--id", "T55", "--seed", "42")
    assert code == 0
    doc = json.loads(out)
    assert doc["results"][0]["status"] == "pass"
    assert doc["results"][0]["info"]["right_inverse_count"] == 20
    code, _, err = _run(capsys, "theorem", "--id", "NOPE")
    assert code == 2 and "unknown theorem id" in err


def test_theorem_accepts_system_and_aux(tmp_path, capsys):
    path = str(tmp_path / "ui.json")
    _run(capsys, "example", "--alpha", "1", "--beta", "1", "--rank", "3",
         "--nodes", "11", "--out", path)
    system = load_system(path)
    theta = {"theta_right": {
        "in_rank": 1, "out_rank": 1,
        "blocks": [[{"kind": "diagonal", "dim": 3,
                     "entries": [[1.0, 0.0], [2.0, 0.0], [3.0, 0.0]]}]]}}
    aux_path = tmp_path / "aux.json"
    aux_path.write_text(json.dumps(theta), encoding="utf-8")
    code, out, _ = _run(capsys, "theorem", path, "--id", "RIGHT-COMP",
                        "--aux", str(aux_path))
    assert code == 0
    doc = json.loads(out)
    assert doc["results"][0]["info"]["aux_supplied"] == ["theta_right"]


def test_malformed_file_exits_two(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{", encoding="utf-8")
    code, _, err = _run(capsys, "bounds", str(bad))
    assert code == 2
    assert "line" in err
    code, _, _ = _run(capsys, "bounds", str(tmp_path / "missing.json"))
    assert code == 2


def test_noncommuting_bounds_exits_two(tmp_path, capsys):
    path = str(tmp_path / "nc.json")
    _run(capsys, "random", "--seed", "3", "--rank", "2", "--algebra", "matrix",
         "--dim", "2", "--non-commuting", "--out", path)
    code, _, err = _run(capsys, "bounds", path)
    assert code == 2
    assert "commute" in err


def test_perturb_command(tmp_path, capsys):
    sys_a = random_system(11, commuting=True)
    sys_a = sys_a.with_controls(sys_a.controls.C, sys_a.controls.C)
    sys_b = sys_a.with_family({label: 0.95 * op for label, op in sys_a.family.items()})
    path_a, path_b = tmp_path / "a.json", tmp_path / "b.json"
    path_a.write_text(dump_json(system_to_dict(sys_a)), encoding="utf-8")
    path_b.write_text(dump_json(system_to_dict(sys_b)), encoding="utf-8")
    desc = tmp_path / "run.json"
    desc.write_text(json.dumps({
        "kind": "equivalence_M", "params": {},
        "systemA": str(path_a), "systemB": str(path_b),
        "samples": 40, "seed": 0}), encoding="utf-8")
    code, out, _ = _run(capsys, "perturb", str(desc))
    assert code == 0
    assert json.loads(out)["results"]["theorem_id"] == "STAB-EQUIV-M"


def test_random_determinism(tmp_path, capsys):
    p1, p2 = str(tmp_path / "r1.json"), str(tmp_path / "r2.json")
    _run(capsys, "random", "--seed", "9", "--out", p1)
    _run(capsys, "random", "--seed", "9", "--out", p2)
    assert open(p1, "rb").read() == open(p2, "rb").read()


def test_exit_code_one_on_failed_check(tmp_path, capsys):
    # a Bessel-only system: bounds command reports fail and exits 1
    path = str(tmp_path / "zero.json")
    system = random_system(2, commuting=True)
    zeroed = system.with_family({label: 0.0 * op for label, op in system.family.items()})
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dump_json(system_to_dict(zeroed)))
    code, out, _ = _run(capsys, "bounds", path)
    assert code == 1
    assert json.loads(out)["results"]["verdict"] == "bessel_only"

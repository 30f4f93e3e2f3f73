"""Command line interface: exit codes, canonical JSON reports,
determinism of the report modulo the wall clock."""

import json
import subprocess
import sys

import pytest

from chamberlab import cli


def run_cli(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr().out.strip()
    return code, (json.loads(out) if out else None)


def test_check_report(capsys, diagram_444):
    code, rep = run_cli(capsys, ["check", diagram_444])
    assert code == 0
    assert rep["command"] == "check"
    assert rep["results"]["two_complete"] is True
    assert rep["results"]["a2tilde_free"] is True
    assert "sha256" in json.dumps(rep["inputs"]) or rep["inputs"]


def test_check_parse_error(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("nonsense")
    assert cli.main(["check", str(bad)]) == cli.EXIT_PARSE
    assert cli.main(["check", str(tmp_path / "missing.json")]) == cli.EXIT_PARSE


def test_triangles_verify(capsys, diagram_444):
    code, rep = run_cli(capsys, ["triangles", diagram_444,
                                 "--radius", "2", "--verify"])
    assert code == 0
    assert rep["results"]["triangles_found"] == 10
    assert rep["violations"] == []


def test_triangles_affine_refused(capsys, diagram_333):
    code = cli.main(["triangles", diagram_333, "--radius", "2"])
    assert code == cli.EXIT_HYPOTHESIS


def test_rgd(capsys):
    code, rep = run_cli(capsys, ["rgd", "a2"])
    assert code == 0
    assert rep["results"]["group_order"] == 168
    assert rep["results"]["torus_order"] == 1
    assert all(rep["results"]["axioms"].values())


def test_building_validate(capsys, tmp_path):
    from chamberlab import f2
    inc = tmp_path / "fano.txt"
    g = f2.fano_plane()
    inc.write_text("".join(f"p{p} l{l}\n" for p, l in sorted(g.flags)))
    code, rep = run_cli(capsys, ["building", "validate", str(inc),
                                 "--gonality", "3"])
    assert code == 0
    assert rep["results"]["passed"] is True
    # declaring the wrong gonality must fail
    code2 = cli.main(["building", "validate", str(inc), "--gonality", "4"])
    capsys.readouterr()
    assert code2 != 0


def test_json_file_output(tmp_path, diagram_444):
    out = tmp_path / "rep.json"
    code = cli.main(["check", diagram_444, "--json", str(out)])
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["command"] == "check"
    # canonical form: sorted keys, no spaces
    text = out.read_text().strip()
    assert text == json.dumps(rep, sort_keys=True, separators=(",", ":"))


def test_determinism_modulo_wall_clock(tmp_path, diagram_444):
    reps = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        assert cli.main(["triangles", diagram_444, "--radius", "2",
                         "--verify", "--json", str(out)]) == 0
        rep = json.loads(out.read_text())
        rep.pop("wall_clock_ms")
        reps.append(rep)
    assert reps[0] == reps[1]


def test_console_script_entry_point(diagram_444):
    proc = subprocess.run([sys.executable, "-m", "chamberlab.cli",
                           "check", diagram_444],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["command"] == "check"


def test_property_suite_exit(capsys, diagram_444):
    code, rep = run_cli(capsys, ["property-suite", diagram_444,
                                 "--radius", "3", "--seed", "0"])
    assert code == 0
    assert rep["violations"] == []
    per = rep["results"]["per_property"]
    assert all(v["violations"] == 0 for v in per.values())
    assert rep["results"]["instances_checked"] > 0

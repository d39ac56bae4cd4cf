import json

import pytest

from km_forge.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_validate(capsys, chain3_file):
    code, out, _ = run(capsys, "validate", chain3_file)
    assert code == 0
    report = json.loads(out)
    assert report["schema_version"] == "km-forge/1"
    assert report["size"] == 3


def test_validate_rejects_m3(capsys, m3_file):
    code, out, _ = run(capsys, "validate", m3_file)
    assert code == 1
    report = json.loads(out)
    assert report["violations"]
    assert report["checks"][0]["group"] == "distributivity"


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "delta", str(tmp_path / "nope.json"))
    assert code == 1
    assert "io_error" in err


def test_delta(capsys, chain3_file):
    code, out, _ = run(capsys, "delta", chain3_file)
    assert code == 0
    assert json.loads(out)["delta"] == {"0": "m", "m": "1", "1": "1"}
    code, out, _ = run(capsys, "delta", chain3_file, "-a", "0")
    assert json.loads(out)["delta"] == {"0": "m"}


def test_unknown_element(capsys, chain3_file):
    code, _, err = run(capsys, "one-step", chain3_file, "-a", "1/3")
    assert code == 1
    assert "element_not_found" in err


def test_dense(capsys, chain3_file):
    code, out, _ = run(capsys, "dense", chain3_file, "-a", "0")
    assert code == 0
    assert json.loads(out)["least"] == "m"


def test_km_axioms(capsys, chain3_file):
    assert run(capsys, "km-axioms", chain3_file)[0] == 0
    code, out, _ = run(capsys, "km-axioms", chain3_file, "--delta", "1,1,1")
    assert code == 2
    assert not json.loads(out)["matches_least_dense"]
    assert run(capsys, "km-axioms", chain3_file, "--delta", "1,1")[0] == 1


def test_one_step(capsys, chain3_file):
    code, out, _ = run(capsys, "one-step", chain3_file, "-a", "0")
    assert code == 0
    report = json.loads(out)
    assert report["iota"] == "(m,1)"
    assert report["fa_basis"] == ["(1,m)"]
    assert len(report["classes"]) == 3
    assert report["collapses_to_base"]


def test_one_step_dot(capsys, chain3_file):
    code, out, _ = run(capsys, "--format", "dot", "one-step", chain3_file, "-a", "0")
    assert code == 0
    assert out.startswith("digraph")


def test_text_format(capsys, chain3_file):
    code, out, _ = run(capsys, "--format", "text", "delta", chain3_file)
    assert code == 0
    assert "schema_version: km-forge/1" in out


def test_cap_exceeded(capsys, chain3_file):
    code, _, err = run(capsys, "--cap", "3", "one-step", chain3_file, "-a", "0")
    assert code == 3
    assert "cap_exceeded" in err


def test_km(capsys, chain3_file):
    code, out, _ = run(capsys, "km", chain3_file)
    assert code == 0
    report = json.loads(out)
    assert report["delta"] == {"0": "m", "m": "1", "1": "1"}
    assert report["rounds"] == 1


def test_free(capsys, boolean4_file):
    code, out, _ = run(capsys, "free", boolean4_file)
    assert code == 0
    report = json.loads(out)
    assert report["size"] == len(report["elements"])


def test_iso_commute(capsys, chain3_file):
    code, out, _ = run(capsys, "iso-commute", chain3_file, "-a", "0", "-b", "m")
    assert code == 0
    report = json.loads(out)
    assert report["first"] == "0"
    assert report["fixes_base"] and report["deltas_match"]


def test_omega_demo(capsys):
    code, out, _ = run(capsys, "omega", "demo", "--n0", "2")
    assert code == 0
    assert json.loads(out)["collapsed_pair"] == ["1/2", "1"]
    assert run(capsys, "omega", "demo", "--n0", "0")[0] == 1


def test_omega_verify(capsys):
    code, out, _ = run(capsys, "omega", "verify", "--depth", "1", "--constant", "1/7")
    assert code == 0
    assert json.loads(out)["constants"][-1] == "1/7"
    assert run(capsys, "omega", "verify", "--depth", "0")[0] == 1
    assert run(capsys, "omega", "verify", "--constant", "7")[0] == 1


@pytest.mark.parametrize("command", ["spec", "sigma-plus", "compare-muravitsky", "open-statement"])
def test_stone_commands(capsys, chain3_file, command):
    argv = [command, chain3_file] + ([] if command == "spec" else ["-a", "0"])
    if command == "open-statement":
        argv += ["--depth", "1"]
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert json.loads(out)["algebra"] == "3-chain"


def test_schema(capsys, chain3_file):
    code, out, _ = run(capsys, "schema", chain3_file, "--schema", "eqD")
    assert code == 0
    assert json.loads(out)["schema"] == "eqD"
    assert run(capsys, "schema", chain3_file, "--schema", "bogus")[0] == 1


def test_verify_all(capsys):
    code, out, _ = run(capsys, "verify-all", "--poset-max", "2", "--chain-max", "3", "--depth", "1", "--nvars", "1",
                       "--suite", "dense", "--suite", "worked-example")
    assert code == 0
    assert [s["suite"] for s in json.loads(out)["suites"]] == ["dense", "worked-example"]


def test_export_dot(capsys, chain3_file, tmp_path):
    target = tmp_path / "out.dot"
    assert run(capsys, "export-dot", chain3_file, "-o", str(target))[0] == 0
    assert target.read_text(encoding="utf-8").startswith("digraph")
    code, out, _ = run(capsys, "export-dot", chain3_file, "--no-delta")
    assert code == 0
    assert "dashed" not in out


def test_unknown_command(capsys):
    assert run(capsys, "frobnicate")[0] == 1

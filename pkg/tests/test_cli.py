import json

import pytest

from lapbound import cli


def _run(tmp_path, *argv):
    return cli.main([*argv, "-o", str(tmp_path)])


@pytest.mark.parametrize("cmd", ["criteria", "kbounds", "partition", "an-curve", "schatten", "asymptotics", "oracle"])
def test_subcommands_write_json(tmp_path, cmd):
    extra = ["--size", "128"] if cmd in ("oracle", "asymptotics") else []
    assert _run(tmp_path, cmd, *extra) == 0
    data = json.loads((tmp_path / f"{cmd}-W1.json").read_text())
    assert data["name"] == "W1"


def test_criteria_values(tmp_path):
    assert _run(tmp_path, "criteria") == 0
    data = json.loads((tmp_path / "criteria-W1.json").read_text())
    assert data["hilbert_schmidt"] == pytest.approx(0.5)


def test_kbounds_infinite_interval(tmp_path):
    assert _run(tmp_path, "kbounds", "--interval", "0.5", "inf") == 0


def test_custom_weight(tmp_path):
    w = "[{lo: 0, hi: 1, coeff: 2, exp: 0}]"
    assert _run(tmp_path, "criteria", "--weight", w) == 0
    assert (tmp_path / "criteria-custom.json").exists()


def test_config_file(tmp_path):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("fixture: step\nepsilon: [0.3]\n")
    assert _run(tmp_path, "partition", "--config", str(cfg)) == 0
    assert (tmp_path / "partition-step.json").exists()


@pytest.mark.parametrize("argv", [
    ["criteria", "--p", "0.5"],
    ["criteria", "--fixture", "nope"],
    ["criteria", "--weight", "[{lo: 1, hi: 0, coeff: 1, exp: 0}]"],
    ["nosuch"],
    ["kbounds", "--interval", "a", "b"],
])
def test_config_errors_exit_2(tmp_path, argv):
    out = tmp_path / "out"
    assert cli.main([*argv, "-o", str(out)]) == 2
    assert not out.exists()


def test_unknown_config_key(tmp_path):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("bogus: 1\n")
    out = tmp_path / "out"
    assert cli.main(["criteria", "--config", str(cfg), "-o", str(out)]) == 2
    assert not out.exists()


def test_verify_subset_deterministic(tmp_path, monkeypatch):
    from lapbound import verify
    orig = verify.run
    monkeypatch.setattr(verify, "run", lambda **kw: orig(only={"weights", "kernel", "hardy"}, **kw))
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.main(["verify", "--samples", "20", "-o", str(a)]) == 0
    assert cli.main(["verify", "--samples", "20", "-o", str(b)]) == 0
    assert (a / "verify-W1.json").read_bytes() == (b / "verify-W1.json").read_bytes()


def test_verify_failure_exit_1(tmp_path, monkeypatch):
    from lapbound import verify
    monkeypatch.setattr(verify, "run", lambda **kw: {"passed": False, "checks": [{"name": "x", "passed": False}]})
    assert _run(tmp_path, "verify") == 1

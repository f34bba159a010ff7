import json
import math
from pathlib import Path

import pytest

from lieflow.cli import EXIT_DOMAIN, EXIT_FAIL, EXIT_OK, EXIT_USAGE, main

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_rootsys_info(capsys):
    code, out, _ = run(capsys, "rootsys", "info", "A", "1")
    data = json.loads(out)
    assert code == EXIT_OK
    assert data["dimension"] == 3 and data["rank"] == 1 and data["weyl_order"] == 2
    code, out, _ = run(capsys, "rootsys", "info", "A", "2")
    data = json.loads(out)
    assert data["weyl_order"] == 6 and data["center_order"] == 3


def test_invalid_type_is_usage_error(capsys):
    code, _, err = run(capsys, "rootsys", "info", "Z", "9")
    assert code == EXIT_USAGE and "error" in err


def test_character_stable_su2(capsys):
    code, out, _ = run(capsys, "character", "A", "1", "--normalization", "unit_weight", "--weight", "3", "--H", "0.7", "--method", "stable")
    assert code == EXIT_OK
    re, im = json.loads(out)["value"]
    assert re == pytest.approx(math.sin(2.1) / math.sin(0.7), rel=1e-12) and abs(im) < 1e-12


def test_character_at_identity_is_dimension(capsys):
    code, out, _ = run(capsys, "character", "A", "2", "--weight", "2,3", "--H", "0,0", "--method", "stable")
    assert code == EXIT_OK and json.loads(out)["value"][0] == pytest.approx(15)


def test_character_quotient_on_wall_is_domain_error(capsys):
    code, _, err = run(capsys, "character", "A", "1", "--weight", "3", "--H", "1e-9", "--method", "quotient")
    assert code == EXIT_DOMAIN
    assert "stable" in err and "series" in err


def test_character_wrong_arity(capsys):
    code, _, _ = run(capsys, "character", "A", "2", "--weight", "2", "--H", "0,0")
    assert code == EXIT_USAGE


def test_kernel_command(capsys):
    code, out, _ = run(capsys, "kernel", "A", "1", "--normalization", "unit_weight", "--N", "4", "--t", "0.3", "--H", "0.5")
    data = json.loads(out)
    assert code == EXIT_OK and data["terms"] == 11


def test_verify_counting(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "counting", "--N", "16,64", "--samples", "500", "--out", str(tmp_path))
    assert code == EXIT_OK
    assert "PASS counting" in out
    assert (tmp_path / "counting.csv").exists() and (tmp_path / "summary.json").exists()


def test_verify_bad_config(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"scans": ["counting"], "unexpected": 1}))
    code, _, err = run(capsys, "verify", "suite", "--config", str(bad), "--out", str(tmp_path))
    assert code == EXIT_USAGE and "unexpected" in err
    bad.write_text("{not json")
    assert run(capsys, "verify", "suite", "--config", str(bad))[0] == EXIT_USAGE


def test_verify_failure_exit_code(capsys, tmp_path, monkeypatch):
    from lieflow import verify

    real = verify.counting_scan

    def broken(*args, **kwargs):
        rep = real(*args, **kwargs)
        rep.extra["checks_passed"] = False
        return rep

    monkeypatch.setattr(verify, "counting_scan", broken)
    code, out, _ = run(capsys, "verify", "counting", "--N", "16", "--samples", "100", "--out", str(tmp_path))
    assert code == EXIT_FAIL and "FAIL counting" in out


def test_env_output_dir(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("LIEFLOW_OUTPUT_DIR", str(tmp_path / "env"))
    code, _, _ = run(capsys, "verify", "counting", "--N", "16", "--samples", "100")
    assert code == EXIT_OK and (tmp_path / "env" / "summary.json").exists()


def test_suite_twice_identical_bytes(capsys, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    cfg = str(CONFIGS / "default.json")
    assert run(capsys, "verify", "suite", "--config", cfg, "--seed", "7", "--out", str(a))[0] == EXIT_OK
    assert run(capsys, "verify", "suite", "--config", cfg, "--seed", "7", "--out", str(b))[0] == EXIT_OK
    names = sorted(p.name for p in a.iterdir() if p.name != "timings.json")
    assert names == ["counting.csv", "dispersive.csv", "lp.csv", "summary.json", "weylsum.csv"]
    for name in names:
        assert (a / name).read_bytes() == (b / name).read_bytes(), name

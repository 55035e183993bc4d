import io
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from schurlat.cli import EXIT_CHECK, EXIT_OK, EXIT_USAGE, load_config, build_parser, main


def run(argv, environ=None):
    out = io.StringIO()
    code = main(argv, environ or {}, out)
    return code, out.getvalue()


def test_verify_all_on_golden_example(tmp_path):
    code, text = run(["verify", "all", "--example", "schur_golden", "--out", str(tmp_path)])
    assert code == EXIT_OK
    assert "FAIL" not in text
    assert (tmp_path / "verify.csv").exists()


def test_moments_order_zero_prints_one(tmp_path):
    code, text = run(["moments", "--example", "hexagon", "--p", "0", "--out", str(tmp_path)])
    assert code == EXIT_OK
    assert text.strip() == "1.000000000"


def test_schur_eval_values(tmp_path):
    code, text = run(["schur", "eval", "--example", "schur_golden", "--out", str(tmp_path)])
    assert code == EXIT_OK
    assert "coset\t368" in text and "branching\t368" in text


def test_frozen_curve_writes_two_branches(tmp_path):
    code, text = run(["frozen", "curve", "--example", "hexagon", "--out", str(tmp_path)])
    assert code == EXIT_OK
    rows = (tmp_path / "frozen_curve.csv").read_text().splitlines()
    assert rows[0] == "i,t,chi,kappa"
    assert {r.split(",")[0] for r in rows[1:]} == {"1", "2"}
    root = ET.parse(tmp_path / "frozen_curve.svg").getroot()
    assert root.tag.endswith("svg")
    assert "regions disjoint: yes" in text


def test_csv_output_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert run(["lattice", "marginal", "--example", "small_lattice", "--out", str(d)])[0] == EXIT_OK
        assert run(["measure", "--example", "hexagon", "--out", str(d)])[0] == EXIT_OK
    for name in ("lattice_marginal.csv", "measure.csv", "measure.svg"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_svg_has_no_external_references(tmp_path):
    run(["measure", "--example", "hexagon", "--out", str(tmp_path)])
    text = (tmp_path / "measure.svg").read_text()
    ET.fromstring(text.encode())
    assert "<!DOCTYPE" not in text
    assert 'href="http' not in text


def test_lattice_commands(tmp_path):
    assert run(["lattice", "z", "--example", "schur_golden", "--out", str(tmp_path)]) == (EXIT_OK, "enumeration\t66\nschur\t66\n")
    code, text = run(["lattice", "enumerate", "--example", "schur_golden", "--out", str(tmp_path)])
    assert code == EXIT_OK and "20 perfect matchings" in text
    code, text = run(["lattice", "height", "--example", "schur_golden", "--out", str(tmp_path)])
    assert code == EXIT_OK and "consistent: yes" in text


def test_cap_violation_is_a_usage_error(tmp_path):
    code, _ = run(["lattice", "z", "--example", "small_lattice", "--cap-vertices", "10", "--out", str(tmp_path)])
    assert code == EXIT_USAGE


def test_missing_config_is_a_usage_error():
    assert run(["measure"])[0] == EXIT_USAGE
    assert run(["measure", "--config", "/nonexistent.ini"])[0] == EXIT_USAGE
    assert run(["measure", "--example", "nosuch"])[0] == EXIT_USAGE


def test_bad_config_is_a_usage_error(tmp_path):
    cfg = tmp_path / "bad.ini"
    cfg.write_text("[model]\nx = 1\ny = -1\na = 0\n")
    assert run(["measure", "--config", str(cfg)])[0] == EXIT_USAGE


def test_unknown_command_is_a_usage_error():
    assert run(["nonsense"])[0] == EXIT_USAGE
    assert run(["frozen"])[0] == EXIT_USAGE


def test_check_failure_exit_code(tmp_path, monkeypatch):
    from schurlat import checks

    monkeypatch.setattr(checks, "run_all", lambda cfg: [checks.CheckResult("forced", False)])
    monkeypatch.setattr("schurlat.cli.run_all", checks.run_all)
    code, text = run(["verify", "all", "--example", "schur_golden", "--out", str(tmp_path)])
    assert code == EXIT_CHECK and "FAIL  forced" in text


def test_precedence_flag_over_env_over_config(tmp_path):
    parser = build_parser()
    env = {"SCHURLAT_JOBS": "3", "SCHURLAT_KAPPA": "0.25"}
    args = parser.parse_args(["moments", "--example", "hexagon", "--jobs", "2"])
    cfg = load_config(args, env)
    assert cfg.run.jobs == 2
    assert cfg.run.kappa == 0.25
    cfg = load_config(parser.parse_args(["moments", "--example", "hexagon"]), {})
    assert cfg.run.kappa == 0.5


def test_env_selects_output_dir(tmp_path):
    code, _ = run(["measure", "--example", "hexagon"], {"SCHURLAT_OUT": str(tmp_path)})
    assert code == EXIT_OK and (tmp_path / "measure.csv").exists()


def test_parallel_sweep_matches_serial(tmp_path):
    cfg = tmp_path / "grid.ini"
    cfg.write_text(
        "[model]\nx = 1, 1/2\nblocks = 0:1/6, 13/6:7/3, 16/3:11/2, 17/2:35/4, 51/4:13\n"
        "[run]\nchi_points = 12\nkappa_points = 4\n"
    )
    serial, par = tmp_path / "s", tmp_path / "p"
    assert run(["frozen", "classify", "--config", str(cfg), "--out", str(serial)])[0] == EXIT_OK
    assert run(["frozen", "classify", "--config", str(cfg), "--out", str(par), "--jobs", "2"])[0] == EXIT_OK
    assert (serial / "frozen_classify.csv").read_bytes() == (par / "frozen_classify.csv").read_bytes()


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "schurlat", "measure", "--example", "hexagon", "--out", str(tmp_path)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("m1: [17, 35/2] u [51/2, 26]")

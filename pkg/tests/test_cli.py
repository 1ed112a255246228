import cmath
import json
import math

import pytest

from chiral_modular.cli import main
from chiral_modular.correlators import wick_oracle_abelian


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- verify ------------------------------------------------------------------


def test_verify_single_identity_passes(tmp_path, capsys):
    out = tmp_path / "report.json"
    code, _, _ = run_cli(
        capsys, "verify", "--identity", "omega-n-kms", "--n", "2",
        "--t-grid", "-1,0.5,1.5", "--configs", "4", "--output", str(out),
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["verdict"] == "pass"
    assert doc["identity"] == "omega-n-kms"
    assert doc["max_residual"] <= 1e-8


def test_verify_chiral_only_control_exits_nonzero(capsys):
    code, out, _ = run_cli(
        capsys, "verify", "--identity", "vacuum-kms", "--chiral-only",
        "--configs", "5",
    )
    assert code == 1
    doc = json.loads(out)
    assert doc["verdict"] == "fail"
    assert doc["max_residual"] > 1e-2


def test_verify_empty_t_grid_is_usage_error(capsys):
    code, _, err = run_cli(
        capsys, "verify", "--identity", "vacuum-kms", "--t-grid", " ",
    )
    assert code == 2
    assert "t-grid" in err


def test_verify_unknown_config_key_rejected(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"no_such_option": 1}')
    code, _, err = run_cli(capsys, "verify", "--config", str(cfg))
    assert code == 2
    assert "no_such_option" in err


def test_verify_flags_override_config_file(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"identity": "omega-n-invariance", "n": 3, "configs": 3}))
    out = tmp_path / "r.json"
    code, _, _ = run_cli(
        capsys, "verify", "--config", str(cfg), "--configs", "2",
        "--output", str(out),
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["identity"] == "omega-n-invariance"
    assert len(doc["cases"]) == 2  # flag wins over the file's 3


def test_verify_suite_is_deterministic(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        code, _, _ = run_cli(
            capsys, "verify", "--seed", "7", "--output", str(p),
        )
        assert code == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    doc = json.loads(paths[0].read_text())
    assert doc["verdict"] == "pass"
    assert doc["negative_control"]["satisfied"] is True
    assert {r["name"] for r in doc["reports"]} == {
        "vacuum-kms", "omega-n-kms[n=2]", "omega-n-invariance[n=2]",
        "omega-n-invariance[n=3]", "omega-n-invariance[n=4]",
        "product-invariance",
    }


def test_verify_respects_seed_env(tmp_path, capsys, monkeypatch):
    out1, out2 = tmp_path / "e1.json", tmp_path / "e2.json"
    monkeypatch.setenv("CHIRAL_MODULAR_SEED", "123")
    run_cli(capsys, "verify", "--identity", "omega-n-invariance", "--n", "2",
            "--configs", "3", "--output", str(out1))
    monkeypatch.delenv("CHIRAL_MODULAR_SEED")
    run_cli(capsys, "verify", "--identity", "omega-n-invariance", "--n", "2",
            "--configs", "3", "--seed", "123", "--output", str(out2))
    assert out1.read_bytes() == out2.read_bytes()
    assert json.loads(out1.read_text())["seed"] == 123


def test_verify_jobs_flag_keeps_output_identical(tmp_path, capsys):
    a, b = tmp_path / "j1.json", tmp_path / "j2.json"
    assert run_cli(capsys, "verify", "--output", str(a))[0] == 0
    assert run_cli(capsys, "verify", "--jobs", "4", "--output", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()


# --- flow ---------------------------------------------------------------------


def test_flow_trace_monotone_in_quarter_arc(capsys):
    code, out, _ = run_cli(
        capsys, "flow", "--n", "2", "--theta", repr(math.pi / 4),
        "--t-min", "-2", "--t-max", "2", "--steps", "81",
    )
    assert code == 0
    rows = [line for line in out.splitlines() if not line.startswith("#")]
    assert len(rows) == 81
    outs = [float(r.split(",")[2]) for r in rows]
    assert all(0.0 < th < math.pi / 2 for th in outs)
    assert all(a > b for a, b in zip(outs, outs[1:]))  # contracts toward 0


def test_flow_fixpoint_listing(capsys):
    code, out, _ = run_cli(
        capsys, "flow", "--n", "3", "--theta", "0.5", "--steps", "3", "--fixpoints",
    )
    assert code == 0
    fixrows = [line for line in out.splitlines() if line.startswith("# fixpoint")]
    assert len(fixrows) == 6


def test_flow_rejects_bad_arguments(capsys):
    assert run_cli(capsys, "flow", "--n", "0")[0] == 2
    assert run_cli(capsys, "flow", "--steps", "1")[0] == 2


def test_csv_format_only_for_flow(capsys):
    code, _, err = run_cli(capsys, "verify", "--format", "csv")
    assert code == 2
    assert "csv" in err


# --- correlator -----------------------------------------------------------------


def test_correlator_vacuum_four_point_matches_oracle(tmp_path, capsys):
    thetas = [0.3, 1.2, 2.6, 4.0]
    req = tmp_path / "req.json"
    req.write_text(json.dumps({
        "state": "vacuum",
        "kind": "current",
        "thetas": thetas,
        "colors": [0, 0, 0, 0],
        "algebra": "abelian",
        "level": 1.0,
    }))
    code, out, _ = run_cli(capsys, "correlator", "--config", str(req))
    assert code == 0
    doc = json.loads(out)
    got = complex(*doc["value"])
    expected = wick_oracle_abelian(1.0, [cmath.exp(1j * t) for t in thetas])
    assert abs(got - expected) < 1e-12 * abs(expected)


def test_correlator_omega2_example(tmp_path, capsys):
    req = tmp_path / "req.json"
    req.write_text(json.dumps({
        "state": {"omega_n": 2},
        "kind": "current",
        "thetas": [math.pi / 2, 0.0],
        "colors": [0, 0],
    }))
    code, out, _ = run_cli(capsys, "correlator", "--config", str(req))
    assert code == 0
    value = complex(*json.loads(out)["value"])
    assert abs(value - 1j) < 1e-12


def test_correlator_opposite_points_exit_one(tmp_path, capsys):
    req = tmp_path / "req.json"
    req.write_text(json.dumps({
        "state": {"omega_n": 2},
        "kind": "current",
        "thetas": [0.5, 0.5 + math.pi],
        "colors": [0, 0],
    }))
    code, _, err = run_cli(capsys, "correlator", "--config", str(req))
    assert code == 1
    assert "0 and 1" in err and "z^2" in err


def test_correlator_primary_and_product_requests(tmp_path, capsys):
    req = tmp_path / "req.json"
    req.write_text(json.dumps({
        "state": {"omega_nn": 2},
        "kind": "primary",
        "thetas": [0.4, 1.1],
        "delta": 0.5,
    }))
    code, out, _ = run_cli(capsys, "correlator", "--config", str(req))
    assert code == 0
    value = complex(*json.loads(out)["value"])
    assert value.real > 0 and abs(value.imag) < 1e-10 * value.real

    req.write_text(json.dumps({
        "state": {"product_omega2": {"base": {"start": 0.0, "length": math.pi}}},
        "kind": "current",
        "thetas": [0.3, 1.0, 0.3 + math.pi, 1.0 + math.pi],
        "colors": [0, 0, 0, 0],
    }))
    code, out, _ = run_cli(capsys, "correlator", "--config", str(req))
    assert code == 0


def test_correlator_unknown_key_rejected(tmp_path, capsys):
    req = tmp_path / "req.json"
    req.write_text(json.dumps({"state": "vacuum", "bogus": 1, "thetas": [0.1]}))
    assert run_cli(capsys, "correlator", "--config", str(req))[0] == 2


# --- algebra ----------------------------------------------------------------------


def test_algebra_closure_verdicts(capsys):
    code, out, _ = run_cli(capsys, "algebra", "--n-max", "10")
    assert code == 0
    doc = json.loads(out)
    assert doc["all_ok"] is True
    assert [v["n"] for v in doc["verdicts"]] == list(range(1, 11))
    assert all(v["ok"] for v in doc["verdicts"])


def test_algebra_mutation_negative_control(capsys):
    code, out, _ = run_cli(capsys, "algebra", "--n-max", "4", "--mutate", "drop-central")
    assert code == 1
    doc = json.loads(out)
    assert doc["all_ok"] is False
    # n = 1 has no central shift to drop; every higher n exposes the witness
    by_n = {v["n"]: v for v in doc["verdicts"]}
    assert by_n[1]["ok"] is True
    for n in (2, 3, 4):
        assert by_n[n]["ok"] is False
        assert "c" in by_n[n]["witness"]

"""CLI behavior: exit statuses, determinism, fault detection."""

import json

import pytest

from latticelab import cli
from latticelab import registry as reg


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_hnap_counterexample_exits_2(capsys):
    code, out, _ = run(capsys, "check", "--registry", "example-hnap-3d",
                       "--property", "hnap")
    assert code == 2
    assert "split_sum=1.25" in out


def test_check_l1_um_exits_0(capsys):
    code, out, _ = run(capsys, "check", "--registry", "lp-1-3", "--property", "um")
    assert code == 0
    assert "delta_hat=0.05" in out and "orthant-exact" in out


def test_check_square_file_umoe_witness(tmp_path, capsys):
    square = {"name": "square", "dim": 2, "asserted_absolute": True,
              "spec": {"type": "lp", "p": "inf", "dim": 2}}
    path = tmp_path / "square.json"
    path.write_text(json.dumps(square))
    code, out, _ = run(capsys, "check", "--file", str(path), "--property", "umoe")
    assert code == 2
    assert "witness" in out and "norm_minus=1" in out


def test_check_malformed_file_exit_64(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{")
    code, _, err = run(capsys, "check", "--file", str(path))
    assert code == 64


def test_check_output_deterministic(capsys):
    _, out1, _ = run(capsys, "check", "--registry", "lp-inf-2", "--property", "umoe")
    _, out2, _ = run(capsys, "check", "--registry", "lp-inf-2", "--property", "umoe")
    assert out1 == out2


def test_check_csv_emission(tmp_path, capsys):
    code, out, _ = run(capsys, "check", "--registry", "lp-1-3", "--property", "um",
                       "--csv", str(tmp_path))
    assert code == 0
    csv = (tmp_path / "lp-1-3_um.csv").read_text().splitlines()
    assert csv[0] == cli.CSV_HEADER
    assert csv[1].startswith("lp-1-3,UM,0.05,0.05")


def test_bpb_precondition_exit_66(capsys):
    code, _, err = run(capsys, "bpb", "--registry", "lp-1-2",
                       "--x", "1,0", "--f", "0.9,1", "--eps", "0.1")
    assert code == 66
    assert "does not exceed" in err


def test_bpb_positive_contract(capsys):
    code, out, _ = run(capsys, "bpb", "--registry", "lp-2-3",
                       "--x", "1,0,0", "--f", "0.9998,0.02,0",
                       "--eps", "0.2", "--variant", "positive")
    assert code == 0
    assert "contract    = met" in out


def test_bpb_hnap_residual_exit_2(capsys):
    code, out, _ = run(capsys, "bpb", "--registry", "example-hnap-3d",
                       "--x", "3/4,-3/4,0", "--f", "2/3,-2/3,1",
                       "--eps", "0.25", "--variant", "sm-hnap")
    assert code == 2
    assert "residual    = 0.333333333333" in out


def test_bpb_tol_gate(capsys):
    code, _, err = run(capsys, "bpb", "--registry", "lp-1-2",
                       "--x", "1,0", "--f", "1,1", "--eps", "0.1",
                       "--tol", "1")
    assert code == 66


def test_export_then_check(tmp_path, capsys):
    out_path = tmp_path / "exported.json"
    code, _, _ = run(capsys, "export", "--registry", "lp-inf-2",
                     "--out", str(out_path))
    assert code == 0
    code, out, _ = run(capsys, "check", "--file", str(out_path),
                       "--property", "sm")
    assert code == 0


def test_reproduce_detects_injected_formula_fault(capsys, monkeypatch):
    true_form = reg.sm3d_dual_closed_form
    monkeypatch.setattr(reg, "sm3d_dual_closed_form",
                        lambda f: true_form(f) + 1e-2)
    code, out, _ = run(capsys, "reproduce")
    assert code == 2
    assert "MISMATCH" in out

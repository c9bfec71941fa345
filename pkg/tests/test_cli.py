"""End-to-end tests of the command-line interface, driven in process."""

import json
import os
import subprocess
import sys

import numpy as np
import pytest

from dickekw import cli, io, qmat, states
from dickekw import correlations as corr


def run(*argv):
    return cli.main(list(argv))


def test_state_writes_density_matrix(tmp_path, capsys):
    out = tmp_path / "bell.dm.json"
    assert run("state", "psi-plus", "--out", str(out)) == 0
    np.testing.assert_allclose(io.load_density_matrix(out),
                               qmat.dm(states.psi_plus()), atol=1e-15)
    assert "wrote" in capsys.readouterr().out


def test_state_projection_prints_probability(tmp_path, capsys):
    out = tmp_path / "w1.dm.json"
    assert run("state", "dicke-4-2", "--project", "d=1", "--out", str(out)) == 0
    captured = capsys.readouterr().out
    assert "projection probability: 0.5" in captured
    np.testing.assert_allclose(io.load_density_matrix(out),
                               qmat.dm(states.dicke(3, 1)), atol=1e-12)


def test_state_prints_document_without_out(capsys):
    assert run("state", "psi-plus") == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["n_qubits"] == 2


def test_state_unknown_name_fails(capsys):
    assert run("state", "ghz") == 1
    assert capsys.readouterr().err.startswith("error:")


def test_usage_error_exits_two():
    with pytest.raises(SystemExit) as info:
        run("tomo", "simulate")  # missing --in
    assert info.value.code == 2


def test_tomo_simulate_deterministic(tmp_path, capsys):
    dm_path = tmp_path / "w1.dm.json"
    run("state", "w1", "--out", str(dm_path))
    c1 = tmp_path / "a.csv"
    c2 = tmp_path / "b.csv"
    for path in (c1, c2):
        assert run("tomo", "simulate", "--in", str(dm_path), "--counts", "500",
                   "--seed", "9", "--out", str(path)) == 0
    assert c1.read_text() == c2.read_text()
    capsys.readouterr()


def test_tomo_reconstruct_with_target(tmp_path, capsys):
    dm_path = tmp_path / "w1.dm.json"
    counts = tmp_path / "counts.csv"
    fit = tmp_path / "fit.dm.json"
    run("state", "w1", "--out", str(dm_path))
    run("tomo", "simulate", "--in", str(dm_path), "--counts", "2000",
        "--seed", "42", "--out", str(counts))
    capsys.readouterr()
    assert run("tomo", "reconstruct", "--counts", str(counts),
               "--target", str(dm_path), "--out", str(fit)) == 0
    captured = capsys.readouterr().out
    assert "fidelity = 0.99" in captured
    assert "converged=True" in captured
    rho = io.load_density_matrix(fit)
    qmat.check_density_matrix(rho)


def test_tomo_reconstruct_bootstrap(tmp_path, capsys):
    dm_path = tmp_path / "bell.dm.json"
    counts = tmp_path / "counts.csv"
    run("state", "psi-plus", "--out", str(dm_path))
    run("tomo", "simulate", "--in", str(dm_path), "--counts", "500",
        "--seed", "1", "--out", str(counts))
    capsys.readouterr()
    assert run("tomo", "reconstruct", "--counts", str(counts),
               "--target", str(dm_path), "--bootstrap", "50") == 0
    assert "+/-" in capsys.readouterr().out


def test_tomo_reconstruct_linear_flags_negativity(tmp_path, capsys):
    dm_path = tmp_path / "w1.dm.json"
    counts = tmp_path / "counts.csv"
    run("state", "w1", "--out", str(dm_path))
    run("tomo", "simulate", "--in", str(dm_path), "--counts", "60",
        "--seed", "3", "--out", str(counts))
    capsys.readouterr()
    assert run("tomo", "reconstruct", "--counts", str(counts),
               "--method", "linear") == 0
    # low statistics: reconstruction is reported even when not physical
    capsys.readouterr()


def test_tomo_reconstruct_undercovered_counts_fail(tmp_path, capsys):
    counts = tmp_path / "counts.csv"
    counts.write_text("XX,00,10\nXX,11,10\n")
    assert run("tomo", "reconstruct", "--counts", str(counts),
               "--method", "linear") == 1
    assert "error:" in capsys.readouterr().err


def test_kw_exact_report(tmp_path, capsys):
    dm_path = tmp_path / "w1.dm.json"
    out = tmp_path / "kw.json"
    run("state", "w1", "--out", str(dm_path))
    capsys.readouterr()
    assert run("kw", "exact", "--in", str(dm_path),
               "--assignment", "b|a,c", "--out", str(out)) == 0
    doc = json.loads(out.read_text())
    assert doc["assignment"] == "b|a,c"
    assert doc["method"] == "exact"
    assert abs(doc["KW"]) < 1e-6
    assert doc["S"] == pytest.approx(0.91829583405449, abs=1e-9)


def test_kw_exact_all_permutations(tmp_path, capsys):
    dm_path = tmp_path / "w1.dm.json"
    out = tmp_path / "kw6.json"
    run("state", "w1", "--out", str(dm_path))
    capsys.readouterr()
    assert run("kw", "exact", "--in", str(dm_path), "--all-permutations",
               "--out", str(out)) == 0
    captured = capsys.readouterr().out
    assert "average KW" in captured
    docs = json.loads(out.read_text())
    assert len(docs) == 6
    assert len({d["assignment"] for d in docs}) == 6


def test_kw_symmetric_command(tmp_path, capsys):
    out = tmp_path / "kw.json"
    assert run("kw", "symmetric", "--p", "0.31", "--c", "0.30375",
               "--out", str(out)) == 0
    doc = json.loads(out.read_text())
    assert doc["KW"] == pytest.approx(0.0338854314666889, abs=1e-12)
    capsys.readouterr()
    assert run("kw", "symmetric", "--p", "0.31", "--c", "0.30375",
               "--strict") == 1
    assert "error:" in capsys.readouterr().err


def test_kw_correlators_sign_maps_agree(tmp_path, capsys):
    magnitudes = tmp_path / "mag.csv"
    io.save_correlators(magnitudes, corr.REFERENCE_CORRELATOR_TABLE)
    signed = tmp_path / "signed.csv"
    io.save_correlators(signed, corr.apply_sign_map(
        corr.REFERENCE_CORRELATOR_TABLE, "ideal-w1"))
    out1 = tmp_path / "kw1.json"
    out2 = tmp_path / "kw2.json"
    assert run("kw", "correlators", "--table", str(magnitudes),
               "--sign-map", "ideal-w1", "--seed", "0",
               "--out", str(out1)) == 0
    assert run("kw", "correlators", "--table", str(signed),
               "--sign-map", "raw", "--seed", "0", "--out", str(out2)) == 0
    captured = capsys.readouterr().out
    assert "extracted model: p=0.31 c=0.30375" in captured
    assert out1.read_text() == out2.read_text()


def test_report_command(tmp_path, capsys):
    out = tmp_path / "report.txt"
    assert run("report", "--counts", "400", "--bootstrap", "50",
               "--samples", "200", "--grid", "24", "--out", str(out)) == 0
    text = out.read_text()
    for header in ("[source state and circuit]",
                   "[projective reductions of dicke(4,2)]",
                   "[white-noise resource model]",
                   "[monogamy balance: measured correlator table]",
                   "[tomography round trip]",
                   "[end-to-end correlator pipeline]"):
        assert header in text
    assert "fidelity to dicke(4,2): 0.779688" in text
    capsys.readouterr()


def test_outputs_are_atomic(tmp_path, capsys):
    out = tmp_path / "bell.dm.json"
    run("state", "psi-plus", "--out", str(out))
    assert os.listdir(tmp_path) == ["bell.dm.json"]
    capsys.readouterr()


def test_module_entry_point():
    result = subprocess.run([sys.executable, "-m", "dickekw.cli", "--help"],
                            capture_output=True, text=True)
    assert result.returncode == 0
    assert "state" in result.stdout and "tomo" in result.stdout

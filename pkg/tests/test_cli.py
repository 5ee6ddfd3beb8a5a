import json
import subprocess
import sys

import pytest

from polystab.cli import main
from polystab.formats import parse_certificate, parse_instance
from polystab.gadgets import unwrap_stability_gadget
from polystab.oracles import verify_singularity_certificate

K3 = "p edge 3 3\ne 1 2\ne 2 3\ne 1 3\n"
EMPTY3 = "p edge 3 0\n"


@pytest.fixture
def k3(tmp_path):
    path = tmp_path / "k3.dimacs"
    path.write_text(K3)
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr()


def test_reduce_writes_three_instances(tmp_path, k3, capsys):
    code, out = run(capsys, "reduce", k3, "--out", tmp_path / "r")
    assert code == 0
    files = sorted(p.name for p in (tmp_path / "r").iterdir())
    assert files == ["nonsingularity.json", "qt_instance.json", "stability.json"]
    st = parse_instance((tmp_path / "r" / "stability.json").read_text())
    assert (st.k, st.dim) == (3, 8)
    assert "3 matrices of dim 8" in out.out


def test_reduce_is_byte_deterministic(tmp_path, k3, capsys):
    for d in ("a", "b"):
        assert run(capsys, "reduce", k3, "--tau", "2/3", "--out", tmp_path / d)[0] == 0
    for name in ("qt_instance.json", "nonsingularity.json", "stability.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_reduce_rejects_bad_tau(tmp_path, k3, capsys):
    code, out = run(capsys, "reduce", k3, "--tau", "1/3", "--out", tmp_path)
    assert code == 2 and "tau" in out.err
    code, _ = run(capsys, "reduce", k3, "--tau", "1/0", "--out", tmp_path)
    assert code == 2


def test_clique(k3, capsys):
    code, out = run(capsys, "clique", k3)
    assert code == 0 and out.out.startswith("omega = 3 (exact)")
    code, out = run(capsys, "clique", k3, "--via-reduction")
    assert code == 0
    assert out.out.strip() == "omega = 3 (exact) / 3 (reduction) AGREE"


def test_clique_bad_input(tmp_path, capsys):
    bad = tmp_path / "loop.dimacs"
    bad.write_text("p edge 2 1\ne 1 1\n")
    assert run(capsys, "clique", bad)[0] == 2
    assert run(capsys, "clique", tmp_path / "missing.dimacs")[0] == 2


def test_check_stability_gadget_certificate(tmp_path, k3, capsys):
    run(capsys, "reduce", k3, "--out", tmp_path / "r")
    code, out = run(capsys, "check", tmp_path / "r" / "stability.json", "--out", tmp_path / "c")
    assert code == 0
    assert "unstable-combination-found" in out.out and "re-verified" in out.out
    cert = parse_certificate((tmp_path / "c" / "certificate.json").read_text())
    gadget = parse_instance((tmp_path / "r" / "stability.json").read_text())
    assert verify_singularity_certificate(cert, unwrap_stability_gadget(gadget))


def test_check_nonsingularity_gadget(tmp_path, capsys):
    g = tmp_path / "e.dimacs"
    g.write_text(EMPTY3)
    run(capsys, "reduce", g, "--out", tmp_path / "r")
    code, out = run(capsys, "check", tmp_path / "r" / "nonsingularity.json", "--out", tmp_path / "c")
    assert code == 0 and "exists: no" in out.out
    assert not (tmp_path / "c").exists()


def test_check_general_instance(tmp_path, capsys):
    inst = tmp_path / "i.json"
    inst.write_text(json.dumps({"kind": "general", "matrices": [[["-1", "4"], ["0", "-1"]], [["-1", "0"], ["4", "-1"]]]}))
    code, out = run(capsys, "check", inst, "--trials", "5")
    assert code == 0 and "vertex+search" in out.out and "unstable" in out.out


def test_check_malformed(tmp_path, capsys):
    inst = tmp_path / "i.json"
    inst.write_text('{"matrices":[[["1/0"]]]}')
    assert run(capsys, "check", inst)[0] == 2


def test_simulate_certificate_and_random(tmp_path, k3, capsys):
    run(capsys, "reduce", k3, "--out", tmp_path / "r")
    run(capsys, "check", tmp_path / "r" / "stability.json", "--out", tmp_path / "c")
    code, out = run(
        capsys, "simulate", tmp_path / "r" / "stability.json",
        "--certificate", tmp_path / "c" / "certificate.json", "--random", 3, "--out", tmp_path / "s",
    )
    assert code == 0, out
    assert "PASS" in out.out
    names = sorted(p.name for p in (tmp_path / "s").iterdir())
    assert names == [
        "decay_report.json", "trajectory_certificate.csv",
        "trajectory_random_000.csv", "trajectory_random_001.csv", "trajectory_random_002.csv",
    ]
    header = (tmp_path / "s" / "trajectory_certificate.csv").read_text().splitlines()[0]
    assert header == "t,x1,x2,x3,x4,x5,x6,x7,x8,l2norm"
    report = json.loads((tmp_path / "s" / "decay_report.json").read_text())
    assert report["certificate"]["violation"] is False


def test_simulate_is_deterministic_across_threads(tmp_path, k3, capsys, monkeypatch):
    run(capsys, "reduce", k3, "--out", tmp_path / "r")
    inst = tmp_path / "r" / "stability.json"
    run(capsys, "simulate", inst, "--random", 4, "--out", tmp_path / "one")
    monkeypatch.setenv("POLYSTAB_THREADS", "3")
    run(capsys, "simulate", inst, "--random", 4, "--out", tmp_path / "three")
    for p in (tmp_path / "one").iterdir():
        assert p.read_bytes() == (tmp_path / "three" / p.name).read_bytes()


def test_simulate_with_signal_file(tmp_path, k3, capsys):
    run(capsys, "reduce", k3, "--out", tmp_path / "r")
    sig = tmp_path / "sig.json"
    sig.write_text(json.dumps({"breakpoints": [0, 0.5, 1], "controls": [[1, 0, 0], [0, 0.5, 0.5]]}))
    code, _ = run(capsys, "simulate", tmp_path / "r" / "stability.json", "--signal", sig, "--out", tmp_path / "s")
    assert code == 0
    assert (tmp_path / "s" / "trajectory_signal.csv").exists()


def test_simulate_rejects_foreign_certificate(tmp_path, k3, capsys):
    run(capsys, "reduce", k3, "--out", tmp_path / "r")
    cert = tmp_path / "cert.json"
    cert.write_text('{"weights":["1"],"kernel":["1","-1"],"radicand":0,"instance_sha256":null}')
    code, out = run(capsys, "simulate", tmp_path / "r" / "stability.json", "--certificate", cert, "--out", tmp_path / "s")
    assert code == 1


def test_verify_gadgets(capsys):
    code, out = run(capsys, "verify-gadgets", "--trials", 10)
    assert code == 0
    lines = out.out.strip().splitlines()
    assert len(lines) == 5 and all(line.startswith("PASS") for line in lines)


def test_usage_errors(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys)[0] == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "polystab.cli", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "reduce" in proc.stdout

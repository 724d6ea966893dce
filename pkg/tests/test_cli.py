import os
import subprocess
import sys

import pytest
import tomli

from invkit import cli
from invkit.errors import VerificationError

HEIS_JOB = """
command = "verdict"

[algebra]
dim = 3
names = ["P", "Q", "Z"]
brackets = [[1, 2, [[3, "1"]]]]

[representation]
kind = "coadjoint"
coords = ["x", "y", "z"]

[options]
invariants = ["z", "z^2"]
generators_complete = true
"""


def run_main(capsys, argv):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_section_output(capsys):
    code, out, _ = run_main(capsys, ["section", "-n", "3"])
    assert code == 0
    doc = tomli.loads(out)
    assert doc["schema"] == 1
    assert doc["polys"] == {"P1": "x1*x3 - 1/2*x2^2", "P2": "x3"}


def test_job_file(tmp_path, capsys):
    job = tmp_path / "job.toml"
    job.write_text(HEIS_JOB)
    code, out, _ = run_main(capsys, ["run", str(job)])
    doc = tomli.loads(out)
    assert code == 0
    assert doc["verdict"] == "NOT_CHARACTERISTIC"
    assert (doc["stabilizer_dim"], doc["rep_dim"]) == (6, 2)


def test_invariants_from_catalog(capsys):
    code, out, _ = run_main(capsys, ["invariants", "--catalog", "heisenberg3-coadjoint", "--max-degree", "3"])
    doc = tomli.loads(out)
    assert code == 0
    assert doc["dims"] == {"1": 1, "2": 1, "3": 1}
    assert doc["invariants"]["3"] == ["z^3"]


def test_membership_and_rank(capsys):
    code, out, _ = run_main(capsys, ["membership", "--catalog", "dixmier6-coadjoint",
                                     "--target", "y5", "0", "0", "0", "0", "0", "--bound", "3"])
    assert code == 0 and tomli.loads(out)["outcome"] == "NO"
    code, out, _ = run_main(capsys, ["rank", "--catalog", "principal-nilpotent-3", "--point", "1,2,3"])
    assert code == 0 and tomli.loads(out)["rank"] == 2


def test_takiff_and_stabilizer(capsys):
    code, out, _ = run_main(capsys, ["takiff", "--catalog", "sl2-adjoint", "-m", "1"])
    doc = tomli.loads(out)
    assert code == 0 and doc["verdict"] == "CHARACTERISTIC" and doc["stabilizer_dim"] == 6
    code, out, _ = run_main(capsys, ["stabilizer", "--catalog", "heisenberg3-coadjoint", "--invariant", "z"])
    assert tomli.loads(out)["dim"] == 6


def test_catalog_listing(capsys):
    code, out, _ = run_main(capsys, ["catalog", "list"])
    assert code == 0 and "sl3-adjoint" in tomli.loads(out)["entries"]


@pytest.mark.parametrize("argv,path", [
    (["catalog", "show", "nope"], "options.name"),
    (["invariants", "--catalog", "nope", "--degree", "2"], "catalog"),
    (["verdict", "--catalog", "sl2-adjoint", "--invariant", "h +"], "options.invariants[0]"),
    (["invariants", "--catalog", "sl2-adjoint"], "options.degree"),
])
def test_invalid_input_exit_1(capsys, argv, path):
    code, out, err = run_main(capsys, argv)
    assert code == 1
    assert tomli.loads(out)["error"]["path"] == path
    assert err.startswith(f"error: {path}:")


def test_jacobi_failure_is_reported(tmp_path, capsys):
    job = tmp_path / "bad.toml"
    job.write_text('command = "invariants"\n[algebra]\ndim = 3\n'
                   'brackets = [[1, 2, [[3, 1]]], [1, 3, [[1, 1]]]]\n'
                   '[representation]\nkind = "adjoint"\n[options]\ndegree = 1\n')
    code, out, _ = run_main(capsys, ["run", str(job)])
    assert code == 1
    assert "(1, 2, 3)" in tomli.loads(out)["error"]["reason"]


def test_bad_document_keys(tmp_path, capsys):
    job = tmp_path / "bad.toml"
    job.write_text('command = "frobnicate"\n')
    code, _, err = run_main(capsys, ["run", str(job)])
    assert code == 1 and err.startswith("error: command:")


def test_verification_failure_exit_2(monkeypatch, capsys):
    def broken(n):
        raise VerificationError("forced")
    monkeypatch.setattr(cli, "section_invariants", broken)
    code, out, _ = run_main(capsys, ["section", "-n", "3"])
    assert code == 2
    assert tomli.loads(out)["status"] == "internal-error"


def _subprocess(args, threads):
    env = dict(os.environ, INVKIT_THREADS=str(threads))
    return subprocess.run([sys.executable, "-m", "invkit", *args], capture_output=True, env=env, check=True).stdout


@pytest.mark.parametrize("args", [
    ["invariants", "--catalog", "sl2-adjoint", "--max-degree", "4"],
    ["catalog", "show", "dixmier6-coadjoint"],
    ["takiff", "--catalog", "sl2-adjoint", "-m", "2"],
])
def test_byte_identical_reruns(args):
    first = _subprocess(args, 1)
    assert first == _subprocess(args, 1) == _subprocess(args, 4)


def test_output_polynomials_reparse(capsys):
    from invkit.poly import Ring
    code, out, _ = run_main(capsys, ["invariants", "--catalog", "sl3-adjoint", "--max-degree", "3"])
    doc = tomli.loads(out)
    ring = Ring(tuple(doc["coords"]))
    for polys in doc["invariants"].values():
        for text in polys:
            assert str(ring.parse(text)) == text


def test_bad_thread_setting_is_a_validation_error():
    env = dict(os.environ, INVKIT_THREADS="zero")
    proc = subprocess.run([sys.executable, "-m", "invkit", "invariants", "--catalog", "sl2-adjoint",
                           "--max-degree", "2"], capture_output=True, env=env)
    assert proc.returncode == 1
    assert b"INVKIT_THREADS" in proc.stderr

import json
import subprocess
import sys

import pytest

from qxfam.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("argv,want", [
    (["count", "gauss", "--a", "4", "--b", "2", "--q", "2"], "35"),
    (["count", "h3", "--q", "2", "--n", "3", "--t", "1", "--l", "4", "--k", "0"], "106"),
    (["count", "gauss", "--a", "5", "--b", "0", "--q", "7"], "1"),
    (["count", "h1", "--q", "2", "--n", "3", "--t", "1", "--l", "4"], "92"),
    (["count", "h2", "--q", "2", "--n", "3", "--t", "1", "--l", "4", "--k", "0", "--c", "7"], "106"),
    (["count", "bound:fs", "--q", "2", "--n", "3", "--t", "1", "--l", "4", "--s", "1", "--r", "0"], "96"),
    (["count", "lemma42", "--q", "2", "--n", "3", "--l", "3", "--m", "1", "--a", "3"], "48"),
    (["count", "nprime", "--q", "2", "--n", "2", "--l", "2", "--m1", "0", "--h1", "0", "--m", "2", "--h", "0"], "16"),
])
def test_count(capsys, argv, want):
    code, out, _ = run(capsys, *argv)
    assert code == 0 and out.strip() == want


def test_count_errors(capsys):
    code, _, err = run(capsys, "count", "fprime", "--q", "2", "--n", "3", "--t", "2", "--l", "4")
    assert code == 2 and "t <= n-2" in err
    assert run(capsys, "count", "gauss", "--a", "4")[0] == 64
    assert run(capsys, "count", "gauss", "--a", "4", "--b", "1", "--q", "2", "--t", "1")[0] == 64
    with pytest.raises(SystemExit) as exc:
        main(["count", "gauss", "--a", "x"])
    assert exc.value.code == 64


def test_parse_errors_exit_64(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["nope"])
    assert exc.value.code == 64
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--lemma", "L3.2", "--suite", "default"])
    assert exc.value.code == 64
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--lemma", "L3.2", "--q", "2..x"])
    assert exc.value.code == 64


@pytest.fixture
def h1_file(tmp_path, capsys):
    path = tmp_path / "f.json"
    code, out, _ = run(capsys, "family", "build", "--kind", "h1", "--q", "2", "--n", "3", "--t", "1", "--l", "4",
                       "--out", str(path))
    assert code == 0 and out.strip() == "92"
    return path


def test_family_check(capsys, h1_file):
    code, out, _ = run(capsys, "family", "check", "--in", str(h1_file), "--t", "1", "--format", "json")
    rec = json.loads(out)
    assert code == 0
    assert rec == {"size": 92, "t": 1, "t_intersecting": True, "common_dim": 0, "trivial": False,
                   "tau_t": 2, "maximal": True}


def test_family_check_one_removed(capsys, h1_file, tmp_path):
    rec = json.loads(h1_file.read_text())
    rec["members"].pop(10)
    smaller = tmp_path / "g.json"
    smaller.write_text(json.dumps(rec))
    code, out, _ = run(capsys, "family", "check", "--in", str(smaller))
    assert code == 0 and "maximal=false" in out and "size=91" in out


def test_family_inputs(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "family", "check", "--in", str(bad))[0] == 65
    assert run(capsys, "family", "check", "--in", str(tmp_path / "missing.json"))[0] == 65
    code, _, err = run(capsys, "family", "build", "--kind", "h2", "--q", "2", "--n", "3", "--t", "1", "--l", "4", "--c", "6")
    assert code == 2 and "BadC" in err
    code, out, _ = run(capsys, "family", "build", "--kind", "h3", "--q", "2", "--n", "3", "--t", "1", "--l", "4",
                       "--gen", "Z=1000000,0100000,0001000")
    assert code == 0 and out.strip() == "64"
    code, _, _ = run(capsys, "family", "build", "--kind", "h3", "--q", "2", "--n", "3", "--t", "1", "--l", "4",
                     "--gen", "Z=1000000,0001000,0000100")
    assert code == 2
    code, _, _ = run(capsys, "family", "build", "--kind", "h1", "--q", "2", "--n", "3", "--t", "1", "--l", "4",
                     "--budget", "5")
    assert code == 3


def test_verify_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--lemma", "L4.3", "--q", "2", "--n", "3", "--t", "1", "--l", "4")
    assert code == 0 and json.loads(out)["summary"]["fail"] == 0
    code, out, _ = run(capsys, "verify", "--lemma", "L2.1", "--q", "2", "--n", "2", "--l", "2", "--format", "text")
    assert code == 0 and "FAIL" not in out and "L2.1" in out
    code, _, _ = run(capsys, "verify", "--lemma", "L3.3", "--q", "2", "--n", "3", "--t", "1", "--l", "4")
    assert code == 3
    code, _, _ = run(capsys, "verify", "--lemma", "L4.3", "--budget", "10")
    assert code == 3
    dest = tmp_path / "r.csv"
    code, out, _ = run(capsys, "verify", "--lemma", "L3.2", "--q", "2,3", "--n", "3..4", "--format", "csv",
                       "--out", str(dest))
    assert code == 0 and out == ""
    assert dest.read_text().splitlines()[0].startswith("lemma,check,params")
    assert run(capsys, "verify", "--suite", "default", "--q", "2")[0] == 64


def test_verify_failure_exit(capsys, monkeypatch):
    from qxfam import verify
    monkeypatch.setattr(verify.qc, "h3_size", lambda *a: 0)
    code, _, _ = run(capsys, "verify", "--lemma", "L3.2", "--q", "2", "--n", "3", "--t", "1", "--l", "4")
    assert code == 1


def test_json_output_is_reproducible(capsys):
    argv = ["verify", "--lemma", "L4.1", "--q", "2", "--n", "2", "--l", "2"]
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv, "--threads", "3")[1]
    assert first == second


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qxfam", "count", "theta", "--a", "3", "--q", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "7"

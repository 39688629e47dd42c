import subprocess
import sys

import pytest

from higher_ar.cli import main, parse_sequence_file


@pytest.fixture
def quivers(tmp_path):
    a2 = tmp_path / "a2.q"
    a2.write_text("vertices = 2\narrow 1 -> 2\n")
    kron = tmp_path / "kron.q"
    kron.write_text("vertices = 2\narrow 1 -> 2\narrow 1 -> 2\n")
    bad = tmp_path / "bad.q"
    bad.write_text("vertices = 2\narrow 1 => 2\n")
    return {"a2": str(a2), "kron": str(kron), "bad": str(bad)}


def test_indecs_text(capsys):
    assert main(["indecs", "a5.q"]) == 0
    out = capsys.readouterr().out
    assert "M5  slice 1  dims (11110)" in out
    assert "slice 0: P1 P2 P3 P4 P5" in out
    assert "labels: 15  homogeneous: l = 3" in out


def test_indecs_dot_and_arquiver(capsys):
    assert main(["indecs", "a5.q", "--format", "dot"]) == 0
    dot = capsys.readouterr().out
    assert main(["arquiver", "a5.q"]) == 0
    assert capsys.readouterr().out == dot
    assert '"P2" -> "M5" [style=dotted];' in dot


def test_arseq_and_verify_roundtrip(tmp_path, capsys):
    out = tmp_path / "c.seq"
    assert main(["arseq", "a5.q", "--start", "P2", "-o", str(out)]) == 0
    text = capsys.readouterr().out
    assert "deg 1: P1 ⊕ M3" in text and "PASS" in text
    assert main(["verify", str(out)]) == 0
    assert "verification (n = 1): PASS" in capsys.readouterr().out


def test_tensor_seq_two_fold(tmp_path, capsys):
    out = tmp_path / "e.seq"
    assert main(["tensor-seq", "a5.q", "a5.q", "--start", "P2(x)P5", "--slice", "0", "-o", str(out)]) == 0
    text = capsys.readouterr().out
    assert "deg 3: P2⊗P5" in text
    assert "F_X exact for all X: pass (75 labels checked)" in text
    _, cat, c = parse_sequence_file(out.read_text())
    assert len(cat.labels) == 75 and c.support == (0, 3)
    assert main(["verify", str(out)]) == 0


def test_verify_rejects_tampered_file(tmp_path, capsys):
    out = tmp_path / "c.seq"
    main(["arseq", "a5.q", "--start", "P2", "-o", str(out)])
    capsys.readouterr()
    out.write_text(out.read_text().replace("d = [(-1) (1)]", "d = [(0) (1)]"))
    assert main(["verify", str(out)]) == 6
    assert "error: VerificationFailed" in capsys.readouterr().err


def test_error_exit_codes(quivers, tmp_path, capsys):
    assert main(["indecs", quivers["bad"]]) == 2
    assert main(["indecs", str(tmp_path / "missing.q")]) == 2
    assert main(["indecs", quivers["kron"]]) == 3
    assert main(["tensor-seq", quivers["a2"], "a5.q", "--start", "P2(x)P2"]) == 4
    assert main(["tensor-seq", "a5.q", "a5.q", "--start", "P2(x)M5"]) == 5
    assert main(["tensor-seq", "a5.q", "a5.q", "--start", "P2(x)P5", "--slice", "1"]) == 5
    assert main(["tensor-seq", "a5.q", "a5.q", "--start", "P2"]) == 2
    assert main(["arseq", "a5.q", "--start", "I3"]) == 1
    err = capsys.readouterr().err
    for name in ("ParseError", "RepInfinite", "HeterogeneousFactors", "SliceMismatch", "Injective"):
        assert f"error: {name}" in err


def test_selftest(capsys):
    assert main(["selftest"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 9
    assert all(": pass (" in line for line in lines)


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "higher_ar", "indecs", "a5.q"],
                         capture_output=True, text=True, timeout=120)
    assert res.returncode == 0
    assert res.stdout.count(" slice ") >= 15


def test_three_fold_tensor_seq(capsys):
    assert main(["tensor-seq", "a5.q", "a5.q", "a5.q", "--start", "P2⊗P5⊗P4"]) == 0
    text = capsys.readouterr().out
    sizes = [len(line.split(":", 1)[1].split(";")[0].split("⊕"))
             for line in text.splitlines() if line.startswith("deg ")]
    assert sizes == [1, 3, 4, 3, 1]
    assert "(375 labels checked)" in text


def test_output_is_deterministic(capsys):
    runs = []
    for _ in range(2):
        main(["tensor-seq", "a5.q", "a5.q", "--start", "P2(x)P5"])
        main(["indecs", "a5.q", "--format", "dot"])
        runs.append(capsys.readouterr().out)
    assert runs[0] == runs[1]

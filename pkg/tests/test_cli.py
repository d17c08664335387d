import json

import pytest

from raagstab.cli import run

C5_TEXT = "vertex a\nvertex b\nvertex c\nvertex d\nvertex e\nedge a b\nedge b c\nedge c d\nedge d e\nedge e a\n"


@pytest.fixture
def files(tmp_path):
    (tmp_path / "c5.txt").write_text(C5_TEXT)
    (tmp_path / "edge.txt").write_text("vertex x\nvertex y\nedge x y\n")
    (tmp_path / "c4.txt").write_text("vertex a\nvertex b\nvertex c\nvertex d\nedge a b\nedge b c\nedge c d\nedge d a\n")
    (tmp_path / "gens.txt").write_text("# one generator\na b c d\n")
    return tmp_path


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_classify(files, capsys):
    assert run(["--format", "json", "classify", str(files / "c5.txt"), "a c"]) == 0
    assert _json(capsys)["results"][0]["kind"] == "elliptic"


def test_stability_and_verify_roundtrip(files, capsys):
    cert = files / "cert.json"
    code = run(["--format", "json", "stability", str(files / "c5.txt"),
                "--gens-file", str(files / "gens.txt"), "--cert-out", str(cert)])
    out = _json(capsys)
    assert code == 0 and out["verdict"] == "stable" and out["certificate"]["schema"] == "raag-cert/1"
    assert run(["verify-cert", str(cert)]) == 0
    assert "valid" in capsys.readouterr().out
    data = json.loads(cert.read_text())
    data["evidence"]["cycles_scanned"] += 1
    cert.write_text(json.dumps(data))
    assert run(["verify-cert", str(cert)]) == 1


def test_morse_budget_exit(files, capsys):
    assert run(["--budget", "10000", "morse", str(files / "c5.txt"), "-g", "a"]) == 3


def test_morse_finite_index(files, capsys):
    assert run(["--format", "json", "morse", str(files / "edge.txt"), "-g", "x^2", "-g", "y"]) == 0
    assert _json(capsys)["route"] == "via_finite_index"


def test_input_errors(files, capsys):
    assert run(["classify", str(files / "c5.txt"), "a z"]) == 2
    assert run(["classify", str(files / "missing.txt"), "a"]) == 2
    assert run(["stability", str(files / "c4.txt"), "-g", "a"]) == 2
    assert run(["stability", str(files / "c5.txt")]) == 2
    assert run(["--budget", "0", "nf", str(files / "c5.txt"), "a"]) == 2
    (files / "junk.json").write_text("not json")
    assert run(["verify-cert", str(files / "junk.json")]) == 2


def test_other_commands(files, capsys):
    c5 = str(files / "c5.txt")
    assert run(["check-graph", c5]) == 0
    assert run(["nf", c5, "a b a^-1", "--canonical"]) == 0
    assert run(["star-length", c5, "a b c d"]) == 0
    assert run(["cosets", str(files / "edge.txt"), "-g", "x^2", "-g", "y^3", "--csv", str(files / "t.csv")]) == 0
    assert (files / "t.csv").read_text().startswith("coset,generator,image")
    assert run(["--budget", "5", "cosets", c5, "-g", "a", "--checkpoint", str(files / "ck.json")]) == 3
    assert run(["cosets", str(files / "edge.txt"), "-g", "x^2", "--resume", str(files / "ck.json")]) == 2
    assert run(["complex", c5, "saturate", "-g", "a b c d", "-o", str(files / "cx.txt")]) == 0
    assert run(["complex", c5, "verify", "--complex", str(files / "cx.txt")]) == 0
    capsys.readouterr()
    assert run(["--format", "json", "probe", c5, "-g", "a", "--lambda-max", "1", "--epsilon-max", "0", "--delta", "1"]) == 0
    assert _json(capsys)["label"] == "HEURISTIC"

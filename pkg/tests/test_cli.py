from __future__ import annotations

import json
import subprocess
import sys

import pytest

from alphadim.cli import EXIT_CONFIG, EXIT_NUMERICAL, idempotence_check, main
from alphadim.report import config_hash

from conftest import GOLDEN_LOG


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    lines = [ln for ln in text.strip().splitlines() if not ln.startswith("#")]
    return [ln.split(",") for ln in lines[1:]]


def test_entropy_golden_file(tmp_path, capsys):
    path = tmp_path / "golden.json"
    path.write_text("[[1, 1], [1, 0]]")
    code, out, err = run(["entropy", "--matrix", str(path), "--alpha", "0.5", "--eps", "0.3679", "--n", "200"], capsys)
    assert code == 0
    last = rows(out)[-1]
    assert last[1] == "200"
    assert float(last[2]) == pytest.approx(1.5 * GOLDEN_LOG, abs=0.002)
    assert out.rstrip().splitlines()[-1].startswith("# config-hash=")
    assert "entropy: alpha=0.5" in err


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"command": "pressure", "matrix": "full2", "h": "symbols:0,3", "alpha": "1",
                               "method": "transfer"}))
    code, out, _ = run(["--config", str(cfg)], capsys)
    assert code == 0 and float(rows(out)[0][2]) == pytest.approx(3.402826555965505, abs=1e-10)
    code, out2, _ = run(["--config", str(cfg), "pressure", "--alpha", "0"], capsys)
    assert float(rows(out2)[0][2]) == pytest.approx(3.048587351573742, abs=1e-10)
    assert out.splitlines()[-1] != out2.splitlines()[-1]


def test_out_and_svg(tmp_path, capsys):
    out, svg = tmp_path / "o.csv", tmp_path / "o.svg"
    code, stdout, _ = run(["bowen-root", "--matrix", "golden", "--phi", "const:2", "--alpha", "0,1",
                           "--out", str(out), "--svg", str(svg)], capsys)
    assert code == 0 and stdout == ""
    vals = [float(r[2]) for r in rows(out.read_text())]
    assert vals == pytest.approx([GOLDEN_LOG / 2, GOLDEN_LOG], abs=1e-8)
    assert svg.read_text().startswith("<svg")


def test_hash_ignores_output_paths():
    base = {"command": "entropy", "alpha": "0"}
    assert config_hash(base) == config_hash({**base, "out": "a.csv", "svg": "b.svg"})
    assert config_hash(base) != config_hash({**base, "alpha": "1"})


def test_threads_keep_grid_order(monkeypatch, capsys):
    argv = ["entropy", "--alpha", "0,0.5,1,2", "--n", "40"]
    _, serial, _ = run(argv, capsys)
    monkeypatch.setenv("ALPHADIM_THREADS", "4")
    _, threaded, _ = run(argv, capsys)
    assert serial == threaded


def test_exit_codes(tmp_path, capsys):
    assert run(["entropy", "--matrix", "missing.json"], capsys)[0] == EXIT_CONFIG
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"command": "entropy", "colour": "red"}))
    assert run(["--config", str(bad)], capsys)[0] == EXIT_CONFIG
    assert run(["bowen-root", "--phi", "symbols:-1,1"], capsys)[0] == EXIT_NUMERICAL
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "nope"])
    assert exc.value.code == 2


def test_local_entropy_and_spectrum(capsys):
    code, out, _ = run(["local-entropy", "--measure", "bernoulli:0.3,0.7", "--point", "|01", "--alpha", "1"], capsys)
    assert code == 0 and float(rows(out)[0][1]) == pytest.approx(1.5606477482646686, abs=1e-10)
    code, out, _ = run(["spectrum", "--levels", "0.25", "--alpha", "1"], capsys)
    assert float(rows(out)[0][4]) == pytest.approx(2 * 0.5623351446188083, abs=1e-6)


def test_idempotence():
    assert idempotence_check().ok


def test_console_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "alphadim.cli", "dimension", "--matrix", "golden"],
                         capture_output=True, text=True, check=True)
    assert float(rows(res.stdout)[0][2]) == pytest.approx(GOLDEN_LOG, abs=0.02)

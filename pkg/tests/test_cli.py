import json
import subprocess
import sys

import pytest

from hamwheel.cli import derive_seed, main
from hamwheel.generators import petersen
from hamwheel.io import encode_graph6, write_edgelist


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip().startswith("{") else out)


def test_count_complete4(capsys):
    code, rep = run(capsys, "count", "--family", "complete:4")
    assert code == 0
    assert rep["total"] == 5 and rep["schema"] == "1" and rep["command"] == "count"
    assert rep["input"] == {"n": 4, "m": 6, "graph6": "C~"}
    assert "elapsed_ms" not in json.dumps({k: v for k, v in rep.items() if k != "timing"})


def test_crux_complete11(capsys):
    code, rep = run(capsys, "crux", "--family", "complete:11", "--alpha", "1/5")
    assert code == 0 and rep["value"] == 3


def test_crux_scaling_flag(capsys):
    code, rep = run(capsys, "crux", "--family", "complete:11", "--alpha", "1/5", "--alpha-prime", "1/2")
    assert code == 0 and rep["scaling"]["holds"] is True


@pytest.mark.slow
def test_census_7_3(capsys):
    code, rep = run(capsys, "census", "--nmax", "7", "--mindeg", "3")
    assert code == 0
    assert rep["min_h"] == 5 and rep["minimizer"] == "K4"
    assert rep["min_h_excluding_clique"] == 10


def test_census_small(capsys):
    code, rep = run(capsys, "census", "--nmax", "5", "--mindeg", "3")
    assert code == 0 and rep["min_h"] == 5 and rep["minimizer"] == "K4"


def test_bound(capsys):
    code, rep = run(capsys, "bound", "--n", "1e6", "--t", "100")
    assert code == 0 and rep["exponent_below_one"] is True


def test_extract_and_failure_exit_code(capsys):
    code, rep = run(capsys, "extract", "--family", "complete:16")
    assert code == 0 and rep["certificate"]["certified"]
    code, rep = run(capsys, "extract", "--family", "two_cliques_bridge:8", "--eps1", "2", "--k", "4", "--no-strict")
    assert code == 0 and len(rep["vertices"]) == 8


def test_beta_exit_codes(capsys):
    code, rep = run(capsys, "beta", "--family", "complete:12", "--beta", "1/12")
    assert code == 0 and rep["bound"]["bound"] == "11"
    code, rep = run(capsys, "beta", "--family", "cycle:20", "--beta", "3/10")
    assert code == 2 and rep["beta_check"]["holds"] is False


def test_wheel_command(capsys):
    code, rep = run(capsys, "wheel", "--family", "complete:16")
    assert code == 0 and int(rep["lower_bound"]) == 2 ** (rep["ell"] - 1)
    code, rep = run(capsys, "wheel", "--family", "cycle:5")
    assert code == 2 and rep["error"] == "pipeline_failed"


def test_spectral_command(capsys):
    code, rep = run(capsys, "spectral", "--family", "petersen")
    assert code == 0 and abs(rep["spectral"]["lambda"] - 2) < 1e-8 and rep["mixing"]["passed"] == 100


def test_usage_errors(capsys):
    assert main(["count", "--family", "nonsense:3"]) == 1
    assert main(["count"]) == 1
    with pytest.raises(SystemExit) as info:
        main(["count", "--bogus"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main(["crux", "--family", "complete:4", "--alpha", "x"])
    assert info.value.code == 1


def test_determinism_modulo_timing(capsys):
    argv = ["wheel", "--family", "random_regular:200,3", "--seed", "7"]
    _, a = run(capsys, *argv)
    _, b = run(capsys, *argv)
    a.pop("timing")
    b.pop("timing")
    assert a == b
    _, c = run(capsys, "count", "--family", "gnp:10,0.5", "--seed", "1")
    _, d = run(capsys, "count", "--family", "gnp:10,0.5", "--seed", "2")
    assert c["input"] != d["input"] or c["seed"] != d["seed"]


def test_derived_seeds_are_independent():
    assert derive_seed(1, "family") != derive_seed(1, "wheel")
    assert derive_seed(1, "family") == derive_seed(1, "family")


def test_threads_env_var(capsys, monkeypatch):
    monkeypatch.setenv("HAMWHEEL_THREADS", "3")
    code, rep = run(capsys, "count", "--family", "complete:5")
    assert code == 0 and rep["budget"]["threads"] == 3
    code, rep = run(capsys, "count", "--family", "complete:5", "--threads", "2")
    assert rep["budget"]["threads"] == 2
    monkeypatch.setenv("HAMWHEEL_THREADS", "many")
    assert main(["count", "--family", "complete:5"]) == 1


def test_file_inputs_and_out(tmp_path, capsys):
    g6 = tmp_path / "p.g6"
    g6.write_bytes(encode_graph6(petersen()) + b"\n")
    el = tmp_path / "p.txt"
    el.write_text(write_edgelist(petersen()))
    out = tmp_path / "r.json"
    assert main(["count", "--graph6", str(g6), "--out", str(out)]) == 0
    a = json.loads(out.read_text())
    assert main(["count", "--edgelist", str(el), "--out", str(out)]) == 0
    b = json.loads(out.read_text())
    assert a["total"] == b["total"] == 0 + a["total"]
    assert a["input"] == b["input"]
    bad = tmp_path / "bad.txt"
    bad.write_text("3 2\n0 1\n")
    assert main(["count", "--edgelist", str(bad)]) == 1
    assert main(["count", "--graph6", str(tmp_path / "missing.g6")]) == 1


def test_text_format(capsys):
    code, out = run(capsys, "count", "--family", "complete:4", "--format", "text")
    assert code == 0 and "total: 5" in out


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "hamwheel.cli", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("hamwheel ")

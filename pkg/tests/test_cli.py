import json
import subprocess
import sys

import numpy as np
import pytest

from graphdenoise.cli import main
from graphdenoise.generators import random_graph
from graphdenoise.serialize import read_filtration

TRIANGLES = "a b 1\nb c 1\na c 1\nx y 1\ny z 1\nx z 1\n"


@pytest.fixture
def tri(tmp_path):
    p = tmp_path / "tri.txt"
    p.write_text(TRIANGLES)
    return p


@pytest.fixture
def graph64(tmp_path):
    p = tmp_path / "g64.txt"
    p.write_text(random_graph(64, seed=2).to_edge_list())
    return p


def load(path):
    return json.loads(path.read_text(encoding="utf-8"))


def test_cluster_two_triangles(tri, tmp_path):
    out = tmp_path / "c"
    assert main(["cluster", "--graph", str(tri), "--sizes", "2", "--out-dir", str(out)]) == 0
    filt = read_filtration(out)
    assert {frozenset(c) for c in filt[1].clusters} == {frozenset("abc"), frozenset("xyz")}
    man = load(out / "manifest.json")
    assert man["level_sizes"] == [1, 2] and man["config"]["sizes"] == [2]


def test_cluster_single_and_random(tri, tmp_path):
    assert main(["cluster", "--graph", str(tri), "--sizes", "1", "--out-dir", str(tmp_path / "o")]) == 0
    assert read_filtration(tmp_path / "o").sizes == [1]
    args = ["cluster", "--graph", str(tri), "--sizes", "2,4", "--method", "random", "--seed", "3"]
    assert main(args + ["--out-dir", str(tmp_path / "r1")]) == 0
    assert main(args + ["--out-dir", str(tmp_path / "r2")]) == 0
    for t in range(3):
        assert (tmp_path / "r1" / f"level_{t}.csv").read_text() == (tmp_path / "r2" / f"level_{t}.csv").read_text()


def test_cluster_bad_path(tmp_path, capsys):
    code = main(["cluster", "--graph", str(tmp_path / "missing.txt"), "--out-dir", str(tmp_path)])
    assert code == 2
    assert capsys.readouterr().err.startswith("error: FileNotFoundError:")


def test_cluster_invalid_sizes(tri, tmp_path, capsys):
    code = main(["cluster", "--graph", str(tri), "--sizes", "9", "--out-dir", str(tmp_path)])
    assert code == 1
    assert "SizesOutOfRangeError" in capsys.readouterr().err


def test_config_errors_exit_one(capsys):
    with pytest.raises(SystemExit) as e:
        main(["simulate-martingale", "--epsilon", "x", "--out", "o"])
    assert e.value.code == 1
    assert "error: ConfigError:" in capsys.readouterr().err


@pytest.mark.parametrize("profile, eps, argmin", [("sin", 0.2, None), ("constant", 0.2, 0), ("sin", 0.0, 10)])
def test_simulate_martingale(tmp_path, profile, eps, argmin):
    out = tmp_path / "m"
    assert main(["simulate-martingale", "--profile", profile, "--epsilon", str(eps), "--out", str(out)]) == 0
    v = load(out / "verdict.json")
    assert v["config"]["T"] == 10 and v["config"]["trials"] == 200 and v["config"]["seed"] == 0
    if argmin is None:
        assert v["verdict"]["interior"] is True
    else:
        assert v["verdict"]["argmin_index"] == argmin
    rows = (out / "curve.csv").read_text().splitlines()
    assert rows[0] == "param,mean_error,std_error,trials" and len(rows) == 12


def test_simulate_martingale_deterministic(tmp_path):
    for name in ("a", "b"):
        assert main(["simulate-martingale", "--profile", "step", "--trials", "50",
                     "--seed", "4", "--out", str(tmp_path / name)]) == 0
    assert (tmp_path / "a" / "curve.csv").read_bytes() == (tmp_path / "b" / "curve.csv").read_bytes()
    assert (tmp_path / "a" / "verdict.json").read_bytes() != b""


def test_simulate_martingale_graph_profile_file(graph64, tmp_path):
    sig = tmp_path / "sig.csv"
    nodes = random_graph(64, seed=2).nodes
    sig.write_text("node,value\n" + "".join(f"{n},{i % 7}\n" for i, n in enumerate(nodes)))
    out = tmp_path / "gm"
    assert main(["simulate-martingale", "--graph", str(graph64), "--sizes", "4,16",
                 "--profile", "from-file", "--profile-file", str(sig), "--out", str(out)]) == 0
    v = load(out / "verdict.json")
    assert v["cluster_counts"] == [1, 4, 16] and v["norm_scale"] == 1.0
    assert main(["simulate-martingale", "--graph", str(graph64), "--profile", "from-file",
                 "--sizes", "4", "--out", str(out)]) == 1


def test_simulate_kernel(graph64, tmp_path):
    out = tmp_path / "k"
    assert main(["simulate-kernel", "--graph", str(graph64), "--grid", "auto:8", "--out", str(out)]) == 0
    v = load(out / "verdict.json")
    assert len(v["alpha"]) == 8 and v["max_abs_z"] <= 4
    assert (out / "closed_form.csv").exists() and (out / "mc_curve.csv").exists()


def test_simulate_kernel_noiseless_matches_closed_form(graph64, tmp_path):
    out = tmp_path / "k0"
    assert main(["simulate-kernel", "--graph", str(graph64), "--epsilon", "0",
                 "--grid", "log:0.1:10:6", "--trials", "5", "--out", str(out)]) == 0
    v = load(out / "verdict.json")
    assert v["mc_mean_error_sq"] == v["closed_form_error_sq"]


def test_simulate_kernel_one_point_grid(graph64, tmp_path, capsys):
    code = main(["simulate-kernel", "--graph", str(graph64), "--grid", "0.5", "--out", str(tmp_path)])
    assert code == 1
    assert "TooFewPointsError" in capsys.readouterr().err


def test_lemma2(tmp_path, capsys):
    out = tmp_path / "l.json"
    assert main(["lemma2", "--T", "8", "--trials", "2000", "--out", str(out)]) == 0
    v = load(out)
    assert len(v["rows"]) == 9 and v["max_abs_z"] <= 4
    assert main(["lemma2", "--trivial-only", "--trials", "100", "--out", str(out)]) == 0
    rows = load(out)["rows"]
    assert len(rows) == 1 and rows[0]["predicted"] == pytest.approx(0.79788, abs=5e-6)
    assert main(["lemma2", "--epsilon", "0", "--trials", "10", "--out", str(out)]) == 1
    assert "NonPositiveEpsilonError" in capsys.readouterr().err


def test_synth_and_evaluate(graph64, tmp_path):
    s1, s2 = tmp_path / "s1", tmp_path / "s2"
    base = ["synth", "--graph", str(graph64), "--sizes", "8", "--effect", "1.5",
            "--noise", "1.0", "--n-samples", "40", "--seed", "2"]
    assert main(base + ["--out", str(s1)]) == 0
    assert main(base + ["--out", str(s2)]) == 0
    for f in ("features.csv", "labels.csv"):
        assert (s1 / f).read_bytes() == (s2 / f).read_bytes()
    assert load(s1 / "synth.json")["planted_clusters"] == 8

    out = tmp_path / "ev"
    code = main(["evaluate", "--graph", str(graph64), "--features", str(s1 / "features.csv"),
                 "--labels", str(s1 / "labels.csv"), "--sizes", "2,8", "--repeats", "3",
                 "--out", str(out)])
    assert code == 0
    rep = load(out / "report.json")
    assert rep["run_config"]["repeats"] == 3 and rep["run_config"]["mode"] == "ppi"
    assert [r["k"] for r in rep["per_size"]] == [2, 8]
    assert (out / "table.csv").read_text().splitlines()[0] == "ppi,2,8"


def test_noise_free_synth_evaluates_perfectly(graph64, tmp_path):
    s = tmp_path / "s"
    assert main(["synth", "--graph", str(graph64), "--sizes", "8", "--noise", "0",
                 "--n-samples", "40", "--out", str(s)]) == 0
    out = tmp_path / "ev"
    assert main(["evaluate", "--graph", str(graph64), "--features", str(s / "features.csv"),
                 "--labels", str(s / "labels.csv"), "--sizes", "8", "--repeats", "2",
                 "--out", str(out)]) == 0
    assert load(out / "report.json")["per_size"][0]["auroc_mean"] == 1.0


def test_evaluate_missing_file(graph64, tmp_path):
    code = main(["evaluate", "--graph", str(graph64), "--features", str(tmp_path / "nope.csv"),
                 "--labels", str(tmp_path / "nope.csv"), "--out", str(tmp_path)])
    assert code == 2


def test_module_entry_point(tri, tmp_path):
    r = subprocess.run([sys.executable, "-m", "graphdenoise", "cluster", "--graph", str(tri),
                        "--sizes", "2", "--out-dir", str(tmp_path / "m")],
                       capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    r = subprocess.run([sys.executable, "-m", "graphdenoise", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip()

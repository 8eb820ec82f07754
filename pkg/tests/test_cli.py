import csv
import json

import numpy as np
import pytest

from deltap.cli import main
from deltap.data import BinaryMatrix
from deltap.files import read_results, write_contingency, write_instances
from deltap.report import LEFT, PLOT_WIDTH

from conftest import GRIEF_SADNESS, JOY_ADMIRATION


@pytest.fixture
def small_matrix(tmp_path):
    rng = np.random.default_rng(7)
    b = rng.random(600) < 0.4
    a = np.where(b, rng.random(600) < 0.6, rng.random(600) < 0.2)
    c = rng.random(600) < 0.5
    d = rng.random(600) < 0.3
    m = BinaryMatrix(("alpha", "beta", "gamma", "delta"), np.column_stack([a, b, c, d]).astype(int))
    path = tmp_path / "m.csv"
    write_instances(m, path)
    return path


def run(*argv):
    return main([str(a) for a in argv])


def test_analyze_contingency(tmp_path):
    src = tmp_path / "t1.csv"
    write_contingency(JOY_ADMIRATION, src)
    out = tmp_path / "out"
    assert run("analyze", "--input", src, "--format", "contingency", "--out-dir", out) == 0
    (row,) = read_results(out / "results.csv")
    assert row["n"] == 4613
    assert {row["var_a"], row["var_b"]} == {"admiration", "joy"}
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["input_sha256"] in (out / "results.csv").read_text()
    assert manifest["config"]["draws"] == 40_000


def test_analyze_all_pairs(small_matrix, tmp_path):
    out = tmp_path / "out"
    assert run("analyze", "--input", small_matrix, "--out-dir", out, "--draws", 5000) == 0
    rows = read_results(out / "results.csv")
    assert len(rows) == 6
    top = rows[0]
    assert {top["var_a"], top["var_b"]} == {"alpha", "beta"} and top["significant"] == 1
    edges = list(csv.reader(l for l in (out / "edges.csv").read_text().splitlines() if not l.startswith("#")))
    assert edges[0] == ["var_a", "var_b", "weight", "p_value"]
    assert ["alpha", "beta"] in [e[:2] for e in edges] or ["beta", "alpha"] in [e[:2] for e in edges]


def test_single_pair_and_unknown_pair(small_matrix, tmp_path):
    out = tmp_path / "out"
    assert run("analyze", "--input", small_matrix, "--pair", "gamma,alpha", "--out-dir", out,
               "--draws", 2000) == 0
    assert len(read_results(out / "results.csv")) == 1
    assert run("analyze", "--input", small_matrix, "--pair", "alpha,nope", "--out-dir", out) == 64


def test_outputs_identical_across_reruns_and_workers(small_matrix, tmp_path):
    names = ("results.csv", "edges.csv", "distances.csv")
    outputs = []
    for i, workers in enumerate((1, 1, 3)):
        out = tmp_path / f"run{i}"
        assert run("analyze", "--input", small_matrix, "--out-dir", out, "--draws", 3000,
                   "--workers", workers, "--seed", 11) == 0
        outputs.append([(out / n).read_bytes() for n in names])
    assert outputs[0] == outputs[1] == outputs[2]


def test_exit_codes(tmp_path, small_matrix):
    out = tmp_path / "out"
    assert run("analyze", "--input", tmp_path / "absent.csv", "--out-dir", out) == 66
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n0,2\n")
    assert run("analyze", "--input", bad, "--out-dir", out) == 65
    assert run("analyze", "--input", small_matrix, "--out-dir", out, "--draws", 10) == 78
    cfg = tmp_path / "bad.ini"
    cfg.write_text("[sampler]\nchains = lots\n")
    assert run("analyze", "--input", small_matrix, "--out-dir", out, "--config", cfg) == 78


def test_out_dir_from_environment(small_matrix, tmp_path, monkeypatch):
    target = tmp_path / "env-out"
    monkeypatch.setenv("DELTAP_OUT_DIR", str(target))
    assert run("analyze", "--input", small_matrix, "--draws", 2000) == 0
    assert (target / "results.csv").exists()


def test_simulate_default_suite(tmp_path):
    out = tmp_path / "sim"
    assert run("simulate", "--out-dir", out, "--draws", 4000) == 0
    hists = sorted(p.name for p in (out / "histograms").glob("*.csv"))
    assert hists == [f"spec{i}.csv" for i in range(8)]
    with open(out / "simulation_summary.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 8
    for p in (out / "histograms").glob("*.csv"):
        body = [l for l in p.read_text().splitlines() if not l.startswith("#")][1:]
        assert sum(int(l.split(",")[2]) for l in body) == 4000


def test_simulate_invalid_spec_names_bound(tmp_path, capsys):
    cfg = tmp_path / "sim.ini"
    cfg.write_text("[spec:bad]\nprob_a = 0.9\nprob_b = 0.5\ndelta_p = 0.3\nn = 100\n")
    assert run("simulate", "--config", cfg, "--out-dir", tmp_path / "o") == 78
    assert "0 <= P(A=1|B=1) <= 1" in capsys.readouterr().err


def test_report_grief_sadness_venn(tmp_path):
    src = tmp_path / "gs.csv"
    write_contingency(GRIEF_SADNESS, src)
    out = tmp_path / "out"
    assert run("analyze", "--input", src, "--format", "contingency", "--out-dir", out) == 0
    assert run("report", "--out-dir", out, "--pair", "grief,sadness") == 0
    venn = (out / "venn.csv").read_text().splitlines()
    assert venn[1:] == ["region,count", "grief only,3", "sadness only,194", "both,8"]
    svg = (out / "bars.svg").read_text()
    row = read_results(out / "results.csv")[0]
    assert f'x="{LEFT + PLOT_WIDTH * min(row["prob_a"], row["prob_a_given_b"]):.2f}"' in svg
    assert run("report", "--out-dir", out, "--pair", "grief,joy") == 64


def test_report_without_significant_pairs(tmp_path):
    rng = np.random.default_rng(0)
    m = BinaryMatrix(("a", "b"), (rng.random((200, 2)) < 0.5).astype(int))
    src = tmp_path / "null.csv"
    write_instances(m, src)
    out = tmp_path / "out"
    assert run("analyze", "--input", src, "--out-dir", out, "--draws", 4000) == 0
    assert read_results(out / "results.csv")[0]["significant"] == 0
    assert run("report", "--out-dir", out) == 0
    assert "No statistically significant pairs" in (out / "bars.svg").read_text()


def test_report_missing_results(tmp_path):
    assert run("report", "--out-dir", tmp_path) == 66

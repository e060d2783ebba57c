import json

import pytest

from xqaoa.cli import main
from xqaoa.graphs import load_graph


@pytest.fixture
def graph16(tmp_path):
    p = tmp_path / "g16.csv"
    assert main(["generate", "--n", "16", "--degree", "3", "--seed", "4", "--optimum", "--out", str(p)]) == 0
    return p


def run_json(capsys, argv):
    assert main(argv) == 0
    return json.loads(capsys.readouterr().out)


def test_generate_records_optimum(graph16):
    g = load_graph(graph16)
    assert g.n == 16 and g.m == 24 and g.optimum is not None


def test_generate_stdout(capsys):
    assert main(["generate", "--n", "6", "--seed", "1"]) == 0
    assert len(capsys.readouterr().out.strip().splitlines()) >= 9


def test_oracle(graph16, capsys):
    doc = run_json(capsys, ["oracle", "--graph", str(graph16)])
    assert doc["cut_value"] == load_graph(graph16).optimum


@pytest.mark.parametrize("variant", ["XEQY", "MA", "QAOA", "QAOA*", "Y", "XY", "CR", "GW"])
def test_solve(graph16, capsys, variant):
    doc = run_json(capsys, ["solve", "--graph", str(graph16), "--variant", variant, "--restarts", "3"])
    opt = doc["optimum"]
    if variant in ("CR", "GW"):
        assert doc["cut"]["cut_value"] <= opt
    else:
        assert 0 < doc["best_value"] <= opt + 1e-9
    if variant == "XEQY":
        assert len(doc["cut"]["assignment"]) == 16


def test_solve_deep_and_shots(tmp_path, capsys):
    p = tmp_path / "g.csv"
    main(["generate", "--n", "8", "--seed", "2", "--out", str(p)])
    doc = run_json(capsys, ["solve", "--graph", str(p), "--variant", "MA", "--p", "2", "--restarts", "2"])
    assert doc["p"] == 2
    doc = run_json(capsys, ["solve", "--graph", str(p), "--variant", "QAOA", "--shots", "128",
                            "--restarts", "1", "--max-evals", "100"])
    assert "best_value" in doc


def test_certify_gw(graph16, capsys):
    doc = run_json(capsys, ["certify-gw", "--graph", str(graph16), "--restarts", "50"])
    assert doc["holds"] and doc["certificate"]["sdp_value"] >= doc["best_rounded_cut"]["cut_value"]


def test_bench_variants_writes_files(tmp_path, capsys):
    out = tmp_path / "run"
    doc = run_json(capsys, ["bench-variants", "--n", "8", "--instances", "2", "--restarts", "2",
                            "--variant", "XEQY", "--variant", "CR", "--out", str(out)])
    assert set(doc["median_ratio"]) == {"XEQY@p1", "CR@p1"}
    assert (out / "variants.csv").exists() and (out / "variants.json").exists()


def test_bench_transition(capsys):
    doc = run_json(capsys, ["bench-transition", "--n", "8", "--restarts", "3"])
    assert doc["runs"] == 3


def test_bench_depth(capsys):
    doc = run_json(capsys, ["bench-depth", "--n", "6", "--restarts", "2", "--p", "2", "--variant", "QAOA"])
    assert set(doc["median_ratio"]) == {"QAOA@p1", "QAOA@p2"}


def test_errors_exit_2(tmp_path, capsys):
    assert main(["oracle", "--graph", str(tmp_path / "missing.csv")]) == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("0,0,1\n")
    assert main(["solve", "--graph", str(bad)]) == 2
    assert main(["bench-variants", "--n", "40"]) == 2
    assert "error:" in capsys.readouterr().err


def test_unknown_variant_rejected():
    with pytest.raises(SystemExit):
        main(["solve", "--graph", "x.csv", "--variant", "ZZ"])

"""End-to-end tests of the command-line interface, driven through main(argv)."""

from __future__ import annotations

import csv
import json
import math
import subprocess

import pytest

import support as sp
from loopgas import (
    apply_channel,
    bethe_free_energy,
    brute_force_log_partition,
    load_graph,
    save_graph,
    solve_fixed_point,
)
from loopgas.cli import _instance_seeds, _sample_ensemble, main
from loopgas.exact import codeword_count_gf2

LN2 = math.log(2.0)


def _gen(tmp_path, name, *args):
    path = tmp_path / name
    assert main(["gen", *args, "--out", str(path)]) == 0
    return str(path)


def _ldpc_file(tmp_path, l=3, r=4, n=4, seed=2):
    return _gen(
        tmp_path, f"ldpc_{l}_{r}_{n}_{seed}.json",
        "--ensemble", "ldpc-regular",
        "--l", str(l), "--r", str(r), "--n", str(n), "--seed", str(seed),
    )


def _sparse_file(tmp_path, seed=3):
    return _gen(
        tmp_path, f"sparse_{seed}.json",
        "--ensemble", "ldpc-regular",
        "--l", "2", "--r", "4", "--n", "6", "--seed", str(seed),
    )


# ---------------------------------------------------------------------------
# gen


def test_gen_writes_loadable_graphs(tmp_path):
    path = _ldpc_file(tmp_path)
    doc = json.loads(open(path).read())
    assert doc["schema_version"] == "1"
    assert doc["weights"]["kind"] == "ldpc"
    assert len(doc["edges"]) == 12
    graph = load_graph(path)
    assert graph.n == 4 and graph.m == 3

    ldgm = _gen(
        tmp_path, "ldgm.json",
        "--ensemble", "ldgm", "--lambda", "3:1.0", "--p-dist", "6:1.0",
        "--n", "6", "--seed", "1",
    )
    doc = json.loads(open(ldgm).read())
    assert doc["weights"]["kind"] == "ldgm"
    assert len(doc["edges"]) == 18

    gen = _gen(
        tmp_path, "general.json",
        "--ensemble", "general-regular",
        "--l", "3", "--r", "4", "--n", "4", "--beta", "0.2", "--seed", "5",
    )
    doc = json.loads(open(gen).read())
    assert doc["weights"]["kind"] == "general"
    assert doc["weights"]["beta"] == 0.2
    graph = load_graph(gen)
    for couplings in graph.weights.couplings:
        assert abs(math.fsum(abs(j) for _s, j in couplings) - 1.0) <= 1e-12


def test_gen_validation_exit_codes(tmp_path):
    out = str(tmp_path / "x.json")
    # ldgm without its distributions
    assert main(["gen", "--ensemble", "ldgm", "--n", "6", "--out", out]) == 2
    # general-regular without beta
    assert main([
        "gen", "--ensemble", "general-regular",
        "--l", "3", "--r", "4", "--n", "4", "--out", out,
    ]) == 2
    # degree sequence infeasible: n*l not divisible by r
    assert main([
        "gen", "--ensemble", "ldpc-regular",
        "--l", "3", "--r", "6", "--n", "5", "--out", out,
    ]) == 2


# ---------------------------------------------------------------------------
# exact / bp / bethe


def test_exact_matches_library_and_formats(tmp_path):
    path = _sparse_file(tmp_path)
    out = str(tmp_path / "exact.json")
    assert main(["exact", "--graph", path, "--p", "0.4", "--out", out]) == 0
    payload = json.loads(open(out).read())
    graph = apply_channel(load_graph(path), 0.4, 0)
    want = brute_force_log_partition(graph).log_z
    assert abs(payload["log_z"] - want) <= 1e-12
    assert payload["method"] == "bruteforce"
    assert payload["n"] == 6
    assert payload["schema_version"] == "1"

    out_csv = str(tmp_path / "exact.csv")
    assert main([
        "exact", "--graph", path, "--p", "0.4", "--format", "csv", "--out", out_csv,
    ]) == 0
    rows = list(csv.DictReader(open(out_csv)))
    assert len(rows) == 1
    assert abs(float(rows[0]["log_z"]) - want) <= 1e-12


def test_bp_dumps_named_fixed_point_messages(tmp_path):
    path = _sparse_file(tmp_path)
    out = str(tmp_path / "bp.json")
    assert main(["bp", "--graph", path, "--p", "0.4", "--out", out]) == 0
    payload = json.loads(open(out).read())
    assert payload["converged"] is True
    assert payload["residual"] <= 1e-12

    graph = apply_channel(load_graph(path), 0.4, 0)
    result = solve_fixed_point(graph)
    names = set()
    for e, (i, a) in enumerate(graph.edges):
        names.add(f"v{i}->c{a}")
        names.add(f"c{a}->v{i}")
        assert abs(payload["messages"][f"v{i}->c{a}"] - result.messages.var_to_check[e]) <= 1e-15
        assert abs(payload["messages"][f"c{a}->v{i}"] - result.messages.check_to_var[e]) <= 1e-15
    assert set(payload["messages"]) == names


def test_bethe_breakdown_payload(tmp_path):
    path = _sparse_file(tmp_path)
    out = str(tmp_path / "bethe.json")
    assert main(["bethe", "--graph", path, "--p", "0.4", "--out", out]) == 0
    payload = json.loads(open(out).read())
    graph = apply_channel(load_graph(path), 0.4, 0)
    result = solve_fixed_point(graph)
    breakdown = bethe_free_energy(graph, result.messages)
    assert abs(payload["f_bethe"] - breakdown.f_bethe) <= 1e-14
    assert len(payload["check_terms"]) == graph.m
    assert len(payload["var_terms"]) == graph.n
    assert len(payload["edge_terms"]) == graph.edge_count
    recombined = (
        math.fsum(payload["check_terms"])
        + math.fsum(payload["var_terms"])
        - math.fsum(payload["edge_terms"])
    ) / graph.n
    assert abs(recombined - payload["f_bethe"]) <= 1e-13


# ---------------------------------------------------------------------------
# verify-identity


def test_verify_identity_reports_small_residual(tmp_path):
    path = _ldpc_file(tmp_path)
    out = str(tmp_path / "vi.json")
    rc = main([
        "verify-identity", "--graph", path,
        "--p", "0.45", "--channel-seed", "1", "--out", out,
    ])
    assert rc == 0
    payload = json.loads(open(out).read())
    assert payload["residual"] <= 1e-8
    assert payload["bp_residual"] <= 1e-12
    assert payload["polymer_count"] <= payload["loop_count"]
    assert payload["schema_version"] == "1"
    # the small/large split resums to the full loop series
    total = math.exp(payload["ln_loop_sum"])
    assert abs(payload["z_small"] + payload["r_large"] - total) <= 1e-12 * abs(total)
    # single-edge subsets carry no weight at a fixed point
    assert payload["max_dangling_activity"] <= 1e3 * payload["bp_residual"]


def test_verify_identity_on_tree(tmp_path):
    graph = sp.random_tree(7, seed=11, kind="ldpc")
    path = str(tmp_path / "tree.json")
    save_graph(graph, path)
    out = str(tmp_path / "vi.json")
    rc = main([
        "verify-identity", "--graph", path,
        "--p", "0.3", "--channel-seed", "2", "--out", out,
    ])
    assert rc == 0
    payload = json.loads(open(out).read())
    assert payload["loop_count"] == 0
    assert payload["ln_loop_sum"] == 0.0
    assert payload["residual"] <= 1e-10
    assert abs(payload["f_bethe"] - payload["ln_z_exact"] / graph.n) <= 1e-10


def test_verify_identity_tolerance_exit(tmp_path):
    path = _ldpc_file(tmp_path)
    out = str(tmp_path / "vi.json")
    rc = main([
        "verify-identity", "--graph", path,
        "--p", "0.45", "--tolerance", "1e-300", "--out", out,
    ])
    assert rc == 4
    # the report is still written for inspection
    assert json.loads(open(out).read())["residual"] > 0.0


def test_verify_identity_budget_exit(tmp_path):
    path = _ldpc_file(tmp_path)
    rc = main([
        "verify-identity", "--graph", path, "--p", "0.45",
        "--budget", "5", "--out", str(tmp_path / "vi.json"),
    ])
    assert rc == 3


def test_dump_loops_rows_and_type_bounds(tmp_path):
    path = _sparse_file(tmp_path)
    out = str(tmp_path / "vi.json")
    loops_csv = str(tmp_path / "loops.csv")
    # theta = 1 - 2p = 0.08 falls inside the type-bound window
    rc = main([
        "verify-identity", "--graph", path,
        "--p", "0.46", "--channel-seed", "1",
        "--out", out, "--dump-loops", loops_csv,
    ])
    assert rc == 0
    payload = json.loads(open(out).read())
    rows = list(csv.DictReader(open(loops_csv)))
    assert len(rows) == payload["loop_count"]
    graph = load_graph(path)
    for row in rows:
        edge_ids = [int(tok) for tok in row["edges"].split("|")]
        assert all(0 <= e < graph.edge_count for e in edge_ids)
        assert row["bound"] != ""
        assert abs(float(row["activity"])) <= float(row["bound"]) + 1e-12

    # theta = 0.12 leaves the window; the bound column is empty
    rc = main([
        "verify-identity", "--graph", path,
        "--p", "0.44", "--channel-seed", "1",
        "--out", out, "--dump-loops", loops_csv,
    ])
    assert rc == 0
    rows = list(csv.DictReader(open(loops_csv)))
    assert rows and all(row["bound"] == "" for row in rows)


# ---------------------------------------------------------------------------
# series / rate-function


def test_series_csv_and_json_agree(tmp_path):
    path = _sparse_file(tmp_path)
    out_csv = str(tmp_path / "series.csv")
    assert main([
        "series", "--graph", path, "--p", "0.4", "--m-max", "3", "--out", out_csv,
    ]) == 0
    rows = list(csv.DictReader(open(out_csv)))
    assert [row["m"] for row in rows] == ["1", "2", "3"]

    out_json = str(tmp_path / "series.json")
    assert main([
        "series", "--graph", path, "--p", "0.4", "--m-max", "3",
        "--format", "json", "--out", out_json,
    ]) == 0
    payload = json.loads(open(out_json).read())
    assert payload["schema_version"] == "1"
    assert payload["bp_residual"] <= 1e-12
    assert payload["polymer_count"] > 0
    terms = payload["terms"]
    sums = payload["partial_sums"]
    for m, row in enumerate(rows):
        assert abs(float(row["term"]) - terms[m]) <= 1e-15
        assert abs(float(row["partial_sum"]) - sums[m]) <= 1e-15
        assert abs(float(row["q"]) - payload["q"]) <= 1e-15
    running = 0.0
    for term, total in zip(terms, sums):
        running += term
        assert abs(running - total) <= 1e-12


def test_series_budget_exit(tmp_path):
    path = _ldpc_file(tmp_path)
    rc = main([
        "series", "--graph", path, "--p", "0.45", "--m-max", "4",
        "--budget", "20", "--out", str(tmp_path / "series.csv"),
    ])
    assert rc == 3


def test_rate_function_profile_csv(tmp_path):
    out = str(tmp_path / "rate.csv")
    rc = main([
        "rate-function", "--l", "3", "--r", "6",
        "--thetas", "1e-4,1e-3", "--lambda", "1e-3",
        "--starts", "800", "--seed", "0", "--out", out,
    ])
    assert rc == 0
    rows = list(csv.DictReader(open(out)))
    assert len(rows) == 2
    assert list(rows[0]) == ["theta", "value", "x2", "x3", "y2", "y3", "y4", "y5", "y6"]
    assert [float(row["theta"]) for row in rows] == [1e-4, 1e-3]
    values = [float(row["value"]) for row in rows]
    assert values[0] <= values[1] < 0.0


# ---------------------------------------------------------------------------
# trend / entropy


def test_trend_deterministic_across_threads(tmp_path):
    args = [
        "trend", "--ensemble", "ldpc-regular", "--l", "3", "--r", "4",
        "--n-list", "4,8", "--p", "0.45", "--instances", "3", "--seed", "0",
    ]
    one = tmp_path / "t1.csv"
    two = tmp_path / "t2.csv"
    assert main(args + ["--threads", "1", "--out", str(one)]) == 0
    assert main(args + ["--threads", "2", "--out", str(two)]) == 0
    assert one.read_bytes() == two.read_bytes()
    rows = list(csv.DictReader(open(one)))
    assert [row["n"] for row in rows] == ["4", "8"]
    for row in rows:
        assert float(row["fraction_verified"]) == 1.0
        assert float(row["mean_bp_residual"]) <= 1e-10
        assert float(row["mean_gap"]) > 0.0


def test_trend_ldgm_row(tmp_path):
    out = str(tmp_path / "trend.csv")
    rc = main([
        "trend", "--ensemble", "ldgm", "--l", "3", "--r", "6",
        "--n-list", "6", "--p", "0.47", "--instances", "3",
        "--seed", "0", "--threads", "1", "--out", out,
    ])
    assert rc == 0
    rows = list(csv.DictReader(open(out)))
    assert len(rows) == 1
    assert float(rows[0]["fraction_verified"]) == 1.0
    assert float(rows[0]["mean_gap"]) > 0.0


def test_entropy_symmetric_channel_matches_code_dimension(tmp_path):
    out = str(tmp_path / "entropy.json")
    rc = main([
        "entropy", "--ensemble", "ldpc-regular", "--l", "3", "--r", "4",
        "--n", "4", "--p", "0.5", "--instances", "3", "--seed", "1",
        "--threads", "1", "--out", out,
    ])
    assert rc == 0
    payload = json.loads(open(out).read())
    assert payload["schema_version"] == "1"
    assert len(payload["per_instance"]) == 3
    for row in payload["per_instance"]:
        assert row["method"] == "degenerate"
        assert row["patterns"] == 1
        topo_seed, _channel_seed = _instance_seeds(1, 4, row["index"])
        graph = _sample_ensemble("ldpc-regular", 3, 4, 4, topo_seed)
        want = codeword_count_gf2(graph) * LN2 / graph.n
        assert abs(row["h_exact"] - want) <= 1e-10


def test_entropy_exhaustive_average(tmp_path):
    out = str(tmp_path / "entropy.json")
    rc = main([
        "entropy", "--ensemble", "ldgm", "--l", "2", "--r", "4",
        "--n", "4", "--p", "0.4", "--instances", "2", "--seed", "0",
        "--threads", "1", "--exhaustive-limit", "20", "--out", out,
    ])
    assert rc == 0
    payload = json.loads(open(out).read())
    for row in payload["per_instance"]:
        assert row["method"] == "exhaustive"
        assert row["patterns"] >= 2
        assert math.isfinite(row["gap"])
    assert payload["max_abs_gap"] >= payload["mean_abs_gap"] >= 0.0


# ---------------------------------------------------------------------------
# plumbing


def test_argparse_and_io_exit_codes(tmp_path):
    assert main(["bogus"]) == 2
    assert main(["exact"]) == 2
    assert main(["exact", "--graph", str(tmp_path / "missing.json")]) == 2


def test_default_output_is_stdout(tmp_path, capsys):
    path = _sparse_file(tmp_path)
    assert main(["exact", "--graph", path]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["n"] == 6


def test_written_files_use_lf_line_endings(tmp_path):
    path = _ldpc_file(tmp_path)
    out = str(tmp_path / "vi.json")
    loops_csv = str(tmp_path / "loops.csv")
    main([
        "verify-identity", "--graph", path, "--p", "0.45",
        "--out", out, "--dump-loops", loops_csv,
    ])
    for name in (path, out, loops_csv):
        assert b"\r" not in open(name, "rb").read()


def test_console_script_smoke():
    proc = subprocess.run(
        [
            "loopgas", "gen", "--ensemble", "ldpc-regular",
            "--l", "2", "--r", "4", "--n", "6", "--seed", "3",
        ],
        capture_output=True,
        text=True,
        timeout=60,
    )
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["schema_version"] == "1"
    assert len(doc["edges"]) == 12

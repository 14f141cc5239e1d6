import csv
import json

import pytest

from markovia.cli import CSV_COLUMNS, COMMANDS, main, parse_args
from markovia.config import RunConfig

COPIES = [0.5, 0, 0, 0, 0, 0, 0, 0.5]


def model(configs_dir, name):
    return str(configs_dir / f"{name}.json")


def test_every_command_has_csv_columns():
    assert set(COMMANDS) == set(CSV_COLUMNS)


def test_namespace_split_into_options():
    args = parse_args(["ising-converge", "--model", "m.json", "--m", "3", "--seed", "4"])
    config = RunConfig.from_namespace(args)
    assert config.command == "ising-converge"
    assert config.model == "m.json"
    assert config.seed == 4
    assert config.options == {"m": 3, "nmax": 12}


def test_audit_equivalence_exit_code(tmp_path):
    out = tmp_path / "audit.json"
    code = main(
        ["audit-equivalence", "--pmf", "random", "--n", "4", "--trials", "5", "--seed", "7", "--out", str(out)]
    )
    assert code == 0
    data = json.loads(out.read_text())
    assert data["schema"] == "markovia-report/1"
    assert data["verdict"] == "pass"
    assert data["seed"] == 7
    assert [c["name"] for c in data["checks"]] == [f"trial {k}" for k in range(5)]
    assert (tmp_path / "audit.json.sidecar.json").exists()


def test_reports_are_byte_identical_across_runs(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    for path in (first, second):
        argv = ["audit-equivalence", "--pmf", "edge-potential", "--trials", "3", "--seed", "11"]
        assert main(argv + ["--out", str(path)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_check_markov_on_four_cycle(configs_dir):
    assert main(["check-markov", "--model", model(configs_dir, "four_cycle")]) == 0


def test_check_graphoid_reports_intersection_failure(write_json):
    path = str(write_json("copies.json", {"kind": "discrete", "table": COPIES}))
    assert main(["check-graphoid", "--model", path, "--axiom", "P1*"]) == 0
    assert main(["check-graphoid", "--model", path, "--axiom", "P5"]) == 2


def test_gaussian_verify_exit_codes(configs_dir):
    assert main(["gaussian-verify", "--model", model(configs_dir, "ar1")]) == 0
    assert main(["gaussian-verify", "--model", model(configs_dir, "ma1"), "--sizes", "10,20"]) == 3


def test_gaussian_converge_writes_trace(configs_dir, tmp_path):
    trace = tmp_path / "conv.csv"
    code = main(
        ["gaussian-converge", "--model", model(configs_dir, "ar1"), "--steps", "12", "--csv", str(trace)]
    )
    assert code == 0
    with open(trace, newline="") as f:
        rows = list(csv.DictReader(f))
    assert list(rows[0]) == CSV_COLUMNS["gaussian-converge"]
    assert len(rows) == 12


def test_ising_commands(configs_dir, tmp_path):
    table = tmp_path / "exact.csv"
    assert main(["ising-exact", "--model", model(configs_dir, "chain_summable"), "--n", "6", "--csv", str(table)]) == 0
    with open(table, newline="") as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 2**6
    assert sum(float(r["probability"]) for r in rows) == pytest.approx(1.0)

    trace = tmp_path / "f.csv"
    argv = ["ising-converge", "--model", model(configs_dir, "chain_summable"), "--m", "2", "--nmax", "12"]
    assert main(argv + ["--csv", str(trace)]) == 0
    with open(trace, newline="") as f:
        rows = list(csv.DictReader(f))
    assert list(rows[0]) == CSV_COLUMNS["ising-converge"]
    assert {r["v"] for r in rows} == {"00", "01", "10", "11"}


def test_chain_dcp(configs_dir):
    assert main(["chain-dcp", "--model", model(configs_dir, "two_state_chain"), "--trials", "20"]) == 0
    assert main(["chain-dcp", "--n", "8", "--trials", "10", "--seed", "3"]) == 0


def test_counterexamples(configs_dir, tmp_path):
    trace = tmp_path / "parity.csv"
    argv = ["counterexample", "parity", "--model", model(configs_dir, "parity"), "--M", "7"]
    assert main(argv + ["--csv", str(trace)]) == 0
    with open(trace, newline="") as f:
        rows = list(csv.DictReader(f))
    assert list(rows[0]) == CSV_COLUMNS["counterexample"]
    assert main(["counterexample", "theta-shift", "--n", "6"]) == 0
    assert main(["counterexample", "ma-shift", "--n", "6", "--alpha", "0.5"]) == 0


def test_merge_reports_takes_the_worst_verdict(configs_dir, write_json, tmp_path):
    good, bad = tmp_path / "good.json", tmp_path / "bad.json"
    copies = str(write_json("copies.json", {"kind": "discrete", "table": COPIES}))
    assert main(["check-markov", "--model", model(configs_dir, "four_cycle"), "--out", str(good)]) == 0
    assert main(["check-graphoid", "--model", copies, "--axiom", "P5", "--out", str(bad)]) == 2

    merged = tmp_path / "merged.json"
    assert main(["merge-reports", str(good), str(bad), "--out", str(merged)]) == 2
    data = json.loads(merged.read_text())
    assert data["verdict"] == "fail"
    assert main(["merge-reports", str(good)]) == 0


def test_config_errors_exit_one(configs_dir, write_json):
    assert main(["gaussian-verify"]) == 1
    assert main(["gaussian-verify", "--model", "no/such/file.json"]) == 1
    typo = str(write_json("typo.json", {"variant": "ma1", "alpah": 0.5}))
    assert main(["gaussian-verify", "--model", typo]) == 1
    assert main(["audit-equivalence", "--n", "12"]) == 1
    not_a_report = str(write_json("plain.json", {"property": "x"}))
    assert main(["merge-reports", not_a_report]) == 1


def test_usage_errors_exit_one():
    assert main([]) == 1
    assert main(["no-such-command"]) == 1
    assert main(["gaussian-verify", "--sizes", "9,x"]) == 1
    assert main(["counterexample", "ising"]) == 1


def test_help_exits_zero():
    assert main(["--help"]) == 0

import json
import math

import numpy as np
import pytest

from coronawalk.cli import CommandResult, canonical_json, run_cli
from coronawalk.graphs import build_family, dumps_graph, neighborhood_corona, write_graph


@pytest.fixture()
def c4_file(tmp_path):
    path = tmp_path / "c4.json"
    write_graph(build_family("cycle", 4), path)
    return str(path)


@pytest.fixture()
def corona_file(tmp_path):
    path = tmp_path / "c4k5.json"
    write_graph(neighborhood_corona(build_family("cycle", 4), build_family("complete", 5)), path)
    return str(path)


class TestBuild:
    def test_corona_to_stdout(self):
        res = run_cli(["build", "--g1", "cycle:4", "--g2", "complete:5"])
        assert res.exit_code == 0
        data = json.loads(res.payload)
        assert data["n"] == 24
        assert len(data["edges"]) == 4 + 4 * 10 + 2 * 5 * 4

    def test_corona_to_file(self, tmp_path):
        out = tmp_path / "g.json"
        res = run_cli(["build", "--g1", "cycle:4", "--g2", "complete:5", "--out", str(out)])
        assert res.exit_code == 0
        data = json.loads(out.read_text())
        assert data["n"] == 24

    def test_single_family(self):
        res = run_cli(["build", "--g1", "path:3"])
        assert res.exit_code == 0
        assert json.loads(res.payload)["n"] == 3

    def test_bad_family(self):
        assert run_cli(["build", "--g1", "moebius:4"]).exit_code == 2


class TestSpectrum:
    def test_numeric_with_exact_annotations(self, c4_file):
        res = run_cli(["spectrum", "--graph", c4_file])
        assert res.exit_code == 0
        data = json.loads(res.payload)
        assert [e["exact"] for e in data["eigenvalues"]] == ["2", "0", "-2"]
        assert [e["multiplicity"] for e in data["eigenvalues"]] == [1, 2, 1]

    def test_closed_form_corona(self):
        res = run_cli(["spectrum", "--g1", "cycle:4", "--g2", "complete:5"])
        assert res.exit_code == 0
        data = json.loads(res.payload)
        assert sum(e["multiplicity"] for e in data["eigenvalues"]) == 24
        values = {e["value"] for e in data["eigenvalues"]}
        assert "3 + sqrt(21)" in values and "1 - sqrt(29)" in values

    def test_requires_input(self):
        assert run_cli(["spectrum"]).exit_code == 2

    def test_rejects_both_inputs(self, c4_file):
        assert run_cli(["spectrum", "--graph", c4_file, "--g1", "cycle:4"]).exit_code == 2


class TestFidelity:
    def test_csv_format_and_pst_sample(self, c4_file):
        res = run_cli([
            "fidelity", "--graph", c4_file, "--u", "0", "--v", "2",
            "--t-max", str(math.pi), "--steps", "5",
        ])
        assert res.exit_code == 0
        lines = res.payload.strip().split("\n")
        assert lines[0] == "t,fidelity"
        assert len(lines) == 6
        row = dict(zip(("t", "f"), lines[3].split(",")))  # third sample: t = pi/2
        assert float(row["t"]) == pytest.approx(math.pi / 2)
        assert float(row["f"]) == pytest.approx(1.0, abs=1e-12)

    def test_to_file(self, c4_file, tmp_path):
        out = tmp_path / "f.csv"
        res = run_cli([
            "fidelity", "--graph", c4_file, "--u", "0", "--v", "0", "--out", str(out),
        ])
        assert res.exit_code == 0
        assert out.read_text().startswith("t,fidelity\n0,1\n")

    def test_bad_vertex(self, c4_file):
        assert run_cli(["fidelity", "--graph", c4_file, "--u", "0", "--v", "9"]).exit_code == 2


class TestCheckPst:
    def test_c4_antipodal(self, c4_file):
        res = run_cli(["check-pst", "--graph", c4_file, "--u", "0", "--v", "2"])
        assert res.exit_code == 0
        data = json.loads(res.payload)
        assert data["verdict"] == "PST"
        assert data["tau0"] == pytest.approx(math.pi / 2)
        assert data["delta"] == 1 and data["g"] == 2

    def test_no_pst_exit_one(self, c4_file):
        res = run_cli(["check-pst", "--graph", c4_file, "--u", "0", "--v", "1"])
        assert res.exit_code == 1
        assert json.loads(res.payload)["verdict"] == "NoPST"

    def test_self_pair_usage_error(self, c4_file):
        assert run_cli(["check-pst", "--graph", c4_file, "--u", "1", "--v", "1"]).exit_code == 2

    def test_corona_attaches_reports(self):
        res = run_cli(["check-pst", "--g1", "path:3", "--g2", "cycle:3", "--u", "0", "--v", "2"])
        assert res.exit_code == 1
        data = json.loads(res.payload)
        kinds = {r["kind"] for r in data["theorem_reports"]}
        assert "no_periodic_vertex" in kinds


class TestSearchPgst:
    def test_empty_copies(self):
        res = run_cli([
            "search-pgst", "--g1", "cycle:4", "--g2", "empty:1",
            "--u", "0", "--v", "2", "--epsilon", "0.001",
        ])
        assert res.exit_code == 0
        data = json.loads(res.payload)
        assert data["construction"] == "empty_copies"
        assert data["fidelity"] >= 0.999
        assert data["t0"]["coeff_of_pi"] == str(4 * data["alpha"] + 1)

    def test_hypothesis_gate_exit_one(self):
        res = run_cli([
            "search-pgst", "--g1", "cycle:4", "--g2", "empty:2",
            "--u", "0", "--v", "2", "--epsilon", "0.001",
        ])
        assert res.exit_code == 1

    def test_budget_exit_three(self):
        res = run_cli([
            "search-pgst", "--g1", "cycle:4", "--g2", "empty:1",
            "--u", "0", "--v", "2", "--epsilon", "1e-9", "--alpha-max", "50",
        ])
        assert res.exit_code == 3

    def test_cycle4_paper_example(self):
        res = run_cli([
            "search-pgst", "--g1", "cycle:4", "--g2", "complete:5",
            "--u", "0", "--v", "2", "--epsilon", "0.01", "--alpha-max", "1000000",
        ])
        assert res.exit_code == 0
        data = json.loads(res.payload)
        assert data["construction"] == "cycle4_host"
        assert data["fidelity"] >= 0.99

    def test_scan_on_graph_file(self, c4_file):
        res = run_cli([
            "search-pgst", "--graph", c4_file, "--u", "0", "--v", "2",
            "--epsilon", "0.01", "--t-max", "5", "--steps", "5001",
        ])
        assert res.exit_code == 0
        data = json.loads(res.payload)
        assert data["construction"] == "scan"
        assert data["t0"]["float"] == pytest.approx(math.pi / 2, abs=1e-3)

    def test_scan_failure_exit_one(self, tmp_path):
        path = tmp_path / "p3c3.json"
        write_graph(neighborhood_corona(build_family("path", 3), build_family("cycle", 3)), path)
        res = run_cli([
            "search-pgst", "--graph", str(path), "--u", "0", "--v", "2",
            "--epsilon", "1e-6", "--t-max", "50", "--steps", "50001",
        ])
        assert res.exit_code == 1
        assert not json.loads(res.payload)["meets_target"]


class TestVerify:
    def test_pass(self):
        res = run_cli(["verify", "--g1", "complete:3", "--g2", "cycle:4"])
        assert res.exit_code == 0
        data = json.loads(res.payload)
        assert data["passed"] and len(data["checks"]) == 3

    def test_with_matching_file(self, corona_file):
        res = run_cli(["verify", "--g1", "cycle:4", "--g2", "complete:5", "--graph", corona_file])
        assert res.exit_code == 0
        data = json.loads(res.payload)
        assert data["checks"][0]["name"] == "file_matches_construction"
        assert data["checks"][0]["passed"]

    def test_with_mismatched_file(self, c4_file):
        res = run_cli(["verify", "--g1", "cycle:4", "--g2", "complete:5", "--graph", c4_file])
        assert res.exit_code == 1

    def test_strict_tolerance_fails(self):
        res = run_cli(["verify", "--g1", "cycle:4", "--g2", "complete:5", "--amp-tol", "1e-18"])
        assert res.exit_code == 1


class TestUsage:
    def test_unknown_subcommand(self):
        assert run_cli(["frobnicate"]).exit_code == 2

    def test_unknown_flag(self):
        assert run_cli(["build", "--g1", "cycle:4", "--frobnicate"]).exit_code == 2

    def test_missing_file(self):
        assert run_cli(["spectrum", "--graph", "/nonexistent/g.json"]).exit_code == 2

    def test_no_args(self):
        assert run_cli([]).exit_code == 2


class TestJsonRoundTrips:
    def test_graph_payload(self):
        res = run_cli(["build", "--g1", "cycle:4", "--g2", "empty:3"])
        assert canonical_json(json.loads(res.payload)) == res.payload
        # and the canonical graph writer agrees with the CLI payload
        g = neighborhood_corona(build_family("cycle", 4), build_family("empty", 3))
        assert dumps_graph(g) == res.payload

    def test_certificate_payload(self, c4_file):
        res = run_cli(["check-pst", "--graph", c4_file, "--u", "0", "--v", "2"])
        assert canonical_json(json.loads(res.payload)) == res.payload

    def test_witness_payload(self):
        res = run_cli([
            "search-pgst", "--g1", "cycle:4", "--g2", "empty:1",
            "--u", "0", "--v", "2", "--epsilon", "0.01",
        ])
        assert canonical_json(json.loads(res.payload)) == res.payload

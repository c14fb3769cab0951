"""Command-line front end: subcommands, exit codes, and report discipline."""

import json

import pytest

from pandorabox.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv, "--json")
    return code, json.loads(out), err


def strip_timing(report: dict) -> dict:
    trimmed = dict(report)
    trimmed.pop("timing_ms")
    return trimmed


@pytest.fixture
def spr_file(golden_dir):
    return str(golden_dir / "spr_basic.json")


@pytest.fixture
def sqrt_file(golden_dir):
    return str(golden_dir / "sqrt_concave.json")


@pytest.fixture
def example_file(golden_dir):
    return str(golden_dir / "example1.json")


class TestSolveAndOracle:
    def test_solve_reports_the_exact_value(self, capsys, example_file):
        code, report, _ = run_json(capsys, "solve", example_file)
        assert code == 0
        assert report["exit_status"] == 0
        assert report["results"]["expected_payoff"] == pytest.approx(0.625, abs=1e-12)
        assert report["results"]["trace"][0]["history"] == "(start)"

    def test_oracle_matches_solve_on_an_optimal_instance(self, capsys, example_file):
        _, solve_report, _ = run_json(capsys, "solve", example_file)
        code, oracle_report, _ = run_json(capsys, "oracle", example_file)
        assert code == 0
        assert oracle_report["results"]["expected_payoff"] == pytest.approx(
            solve_report["results"]["expected_payoff"], abs=1e-9
        )

    def test_human_output_prints_a_trace(self, capsys, example_file):
        code, out, _ = run_cli(capsys, "solve", example_file)
        assert code == 0
        assert "rule expected payoff" in out
        assert "open 1" in out


class TestCompare:
    def test_optimal_instance_exits_zero(self, capsys, spr_file):
        code, report, _ = run_json(capsys, "compare", spr_file)
        assert code == 0
        assert report["results"]["suboptimal"] is False
        assert report["results"]["worst_gap"] <= 1e-9
        assert len(report["results"]["gaps"]) == 2  # both tie-breaks of two boxes

    def test_counterexample_instance_exits_one(self, capsys, golden_dir):
        code, report, _ = run_json(capsys, "compare", str(golden_dir / "thm4_found.json"))
        assert code == 1
        assert report["results"]["suboptimal"] is True
        assert report["results"]["worst_gap"] > 1e-6

    def test_large_instances_use_the_provided_tie_break_only(self, capsys, tmp_path):
        doc = {
            "schema": 1,
            "utility": {"kind": "max"},
            "boxes": [
                {"cost": 0.2, "atoms": [[0.0, 0.5], [1.0, 0.5]]} for _ in range(6)
            ],
            "tie_break": [6, 5, 4, 3, 2, 1],
        }
        path = tmp_path / "six.json"
        path.write_text(json.dumps(doc))
        code, report, _ = run_json(capsys, "compare", str(path))
        assert code == 0
        assert len(report["results"]["gaps"]) == 1
        assert report["results"]["gaps"][0]["tie_break"] == [6, 5, 4, 3, 2, 1]


class TestCheck:
    def test_sqrt_instance_fails_increment_independence(self, capsys, sqrt_file):
        code, report, _ = run_json(capsys, "check", sqrt_file)
        assert code == 1
        verdicts = {c["label"]: c for c in report["results"]["checks"]}
        assert verdicts["monotone-submodular"]["holds"] is True
        assert verdicts["increment-independence"]["holds"] is False
        witness = verdicts["increment-independence"]["witness"]
        assert witness["vectors"] == [[2.0, 1.0], [2.0, 0.0], [1.0, 1.0], [1.0, 0.0]]
        assert verdicts["spr"]["holds"] is False
        assert verdicts["ord"]["holds"] is True

    def test_spr_instance_passes_everything(self, capsys, spr_file):
        code, report, _ = run_json(capsys, "check", spr_file)
        assert code == 0
        assert all(c["holds"] for c in report["results"]["checks"])


class TestGittins:
    def test_indices_and_verdicts(self, capsys, spr_file):
        code, report, _ = run_json(capsys, "gittins", spr_file)
        assert code == 0
        rows = report["results"]["boxes"]
        assert all(row["consistent"] for row in rows)
        assert rows[0]["index"] is None  # expected bonus 0.25 beats cost 0.1
        assert rows[0]["reservation"]["kind"] == "infinite"

    def test_non_decomposable_utility_is_a_usage_error(self, capsys, sqrt_file):
        code, _, err = run_cli(capsys, "gittins", sqrt_file)
        assert code == 2
        assert "decomposition" in err


class TestReservation:
    def test_empty_history(self, capsys, example_file):
        code, report, _ = run_json(capsys, "reservation", example_file)
        assert code == 0
        rows = {r["box"]: r for r in report["results"]["reservations"]}
        assert rows[1]["reservation"]["kind"] == "infinite"
        assert rows[3]["reservation"]["value"] == pytest.approx(0.8, abs=1e-9)
        assert rows[3]["method"] == "bisection"

    def test_history_filters_open_boxes(self, capsys, example_file):
        code, report, _ = run_json(capsys, "reservation", example_file, "--history", "1=1,2=0")
        assert code == 0
        rows = report["results"]["reservations"]
        assert [r["box"] for r in rows] == [3]

    def test_value_off_support_is_a_usage_error(self, capsys, example_file):
        code, _, err = run_cli(capsys, "reservation", example_file, "--history", "1=0.5")
        assert code == 2
        assert "support" in err


class TestCase:
    def test_degenerate_triple_reports_the_gap_and_exits_one(self, capsys):
        code, report, _ = run_json(capsys, "case", "thm1-i")
        assert code == 1
        assert report["results"]["gap"] == pytest.approx(0.1, abs=1e-12)
        assert all(c["passed"] for c in report["results"]["checks"])

    def test_concave_bernoulli_exits_zero(self, capsys):
        code, report, _ = run_json(capsys, "case", "example1")
        assert code == 0
        assert report["results"]["gap"] == pytest.approx(0.0, abs=1e-9)

    def test_masked_increment_case(self, capsys):
        code, report, _ = run_json(capsys, "case", "lemma1")
        assert code == 1
        assert report["results"]["gap"] == pytest.approx(0.0463763, abs=1e-6)

    def test_search_finds_and_saves_a_reloadable_bundle(self, capsys, tmp_path):
        out_path = tmp_path / "found.json"
        code, report, _ = run_json(
            capsys, "case", "thm4-search", "--seed", "0", "--budget", "50", "--save", str(out_path)
        )
        assert code == 1
        assert report["results"]["found"] is True
        from pandorabox import verify_bundle
        from pandorabox.documents import load_bundle_file

        assert verify_bundle(load_bundle_file(out_path)).passed

    def test_exhausted_search_exits_zero(self, capsys):
        code, report, _ = run_json(capsys, "case", "thm4-search", "--w2", "0.7", "--w3", "0.7", "--budget", "5")
        assert code == 0
        assert report["results"]["found"] is False

    def test_bad_parameters_are_usage_errors(self, capsys):
        code, _, err = run_cli(capsys, "case", "thm1-i", "--c1", "0.55")
        assert code == 2
        assert "c1" in err


class TestErrorsAndDiscipline:
    def test_missing_file_exits_two(self, capsys):
        code, _, err = run_cli(capsys, "solve", "no-such-file.json")
        assert code == 2

    def test_malformed_document_exits_two(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"schema": 1, "utility": {"kind": "mystery"}, "boxes": []}))
        code, _, err = run_cli(capsys, "solve", str(path))
        assert code == 2
        assert "unknown utility kind" in err

    def test_node_cap_exits_three(self, capsys, example_file):
        code, _, err = run_cli(capsys, "oracle", example_file, "--node-cap", "3")
        assert code == 3
        assert "node" in err

    def test_node_cap_env_override(self, capsys, example_file, monkeypatch):
        monkeypatch.setenv("PANDORABOX_NODE_CAP", "3")
        code, _, _ = run_cli(capsys, "oracle", example_file)
        assert code == 3

    def test_reports_are_deterministic_modulo_timing(self, capsys, example_file):
        _, first, _ = run_json(capsys, "compare", example_file)
        _, second, _ = run_json(capsys, "compare", example_file)
        assert json.dumps(strip_timing(first), sort_keys=True) == json.dumps(
            strip_timing(second), sort_keys=True
        )

    def test_reports_round_trip_losslessly(self, capsys, example_file):
        code, out, _ = run_cli(capsys, "solve", example_file, "--json")
        report = json.loads(out)
        assert json.loads(json.dumps(report)) == report

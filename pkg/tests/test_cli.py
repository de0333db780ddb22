import json

import pytest

from timecrit.cli import main


def run(capsys, *argv: str):
    status = main(list(argv))
    out = capsys.readouterr().out
    return status, json.loads(out) if out.strip() else None


class TestValidate:
    def test_ok_model_exits_zero(self, capsys, model_file):
        status, body = run(capsys, "validate", str(model_file))
        assert status == 0
        assert body == {"ok": True, "violations": []}

    def test_violations_exit_one(self, capsys, tmp_path, hemorrhage_doc):
        hemorrhage_doc["cpts"]["bleed"] = [0.9, 0.9]
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(hemorrhage_doc))
        status, body = run(capsys, "validate", str(path))
        assert status == 1
        assert body["ok"] is False
        assert body["violations"][0]["path"] == "cpts.bleed[]"

    def test_missing_file_is_error(self, capsys, tmp_path):
        status, body = run(capsys, "validate", str(tmp_path / "absent.json"))
        assert status == 1
        assert body["code"] == "not_found"


class TestInfer:
    def test_posterior_for_hypothesis(self, capsys, model_file):
        status, body = run(
            capsys, "infer", str(model_file), "--evidence", "hypotension=present"
        )
        assert status == 0
        post = body["posteriors"]["bleed"]
        weights = dict(zip(post["states"], post["weights"]))
        assert weights["hemorrhage"] == pytest.approx(27.0 / 34.0, abs=1e-6)

    def test_both_findings(self, capsys, model_file):
        status, body = run(
            capsys, "infer", str(model_file),
            "--evidence", "hypotension=present", "distension=present",
        )
        post = body["posteriors"]["bleed"]
        weights = dict(zip(post["states"], post["weights"]))
        assert weights["hemorrhage"] == pytest.approx(27.0 / 29.0, abs=1e-6)

    def test_explicit_target(self, capsys, model_file):
        status, body = run(
            capsys, "infer", str(model_file), "--target", "distension",
            "--evidence", "hypotension=present",
        )
        post = body["posteriors"]["distension"]
        weights = dict(zip(post["states"], post["weights"]))
        assert weights["present"] == pytest.approx(0.597059, abs=1e-6)

    def test_malformed_evidence_token(self, capsys, model_file):
        status, body = run(
            capsys, "infer", str(model_file), "--evidence", "hypotension"
        )
        assert status == 1
        assert body["code"] == "invalid_input"

    def test_impossible_evidence(self, capsys, tmp_path, hemorrhage_doc):
        hemorrhage_doc["cpts"]["hypotension"]["stable"] = [0.0, 1.0]
        hemorrhage_doc["cpts"]["bleed"] = [0.0, 1.0]
        path = tmp_path / "impossible.json"
        path.write_text(json.dumps(hemorrhage_doc))
        status, body = run(
            capsys, "infer", str(path), "--evidence", "hypotension=present"
        )
        assert status == 1
        assert body["code"] == "impossible_evidence"


class TestEcda:
    def test_golden_cost(self, capsys, model_file):
        status, body = run(
            capsys, "ecda", str(model_file),
            "--evidence", "hypotension=present", "--t", "30",
        )
        assert status == 0
        assert body["hypothesis"] == "bleed"
        assert body["ecda"] == pytest.approx(37.888, abs=1e-2)
        assert body["best_action_now"] == "observe"
        assert body["best_action_at_t"] == "transport"
        assert body["expected_utility_at_t"] == pytest.approx(62.112, abs=1e-2)

    def test_onset_adds_comprehensive(self, capsys, model_file):
        status, body = run(
            capsys, "ecda", str(model_file),
            "--evidence", "hypotension=present", "--t", "30",
            "--onset", "0:0.5,30:0.5",
        )
        assert status == 0
        assert body["comprehensive_ecda"] == pytest.approx(18.944, abs=1e-2)

    def test_t_before_t0_is_error(self, capsys, model_file):
        status, body = run(
            capsys, "ecda", str(model_file), "--t", "5", "--t0", "10"
        )
        assert status == 1
        assert body["code"] == "invalid_input"


class TestVoi:
    def test_entries_sorted_by_evi(self, capsys, model_file):
        status, body = run(capsys, "voi", str(model_file), "--t", "30")
        assert status == 0
        entries = body["voi"]["entries"]
        assert [e["variable"] for e in entries] == ["hypotension", "distension"]
        assert entries[0]["evi"] == pytest.approx(5.33, abs=1e-2)

    def test_observed_candidates_flagged(self, capsys, model_file):
        status, body = run(
            capsys, "voi", str(model_file),
            "--evidence", "hypotension=present", "--t", "30",
        )
        entries = {e["variable"]: e for e in body["voi"]["entries"]}
        assert "hypotension" not in entries
        assert entries["distension"]["observed"] is False


class TestPlan:
    def test_fixture_ordering(self, capsys, scenario_file):
        status, body = run(capsys, "plan", str(scenario_file))
        assert status == 0
        assert body["count"] == 2
        totals = [p["total"] for p in body["plans"]]
        assert totals == sorted(totals)
        assert totals[0] == pytest.approx(38.11, abs=1e-2)
        assert totals[1] == pytest.approx(54.50, abs=1e-2)

    def test_infeasible_scenario(self, capsys, tmp_path, scenario_doc):
        scenario_doc["patients"][0]["requires"] = ["burns"]
        path = tmp_path / "infeasible.json"
        path.write_text(json.dumps(scenario_doc))
        status, body = run(capsys, "plan", str(path))
        assert status == 1
        assert body["code"] == "infeasible_scenario"


class TestUsage:
    def test_no_arguments_is_usage_error(self):
        with pytest.raises(SystemExit) as err:
            main([])
        assert err.value.code == 2

    def test_unknown_subcommand_is_usage_error(self):
        with pytest.raises(SystemExit) as err:
            main(["frobnicate"])
        assert err.value.code == 2

    def test_missing_required_flag_is_usage_error(self, model_file):
        with pytest.raises(SystemExit) as err:
            main(["ecda", str(model_file)])
        assert err.value.code == 2

    def test_error_payload_is_compact_json(self, capsys, tmp_path):
        status = main(["validate", str(tmp_path / "absent.json")])
        out = capsys.readouterr().out
        assert status == 1
        body = json.loads(out)
        assert set(body) == {"code", "message", "path"}

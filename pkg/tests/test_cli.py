"""CLI behavior: subcommands, JSON output, exit codes, cache resolution."""

import json

import pytest

from pebblekit import theorem_min, trace_from_json, validate_trace
from pebblekit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestStrategyCommand:
    def test_stdout_json_is_a_valid_certified_trace(self, capsys):
        code, out, _ = run(capsys, "strategy", "--game", "black", "-d", "2", "-H", "3")
        assert code == 0
        data = json.loads(out)
        assert data["certificate"]["kind"] == "black"
        report = validate_trace(trace_from_json(data))
        assert report.peak == theorem_min("black", 2, 3)
        assert report.is_root_pebbling

    def test_out_file_plus_summary(self, tmp_path, capsys):
        path = tmp_path / "bw.json"
        code, out, _ = run(
            capsys, "strategy", "--game", "bw", "-d", "2", "-H", "4", "--out", str(path)
        )
        assert code == 0
        assert "peak 3" in out and str(path) in out
        data = json.loads(path.read_text())
        assert data["variant"] == "bw"
        assert len(data["moves"]) > 0

    def test_out_file_json_summary(self, tmp_path, capsys):
        path = tmp_path / "s.json"
        code, out, _ = run(
            capsys,
            "strategy", "--game", "half", "-d", "2", "-H", "3",
            "--out", str(path), "--json",
        )
        assert code == 0
        summary = json.loads(out)
        assert summary["peak"] == "5/2"
        assert summary["path"] == str(path)

    def test_epsilon_selects_the_subroot_construction(self, tmp_path, capsys):
        path = tmp_path / "sub.json"
        code, _, _ = run(
            capsys,
            "strategy", "--game", "fractional", "-d", "2", "-H", "3",
            "--epsilon", "1/4", "--out", str(path),
        )
        assert code == 0
        assert json.loads(path.read_text())["certificate"]["kind"] == "subroot"

    def test_unsupported_instance_fails_cleanly(self, capsys):
        code, _, err = run(capsys, "strategy", "--game", "bw", "-d", "3", "-H", "3")
        assert code == 1
        assert "d=2" in err

    def test_bad_epsilon_fails_cleanly(self, capsys):
        code, _, err = run(
            capsys, "strategy", "--game", "black", "-d", "2", "-H", "3", "--epsilon", "1/4"
        )
        assert code == 1
        assert "fractional" in err


class TestValidateCommand:
    def make_trace_file(self, tmp_path, capsys, *argv):
        path = tmp_path / "trace.json"
        code, _, _ = run(capsys, "strategy", *argv, "--out", str(path))
        assert code == 0
        return path

    def test_valid_trace_with_certificate(self, tmp_path, capsys):
        path = self.make_trace_file(tmp_path, capsys, "--game", "black", "-d", "2", "-H", "2")
        code, out, _ = run(capsys, "validate", str(path), "--json")
        assert code == 0
        data = json.loads(out)
        assert data["valid"] is True
        assert data["certificate"]["ok"] is True
        assert data["classifications"]["root-pebbling"] is True

    def test_classification_gate_failure(self, tmp_path, capsys):
        doc = {
            "variant": "black",
            "granularity": "1",
            "d": 2,
            "h": 2,
            "initial": [],
            "moves": [{"type": "placeLeafBlack", "node": 1, "amount": "1"}],
        }
        path = tmp_path / "partial.json"
        path.write_text(json.dumps(doc))
        code, out, _ = run(capsys, "validate", str(path), "--json")
        assert code == 0 and json.loads(out)["valid"] is True
        code, out, _ = run(
            capsys, "validate", str(path), "--classify", "root-pebbling", "--json"
        )
        assert code == 1
        assert json.loads(out)["requestedClassification"]["root-pebbling"] is False

    def test_subroot_classification_gate_passes(self, tmp_path, capsys):
        path = self.make_trace_file(
            tmp_path, capsys, "--game", "fractional", "-d", "2", "-H", "3", "--epsilon", "0"
        )
        code, _, _ = run(capsys, "validate", str(path), "--classify", "sub-root-sub-pebbling")
        assert code == 0

    def test_illegal_trace_reports_rule_and_index(self, tmp_path, capsys):
        doc = {
            "variant": "black",
            "granularity": "1",
            "d": 2,
            "h": 2,
            "initial": [],
            "moves": [
                {"type": "placeLeafBlack", "node": 1, "amount": "1"},
                {"type": "blackPlaceOrSlide", "node": 0, "amount": "1"},
            ],
        }
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc))
        code, out, _ = run(capsys, "validate", str(path), "--json")
        assert code == 1
        data = json.loads(out)
        assert data["valid"] is False
        assert data["index"] == 1
        assert data["rule"] == "rule (ii)"

    def test_tampered_certificate_fails(self, tmp_path, capsys):
        path = self.make_trace_file(tmp_path, capsys, "--game", "black", "-d", "2", "-H", "3")
        doc = json.loads(path.read_text())
        doc["certificate"]["target"] = "1"
        path.write_text(json.dumps(doc))
        code, out, _ = run(capsys, "validate", str(path), "--json")
        assert code == 1
        data = json.loads(out)
        assert data["valid"] is True
        assert data["certificate"]["ok"] is False
        assert any("peak" in f for f in data["certificate"]["failures"])

    def test_unreadable_and_malformed_inputs(self, tmp_path, capsys):
        code, _, err = run(capsys, "validate", str(tmp_path / "missing.json"))
        assert code == 1 and "cannot read" in err
        garbled = tmp_path / "garbled.json"
        garbled.write_text('{"variant": "black"}')
        code, _, err = run(capsys, "validate", str(garbled))
        assert code == 1 and "malformed" in err


class TestOptimalCommand:
    def test_json_report_matches_formula(self, capsys):
        code, out, _ = run(
            capsys, "optimal", "--game", "black", "-d", "2", "-H", "3", "--json"
        )
        assert code == 0
        data = json.loads(out)
        assert data["optimum"] == "3"
        assert "witness" in data
        report = validate_trace(trace_from_json(data["witness"]))
        assert report.is_root_pebbling and report.peak == 3

    def test_no_witness_flag(self, capsys):
        code, out, _ = run(
            capsys,
            "optimal", "--game", "black", "-d", "2", "-H", "2", "--json", "--no-witness",
        )
        assert code == 0
        assert "witness" not in json.loads(out)

    def test_state_cap_refusal(self, capsys):
        code, _, err = run(
            capsys,
            "optimal", "--game", "black", "-d", "2", "-H", "4",
            "--state-cap", "5", "--no-seed",
        )
        assert code == 1
        assert "resource cap" in err

    def test_env_cache_resolution(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("PEBBLEKIT_CACHE", str(tmp_path))
        code, _, _ = run(capsys, "optimal", "--game", "black", "-d", "2", "-H", "2")
        assert code == 0
        cached = list(tmp_path.glob("optimal-*.json"))
        assert len(cached) == 1
        code, out, _ = run(
            capsys, "optimal", "--game", "black", "-d", "2", "-H", "2", "--json"
        )
        assert code == 0
        assert json.loads(out)["fromCache"] is True

    def test_flag_overrides_env_cache(self, capsys, tmp_path, monkeypatch):
        env_dir = tmp_path / "env"
        flag_dir = tmp_path / "flag"
        env_dir.mkdir()
        flag_dir.mkdir()
        monkeypatch.setenv("PEBBLEKIT_CACHE", str(env_dir))
        code, _, _ = run(
            capsys,
            "optimal", "--game", "black", "-d", "2", "-H", "2", "--cache", str(flag_dir),
        )
        assert code == 0
        assert list(flag_dir.glob("optimal-*.json"))
        assert not list(env_dir.glob("optimal-*.json"))


class TestVerifyCommand:
    def test_single_instance_upper_only(self, capsys):
        code, out, _ = run(
            capsys, "verify", "--game", "black", "-d", "2", "-H", "5", "--json"
        )
        assert code == 0
        data = json.loads(out)
        assert data["ok"] is True
        assert data["reports"][0]["verdict"] == "upper-only"

    def test_single_instance_with_oracle_is_tight(self, capsys):
        code, out, _ = run(
            capsys, "verify", "--game", "black", "-d", "2", "-H", "3", "--oracle", "--json"
        )
        assert code == 0
        assert json.loads(out)["reports"][0]["verdict"] == "tight"

    def test_grid_without_oracle_exits_zero(self, capsys):
        code, out, _ = run(capsys, "verify", "--grid", "--json")
        assert code == 0
        data = json.loads(out)
        assert data["ok"] is True
        assert len(data["reports"]) == 12
        assert all(r["verdict"] == "upper-only" for r in data["reports"])

    def test_error_verdict_exits_nonzero(self, capsys):
        code, out, _ = run(capsys, "verify", "--game", "bw", "-d", "3", "-H", "3", "--json")
        assert code == 1
        assert json.loads(out)["reports"][0]["verdict"] == "error"

    def test_missing_instance_is_a_usage_error(self, capsys):
        code, _, err = run(capsys, "verify")
        assert code == 2
        assert "--grid" in err


class TestReportCommand:
    def test_writes_csv_and_figures(self, tmp_path, capsys):
        out_dir = tmp_path / "figs"
        code, out, _ = run(
            capsys,
            "report", "--out-dir", str(out_dir),
            "--heights", "2:4", "--profile-height", "3", "--json",
        )
        assert code == 0
        paths = json.loads(out)["paths"]
        assert len(paths) == 3
        assert (out_dir / "tightness.csv").exists()
        assert (out_dir / "bounds.png").read_bytes()[:4] == b"\x89PNG"
        assert (out_dir / "weight-profile.png").read_bytes()[:4] == b"\x89PNG"

    def test_bad_heights_or_games(self, tmp_path, capsys):
        code, _, err = run(
            capsys, "report", "--out-dir", str(tmp_path), "--heights", "x"
        )
        assert code == 1 and "heights" in err
        code, _, err = run(
            capsys, "report", "--out-dir", str(tmp_path), "--games", "purple"
        )
        assert code == 1 and "purple" in err


class TestUsage:
    def test_no_command_is_a_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2

    def test_unknown_game_choice(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["strategy", "--game", "purple", "-H", "3"])
        assert exc.value.code == 2

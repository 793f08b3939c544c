"""Command-line interface: campaign files, CSV outputs, determinism."""

import csv
import json

import pytest

from softdec.cli import main


def run_cli(args):
    return main([str(a) for a in args])


def write_campaign(path, campaigns):
    path.write_text(json.dumps({"campaigns": campaigns}))


SMALL = {
    "scheme": "ebch_128_36", "frame": "conventional", "constraint": "pc_out",
    "lambda": 2, "stopping": "codeword", "ebn0_db": [3.0], "max_trials": 60,
    "seed": 3,
}


class TestSimulate:
    def test_empty_campaign_succeeds(self, tmp_path):
        f = tmp_path / "c.json"
        write_campaign(f, [])
        out = tmp_path / "r.jsonl"
        assert run_cli(["simulate", f, out]) == 0
        assert out.read_text() == ""
        assert (tmp_path / "r.csv").exists()

    def test_five_schemes_five_rows(self, tmp_path):
        campaigns = []
        for scheme, frame in [
            ("ebch_128_36", "conventional"),
            ("concat_128_36_hamming84", "improved"),
            ("concat_128_36_block1685", "improved"),
            ("concat_128_36_conv214", "improved"),
            ("concat_128_36_conv216", "improved"),
        ]:
            campaigns.append({"scheme": scheme, "frame": frame, "lambda": 2,
                              "ebn0_db": [3.0], "max_trials": 20, "seed": 1})
        f = tmp_path / "fig6.json"
        write_campaign(f, campaigns)
        out = tmp_path / "fig6.jsonl"
        assert run_cli(["simulate", f, out]) == 0
        rows = [json.loads(line) for line in out.read_text().splitlines()]
        assert len(rows) == 5
        assert {r["scheme"] for r in rows} == {c["scheme"] for c in campaigns}

    def test_rerun_is_byte_identical(self, tmp_path):
        f = tmp_path / "c.json"
        write_campaign(f, [SMALL])
        out1, out2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        assert run_cli(["simulate", f, out1]) == 0
        assert run_cli(["simulate", f, out2]) == 0
        assert out1.read_bytes() == out2.read_bytes()
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_parse_error_reports_line_and_column(self, tmp_path, capsys):
        f = tmp_path / "bad.json"
        f.write_text('{"campaigns": [\n  {"scheme": }\n]}')
        assert run_cli(["simulate", f, tmp_path / "r.jsonl"]) == 2
        err = capsys.readouterr().err
        assert "line 2" in err and "column" in err

    def test_unknown_keys_rejected(self, tmp_path, capsys):
        f = tmp_path / "c.json"
        write_campaign(f, [dict(SMALL, bogus=1)])
        assert run_cli(["simulate", f, tmp_path / "r.jsonl"]) == 2
        assert "unknown keys" in capsys.readouterr().err


class TestAnalyzeLlr:
    def test_uncoded_variance_twice_mean(self, tmp_path):
        out = tmp_path / "curves.csv"
        assert run_cli(["analyze-llr", out, "--kind", "uncoded",
                        "--trials", 400, "--n", 512, "--es-n0-db", 3.0]) == 0
        moments = list(csv.DictReader(open(tmp_path / "curves.moments.csv")))
        assert len(moments) == 1
        mean = float(moments[0]["mean"])
        var = float(moments[0]["variance"])
        assert abs(var - 2 * mean) < 0.1 * var

    @pytest.mark.slow
    def test_all_kinds_five_curves(self, tmp_path):
        out = tmp_path / "curves.csv"
        assert run_cli(["analyze-llr", out, "--kind", "all", "--trials", 300,
                        "--mc-trials", 300]) == 0
        rows = list(csv.DictReader(open(out)))
        kinds = {r["kind"] for r in rows}
        assert kinds == {"uncoded", "hamming84", "block1685", "conv214", "conv216"}
        assert len(rows) == 5 * 128

    def test_negative_es_n0_accepted(self, tmp_path):
        out = tmp_path / "c.csv"
        assert run_cli(["analyze-llr", out, "--kind", "uncoded",
                        "--es-n0-db", -2.5, "--trials", 100, "--n", 128]) == 0


class TestMripStats:
    def test_zero_trials_usage_error(self, tmp_path, capsys):
        assert run_cli(["mrip-stats", tmp_path / "m.csv", "--scheme",
                        "ebch_128_36", "--trials", 0]) == 2
        assert "--trials" in capsys.readouterr().err

    def test_ccdf_non_increasing(self, tmp_path):
        out = tmp_path / "m.csv"
        assert run_cli(["mrip-stats", out, "--scheme", "ebch_128_36",
                        "--ebn0-db", 3.0, "--trials", 500]) == 0
        rows = list(csv.DictReader(open(out)))
        assert len(rows) == 37
        ccdf = [float(r["ccdf"]) for r in rows]
        assert all(a >= b - 1e-12 for a, b in zip(ccdf, ccdf[1:]))


class TestDecodeOne:
    def test_trace_fields(self, tmp_path):
        out = tmp_path / "trace.json"
        assert run_cli(["decode-one", "--scheme", "ebch_128_36",
                        "--stopping", "codeword", "--lam", 3,
                        "--ebn0-db", 3.0, "--trial", 4, "--out", out]) == 0
        trace = json.loads(out.read_text())
        for key in ("metric", "edges_visited", "comparisons", "goal_sequence",
                    "codeword", "decoded_correctly", "schema_version"):
            assert key in trace
        assert len(trace["codeword"]) == 128
        assert trace["goals_evaluated"] >= 1

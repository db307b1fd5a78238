import json
from fractions import Fraction as F

import pytest

from germdecomp.cli import (
    AnalysisConfig,
    cmd_analyze,
    cmd_puiseux,
    dot_from_report,
    main,
)

WORKED = "z3^2 - (z1^3 - z2^2)^2 * (z1^4 - z2^3)"


class TestAnalyze:
    def test_worked_example_report(self):
        report, text = cmd_analyze(WORKED, AnalysisConfig())
        assert report["schema"] == "1"
        branch = report["singular_locus"]["branches"][0]
        assert branch["multiplicity"] == 2
        assert branch["axis_multiplicity"] == 2
        exps = report["puiseux_branches"][0]["characteristic_exponents"]
        assert exps == [{"num": 4, "den": 3}]
        counts = report["graph"]["summary"]["counts"]
        assert set(counts) == {"SeifertCone", "ThickenedTorusCone",
                               "MappingTorusCone", "TubularCone"}
        assert report["graph"]["summary"]["metrically_conical_pieces"] == 1
        assert "4/3" in text

    def test_a1_germ_single_conical_piece(self):
        report, _ = cmd_analyze("z3^2 - z1^2 - z2^2", AnalysisConfig())
        assert report["singular_locus"]["branches"] == []
        counts = report["graph"]["summary"]["counts"]
        assert counts == {"SeifertCone": 1}

    def test_json_round_trip(self):
        report, _ = cmd_analyze(WORKED, AnalysisConfig())
        assert json.loads(json.dumps(report)) == report

    def test_deterministic_json(self):
        a, _ = cmd_analyze(WORKED, AnalysisConfig())
        b, _ = cmd_analyze(WORKED, AnalysisConfig())
        assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


class TestExitCodes:
    def test_success(self, capsys):
        assert main(["analyze", "--input", WORKED]) == 0
        assert "4/3" in capsys.readouterr().out

    def test_parse_error(self, capsys):
        assert main(["analyze", "--input", "z3^2 - (z1"]) == 1
        assert "parse error" in capsys.readouterr().err

    def test_capability_error(self, capsys):
        assert main(["analyze", "--input", "z1 + z2"]) == 2
        assert "capability error" in capsys.readouterr().err

    def test_metrics_success(self, capsys):
        assert main(["metrics", "--chart", "hp", "--nu", "4/3"]) == 0
        assert "ok" in capsys.readouterr().out

    def test_verify_cn(self, capsys):
        assert main(["metrics", "--verify-cn", "--nu", "1",
                     "--nuprime", "4/3"]) == 0
        out = capsys.readouterr().out
        assert "deviation" in out

    def test_cn_requires_nuprime(self, capsys):
        assert main(["metrics", "--chart", "cn", "--nu", "1"]) == 1


class TestPuiseuxCommand:
    def test_cusp(self):
        report, text = cmd_puiseux("z1^4 - z2^3", None)
        (b,) = report["branches"]
        assert b["characteristic_exponents"] == [{"num": 4, "den": 3}]
        assert b["puiseux_pairs"] == [[4, 3]]
        assert "4/3" in text

    def test_smooth(self):
        report, _ = cmd_puiseux("z2 - z1^2", None)
        assert report["branches"][0]["puiseux_pairs"] == []

    def test_product(self):
        report, _ = cmd_puiseux("(z2^2 - z1^3)*(z2 - z1)", None)
        exps = sorted(
            tuple((e["num"], e["den"]) for e in b["characteristic_exponents"])
            for b in report["branches"])
        assert exps == [(), ((3, 2),)]

    def test_cli_order_flag(self, capsys):
        assert main(["puiseux", "--input", "z1^4 - z2^3",
                     "--order", "7/3"]) == 0


class TestGraphCommand:
    def test_round_trip_through_report(self, tmp_path, capsys):
        report_path = tmp_path / "report.json"
        assert main(["analyze", "--input", WORKED,
                     "--json", str(report_path)]) == 0
        capsys.readouterr()
        assert main(["graph", "--input", str(report_path)]) == 0
        dot = capsys.readouterr().out
        assert dot.startswith("graph G {")
        for kind in ("SeifertCone", "ThickenedTorusCone", "MappingTorusCone",
                     "TubularCone"):
            assert kind in dot

    def test_dot_matches_analyze_dot(self, tmp_path):
        report, _ = cmd_analyze(WORKED, AnalysisConfig())
        dot1 = dot_from_report(report)
        dot2 = dot_from_report(json.loads(json.dumps(report)))
        assert dot1 == dot2

    def test_missing_report(self, capsys):
        assert main(["graph", "--input", "/nonexistent/report.json"]) == 1

    def test_invalid_report(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("not json")
        assert main(["graph", "--input", str(bad)]) == 1

    def test_dot_file_output(self, tmp_path, capsys):
        report_path = tmp_path / "report.json"
        dot_path = tmp_path / "graph.dot"
        assert main(["analyze", "--input", WORKED, "--json", str(report_path),
                     "--dot", str(dot_path)]) == 0
        capsys.readouterr()
        assert main(["graph", "--input", str(report_path)]) == 0
        assert dot_path.read_text() == capsys.readouterr().out


class TestInputFile(object):
    def test_polynomial_from_file(self, tmp_path, capsys):
        f = tmp_path / "germ.txt"
        f.write_text(WORKED + "\n")
        assert main(["analyze", "--input", str(f)]) == 0

#!/usr/bin/env python3
"""End-to-end run on the worked example germ

    f = z3^2 - (z1^3 - z2^2)^2 (z1^4 - z2^3)

printing each pipeline stage and writing the JSON report and DOT graph
next to this script (worked_example.json / worked_example.dot)."""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from germdecomp.cli import AnalysisConfig, cmd_analyze, dot_from_report
import json

GERM = "z3^2 - (z1^3 - z2^2)^2 * (z1^4 - z2^3)"


def main() -> None:
    here = pathlib.Path(__file__).resolve().parent
    config = AnalysisConfig()
    report, text = cmd_analyze(GERM, config)
    print(text, end="")
    (here / "worked_example.json").write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n")
    (here / "worked_example.dot").write_text(dot_from_report(report))
    print(f"\nwrote {here / 'worked_example.json'}")
    print(f"wrote {here / 'worked_example.dot'}")


if __name__ == "__main__":
    main()

"""Command-line front end: analyze | puiseux | metrics | graph.

Exit codes: 0 success, 1 parse error, 2 capability error (valid input
outside the supported class), 3 numeric-verification failure.  JSON
reports carry `"schema": "1"` and serialize every exponent as an exact
rational {"num": p, "den": q}; repeated runs on the same input are
byte-identical.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .carousel import CarouselConfig, build_carousel, region_metric_type
from .decomposition import assemble, summary, to_dot
from .germ import (
    CapabilityError,
    classify_input,
    axis_multiplicity,
    discriminant_curve,
    normalize_double_cover,
    singular_locus,
    transversal_data,
)
from .metrics import (
    CheegerNagase,
    ConeMetric,
    HsiangPati,
    MappingTorusCone,
    AnnulusFamily,
    MetricError,
    ParamCurve,
    fit_shrink_exponent,
    flat_circle,
    verify_cn_identity,
)
from .polynomials import MPoly, ParseError, PolyError, parse_poly
from .puiseux import PuiseuxError, characteristic_data, puiseux_expand

log = logging.getLogger("germdecomp")

SCHEMA = "1"
SHRINK_TOL = 1e-2
CN_TOL = 1e-12


@dataclass(frozen=True)
class AnalysisConfig:
    truncation_order: Fraction | None = None    # default: adaptive
    epsilon: float = 0.25
    mu: float = 2.0
    metric_steps: int = 32
    t_sweep: tuple[float, ...] = (1e-1, 1e-2, 1e-3)
    seed: int = 0
    json_path: str | None = None
    dot_path: str | None = None

    def validate(self) -> None:
        if self.metric_steps < 2:
            raise ValueError("metric_steps must be >= 2")
        if any(not 0 < t <= 1 for t in self.t_sweep):
            raise ValueError("t-sweep values must lie in (0, 1]")


# ---------------------------------------------------------------------------
# serialization helpers
# ---------------------------------------------------------------------------

def _rat(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator}


def _coeff_json(c):
    if isinstance(c, Fraction):
        return _rat(c)
    z = complex(c)
    return {"re": z.real, "im": z.imag}


def _branch_json(branch) -> dict:
    char = characteristic_data(branch) if branch.stable else None
    out = {
        "terms": [{"exponent": _rat(e), "coefficient": _coeff_json(c)}
                  for e, c in branch.terms],
        "ramification": branch.ramification,
        "class_size": branch.class_size,
        "exact": branch.exact,
        "truncation_order": (None if branch.truncation_order is None
                             else _rat(branch.truncation_order)),
    }
    if char is not None:
        out["characteristic_exponents"] = [_rat(e) for e in char.exponents]
        out["puiseux_pairs"] = [[m, n] for m, n in char.pairs]
    return out


def _graph_json(graph) -> dict:
    s = summary(graph)
    pieces = []
    for i, p in enumerate(graph.pieces):
        pieces.append({
            "index": i,
            "kind": p.kind,
            "label": p.label,
            "nu": _rat(p.nu),
            "nu_prime": None if p.nu_prime is None else _rat(p.nu_prime),
            "provenance": p.provenance,
            "metrically_conical": p.metrically_conical,
            "transversal": (None if p.transversal is None
                            else {"d": p.transversal.d, "m": p.transversal.m,
                                  "milnor_number": p.transversal.milnor_number,
                                  "link_components": p.transversal.link_components}),
        })
    return {
        "pieces": pieces,
        "edges": [[i, j, ann] for i, j, ann in graph.edges],
        "summary": {
            "counts": dict(s.counts),
            "metrically_conical_pieces": s.conical_count,
        },
    }


def _emit(report: dict, json_path: str | None, text: str) -> None:
    blob = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if json_path:
        with open(json_path, "w") as fh:
            fh.write(blob)
        log.info("wrote JSON report to %s", json_path)
    print(text, end="")


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------

def _expand_adaptive(curve: MPoly, order: Fraction | None):
    """Expand to the requested order, or adaptively until every branch is
    stable (default order: last characteristic exponent + 1 is then
    available)."""
    if order is not None:
        return puiseux_expand(curve, order)
    guess = Fraction(max(2, curve.total_degree()))
    for _ in range(5):
        branches = puiseux_expand(curve, guess)
        if all(b.stable for b in branches):
            return branches
        guess *= 2
    raise CapabilityError(
        "Puiseux expansion did not stabilize at reasonable order; pass an "
        "explicit --order")


def _group_by_tangent(branches):
    groups: list[list] = []
    for b in branches:
        tangent = complex(next((c for e, c in b.terms if e == 1), 0))
        for g in groups:
            g_t = complex(next((c for e, c in g[0].terms if e == 1), 0))
            if abs(g_t - tangent) <= 1e-9:
                g.append(b)
                break
        else:
            groups.append([b])
    return groups


def _metric_verifications(levels, config: AnalysisConfig) -> list[dict]:
    """Fit the shrink exponent of a fiber loop for each fractional rate and
    check the collar change-of-variables identity for each rate pair."""
    results = []
    rng = np.random.default_rng(config.seed)
    rates = [Fraction(1)] + [nu for nu in levels if nu != 1]
    for nu in rates:
        chart = HsiangPati(nu) if nu != 1 else ConeMetric(flat_circle())
        if nu != 1:
            mk = lambda t: ParamCurve(0.0, 1.0,
                                      lambda u, t=t: [t, 0.0, u, 0.0],
                                      lambda u: [0.0, 0.0, 1.0, 0.0])
        else:
            mk = lambda t: ParamCurve(0.0, 1.0, lambda u, t=t: [t, u],
                                      lambda u: [0.0, 1.0])
        fit = fit_shrink_exponent(chart, mk, config.t_sweep,
                                  config.metric_steps)
        results.append({
            "check": "shrink_exponent",
            "nu": _rat(nu),
            "fitted": fit.exponent,
            "tolerance": SHRINK_TOL,
            "metrically_conical": fit.metrically_conical,
            "passed": abs(fit.exponent - float(nu)) <= SHRINK_TOL,
        })
    pairs = list(zip(rates, rates[1:]))
    for nu, nu_p in pairs:
        samples = [(rng.uniform(0.05, 1.0), rng.uniform(1.0, 2.0),
                    rng.uniform(0.0, 2 * math.pi)) for _ in range(100)]
        dev = verify_cn_identity(nu, nu_p, samples)
        results.append({
            "check": "cn_identity",
            "nu": _rat(nu),
            "nu_prime": _rat(nu_p),
            "max_deviation": dev,
            "tolerance": CN_TOL,
            "passed": dev <= CN_TOL,
        })
    return results


def cmd_analyze(text: str, config: AnalysisConfig) -> tuple[dict, str]:
    config.validate()
    f = parse_poly(text)
    germ = classify_input(f)
    if not germ.is_vertical:
        raise CapabilityError(
            "input is not of the form z3^d - g(z1, z2); general germs are "
            "out of scope")
    locus = singular_locus(germ)
    norm = normalize_double_cover(germ)

    disc = None
    branches = []
    carousel_regions = []
    spec = None
    if not norm.smooth_after_normalization:
        disc = discriminant_curve(norm.f_bar)
        branches = _expand_adaptive(disc, config.truncation_order)
        groups = _group_by_tangent(branches)
        cfg = CarouselConfig(epsilon=config.epsilon, mu=config.mu)
        carousels = [build_carousel(g, cfg) for g in groups]
        # assemble along the deepest tangent direction
        spec, carousel_regions = max(
            carousels, key=lambda sr: len(sr[0].levels))
    tdata = [transversal_data(germ.d, mult) for _, mult in locus.curve_branches]
    graph = assemble(locus, carousel_regions, tdata)
    levels = list(spec.levels) if spec is not None else []
    verifications = _metric_verifications(levels, config)

    axis_mults = []
    for b, _ in locus.curve_branches:
        try:
            axis_mults.append(axis_multiplicity(b, 0))
        except (PolyError, CapabilityError):
            axis_mults.append(axis_multiplicity(b, 1))

    report = {
        "schema": SCHEMA,
        "input": f.render(),
        "form": germ.form,
        "d": germ.d,
        "singular_locus": {
            "branches": [{"equation": b.render(), "multiplicity": m,
                          "axis_multiplicity": am}
                         for (b, m), am in zip(locus.curve_branches,
                                               axis_mults)],
            "isolated_candidates": [[_rat(x), _rat(y)]
                                    for x, y in locus.isolated_candidates],
        },
        "normalization": {
            "f_bar": norm.f_bar.render(),
            "substitution": norm.substitution,
            "smooth_after_normalization": norm.smooth_after_normalization,
        },
        "discriminant": None if disc is None else disc.render(),
        "puiseux_branches": [_branch_json(b) for b in branches],
        "carousel": {
            "tangent": None if spec is None
            else _coeff_json(spec.tangent_coefficient),
            "levels": [_rat(nu) for nu in levels],
            "regions": [
                {"label": r.label, "kind": r.kind, "nu": _rat(r.nu),
                 "metric": region_metric_type(r).kind}
                for r in carousel_regions],
        },
        "graph": _graph_json(graph),
        "metric_verifications": verifications,
    }

    lines = [f"input: {report['input']}",
             f"form: vertical, d = {germ.d}",
             "singular locus:"]
    for b in report["singular_locus"]["branches"]:
        lines.append(f"  {b['equation']} = 0  (multiplicity {b['multiplicity']},"
                     f" axis multiplicity {b['axis_multiplicity']})")
    if not report["singular_locus"]["branches"]:
        lines.append("  (no one-dimensional singular branches)")
    lines.append(f"normalization: {norm.f_bar.render()} via {norm.substitution}")
    if disc is not None:
        lines.append(f"discriminant: {disc.render()}")
        for b in report["puiseux_branches"]:
            exps = ", ".join(f"{e['num']}/{e['den']}"
                             for e in b.get("characteristic_exponents", []))
            lines.append(f"branch (ramification {b['ramification']}): "
                         f"characteristic exponents [{exps}]")
    lines.append("carousel regions: "
                 + ", ".join(r["label"] for r in report["carousel"]["regions"]))
    cs = report["graph"]["summary"]["counts"]
    lines.append("decomposition: "
                 + ", ".join(f"{k}: {v}" for k, v in sorted(cs.items())))
    lines.append(f"metrically conical pieces: "
                 f"{report['graph']['summary']['metrically_conical_pieces']}")
    for v in verifications:
        if v["check"] == "shrink_exponent":
            lines.append(
                f"shrink fit nu={v['nu']['num']}/{v['nu']['den']}: "
                f"{v['fitted']:.4f} (tol {v['tolerance']}) "
                f"{'ok' if v['passed'] else 'FAIL'}")
        else:
            lines.append(
                f"collar identity ({v['nu']['num']}/{v['nu']['den']}, "
                f"{v['nu_prime']['num']}/{v['nu_prime']['den']}): deviation "
                f"{v['max_deviation']:.2e} (tol {v['tolerance']:.0e}) "
                f"{'ok' if v['passed'] else 'FAIL'}")
    return report, "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# puiseux
# ---------------------------------------------------------------------------

def cmd_puiseux(text: str, order: Fraction | None) -> tuple[dict, str]:
    f = parse_poly(text)
    branches = _expand_adaptive(f, order)
    report = {
        "schema": SCHEMA,
        "input": f.render(),
        "branches": [_branch_json(b) for b in branches],
    }
    lines = [f"input: {f.render()}"]
    for b in report["branches"]:
        exps = ", ".join(f"{e['num']}/{e['den']}"
                         for e in b.get("characteristic_exponents", []))
        pairs = ", ".join(f"({m},{n})" for m, n in b.get("puiseux_pairs", []))
        lines.append(f"branch: ramification {b['ramification']}, "
                     f"exponents [{exps}], pairs [{pairs}]")
    return report, "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# metrics
# ---------------------------------------------------------------------------

def _parse_rat(text: str) -> Fraction:
    return Fraction(text)


def cmd_metrics(args) -> tuple[dict, str, bool]:
    results = []
    ok = True
    if args.verify_cn:
        nu = _parse_rat(args.nu)
        nu_p = _parse_rat(args.nuprime)
        rng = np.random.default_rng(args.seed)
        samples = [(rng.uniform(0.05, 1.0), rng.uniform(1.0, 2.0),
                    rng.uniform(0.0, 2 * math.pi)) for _ in range(100)]
        dev = verify_cn_identity(nu, nu_p, samples)
        passed = dev <= CN_TOL
        ok = ok and passed
        results.append({"check": "cn_identity", "nu": _rat(nu),
                        "nu_prime": _rat(nu_p), "max_deviation": dev,
                        "tolerance": CN_TOL, "passed": passed})
    else:
        t_sweep = tuple(float(t) for t in args.tsweep.split(","))
        nu = _parse_rat(args.nu)
        if args.chart == "cone":
            chart = ConeMetric(flat_circle())
            mk = lambda t: ParamCurve(0.0, 1.0, lambda u, t=t: [t, u],
                                      lambda u: [0.0, 1.0])
            expected = 1.0
        else:
            if args.chart == "hp":
                chart = HsiangPati(nu)
            elif args.chart == "mt":
                chart = MappingTorusCone(nu)
            elif args.chart == "cn":
                chart = CheegerNagase(nu, _parse_rat(args.nuprime))
            elif args.chart == "annulus":
                chart = AnnulusFamily(nu, _parse_rat(args.nuprime))
            else:
                raise ValueError(f"unknown chart {args.chart!r}")
            if args.chart in ("hp", "mt"):
                mk = lambda t: ParamCurve(0.0, 1.0,
                                          lambda u, t=t: [t, 0.0, u, 0.0],
                                          lambda u: [0.0, 0.0, 1.0, 0.0])
                expected = float(nu)
            elif args.chart == "cn":
                # Theta-loop at s = 0 shrinks at the inner rate nu'
                mk = lambda t: ParamCurve(0.0, 1.0,
                                          lambda u, t=t: [t, 0.0, 0.0, u],
                                          lambda u: [0.0, 0.0, 0.0, 1.0])
                expected = float(_parse_rat(args.nuprime))
            else:
                mk = lambda t: ParamCurve(0.0, 2 * math.pi,
                                          lambda u, t=t: [t, 0.0, 2.0, u],
                                          lambda u: [0.0, 0.0, 0.0, 1.0])
                expected = float(nu)
        fit = fit_shrink_exponent(chart, mk, t_sweep, args.steps)
        passed = abs(fit.exponent - expected) <= SHRINK_TOL
        ok = ok and passed
        results.append({"check": "shrink_exponent", "chart": args.chart,
                        "fitted": fit.exponent, "expected": expected,
                        "residual": fit.residual, "tolerance": SHRINK_TOL,
                        "metrically_conical": fit.metrically_conical,
                        "passed": passed})
    report = {"schema": SCHEMA, "results": results}
    lines = []
    for r in results:
        if r["check"] == "shrink_exponent":
            lines.append(f"fitted exponent: {r['fitted']:.4f} "
                         f"(expected {r['expected']:.4f}, tol {r['tolerance']}) "
                         f"{'ok' if r['passed'] else 'FAIL'}")
        else:
            lines.append(f"cn identity deviation: {r['max_deviation']:.2e} "
                         f"(tol {r['tolerance']:.0e}) "
                         f"{'ok' if r['passed'] else 'FAIL'}")
    return report, "\n".join(lines) + "\n", ok


# ---------------------------------------------------------------------------
# graph
# ---------------------------------------------------------------------------

def dot_from_report(report: dict) -> str:
    graph = report.get("graph", report)
    pieces = graph.get("pieces", [])
    edges = graph.get("edges", [])
    lines = ["graph G {"]
    for p in pieces:
        lines.append(f'  n{p["index"]} [label="{p["label"]}"];')
    for i, j, ann in edges:
        lines.append(f'  n{i} -- n{j} [label="{ann}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_graph(report_path: str, dot_path: str | None) -> str:
    try:
        with open(report_path) as fh:
            report = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise PolyError(f"cannot read report {report_path!r}: {exc}")
    if not isinstance(report, dict):
        raise PolyError("report must be a JSON object")
    dot = dot_from_report(report)
    if dot_path:
        with open(dot_path, "w") as fh:
            fh.write(dot)
    return dot


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _read_input(value: str) -> str:
    if os.path.isfile(value):
        with open(value) as fh:
            return fh.read().strip()
    return value


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="germdecomp",
        description="metric decomposition of surface germs z3^d = g(z1, z2)")
    sub = ap.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="full pipeline on one germ")
    pa.add_argument("--input", required=True, help="polynomial file or text")
    pa.add_argument("--order", default=None, help="Puiseux truncation p/q")
    pa.add_argument("--epsilon", type=float, default=0.25)
    pa.add_argument("--mu", type=float, default=2.0)
    pa.add_argument("--tsweep", default="1e-1,1e-2,1e-3")
    pa.add_argument("--seed", type=int, default=0)
    pa.add_argument("--json", dest="json_path", default=None)
    pa.add_argument("--dot", dest="dot_path", default=None)

    pp = sub.add_parser("puiseux", help="Newton-Puiseux expansion of a curve")
    pp.add_argument("--input", required=True)
    pp.add_argument("--order", default=None)
    pp.add_argument("--json", dest="json_path", default=None)

    pm = sub.add_parser("metrics", help="model-metric verification")
    pm.add_argument("--chart", default="hp",
                    choices=["cone", "hp", "cn", "annulus", "mt"])
    pm.add_argument("--nu", default="1")
    pm.add_argument("--nuprime", default=None)
    pm.add_argument("--tsweep", default="1e-1,1e-2,1e-3")
    pm.add_argument("--steps", type=int, default=32)
    pm.add_argument("--seed", type=int, default=0)
    pm.add_argument("--verify-cn", action="store_true")
    pm.add_argument("--json", dest="json_path", default=None)

    pg = sub.add_parser("graph", help="re-emit DOT from an analysis report")
    pg.add_argument("--input", required=True, help="analysis report JSON path")
    pg.add_argument("--dot", dest="dot_path", default=None)
    return ap


def main(argv=None) -> int:
    logging.basicConfig(
        level=os.environ.get("GERM_LOG", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            text = _read_input(args.input)
            order = None if args.order is None else Fraction(args.order)
            config = AnalysisConfig(
                truncation_order=order, epsilon=args.epsilon, mu=args.mu,
                t_sweep=tuple(float(t) for t in args.tsweep.split(",")),
                seed=args.seed, json_path=args.json_path,
                dot_path=args.dot_path)
            report, text_out = cmd_analyze(text, config)
            _emit(report, config.json_path, text_out)
            if config.dot_path:
                with open(config.dot_path, "w") as fh:
                    fh.write(dot_from_report(report))
            if not all(v["passed"] for v in report["metric_verifications"]):
                return 3
            return 0
        if args.command == "puiseux":
            order = None if args.order is None else Fraction(args.order)
            report, text_out = cmd_puiseux(_read_input(args.input), order)
            _emit(report, args.json_path, text_out)
            return 0
        if args.command == "metrics":
            if args.chart in ("cn", "annulus") or args.verify_cn:
                if args.nuprime is None:
                    raise ValueError("--nuprime is required for this chart")
            report, text_out, ok = cmd_metrics(args)
            _emit(report, args.json_path, text_out)
            return 0 if ok else 3
        if args.command == "graph":
            print(cmd_graph(args.input, args.dot_path), end="")
            return 0
        raise AssertionError("unreachable")
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    except (CapabilityError, PuiseuxError) as exc:
        print(f"capability error: {exc}", file=sys.stderr)
        return 2
    except (PolyError, MetricError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface: evaluate ledgers, invert thresholds, calibrate.

Exit codes: 0 success, 1 computation error, 2 input/usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

from . import engine, ledger, simulate
from .geometry import GeometryError

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_COMPUTE = 1
EXIT_INPUT = 2


def _round2(x: float) -> str:
    # table values round half-up to 2 decimals, like the published tables
    return str(Decimal(repr(x)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def _fmt_bound(x: float) -> str:
    if math.isinf(x):
        return "∞"
    if x == 1.0:
        return "1"
    return _round2(x)


def render_value(ev: engine.EvidentialValue) -> str:
    """Render V as the tables do: one number, or 'lower–upper' with '∞'.

    An interval whose ends agree at the rendered precision collapses to a
    single number, matching how published tables print such rows.
    """
    lo = _fmt_bound(ev.lower)
    hi = _fmt_bound(ev.upper)
    if ev.is_point or lo == hi:
        return lo
    return f"{lo}–{hi}"


@dataclass(frozen=True)
class ReportRow:
    """One rendered study of a compute report."""

    id: str
    n: float
    means: tuple[float, float, float]
    sds: tuple[float, float, float]
    value: engine.EvidentialValue
    v_rendered: str
    z_v: float
    z_c: float
    case_tag: str
    mode: str
    notes: tuple[str, ...]


def build_rows(studies, mode: engine.Mode) -> list[ReportRow]:
    rows = []
    for study in studies:
        ev = engine.evidential_value(study, mode)
        rows.append(
            ReportRow(
                id=study.id,
                n=study.n,
                means=study.means,
                sds=study.sds,
                value=ev,
                v_rendered=render_value(ev),
                z_v=engine.z_v_statistic(study),
                z_c=engine.z_c_statistic(study),
                case_tag=ev.case.value,
                mode=mode.value,
                notes=tuple(ledger.study_warnings(study)),
            )
        )
    return rows


def _nums(values) -> str:
    return ",".join(f"{x:g}" for x in values)


def _render_table(rows, combined, tail_v, tail_fraction, out):
    header = ("id", "n", "means", "sds", "V", "Z_V", "Z_C", "case", "")
    body = [
        (
            r.id,
            f"{r.n:g}",
            _nums(r.means),
            _nums(r.sds),
            r.v_rendered,
            f"{r.z_v:+.4f}",
            f"{r.z_c:+.4f}",
            r.case_tag,
            "*" if r.notes else "",
        )
        for r in rows
    ]
    widths = [max(len(h), *(len(b[i]) for b in body)) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    for b in body:
        lines.append("  ".join(c.ljust(w) for c, w in zip(b, widths)).rstrip())
    lines.append("")
    prod = f"{_fmt_bound(combined.product_lower)}"
    if combined.product_upper != combined.product_lower:
        prod += f"–{_fmt_bound(combined.product_upper)}"
    post = f"{_fmt_bound(combined.posterior_odds_lower)}"
    if combined.posterior_odds_upper != combined.posterior_odds_lower:
        post += f"–{_fmt_bound(combined.posterior_odds_upper)}"
    lines.append(f"product V: {prod}")
    lines.append(f"posterior odds (prior {combined.prior_odds:g}): {post}")
    count = sum(1 for r in rows if r.value.lower >= tail_v)
    lines.append(
        f"empirical share with V >= {tail_v:g}: {count}/{len(rows)} "
        f"= {tail_fraction:.4f}"
    )
    notes = [(r.id, note) for r in rows for note in r.notes]
    if notes:
        lines.append("notes:")
        for sid, note in notes:
            lines.append(f"  study '{sid}': {note}")
    out.write("\n".join(lines) + "\n")


def _json_bound(x: float):
    return None if math.isinf(x) else x


def _render_json(rows, combined, tail_v, tail_fraction, source, errors, out):
    doc = {
        "schema_version": SCHEMA_VERSION,
        "source": source,
        "mode": rows[0].mode if rows else None,
        "rows": [
            {
                "id": r.id,
                "n": r.n,
                "means": list(r.means),
                "sds": list(r.sds),
                "v_lower": r.value.lower if not math.isinf(r.value.lower) else None,
                "v_upper": _json_bound(r.value.upper),
                "v_rendered": r.v_rendered,
                "case": r.case_tag,
                "z_v": r.z_v,
                "z_c": r.z_c,
                "notes": list(r.notes),
            }
            for r in rows
        ],
        "combined": {
            "prior_odds": combined.prior_odds,
            "product_lower": _json_bound(combined.product_lower),
            "product_upper": _json_bound(combined.product_upper),
            "posterior_odds_lower": _json_bound(combined.posterior_odds_lower),
            "posterior_odds_upper": _json_bound(combined.posterior_odds_upper),
        },
        "empirical_tail": {"v": tail_v, "fraction": tail_fraction},
        "errors": [str(e) for e in errors],
    }
    json.dump(doc, out, indent=2, sort_keys=True)
    out.write("\n")


def cmd_compute(args, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        text = open(args.input, encoding="utf-8").read()
    except OSError as exc:
        err.write(f"error: cannot read {args.input}: {exc}\n")
        return EXIT_INPUT
    led, errors = ledger.parse_ledger_lenient(text, source=args.input)
    for e in errors:
        err.write(f"error: {e}\n")
    if errors and args.strict:
        err.write("error: --strict forbids partial output\n")
        return EXIT_INPUT
    if not len(led):
        err.write("error: no studies\n")
        return EXIT_INPUT
    mode = engine.Mode(args.mode)
    try:
        rows = build_rows(led, mode)
        combined = engine.combine(
            [(r.id, r.value) for r in rows], prior_odds=args.prior_odds
        )
        tail_v = 2.0
        tail = engine.empirical_tail_fraction([r.value for r in rows], tail_v)
    except (GeometryError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_COMPUTE
    if args.format == "json":
        _render_json(rows, combined, tail_v, tail, led.source, errors, out)
    else:
        _render_table(rows, combined, tail_v, tail, out)
    return EXIT_INPUT if errors else EXIT_OK


def cmd_threshold(args, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        r = engine.threshold_ratio(args.v)
        p = engine.null_tail_probability(args.v)
    except ValueError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    out.write(f"{r:.4f}, {p:.4f}\n")
    return EXIT_OK


def cmd_simulate(args, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        sigma = tuple(float(s) for s in args.sigma.split(","))
        if len(sigma) != 3:
            raise ValueError("--sigma needs exactly three comma-separated values")
        report = simulate.null_exceedance(
            n=args.n, sigma=sigma, v_threshold=args.v, reps=args.reps, seed=args.seed
        )
    except (simulate.ParameterError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    out.write(
        f"reps: {report.reps}  seed: {report.seed}  v: {report.v_threshold:g}\n"
        f"P(V >= {report.v_threshold:g}) = {report.exceed_prob:.4f}"
        f"  (mc stderr {report.mc_stderr:.4f})\n"
    )
    return EXIT_OK


def _positive_float(text):
    value = float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evidential",
        description="Evidential value of three-cell ANOVA summaries.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="evaluate a ledger of studies")
    p.add_argument("--input", required=True, help="ledger file (CSV or JSON)")
    p.add_argument("--mode", choices=["paper", "exact"], default="paper")
    p.add_argument("--prior-odds", type=_positive_float, default=1.0)
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.add_argument("--strict", action="store_true", help="forbid partial output")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("threshold", help="invert the V >= v condition to |Z_V|")
    p.add_argument("--v", type=float, required=True)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("simulate", help="Monte Carlo null calibration")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--sigma", required=True, help="three comma-separated sds")
    p.add_argument("--v", type=float, default=2.0)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

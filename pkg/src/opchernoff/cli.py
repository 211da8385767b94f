"""Command-line frontend.

Subcommands: ``bounds``, ``sweep``, ``verify``, ``sam-check``, ``series``.
Exit codes: 0 ok, 1 usage error, 2 property or ordering violation,
3 numerical non-convergence.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import bounds as B
from . import verify as V
from .distributions import parse_dist
from .errors import MissingDerivativeOracle, NonConvergent, SpecError
from .operational import apply_operator_series, sam_check, series_coefficients
from .quadrature import Tolerance
from .shift import parse_shift

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_NONCONVERGENT = 0, 1, 2, 3
CSV_COLUMNS = ("dist", "x", "method", "bound_raw", "bound_clamped",
               "argmin_alpha", "argmin_z", "status")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    command: str
    dist_spec: Optional[str] = None
    x: Optional[float] = None
    x_range: Optional[tuple] = None
    f_spec: Optional[str] = None
    format: str = "table"
    tol: Tolerance = Tolerance()
    seed: int = 0


# ---------------------------------------------------------------------------
# serialization

def fmt_num(v) -> str:
    """Shortest round-trip decimal; ``inf`` for infinity, empty for missing."""
    if v is None:
        return ""
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return repr(v)


def _json_num(v):
    if v is None:
        return None
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if math.isnan(v):
        return None
    return v


def _json_safe(obj):
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _json_num(obj)
    return str(obj)


def report_row(dist: str, x: float, rep: B.BoundReport) -> dict:
    return {
        "dist": dist, "x": x, "method": rep.method.value,
        "bound_raw": rep.bound_raw.to_json(),
        "bound_clamped": _json_num(rep.bound_clamped),
        "argmin_alpha": _json_num(rep.argmin_alpha),
        "argmin_z": _json_num(rep.argmin_z),
        "status": rep.status.value,
    }


def comparison_json(cmp: B.Comparison) -> dict:
    rows = []
    for rep in cmp.rows:
        row = report_row(cmp.dist, cmp.x, rep)
        row["evaluations"] = rep.evaluations
        row["diagnostics"] = _json_safe(rep.diagnostics)
        rows.append(row)
    return {"dist": cmp.dist, "x": cmp.x, "exact": _json_num(cmp.exact),
            "ordering_ok": cmp.ordering_ok, "rows": rows}


def render_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([r["dist"], fmt_num(r["x"]), r["method"],
                    r["bound_raw"] if isinstance(r["bound_raw"], str) else fmt_num(r["bound_raw"]),
                    fmt_num(r["bound_clamped"]), fmt_num(r["argmin_alpha"]),
                    fmt_num(r["argmin_z"]), r["status"]])
    return buf.getvalue()


def render_table(header, rows) -> str:
    cells = [list(header)] + [["" if c is None else str(c) for c in r] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _table_num(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, str):
        return v
    return f"{float(v):.6g}"


def comparison_table(cmp: B.Comparison) -> str:
    rows = [[r.method.value, _table_num(r.bound_raw.to_json()), _table_num(r.bound_clamped),
             _table_num(r.argmin_alpha), _table_num(r.argmin_z), r.status.value]
            for r in cmp.rows]
    head = f"{cmp.dist}  x={cmp.x:g}  exact={cmp.exact:.6g}\n"
    verdict = f"ordering_ok: {'true' if cmp.ordering_ok else 'false'}\n"
    return head + render_table(("method", "bound_raw", "bound_clamped", "argmin_alpha",
                                "argmin_z", "status"), rows) + verdict


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


# ---------------------------------------------------------------------------
# commands

def _dist(spec):
    try:
        return parse_dist(spec)
    except SpecError as exc:
        raise UsageError(str(exc)) from exc


def _shift(spec):
    try:
        return parse_shift(spec)
    except (SpecError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def _positive_x(x):
    if not (math.isfinite(x) and x > 0):
        raise UsageError(f"x must be a finite number > 0, got {x!r}")
    return x


def run_bounds(cfg: RunConfig) -> tuple[str, int]:
    d = _dist(cfg.dist_spec)
    x = _positive_x(cfg.x)
    f = _shift(cfg.f_spec) if cfg.f_spec else None
    cmp = B.compare_all(d, x, f, tol=cfg.tol)
    if cfg.format == "json":
        text = _dumps(comparison_json(cmp))
    elif cfg.format == "csv":
        text = render_csv(report_row(cmp.dist, cmp.x, r) for r in cmp.rows)
    else:
        text = comparison_table(cmp)
    return text, EXIT_OK if cmp.ordering_ok else EXIT_VIOLATION


def sweep_grid(start: float, stop: float, steps: int) -> list[float]:
    if steps < 1:
        raise UsageError("steps must be >= 1")
    if not start < stop and steps > 1:
        raise UsageError("need start < stop")
    return [float(v) for v in np.linspace(start, stop, steps)]


def run_sweep(cfg: RunConfig) -> tuple[str, int]:
    d = _dist(cfg.dist_spec)
    xs = [_positive_x(x) for x in sweep_grid(*cfg.x_range)]
    f = _shift(cfg.f_spec) if cfg.f_spec else None
    cmps = [B.compare_all(d, x, f, tol=cfg.tol) for x in xs]
    ok = all(c.ordering_ok for c in cmps)
    if cfg.format == "json":
        text = _dumps({"dist": d.label, "ordering_ok": ok,
                       "rows": [comparison_json(c) for c in cmps]})
    elif cfg.format == "csv":
        text = render_csv(report_row(c.dist, c.x, r) for c in cmps for r in c.rows)
    else:
        methods = [r.method.value for r in cmps[0].rows]
        rows = [[f"{c.x:g}"] + [_table_num(r.bound_raw.to_json()) for r in c.rows]
                + ["true" if c.ordering_ok else "false"] for c in cmps]
        text = f"{d.label}\n" + render_table(["x"] + methods + ["ordering_ok"], rows)
    return text, EXIT_OK if ok else EXIT_VIOLATION


def run_verify(cfg: RunConfig, only=None, skip=(), density_scale=1.0) -> tuple[str, int]:
    vcfg = V.VerifyConfig(seed=cfg.seed, density_scale=density_scale, tol=cfg.tol,
                          only=tuple(only) if only else None, skip=tuple(skip))
    try:
        results = V.run_suite(vcfg)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    failed = [r for r in results if r.failures]
    nonconv = [r for r in results if r.nonconvergent]
    code = EXIT_VIOLATION if failed else EXIT_NONCONVERGENT if nonconv else EXIT_OK
    if cfg.format == "json":
        text = _dumps({"seed": cfg.seed, "density_scale": density_scale,
                       "passed": code == EXIT_OK,
                       "properties": [r.to_json() for r in results]})
    else:
        rows = [[r.name, "PASS" if r.passed else "FAIL", r.checked, len(r.failures),
                 r.nonconvergent] for r in results]
        text = render_table(("property", "result", "checked", "failed", "nonconvergent"), rows)
        for r in results:
            for case in r.failures:
                text += f"  {r.name}: {case}\n"
        text += f"{len(results) - len(failed)}/{len(results)} properties passed\n"
    return text, code


def run_sam_check(cfg: RunConfig, points, order: int) -> tuple[str, int]:
    f = _shift(cfg.f_spec)
    try:
        rep = sam_check(f, points, order)
    except MissingDerivativeOracle as exc:
        raise UsageError(str(exc)) from exc
    viol = None
    if rep.first_violation is not None:
        n, z, v = rep.first_violation
        viol = {"order": n, "z": _json_num(z), "derivative": _json_num(v)}
    if cfg.format == "json":
        text = _dumps({"shift": f.label, "is_sam": rep.is_sam, "orders_checked": rep.orders_checked,
                       "points_checked": [_json_num(p) for p in rep.points_checked],
                       "first_violation": viol})
    else:
        text = (f"{f.label}: SAM up to order {rep.orders_checked} at "
                f"{len(rep.points_checked)} point(s): {'yes' if rep.is_sam else 'no'}\n")
        if viol:
            text += (f"first violation: order {viol['order']} at z={fmt_num(viol['z'])}, "
                     f"derivative {fmt_num(viol['derivative'])}\n")
    return text, EXIT_OK if rep.is_sam else EXIT_VIOLATION


def run_series(cfg: RunConfig, z: float, order: int) -> tuple[str, int]:
    d = _dist(cfg.dist_spec)
    f = _shift(cfg.f_spec)
    s = series_coefficients(d, order, cfg.tol)
    try:
        res = apply_operator_series(s, f, z)
    except (MissingDerivativeOracle, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    status = res.status
    # a diverging series is reported, never given as a value
    value = None if status == "diverging" else res.value
    if cfg.format == "json":
        text = _dumps({"dist": d.label, "shift": f.label, "z": z, "order": order,
                       "status": status, "value": _json_num(value),
                       "coefficients": [_json_num(c) for c in s.coefficients],
                       "partial_sums": [_json_num(p) for p in res.partial_sums]})
    else:
        text = render_table(("n", "coefficient", "partial_sum"),
                            [[n, fmt_num(c), fmt_num(p)] for n, (c, p)
                             in enumerate(zip(s.coefficients, res.partial_sums))])
        text += f"status: {status}\nvalue: {fmt_num(value) if value is not None else '-'}\n"
    return text, EXIT_NONCONVERGENT if status == "diverging" else EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing

def _add_common(p, tol_flags=True):
    p.add_argument("--format", choices=("table", "csv", "json"), default="table")
    p.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")
    if tol_flags:
        p.add_argument("--abs-tol", type=float)
        p.add_argument("--rel-tol", type=float)
        p.add_argument("--max-subdivisions", type=int)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="opchernoff", description="Operational Chernoff tail bounds.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("bounds", help="all bounds at one threshold")
    b.add_argument("--dist", required=True, help="e.g. normal:0,1 or exp:1")
    b.add_argument("--x", required=True, type=float)
    b.add_argument("--f", dest="f_spec", help="shift function for the operational row")
    _add_common(b)

    s = sub.add_parser("sweep", help="all bounds over a grid of thresholds")
    s.add_argument("--dist", required=True)
    s.add_argument("--start", required=True, type=float)
    s.add_argument("--stop", required=True, type=float)
    s.add_argument("--steps", required=True, type=int)
    s.add_argument("--f", dest="f_spec")
    _add_common(s)

    v = sub.add_parser("verify", help="run the property suite")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--only", nargs="+", metavar="NAME", choices=list(V.PROPERTIES))
    v.add_argument("--skip", nargs="+", metavar="NAME", default=[], choices=list(V.PROPERTIES))
    v.add_argument("--density-scale", type=float, default=1.0,
                   help="multiply every density by this factor (fault injection)")
    _add_common(v)

    c = sub.add_parser("sam-check", help="probe strict absolute monotonicity")
    c.add_argument("--f", dest="f_spec", required=True)
    c.add_argument("--points", required=True, type=float, nargs="+")
    c.add_argument("--order", type=int, default=16)
    _add_common(c, tol_flags=False)

    r = sub.add_parser("series", help="truncated operator series for E[f(z + Z)]")
    r.add_argument("--dist", required=True)
    r.add_argument("--f", dest="f_spec", required=True)
    r.add_argument("--z", type=float, default=0.0)
    r.add_argument("--order", type=int, default=16)
    _add_common(r)
    return p


def _tolerance(args) -> Tolerance:
    base = Tolerance.from_env()
    kw = {}
    for name in ("abs_tol", "rel_tol", "max_subdivisions"):
        v = getattr(args, name, None)
        if v is not None:
            kw[name] = v
    return replace(base, **kw) if kw else base


def _dispatch(args) -> tuple[str, int]:
    cfg = RunConfig(command=args.command, dist_spec=getattr(args, "dist", None),
                    x=getattr(args, "x", None), f_spec=getattr(args, "f_spec", None),
                    format=args.format, tol=_tolerance(args), seed=getattr(args, "seed", 0))
    if args.command == "bounds":
        return run_bounds(cfg)
    if args.command == "sweep":
        return run_sweep(replace(cfg, x_range=(args.start, args.stop, args.steps)))
    if args.command == "verify":
        return run_verify(cfg, args.only, args.skip, args.density_scale)
    if args.command == "sam-check":
        if args.order < 0:
            raise UsageError("order must be >= 0")
        return run_sam_check(cfg, args.points, args.order)
    if args.order < 0:
        raise UsageError("order must be >= 0")
    return run_series(cfg, args.z, args.order)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text, code = _dispatch(args)
    except (UsageError, ValueError) as exc:
        print(f"opchernoff: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NonConvergent as exc:
        print(f"opchernoff: non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENT
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

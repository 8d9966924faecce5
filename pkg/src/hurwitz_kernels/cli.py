"""Command-line front end: verify, scan, kernel, errata, list.

Exit codes: 0 pass, 1 residual failure or unresolved variant, 2 usage error.
"""

from __future__ import annotations

import argparse
import ast
import csv
import io
import itertools
import json
import math
import operator
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Iterable, TextIO

from . import identities
from .contour_quadrature import cross_check, resolve_phi_normalization
from .errors import HurwitzKernelError, InvalidParams, PrecisionLimit, VariantUnresolved
from .identities import REGISTRY, VariantResolution
from .kernels import KernelParams, phi_kernel_eval, psi_kernel_eval
from .report import IdentityCase, IdentityReport

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SCHEMA = 1
CSV_COLUMNS = ("id", "k", "N_or_m", "a", "b", "alpha", "lhs", "rhs", "abs_res", "rel_res", "variant", "bound")
INT_PARAMS = ("k", "N", "m", "n", "p")
REAL_PARAMS = ("a", "b", "alpha")
CROSS_CHECK_TOL = 1e-6


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    identity: str | None = None
    params: dict[str, list[Any]] = field(default_factory=dict)
    tol: float | None = None
    fmt: str = "text"
    output: str | None = None
    quick: bool = False
    variant: str | None = None


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv,
           ast.Pow: operator.pow}


def parse_real(text: str) -> float:
    """Arithmetic on numbers and the literal ``pi``: '2pi', 'pi/2', '1/3', '0.75'."""
    src = text.strip().lower().replace("π", "pi")
    src = "".join(c + "*" if c.isdigit() and i + 1 < len(src) and src[i + 1] == "p" else c
                  for i, c in enumerate(src))

    def ev(node: ast.AST) -> float:
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        raise UsageError(f"cannot parse number {text!r}")

    try:
        value = ev(ast.parse(src, mode="eval"))
    except (SyntaxError, ZeroDivisionError, OverflowError):
        raise UsageError(f"cannot parse number {text!r}") from None
    if not math.isfinite(value):
        raise UsageError(f"non-finite number {text!r}")
    return value


def parse_int(text: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise UsageError(f"expected an integer, got {text!r}") from None


def parse_list(name: str, text: str) -> list[Any]:
    """Comma list; integer parameters also take inclusive ranges 'lo:hi'."""
    values: list[Any] = []
    for item in (t for t in text.split(",") if t.strip()):
        if name in INT_PARAMS:
            if ":" in item:
                lo, _, hi = item.partition(":")
                values.extend(range(parse_int(lo), parse_int(hi) + 1))
            else:
                values.append(parse_int(item))
        else:
            values.append(parse_real(item))
    if not values:
        raise UsageError(f"empty value list for --{name}")
    return values


def _collect_params(ns: argparse.Namespace) -> dict[str, list[Any]]:
    out = {}
    for name in INT_PARAMS + REAL_PARAMS:
        raw = getattr(ns, name, None)
        if raw is not None:
            out[name] = parse_list(name, raw)
    return out


# ---------------------------------------------------------------------------
# formatting
# ---------------------------------------------------------------------------

def fmt_float(x: float) -> str:
    if isinstance(x, complex):
        x = x.real if x.imag == 0 else abs(x)
    return "%.16e" % x


def _json(obj: Any, indent: int = 0) -> str:
    """Deterministic JSON with every float written as %.16e (non-finite -> null)."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if obj is None or isinstance(obj, bool):
        return "null" if obj is None else ("true" if obj else "false")
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt_float(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(f"{inner}{_json(str(k))}: {_json(v, indent + 1)}" for k, v in obj.items())
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_json(v) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + _json(v, indent + 1) for v in obj) + "\n" + pad + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


@dataclass(frozen=True)
class Row:
    id: str
    params: dict[str, Any]
    lhs: float
    rhs: float
    abs_res: float
    rel_res: float
    variant: str
    bound: float
    tol: float
    status: str           # pass, fail, precision_limit, unresolved

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def csv_fields(self) -> list[str]:
        p = self.params
        n_or_m = next((p[n] for n in ("N", "m", "n", "p") if n in p), "")
        cols = [self.id, p.get("k", ""), n_or_m, p.get("a", ""), p.get("b", ""), p.get("alpha", ""),
                self.lhs, self.rhs, self.abs_res, self.rel_res, self.variant, self.bound]
        return [fmt_float(v) if isinstance(v, float) else str(v) for v in cols]

    def as_json(self) -> dict[str, Any]:
        return {"id": self.id, "params": dict(self.params), "lhs": self.lhs, "rhs": self.rhs,
                "abs_residual": self.abs_res, "rel_residual": self.rel_res, "variant": self.variant,
                "bound": self.bound, "tol": self.tol, "status": self.status}


def _real(z: float | complex) -> float:
    # complex sides only arise with a vanishing imaginary part; otherwise report the modulus
    if isinstance(z, complex):
        return float(z.real) if z.imag == 0 else abs(z)
    return float(z)


def _row_from_report(rep: IdentityReport) -> Row:
    status = "pass" if rep.passed else "fail"
    return Row(rep.case.id, dict(rep.case.params), _real(rep.lhs), _real(rep.rhs), rep.abs_residual,
               rep.rel_residual, rep.variant_chosen or "", rep.truncation_bounds, rep.tol, status)


def run_case(ident: str, params: dict[str, Any], tol: float | None = None, variant: str | None = None) -> Row:
    """Evaluate one case; numerical failures become rows, parameter errors propagate."""
    case = IdentityCase(ident, dict(params), variant)
    used_tol = identities.default_tol(case) if tol is None else tol
    nan = math.nan
    try:
        return _row_from_report(identities.evaluate(case, tol))
    except PrecisionLimit:
        return Row(ident, dict(params), nan, nan, nan, nan, variant or "", math.inf, used_tol, "precision_limit")
    except VariantUnresolved as exc:
        best = min(exc.reports, key=lambda r: r.rel_residual) if exc.reports else None
        if best is None:
            return Row(ident, dict(params), nan, nan, nan, nan, "", math.inf, used_tol, "unresolved")
        row = _row_from_report(best)
        return Row(row.id, row.params, row.lhs, row.rhs, row.abs_res, row.rel_res, row.variant, row.bound,
                   row.tol, "unresolved")


def _run_case_packed(job: tuple[str, dict[str, Any], float | None]) -> Row:
    return run_case(*job)


def worker_count() -> int:
    raw = os.environ.get("HK_THREADS", "")
    if raw.strip():
        try:
            n = int(raw)
        except ValueError:
            raise UsageError(f"HK_THREADS must be an integer, got {raw!r}") from None
        return max(1, n)
    return max(1, min(8, os.cpu_count() or 1))


def run_cases(jobs: list[tuple[str, dict[str, Any], float | None]]) -> list[Row]:
    """Rows in job order regardless of which worker finishes first."""
    workers = min(worker_count(), len(jobs))
    if workers <= 1:
        return [_run_case_packed(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_case_packed, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def render_rows(rows: list[Row], fmt: str, command: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in rows:
            w.writerow(r.csv_fields())
        return buf.getvalue()
    if fmt == "json":
        return _json({"schema": SCHEMA, "command": command, "rows": [r.as_json() for r in rows]}) + "\n"
    lines = []
    for r in rows:
        params = " ".join(f"{k}={_short(v)}" for k, v in r.params.items())
        lines.append(f"{r.status.upper():<15} {r.id:<22} {params:<52} rel={fmt_float(r.rel_res)} "
                     f"tol={r.tol:.0e} variant={r.variant or '-'}")
    return "\n".join(lines) + "\n"


def _short(v: Any) -> str:
    if isinstance(v, float):
        if v == math.pi:
            return "pi"
        for num, den in ((1, 2), (2, 1), (1, 4), (4, 1)):
            if v == math.pi * num / den:
                return f"{num}pi/{den}" if den != 1 else f"{num}pi"
        return f"{v:.6g}"
    return str(v)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _single(cfg: RunConfig) -> dict[str, Any]:
    entry = identities._entry(cfg.identity)
    out = {}
    for name, vals in cfg.params.items():
        if len(vals) != 1:
            raise UsageError(f"verify takes one value per parameter; --{name} has {len(vals)}")
        out[name] = vals[0]
    if "alpha" in entry.params and "alpha" not in out:
        out["alpha"] = math.pi
    extra = set(out) - set(entry.params)
    if extra:
        raise UsageError(f"{cfg.identity} does not take {', '.join(sorted(extra))}")
    return {k: out[k] for k in entry.params if k in out}


def cmd_verify(cfg: RunConfig, out: TextIO) -> int:
    params = _single(cfg)
    row = run_case(cfg.identity, params, cfg.tol, cfg.variant)
    out.write(render_rows([row], cfg.fmt, "verify"))
    return EXIT_OK if row.ok else EXIT_FAIL


def scan_jobs(cfg: RunConfig) -> list[tuple[str, dict[str, Any], float | None]]:
    ids = sorted(REGISTRY) if cfg.identity == "all" else [cfg.identity]
    jobs = []
    for ident in ids:
        entry = REGISTRY[ident]
        if cfg.params:
            if cfg.identity == "all":
                raise UsageError("scan all takes no parameter lists; use --quick or name an identity")
            axes = dict(cfg.params)
            if "alpha" in entry.params and "alpha" not in axes:
                axes["alpha"] = [math.pi]
            extra = set(axes) - set(entry.params)
            if extra:
                raise UsageError(f"{ident} does not take {', '.join(sorted(extra))}")
            names = [n for n in entry.params if n in axes]
            cases = [dict(zip(names, combo)) for combo in itertools.product(*(axes[n] for n in names))]
        else:
            cases = list(entry.quick if cfg.quick else entry.grid)
        order = list(entry.params)
        cases.sort(key=lambda c: tuple(c.get(n, 0) for n in order))
        jobs.extend((ident, c, cfg.tol) for c in cases)
    if not jobs:
        raise UsageError("empty grid")
    return jobs


def cmd_scan(cfg: RunConfig, out: TextIO) -> int:
    jobs = scan_jobs(cfg)
    for ident, params, _ in jobs:                # reject bad parameters before any computation
        IdentityCase(ident, dict(params))
    rows = run_cases(jobs)
    out.write(render_rows(rows, cfg.fmt, "scan"))
    return EXIT_OK if all(r.ok for r in rows) else EXIT_FAIL


def cmd_kernel(ns: argparse.Namespace, cfg: RunConfig, out: TextIO) -> int:
    p = KernelParams(parse_real(ns.x), parse_real(ns.a), parse_int(ns.k), parse_real(ns.alpha))
    kv = psi_kernel_eval(p) if ns.kind == "psi" else phi_kernel_eval(p)
    record: dict[str, Any] = {"kernel": ns.kind, "x": p.x, "a": p.a, "k": p.k, "alpha": p.alpha,
                              "value": kv.value, "bound": kv.bound}
    status = EXIT_OK
    if ns.cross_check:
        cc = cross_check(ns.kind, p)
        record.update(quadrature=float(complex(cc.quadrature).real), quadrature_imag=float(complex(cc.quadrature).imag),
                      quadrature_error=cc.quadrature_error, difference=abs(cc.quadrature - kv.value))
        if record["difference"] > CROSS_CHECK_TOL:
            status = EXIT_FAIL
    if cfg.fmt == "json":
        out.write(_json({"schema": SCHEMA, "command": "kernel", **record}) + "\n")
    elif cfg.fmt == "csv":
        keys = list(record)
        out.write(",".join(keys) + "\n")
        out.write(",".join(fmt_float(record[k]) if isinstance(record[k], float) else str(record[k])
                           for k in keys) + "\n")
    else:
        out.write(f"{ns.kind}(x={_short(p.x)}, a={_short(p.a)}; k={p.k}) = {kv.value!r}\n")
        if ns.cross_check:
            out.write(f"quadrature = {record['quadrature']!r} (error estimate {record['quadrature_error']:.2e})\n")
            out.write(f"difference = {record['difference']:.3e}\n")
    return status


def errata_resolutions() -> list[tuple[str, VariantResolution | None, str]]:
    results: list[tuple[str, VariantResolution | None, str]] = []
    for ident in identities.ambiguous_ids():
        try:
            results.append((ident, identities.resolve_variant(ident), ""))
        except (VariantUnresolved, PrecisionLimit) as exc:
            results.append((ident, None, str(exc)))
    try:
        results.append(("phi_normalization", resolve_phi_normalization(), ""))
    except (VariantUnresolved, HurwitzKernelError) as exc:
        results.append(("phi_normalization", None, str(exc)))
    return results


def cmd_errata(cfg: RunConfig, out: TextIO) -> int:
    results = errata_resolutions()
    entries = []
    for ident, res, err in results:
        if res is None:
            ambiguity = REGISTRY[ident].ambiguity if ident in REGISTRY else ""
            entries.append({"id": ident, "ambiguity": ambiguity, "resolved": "UNRESOLVED", "note": err})
        else:
            entry = res.errata_entry()
            entry["residuals"] = {t: list(v) for t, v in res.residuals.items()}
            entries.append(entry)
    unresolved = any(e["resolved"] == "UNRESOLVED" for e in entries)
    if cfg.fmt == "json":
        out.write(_json({"schema": SCHEMA, "command": "errata", "entries": entries}) + "\n")
    elif cfg.fmt == "csv":
        out.write("id,resolved,separation\n")
        for e in entries:
            out.write(f"{e['id']},{e['resolved']},{fmt_float(e.get('separation', math.nan))}\n")
    else:
        out.write("# Errata\n")
        for e in entries:
            out.write(f"\n## {e['id']}: {e['resolved']}\n\n")
            if e.get("ambiguity"):
                out.write(f"{e['ambiguity']}\n\n")
            for tag, note in e.get("readings", {}).items():
                mark = "**" if tag == e["resolved"] else ""
                out.write(f"- {mark}{tag}{mark}: {note}; max rel residual "
                          f"{e['max_residual'][tag]:.3e}, min {e['min_residual'][tag]:.3e}\n")
            if "separation" in e:
                out.write(f"\nseparation {e['separation']:.3e}\n")
            if e["resolved"] == "UNRESOLVED":
                out.write(f"{e['note']}\n")
    return EXIT_FAIL if unresolved else EXIT_OK


def cmd_list(cfg: RunConfig, out: TextIO) -> int:
    items = []
    for ident in sorted(REGISTRY):
        e = REGISTRY[ident]
        items.append({"id": ident, "params": list(e.params), "readings": list(e.tags), "default": e.default,
                      "grid_size": len(e.grid), "summary": e.summary})
    if cfg.fmt == "json":
        out.write(_json({"schema": SCHEMA, "command": "list", "identities": items}) + "\n")
    elif cfg.fmt == "csv":
        out.write("id,params,readings,default,grid_size\n")
        for it in items:
            out.write(f"{it['id']},{' '.join(it['params'])},{' '.join(it['readings'])},{it['default']},"
                      f"{it['grid_size']}\n")
    else:
        for it in items:
            readings = ", ".join(it["readings"])
            out.write(f"{it['id']:<24} ({', '.join(it['params'])})  readings: {readings}\n    {it['summary']}\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _add_param_flags(sp: argparse.ArgumentParser) -> None:
    for name in INT_PARAMS + REAL_PARAMS:
        sp.add_argument(f"--{name}", default=None, metavar="V", help=f"value(s) of {name}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=("text", "csv", "json"), default="text")
    common.add_argument("--output", "-o", default=None, help="write to this file instead of stdout")
    common.add_argument("--tol", default=None, help="override the residual tolerance")

    parser = argparse.ArgumentParser(prog="hk", description="Hurwitz kernel identities: evaluation and verification")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="verify one identity case")
    v.add_argument("identity")
    v.add_argument("--variant", default=None, help="force a reading instead of the resolved one")
    _add_param_flags(v)

    s = sub.add_parser("scan", parents=[common], help="verify a grid of cases")
    s.add_argument("identity", help="identity id or 'all'")
    s.add_argument("--quick", action="store_true", help="smallest registered cases only")
    _add_param_flags(s)

    k = sub.add_parser("kernel", parents=[common], help="evaluate Psi or Phi")
    k.add_argument("kind", choices=("psi", "phi"))
    k.add_argument("--x", required=True)
    k.add_argument("--a", required=True)
    k.add_argument("--k", required=True)
    k.add_argument("--alpha", default="pi")
    k.add_argument("--cross-check", action="store_true", help="also integrate the Mellin-Barnes form")

    sub.add_parser("errata", parents=[common], help="resolve every ambiguous reading")
    sub.add_parser("list", parents=[common], help="list registered identities")
    return parser


def _config(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(ns.command, fmt=ns.fmt, output=ns.output)
    if ns.tol is not None:
        cfg.tol = parse_real(ns.tol)
        if not cfg.tol > 0:
            raise UsageError("--tol must be > 0")
    if ns.command in ("verify", "scan"):
        if ns.identity not in REGISTRY and not (ns.command == "scan" and ns.identity == "all"):
            raise UsageError(f"unknown identity {ns.identity!r}; known: {', '.join(sorted(REGISTRY))}")
        cfg.identity = ns.identity
        cfg.params = _collect_params(ns)
        cfg.quick = getattr(ns, "quick", False)
        cfg.variant = getattr(ns, "variant", None)
        if cfg.variant is not None:
            REGISTRY[cfg.identity].reading(cfg.variant)
    return cfg


def main(argv: Iterable[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(None if argv is None else list(argv))
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    out: TextIO = sys.stdout
    try:
        cfg = _config(ns)
        if cfg.output:
            out = open(cfg.output, "w", encoding="utf-8", newline="")
        if cfg.command == "verify":
            return cmd_verify(cfg, out)
        if cfg.command == "scan":
            return cmd_scan(cfg, out)
        if cfg.command == "kernel":
            return cmd_kernel(ns, cfg, out)
        if cfg.command == "errata":
            return cmd_errata(cfg, out)
        return cmd_list(cfg, out)
    except (UsageError, InvalidParams) as exc:
        print(f"hk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        if out is not sys.stdout:
            out.close()


if __name__ == "__main__":
    sys.exit(main())

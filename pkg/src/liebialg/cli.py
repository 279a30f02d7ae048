"""Command-line entry point: ``liebialg <subcommand> ...``.

Every subcommand builds a report dict {command, ok, seed, summary, results},
renders it as text, JSON (schema-validated), CSV or LaTeX, and exits 0 iff
``ok``.  Usage errors (unknown entry, missing parameter) exit with status 2.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from importlib import resources

import jsonschema
import sympy as sp

from . import tables
from .algebra_core import jacobi_check
from .automorphism import bialgebra_iso, load_templates, template_for, verify_template
from .bialgebra import build_double, cocycle_check
from .catalog import DATA_ENV, check_parameters, load_catalog, load_yaml, normalize_name
from .dynamics import DEFAULT_XI, lax_residual
from .poisson import FLAVORS, PAIRS, invariant_fields, sklyanin
from .rmatrix import FAMILY, Inconsistent, classify, format_r, parse_r, solve_coboundary
from .scalars import PARAMETERS, serialize
from .symbolic import parse, simplify

FORMATS = ("text", "json", "csv", "latex")
WHICH = ("3", "3'", "4", "5", "6", "7")


class UsageError(Exception):
    """Bad entry name or parameters; exit status 2."""


@dataclass
class RunConfig:
    subcommand: str
    entry: str | None = None
    all: bool = False
    params: dict = field(default_factory=dict)
    format: str = "text"
    seed: int = 0
    tol: float = tables.TOL
    samples: int = 20
    algebra: str | None = None
    pair: tuple = ()
    flavor: str = "sklyanin"
    r: str | None = None
    which: tuple = ("5", "6", "7")
    t_end: float = 1.0
    dt: float = 1e-3
    xi: tuple = DEFAULT_XI
    what: str = "classification"


# --- helpers ---------------------------------------------------------------------

def parse_params(items):
    out = {}
    for item in items or ():
        if "=" not in item:
            raise UsageError(f"--param expects k=v, got {item!r}")
        k, v = item.split("=", 1)
        if k not in ("a", "b"):
            raise UsageError(f"unknown parameter {k!r}; entries are parameterized by a and b")
        try:
            out[k] = sp.Rational(v)
        except (TypeError, ValueError, SyntaxError) as exc:
            raise UsageError(f"parameter {k} must be rational, got {v!r}") from exc
    return out


def _entry(cfg: RunConfig, name=None):
    cat = load_catalog()
    name = name or cfg.entry
    if not name:
        raise UsageError("an entry is required (--entry)")
    try:
        b = cat[name]
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc
    try:
        check_parameters(cfg.params, b.name)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    unused = set(cfg.params) - {str(p) for p in b.parameters}
    if unused:
        raise UsageError(f"{b.name} has no parameter(s) {sorted(unused)}")
    return b


def _subs(cfg: RunConfig):
    return {PARAMETERS[k]: v for k, v in cfg.params.items()}


def _r_for(cfg: RunConfig, b):
    """The r-matrix: --r if given, else the listed one, else the classification witness."""
    text = cfg.r or tables.listed_r(b.name)
    if text is None:
        c = classify(b)
        if c.witness is None:
            raise UsageError(f"{b.name} is not coboundary; no r-matrix")
        r = c.witness
    else:
        r = parse_r(text)
    sol = solve_coboundary(b)
    if isinstance(sol, Inconsistent) or not sol.contains(r):
        raise UsageError(f"r = {text} does not solve the coboundary equation for {b.name}")
    return r


def _float(x):
    return float(f"{x:.6e}")


# --- subcommands -----------------------------------------------------------------

def cmd_catalog_validate(cfg):
    cat = load_catalog()
    results = []
    for name in cat.names():
        b = cat[name]
        rec = {"entry": name, "kind": b.meta.get("kind"),
               "jacobi_g": not jacobi_check(b.g.f), "jacobi_dual": not jacobi_check(b.g_dual.f),
               "cocycle": not cocycle_check(b)}
        rec["double"] = rec["cocycle"] and not build_double(b, check=False).jacobi_violations()
        rec["pass"] = all(rec[k] for k in ("jacobi_g", "jacobi_dual", "cocycle", "double"))
        results.append(rec)
    ok = all(r["pass"] for r in results)
    return {"ok": ok, "summary": {"entries": len(results), "failed": sum(not r["pass"] for r in results)},
            "results": results}


def cmd_classify(cfg):
    if cfg.all:
        results = tables.classification_rows()
    else:
        b = _entry(cfg)
        if cfg.params:
            b = b.subs(_subs(cfg))
        results = [{"group": "single", **classify(b).as_dict()}]
    counts = {}
    for r in results:
        counts[r["verdict"]] = counts.get(r["verdict"], 0) + 1
    return {"ok": True, "summary": {"rows": len(results), "verdicts": counts}, "results": results}


def cmd_aut_verify(cfg):
    if not cfg.algebra:
        raise UsageError("--algebra is required")
    cat = load_catalog()
    from .algebra_core import canonical_type
    try:
        key = canonical_type(normalize_name(cfg.algebra))
        templates = load_templates()[key]
    except (KeyError, ValueError) as exc:
        raise UsageError(f"no automorphism template for {cfg.algebra!r}") from exc
    g = cat.algebra(key)
    results = []
    for T in templates:
        rep = verify_template(g, T, samples=100, seed=cfg.seed)
        results.append({"algebra": key, "variant": T.variant, "identically": rep.identically,
                        "samples": rep.samples, "sample_failures": len(rep.failures),
                        "closure_failures": len(rep.closure_failures), "pass": rep.passed,
                        "matrix": [[serialize(x) for x in row] for row in T.matrix.tolist()]})
    return {"ok": all(r["pass"] for r in results), "summary": {"templates": len(results)},
            "results": results}


def cmd_iso(cfg):
    if len(cfg.pair) != 2:
        raise UsageError("--pair takes two entries")
    b1, b2 = (_entry(cfg, n) for n in cfg.pair)
    if b1.g.f != b2.g.f:
        raise UsageError("both entries must share the algebra g (compare dual brackets over Aut(g))")
    try:
        T = template_for(b1.g.name)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"no automorphism template for {b1.g.name}") from exc
    v = bialgebra_iso(b1.g, b1.g_dual, b2.g_dual, T)
    rec = {"pair": [b1.name, b2.name], **v.as_dict()}
    return {"ok": v.verdict != "undetermined", "summary": {"verdict": v.verdict}, "results": [rec]}


def cmd_poisson(cfg):
    b = _entry(cfg)
    r = _r_for(cfg, b)
    subs = _subs(cfg)
    g = b.g.subs(subs) if subs else b.g
    P = sklyanin(g, r.subs(subs), cfg.flavor)
    results = []
    for (i, j), e in zip(PAIRS, P.brackets()):
        e = simplify(e)
        results.append({"bracket": f"{{x{i + 1},x{j + 1}}}", "value": sp.sstr(e), "latex": sp.latex(e)})
    return {"ok": True, "summary": {"entry": b.name, "flavor": cfg.flavor, "r": format_r(r)},
            "results": results}


def _field_results(cfg):
    out = []
    for row in tables.field_rows(samples=cfg.samples, seed=cfg.seed):
        cells = [{"cell": f"{side} X{i + 1}", "deviation": _float(d), "pass": d <= cfg.tol}
                 for side in ("left", "right") for i, d in enumerate(row[side])]
        out.append({"table": row["table"], "item": row["algebra"], "suspect": row["suspect"],
                    "pass": all(c["pass"] for c in cells), "cells": cells,
                    "printed_commute": row["printed_commute"]})
    return out


def _bracket_results(cfg, which):
    out = []
    for rec in tables.bracket_cells(samples=cfg.samples, seed=cfg.seed, which=which):
        cells = [{"cell": c["bracket"], "deviation": _float(c["deviation"]), "pass": c["deviation"] <= cfg.tol,
                  "printed": c["printed"], "computed": sp.sstr(c["computed"])} for c in rec["cells"]]
        item = {"table": rec["table"], "item": rec["entry"], "flavor": rec["flavor"],
                "suspect": rec["suspect"], "cells": cells, "jacobi": _float(rec["jacobi"]),
                "jacobi_pass": rec["jacobi"] <= tables.JACOBI_TOL}
        if "linearization" in rec:
            item["linearization"] = rec["linearization"]
        item["pass"] = (all(c["pass"] for c in cells) and item["jacobi_pass"]
                        and not item.get("linearization"))
        out.append(item)
    return out


def _rmatrix_results(which):
    out = []
    if "3" in which:
        for row in tables.skew_rows():
            out.append({"table": "3", "item": row["entry"], "pass": row["member"] and row["omega_ok"],
                        **{k: row[k] for k in ("r", "member", "omega", "omega_ok")}})
    if "3'" in which:
        for row in tables.nonskew_rows():
            ok = row["member"] and row["cybe"] and row["sym_invariant"] and row["claim_ok"]
            out.append({"table": "3'", "item": row["entry"], "pass": ok, **row})
    if "4" in which:
        for row in tables.bi_rows():
            ok = all(row[k] for k in ("r_member", "r_omega_ok", "rt_member", "rt_omega_ok"))
            out.append({"table": "4", "item": f"{row['entry']} / {row['dual_entry']}", "pass": ok, **row})
    return out


def cmd_tables_verify(cfg):
    bad = set(cfg.which) - set(WHICH)
    if bad:
        raise UsageError(f"--which accepts {', '.join(WHICH)}; got {sorted(bad)}")
    results = _rmatrix_results(cfg.which)
    if "5" in cfg.which:
        results += _field_results(cfg)
    which67 = tuple(w for w in ("6", "7") if w in cfg.which)
    if which67:
        results += _bracket_results(cfg, which67)
    results = tables.report(results)
    failing = [f"{r['table']} {r['item']}" + (f" [{r['flavor']}]" if "flavor" in r else "")
               for r in results if not r["pass"]]
    return {"ok": not failing, "summary": {"checked": len(results), "failing": failing},
            "results": results}


def cmd_lax(cfg):
    b = _entry(cfg)
    missing = sorted(str(p) for p in b.parameters if str(p) not in cfg.params)
    if missing:
        raise UsageError(f"{b.name} needs numeric values for {missing} (--param k=v)")
    r = _r_for(cfg, b).subs(_subs(cfg))
    g = b.g.subs(_subs(cfg))
    try:
        rep = lax_residual(g, r, cfg.xi, cfg.dt, cfg.t_end)
    except (ValueError, ArithmeticError) as exc:
        raise UsageError(str(exc)) from exc
    results = [{"t": _float(t), "xi1": float(x[0]), "xi2": float(x[1]), "xi3": float(x[2]),
                "residual": _float(res), "drift": _float(d)}
               for t, x, res, d in zip(rep.times, rep.trajectory, rep.residuals, rep.drifts)]
    return {"ok": rep.drift < 1e-8, "summary": {"entry": b.name, "r": format_r(r), "dt": cfg.dt,
                                                 "t_end": cfg.t_end, "max_drift": _float(rep.drift),
                                                 "max_residual": _float(rep.residual)},
            "results": results}


def cmd_export(cfg):
    if cfg.what == "classification":
        return cmd_classify(RunConfig("classify", all=True))
    if cfg.what == "fields":
        cat = load_catalog()
        results = []
        for row in load_yaml("fields.yaml"):
            fr = invariant_fields(cat.algebra(row["algebra"]))
            for side in ("left", "right"):
                for i in range(3):
                    results.append({"algebra": row["algebra"], "field": f"X{i + 1}^{side[0].upper()}",
                                    **{f"d/dx{k + 1}": sp.sstr(simplify(fr.fields(side)[i, k]))
                                       for k in range(3)}})
        return {"ok": True, "summary": {"rows": len(results)}, "results": results}
    if cfg.what == "brackets":
        cat = load_catalog()
        results = []
        for col in load_yaml("brackets.yaml"):
            b = cat[col["entry"]]
            for flavor in FLAVORS:
                if flavor in col:
                    P = sklyanin(b.g, parse_r(col["r"]), flavor)
                    results.append({"entry": col["entry"], "flavor": flavor,
                                    **{f"{{x{i + 1},x{j + 1}}}": sp.sstr(simplify(e))
                                       for (i, j), e in zip(PAIRS, P.brackets())}})
        return {"ok": True, "summary": {"rows": len(results)}, "results": results}
    raise UsageError(f"unknown export {cfg.what!r}")


COMMANDS = {"catalog validate": cmd_catalog_validate, "classify": cmd_classify,
            "aut verify": cmd_aut_verify, "iso": cmd_iso, "poisson": cmd_poisson,
            "tables verify": cmd_tables_verify, "lax": cmd_lax, "export": cmd_export}


# --- rendering ---------------------------------------------------------------------

def load_schema():
    return json.loads(resources.files("liebialg").joinpath("data/report.schema.json").read_text())


def _flat(rec):
    out = {}
    for k, v in rec.items():
        if isinstance(v, (list, dict)):
            v = json.dumps(v, sort_keys=True)
        out[k] = "" if v is None else v
    return out


def _latex_bracket(text):
    return text.replace("{", "\\{").replace("}", "\\}")


def _latex_text(text):
    text = str(text)
    for ch in "\\{}_&%#$^":
        text = text.replace(ch, "\\" + ch)
    return text


def _latex_cell(value):
    """Math cells as LaTeX, anything else (names, verdicts) as escaped text."""
    if isinstance(value, bool) or value == "":
        return _latex_text(value)
    try:
        e = parse(str(value), FAMILY)
    except ValueError:
        return _latex_text(value)
    return f"${sp.latex(e)}$"


def render(report, fmt):
    if fmt == "json":
        jsonschema.validate(report, load_schema())
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    rows = [_flat(r) for r in report["results"]]
    cols = list(dict.fromkeys(k for r in rows for k in r))
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    if fmt == "latex":
        res = report["results"]
        if res and "latex" in res[0]:
            return "".join(_latex_bracket(r["bracket"]) + " &= " + r["latex"] + " \\\\\n" for r in res)
        lines = ["\\begin{tabular}{" + "l" * len(cols) + "}",
                 " & ".join(_latex_text(c) for c in cols) + " \\\\", "\\hline"]
        lines += [" & ".join(_latex_cell(r.get(c, "")) for c in cols) + " \\\\" for r in rows]
        lines.append("\\end{tabular}")
        return "\n".join(lines) + "\n"
    out = [f"{report['command']}: {'PASS' if report['ok'] else 'FAIL'}"]
    for k, v in sorted(report.get("summary", {}).items()):
        out.append(f"  {k}: {v}")
    for r in rows:
        out.append("  " + "  ".join(f"{k}={v}" for k, v in r.items() if k not in ("cells", "matrix")))
    return "\n".join(out) + "\n"


def run(cfg: RunConfig):
    """Execute one subcommand; returns (exit status, rendered report)."""
    try:
        body = COMMANDS[cfg.subcommand](cfg)
    except UsageError as exc:
        return 2, f"error: {exc}\n"
    except FileNotFoundError as exc:
        return 2, f"error: fixture file missing ({exc.filename}); check ${DATA_ENV}\n"
    report = {"command": cfg.subcommand, "seed": cfg.seed, **tables.report(body)}
    return (0 if report["ok"] else 1), render(report, cfg.format)


# --- argument parsing --------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="liebialg", description=f"Three-dimensional Lie bialgebra toolkit. "
                                                              f"Fixture directory override: ${DATA_ENV}.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--json", action="store_const", const="json", dest="format",
                        help="shorthand for --format json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=tables.TOL)
    common.add_argument("--samples", type=int, default=20)
    sub = p.add_subparsers(dest="cmd", required=True)

    cat = sub.add_parser("catalog").add_subparsers(dest="action", required=True)
    cat.add_parser("validate", parents=[common])

    c = sub.add_parser("classify", parents=[common])
    grp = c.add_mutually_exclusive_group(required=True)
    grp.add_argument("--entry")
    grp.add_argument("--all", action="store_true")
    c.add_argument("--param", action="append", default=[])

    aut = sub.add_parser("aut").add_subparsers(dest="action", required=True)
    aut.add_parser("verify", parents=[common]).add_argument("--algebra", required=True)

    i = sub.add_parser("iso", parents=[common])
    i.add_argument("--pair", nargs=2, required=True, metavar=("ENTRY", "ENTRY"))

    po = sub.add_parser("poisson", parents=[common])
    po.add_argument("--entry", required=True)
    po.add_argument("--param", action="append", default=[])
    po.add_argument("--flavor", choices=FLAVORS, default="sklyanin")
    po.add_argument("--r", help="r-matrix, e.g. 'b*w(2,3)'; defaults to the listed one")
    po.add_argument("--latex", action="store_const", const="latex", dest="format")

    tb = sub.add_parser("tables").add_subparsers(dest="action", required=True)
    tv = tb.add_parser("verify", parents=[common])
    tv.add_argument("--which", default="5,6,7")
    tv.add_argument("--report", choices=FORMATS, dest="format")

    lx = sub.add_parser("lax", parents=[common])
    lx.add_argument("--entry", required=True)
    lx.add_argument("--param", action="append", default=[])
    lx.add_argument("--r")
    lx.add_argument("--t", type=float, default=1.0, dest="t_end")
    lx.add_argument("--dt", type=float, default=1e-3)
    lx.add_argument("--xi", default=",".join(map(str, DEFAULT_XI)), help="initial point xi1,xi2,xi3")
    lx.add_argument("--csv", action="store_const", const="csv", dest="format")

    ex = sub.add_parser("export", parents=[common])
    ex.add_argument("--what", choices=("classification", "fields", "brackets"), default="classification")
    return p


def config_from_args(ns) -> RunConfig:
    name = ns.cmd + (f" {ns.action}" if getattr(ns, "action", None) else "")
    cfg = RunConfig(name, format=ns.format or "text", seed=ns.seed, tol=ns.tol, samples=ns.samples)
    cfg.entry = getattr(ns, "entry", None)
    cfg.all = getattr(ns, "all", False)
    cfg.params = parse_params(getattr(ns, "param", []))
    cfg.algebra = getattr(ns, "algebra", None)
    cfg.pair = tuple(getattr(ns, "pair", None) or ())
    cfg.flavor = getattr(ns, "flavor", "sklyanin")
    cfg.r = getattr(ns, "r", None)
    if hasattr(ns, "which"):
        cfg.which = tuple(w.strip() for w in ns.which.split(",") if w.strip())
    if hasattr(ns, "t_end"):
        cfg.t_end, cfg.dt = ns.t_end, ns.dt
        try:
            cfg.xi = tuple(float(x) for x in ns.xi.split(","))
        except ValueError as exc:
            raise UsageError(f"--xi expects three numbers, got {ns.xi!r}") from exc
        if len(cfg.xi) != 3:
            raise UsageError("--xi expects three numbers")
    cfg.what = getattr(ns, "what", "classification")
    return cfg


def main(argv=None):
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    status, text = run(cfg)
    try:
        (sys.stderr if status == 2 else sys.stdout).write(text)
        sys.stdout.flush()
    except BrokenPipeError:
        # reader closed early (e.g. piped into head); not a failure of the run
        sys.stdout = open(os.devnull, "w")
    except OSError as exc:
        sys.stderr.write(f"error: cannot write report: {exc}\n")
        return 3
    return status


if __name__ == "__main__":
    sys.exit(main())

"""Recompute every tabulated row and write a JSON discrepancy report.

    python scripts/reproduce_tables.py [--out report.json] [--samples 20] [--seed 0]

Prints one summary line per table group; the JSON holds every row and cell.
"""
import argparse
import json
import time

from liebialg import tables
from liebialg.catalog import load_catalog


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="table_report.json")
    ap.add_argument("--samples", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    cat = load_catalog()
    t0 = time.perf_counter()
    groups = {
        "skew": tables.skew_rows(cat),
        "nonskew": tables.nonskew_rows(cat),
        "bi": tables.bi_rows(cat),
        "noncoboundary": tables.noncoboundary_rows(cat),
        "classification": tables.classification_rows(cat),
        "fields": tables.field_rows(cat, args.samples, args.seed),
        "brackets": tables.bracket_cells(cat, args.samples, args.seed),
    }
    bad = {
        "skew": [r["entry"] for r in groups["skew"] if not (r["member"] and r["omega_ok"])],
        "nonskew": [r["entry"] for r in groups["nonskew"]
                    if not (r["member"] and r["cybe"] and r["sym_invariant"] and r["claim_ok"])],
        "bi": [r["entry"] for r in groups["bi"]
               if not all(r[k] for k in ("r_member", "r_omega_ok", "rt_member", "rt_omega_ok"))],
        "noncoboundary": [r["entry"] for r in groups["noncoboundary"]
                          if not r["trivial_cobracket"] and not r["identically"]],
        "classification": [],
        "fields": [r["algebra"] for r in groups["fields"] if not r["match"]],
        "brackets": sorted({f"{c['entry']} {c['flavor']}" for c in groups["brackets"]
                            if not all(x["pass"] for x in c["cells"]) or c.get("linearization")}),
    }
    for name, rows in groups.items():
        print(f"{name:15s} {len(rows) - len(bad[name]):3d}/{len(rows):<3d} ok"
              + (f"  discrepancies: {', '.join(bad[name])}" if bad[name] else ""))
    with open(args.out, "w") as fh:
        json.dump(tables.report({"rows": groups, "discrepancies": bad}), fh, indent=1, default=str)
    print(f"wrote {args.out} in {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()

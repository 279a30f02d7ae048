"""Eigenvalue drift of the Lax flow against the step size.

    python scripts/lax_convergence.py [--entry "(IX,V|b)"] [--b 1] [--t 1.0]

A fourth-order integrator should show successive ratios near 16.
"""
import argparse

from liebialg import tables
from liebialg.catalog import load_catalog
from liebialg.dynamics import DEFAULT_XI, lax_residual
from liebialg.rmatrix import parse_r
from liebialg.scalars import b


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--entry", action="append")
    ap.add_argument("--b", type=float, default=1.0)
    ap.add_argument("--t", type=float, default=1.0)
    ap.add_argument("--xi", default=",".join(map(str, DEFAULT_XI)))
    args = ap.parse_args(argv)
    xi = tuple(float(x) for x in args.xi.split(","))
    cat = load_catalog()
    for entry in args.entry or ["(VIII,V.i|b)", "(IX,V|b)"]:
        bb = cat.get(entry, {"b": args.b})
        r = parse_r(tables.listed_r(entry)).subs(b, args.b)
        print(f"{entry}  b={args.b}  xi0={xi}")
        print(f"{'dt':>10} {'drift':>12} {'residual':>12} {'ratio':>8}")
        prev = None
        for dt in (4e-3, 2e-3, 1e-3, 5e-4, 2.5e-4):
            rep = lax_residual(bb.g, r, xi, dt, args.t)
            ratio = f"{prev / rep.drift:8.2f}" if prev and rep.drift else f"{'':8}"
            print(f"{dt:10.2e} {rep.drift:12.3e} {rep.residual:12.3e} {ratio}")
            prev = rep.drift


if __name__ == "__main__":
    main()

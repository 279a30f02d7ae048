"""Loading the shipped bialgebra catalog and fixture files."""
from __future__ import annotations

import functools
import os
import re
from dataclasses import dataclass, field
from pathlib import Path

import sympy as sp
import yaml

from .algebra_core import LieAlgebra, bianchi, canonical_type
from .bialgebra import Bialgebra
from .scalars import a as A, b as B, to_scalar

DATA_ENV = "LIEBIALG_DATA"


def data_dir() -> Path:
    return Path(os.environ.get(DATA_ENV, Path(__file__).parent / "data"))


def load_yaml(name):
    with open(data_dir() / name) as fh:
        return yaml.safe_load(fh)


_TOKEN = re.compile(r"VII0|VI0|VIIa|VIa|VII_0|VI_0|v\.i")


def normalize_name(name: str) -> str:
    """'(VII0, V.i)' -> '(VII_o,V.i)'; accepts the spellings used in the tables."""
    name = name.replace(" ", "").replace("{", "").replace("}", "")
    name = name.replace("VI_\\frac1a", "VI_1/a").replace("VI_\\frac{1}{a}", "VI_1/a")
    subs = {"VII0": "VII_o", "VI0": "VI_o", "VII_0": "VII_o", "VI_0": "VI_o",
            "VIIa": "VII_a", "VIa": "VI_a", "v.i": "V.i"}
    return _TOKEN.sub(lambda m: subs[m.group(0)], name)


def tensor_from_record(name, rec, named=None) -> LieAlgebra:
    if isinstance(rec, str):
        if named and rec in named:
            return named[rec]
        return bianchi(rec)
    if "bianchi" in rec:
        return LieAlgebra(name, bianchi(rec["bianchi"]).f)
    if "brackets" in rec:
        return LieAlgebra.from_brackets(name, {(int(k[0]), int(k[1])): v for k, v in rec["brackets"].items()})
    if "tensor" in rec:
        flat = [to_scalar(x) for x in rec["tensor"]]
        if len(flat) != 27:
            raise ValueError(f"{name}: raw tensor needs 27 entries")
        return LieAlgebra(name, [[flat[9 * i + 3 * j:9 * i + 3 * j + 3] for j in range(3)] for i in range(3)])
    if {"a", "n"} <= set(rec):
        av = to_scalar(rec["a"])
        n1, n2, n3 = (to_scalar(x) for x in rec["n"])
        return LieAlgebra.from_brackets(name, {(1, 2): [0, -av, n3], (2, 3): [n1, 0, 0], (1, 3): [0, -n2, -av]})
    raise ValueError(f"{name}: unrecognised tensor record {rec}")


def check_parameters(values: dict, entry_name=""):
    """Enforce a > 0, a != 1 and b != 0 on user-supplied rational values."""
    for k, v in values.items():
        v = sp.Rational(v)
        if str(k) == "a" and (v <= 0 or v == 1):
            raise ValueError(f"{entry_name}: parameter a must be > 0 and != 1, got {v}")
        if str(k) == "b" and v == 0:
            raise ValueError(f"{entry_name}: parameter b must be nonzero")


@dataclass
class Catalog:
    algebras: dict
    entries: dict = field(default_factory=dict)

    def names(self, kind=None):
        return [n for n, e in self.entries.items() if kind is None or e.meta["kind"] == kind]

    def __getitem__(self, name) -> Bialgebra:
        key = normalize_name(name)
        if key not in self.entries:
            raise KeyError(f"unknown entry {name!r}")
        return self.entries[key]

    def get(self, name, params=None) -> Bialgebra:
        b = self[name]
        if not params:
            return b
        check_parameters(params, b.name)
        subs = {sp.Symbol(str(k), **_assumptions(str(k))): sp.Rational(v) for k, v in params.items()}
        return b.subs(subs)

    def algebra(self, name) -> LieAlgebra:
        name = canonical_type(normalize_name(name))
        if name in self.algebras:
            return self.algebras[name]
        if name == "VI_1/a":
            return bianchi("VI_a", 1 / A)
        return bianchi(name)


def _assumptions(name):
    return {"a": A.assumptions0, "b": B.assumptions0}.get(name, {})


@functools.lru_cache(maxsize=4)
def _load(path: str) -> Catalog:
    raw = load_yaml("catalog.yaml")
    algebras = {}
    for name, rec in raw["algebras"].items():
        algebras[name] = tensor_from_record(name, rec)
    duals = {name: tensor_from_record(name, rec) for name, rec in raw["duals"].items()}
    cat = Catalog(algebras)

    def resolve(label):
        if label in duals:
            return duals[label]
        if label in algebras:
            return algebras[label]
        return bianchi(label)

    for rec in raw["entries"]:
        g, gd = resolve(rec["g"]), resolve(rec["dual"])
        name = normalize_name(rec["name"])
        meta = {"kind": rec["kind"], "dual_name": rec.get("swap")}
        cat.entries[name] = Bialgebra(name, g, gd, meta)
        if rec.get("swap"):
            sw = normalize_name(rec["swap"])
            cat.entries[sw] = Bialgebra(sw, gd, g, {"kind": rec.get("swap_kind", "noncoboundary"),
                                                    "dual_name": name})
    return cat


def load_catalog() -> Catalog:
    return _load(str(data_dir()))

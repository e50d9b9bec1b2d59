"""JSON documents for complexes, functions, actions, charts and cycle tables.

Rationals are written as reduced ``"p/q"`` strings (plain ``"p"`` when q = 1).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import fixtures
from .charts import EmbeddedChart, LagrangianCycleTable, parse_signs, signs_str
from .complex import ComplexError, NotFaceClosed, SimplicialComplex
from .constructible import ConstructibleFunction
from .orbifold import EquivariantChart, GroupAction


class LoadError(ValueError):
    pass


def rat(x: Fraction) -> str:
    return str(Fraction(x))


def parse_rat(text, where: str = "value") -> Fraction:
    if isinstance(text, bool) or isinstance(text, float):
        raise LoadError(f"{where}: rationals must be integers or 'p/q' strings, got {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError, TypeError):
        raise LoadError(f"{where}: cannot parse rational {text!r}") from None


def complex_doc(K: SimplicialComplex) -> dict:
    maximal = [s for s in K if all(c == s for c in K.cofaces(s))]
    return {"vertices": list(K.vertices), "simplices": [list(s) for s in maximal]}


def function_doc(f: ConstructibleFunction, complex_name: str) -> dict:
    return {"complex": complex_name,
            "values": [{"simplex": list(s), "value": rat(v)} for s, v in f.items()]}


def table_doc(t: LagrangianCycleTable, chart_name: str) -> dict:
    return {"chart": chart_name,
            "entries": [{"simplex": list(s), "signs": signs_str(e), "mult": rat(m)}
                        for (s, e), m in t.items()]}


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


@dataclass
class Workspace:
    complexes: dict = field(default_factory=dict)
    functions: dict = field(default_factory=dict)
    actions: dict = field(default_factory=dict)
    charts: dict = field(default_factory=dict)
    eqcharts: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)
    owner: dict = field(default_factory=dict)  # object name -> complex/chart name it lives on

    @classmethod
    def with_fixtures(cls) -> "Workspace":
        ws = cls()
        for name in fixtures.complex_names():
            ws.complexes[name] = fixtures.complex_(name)
        for name in fixtures.chart_names():
            ch = fixtures.chart(name)
            ws.charts[name] = ch
            ws.owner[name] = name
            ws.complexes[name] = ch.complex
        ws.charts["D"] = ws.charts["disk"]
        ws.owner["D"] = "disk"
        for name in fixtures.action_names():
            cname = fixtures.action_complex(name)
            ws.actions[name] = fixtures.action(name, ws.complexes[cname])
            ws.owner[name] = cname
        for name in fixtures.complex_names():
            K = ws.complexes[name]
            fname = f"one_{name}"
            ws.functions[fname] = ConstructibleFunction.constant(K)
            ws.owner[fname] = name
        return ws

    def get(self, kind: str, name: str):
        table = getattr(self, kind)
        if name not in table:
            raise LoadError(f"unknown {kind[:-1]} {name!r}")
        return table[name]

    def load_path(self, path: Path) -> list[str]:
        path = Path(path)
        if path.is_dir():
            loaded = []
            for p in sorted(path.glob("*.json")):
                loaded += self.load_path(p)
            return loaded
        text = path.read_text(encoding="utf-8")
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise LoadError(f"{path}: parse error at line {e.lineno}, column {e.colno}: {e.msg}") from None
        name = doc.get("name", path.stem) if isinstance(doc, dict) else path.stem
        self.load_doc(name, doc, str(path))
        return [name]

    def load_doc(self, name: str, doc: Any, where: str = "<doc>") -> None:
        if not isinstance(doc, dict):
            raise LoadError(f"{where}: top level must be an object")
        try:
            if "coords" in doc:
                self._load_chart(name, doc)
            elif "generators" in doc:
                self._load_action(name, doc)
            elif "entries" in doc:
                self._load_table(name, doc)
            elif "values" in doc:
                self._load_function(name, doc)
            elif "simplices" in doc or "vertices" in doc:
                self._load_complex(name, doc)
            else:
                raise LoadError("cannot tell what kind of object this is")
        except LoadError as e:
            raise LoadError(f"{where}: object {name!r}: {e}") from None
        except (ComplexError, ValueError, KeyError, TypeError) as e:
            raise LoadError(f"{where}: object {name!r} is invalid: {e}") from None

    def _complex_ref(self, doc) -> tuple[str, SimplicialComplex]:
        cname = doc.get("complex")
        if cname not in self.complexes:
            raise LoadError(f"refers to unknown complex {cname!r}")
        return cname, self.complexes[cname]

    def _load_complex(self, name, doc):
        simplices = [[int(v) for v in s] for s in doc.get("simplices", [])]
        if "vertices" in doc:
            # higher faces are completed, but the vertex list is authoritative
            declared = {int(v) for v in doc["vertices"]}
            for s in simplices:
                for v in s:
                    if v not in declared:
                        raise NotFaceClosed(tuple(sorted(s)), (v,))
        self.complexes[name] = SimplicialComplex.from_maximal(simplices, doc.get("vertices", []))

    def _load_function(self, name, doc):
        cname, K = self._complex_ref(doc)
        vals = {}
        for i, entry in enumerate(doc["values"]):
            s = tuple(sorted(int(v) for v in entry["simplex"]))
            if s not in K:
                raise LoadError(f"values[{i}]: simplex {list(s)} is not in complex {cname!r}")
            vals[s] = vals.get(s, 0) + parse_rat(entry["value"], f"values[{i}]")
        self.functions[name] = ConstructibleFunction(K, vals)
        self.owner[name] = cname

    def _load_action(self, name, doc):
        cname, K = self._complex_ref(doc)
        gens = [{int(a): int(b) for a, b in g.items()} for g in doc["generators"]]
        self.actions[name] = GroupAction(K, gens)
        self.owner[name] = cname

    def _load_chart(self, name, doc):
        cname, K = self._complex_ref(doc)
        n = int(doc["dim"])
        coords = {int(v): [parse_rat(x, f"coords[{v}]") for x in c] for v, c in doc["coords"].items()}
        ch = EmbeddedChart(K, n, coords)
        self.charts[name] = ch
        self.owner[name] = cname
        if doc.get("matrices"):
            aname = doc.get("action")
            if aname not in self.actions:
                raise LoadError(f"matrices given but action {aname!r} is unknown")
            act = self.actions[aname]
            if act.complex != K:
                raise LoadError(f"action {aname!r} lives on another complex")
            mats = doc["matrices"]
            keyed = [mats[str(i)] if isinstance(mats, dict) else mats[i] for i in range(len(act.generators))]
            mats = [[[parse_rat(x, "matrix") for x in row] for row in m] for m in keyed]
            self.eqcharts[name] = EquivariantChart(ch, GroupAction(K, act.generators), mats)

    def _load_table(self, name, doc):
        chname = doc.get("chart")
        if chname not in self.charts:
            raise LoadError(f"refers to unknown chart {chname!r}")
        ch = self.charts[chname]
        mult = {}
        for i, e in enumerate(doc["entries"]):
            key = (tuple(sorted(int(v) for v in e["simplex"])), parse_signs(e.get("signs", "")))
            mult[key] = mult.get(key, 0) + parse_rat(e["mult"], f"entries[{i}]")
        self.tables[name] = LagrangianCycleTable(ch, mult)
        self.owner[name] = chname

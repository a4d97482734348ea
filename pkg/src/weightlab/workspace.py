"""Workspace documents: JSON files describing named charts, bundles, algebroids, ...

Schema version 1::

    {
      "weightlab": 1,
      "charts":        {name: {"coordinates": [...], "weights": [...], "order": r}},
      "bundles":       {name: {"base": chart, "frame": [...], "vertical": [...]}},
      "algebroids":    {name: {"bundle": bundle,
                               "anchor": {frame: {coordinate: poly}},
                               "brackets": {"s,t": {frame: poly}}}},
      "maps":          {name: {"source": chart, "target": chart, "components": [poly, ...]}},
      "vector_fields": {name: {"chart": chart, "components": {coordinate: poly}}},
      "sections":      {name: {"bundle": bundle, "components": {frame: poly}}},
      "transitions":   {name: {"bundle": bundle, "matrix": [[poly, ...], ...]}},
      "filtrations":   {name: {"chart": chart, "vanishing": [...], "levels": {"j": [field, ...]}}},
      "distributions": {name: {"chart": chart, "generators": [field, ...],
                               "submanifolds": {label: {"vanishing": [...], "samples": [[q, ...], ...]}}}},
      "wide":          {name: {"algebroid": algebroid, "levels": {"i": [frame, ...]},
                               "B": [frame, ...], "samples": [[q, ...], ...]}}
    }

Polynomials and rationals are strings in the shared polynomial syntax.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .errors import ParseError, WorkspaceError, WeightlabError
from .liealg import AlgebroidData
from .linweight import SectionElement, WeightedBundleChart
from .polycore import Polynomial
from .syntax import parse_polynomial, parse_rational
from .weighting import PolynomialMap, PolyVectorField, WeightedChart

SCHEMA_VERSION = 1
KINDS = (
    "charts",
    "bundles",
    "algebroids",
    "maps",
    "vector_fields",
    "sections",
    "transitions",
    "filtrations",
    "distributions",
    "wide",
)


@dataclass(frozen=True)
class Transition:
    bundle: str
    matrix: tuple


@dataclass(frozen=True)
class Filtration:
    chart: str
    vanishing: tuple
    levels: tuple  # ((j, (field names...)), ...)


@dataclass(frozen=True)
class Submanifold:
    vanishing: tuple
    samples: tuple


@dataclass(frozen=True)
class Distribution:
    chart: str
    generators: tuple
    submanifolds: tuple  # ((label, Submanifold), ...)


@dataclass(frozen=True)
class WideData:
    algebroid: str
    levels: tuple  # ((i, (frame names...)), ...)
    B: tuple
    samples: tuple


@dataclass
class Workspace:
    charts: dict = field(default_factory=dict)
    bundles: dict = field(default_factory=dict)
    algebroids: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    vector_fields: dict = field(default_factory=dict)
    sections: dict = field(default_factory=dict)
    transitions: dict = field(default_factory=dict)
    filtrations: dict = field(default_factory=dict)
    distributions: dict = field(default_factory=dict)
    wide: dict = field(default_factory=dict)
    # bookkeeping for serialization: name of the chart/bundle each entity refers to
    refs: dict = field(default_factory=dict, compare=False)

    def pick(self, kind: str, name: str | None):
        table = getattr(self, kind)
        label = kind.rstrip("s").replace("_", " ")
        if name is None:
            if len(table) == 1:
                return next(iter(table.values()))
            if not table:
                raise WorkspaceError(f"workspace defines no {kind.replace('_', ' ')}")
            raise WorkspaceError(f"several {kind.replace('_', ' ')} defined ({', '.join(table)}); choose one by name")
        if name not in table:
            raise WorkspaceError(f"{label} {name!r} is not defined")
        return table[name]

    def pick_name(self, kind: str, name: str | None) -> str:
        table = getattr(self, kind)
        if name is None and len(table) == 1:
            return next(iter(table))
        self.pick(kind, name)
        return name


# -- loading ---------------------------------------------------------------------


def _no_duplicates(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            raise WorkspaceError(f"duplicate key {key!r}")
        out[key] = value
    return out


def _check_name(name, what: str):
    if not isinstance(name, str) or not name.isidentifier():
        raise WorkspaceError(f"{what}: {name!r} is not a valid identifier")
    if name.startswith("_") or "__" in name:
        raise WorkspaceError(f"{what}: {name!r} uses a reserved name (leading '_' or '__')")


def _require(entry, key, where):
    if not isinstance(entry, dict):
        raise WorkspaceError(f"{where}: expected an object")
    if key not in entry:
        raise WorkspaceError(f"{where}: missing field {key!r}")
    return entry[key]


def _ref(ws: Workspace, kind: str, name, where):
    table = getattr(ws, kind)
    if name not in table:
        raise WorkspaceError(f"{where}: dangling reference to {kind.rstrip('s').replace('_', ' ')} {name!r}")
    return table[name]


def _poly(text, where) -> Polynomial:
    if isinstance(text, int) and not isinstance(text, bool):
        return Polynomial.constant(text)
    if not isinstance(text, str):
        raise WorkspaceError(f"{where}: expected a polynomial string, got {text!r}")
    return parse_polynomial(text, source=where)


def _rational(text, where) -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (int, str)):
        raise WorkspaceError(f"{where}: expected a rational, got {text!r}")
    return parse_rational(text, source=where)


def _wrap(where, fn, *args):
    try:
        return fn(*args)
    except WeightlabError:
        raise
    except (ValueError, IndexError) as exc:
        raise WorkspaceError(f"{where}: {exc}") from None


def _str_list(value, where) -> tuple:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise WorkspaceError(f"{where}: expected a list of names")
    return tuple(value)


def _int_key(key, where) -> int:
    try:
        return int(key)
    except ValueError:
        raise WorkspaceError(f"{where}: level key {key!r} is not an integer") from None


def load_document(doc: dict) -> Workspace:
    if not isinstance(doc, dict):
        raise WorkspaceError("workspace must be a JSON object")
    version = doc.get("weightlab")
    if version != SCHEMA_VERSION:
        raise WorkspaceError(f"unsupported or missing schema version {version!r} (expected \"weightlab\": 1)")
    unknown = sorted(set(doc) - set(KINDS) - {"weightlab"})
    if unknown:
        raise WorkspaceError(f"unknown section(s): {', '.join(unknown)}")
    ws = Workspace()
    for kind in KINDS:
        if not isinstance(doc.get(kind, {}), dict):
            raise WorkspaceError(f"section {kind!r} must be an object")

    for name, entry in doc.get("charts", {}).items():
        where = f"chart {name!r}"
        _check_name(name, where)
        coords = _str_list(_require(entry, "coordinates", where), where)
        for c in coords:
            _check_name(c, where)
        weights = _require(entry, "weights", where)
        if not isinstance(weights, list) or not all(isinstance(w, int) and not isinstance(w, bool) for w in weights):
            raise WorkspaceError(f"{where}: weights must be a list of integers")
        negative = [w for w in weights if w < 0]
        if negative:
            raise WorkspaceError(f"{where}: base weights must be non-negative, got {weights}")
        order = entry.get("order")
        ws.charts[name] = _wrap(where, WeightedChart, coords, tuple(weights), order)

    for name, entry in doc.get("bundles", {}).items():
        where = f"bundle {name!r}"
        _check_name(name, where)
        base_name = _require(entry, "base", where)
        base = _ref(ws, "charts", base_name, where)
        frame = _str_list(_require(entry, "frame", where), where)
        for s in frame:
            _check_name(s, where)
        vertical = _require(entry, "vertical", where)
        if not isinstance(vertical, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in vertical):
            raise WorkspaceError(f"{where}: vertical weights must be a list of integers")
        ws.bundles[name] = _wrap(where, WeightedBundleChart, base, frame, tuple(vertical))
        ws.refs[("bundles", name)] = base_name

    for name, entry in doc.get("algebroids", {}).items():
        where = f"algebroid {name!r}"
        _check_name(name, where)
        bundle_name = _require(entry, "bundle", where)
        bundle = _ref(ws, "bundles", bundle_name, where)
        anchor = {}
        for s, comps in entry.get("anchor", {}).items():
            if not isinstance(comps, dict):
                raise WorkspaceError(f"{where}: anchor of {s!r} must be an object")
            anchor[s] = {x: _poly(v, f"{where} anchor {s}.{x}") for x, v in comps.items()}
        brackets = {}
        for key, comps in entry.get("brackets", {}).items():
            parts = [p.strip() for p in key.split(",")]
            if len(parts) != 2:
                raise WorkspaceError(f"{where}: bracket key {key!r} must read 's,t'")
            if not isinstance(comps, dict):
                raise WorkspaceError(f"{where}: bracket {key!r} must be an object")
            brackets[tuple(parts)] = {c: _poly(v, f"{where} bracket [{key}].{c}") for c, v in comps.items()}
        ws.algebroids[name] = _wrap(where, AlgebroidData.build, bundle, anchor, brackets)
        ws.refs[("algebroids", name)] = bundle_name

    for name, entry in doc.get("maps", {}).items():
        where = f"map {name!r}"
        _check_name(name, where)
        src_name, tgt_name = _require(entry, "source", where), _require(entry, "target", where)
        source = _ref(ws, "charts", src_name, where)
        target = _ref(ws, "charts", tgt_name, where)
        comps = _require(entry, "components", where)
        if not isinstance(comps, list):
            raise WorkspaceError(f"{where}: components must be a list")
        polys = tuple(_poly(c, f"{where} component {k + 1}") for k, c in enumerate(comps))
        ws.maps[name] = _wrap(where, PolynomialMap, source, target, polys)
        ws.refs[("maps", name)] = (src_name, tgt_name)

    for name, entry in doc.get("vector_fields", {}).items():
        where = f"vector field {name!r}"
        _check_name(name, where)
        chart_name = _require(entry, "chart", where)
        chart = _ref(ws, "charts", chart_name, where)
        comps = _require(entry, "components", where)
        if not isinstance(comps, dict):
            raise WorkspaceError(f"{where}: components must map coordinates to polynomials")
        polys = {x: _poly(v, f"{where} component {x}") for x, v in comps.items()}
        ws.vector_fields[name] = _wrap(where, PolyVectorField.from_mapping, chart, polys)
        ws.refs[("vector_fields", name)] = chart_name

    for name, entry in doc.get("sections", {}).items():
        where = f"section {name!r}"
        _check_name(name, where)
        bundle_name = _require(entry, "bundle", where)
        bundle = _ref(ws, "bundles", bundle_name, where)
        comps = _require(entry, "components", where)
        if not isinstance(comps, dict):
            raise WorkspaceError(f"{where}: components must map frame names to polynomials")
        polys = {s: _poly(v, f"{where} component {s}") for s, v in comps.items()}
        ws.sections[name] = _wrap(where, SectionElement.from_mapping, bundle, polys)
        ws.refs[("sections", name)] = bundle_name

    for name, entry in doc.get("transitions", {}).items():
        where = f"transition {name!r}"
        _check_name(name, where)
        bundle_name = _require(entry, "bundle", where)
        bundle = _ref(ws, "bundles", bundle_name, where)
        matrix = _require(entry, "matrix", where)
        if not isinstance(matrix, list) or len(matrix) != bundle.rank or any(
            not isinstance(row, list) or len(row) != bundle.rank for row in matrix
        ):
            raise WorkspaceError(f"{where}: matrix must be {bundle.rank}x{bundle.rank}")
        rows = tuple(
            tuple(_poly(v, f"{where} entry [{a + 1},{b + 1}]") for b, v in enumerate(row)) for a, row in enumerate(matrix)
        )
        ws.transitions[name] = Transition(bundle_name, rows)

    for name, entry in doc.get("filtrations", {}).items():
        where = f"filtration {name!r}"
        _check_name(name, where)
        chart_name = _require(entry, "chart", where)
        chart = _ref(ws, "charts", chart_name, where)
        vanishing = _str_list(entry.get("vanishing", []), where)
        for x in vanishing:
            if x not in chart.coordinates:
                raise WorkspaceError(f"{where}: vanishing coordinate {x!r} not in chart {chart_name!r}")
        levels = []
        for key, names in _require(entry, "levels", where).items():
            j = _int_key(key, where)
            names = _str_list(names, where)
            for n in names:
                field_ = _ref(ws, "vector_fields", n, where)
                if field_.chart != chart:
                    raise WorkspaceError(f"{where}: vector field {n!r} lives on another chart")
            levels.append((j, names))
        ws.filtrations[name] = Filtration(chart_name, vanishing, tuple(sorted(levels)))

    for name, entry in doc.get("distributions", {}).items():
        where = f"distribution {name!r}"
        _check_name(name, where)
        chart_name = _require(entry, "chart", where)
        chart = _ref(ws, "charts", chart_name, where)
        gens = _str_list(_require(entry, "generators", where), where)
        for n in gens:
            if _ref(ws, "vector_fields", n, where).chart != chart:
                raise WorkspaceError(f"{where}: vector field {n!r} lives on another chart")
        subs = []
        for label, sub in _require(entry, "submanifolds", where).items():
            swhere = f"{where} submanifold {label!r}"
            vanishing = _str_list(_require(sub, "vanishing", swhere), swhere)
            for x in vanishing:
                if x not in chart.coordinates:
                    raise WorkspaceError(f"{swhere}: vanishing coordinate {x!r} not in chart")
            samples = _samples(_require(sub, "samples", swhere), chart.dim, swhere)
            subs.append((label, Submanifold(vanishing, samples)))
        ws.distributions[name] = Distribution(chart_name, gens, tuple(subs))

    for name, entry in doc.get("wide", {}).items():
        where = f"wide data {name!r}"
        _check_name(name, where)
        alg_name = _require(entry, "algebroid", where)
        A = _ref(ws, "algebroids", alg_name, where)
        levels = []
        for key, names in _require(entry, "levels", where).items():
            names = _str_list(names, where)
            for n in names:
                _wrap(where, A.bundle.index, n)
            levels.append((_int_key(key, where), names))
        B = _str_list(entry.get("B", []), where)
        for n in B:
            _wrap(where, A.bundle.index, n)
        samples = _samples(entry.get("samples", [[]]), A.base.dim, where)
        ws.wide[name] = WideData(alg_name, tuple(sorted(levels)), B, samples)
    return ws


def _samples(value, dim, where) -> tuple:
    if not isinstance(value, list):
        raise WorkspaceError(f"{where}: samples must be a list of points")
    out = []
    for k, pt in enumerate(value):
        if not isinstance(pt, list) or len(pt) != dim:
            raise WorkspaceError(f"{where}: sample {k + 1} must have {dim} coordinates")
        out.append(tuple(_rational(v, f"{where} sample {k + 1}") for v in pt))
    return tuple(out)


def loads(text: str, source: str = "<workspace>") -> Workspace:
    try:
        doc = json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno, source) from None
    except WorkspaceError as exc:
        raise WorkspaceError(f"{source}: {exc}") from None
    return load_document(doc)


def corpus_names() -> list:
    files = resources.files("weightlab").joinpath("corpus")
    return sorted(p.name[:-5] for p in files.iterdir() if p.name.endswith(".json"))


def corpus_text(name: str) -> str:
    return resources.files("weightlab").joinpath("corpus", name + ".json").read_text(encoding="utf-8")


def resolve(path: str) -> tuple:
    """(text, label) for a workspace path, falling back to the shipped corpus by stem."""
    p = Path(path)
    if p.is_file():
        return p.read_text(encoding="utf-8"), path
    stem = p.name[:-5] if p.name.endswith(".json") else p.name
    if stem in corpus_names():
        return corpus_text(stem), path
    raise WorkspaceError(f"workspace file {path!r} not found")


def load(path: str) -> Workspace:
    text, label = resolve(path)
    return loads(text, label)


# -- serialization -------------------------------------------------------------------


def _rat(q: Fraction) -> str:
    return str(q)


def dump_document(ws: Workspace) -> dict:
    doc: dict = {"weightlab": SCHEMA_VERSION}
    if ws.charts:
        doc["charts"] = {
            n: {"coordinates": list(c.coordinates), "weights": list(c.weights), "order": c.order}
            for n, c in ws.charts.items()
        }

    def chart_name(chart):
        for n, c in ws.charts.items():
            if c == chart:
                return n
        raise WorkspaceError("entity refers to an unnamed chart")

    def bundle_name(bundle):
        for n, b in ws.bundles.items():
            if b == bundle:
                return n
        raise WorkspaceError("entity refers to an unnamed bundle")

    if ws.bundles:
        doc["bundles"] = {
            n: {"base": ws.refs.get(("bundles", n)) or chart_name(b.base), "frame": list(b.frame), "vertical": list(b.vertical)}
            for n, b in ws.bundles.items()
        }
    if ws.algebroids:
        out = {}
        for n, A in ws.algebroids.items():
            anchor = {}
            for a, s in enumerate(A.bundle.frame):
                comps = {x: str(v) for x, v in zip(A.base.coordinates, A.anchor[a]) if v}
                if comps:
                    anchor[s] = comps
            brackets = {}
            for (a, b), coeffs in A.structure.items():
                brackets[f"{A.bundle.frame[a]},{A.bundle.frame[b]}"] = {
                    A.bundle.frame[c]: str(v) for c, v in enumerate(coeffs) if v
                }
            out[n] = {
                "bundle": ws.refs.get(("algebroids", n)) or bundle_name(A.bundle),
                "anchor": anchor,
                "brackets": brackets,
            }
        doc["algebroids"] = out
    if ws.maps:
        doc["maps"] = {
            n: {
                "source": (ws.refs.get(("maps", n)) or (chart_name(F.source), None))[0],
                "target": (ws.refs.get(("maps", n)) or (None, chart_name(F.target)))[1],
                "components": [str(c) for c in F.components],
            }
            for n, F in ws.maps.items()
        }
    if ws.vector_fields:
        doc["vector_fields"] = {
            n: {
                "chart": ws.refs.get(("vector_fields", n)) or chart_name(X.chart),
                "components": {x: str(c) for x, c in zip(X.chart.coordinates, X.coefficients) if c},
            }
            for n, X in ws.vector_fields.items()
        }
    if ws.sections:
        doc["sections"] = {
            n: {
                "bundle": ws.refs.get(("sections", n)) or bundle_name(s.bundle),
                "components": {f: str(c) for f, c in zip(s.bundle.frame, s.coefficients) if c},
            }
            for n, s in ws.sections.items()
        }
    if ws.transitions:
        doc["transitions"] = {
            n: {"bundle": t.bundle, "matrix": [[str(v) for v in row] for row in t.matrix]}
            for n, t in ws.transitions.items()
        }
    if ws.filtrations:
        doc["filtrations"] = {
            n: {"chart": f.chart, "vanishing": list(f.vanishing), "levels": {str(j): list(ns) for j, ns in f.levels}}
            for n, f in ws.filtrations.items()
        }
    if ws.distributions:
        doc["distributions"] = {
            n: {
                "chart": d.chart,
                "generators": list(d.generators),
                "submanifolds": {
                    label: {"vanishing": list(s.vanishing), "samples": [[_rat(q) for q in pt] for pt in s.samples]}
                    for label, s in d.submanifolds
                },
            }
            for n, d in ws.distributions.items()
        }
    if ws.wide:
        doc["wide"] = {
            n: {
                "algebroid": w.algebroid,
                "levels": {str(i): list(ns) for i, ns in w.levels},
                "B": list(w.B),
                "samples": [[_rat(q) for q in pt] for pt in w.samples],
            }
            for n, w in ws.wide.items()
        }
    return doc


def dumps(ws: Workspace) -> str:
    return json.dumps(dump_document(ws), indent=2) + "\n"

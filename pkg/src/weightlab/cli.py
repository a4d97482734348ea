"""The ``weightlab`` command line.

Exit status: 0 for success or a true verdict, 1 for a checked-false verdict
(witnesses are printed), 2 for malformed input.
"""

from __future__ import annotations

import functools
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import click

from . import hitangent, liealg, linweight, selftest, weighting
from .errors import WeightlabError
from .polycore import Polynomial, is_inf
from .syntax import parse_polynomial, parse_rational
from .verdict import Verdict
from .workspace import Workspace, load


@dataclass
class Report:
    command: str
    arguments: dict
    lines: list = field(default_factory=list)
    result: object = None
    ok: bool | None = None
    witnesses: tuple = ()
    table: tuple = ()
    notes: tuple = ()

    @classmethod
    def from_verdict(cls, command, arguments, verdict: Verdict, lines=(), result=None):
        return cls(command, arguments, list(lines), result, verdict.ok, verdict.witnesses, verdict.table, verdict.notes)

    def exit_code(self) -> int:
        return 1 if self.ok is False else 0

    def render_text(self) -> str:
        out = []
        if self.ok is not None:
            out.append("true" if self.ok else "false")
        out.extend(self.lines)
        out.extend(f"witness: {w}" for w in self.witnesses)
        out.extend("table: " + " | ".join(_text(c) for c in row) for row in self.table)
        out.extend(f"note: {n}" for n in self.notes)
        return "\n".join(out) + "\n"

    def render_json(self) -> str:
        doc = {
            "command": self.command,
            "arguments": _jsonable(self.arguments),
            "ok": self.ok,
            "result": _jsonable(self.result),
            "witnesses": list(self.witnesses),
            "table": _jsonable(self.table),
            "notes": list(self.notes),
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _text(value) -> str:
    if isinstance(value, tuple):
        return "(" + ", ".join(_text(v) for v in value) + ")"
    return str(value)


def _jsonable(value):
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, int):
        return value
    if is_inf(value):
        return "inf"
    if isinstance(value, (Fraction, Polynomial)):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return str(value)


# -- plumbing -------------------------------------------------------------------


def _emit(report: Report, fmt: str):
    click.echo(report.render_json() if fmt == "json" else report.render_text(), nl=False)


def command(name: str, needs_workspace: bool = True):
    """Register a subcommand returning a Report; handles errors and exit codes."""

    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(fmt, workspace=None, **kwargs):
            try:
                if needs_workspace:
                    kwargs["ws"] = load(workspace)
                report = fn(**kwargs)
            except WeightlabError as exc:
                click.echo(f"error: {exc}", err=True)
                sys.exit(2)
            _emit(report, fmt)
            sys.exit(report.exit_code())

        wrapper = click.option(
            "--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True
        )(wrapper)
        if needs_workspace:
            wrapper = click.option(
                "-w", "--workspace", required=True, help="Workspace JSON file (or the name of a shipped example)."
            )(wrapper)
        return main.command(name)(wrapper)

    return decorate


def _poly(text: str) -> Polynomial:
    return parse_polynomial(text, source="<expression>")


def _point(text: str) -> tuple:
    text = text.strip()
    if not text:
        return ()
    return tuple(parse_rational(part.strip(), source="<point>") for part in text.split(","))


def _vector(text: str) -> tuple:
    text = text.strip()
    if not text:
        return ()
    return tuple(parse_polynomial(part.strip(), source="<vector>") for part in text.split(","))


def _degree_text(d) -> str:
    return str(d)


@click.group()
@click.version_option(package_name="weightlab")
def main():
    """Exact calculus of weightings on polynomial charts."""


chart_opt = click.option("--chart", "chart_name", default=None, help="Chart name (optional if there is only one).")
poly_opt = click.option("-f", "--function", "text", required=True, help="Polynomial in the chart coordinates.")
degree_opt = click.option("-i", "--degree", "i", type=int, required=True)
order_opt = click.option("-r", "--order", "r", type=int, required=True)
field_opt = click.option("--field", "field_name", default=None, help="Vector field name.")
bundle_opt = click.option("--bundle", "bundle_name", default=None)
section_opt = click.option("--section", "section_name", default=None)
algebroid_opt = click.option("--algebroid", "alg_name", default=None)


# -- weighting -------------------------------------------------------------------


@command("degree")
@chart_opt
@poly_opt
def degree_cmd(ws: Workspace, chart_name, text):
    chart = ws.pick("charts", chart_name)
    d = weighting.filtration_degree(chart, _poly(text))
    return Report("degree", {"function": text}, [_degree_text(d)], d)


@command("homog")
@chart_opt
@poly_opt
@degree_opt
def homog_cmd(ws, chart_name, text, i):
    chart = ws.pick("charts", chart_name)
    g = weighting.homogeneous_approximation(chart, _poly(text), i)
    return Report("homog", {"function": text, "degree": i}, [str(g)], g)


@command("rees")
@chart_opt
@poly_opt
@degree_opt
def rees_cmd(ws, chart_name, text, i):
    chart = ws.pick("charts", chart_name)
    g = weighting.rees_interpolation(chart, _poly(text), i)
    return Report("rees", {"function": text, "degree": i}, [str(g)], g)


@command("zoom-weight")
@chart_opt
@click.option("-f", "--function", "text", required=True, help="Polynomial in barred coordinates and _t.")
def zoom_cmd(ws, chart_name, text):
    chart = ws.pick("charts", chart_name)
    k = weighting.zoom_weight(chart, _poly(text))
    return Report("zoom-weight", {"function": text}, [str(k)], k)


@command("path-valuation")
@chart_opt
@poly_opt
def path_cmd(ws, chart_name, text):
    chart = ws.pick("charts", chart_name)
    d = weighting.weighted_path_valuation(chart, _poly(text))
    return Report("path-valuation", {"function": text}, [_degree_text(d)], d)


@command("check-morphism")
@click.option("--map", "map_name", default=None)
def morphism_cmd(ws, map_name):
    F = ws.pick("maps", map_name)
    verdict = weighting.check_weighted_morphism(F)
    return Report.from_verdict("check-morphism", {"map": map_name}, verdict)


@command("graph-chart")
@click.option("--map", "map_name", default=None)
def graph_cmd(ws, map_name):
    F = ws.pick("maps", map_name)
    g = weighting.graph_submanifold_chart(F)
    lines = [f"chart: {', '.join(f'{x}:{w}' for x, w in zip(g.chart.coordinates, g.chart.weights))}"]
    lines += [f"{name}~ = {cut}  (degree {d})" for name, cut, d in g.cut_out]
    result = {"coordinates": list(g.chart.coordinates), "weights": list(g.chart.weights),
              "cut_out": [[n, c, d] for n, c, d in g.cut_out]}
    return Report("graph-chart", {"map": map_name}, lines, result)


@command("vf-degree")
@field_opt
def vf_cmd(ws, field_name):
    X = ws.pick("vector_fields", field_name)
    d = weighting.vector_field_degree(X)
    return Report("vf-degree", {"field": field_name}, [_degree_text(d)], d)


@command("transverse")
@click.option("-F", "f_name", required=True, help="First map.")
@click.option("-G", "g_name", required=True, help="Second map.")
@click.option("-p", "p_text", default="", help="Point of the first source, comma separated.")
@click.option("-q", "q_text", default="", help="Point of the second source, comma separated.")
def transverse_cmd(ws, f_name, g_name, p_text, q_text):
    F, G = ws.pick("maps", f_name), ws.pick("maps", g_name)
    verdict = weighting.check_weighted_transverse_at_point(F, G, _point(p_text), _point(q_text))
    return Report.from_verdict("transverse", {"F": f_name, "G": g_name, "p": p_text, "q": q_text}, verdict)


@command("induced-degree")
@click.option("--filtration", "filt_name", default=None)
@poly_opt
@degree_opt
def induced_cmd(ws, filt_name, text, i):
    filt = ws.pick("filtrations", filt_name)
    levels = {j: [ws.vector_fields[n] for n in names] for j, names in filt.levels}
    ok = weighting.induced_weighting_degree(levels, filt.vanishing, _poly(text), i)
    return Report("induced-degree", {"function": text, "degree": i}, [], None, ok)


@command("clean")
@click.option("--distribution", "dist_name", default=None)
@click.option("--submanifold", "sub_name", default=None, help="Only this submanifold label.")
def clean_cmd(ws, dist_name, sub_name):
    dist = ws.pick("distributions", dist_name)
    gens = [ws.vector_fields[n] for n in dist.generators]
    subs = [(label, s) for label, s in dist.submanifolds if sub_name in (None, label)]
    if not subs:
        raise WeightlabError(f"no submanifold labelled {sub_name!r}")
    lines, witnesses, table, results = [], [], [], {}
    ok = True
    for label, sub in subs:
        verdict = weighting.check_clean_distribution(gens, sub.vanishing, sub.samples)
        lines.append(f"{label}: {'clean' if verdict else 'not clean'}")
        witnesses += [f"{label}: {w}" for w in verdict.witnesses]
        table += [(label,) + row for row in verdict.table]
        results[label] = verdict.ok
        ok = ok and verdict.ok
    return Report("clean", {"submanifold": sub_name}, lines, results, ok, tuple(witnesses), tuple(table), ("sampled check",))


# -- linear weightings --------------------------------------------------------------


def _bundle_lines(b: linweight.WeightedBundleChart) -> list:
    return [f"{s}: {v}" for s, v in zip(b.frame, b.vertical)]


def _bundle_result(b):
    return {"frame": list(b.frame), "vertical": list(b.vertical)}


@command("section-degree")
@section_opt
def section_degree_cmd(ws, section_name):
    s = ws.pick("sections", section_name)
    d = linweight.section_degree(s)
    return Report("section-degree", {"section": section_name}, [_degree_text(d)], d)


@command("dual")
@bundle_opt
def dual_cmd(ws, bundle_name):
    b = linweight.dual_bundle(ws.pick("bundles", bundle_name))
    return Report("dual", {"bundle": bundle_name}, _bundle_lines(b), _bundle_result(b))


@command("shift")
@bundle_opt
@click.option("-k", "k", type=int, required=True)
def shift_cmd(ws, bundle_name, k):
    b = linweight.shift_bundle(ws.pick("bundles", bundle_name), k)
    return Report("shift", {"bundle": bundle_name, "k": k}, _bundle_lines(b), _bundle_result(b))


@command("transition-check")
@click.option("--transition", "t_name", default=None)
def transition_cmd(ws, t_name):
    t = ws.pick("transitions", t_name)
    verdict = linweight.check_transition_degrees(ws.bundles[t.bundle], t.matrix)
    return Report.from_verdict("transition-check", {"transition": t_name}, Verdict(verdict.ok, verdict.witnesses))


def _section_lines(s: linweight.SectionElement) -> list:
    return [f"{f}: {c}" for f, c in zip(s.bundle.frame, s.coefficients) if c] or ["0"]


@command("section-homog")
@section_opt
@degree_opt
def section_homog_cmd(ws, section_name, i):
    s = linweight.section_homogeneous_approximation(ws.pick("sections", section_name), i)
    return Report("section-homog", {"section": section_name, "degree": i}, _section_lines(s),
                  dict(zip(s.bundle.frame, s.coefficients)))


@command("section-rees")
@section_opt
@degree_opt
def section_rees_cmd(ws, section_name, i):
    s = linweight.section_rees_interpolation(ws.pick("sections", section_name), i)
    return Report("section-rees", {"section": section_name, "degree": i}, _section_lines(s),
                  dict(zip(s.bundle.frame, s.coefficients)))


# -- algebroids ------------------------------------------------------------------------


def _algebroid_lines(A: liealg.AlgebroidData) -> list:
    lines = []
    frame = A.bundle.frame
    for (a, b), coeffs in A.structure.items():
        parts = [f"({c})*{frame[k]}" for k, c in enumerate(coeffs) if c]
        lines.append(f"[{frame[a]},{frame[b]}] = {' + '.join(parts)}")
    for a, row in enumerate(A.anchor):
        parts = [f"({c})*d/d{x}" for x, c in zip(A.base.coordinates, row) if c]
        if parts:
            lines.append(f"anchor({frame[a]}) = {' + '.join(parts)}")
    return lines


def _algebroid_result(A):
    frame = A.bundle.frame
    return {
        "frame": list(frame),
        "base": list(A.base.coordinates),
        "brackets": {f"{frame[a]},{frame[b]}": {frame[k]: str(c) for k, c in enumerate(cs) if c}
                     for (a, b), cs in A.structure.items()},
        "anchor": {frame[a]: {x: str(c) for x, c in zip(A.base.coordinates, row) if c}
                   for a, row in enumerate(A.anchor) if any(row)},
    }


def _verdict_command(name, check):
    @command(name)
    @algebroid_opt
    def run(ws, alg_name):
        return Report.from_verdict(name, {"algebroid": alg_name}, check(ws.pick("algebroids", alg_name)))

    return run


jacobi_cmd = _verdict_command("jacobi", liealg.check_jacobi)
im_cmd = _verdict_command("im-check", liealg.check_im_weighting)
da_cmd = _verdict_command("da-check", liealg.dA_check)
poisson_cmd = _verdict_command("poisson-check", liealg.poisson_degree_check)
dilation_cmd = _verdict_command("dilation-check", lambda A: liealg.dilation_check(liealg.GradedNilpotentLie(A)))


@command("graded")
@algebroid_opt
def graded_cmd(ws, alg_name):
    G = liealg.graded_normal_algebroid(ws.pick("algebroids", alg_name))
    return Report("graded", {"algebroid": alg_name}, _algebroid_lines(G), _algebroid_result(G))


@command("rees-algebroid")
@algebroid_opt
def rees_algebroid_cmd(ws, alg_name):
    D = liealg.rees_deformation_algebroid(ws.pick("algebroids", alg_name))
    return Report("rees-algebroid", {"algebroid": alg_name}, _algebroid_lines(D), _algebroid_result(D))


@command("lcs")
@algebroid_opt
def lcs_cmd(ws, alg_name):
    dims = liealg.lower_central_series(ws.pick("algebroids", alg_name))
    return Report("lcs", {"algebroid": alg_name}, [", ".join(map(str, dims))], dims)


@command("bch")
@algebroid_opt
@click.option("-x", "x_text", required=True, help="Coordinates of X, comma separated.")
@click.option("-y", "y_text", required=True, help="Coordinates of Y, comma separated.")
def bch_cmd(ws, alg_name, x_text, y_text):
    G = liealg.GradedNilpotentLie(ws.pick("algebroids", alg_name))
    Z = liealg.bch_product(G, _vector(x_text), _vector(y_text))
    return Report("bch", {"x": x_text, "y": y_text}, [", ".join(map(str, Z))], list(Z))


@command("wide-hypotheses")
@click.option("--wide", "wide_name", default=None)
def wide_cmd(ws, wide_name):
    w = ws.pick("wide", wide_name)
    verdict = liealg.check_wide_integration_hypotheses(
        ws.algebroids[w.algebroid], dict(w.levels), w.B, w.samples
    )
    return Report.from_verdict("wide-hypotheses", {"wide": wide_name}, verdict)


# -- higher tangent bundles --------------------------------------------------------------


@command("lift")
@poly_opt
@degree_opt
@order_opt
def lift_cmd(ws, text, i, r):
    g = hitangent.lift_function(_poly(text), i, r)
    return Report("lift", {"function": text, "degree": i, "order": r}, [str(g)], g)


@command("lift-vf")
@field_opt
@degree_opt
@order_opt
def lift_vf_cmd(ws, field_name, i, r):
    X = hitangent.lift_vector_field(ws.pick("vector_fields", field_name), i, r)
    return Report("lift-vf", {"field": field_name, "degree": i, "order": r}, [str(X)],
                  {x: c for x, c in zip(X.chart.coordinates, X.coefficients) if c})


@command("q-model")
@chart_opt
@order_opt
def q_model_cmd(ws, chart_name, r):
    q = hitangent.q_model(ws.pick("charts", chart_name), r)
    lines = q.equations() + [f"free: {', '.join(q.free)}"]
    return Report("q-model", {"order": r}, lines, {"cut_out": list(q.cut_out), "free": list(q.free)})


@command("q-degree")
@chart_opt
@poly_opt
@order_opt
def q_degree_cmd(ws, chart_name, text, r):
    q = hitangent.q_model(ws.pick("charts", chart_name), r)
    d = hitangent.degree_via_q(q, _poly(text))
    line = f">= {d} (cap reached)" if d == r + 1 else str(d)
    return Report("q-degree", {"function": text, "order": r}, [line], {"degree": d, "capped": d == r + 1})


@command("tangency")
@field_opt
@degree_opt
@order_opt
def tangency_cmd(ws, field_name, i, r):
    X = ws.pick("vector_fields", field_name)
    verdict = hitangent.tangency_check(hitangent.q_model(X.chart, r), X, i)
    return Report.from_verdict("tangency", {"field": field_name, "degree": i, "order": r}, verdict)


@command("lifted-algebroid")
@algebroid_opt
@order_opt
def lifted_cmd(ws, alg_name, r):
    verdict = hitangent.lifted_algebroid_check(ws.pick("algebroids", alg_name), r)
    return Report.from_verdict("lifted-algebroid", {"algebroid": alg_name, "order": r}, verdict)


@command("selftest", needs_workspace=False)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--count", type=int, default=40, show_default=True, help="Instances per suite.")
def selftest_cmd(seed, count):
    results = selftest.run(seed, count)
    lines = [f"{'PASS' if r.passed else 'FAIL'} {r.name} ({r.checked})" for r in results]
    witnesses = tuple(f"{r.name}: {r.failure}" for r in results if not r.passed)
    ok = not witnesses
    return Report("selftest", {"seed": seed, "count": count}, lines,
                  {r.name: r.passed for r in results}, ok, witnesses)


if __name__ == "__main__":  # pragma: no cover
    main()

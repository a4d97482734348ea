"""Acceptance criteria 1-10, each at its stated count and exact tolerance.

Every criterion prints one ``PASS``/``FAIL`` line (visible under ``pytest -v``
and when the file is run directly) and then asserts.
"""

import random
from fractions import Fraction
import subprocess
import sys
import time

import pytest

from weightlab import randomgen as rg
from weightlab.hitangent import (
    all_lifts,
    degree_via_q,
    jet_chart,
    lift_function,
    lift_map,
    lift_vector_field,
    lifted_algebroid_check,
    q_model,
)
from weightlab.liealg import (
    AlgebroidData,
    GradedNilpotentLie,
    bch_product,
    check_im_weighting,
    check_jacobi,
    check_wide_integration_hypotheses,
    dA_check,
    dilation_check,
    graded_normal_algebroid,
    poisson_degree_check,
    rees_deformation_algebroid,
    specialize_deformation,
    structure_table,
    symbolic_element,
)
from weightlab.linweight import WeightedBundleChart
from weightlab.polycore import Polynomial, is_inf
from weightlab.weighting import (
    T_VAR,
    PolynomialMap,
    PolyVectorField,
    WeightedChart,
    check_clean_distribution,
    check_weighted_morphism,
    filtration_degree,
    homogeneous_approximation,
    rees_interpolation,
    weighted_path_valuation,
    zoom_weight,
)
from weightlab.workspace import load

from golden_cases import CASES, golden_path

SEED = 0
POINT = WeightedChart((), ())


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
        assert ok, detail

    return emit


def _first_failure(checks):
    for label, ok in checks:
        if not ok:
            return label
    return None


# 1 -------------------------------------------------------------------------------


def criterion_1():
    rng = random.Random(SEED * 1000 + 1)
    checked, failures = 0, []
    for _ in range(5):
        chart = rg.random_chart(rng, max_vars=4, max_weight=4)
        r = rng.randint(max(chart.weights), 4)
        q = q_model(chart, r)
        for _ in range(500):
            f = rg.random_polynomial(rng, chart.coordinates, 6)
            d = filtration_degree(chart, f)
            capped = r + 1 if is_inf(d) else min(d, r + 1)
            if weighted_path_valuation(chart, f) != d or degree_via_q(q, f) != capped:
                failures.append(f"{f} over {chart.weights}, r={r}")
            checked += 1
    return not failures, f"{checked} polynomials over 5 charts, {len(failures)} disagreements" + (
        f" (first: {failures[0]})" if failures else ""
    )


def test_criterion_1_degree_oracles(report):
    report(1, *criterion_1())


# 2 -------------------------------------------------------------------------------


def criterion_2():
    P = Polynomial.parse
    plane = WeightedChart(("x", "y"), (1, 3))
    line = WeightedChart(("u",), (1,))
    gens = {"x^4": P("x^4"), "x*y": P("x*y"), "y^2": P("y^2")}
    problems = []
    for text, g in gens.items():
        d = filtration_degree(plane, g)
        if d != 4:
            problems.append(f"generator {text} has degree {d}, not exactly 4")
    exps = [dict(next(iter(g.monomials()))) for g in gens.values()]
    for a in range(9):
        for b in range(4):
            if a + 3 * b >= 4 and not any(a >= e.get("x", 0) and b >= e.get("y", 0) for e in exps):
                problems.append(f"x^{a}*y^{b} is not a multiple of a generator")
    parabola = check_weighted_morphism(PolynomialMap(line, plane, (P("u"), P("u^2"))))
    if parabola.ok or "y: degree 2 < 3" not in parabola.witnesses:
        problems.append(f"parabola verdict {parabola}")
    if not check_weighted_morphism(PolynomialMap(line, plane, (P("u"), P("u^3")))):
        problems.append("cubic rejected")
    detail = "generators, ideal membership, parabola witness and cubic acceptance"
    return not problems, detail if not problems else "; ".join(problems)


def test_criterion_2_example_fidelity(report):
    report(2, *criterion_2())


# 3 -------------------------------------------------------------------------------


def criterion_3():
    rng = random.Random(SEED * 1000 + 3)
    checked = 0
    while checked < 300:
        chart = rg.random_chart(rng, max_vars=3, max_weight=3)
        f = rg.random_polynomial(rng, chart.coordinates, 4, zero_chance=0)
        g = rg.random_polynomial(rng, chart.coordinates, 4, zero_chance=0)
        i = filtration_degree(chart, f) - rng.randint(0, 1)
        j = filtration_degree(chart, g) - rng.randint(0, 1)
        lhs = homogeneous_approximation(chart, f * g, i + j)
        rhs = homogeneous_approximation(chart, f, i) * homogeneous_approximation(chart, g, j)
        rees = rees_interpolation(chart, f, i)
        bar = f.rename(dict(zip(chart.coordinates, chart.barred_names())))
        label = _first_failure(
            [
                ("gr law", lhs == rhs),
                ("t=1", rees.substitute({T_VAR: 1}) == bar),
                ("t=0", rees.substitute({T_VAR: 0}) == homogeneous_approximation(chart, f, i)),
                ("zoom", zoom_weight(chart, rees) == i),
            ]
        )
        if label:
            return False, f"{label} fails for f={f}, g={g}, i={i}, j={j}"
        checked += 1
    return True, f"{checked} seeded (f, g, i, j)"


def test_criterion_3_gr_rees_laws(report):
    report(3, *criterion_3())


# 4 -------------------------------------------------------------------------------


def criterion_4():
    rng = random.Random(SEED * 1000 + 4)
    for n in range(500):
        chart = rg.random_chart(rng, max_vars=2, max_weight=2)
        r = rng.randint(0, 4)
        f = rg.random_polynomial(rng, chart.coordinates, 3)
        g = rg.random_polynomial(rng, chart.coordinates, 3)
        X = rg.random_vector_field(rng, chart, 2)
        Y = rg.random_vector_field(rng, chart, 2)
        i = rng.randint(0, r)
        j = rng.randint(0, r - i)
        k = rng.randint(i, r)
        product = sum(
            (lift_function(f, a, r) * lift_function(g, i - a, r) for a in range(i + 1)), Polynomial.zero()
        )
        Xi = lift_vector_field(X, i, r)
        module = PolyVectorField.zero(jet_chart(chart, r))
        for m in range(i, r + 1):
            module = module + lift_vector_field(X, m, r).scale(lift_function(f, m - i, r))
        other = rg.random_chart(rng, max_vars=2, max_weight=2, names=("s", "t"))
        F = rg.random_map(rng, chart, other, max_degree=2)
        G = rg.random_map(rng, other, chart, max_degree=2)
        label = _first_failure(
            [
                ("product rule", lift_function(f * g, i, r) == product),
                ("derivation relation", Xi(all_lifts(f, r)[k]) == lift_function(X(f), k - i, r)),
                ("module rule", lift_vector_field(X.scale(f), i, r) == module),
                ("bracket rule", Xi.bracket(lift_vector_field(Y, j, r)) == lift_vector_field(X.bracket(Y), i + j, r)),
                ("composition", lift_map(G, r).compose(lift_map(F, r)) == lift_map(G.compose(F), r)),
                ("identity", lift_map(PolynomialMap.identity(chart), r) == PolynomialMap.identity(jet_chart(chart, r))),
            ]
        )
        if label:
            return False, f"{label} fails on instance {n}: f={f}, X={X}, i={i}, r={r}"
    return True, "500 seeded instances with r <= 4"


def test_criterion_4_tangent_lifts(report):
    report(4, *criterion_4())


# 5 -------------------------------------------------------------------------------


def criterion_5():
    rng = random.Random(SEED * 1000 + 5)
    bases, mutants = [], []
    while len(bases) < 100 or len(mutants) < 20:
        A = rg.random_algebroid(rng)
        bases.append(A)
        B = rg.im_breaking_mutation(A)
        if B is not None:
            mutants.append(B)
    lifted = 0
    for C in bases + mutants:
        im = bool(check_im_weighting(C))
        if bool(dA_check(C)) != im or bool(poisson_degree_check(C)) != im:
            return False, f"characterizations disagree on {C}"
        if all(v <= 0 for v in C.bundle.vertical):
            r = max([max(C.base.weights, default=0)] + [-v for v in C.bundle.vertical])
            lifted += 1
            if bool(lifted_algebroid_check(C, r)) != im:
                return False, f"lifted algebroid check disagrees on {C}"
    if any(check_im_weighting(B) for B in mutants):
        return False, "a mutation kept the IM property"
    true_count = sum(bool(check_im_weighting(A)) for A in bases)
    return True, (
        f"{len(bases)} algebroids ({true_count} IM) and {len(mutants)} mutations agree; "
        f"lifted check agrees on {lifted} non-positive cases"
    )


def test_criterion_5_im_equivalence(report):
    report(5, *criterion_5())


# 6 -------------------------------------------------------------------------------


def criterion_6():
    P = Polynomial.parse
    rng = random.Random(SEED * 1000 + 6)
    checked = 0
    while checked < 100:
        A = rg.random_algebroid(rng)
        if not check_im_weighting(A):
            continue
        G, D = graded_normal_algebroid(A), rees_deformation_algebroid(A)
        label = _first_failure(
            [
                ("graded Jacobi", check_jacobi(G)),
                ("deformation Jacobi", check_jacobi(D)),
                ("t=0", structure_table(specialize_deformation(D, 0)) == structure_table(G)),
                ("t=1", structure_table(specialize_deformation(D, 1)) == structure_table(A)),
            ]
        )
        if label:
            return False, f"{label} fails on {A}"
        checked += 1
    sl2 = load("sl2-borel").algebroids["sl2"]
    G, D = graded_normal_algebroid(sl2), rees_deformation_algebroid(sl2)
    e, f = 1, 2
    heis = AlgebroidData.build(
        WeightedBundleChart(POINT, ("e1", "e2", "e3"), (-1, -1, -2)), {}, {("e1", "e2"): {"e3": 1}}
    )
    label = _first_failure(
        [
            ("sl2 graded [e,f] = 0", not any(G.gamma(e, f))),
            ("sl2 deformed [e,f] = t h", D.gamma(e, f) == (P("_t"), Polynomial.zero(), Polynomial.zero())),
            ("Heisenberg fixed", structure_table(graded_normal_algebroid(heis)) == structure_table(heis)),
        ]
    )
    if label:
        return False, label
    return True, f"{checked} IM algebroids plus the sl2-Borel and Heisenberg examples"


def test_criterion_6_limit_algebroids(report):
    report(6, *criterion_6())


# 7 -------------------------------------------------------------------------------


def _nilpotent_examples():
    build = lambda frame, v, br: GradedNilpotentLie(
        AlgebroidData.build(WeightedBundleChart(POINT, frame, v), {}, br)
    )
    return {
        "heisenberg": build(("e1", "e2", "e3"), (-1, -1, -2), {("e1", "e2"): {"e3": 1}}),
        "filiform": build(
            ("e1", "e2", "e3", "e4"), (-1, -1, -2, -3), {("e1", "e2"): {"e3": 1}, ("e1", "e3"): {"e4": 1}}
        ),
        "free-3": build(
            ("a", "b", "c", "d", "e"),
            (-1, -1, -2, -3, -3),
            {("a", "b"): {"c": 1}, ("a", "c"): {"d": 1}, ("b", "c"): {"e": 1}},
        ),
    }


def criterion_7():
    examples = _nilpotent_examples()
    H = examples["heisenberg"]
    product = bch_product(H, (1, 0, 0), (0, 1, 0))
    if product != tuple(Polynomial.constant(c) for c in (1, 1, Fraction(1, 2))):
        return False, f"(1,0,0).(0,1,0) = {product}"
    for name, G in examples.items():
        if G.step > 3:
            return False, f"{name} has step {G.step}"
        X, Y, Z = (symbolic_element(G, p) for p in ("x", "y", "z"))
        zero = (Polynomial.zero(),) * G.rank
        label = _first_failure(
            [
                ("associativity", bch_product(G, bch_product(G, X, Y), Z) == bch_product(G, X, bch_product(G, Y, Z))),
                ("unit", bch_product(G, X, zero) == X and bch_product(G, zero, X) == X),
                ("inverse", bch_product(G, X, tuple(-x for x in X)) == zero),
                ("dilation", dilation_check(G).ok),
            ]
        )
        if label:
            return False, f"{label} fails for {name}"
    return True, "Heisenberg product (1, 1, 1/2); symbolic group axioms and dilations for 3 algebras of step <= 3"


def test_criterion_7_nilpotent_groups(report):
    report(7, *criterion_7())


# 8 -------------------------------------------------------------------------------


def criterion_8():
    ws = load("cleanness")
    dist = ws.distributions["D"]
    gens = [ws.vector_fields[n] for n in dist.generators]
    verdicts = {}
    for label, sub in dist.submanifolds:
        verdicts[label] = check_clean_distribution(gens, sub.vanishing, sub.samples)
    dims = {k: [row[-1] for row in v.table] for k, v in verdicts.items()}
    ok = verdicts["x_axis"].ok and not verdicts["y_axis"].ok
    detail = f"x_axis clean={verdicts['x_axis'].ok} dims {dims['x_axis']}; y_axis clean={verdicts['y_axis'].ok} dims {dims['y_axis']}"
    if not ok:
        detail += " (expected the y-axis to be rejected)"
    return ok, detail


def test_criterion_8_cleanness(report):
    report(8, *criterion_8())


# 9 -------------------------------------------------------------------------------


def criterion_9():
    results = {}
    for name in ("sl2-borel", "heisenberg"):
        ws = load(name)
        (w,) = ws.wide.values()
        results[name] = check_wide_integration_hypotheses(ws.algebroids[w.algebroid], dict(w.levels), w.B, w.samples)
    sl2, heis = results["sl2-borel"], results["heisenberg"]
    ok = sl2.ok and not heis.ok and heis.witnesses == ("(a) [e1,e2] = (1)*e3 leaves A_-1",)
    return ok, f"sl2/Borel ok={sl2.ok}; Heisenberg witnesses {list(heis.witnesses)}"


def test_criterion_9_wide_hypotheses(report):
    report(9, *criterion_9())


# 10 ------------------------------------------------------------------------------


def criterion_10():
    mismatches = []
    for name, (argv, code) in CASES.items():
        expected = golden_path(name).read_bytes()
        for _ in range(2):
            proc = subprocess.run([sys.executable, "-m", "weightlab.cli", *argv], capture_output=True)
            if proc.returncode != code or proc.stdout != expected:
                mismatches.append(name)
                break
    return not mismatches, f"{len(CASES)} golden reports, 2 runs each, mismatches: {mismatches or 'none'}"


def test_criterion_10_cli_determinism(report):
    report(10, *criterion_10())


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


if __name__ == "__main__":
    for n, crit in enumerate(CRITERIA, 1):
        start = time.perf_counter()
        ok, detail = crit()
        print(f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail} [{time.perf_counter() - start:.1f}s]")

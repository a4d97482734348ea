"""Randomized invariant suites behind ``weightlab selftest``.

Each suite draws seeded random instances and checks an exact identity. A suite
returns the number of instances checked and the first counterexample, if any.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from . import randomgen as rg
from .hitangent import (
    all_lifts,
    degree_via_q,
    lift_function,
    lift_vector_field,
    lifted_algebroid_check,
    maps_q_into_q,
    q_model,
    tangency_check,
)
from .liealg import (
    GradedNilpotentLie,
    bch_product,
    check_im_weighting,
    check_jacobi,
    dA_check,
    dilation_check,
    graded_normal_algebroid,
    poisson_degree_check,
    rees_deformation_algebroid,
    specialize_deformation,
    structure_table,
)
from .linweight import (
    SectionElement,
    WeightedBundleChart,
    dual_bundle,
    pairing,
    section_degree,
    section_homogeneous_approximation,
    shift_bundle,
)
from .polycore import Polynomial, Truncated, is_inf
from .weighting import (
    filtration_degree,
    homogeneous_approximation,
    rees_interpolation,
    vector_field_degree,
    weighted_path_valuation,
    zoom_weight,
    T_VAR,
)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    checked: int
    failure: str | None

    @property
    def passed(self) -> bool:
        return self.failure is None


def _ring(rng, n):
    for _ in range(n):
        names = rg.NAMES[: rng.randint(1, 4)]
        p, q, s = (rg.random_polynomial(rng, names, 4) for _ in range(3))
        if (p * q) * s != p * (q * s) or p * (q + s) != p * q + p * s or p * q != q * p:
            return f"ring axiom fails on {p}, {q}, {s}"


def _substitution(rng, n):
    for _ in range(n):
        p, q = rg.random_polynomial(rng, "xy", 3), rg.random_polynomial(rng, "xy", 3)
        bind = {"x": rg.random_polynomial(rng, "st", 2), "y": rg.random_polynomial(rng, "st", 2)}
        if (p * q).substitute(bind) != p.substitute(bind) * q.substitute(bind):
            return f"substitution is not multiplicative on {p}, {q}"
        if (p + q).substitute(bind) != p.substitute(bind) + q.substitute(bind):
            return f"substitution is not additive on {p}, {q}"


def _truncated(rng, n):
    for _ in range(n):
        r = rng.randint(0, 4)
        p = rg.random_polynomial(rng, ("x", "e"), 4)
        q = rg.random_polynomial(rng, ("x", "e"), 4)
        lhs = Truncated.from_polynomial(p, "e", r) * Truncated.from_polynomial(q, "e", r)
        if lhs != Truncated.from_polynomial((p * q).with_variables(["e"]), "e", r):
            return f"truncated product disagrees on {p}, {q}, r={r}"


def _degree_oracle(rng, n):
    for _ in range(n):
        chart = rg.random_chart(rng)
        f = rg.random_polynomial(rng, chart.coordinates, 5)
        d = filtration_degree(chart, f)
        if weighted_path_valuation(chart, f) != d:
            return f"path valuation disagrees on {f} over {chart}"
        r = max(chart.weights + (rng.randint(0, 4),))
        cap = min(d, r + 1) if not is_inf(d) else r + 1
        if degree_via_q(q_model(chart, r), f) != cap:
            return f"Q degree disagrees on {f} over {chart}"


def _graded(rng, n):
    for _ in range(n):
        chart = rg.random_chart(rng, max_vars=3, max_weight=3)
        f = rg.random_polynomial(rng, chart.coordinates, 4, zero_chance=0)
        g = rg.random_polynomial(rng, chart.coordinates, 4, zero_chance=0)
        i, j = filtration_degree(chart, f), filtration_degree(chart, g)
        if filtration_degree(chart, f * g) != i + j:
            return f"degree is not additive on {f}, {g}"
        if homogeneous_approximation(chart, f * g, i + j) != homogeneous_approximation(chart, f, i) * homogeneous_approximation(chart, g, j):
            return f"gr law fails on {f}, {g}"
        rees = rees_interpolation(chart, f, i)
        bar = f.rename(dict(zip(chart.coordinates, chart.barred_names())))
        if rees.substitute({T_VAR: 1}) != bar or rees.substitute({T_VAR: 0}) != homogeneous_approximation(chart, f, i):
            return f"Rees endpoints fail on {f}"
        if zoom_weight(chart, rees) != i:
            return f"zoom weight of the Rees interpolation of {f} is not {i}"


def _bracket_degree(rng, n):
    for _ in range(n):
        chart = rg.random_chart(rng, max_vars=3, max_weight=3)
        X, Y = rg.random_vector_field(rng, chart), rg.random_vector_field(rng, chart)
        if vector_field_degree(X.bracket(Y)) < vector_field_degree(X) + vector_field_degree(Y):
            return f"bracket degree drops for {X}, {Y}"


def _linear(rng, n):
    for _ in range(n):
        chart = rg.random_chart(rng, max_vars=2, max_weight=3)
        rank = rng.randint(1, 3)
        bundle = WeightedBundleChart(chart, tuple(f"s{k + 1}" for k in range(rank)), tuple(rng.randint(-3, 3) for _ in range(rank)))
        sigma = rg.random_section(rng, bundle)
        tau = rg.random_section(rng, dual_bundle(bundle))
        if filtration_degree(chart, pairing(tau, sigma)) < section_degree(tau) + section_degree(sigma):
            return f"pairing law fails for {tau}, {sigma}"
        if dual_bundle(dual_bundle(bundle)) != bundle:
            return "dual is not an involution"
        d = section_degree(sigma)
        if is_inf(d):
            continue
        k = rng.randint(-2, 2)
        shifted = SectionElement(shift_bundle(bundle, k), sigma.coefficients)
        if section_homogeneous_approximation(shifted, d - k).coefficients != section_homogeneous_approximation(sigma, d).coefficients:
            return f"shift changes the approximation of {sigma}"
        g = rg.random_polynomial(rng, chart.coordinates, 2, zero_chance=0)
        e = filtration_degree(chart, g)
        lhs = section_homogeneous_approximation(sigma.scale(g), d + e).coefficients
        gbar = homogeneous_approximation(chart, g, e)
        rhs = section_homogeneous_approximation(sigma, d).scale(gbar).coefficients
        if lhs != rhs:
            return f"approximation module law fails for {g}, {sigma}"


def _im_equivalence(rng, n):
    for _ in range(n):
        A = rg.random_algebroid(rng)
        cases = [A]
        B = rg.im_breaking_mutation(A)
        if B is not None:
            cases.append(B)
        for C in cases:
            im = check_im_weighting(C).ok
            if dA_check(C).ok != im or poisson_degree_check(C).ok != im:
                return f"IM characterizations disagree on {C}"
            if all(v <= 0 for v in C.bundle.vertical):
                r = max([max(C.base.weights, default=0)] + [-v for v in C.bundle.vertical])
                if lifted_algebroid_check(C, r).ok != im:
                    return f"lifted algebroid check disagrees on {C}"
            if im:
                G = graded_normal_algebroid(C)
                D = rees_deformation_algebroid(C)
                if not check_jacobi(G) or not check_jacobi(D):
                    return f"limit algebroid of {C} fails Jacobi"
                if structure_table(specialize_deformation(D, 0)) != structure_table(G):
                    return f"t=0 fibre of {C} is not the graded algebroid"
                if structure_table(specialize_deformation(D, 1)) != structure_table(C):
                    return f"t=1 fibre of {C} is not the input"


def _bch(rng, n):
    heis = rg.base_algebroids()[2]
    G = GradedNilpotentLie(rg.reweight(heis, (), (-1, -1, -2)))
    for _ in range(n):
        X, Y, Z = ([rg.random_coefficient(rng) for _ in range(3)] for _ in range(3))
        if bch_product(G, bch_product(G, X, Y), Z) != bch_product(G, X, bch_product(G, Y, Z)):
            return f"BCH product is not associative on {X}, {Y}, {Z}"
        if bch_product(G, X, [-x for x in X]) != (Polynomial.zero(),) * 3:
            return f"-X is not inverse to {X}"
    if not dilation_check(G):
        return "dilation is not an automorphism"


def _lifts(rng, n):
    for _ in range(n):
        chart = rg.random_chart(rng, max_vars=2, max_weight=2)
        r = rng.randint(max(chart.weights), 4)
        f = rg.random_polynomial(rng, chart.coordinates, 3)
        g = rg.random_polynomial(rng, chart.coordinates, 3)
        i = rng.randint(0, r)
        rhs = sum((lift_function(f, j, r) * lift_function(g, i - j, r) for j in range(i + 1)), Polynomial.zero())
        if lift_function(f * g, i, r) != rhs:
            return f"product rule fails on {f}, {g}, i={i}"
        X = rg.random_vector_field(rng, chart)
        k = rng.randint(0, r)
        j = rng.randint(k, r)
        if lift_vector_field(X, k, r)(all_lifts(f, r)[j]) != lift_function(X(f), j - k, r):
            return f"derivation relation fails for {X}, {f}"
        q = q_model(chart, r)
        if tangency_check(q, X, k).ok != (vector_field_degree(X) >= -k):
            return f"tangency criterion disagrees for {X}, i={k}"
        F = rg.random_map(rng, chart, rg.random_chart(rng, max_vars=2, max_weight=min(2, r)), weighted=True)
        if not maps_q_into_q(F, r):
            return f"lift of weighted morphism {F} does not map Q into Q"


SUITES: dict = {
    "ring axioms": _ring,
    "substitution homomorphism": _substitution,
    "truncated products": _truncated,
    "degree oracles": _degree_oracle,
    "graded and Rees laws": _graded,
    "bracket degree additivity": _bracket_degree,
    "linear weightings": _linear,
    "IM equivalence and limits": _im_equivalence,
    "BCH group law": _bch,
    "tangent lifts": _lifts,
}


def run(seed: int = 0, count: int = 40, only: Callable[[str], bool] | None = None) -> list:
    results = []
    for k, (name, suite) in enumerate(SUITES.items()):
        if only and not only(name):
            continue
        rng = random.Random(seed * 1000 + k)
        failure = suite(rng, count)
        results.append(SuiteResult(name, count, failure))
    return results

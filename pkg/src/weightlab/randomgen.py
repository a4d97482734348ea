"""Seeded generators for charts, polynomials, maps, vector fields and algebroids.

Every generator takes a :class:`random.Random` so suites are reproducible.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .liealg import AlgebroidData
from .linweight import SectionElement, WeightedBundleChart
from .polycore import Polynomial, is_inf
from .weighting import PolynomialMap, PolyVectorField, WeightedChart

NAMES = ("x", "y", "z", "u")


def random_coefficient(rng: random.Random, bound: int = 5) -> Fraction:
    num = rng.randint(-bound, bound) or 1
    den = rng.choice((1, 1, 1, 2, 3))
    return Fraction(num, den)


def random_chart(rng: random.Random, max_vars: int = 4, max_weight: int = 4, min_vars: int = 1, names=NAMES) -> WeightedChart:
    n = rng.randint(min_vars, max_vars)
    weights = tuple(rng.randint(0, max_weight) for _ in range(n))
    return WeightedChart(tuple(names[:n]), weights)


def random_monomial(rng: random.Random, variables, max_degree: int) -> tuple:
    total = rng.randint(0, max_degree)
    powers: dict = {}
    for _ in range(total):
        if not variables:
            break
        name = rng.choice(variables)
        powers[name] = powers.get(name, 0) + 1
    return tuple(sorted(powers.items()))


def random_polynomial(rng: random.Random, variables, max_degree: int = 6, max_terms: int = 5, zero_chance: float = 0.05) -> Polynomial:
    variables = tuple(variables)
    if rng.random() < zero_chance:
        return Polynomial.zero(variables)
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        terms[random_monomial(rng, variables, max_degree)] = random_coefficient(rng)
    return Polynomial(terms, variables)


def random_polynomial_of_degree(rng: random.Random, chart: WeightedChart, at_least: int, max_degree: int = 4, max_terms: int = 4) -> Polynomial:
    """A random polynomial whose filtration degree is >= ``at_least``."""
    p = random_polynomial(rng, chart.coordinates, max_degree, max_terms, zero_chance=0.1)
    kept = {m: c for m, c in p.items() if chart.monomial_weight(m) >= at_least}
    if not kept and rng.random() < 0.7:
        # pad with a monomial of large enough weight when one exists
        heavy = [x for x, w in zip(chart.coordinates, chart.weights) if w > 0]
        if heavy or at_least <= 0:
            mono: dict = {}
            weight = 0
            while weight < at_least:
                x = rng.choice(heavy)
                mono[x] = mono.get(x, 0) + 1
                weight += chart.weight(x)
            kept[tuple(sorted(mono.items()))] = random_coefficient(rng)
    return Polynomial(kept, chart.coordinates)


def random_vector_field(rng: random.Random, chart: WeightedChart, max_degree: int = 3, max_terms: int = 3) -> PolyVectorField:
    return PolyVectorField(
        chart,
        tuple(random_polynomial(rng, chart.coordinates, max_degree, max_terms, zero_chance=0.3) for _ in chart.coordinates),
    )


def random_map(rng: random.Random, source: WeightedChart, target: WeightedChart, weighted: bool | None = None, max_degree: int = 4) -> PolynomialMap:
    """Random polynomial map; ``weighted=True`` forces a weighted morphism."""
    if weighted is None:
        weighted = rng.random() < 0.5
    comps = []
    for w in target.weights:
        if weighted:
            comps.append(random_polynomial_of_degree(rng, source, w, max_degree))
        else:
            comps.append(random_polynomial(rng, source.coordinates, max_degree, 3, zero_chance=0.1))
    return PolynomialMap(source, target, tuple(comps))


def random_section(rng: random.Random, bundle: WeightedBundleChart, max_degree: int = 3) -> SectionElement:
    return SectionElement(
        bundle,
        tuple(random_polynomial(rng, bundle.base.coordinates, max_degree, 3, zero_chance=0.2) for _ in bundle.frame),
    )


# -- algebroids -------------------------------------------------------------------


def _point() -> WeightedChart:
    return WeightedChart((), ())


def base_algebroids() -> list:
    """Known Lie algebroids of rank <= 3 over bases of dimension <= 2 (all weights zero)."""
    plane = WeightedChart(("x", "y"), (0, 0))
    line = WeightedChart(("x",), (0,))
    out = []
    out.append(AlgebroidData.build(WeightedBundleChart(_point(), ("a1", "a2"), (0, 0))))
    out.append(AlgebroidData.build(WeightedBundleChart(line, ("a1",), (0,))))
    out.append(
        AlgebroidData.build(
            WeightedBundleChart(_point(), ("e1", "e2", "e3"), (0, 0, 0)), {}, {("e1", "e2"): {"e3": 1}}
        )
    )
    out.append(
        AlgebroidData.build(
            WeightedBundleChart(plane, ("h", "e", "f"), (0, 0, 0)),
            {"h": {"x": "x", "y": "-y"}, "e": {"y": "x"}, "f": {"x": "y"}},
            {("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}, ("e", "f"): {"h": 1}},
        )
    )
    out.append(
        AlgebroidData.build(
            WeightedBundleChart(plane, ("h", "e"), (0, 0)),
            {"h": {"x": "x", "y": "-y"}, "e": {"y": "x"}},
            {("h", "e"): {"e": 2}},
        )
    )
    out.append(
        AlgebroidData.build(
            WeightedBundleChart(plane, ("dx", "dy"), (0, 0)), {"dx": {"x": 1}, "dy": {"y": 1}}
        )
    )
    out.append(AlgebroidData.build(WeightedBundleChart(line, ("dx",), (0,)), {"dx": {"x": 1}}))
    out.append(
        AlgebroidData.build(
            WeightedBundleChart(line, ("a", "b"), (0, 0)),
            {"a": {"x": "-x"}, "b": {"x": 1}},
            {("a", "b"): {"b": 1}},
        )
    )
    return out


def reweight(A: AlgebroidData, base_weights, vertical) -> AlgebroidData:
    base = WeightedChart(A.base.coordinates, tuple(base_weights))
    bundle = WeightedBundleChart(base, A.bundle.frame, tuple(vertical))
    return AlgebroidData(bundle, A.anchor, A.structure)


def _unipotent(rng: random.Random, n: int, variables, max_degree: int) -> list:
    T = [[Polynomial.constant(int(a == b)) for b in range(n)] for a in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < 0.5:
                T[a][b] = random_polynomial(rng, variables, max_degree, 2, zero_chance=0)
    return T


def _unipotent_inverse(T: list) -> list:
    """Inverse of an upper unitriangular polynomial matrix by back substitution."""
    n = len(T)
    inv = [[Polynomial.constant(int(a == b)) for b in range(n)] for a in range(n)]
    for b in range(n):
        for a in range(b - 1, -1, -1):
            total = Polynomial.zero()
            for k in range(a + 1, b + 1):
                total = total + T[a][k] * inv[k][b]
            inv[a][b] = -total
    return inv


def change_of_frame(A: AlgebroidData, T: list) -> AlgebroidData:
    """Rewrite A in the frame sigma'_b = sum_a T[a][b] sigma_a (T invertible, unitriangular)."""
    n = A.rank
    Tinv = _unipotent_inverse(T)
    new = [SectionElement(A.bundle, tuple(T[a][b] for a in range(n))) for b in range(n)]
    anchor = tuple(A.anchor_of(s).coefficients for s in new)
    structure = {}
    for a in range(n):
        for b in range(a + 1, n):
            old = A.bracket(new[a], new[b]).coefficients
            coeffs = []
            for c in range(n):
                total = Polynomial.zero()
                for k in range(n):
                    total = total + Tinv[c][k] * old[k]
                coeffs.append(total)
            structure[(a, b)] = tuple(coeffs)
    return AlgebroidData(A.bundle, anchor, structure)


def random_algebroid(rng: random.Random, max_weight: int = 2, frame_change: bool = True) -> AlgebroidData:
    A = rng.choice(base_algebroids())
    if frame_change and A.rank > 1:
        A = change_of_frame(A, _unipotent(rng, A.rank, A.base.coordinates, 1))
    base_w = tuple(rng.randint(0, max_weight) for _ in A.base.coordinates)
    vertical = tuple(rng.randint(-max_weight - 1, 0) for _ in A.bundle.frame)
    return reweight(A, base_w, vertical)


def im_breaking_mutation(A: AlgebroidData):
    """Change one vertical weight so the IM degree bound fails, or None if impossible."""
    from .liealg import check_im_weighting
    from .weighting import filtration_degree, vector_field_degree

    v = list(A.bundle.vertical)
    for (a, b), coeffs in A.structure.items():
        for c, gam in enumerate(coeffs):
            if gam and c not in (a, b):
                d = filtration_degree(A.base, gam)
                v2 = list(v)
                v2[c] = v[a] + v[b] - d - 1
                B = reweight(A, A.base.weights, v2)
                if not check_im_weighting(B):
                    return B
    for a in range(A.rank):
        d = vector_field_degree(A.anchor_field(a))
        if is_inf(d):
            continue
        v2 = list(v)
        v2[a] = d + 1
        B = reweight(A, A.base.weights, v2)
        if not check_im_weighting(B):
            return B
    return None

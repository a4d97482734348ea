"""Weightings of a polynomial chart along the zero set of its weighted coordinates.

A :class:`WeightedChart` assigns a non-negative weight to every coordinate.
Functions are filtered by the weighted order of their monomials; the
submanifold N is ``{x_a = 0 : w_a >= 1}``.

Homogeneous approximations live in "barred" coordinates (``x`` becomes
``x_bar``) and Rees interpolations additionally use the reserved variable
``_t``. Weighted paths use the reserved coefficients ``_lam1, _lam2, ...``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import HomogeneityError, PreconditionError, VariableError
from .linalg import rank
from .polycore import INF, Polynomial
from .verdict import Verdict

T_VAR = "_t"
BAR_SUFFIX = "_bar"


def barred(name: str) -> str:
    return name + BAR_SUFFIX


def lam(k: int) -> str:
    return f"_lam{k}"


@dataclass(frozen=True)
class WeightedChart:
    coordinates: tuple
    weights: tuple
    order: int | None = None

    def __post_init__(self):
        coords = tuple(self.coordinates)
        weights = tuple(int(w) for w in self.weights)
        object.__setattr__(self, "coordinates", coords)
        object.__setattr__(self, "weights", weights)
        if len(coords) != len(weights):
            raise ValueError("one weight per coordinate is required")
        if len(set(coords)) != len(coords):
            raise ValueError(f"duplicate coordinate names in {coords}")
        if any(w < 0 for w in weights):
            raise ValueError(f"weights must be non-negative, got {weights}")
        top = max(weights, default=0)
        if self.order is None:
            object.__setattr__(self, "order", top)
        elif self.order < top:
            raise ValueError(f"order {self.order} is below the largest weight {top}")

    @property
    def dim(self) -> int:
        return len(self.coordinates)

    def weight(self, name: str) -> int:
        try:
            return self.weights[self.coordinates.index(name)]
        except ValueError:
            raise VariableError(f"{name!r} is not a coordinate of this chart") from None

    def weight_map(self) -> dict:
        return dict(zip(self.coordinates, self.weights))

    def normal_coordinates(self) -> tuple:
        """Coordinates cutting out N (those of positive weight)."""
        return tuple(x for x, w in zip(self.coordinates, self.weights) if w > 0)

    def barred_names(self) -> tuple:
        return tuple(barred(x) for x in self.coordinates)

    def barred_chart(self) -> "WeightedChart":
        return WeightedChart(self.barred_names(), self.weights, self.order)

    def check(self, f: Polynomial, extra: Iterable[str] = ()) -> Polynomial:
        allowed = set(self.coordinates) | set(extra)
        foreign = sorted(f.used_variables() - allowed)
        if foreign:
            raise VariableError(f"variable(s) {', '.join(foreign)} not in chart {self.coordinates}")
        return f.with_variables(self.coordinates)

    def monomial_weight(self, mono) -> int:
        wmap = self.weight_map()
        return sum(wmap[name] * e for name, e in mono)

    def poly(self, text) -> Polynomial:
        return self.check(Polynomial.coerce(text) if not isinstance(text, str) else Polynomial.parse(text))


def _dx(f: Polynomial, name: str) -> Polynomial:
    if name not in f.used_variables():
        return Polynomial.zero(f.variables)
    return f.diff(name)


def _monomial_text(mono) -> str:
    return str(Polynomial({mono: 1})) if mono else "1"


# -- function filtration ------------------------------------------------


def filtration_degree(chart: WeightedChart, f: Polynomial):
    f = chart.check(f)
    if f.is_zero():
        return INF
    return min(chart.monomial_weight(m) for m in f.monomials())


def homogeneous_decomposition(chart: WeightedChart, f: Polynomial) -> dict:
    f = chart.check(f)
    parts: dict = {}
    for mono, coeff in f.items():
        d = chart.monomial_weight(mono)
        parts.setdefault(d, {})[mono] = coeff
    return {d: Polynomial(terms, chart.coordinates) for d, terms in sorted(parts.items())}


def _require_degree(chart, f, i, what="function"):
    for mono in f.monomials():
        d = chart.monomial_weight(mono)
        if d < i:
            raise PreconditionError(
                f"{what} has filtration degree below {i}: monomial {_monomial_text(mono)} has weight {d}"
            )


def homogeneous_approximation(chart: WeightedChart, f: Polynomial, i: int) -> Polynomial:
    """The class of ``f`` in gr_i, as a polynomial in the barred coordinates."""
    f = chart.check(f)
    _require_degree(chart, f, i)
    part = homogeneous_decomposition(chart, f).get(i, Polynomial.zero(chart.coordinates))
    rename = dict(zip(chart.coordinates, chart.barred_names()))
    return part.rename(rename).with_variables(chart.barred_names())


def _shift_t(g: Polynomial, k: int) -> Polynomial:
    """Multiply by t**k; k may be negative when divisibility is guaranteed."""

    def shift(mono, coeff):
        powers = dict(mono)
        e = powers.get(T_VAR, 0) + k
        if e < 0:
            raise PreconditionError("negative power of t would appear")
        if e:
            powers[T_VAR] = e
        else:
            powers.pop(T_VAR, None)
        return tuple(sorted(powers.items())), coeff

    return g.with_variables([T_VAR]).map_monomials(shift)


def rees_interpolation(chart: WeightedChart, f: Polynomial, i: int) -> Polynomial:
    """t^{-i} f(t^{w_1} x1_bar, ..., t^{w_m} xm_bar)."""
    f = chart.check(f)
    _require_degree(chart, f, i)
    t = Polynomial.var(T_VAR)
    scaled = f.substitute(
        {x: t ** w * Polynomial.var(barred(x)) for x, w in zip(chart.coordinates, chart.weights)}
    )
    return _shift_t(scaled, -i).with_variables(chart.barred_names() + (T_VAR,))


def zoom_weight(chart: WeightedChart, g: Polynomial) -> int:
    """Degree of ``g(x_bar, t)`` under x_bar_a -> lam^{w_a} x_bar_a, t -> lam^{-1} t."""
    allowed = set(chart.barred_names()) | {T_VAR}
    foreign = sorted(g.used_variables() - allowed)
    if foreign:
        raise VariableError(f"variable(s) {', '.join(foreign)} are neither barred coordinates nor {T_VAR}")
    if g.is_zero():
        raise HomogeneityError("the zero function is homogeneous of every degree")
    up, down = "_lam", "_laminv"
    scaled = g.substitute(
        {
            **{barred(x): Polynomial.var(up, w) * Polynomial.var(barred(x)) for x, w in zip(chart.coordinates, chart.weights)},
            T_VAR: Polynomial.var(down) * Polynomial.var(T_VAR),
        }
    )
    seen: dict = {}
    for mono, coeff in scaled.items():
        powers = dict(mono)
        degree = powers.pop(up, 0) - powers.pop(down, 0)
        seen.setdefault(degree, (tuple(sorted(powers.items())), coeff))
    if len(seen) > 1:
        (d1, (m1, c1)), (d2, (m2, c2)) = sorted(seen.items())[:2]
        raise HomogeneityError(
            f"not homogeneous: {Polynomial({m1: c1})} has zoom degree {d1}, {Polynomial({m2: c2})} has zoom degree {d2}"
        )
    return next(iter(seen))


def weighted_path_valuation(chart: WeightedChart, f: Polynomial):
    """t-adic valuation of f along the monomial path x_a = lam_a t^{w_a}."""
    f = chart.check(f)
    t = Polynomial.var(T_VAR)
    path = {
        x: Polynomial.var(lam(k + 1)) * t ** w
        for k, (x, w) in enumerate(zip(chart.coordinates, chart.weights))
    }
    return f.substitute(path).with_variables([T_VAR]).valuation(T_VAR)


# -- maps ------------------------------------------------------------------


@dataclass(frozen=True)
class PolynomialMap:
    source: WeightedChart
    target: WeightedChart
    components: tuple

    def __post_init__(self):
        comps = tuple(self.source.check(Polynomial.coerce(c)) for c in self.components)
        if len(comps) != self.target.dim:
            raise ValueError(f"expected {self.target.dim} components, got {len(comps)}")
        object.__setattr__(self, "components", comps)

    @classmethod
    def identity(cls, source: WeightedChart, target: WeightedChart | None = None) -> "PolynomialMap":
        target = target or source
        if target.dim != source.dim:
            raise ValueError("identity needs charts of equal dimension")
        return cls(source, target, tuple(Polynomial.var(x) for x in source.coordinates))

    def component(self, name: str) -> Polynomial:
        return self.components[self.target.coordinates.index(name)]

    def pullback(self, g: Polynomial) -> Polynomial:
        g = self.target.check(g)
        return g.substitute(dict(zip(self.target.coordinates, self.components))).with_variables(
            self.source.coordinates
        )

    def compose(self, first: "PolynomialMap") -> "PolynomialMap":
        """self o first."""
        if first.target.coordinates != self.source.coordinates:
            raise ValueError("maps are not composable")
        return PolynomialMap(first.source, self.target, tuple(first.pullback(c) for c in self.components))

    def __call__(self, point: Mapping[str, Fraction] | Sequence) -> tuple:
        point = _as_point(self.source, point)
        return tuple(c.evaluate(point) for c in self.components)


def _as_point(chart: WeightedChart, point) -> dict:
    if isinstance(point, Mapping):
        values = {k: Fraction(v) for k, v in point.items()}
    else:
        point = list(point)
        if len(point) != chart.dim:
            raise PreconditionError(f"point {point} does not have {chart.dim} coordinates")
        values = {x: Fraction(v) for x, v in zip(chart.coordinates, point)}
    missing = [x for x in chart.coordinates if x not in values]
    if missing:
        raise PreconditionError(f"point is missing coordinate(s) {', '.join(missing)}")
    return values


def _on_normal(chart: WeightedChart, point: dict) -> bool:
    return all(point[x] == 0 for x in chart.normal_coordinates())


def check_weighted_morphism(F: PolynomialMap) -> Verdict:
    witnesses, table = [], []
    for y, w, comp in zip(F.target.coordinates, F.target.weights, F.components):
        d = filtration_degree(F.source, comp)
        table.append((y, d, w))
        if d < w:
            witnesses.append(f"{y}: degree {d} < {w}")
    return Verdict(not witnesses, tuple(witnesses), tuple(table))


def maps_normal_into_normal(F: PolynomialMap) -> bool:
    normal = F.source.normal_coordinates()
    return all(
        F.components[b].restrict_zero(normal).is_zero()
        for b, w in enumerate(F.target.weights)
        if w > 0
    )


def check_tangent_filtration(F: PolynomialMap) -> Verdict:
    """Is TF : TM|_N -> TM'|_N' filtration preserving?"""
    if not maps_normal_into_normal(F):
        raise PreconditionError("map does not send N into N'")
    normal = F.source.normal_coordinates()
    witnesses = []
    for y, wb, comp in zip(F.target.coordinates, F.target.weights, F.components):
        for x, wa in zip(F.source.coordinates, F.source.weights):
            if wb <= wa:
                continue
            on_n = _dx(comp, x).restrict_zero(normal)
            if not on_n.is_zero():
                witnesses.append(f"(b={y}, a={x}): d({comp})/d{x} = {on_n} on N with {wb} > {wa}")
    return Verdict(not witnesses, tuple(witnesses))


@dataclass(frozen=True)
class GraphChart:
    """Product chart on (target, source) with the graph cut out by ``cut_out``."""

    chart: WeightedChart
    target_names: tuple
    cut_out: tuple  # of (name, Polynomial, degree)


def graph_cutout(F: PolynomialMap):
    """Product chart and y_b - F*y_b with their degrees (no precondition)."""
    src = set(F.source.coordinates)
    target_names = tuple(y + "_tgt" if y in src else y for y in F.target.coordinates)
    product = WeightedChart(
        target_names + F.source.coordinates,
        F.target.weights + F.source.weights,
        max(F.target.order, F.source.order),
    )
    rows = []
    for name, comp in zip(target_names, F.components):
        cut = (Polynomial.var(name) - comp).with_variables(product.coordinates)
        rows.append((name, cut, filtration_degree(product, cut)))
    return product, target_names, tuple(rows)


def graph_submanifold_chart(F: PolynomialMap) -> GraphChart:
    verdict = check_weighted_morphism(F)
    if not verdict:
        raise PreconditionError("not a weighted morphism: " + "; ".join(verdict.witnesses))
    product, names, rows = graph_cutout(F)
    for (name, _, d), w in zip(rows, F.target.weights):
        if d != w:
            raise AssertionError(f"graph coordinate for {name} has degree {d}, expected {w}")
    return GraphChart(product, names, rows)


# -- vector fields -----------------------------------------------------------


@dataclass(frozen=True)
class PolyVectorField:
    chart: WeightedChart
    coefficients: tuple

    def __post_init__(self):
        coeffs = tuple(self.chart.check(Polynomial.coerce(c)) for c in self.coefficients)
        if len(coeffs) != self.chart.dim:
            raise ValueError(f"expected {self.chart.dim} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_mapping(cls, chart: WeightedChart, mapping: Mapping[str, object]) -> "PolyVectorField":
        unknown = set(mapping) - set(chart.coordinates)
        if unknown:
            raise VariableError(f"no coordinate(s) {', '.join(sorted(unknown))} in chart")
        return cls(chart, tuple(Polynomial.coerce(mapping.get(x, 0)) for x in chart.coordinates))

    @classmethod
    def coordinate(cls, chart: WeightedChart, name: str) -> "PolyVectorField":
        return cls.from_mapping(chart, {name: 1})

    @classmethod
    def euler(cls, chart: WeightedChart) -> "PolyVectorField":
        return cls(chart, tuple(Polynomial.var(x) for x in chart.coordinates))

    @classmethod
    def zero(cls, chart: WeightedChart) -> "PolyVectorField":
        return cls(chart, (0,) * chart.dim)

    def __call__(self, f: Polynomial) -> Polynomial:
        total = Polynomial.zero(self.chart.coordinates)
        for x, c in zip(self.chart.coordinates, self.coefficients):
            if c:
                total = total + c * _dx(f, x)
        return total

    def __add__(self, other):
        return PolyVectorField(self.chart, tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other):
        return PolyVectorField(self.chart, tuple(a - b for a, b in zip(self.coefficients, other.coefficients)))

    def scale(self, f) -> "PolyVectorField":
        f = Polynomial.coerce(f)
        return PolyVectorField(self.chart, tuple(f * c for c in self.coefficients))

    def bracket(self, other: "PolyVectorField") -> "PolyVectorField":
        return PolyVectorField(
            self.chart,
            tuple(self(b) - other(a) for a, b in zip(self.coefficients, other.coefficients)),
        )

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coefficients)

    def at(self, point) -> tuple:
        point = _as_point(self.chart, point)
        return tuple(c.evaluate(point) for c in self.coefficients)

    def __str__(self):
        parts = [f"({c})*d/d{x}" for x, c in zip(self.chart.coordinates, self.coefficients) if c]
        return " + ".join(parts) if parts else "0"


def vector_field_degree(X: PolyVectorField):
    degree = INF
    for c, w in zip(X.coefficients, X.chart.weights):
        if c:
            degree = min(degree, filtration_degree(X.chart, c) - w)
    return degree


# -- pointwise criteria -------------------------------------------------------


def check_weighted_transverse_at_point(F: PolynomialMap, G: PolynomialMap, p, q) -> Verdict:
    """Graded transversality at (p, q): do the graded tangent images fill every gr piece?"""
    if F.target.coordinates != G.target.coordinates or F.target.weights != G.target.weights:
        raise PreconditionError("maps must share the target chart")
    p = _as_point(F.source, p)
    q = _as_point(G.source, q)
    if not _on_normal(F.source, p) or not _on_normal(G.source, q):
        raise PreconditionError("sample points must lie on the respective N")
    fp, gq = F(p), G(q)
    if fp != gq:
        raise PreconditionError(f"images differ: F(p) = {fp}, G(q) = {gq}")
    if not _on_normal(F.target, dict(zip(F.target.coordinates, fp))):
        raise PreconditionError("common image is not on N''")
    table, witnesses = [], []
    for i in sorted(set(F.target.weights)):
        targets = [b for b, w in enumerate(F.target.weights) if w == i]
        rows = []
        for H, point in ((F, p), (G, q)):
            for x, wa in zip(H.source.coordinates, H.source.weights):
                if wa != i:
                    continue
                rows.append([_dx(H.components[b], x).evaluate(point) for b in targets])
        r = rank(rows) if rows else 0
        table.append((i, r, len(targets)))
        if r < len(targets):
            witnesses.append(f"gr_{i}: images span {r} of {len(targets)} dimensions")
    return Verdict(not witnesses, tuple(witnesses), tuple(table))


def _in_vanishing_ideal(f: Polynomial, vanishing: Iterable[str]) -> bool:
    return f.restrict_zero(vanishing).is_zero()


def induced_weighting_degree(generators: Mapping[int, Sequence[PolyVectorField]], vanishing: Sequence[str], f: Polynomial, i: int) -> bool:
    """Is ``f`` in C_(i) for the weighting induced by a Lie filtration?

    ``generators[j]`` lists generators of the level -j piece (j > 0; negative
    keys are read as their absolute value). N is the coordinate subspace
    where the ``vanishing`` variables are zero.
    """
    levels: dict = {}
    for key, gens in generators.items():
        levels.setdefault(abs(int(key)), []).extend(gens)
    vanishing = tuple(vanishing)
    memo: dict = {}

    def member(g: Polynomial, k: int) -> bool:
        if k <= 0 or g.is_zero():
            return True
        key = (g, k)
        if key in memo:
            return memo[key]
        ok = _in_vanishing_ideal(g, vanishing)
        if ok and k > 1:
            for j, gens in sorted(levels.items()):
                if not 0 < j < k:
                    continue
                if not all(member(X(g), k - j) for X in gens):
                    ok = False
                    break
        memo[key] = ok
        return ok

    return member(Polynomial.coerce(f), i)


def check_clean_distribution(generators: Sequence[PolyVectorField], vanishing: Sequence[str], sample_points) -> Verdict:
    """Sampled check that p -> dim(D_p + T_pN) is constant on N.

    N is the coordinate subspace where the ``vanishing`` coordinates are zero.
    Constancy is only tested at the given rational sample points, so a True
    verdict is a necessary-condition check, not a proof of cleanness.
    """
    if not generators:
        raise PreconditionError("at least one generator is needed to fix the chart")
    chart = generators[0].chart
    vanishing = tuple(vanishing)
    for v in vanishing:
        chart.weight(v)
    tangent_n = [
        [1 if b == a else 0 for b in range(chart.dim)]
        for a, x in enumerate(chart.coordinates)
        if x not in vanishing
    ]
    table = []
    for point in sample_points:
        values = _as_point(chart, point)
        if any(values[v] != 0 for v in vanishing):
            raise PreconditionError(f"sample point {tuple(values[x] for x in chart.coordinates)} is not on N")
        rows = [list(X.at(values)) for X in generators] + tangent_n
        table.append((tuple(values[x] for x in chart.coordinates), rank(rows)))
    dims = {d for _, d in table}
    witnesses = ()
    if len(dims) > 1:
        witnesses = tuple(f"dim at {_fmt_point(pt)} is {d}" for pt, d in table)
    return Verdict(len(dims) <= 1, witnesses, tuple(table), ("sampled check",))


def _fmt_point(pt) -> str:
    return "(" + ", ".join(str(v) for v in pt) + ")"

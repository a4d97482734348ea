import random

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from weightlab import randomgen as rg
from weightlab.errors import HomogeneityError, PreconditionError, VariableError
from weightlab.polycore import Polynomial, is_inf
from weightlab.weighting import (
    T_VAR,
    PolynomialMap,
    PolyVectorField,
    WeightedChart,
    check_clean_distribution,
    check_tangent_filtration,
    check_weighted_morphism,
    check_weighted_transverse_at_point,
    filtration_degree,
    graph_cutout,
    graph_submanifold_chart,
    homogeneous_approximation,
    homogeneous_decomposition,
    induced_weighting_degree,
    maps_normal_into_normal,
    rees_interpolation,
    vector_field_degree,
    weighted_path_valuation,
    zoom_weight,
)

from conftest import P, chart_and_polys

LINE = WeightedChart(("u",), (1,))
PLANE13 = WeightedChart(("x", "y"), (1, 3))


def _divides(g, m):
    (gm, _), = g.items()
    (mm, _), = m.items()
    powers = dict(mm)
    return all(powers.get(x, 0) >= e for x, e in gm)


def field(chart, **coeffs):
    return PolyVectorField.from_mapping(chart, {k: P(v) for k, v in coeffs.items()})


class TestDegree:
    def test_filtration_degree(self, plane13):
        assert filtration_degree(plane13, P("x^4 + x*y")) == 4
        assert filtration_degree(plane13, P("1")) == 0
        assert filtration_degree(plane13, P("x^2 + y")) == 2
        assert is_inf(filtration_degree(plane13, Polynomial.zero()))

    def test_degree_four_ideal_generators(self, plane13):
        gens = [P("x^4"), P("x*y"), P("y^2")]
        # y^2 lies in the degree-4 ideal but its own degree is 6
        assert [filtration_degree(plane13, g) for g in gens] == [4, 4, 6]
        for a in range(8):
            for b in range(4):
                mono = P(f"x^{a}*y^{b}")
                divisible = any(_divides(g, mono) for g in gens)
                assert divisible == (filtration_degree(plane13, mono) >= 4)

    def test_foreign_variables_are_rejected(self, plane13):
        with pytest.raises(VariableError):
            filtration_degree(plane13, P("x + z"))

    def test_decomposition(self, plane13):
        assert homogeneous_decomposition(plane13, P("y + x^2")) == {2: P("x^2"), 3: P("y")}
        assert homogeneous_decomposition(plane13, Polynomial.zero()) == {}
        assert homogeneous_decomposition(plane13, P("x*y")) == {4: P("x*y")}

    def test_path_valuation(self, plane13):
        assert weighted_path_valuation(plane13, P("x^2 + y")) == 2
        assert is_inf(weighted_path_valuation(plane13, Polynomial.zero()))
        assert weighted_path_valuation(plane13, P("y")) == 3


class TestApproximations:
    def test_homogeneous_approximation(self, plane13):
        assert homogeneous_approximation(plane13, P("y + x^3"), 3) == P("x_bar^3 + y_bar")
        assert homogeneous_approximation(plane13, P("y + x^2"), 2) == P("x_bar^2")
        assert homogeneous_approximation(plane13, P("5/2"), 0) == P("5/2")

    def test_approximation_below_degree_is_an_error(self, plane13):
        with pytest.raises(PreconditionError, match="x\\^2"):
            homogeneous_approximation(plane13, P("y + x^2"), 3)

    def test_rees(self, plane13):
        assert rees_interpolation(plane13, P("y + x^2"), 2) == P("x_bar^2 + _t*y_bar")
        assert rees_interpolation(plane13, P("x*y"), 4) == P("x_bar*y_bar")
        assert rees_interpolation(plane13, P("x"), 0) == P("_t*x_bar")

    def test_zoom_weight(self, plane13):
        assert zoom_weight(plane13, P("x_bar^2 + _t*y_bar")) == 2
        assert zoom_weight(plane13, P("_t")) == -1
        with pytest.raises(HomogeneityError):
            zoom_weight(plane13, P("x_bar + _t"))


class TestMorphisms:
    def test_parabola_is_rejected(self):
        F = PolynomialMap(LINE, PLANE13, (P("u"), P("u^2")))
        verdict = check_weighted_morphism(F)
        assert not verdict
        assert verdict.witnesses == ("y: degree 2 < 3",)

    def test_cubic_and_identity_pass(self):
        assert check_weighted_morphism(PolynomialMap(LINE, PLANE13, (P("u"), P("u^3"))))
        assert check_weighted_morphism(PolynomialMap.identity(PLANE13))

    def test_tangent_filtration(self):
        assert check_tangent_filtration(PolynomialMap.identity(PLANE13))
        flat = WeightedChart(("x", "y"), (1, 1))
        verdict = check_tangent_filtration(PolynomialMap.identity(flat, PLANE13))
        assert not verdict
        assert any(w.startswith("(b=y, a=y)") for w in verdict.witnesses)
        assert check_tangent_filtration(PolynomialMap(LINE, PLANE13, (P("u"), P("u^3"))))

    def test_graph_chart(self):
        g = graph_submanifold_chart(PolynomialMap(LINE, PLANE13, (P("u"), P("u^3"))))
        assert [(n, d) for n, _, d in g.cut_out] == [("x", 1), ("y", 3)]
        assert g.cut_out[1][1] == P("y - u^3")

    def test_graph_of_identity_renames_targets(self):
        g = graph_submanifold_chart(PolynomialMap.identity(PLANE13))
        assert g.target_names == ("x_tgt", "y_tgt")
        assert [c for _, c, _ in g.cut_out] == [P("x_tgt - x"), P("y_tgt - y")]
        assert [d for *_, d in g.cut_out] == [1, 3]

    def test_graph_of_constant_map(self):
        g = graph_submanifold_chart(PolynomialMap(LINE, PLANE13, (0, 0)))
        assert [c for _, c, _ in g.cut_out] == [P("x"), P("y")]

    def test_graph_needs_weighted_morphism(self):
        with pytest.raises(PreconditionError):
            graph_submanifold_chart(PolynomialMap(LINE, PLANE13, (P("u"), P("u^2"))))


class TestVectorFields:
    def test_degrees(self, plane13):
        assert vector_field_degree(field(plane13, y="x")) == -2
        assert vector_field_degree(field(plane13, x="y")) == 2
        assert vector_field_degree(PolyVectorField.euler(plane13)) == 0
        assert is_inf(vector_field_degree(PolyVectorField.zero(plane13)))

    def test_bracket(self, plane13):
        X, Y = field(plane13, x="1"), field(plane13, y="x")
        assert X.bracket(Y) == field(plane13, y="1")


class TestTransversality:
    def test_identity_pair(self):
        I = PolynomialMap.identity(PLANE13)
        assert check_weighted_transverse_at_point(I, I, (0, 0), (0, 0))

    def test_points_at_origin(self):
        pt = WeightedChart((), ())
        F = PolynomialMap(pt, PLANE13, (0, 0))
        verdict = check_weighted_transverse_at_point(F, F, (), ())
        assert not verdict
        assert "gr_1: images span 0 of 1 dimensions" in verdict.witnesses

    def test_projection_is_transverse_to_anything(self):
        target = WeightedChart(("x",), (1,))
        proj = PolynomialMap(PLANE13, target, (P("x"),))
        G = PolynomialMap(LINE, target, (P("u^2"),))
        assert check_weighted_transverse_at_point(proj, G, (0, 0), (0,))

    def test_images_must_agree(self):
        F = PolynomialMap(LINE, PLANE13, (P("u"), P("u^3")))
        G = PolynomialMap(LINE, PLANE13, (P("u + 1"), 0))
        with pytest.raises(PreconditionError):
            check_weighted_transverse_at_point(F, G, (0,), (0,))


class TestInducedAndClean:
    plane = WeightedChart(("x", "y"), (0, 0))

    def levels(self):
        dx, dy = field(self.plane, x="1"), field(self.plane, y="1")
        return {1: [dx], 3: [dx, dy]}

    def test_induced_degrees(self):
        assert induced_weighting_degree(self.levels(), ("x", "y"), P("y"), 3)
        assert not induced_weighting_degree(self.levels(), ("x", "y"), P("y"), 4)
        assert induced_weighting_degree(self.levels(), ("x", "y"), P("x^5 + 7"), 0)

    def test_induced_matches_chart_degrees(self):
        rng = random.Random(3)
        for _ in range(30):
            f = rg.random_polynomial(rng, ("x", "y"), 4)
            d = filtration_degree(PLANE13, f)
            for i in range(0, 7):
                assert induced_weighting_degree(self.levels(), ("x", "y"), f, i) == (d >= i)

    def test_x_axis_is_clean(self):
        gens = [field(self.plane, x="x"), field(self.plane, y="1")]
        verdict = check_clean_distribution(gens, ("y",), [(0, 0), (1, 0), (2, 0)])
        assert verdict and [row[-1] for row in verdict.table] == [2, 2, 2]
        assert "sampled check" in verdict.notes

    def test_y_axis_dimension_of_span_with_tangent(self):
        # D_p + T_pN on the y-axis: x d/dx vanishes there and d/dy is tangent,
        # so the sum is the line T_pN at every point
        gens = [field(self.plane, x="x"), field(self.plane, y="1")]
        verdict = check_clean_distribution(gens, ("x",), [(0, 0), (0, 1)])
        assert [row[-1] for row in verdict.table] == [1, 1]
        assert verdict.ok

    def test_nonconstant_rank_is_rejected(self):
        gens = [field(self.plane, x="y")]
        verdict = check_clean_distribution(gens, ("x",), [(0, 0), (0, 1)])
        assert not verdict
        assert [row[-1] for row in verdict.table] == [1, 2]

    def test_full_tangent_space(self):
        gens = [field(self.plane, x="1"), field(self.plane, y="1")]
        assert check_clean_distribution(gens, ("y",), [(0, 0), (3, 0)])


# -- properties -----------------------------------------------------------------


@given(chart_and_polys(2))
def test_degree_is_additive(data):
    chart, f, g = data
    assume(f and g)
    assert filtration_degree(chart, f * g) == filtration_degree(chart, f) + filtration_degree(chart, g)


@given(chart_and_polys(1, max_degree=5))
def test_path_valuation_oracle(data):
    chart, f = data
    assert weighted_path_valuation(chart, f) == filtration_degree(chart, f)


@given(chart_and_polys(2, max_vars=3, max_weight=3))
def test_gr_law_and_rees_endpoints(data):
    chart, f, g = data
    assume(f and g)
    i, j = filtration_degree(chart, f), filtration_degree(chart, g)
    assert homogeneous_approximation(chart, f * g, i + j) == homogeneous_approximation(chart, f, i) * homogeneous_approximation(chart, g, j)
    k = i - 1 if i > 0 else i
    rees = rees_interpolation(chart, f, k)
    bar = f.rename(dict(zip(chart.coordinates, chart.barred_names())))
    assert rees.substitute({T_VAR: 1}) == bar
    if k == i:
        assert rees.substitute({T_VAR: 0}) == homogeneous_approximation(chart, f, i)
    else:
        assert rees.substitute({T_VAR: 0}).is_zero()
    assert zoom_weight(chart, rees) == k


@given(st.randoms(use_true_random=False))
def test_weighted_morphisms_compose(rnd):
    A = rg.random_chart(rnd, 2, 3)
    B = rg.random_chart(rnd, 2, 3, names=("s", "t"))
    C = rg.random_chart(rnd, 2, 3, names=("p", "q"))
    F = rg.random_map(rnd, A, B, weighted=True, max_degree=3)
    G = rg.random_map(rnd, B, C, weighted=True, max_degree=3)
    assert check_weighted_morphism(F) and check_weighted_morphism(G)
    assert check_weighted_morphism(G.compose(F))


@given(st.randoms(use_true_random=False))
def test_graph_criterion(rnd):
    source = rg.random_chart(rnd, 2, 3, names=("u", "v"))
    target = rg.random_chart(rnd, 2, 3)
    F = rg.random_map(rnd, source, target, max_degree=3)
    _, _, rows = graph_cutout(F)
    graph_ok = all(d >= w for (_, _, d), w in zip(rows, target.weights))
    if not graph_ok:
        assert not check_weighted_morphism(F)
        return
    # the tangent criterion presupposes F(N) in N'
    assume(maps_normal_into_normal(F))
    assert bool(check_weighted_morphism(F)) == bool(check_tangent_filtration(F))


@given(st.randoms(use_true_random=False))
def test_bracket_degree_additivity(rnd):
    chart = rg.random_chart(rnd, 3, 3)
    X, Y = rg.random_vector_field(rnd, chart), rg.random_vector_field(rnd, chart)
    assert vector_field_degree(X.bracket(Y)) >= vector_field_degree(X) + vector_field_degree(Y)

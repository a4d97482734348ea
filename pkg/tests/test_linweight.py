import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from weightlab import randomgen as rg
from weightlab.errors import PreconditionError
from weightlab.linweight import (
    FormElement,
    SectionElement,
    WeightedBundleChart,
    annihilator_subbundle,
    change_frame,
    check_transition_degrees,
    dual_bundle,
    form_degree,
    graded_bundle,
    hom_bundle,
    leading_transition,
    pairing,
    section_degree,
    section_homogeneous_approximation,
    section_rees_interpolation,
    shift_bundle,
    specialize_t,
    tensor_bundle,
    total_space_degree,
)
from weightlab.polycore import Polynomial, is_inf
from weightlab.weighting import WeightedChart, filtration_degree, homogeneous_approximation

from conftest import P

X1 = WeightedChart(("x",), (1,))


def section(bundle, **coeffs):
    return SectionElement.from_mapping(bundle, {k: P(v) for k, v in coeffs.items()})


def test_section_degree(twisted):
    assert section_degree(section(twisted, s1="1", s2="x")) == -1
    assert is_inf(section_degree(SectionElement.zero(twisted)))
    assert section_degree(section(twisted, s1="x^2")) == 2


def test_frame_law(twisted):
    for s, v in zip(twisted.frame, twisted.vertical):
        assert section_degree(SectionElement.frame_element(twisted, s)) == v


def test_total_space_degree():
    b = WeightedBundleChart(X1, ("s1",), (-2,))
    assert total_space_degree(b, P("p_s1")) == 2
    assert total_space_degree(b, P("x*p_s1")) == 3
    assert total_space_degree(b, P("1")) == 0


def test_dual(twisted):
    assert dual_bundle(twisted).vertical == (0, 2)
    assert dual_bundle(twisted).frame == ("s1_dual", "s2_dual")
    flat = WeightedBundleChart(X1, ("s",), (0,))
    assert dual_bundle(flat).vertical == (0,)
    assert dual_bundle(dual_bundle(twisted)) == twisted


def test_shift(twisted):
    assert shift_bundle(twisted, 2).vertical == (-2, -4)
    assert shift_bundle(twisted, 0) == twisted
    assert dual_bundle(shift_bundle(twisted, 3)) == shift_bundle(dual_bundle(twisted), -3)


def test_tensor_and_hom(twisted):
    a = WeightedBundleChart(X1, ("a",), (1,))
    b = WeightedBundleChart(X1, ("b",), (-2,))
    assert tensor_bundle(a, b).vertical == (-1,)
    trivial = WeightedBundleChart(X1, ("one",), (0,))
    assert tensor_bundle(twisted, trivial).vertical == twisted.vertical
    H = hom_bundle(twisted, twisted)
    identity = SectionElement.from_mapping(H, {"s1_dual_tensor_s1": 1, "s2_dual_tensor_s2": 1})
    assert section_degree(identity) == 0
    assert check_transition_degrees(twisted, [[1, 0], [0, 1]])


def test_transitions(twisted):
    assert check_transition_degrees(twisted, [[1, 1], [0, 1]])
    verdict = check_transition_degrees(twisted, [[1, 0], [1, 1]])
    assert not verdict
    assert verdict.witnesses == ("T[s2,s1] = 1: degree 0 < 2",)
    assert check_transition_degrees(twisted, [[1, 0], [P("x^2"), 1]])


def test_section_approximation(twisted):
    approx = section_homogeneous_approximation(section(twisted, s1="1", s2="x"), -1)
    assert approx.bundle == graded_bundle(twisted)
    assert approx.coefficients == (Polynomial.zero(), P("x_bar"))
    with pytest.raises(PreconditionError, match="s2 has degree 1 < 2"):
        section_homogeneous_approximation(section(twisted, s1="1", s2="x"), 0)
    assert section_homogeneous_approximation(SectionElement.zero(twisted), 5).is_zero()


def test_section_rees_graded_example():
    b = WeightedBundleChart(X1, ("s1", "s2"), (-1, 0))
    rees = section_rees_interpolation(section(b, s1="1", s2="1"), -1)
    assert rees.coefficients == (P("1"), P("_t"))


def test_section_rees_shifts(twisted):
    sigma = section(twisted, s1="x", s2="x^3")
    assert section_degree(sigma) == 1
    assert all(c.degree_in("_t") == 0 for c in section_rees_interpolation(sigma, 1).coefficients if c)
    lower = section_rees_interpolation(sigma, 0)
    exact = section_rees_interpolation(sigma, 1)
    assert lower.coefficients == tuple(c * P("_t") for c in exact.coefficients)
    assert specialize_t(lower, 1).coefficients == (P("x_bar"), P("x_bar^3"))


def test_annihilator(twisted):
    assert annihilator_subbundle(twisted, twisted.frame).rank == 0
    assert annihilator_subbundle(twisted, ()) == dual_bundle(twisted)
    ann = annihilator_subbundle(twisted, ("s1",))
    assert ann.rank == 1 and ann.vertical == (2,)


def test_forms(twisted):
    # forms on V are built from the dual frame; tau_a has weight -v_a
    a = FormElement.generator(twisted, "s1")
    b = FormElement.generator(twisted, "s2")
    assert a.wedge(b) == -b.wedge(a)
    assert a.wedge(a) == FormElement.zero(twisted, 2)
    assert form_degree(a.wedge(b)) == 2
    assert form_degree(b.scale(P("x"))) == 3
    assert str(a.wedge(b)) == "(1)*s1_dual^s2_dual"


# -- properties -------------------------------------------------------------------


@st.composite
def bundles(draw, max_rank=3):
    base = draw(st.sampled_from([X1, WeightedChart(("x", "y"), (1, 2)), WeightedChart(("x", "y"), (0, 3))]))
    rank = draw(st.integers(1, max_rank))
    vertical = tuple(draw(st.integers(-3, 3)) for _ in range(rank))
    return WeightedBundleChart(base, tuple(f"s{k + 1}" for k in range(rank)), vertical)


@given(bundles(), st.randoms(use_true_random=False))
def test_pairing_law(bundle, rnd):
    sigma = rg.random_section(rnd, bundle)
    tau = rg.random_section(rnd, dual_bundle(bundle))
    assert filtration_degree(bundle.base, pairing(tau, sigma)) >= section_degree(tau) + section_degree(sigma)


@given(bundles(), st.randoms(use_true_random=False), st.integers(-2, 2))
def test_shift_neutrality_and_module_law(bundle, rnd, k):
    sigma = rg.random_section(rnd, bundle)
    d = section_degree(sigma)
    assume(not is_inf(d))
    shifted = SectionElement(shift_bundle(bundle, k), sigma.coefficients)
    assert section_degree(shifted) == d - k
    assert section_homogeneous_approximation(shifted, d - k).coefficients == section_homogeneous_approximation(sigma, d).coefficients
    g = rg.random_polynomial(rnd, bundle.base.coordinates, 2, zero_chance=0)
    e = filtration_degree(bundle.base, g)
    lhs = section_homogeneous_approximation(sigma.scale(g), d + e)
    rhs = section_homogeneous_approximation(sigma, d).scale(homogeneous_approximation(bundle.base, g, e))
    assert lhs.coefficients == rhs.coefficients


@given(bundles(), st.randoms(use_true_random=False))
def test_transition_compatibility(bundle, rnd):
    n, v = bundle.rank, bundle.vertical
    T = [[Polynomial.constant(int(a == b)) for b in range(n)] for a in range(n)]
    for a in range(n):
        for b in range(n):
            if a != b and rnd.random() < 0.6:
                T[a][b] = rg.random_polynomial_of_degree(rnd, bundle.base, v[b] - v[a], 3)
    assume(check_transition_degrees(bundle, T))
    g = rg.random_section(rnd, bundle)
    d = section_degree(g)
    assume(not is_inf(d))
    old = change_frame(g, T)
    assert section_degree(old) >= d
    lhs = section_homogeneous_approximation(old, d)
    rhs = change_frame(section_homogeneous_approximation(g, d), leading_transition(bundle, T))
    assert lhs.coefficients == rhs.coefficients

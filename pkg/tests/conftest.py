from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from weightlab.linweight import WeightedBundleChart
from weightlab.polycore import Polynomial
from weightlab.weighting import WeightedChart

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def P(text, variables=()):
    return Polynomial.parse(text, variables)


@pytest.fixture
def plane13():
    return WeightedChart(("x", "y"), (1, 3))


@pytest.fixture
def twisted():
    """Rank 2 over a weight-1 line, vertical weights (0, -2)."""
    return WeightedBundleChart(WeightedChart(("x",), (1,)), ("s1", "s2"), (0, -2))


coefficients = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def polynomials(draw, names=("x", "y", "z", "u"), max_degree=4, max_terms=5):
    names = tuple(names)
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        powers = {}
        for _ in range(draw(st.integers(0, max_degree))):
            x = draw(st.sampled_from(names))
            powers[x] = powers.get(x, 0) + 1
        mono = tuple(sorted(powers.items()))
        terms[mono] = terms.get(mono, Fraction(0)) + draw(coefficients)
    return Polynomial(terms, names)


@st.composite
def charts(draw, max_vars=4, max_weight=4, names=("x", "y", "z", "u")):
    n = draw(st.integers(1, max_vars))
    weights = tuple(draw(st.integers(0, max_weight)) for _ in range(n))
    return WeightedChart(names[:n], weights)


@st.composite
def chart_and_polys(draw, count=1, max_vars=4, max_weight=4, max_degree=4):
    chart = draw(charts(max_vars, max_weight))
    return (chart,) + tuple(draw(polynomials(chart.coordinates, max_degree)) for _ in range(count))

"""Higher tangent lifts and the graded subbundle Q of T_r M.

A point of T_r M over a chart is described by jet variables ``x__j``
(0 <= j <= r), the coefficients of ``x(eps) = sum_j x__j eps^j`` in the
truncated algebra R[eps]/(eps^{r+1}). The lift ``f^(i)`` of a function is the
eps^i coefficient of ``f(x(eps))``.

Sections are lifted with the convention ``sigma^(-k)`` for k >= 0, matching
the vector field lifts ``X^(-k)``: a section of degree i is tested through
its lift with k = -i, so only i <= 0 is meaningful there.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

from .errors import PreconditionError
from .linweight import SectionElement, WeightedBundleChart
from .liealg import AlgebroidData, check_jacobi
from .polycore import Polynomial, Truncated, evaluate_truncated
from .verdict import Verdict
from .weighting import PolyVectorField, PolynomialMap, WeightedChart

JET_SEPARATOR = "__"


def jet_name(name: str, j: int) -> str:
    return f"{name}{JET_SEPARATOR}{j}"


def jet_chart(chart: WeightedChart, r: int) -> WeightedChart:
    """Jet coordinates of T_r, ordered by coordinate and then by order."""
    names = tuple(jet_name(x, j) for x in chart.coordinates for j in range(r + 1))
    return WeightedChart(names, (0,) * len(names), 0)


def _check_order(i: int, r: int, what="lift index"):
    if r < 0:
        raise PreconditionError("order r must be non-negative")
    if not 0 <= i <= r:
        raise PreconditionError(f"{what} {i} is outside 0..{r}")


def _expansion(names, r: int, skip: Mapping | None = None) -> dict:
    skip = skip or {}
    return {
        x: Truncated([Polynomial.var(jet_name(x, j)) if j >= skip.get(x, 0) else 0 for j in range(r + 1)], r)
        for x in names
    }


@lru_cache(maxsize=4096)
def all_lifts(f: Polynomial, r: int) -> tuple:
    """(f^(0), ..., f^(r))."""
    names = sorted(f.used_variables())
    value = evaluate_truncated(f, _expansion(names, r), r)
    table = [jet_name(x, j) for x in names for j in range(r + 1)]
    return tuple(c.with_variables(table) for c in value.coeffs)


def lift_function(f, i: int, r: int) -> Polynomial:
    _check_order(i, r)
    return all_lifts(Polynomial.coerce(f), r)[i]


def lift_map(F: PolynomialMap, r: int) -> PolynomialMap:
    comps = []
    for comp in F.components:
        lifts = all_lifts(comp, r)
        comps.extend(lifts)
    return PolynomialMap(jet_chart(F.source, r), jet_chart(F.target, r), tuple(comps))


def lift_vector_field(X: PolyVectorField, i: int, r: int) -> PolyVectorField:
    """X^(-i): the coefficient of d/dx__j is (X-coefficient of d/dx)^(j-i)."""
    _check_order(i, r)
    chart = jet_chart(X.chart, r)
    coeffs = []
    for f in X.coefficients:
        lifts = all_lifts(f, r)
        coeffs.extend(lifts[j - i] if j >= i else Polynomial.zero() for j in range(r + 1))
    return PolyVectorField(chart, tuple(coeffs))


@dataclass(frozen=True)
class QModel:
    chart: WeightedChart
    r: int
    cut_out: tuple
    free: tuple

    def restrict(self, g: Polynomial) -> Polynomial:
        """Restriction to Q: set every cut-out jet variable to zero."""
        return g.restrict_zero(self.cut_out)

    def equations(self) -> list:
        return [f"{name} = 0" for name in self.cut_out]


def q_model(chart: WeightedChart, r: int) -> QModel:
    top = max(chart.weights, default=0)
    if r < top:
        raise PreconditionError(f"order {r} is below the largest weight {top}")
    cut, free = [], []
    for x, w in zip(chart.coordinates, chart.weights):
        for j in range(r + 1):
            (cut if j < w else free).append(jet_name(x, j))
    return QModel(chart, r, tuple(cut), tuple(free))


def restricted_lifts(q: QModel, f: Polynomial) -> tuple:
    """(f^(j)|_Q)_j, computed by expanding with the cut-out jets already zero.

    Restriction to Q is a ring homomorphism, so expanding first and
    restricting afterwards gives the same result.
    """
    f = q.chart.check(Polynomial.coerce(f))
    names = sorted(f.used_variables())
    weights = q.chart.weight_map()
    value = evaluate_truncated(f, _expansion(names, q.r, {x: weights[x] for x in names}), q.r)
    return value.coeffs


def degree_via_q(q: QModel, f) -> int:
    """Largest i <= r + 1 with f^(j)|_Q = 0 for all j < i."""
    for j, c in enumerate(restricted_lifts(q, f)):
        if c:
            return j
    return q.r + 1


def tangency_check(q: QModel, X: PolyVectorField, i: int) -> Verdict:
    """Is X^(-i) tangent to Q?"""
    _check_order(i, q.r)
    if X.chart != q.chart:
        raise PreconditionError("vector field and Q model use different charts")
    lifted = lift_vector_field(X, i, q.r)
    coords = lifted.chart.coordinates
    witnesses = []
    for name in q.cut_out:
        value = q.restrict(lifted.coefficients[coords.index(name)])
        if value:
            witnesses.append(f"X^(-{i}) {name} = {value} on Q")
    return Verdict(not witnesses, tuple(witnesses))


# -- sections ------------------------------------------------------------------


def lift_section(sigma: SectionElement, k: int, r: int) -> dict:
    """sigma^(-k) = sum_a sum_{l >= k} f_a^(l-k) sigma_a^(-l), keyed by (a, l)."""
    _check_order(k, r)
    out = {}
    for a, f in enumerate(sigma.coefficients):
        lifts = all_lifts(f, r)
        for l in range(k, r + 1):
            if lifts[l - k]:
                out[(a, l)] = lifts[l - k]
    return out


def section_lift_membership(bundle: WeightedBundleChart, sigma: SectionElement, i: int, r: int) -> Verdict:
    """Does sigma^(-k), k = -i, restrict over Q_M to a section of Q_V?

    Q_V is spanned by the sigma_b^(-l) with l >= -v_b.
    """
    if sigma.bundle != bundle:
        raise PreconditionError("section belongs to a different bundle")
    if i > 0:
        raise PreconditionError("section lifts sigma^(-k) exist for k = -i >= 0 only")
    k = -i
    q = q_model(bundle.base, r)
    witnesses = []
    for (a, l), coeff in sorted(lift_section(sigma, k, r).items()):
        if l < -bundle.vertical[a]:
            value = q.restrict(coeff)
            if value:
                witnesses.append(f"coefficient of {bundle.frame[a]}^(-{l}) is {value} on Q")
    return Verdict(not witnesses, tuple(witnesses))


# -- lifted algebroid ------------------------------------------------------------


def lifted_frame_name(name: str, k: int) -> str:
    return f"{name}{JET_SEPARATOR}lift{k}"


def lifted_algebroid(A: AlgebroidData, r: int) -> AlgebroidData:
    """T_r A over T_r M with frame sigma_a^(-k), 0 <= k <= r.

    [sigma_a^(-k), sigma_b^(-l)] = sum_c sum_{m >= k+l} (Gamma^c_ab)^(m-k-l) sigma_c^(-m)
    and the anchor of sigma_a^(-k) is the lift a(sigma_a)^(-k).
    """
    n = A.rank
    names = tuple(lifted_frame_name(s, k) for s in A.bundle.frame for k in range(r + 1))
    chart = jet_chart(A.base, r)
    bundle = WeightedBundleChart(chart, names, (0,) * len(names))

    def idx(a, k):
        return a * (r + 1) + k

    anchor = [None] * len(names)
    for a in range(n):
        for k in range(r + 1):
            anchor[idx(a, k)] = lift_vector_field(A.anchor_field(a), k, r).coefficients
    structure = {}
    for (a, b), coeffs in A.structure.items():
        lifts = [all_lifts(g, r) for g in coeffs]
        for k in range(r + 1):
            for l in range(r + 1 - k):
                out = [Polynomial.zero()] * len(names)
                for c in range(n):
                    for m in range(k + l, r + 1):
                        out[idx(c, m)] = lifts[c][m - k - l]
                structure[(idx(a, k), idx(b, l))] = tuple(out)
    return AlgebroidData(bundle, tuple(anchor), structure)


def lifted_algebroid_check(A: AlgebroidData, r: int) -> Verdict:
    """Is Q_A a subalgebroid of T_r A over Q_M?"""
    verdict = check_jacobi(A)
    if not verdict:
        raise PreconditionError("not a Lie algebroid: " + verdict.witnesses[0])
    v = A.bundle.vertical
    if any(w > 0 for w in v):
        raise PreconditionError("lifted algebroid check needs non-positive vertical weights")
    need = max([max(A.base.weights, default=0)] + [-w for w in v])
    if r < need:
        raise PreconditionError(f"order {r} is too small; need r >= {need}")
    q = q_model(A.base, r)
    n = A.rank
    frame = A.bundle.frame
    witnesses = []
    for (a, b), coeffs in A.structure.items():
        lifts = [all_lifts(g, r) for g in coeffs]
        for k in range(-v[a], r + 1):
            for l in range(-v[b], r + 1 - k):
                for c in range(n):
                    for m in range(k + l, min(-v[c], r + 1)):
                        value = q.restrict(lifts[c][m - k - l])
                        if value:
                            witnesses.append(
                                f"[{frame[a]}^(-{k}),{frame[b]}^(-{l})] has {frame[c]}^(-{m}) coefficient {value} on Q"
                            )
    for a in range(n):
        for k in range(-v[a], r + 1):
            tangent = tangency_check(q, A.anchor_field(a), k)
            if not tangent:
                witnesses.append(f"anchor of {frame[a]}^(-{k}) is not tangent to Q: {tangent.witnesses[0]}")
    return Verdict(not witnesses, tuple(witnesses))


def maps_q_into_q(F: PolynomialMap, r: int) -> Verdict:
    """Do the target cut-out components of T_rF vanish on the source Q?"""
    qs, qt = q_model(F.source, r), q_model(F.target, r)
    lifted = lift_map(F, r)
    witnesses = []
    for name in qt.cut_out:
        comp = lifted.components[lifted.target.coordinates.index(name)]
        value = qs.restrict(comp)
        if value:
            witnesses.append(f"{name} pulls back to {value} on Q")
    return Verdict(not witnesses, tuple(witnesses))

"""Linear weightings of trivialized vector bundles over a weighted chart.

A bundle is a base :class:`~weightlab.weighting.WeightedChart` together with
a global frame ``sigma_1..sigma_k`` carrying integer vertical weights. A
section ``sum f_a sigma_a`` has degree ``min(deg f_a + v_a)``. On the total
space the fibre coordinate dual to ``sigma_b`` is called ``p_<sigma_b>`` and
has weight ``-v_b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping

from .errors import PreconditionError, VariableError
from .polycore import INF, Polynomial
from .verdict import Verdict
from .weighting import (
    T_VAR,
    WeightedChart,
    filtration_degree,
    homogeneous_approximation,
    rees_interpolation,
)

DUAL_SUFFIX = "_dual"
GRADED_SUFFIX = "_gr"
DEFORMATION_SUFFIX = "_def"


def fibre_name(frame_name: str) -> str:
    return "p_" + frame_name


def dual_name(frame_name: str) -> str:
    if frame_name.endswith(DUAL_SUFFIX):
        return frame_name[: -len(DUAL_SUFFIX)]
    return frame_name + DUAL_SUFFIX


@dataclass(frozen=True)
class WeightedBundleChart:
    base: WeightedChart
    frame: tuple
    vertical: tuple

    def __post_init__(self):
        frame = tuple(self.frame)
        vertical = tuple(int(v) for v in self.vertical)
        object.__setattr__(self, "frame", frame)
        object.__setattr__(self, "vertical", vertical)
        if len(frame) != len(vertical):
            raise ValueError("one vertical weight per frame element is required")
        if len(set(frame)) != len(frame):
            raise ValueError(f"duplicate frame names in {frame}")
        clash = set(frame) & set(self.base.coordinates)
        if clash:
            raise ValueError(f"frame names clash with base coordinates: {', '.join(sorted(clash))}")

    @property
    def rank(self) -> int:
        return len(self.frame)

    def index(self, name) -> int:
        if isinstance(name, int):
            if not 0 <= name < self.rank:
                raise IndexError(f"frame index {name} out of range")
            return name
        try:
            return self.frame.index(name)
        except ValueError:
            raise VariableError(f"{name!r} is not a frame element") from None

    def fibre_coordinates(self) -> tuple:
        return tuple(fibre_name(s) for s in self.frame)

    def total_chart_weights(self) -> dict:
        weights = dict(zip(self.base.coordinates, self.base.weights))
        weights.update({fibre_name(s): -v for s, v in zip(self.frame, self.vertical)})
        return weights


@dataclass(frozen=True)
class SectionElement:
    bundle: WeightedBundleChart
    coefficients: tuple

    def __post_init__(self):
        coeffs = tuple(self.bundle.base.check(Polynomial.coerce(c)) for c in self.coefficients)
        if len(coeffs) != self.bundle.rank:
            raise ValueError(f"expected {self.bundle.rank} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_mapping(cls, bundle: WeightedBundleChart, mapping: Mapping) -> "SectionElement":
        coeffs = [Polynomial.zero()] * bundle.rank
        for name, value in mapping.items():
            coeffs[bundle.index(name)] = Polynomial.coerce(value)
        return cls(bundle, tuple(coeffs))

    @classmethod
    def frame_element(cls, bundle: WeightedBundleChart, name) -> "SectionElement":
        return cls.from_mapping(bundle, {bundle.index(name): 1})

    @classmethod
    def zero(cls, bundle: WeightedBundleChart) -> "SectionElement":
        return cls(bundle, (0,) * bundle.rank)

    def __add__(self, other: "SectionElement") -> "SectionElement":
        return SectionElement(self.bundle, tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other: "SectionElement") -> "SectionElement":
        return SectionElement(self.bundle, tuple(a - b for a, b in zip(self.coefficients, other.coefficients)))

    def scale(self, g) -> "SectionElement":
        g = Polynomial.coerce(g)
        return SectionElement(self.bundle, tuple(g * c for c in self.coefficients))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coefficients)

    def __str__(self):
        parts = [f"({c})*{s}" for s, c in zip(self.bundle.frame, self.coefficients) if c]
        return " + ".join(parts) if parts else "0"


def section_degree(sigma: SectionElement):
    degree = INF
    for c, v in zip(sigma.coefficients, sigma.bundle.vertical):
        if c:
            degree = min(degree, filtration_degree(sigma.bundle.base, c) + v)
    return degree


def total_space_degree(bundle: WeightedBundleChart, f: Polynomial):
    """min over monomials x^s p^t of s.w - t.v."""
    f = Polynomial.coerce(f)
    weights = bundle.total_chart_weights()
    foreign = sorted(f.used_variables() - weights.keys())
    if foreign:
        raise VariableError(f"variable(s) {', '.join(foreign)} are neither base nor fibre coordinates")
    if f.is_zero():
        return INF
    return min(sum(weights[n] * e for n, e in mono) for mono in f.monomials())


def pairing(tau: SectionElement, sigma: SectionElement) -> Polynomial:
    """<tau, sigma> for tau a section of the dual of sigma's bundle."""
    if tau.bundle != dual_bundle(sigma.bundle):
        raise PreconditionError("first argument must be a section of the dual bundle")
    total = Polynomial.zero(sigma.bundle.base.coordinates)
    for a, b in zip(tau.coefficients, sigma.coefficients):
        total = total + a * b
    return total


# -- constructions ---------------------------------------------------------


def dual_bundle(bundle: WeightedBundleChart) -> WeightedBundleChart:
    return WeightedBundleChart(
        bundle.base,
        tuple(dual_name(s) for s in bundle.frame),
        tuple(-v for v in bundle.vertical),
    )


def shift_bundle(bundle: WeightedBundleChart, k: int) -> WeightedBundleChart:
    """V[k], whose degree-i sections are the degree-(i+k) sections of V."""
    return WeightedBundleChart(bundle.base, bundle.frame, tuple(v - k for v in bundle.vertical))


def _same_base(b1: WeightedBundleChart, b2: WeightedBundleChart):
    if b1.base != b2.base:
        raise PreconditionError("bundles live over different base charts")


def tensor_bundle(b1: WeightedBundleChart, b2: WeightedBundleChart) -> WeightedBundleChart:
    _same_base(b1, b2)
    frame, vertical = [], []
    for s, v in zip(b1.frame, b1.vertical):
        for t, w in zip(b2.frame, b2.vertical):
            frame.append(f"{s}_tensor_{t}")
            vertical.append(v + w)
    return WeightedBundleChart(b1.base, tuple(frame), tuple(vertical))


def hom_bundle(b1: WeightedBundleChart, b2: WeightedBundleChart) -> WeightedBundleChart:
    return tensor_bundle(dual_bundle(b1), b2)


def annihilator_subbundle(bundle: WeightedBundleChart, subset: Iterable) -> WeightedBundleChart:
    """Annihilator in V* of the subbundle spanned by the given frame elements."""
    chosen = {bundle.index(s) for s in subset}
    dual = dual_bundle(bundle)
    keep = [a for a in range(bundle.rank) if a not in chosen]
    return WeightedBundleChart(
        bundle.base,
        tuple(dual.frame[a] for a in keep),
        tuple(dual.vertical[a] for a in keep),
    )


def _matrix(bundle: WeightedBundleChart, T) -> list:
    rows = [[Polynomial.coerce(x) for x in row] for row in T]
    if len(rows) != bundle.rank or any(len(r) != bundle.rank for r in rows):
        raise PreconditionError(f"transition matrix must be {bundle.rank}x{bundle.rank}")
    return rows


def check_transition_degrees(bundle: WeightedBundleChart, T) -> Verdict:
    """Is sigma'_b = sum_a T[a][b] sigma_a again a weighted frame with the same weights?"""
    rows = _matrix(bundle, T)
    witnesses, table = [], []
    v = bundle.vertical
    for a in range(bundle.rank):
        for b in range(bundle.rank):
            need = v[b] - v[a]
            d = filtration_degree(bundle.base, rows[a][b])
            table.append((bundle.frame[a], bundle.frame[b], d, need))
            if d < need:
                witnesses.append(f"T[{bundle.frame[a]},{bundle.frame[b]}] = {rows[a][b]}: degree {d} < {need}")
    return Verdict(not witnesses, tuple(witnesses), tuple(table))


def change_frame(sigma: SectionElement, T) -> SectionElement:
    """Rewrite sum g_b sigma'_b (coefficients of ``sigma``) in the old frame."""
    rows = _matrix(sigma.bundle, T)
    rank = sigma.bundle.rank
    coeffs = []
    for a in range(rank):
        total = Polynomial.zero()
        for b in range(rank):
            total = total + rows[a][b] * sigma.coefficients[b]
        coeffs.append(total)
    return SectionElement(sigma.bundle, tuple(coeffs))


def graded_bundle(bundle: WeightedBundleChart) -> WeightedBundleChart:
    return WeightedBundleChart(
        bundle.base.barred_chart(),
        tuple(s + GRADED_SUFFIX for s in bundle.frame),
        bundle.vertical,
    )


def deformation_base(chart: WeightedChart) -> WeightedChart:
    bar = chart.barred_chart()
    return WeightedChart(bar.coordinates + (T_VAR,), bar.weights + (0,), chart.order)


def deformation_bundle(bundle: WeightedBundleChart) -> WeightedBundleChart:
    return WeightedBundleChart(
        deformation_base(bundle.base),
        tuple(s + DEFORMATION_SUFFIX for s in bundle.frame),
        bundle.vertical,
    )


def leading_transition(bundle: WeightedBundleChart, T) -> list:
    """The matrix of leading parts T[a][b]^[v_b - v_a]."""
    verdict = check_transition_degrees(bundle, T)
    if not verdict:
        raise PreconditionError("transition matrix violates degree bounds: " + "; ".join(verdict.witnesses))
    rows = _matrix(bundle, T)
    v = bundle.vertical
    return [
        [homogeneous_approximation(bundle.base, rows[a][b], v[b] - v[a]) for b in range(bundle.rank)]
        for a in range(bundle.rank)
    ]


def _require_section_degree(sigma: SectionElement, i: int):
    for s, c, v in zip(sigma.bundle.frame, sigma.coefficients, sigma.bundle.vertical):
        if c and filtration_degree(sigma.bundle.base, c) < i - v:
            d = filtration_degree(sigma.bundle.base, c)
            raise PreconditionError(
                f"section has degree below {i}: coefficient of {s} has degree {d} < {i - v}"
            )


def section_homogeneous_approximation(sigma: SectionElement, i: int) -> SectionElement:
    _require_section_degree(sigma, i)
    base = sigma.bundle.base
    coeffs = tuple(
        homogeneous_approximation(base, c, i - v) for c, v in zip(sigma.coefficients, sigma.bundle.vertical)
    )
    return SectionElement(graded_bundle(sigma.bundle), coeffs)


def section_rees_interpolation(sigma: SectionElement, i: int) -> SectionElement:
    _require_section_degree(sigma, i)
    base = sigma.bundle.base
    coeffs = tuple(rees_interpolation(base, c, i - v) for c, v in zip(sigma.coefficients, sigma.bundle.vertical))
    return SectionElement(deformation_bundle(sigma.bundle), coeffs)


def specialize_t(sigma: SectionElement, value) -> SectionElement:
    """Set t to a constant in a deformation section, landing on the barred base."""
    bundle = sigma.bundle
    base = WeightedChart(bundle.base.coordinates[:-1], bundle.base.weights[:-1], bundle.base.order)
    frame = tuple(s[: -len(DEFORMATION_SUFFIX)] for s in bundle.frame)
    target = WeightedBundleChart(base, frame, bundle.vertical)
    return SectionElement(target, tuple(c.substitute({T_VAR: value}) for c in sigma.coefficients))


# -- forms -----------------------------------------------------------------


def _wedge_indices(I: tuple, J: tuple):
    """Sign and sorted union of tau_I ^ tau_J, or (0, None) when they overlap."""
    if set(I) & set(J):
        return 0, None
    seq = list(I) + list(J)
    inversions = sum(1 for x in range(len(seq)) for y in range(x + 1, len(seq)) if seq[x] > seq[y])
    return (-1) ** inversions, tuple(sorted(seq))


@dataclass(frozen=True)
class FormElement:
    """sum f_I tau_I over increasing index tuples I, tau the dual frame."""

    bundle: WeightedBundleChart
    degree: int
    coefficients: Mapping  # tuple of frame indices -> Polynomial

    def __post_init__(self):
        clean = {}
        for I, c in dict(self.coefficients).items():
            I = tuple(I)
            if len(I) != self.degree or list(I) != sorted(set(I)):
                raise ValueError(f"index {I} is not an increasing {self.degree}-tuple")
            if any(not 0 <= a < self.bundle.rank for a in I):
                raise IndexError(f"index {I} out of range")
            c = Polynomial.coerce(c)
            if c:
                clean[I] = c
        object.__setattr__(self, "coefficients", dict(sorted(clean.items())))

    @classmethod
    def function(cls, bundle: WeightedBundleChart, f) -> "FormElement":
        return cls(bundle, 0, {(): Polynomial.coerce(f)})

    @classmethod
    def generator(cls, bundle: WeightedBundleChart, name) -> "FormElement":
        return cls(bundle, 1, {(bundle.index(name),): 1})

    @classmethod
    def zero(cls, bundle: WeightedBundleChart, degree: int) -> "FormElement":
        return cls(bundle, degree, {})

    def is_zero(self) -> bool:
        return not self.coefficients

    def __add__(self, other: "FormElement") -> "FormElement":
        if other.degree != self.degree:
            raise ValueError("cannot add forms of different degree")
        out = dict(self.coefficients)
        for I, c in other.coefficients.items():
            out[I] = out.get(I, Polynomial.zero()) + c
        return FormElement(self.bundle, self.degree, out)

    def __neg__(self):
        return FormElement(self.bundle, self.degree, {I: -c for I, c in self.coefficients.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, g) -> "FormElement":
        g = Polynomial.coerce(g)
        return FormElement(self.bundle, self.degree, {I: g * c for I, c in self.coefficients.items()})

    def wedge(self, other: "FormElement") -> "FormElement":
        out: dict = {}
        for I, f in self.coefficients.items():
            for J, g in other.coefficients.items():
                sign, K = _wedge_indices(I, J)
                if sign:
                    out[K] = out.get(K, Polynomial.zero()) + f * g * sign
        return FormElement(self.bundle, self.degree + other.degree, out)

    def __eq__(self, other):
        return (
            isinstance(other, FormElement)
            and self.degree == other.degree
            and self.coefficients == other.coefficients
        )

    def __hash__(self):
        return hash((self.degree, tuple(self.coefficients.items())))

    def __str__(self):
        if not self.coefficients:
            return "0"
        dual = dual_bundle(self.bundle).frame
        parts = []
        for I, c in self.coefficients.items():
            basis = "^".join(dual[a] for a in I)
            parts.append(f"({c})*{basis}" if basis else f"({c})")
        return " + ".join(parts)


def form_degree(omega: FormElement):
    """min over I of deg f_I - sum_{a in I} v_a (tau_a has weight -v_a)."""
    degree = INF
    v = omega.bundle.vertical
    for I, c in omega.coefficients.items():
        degree = min(degree, filtration_degree(omega.bundle.base, c) - sum(v[a] for a in I))
    return degree


def all_index_sets(rank: int, q: int):
    return list(combinations(range(rank), q))

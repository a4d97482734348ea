"""Lie algebras and Lie algebroids in weighted frames.

An :class:`AlgebroidData` is a weighted bundle chart with an anchor matrix
``anchor[a][j]`` (so ``a(sigma_a) = sum_j anchor[a][j] d/dx_j``) and structure
functions ``[sigma_a, sigma_b] = sum_c gamma[a, b][c] sigma_c`` stored for
``a < b`` only. A Lie algebra is the case of a zero-dimensional base.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Iterable, Mapping, Sequence

from .errors import PreconditionError, VariableError
from .linalg import rank, row_reduce
from .linweight import (
    FormElement,
    SectionElement,
    WeightedBundleChart,
    deformation_bundle,
    dual_bundle,
    fibre_name,
    form_degree,
    graded_bundle,
    total_space_degree,
)
from .polycore import Polynomial
from .verdict import Verdict
from .weighting import (
    T_VAR,
    PolyVectorField,
    filtration_degree,
    homogeneous_approximation,
    rees_interpolation,
    vector_field_degree,
    _as_point,
)


@dataclass(frozen=True)
class AlgebroidData:
    bundle: WeightedBundleChart
    anchor: tuple
    structure: Mapping = field(default_factory=dict)

    def __post_init__(self):
        bundle = self.bundle
        base = bundle.base
        rows = tuple(tuple(base.check(Polynomial.coerce(x)) for x in row) for row in self.anchor)
        if len(rows) != bundle.rank or any(len(r) != base.dim for r in rows):
            raise ValueError(f"anchor must be a {bundle.rank}x{base.dim} matrix")
        object.__setattr__(self, "anchor", rows)
        gamma = {}
        for (a, b), coeffs in dict(self.structure).items():
            coeffs = tuple(base.check(Polynomial.coerce(c)) for c in coeffs)
            if len(coeffs) != bundle.rank:
                raise ValueError(f"bracket [{a},{b}] needs {bundle.rank} coefficients")
            if a == b:
                if any(coeffs):
                    raise ValueError(f"[{bundle.frame[a]},{bundle.frame[a]}] must vanish")
                continue
            if a > b:
                a, b, coeffs = b, a, tuple(-c for c in coeffs)
            if (a, b) in gamma and gamma[(a, b)] != coeffs:
                raise ValueError(f"inconsistent entries for [{bundle.frame[a]},{bundle.frame[b]}]")
            if any(coeffs):
                gamma[(a, b)] = coeffs
        object.__setattr__(self, "structure", dict(sorted(gamma.items())))

    @classmethod
    def build(
        cls,
        bundle: WeightedBundleChart,
        anchor: Mapping | None = None,
        brackets: Mapping | None = None,
    ) -> "AlgebroidData":
        """Build from sparse name-keyed data.

        ``anchor`` maps frame names to ``{coordinate: polynomial}`` and
        ``brackets`` maps ``(s, t)`` pairs to ``{frame name: polynomial}``.
        """
        base = bundle.base
        rows = [[Polynomial.zero()] * base.dim for _ in range(bundle.rank)]
        for s, comps in (anchor or {}).items():
            a = bundle.index(s)
            for x, value in comps.items():
                if x not in base.coordinates:
                    raise VariableError(f"anchor of {s} mentions unknown coordinate {x!r}")
                rows[a][base.coordinates.index(x)] = Polynomial.coerce(value)
        structure = {}
        for (s, t), comps in (brackets or {}).items():
            a, b = bundle.index(s), bundle.index(t)
            coeffs = [Polynomial.zero()] * bundle.rank
            for c, value in comps.items():
                coeffs[bundle.index(c)] = Polynomial.coerce(value)
            if a > b:
                a, b, coeffs = b, a, [-c for c in coeffs]
            if (a, b) in structure and structure[(a, b)] != tuple(coeffs):
                raise ValueError(f"inconsistent entries for [{s},{t}]")
            structure[(a, b)] = tuple(coeffs)
        return cls(bundle, tuple(tuple(r) for r in rows), structure)

    @property
    def rank(self) -> int:
        return self.bundle.rank

    @property
    def base(self):
        return self.bundle.base

    def gamma(self, a: int, b: int) -> tuple:
        if a == b:
            return (Polynomial.zero(),) * self.rank
        if a < b:
            return self.structure.get((a, b), (Polynomial.zero(),) * self.rank)
        return tuple(-c for c in self.gamma(b, a))

    def anchor_field(self, a: int) -> PolyVectorField:
        return PolyVectorField(self.base, self.anchor[a])

    def anchor_of(self, sigma: SectionElement) -> PolyVectorField:
        field_ = PolyVectorField.zero(self.base)
        for a, f in enumerate(sigma.coefficients):
            if f:
                field_ = field_ + self.anchor_field(a).scale(f)
        return field_

    def frame_section(self, a) -> SectionElement:
        return SectionElement.frame_element(self.bundle, a)

    def bracket(self, s: SectionElement, t: SectionElement) -> SectionElement:
        """Bracket of arbitrary sections via structure functions and the anchor."""
        out = [Polynomial.zero() for _ in range(self.rank)]
        for a, f in enumerate(s.coefficients):
            if not f:
                continue
            for b, g in enumerate(t.coefficients):
                if not g or a == b:
                    continue
                fg = f * g
                for c, gam in enumerate(self.gamma(a, b)):
                    if gam:
                        out[c] = out[c] + fg * gam
        Xs, Xt = self.anchor_of(s), self.anchor_of(t)
        for b, g in enumerate(t.coefficients):
            out[b] = out[b] + Xs(g)
        for a, f in enumerate(s.coefficients):
            out[a] = out[a] - Xt(f)
        return SectionElement(self.bundle, tuple(out))

    def is_lie_algebra(self) -> bool:
        return self.base.dim == 0

    def has_constant_structure(self) -> bool:
        return all(c.is_constant() for cs in self.structure.values() for c in cs) and all(
            x.is_zero() for row in self.anchor for x in row
        )


def _bracket_text(A: AlgebroidData, a: int, b: int) -> str:
    return f"[{A.bundle.frame[a]},{A.bundle.frame[b]}]"


def check_jacobi(A: AlgebroidData) -> Verdict:
    """Anchor is a bracket homomorphism and the Jacobiator vanishes on frame triples."""
    witnesses = []
    frame = A.bundle.frame
    for a, b in combinations(range(A.rank), 2):
        lhs = A.anchor_field(a).bracket(A.anchor_field(b))
        rhs = A.anchor_of(SectionElement(A.bundle, A.gamma(a, b)))
        if lhs != rhs:
            witnesses.append(f"anchor{_bracket_text(A, a, b)}: {lhs} != {rhs}")
    sec = [A.frame_section(a) for a in range(A.rank)]
    for a, b, c in combinations(range(A.rank), 3):
        jac = (
            A.bracket(A.bracket(sec[a], sec[b]), sec[c])
            + A.bracket(A.bracket(sec[b], sec[c]), sec[a])
            + A.bracket(A.bracket(sec[c], sec[a]), sec[b])
        )
        if not jac.is_zero():
            witnesses.append(f"jacobiator({frame[a]},{frame[b]},{frame[c]}) = {jac}")
    return Verdict(not witnesses, tuple(witnesses))


def _require_jacobi(A: AlgebroidData):
    verdict = check_jacobi(A)
    if not verdict:
        raise PreconditionError("not a Lie algebroid: " + verdict.witnesses[0])


def check_im_weighting(A: AlgebroidData) -> Verdict:
    _require_jacobi(A)
    v = A.bundle.vertical
    frame = A.bundle.frame
    witnesses, table = [], []
    for (a, b), coeffs in A.structure.items():
        for c, gam in enumerate(coeffs):
            if not gam:
                continue
            need = v[a] + v[b] - v[c]
            d = filtration_degree(A.base, gam)
            table.append((f"{_bracket_text(A, a, b)}->{frame[c]}", d, need))
            if d < need:
                witnesses.append(f"{_bracket_text(A, a, b)} component {frame[c]}: degree {d} < {need}")
    for a in range(A.rank):
        d = vector_field_degree(A.anchor_field(a))
        table.append((f"anchor({frame[a]})", d, v[a]))
        if d < v[a]:
            witnesses.append(f"anchor({frame[a]}): degree {d} < {v[a]}")
    notes = tuple(f"positive vertical weight {w} on {s}" for s, w in zip(frame, v) if w > 0)
    return Verdict(not witnesses, tuple(witnesses), tuple(table), notes)


# -- algebroid differential --------------------------------------------------


def _d_function(A: AlgebroidData, f: Polynomial) -> FormElement:
    return FormElement(A.bundle, 1, {(a,): A.anchor_field(a)(f) for a in range(A.rank)})


def _d_generator(A: AlgebroidData, c: int) -> FormElement:
    out = {}
    for (a, b), coeffs in A.structure.items():
        if coeffs[c]:
            out[(a, b)] = -coeffs[c]
    return FormElement(A.bundle, 2, out)


def dA_apply(A: AlgebroidData, omega: FormElement) -> FormElement:
    """d_A, extended from functions and dual frame generators as a derivation."""
    result = FormElement.zero(A.bundle, omega.degree + 1)
    generator_d = {}
    for I, f in omega.coefficients.items():
        tau_I = FormElement(A.bundle, len(I), {I: 1})
        result = result + _d_function(A, f).wedge(tau_I)
        for k, c in enumerate(I):
            if c not in generator_d:
                generator_d[c] = _d_generator(A, c)
            before = FormElement(A.bundle, k, {I[:k]: 1})
            after = FormElement(A.bundle, len(I) - k - 1, {I[k + 1 :]: 1})
            term = before.wedge(generator_d[c]).wedge(after).scale(f)
            result = result + (term if k % 2 == 0 else -term)
    return result


def dA_check(A: AlgebroidData) -> Verdict:
    """d_A squares to zero on generators and never lowers form degree.

    Generators are the base coordinates and the dual frame; the derivation
    rule carries both properties to all forms.
    """
    _require_jacobi(A)
    witnesses, table, notes = [], [], []
    base = A.base
    gens = [(x, FormElement.function(A.bundle, Polynomial.var(x))) for x in base.coordinates]
    dual = dual_bundle(A.bundle).frame
    gens += [(dual[c], FormElement.generator(A.bundle, c)) for c in range(A.rank)]
    for name, g in gens:
        dg = dA_apply(A, g)
        before, after = form_degree(g), form_degree(dg)
        table.append((name, before, after))
        if after < before:
            witnesses.append(f"d_A {name} = {dg}: degree {after} < {before}")
        ddg = dA_apply(A, dg)
        if not ddg.is_zero():
            notes.append(f"d_A d_A {name} = {ddg} != 0")
    return Verdict(not witnesses and not notes, tuple(witnesses + notes), tuple(table))


# -- linear Poisson structure on the dual --------------------------------------


def momentum_names(A: AlgebroidData) -> tuple:
    """Linear coordinates p_a on A*, the functions given by sigma_a."""
    return tuple(fibre_name(s) for s in A.bundle.frame)


def _dx(f: Polynomial, name: str) -> Polynomial:
    return f.diff(name) if name in f.used_variables() else Polynomial.zero()


def poisson_bracket(A: AlgebroidData, f, g) -> Polynomial:
    f, g = Polynomial.coerce(f), Polynomial.coerce(g)
    ps = momentum_names(A)
    allowed = set(A.base.coordinates) | set(ps)
    for h in (f, g):
        foreign = sorted(h.used_variables() - allowed)
        if foreign:
            raise VariableError(f"variable(s) {', '.join(foreign)} are not coordinates on A*")
    df = {p: _dx(f, p) for p in ps}
    dg = {p: _dx(g, p) for p in ps}
    total = Polynomial.zero(A.base.coordinates + ps)
    for (a, b), coeffs in A.structure.items():
        cross = df[ps[a]] * dg[ps[b]] - df[ps[b]] * dg[ps[a]]
        if not cross:
            continue
        linear = Polynomial.zero()
        for c, gam in enumerate(coeffs):
            if gam:
                linear = linear + gam * Polynomial.var(ps[c])
        total = total + cross * linear
    for a in range(A.rank):
        for j, x in enumerate(A.base.coordinates):
            anc = A.anchor[a][j]
            if anc:
                total = total + (df[ps[a]] * _dx(g, x) - _dx(f, x) * dg[ps[a]]) * anc
    return total


def poisson_degree(A: AlgebroidData, f) -> object:
    """Total-space degree on A*, where p_a carries weight v_a."""
    dual = dual_bundle(A.bundle)
    rename = dict(zip(momentum_names(A), dual.fibre_coordinates()))
    return total_space_degree(dual, Polynomial.coerce(f).rename(rename))


def poisson_degree_check(A: AlgebroidData) -> Verdict:
    """Does the bracket have filtration degree zero on the generating functions?"""
    _require_jacobi(A)
    gens = [Polynomial.var(x) for x in A.base.coordinates] + [Polynomial.var(p) for p in momentum_names(A)]
    witnesses, table = [], []
    for i in range(len(gens)):
        for j in range(i, len(gens)):
            u, w = gens[i], gens[j]
            bracket = poisson_bracket(A, u, w)
            need = poisson_degree(A, u) + poisson_degree(A, w)
            d = poisson_degree(A, bracket)
            table.append((f"{{{u},{w}}}", d, need))
            if d < need:
                witnesses.append(f"{{{u},{w}}} = {bracket}: degree {d} < {need}")
    return Verdict(not witnesses, tuple(witnesses), tuple(table))


# -- graded and deformation limits ------------------------------------------


def _require_im(A: AlgebroidData):
    verdict = check_im_weighting(A)
    if not verdict:
        raise PreconditionError("weighting is not infinitesimally multiplicative: " + verdict.witnesses[0])


def graded_normal_algebroid(A: AlgebroidData) -> AlgebroidData:
    _require_im(A)
    base, v, w = A.base, A.bundle.vertical, A.base.weights
    anchor = tuple(
        tuple(homogeneous_approximation(base, A.anchor[a][j], v[a] + w[j]) for j in range(base.dim))
        for a in range(A.rank)
    )
    structure = {
        (a, b): tuple(homogeneous_approximation(base, gam, v[a] + v[b] - v[c]) for c, gam in enumerate(coeffs))
        for (a, b), coeffs in A.structure.items()
    }
    return AlgebroidData(graded_bundle(A.bundle), anchor, structure)


def rees_deformation_algebroid(A: AlgebroidData) -> AlgebroidData:
    """The deformation family; base coordinates are the barred ones and t."""
    _require_im(A)
    base, v, w = A.base, A.bundle.vertical, A.base.weights
    anchor = tuple(
        tuple(rees_interpolation(base, A.anchor[a][j], v[a] + w[j]) for j in range(base.dim)) + (0,)
        for a in range(A.rank)
    )
    structure = {
        (a, b): tuple(rees_interpolation(base, gam, v[a] + v[b] - v[c]) for c, gam in enumerate(coeffs))
        for (a, b), coeffs in A.structure.items()
    }
    return AlgebroidData(deformation_bundle(A.bundle), anchor, structure)


def specialize_deformation(D: AlgebroidData, value) -> AlgebroidData:
    """Set t to a constant; the result lives on the barred base with plain frame names."""
    from .linweight import specialize_t

    bundle = specialize_t(SectionElement.zero(D.bundle), value).bundle
    sub = {T_VAR: Polynomial.coerce(value)}
    anchor = tuple(tuple(x.substitute(sub) for x in row[:-1]) for row in D.anchor)
    structure = {k: tuple(c.substitute(sub) for c in cs) for k, cs in D.structure.items()}
    return AlgebroidData(bundle, anchor, structure)


def structure_table(A: AlgebroidData) -> tuple:
    """Anchor and structure functions with base coordinates renamed positionally.

    Two algebroids on charts of equal shape compare equal exactly when their
    tables agree.
    """
    rename = {x: f"_c{j}" for j, x in enumerate(A.base.coordinates)}
    anchor = tuple(tuple(x.rename(rename) for x in row) for row in A.anchor)
    structure = tuple((k, tuple(c.rename(rename) for c in cs)) for k, cs in A.structure.items())
    return anchor, structure


# -- nilpotent Lie algebras -------------------------------------------------------


def _require_lie_algebra(A: AlgebroidData):
    if not A.has_constant_structure():
        raise PreconditionError("expected a Lie algebra: zero anchor and constant structure constants")


def _const_bracket(A: AlgebroidData, x: Sequence, y: Sequence) -> list:
    out = [Fraction(0)] * A.rank
    for (a, b), coeffs in A.structure.items():
        cross = x[a] * y[b] - x[b] * y[a]
        if not cross:
            continue
        for c, gam in enumerate(coeffs):
            if gam:
                out[c] += cross * gam.constant_value()
    return out


def lower_central_series(A: AlgebroidData) -> list:
    """Dimensions of g, [g,g], [g,[g,g]], ... until zero or stable."""
    _require_lie_algebra(A)
    n = A.rank
    full = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    current = row_reduce(full)
    dims = [len(current)]
    while dims[-1]:
        nxt = row_reduce([_const_bracket(A, x, y) for x in full for y in current])
        dims.append(len(nxt))
        if len(nxt) == len(current):
            break
        current = nxt
    return dims


def nilpotency_class(A: AlgebroidData) -> int:
    dims = lower_central_series(A)
    if dims[-1] != 0:
        raise PreconditionError(f"not nilpotent: lower central series {dims} stabilizes above zero")
    return len(dims) - 1


@dataclass(frozen=True)
class GradedNilpotentLie:
    algebra: AlgebroidData

    def __post_init__(self):
        A = self.algebra
        if not A.is_lie_algebra():
            raise PreconditionError("a graded nilpotent Lie algebra lives over a point")
        _require_lie_algebra(A)
        if any(v >= 0 for v in A.bundle.vertical):
            raise PreconditionError("weights must be strictly negative")
        object.__setattr__(self, "step", nilpotency_class(A))

    @property
    def rank(self) -> int:
        return self.algebra.rank

    def bracket(self, X: Sequence, Y: Sequence) -> tuple:
        X = [Polynomial.coerce(x) for x in X]
        Y = [Polynomial.coerce(y) for y in Y]
        out = [Polynomial.zero() for _ in range(self.rank)]
        for (a, b), coeffs in self.algebra.structure.items():
            cross = X[a] * Y[b] - X[b] * Y[a]
            if not cross:
                continue
            for c, gam in enumerate(coeffs):
                if gam:
                    out[c] = out[c] + cross * gam
        return tuple(out)


def _compositions(total: int, parts: int):
    """Sequences of ``parts`` pairs (r_i, s_i) with r_i + s_i >= 1 summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for size in range(1, total - parts + 2):
        for r in range(size + 1):
            for rest in _compositions(total - size, parts - 1):
                yield ((r, size - r),) + rest


def dynkin_coefficients(step: int) -> dict:
    """Dynkin coefficients of log(e^X e^Y), keyed by words in 'X'/'Y' of length <= step.

    Each word w_1...w_n stands for the right-nested bracket
    [w_1, [w_2, ... [w_{n-1}, w_n]...]].
    """
    words: dict = {}
    for n in range(1, step + 1):
        for k in range(1, n + 1):
            for seq in _compositions(n, k):
                word = "".join("X" * r + "Y" * s for r, s in seq)
                if n > 1 and word[-1] == word[-2]:
                    continue
                denom = n
                for r, s in seq:
                    denom *= factorial(r) * factorial(s)
                coeff = Fraction((-1) ** (k - 1), k * denom)
                words[word] = words.get(word, Fraction(0)) + coeff
    return {w: c for w, c in sorted(words.items(), key=lambda kv: (len(kv[0]), kv[0])) if c}


def bch_product(G: GradedNilpotentLie, X: Sequence, Y: Sequence) -> tuple:
    X = tuple(Polynomial.coerce(x) for x in X)
    Y = tuple(Polynomial.coerce(y) for y in Y)
    if len(X) != G.rank or len(Y) != G.rank:
        raise PreconditionError(f"expected {G.rank} coordinates")
    letters = {"X": X, "Y": Y}
    cache: dict = {}

    def nested(word: str):
        if word in cache:
            return cache[word]
        if len(word) == 1:
            value = letters[word]
        else:
            value = G.bracket(letters[word[0]], nested(word[1:]))
        cache[word] = value
        return value

    out = [Polynomial.zero() for _ in range(G.rank)]
    for word, coeff in dynkin_coefficients(G.step).items():
        term = nested(word)
        out = [o + t * coeff for o, t in zip(out, term)]
    return tuple(out)


def dilation(G: GradedNilpotentLie, lam, X: Sequence) -> tuple:
    """delta_lam multiplies the weight -i component by lam^i."""
    lam = Polynomial.var(lam) if isinstance(lam, str) else Polynomial.coerce(lam)
    return tuple(Polynomial.coerce(x) * lam ** (-v) for x, v in zip(X, G.algebra.bundle.vertical))


def symbolic_element(G: GradedNilpotentLie, prefix: str) -> tuple:
    return tuple(Polynomial.var(f"{prefix}{a + 1}") for a in range(G.rank))


def dilation_check(G: GradedNilpotentLie) -> Verdict:
    """delta_lam(X.Y) = delta_lam(X).delta_lam(Y) with X, Y, lam all symbolic."""
    X, Y = symbolic_element(G, "_X"), symbolic_element(G, "_Y")
    lam = "_lam"
    lhs = dilation(G, lam, bch_product(G, X, Y))
    rhs = bch_product(G, dilation(G, lam, X), dilation(G, lam, Y))
    frame = G.algebra.bundle.frame
    witnesses = tuple(f"{frame[a]}: {l} != {r}" for a, (l, r) in enumerate(zip(lhs, rhs)) if l != r)
    return Verdict(not witnesses, witnesses)


# -- wide integration --------------------------------------------------------------


def check_wide_integration_hypotheses(
    A: AlgebroidData,
    levels: Mapping,
    B,
    sample_points: Iterable = ((),),
) -> Verdict:
    """Hypotheses (a) and (b) for integrating a wide filtration.

    ``levels`` maps i > 0 to the frame subset spanning A_{-i}. ``B`` is a
    frame subset or a list of generating sections.
    """
    gens, labels = [], []
    for item in B:
        if isinstance(item, SectionElement):
            gens.append(item)
            labels.append(f"({item})")
        else:
            a = A.bundle.index(item)
            gens.append(A.frame_section(a))
            labels.append(A.bundle.frame[a])
    frame = A.bundle.frame
    witnesses, table = [], []
    subsets = {}
    for i, subset in sorted(levels.items(), key=lambda kv: abs(kv[0])):
        subsets[abs(i)] = sorted({A.bundle.index(s) for s in subset})
    # (a)
    for i, idx in subsets.items():
        for g, label in zip(gens, labels):
            for a in idx:
                br = A.bracket(g, A.frame_section(a))
                outside = [c for c in range(A.rank) if c not in idx and br.coefficients[c]]
                if outside:
                    witnesses.append(f"(a) [{label},{frame[a]}] = {br} leaves A_-{i}")
    # (b)
    points = [_as_point(A.base, p) for p in sample_points]
    for i, idx in subsets.items():
        dims = set()
        for p in points:
            rows = [[c.evaluate(p) for c in g.coefficients] for g in gens]
            rows += [[Fraction(int(c == a)) for c in range(A.rank)] for a in idx]
            d = rank(rows) if rows else 0
            dims.add(d)
            table.append((i, tuple(p[x] for x in A.base.coordinates), d))
        if len(dims) > 1:
            witnesses.append(f"(b) dim(B + A_-{i}) varies over samples: {sorted(dims)}")
    return Verdict(not witnesses, tuple(witnesses), tuple(table), ("sampled check",))

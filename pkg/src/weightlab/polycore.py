"""Exact multivariate polynomials over the rationals.

A :class:`Polynomial` is a sparse map from monomials to nonzero
:class:`fractions.Fraction` coefficients. A monomial is a tuple of
``(name, exponent)`` pairs sorted by name, with every exponent positive, so
variables are identified purely by name and two polynomials over different
variable tables can be combined directly. Each polynomial also carries an
ordered variable table; it only affects printing order.

Values are immutable. All arithmetic is exact.
"""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Mapping, Union

from .errors import SubstitutionError, VariableError

Monomial = tuple  # tuple[tuple[str, int], ...]
Scalar = Union[int, Fraction]


@total_ordering
class _Infinity:
    """The degree of the zero polynomial: above every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("weightlab.INF")

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __sub__(self, other):
        if other is self:
            raise ArithmeticError("inf - inf is undefined")
        return self

    def __rsub__(self, other):
        raise ArithmeticError("cannot subtract an infinite degree")

    def __neg__(self):
        raise ArithmeticError("negative infinity is not a degree")

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def is_inf(value) -> bool:
    return value is INF


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    merged = dict(a)
    for name, e in b:
        merged[name] = merged.get(name, 0) + e
    return tuple(sorted(merged.items()))


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _merge_tables(*tables: Iterable[str]) -> tuple:
    seen = {}
    for table in tables:
        for name in table:
            seen.setdefault(name, None)
    return tuple(seen)


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"exact coefficient expected, got {type(c).__name__}")


class Polynomial:
    __slots__ = ("_terms", "_variables", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None, variables: Iterable[str] = ()):
        clean = {}
        if terms:
            for mono, coeff in terms.items():
                coeff = _as_fraction(coeff)
                if coeff:
                    clean[mono] = coeff
        used = sorted({name for mono in clean for name, _ in mono})
        self._terms = clean
        self._variables = _merge_tables(variables, used)
        self._hash = None

    # -- construction -------------------------------------------------

    @classmethod
    def constant(cls, c: Scalar, variables: Iterable[str] = ()) -> "Polynomial":
        return cls({(): c}, variables)

    @classmethod
    def var(cls, name: str, power: int = 1) -> "Polynomial":
        if power < 0:
            raise ValueError("negative exponent")
        if power == 0:
            return cls.constant(1, (name,))
        return cls({((name, power),): 1}, (name,))

    @classmethod
    def zero(cls, variables: Iterable[str] = ()) -> "Polynomial":
        return cls({}, variables)

    @classmethod
    def parse(cls, text: str, variables: Iterable[str] = ()) -> "Polynomial":
        from .syntax import parse_polynomial

        return parse_polynomial(text, variables)

    @staticmethod
    def coerce(value) -> "Polynomial":
        if isinstance(value, Polynomial):
            return value
        if isinstance(value, (int, Fraction)):
            return Polynomial.constant(value)
        if isinstance(value, str):
            return Polynomial.parse(value)
        raise TypeError(f"cannot interpret {value!r} as a polynomial")

    # -- inspection -----------------------------------------------------

    @property
    def variables(self) -> tuple:
        return self._variables

    def used_variables(self) -> frozenset:
        return frozenset(name for mono in self._terms for name, _ in mono)

    def items(self):
        """(monomial, coefficient) pairs in canonical graded-lex order."""
        return [(m, self._terms[m]) for m in self._sorted_monomials()]

    def monomials(self):
        return list(self._terms)

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(mono, Fraction(0))

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(not m for m in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get((), Fraction(0))

    def constant_term(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def total_degree(self):
        if not self._terms:
            return INF
        return max(_mono_degree(m) for m in self._terms)

    def degree_in(self, name: str) -> int:
        return max((dict(m).get(name, 0) for m in self._terms), default=0)

    def with_variables(self, variables: Iterable[str]) -> "Polynomial":
        return Polynomial(self._terms, _merge_tables(variables, self._variables))

    # -- arithmetic -----------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other):
        try:
            other = Polynomial.coerce(other)
        except TypeError:
            return NotImplemented
        terms = dict(self._terms)
        for mono, coeff in other._terms.items():
            value = terms.get(mono, 0) + coeff
            if value:
                terms[mono] = value
            else:
                terms.pop(mono, None)
        return Polynomial(terms, _merge_tables(self._variables, other._variables))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({m: -c for m, c in self._terms.items()}, self._variables)

    def __sub__(self, other):
        try:
            other = Polynomial.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Polynomial.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Polynomial.zero(self._variables)
            return Polynomial({m: c * other for m, c in self._terms.items()}, self._variables)
        try:
            other = Polynomial.coerce(other)
        except TypeError:
            return NotImplemented
        terms: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = _mono_mul(m1, m2)
                terms[mono] = terms.get(mono, 0) + c1 * c2
        return Polynomial(terms, _merge_tables(self._variables, other._variables))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Polynomial):
            if not other.is_constant() or other.is_zero():
                raise ZeroDivisionError("division only by a nonzero constant")
            other = other.constant_value()
        other = _as_fraction(other)
        if not other:
            raise ZeroDivisionError("division by zero")
        return self * (1 / other)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(1, self._variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- calculus and substitution ---------------------------------------

    def diff(self, name: str) -> "Polynomial":
        """Formal partial derivative. ``name`` must be in the variable table."""
        if name not in self._variables:
            raise VariableError(f"unknown variable {name!r}")
        terms: dict = {}
        for mono, coeff in self._terms.items():
            powers = dict(mono)
            e = powers.get(name, 0)
            if not e:
                continue
            if e == 1:
                del powers[name]
            else:
                powers[name] = e - 1
            new = tuple(sorted(powers.items()))
            terms[new] = terms.get(new, 0) + coeff * e
        return Polynomial(terms, self._variables)

    def valuation(self, name: str):
        """Smallest exponent of ``name`` over all terms; INF for zero."""
        if name not in self._variables:
            raise VariableError(f"unknown variable {name!r}")
        if not self._terms:
            return INF
        return min(dict(m).get(name, 0) for m in self._terms)

    def coefficient_of(self, name: str, power: int) -> "Polynomial":
        """The coefficient of ``name**power``, as a polynomial in the other variables."""
        terms = {}
        for mono, coeff in self._terms.items():
            powers = dict(mono)
            if powers.get(name, 0) != power:
                continue
            powers.pop(name, None)
            terms[tuple(sorted(powers.items()))] = coeff
        return Polynomial(terms, tuple(v for v in self._variables if v != name))

    def substitute(self, bindings: Mapping[str, object], strict: bool = True) -> "Polynomial":
        """Simultaneously replace bound variables; unbound ones pass through.

        With ``strict`` (the default) it is an error for a binding to mention a
        variable that is carried through unbound, since the result would
        silently identify two different variables.
        """
        images = {name: Polynomial.coerce(value) for name, value in bindings.items()}
        used = self.used_variables()
        if strict:
            carried = used - images.keys()
            for name, image in images.items():
                if name not in used:
                    continue
                clash = image.used_variables() & carried
                if clash:
                    raise SubstitutionError(
                        f"binding {name} -> {image} captures carried-through variable(s) "
                        + ", ".join(sorted(clash))
                    )
        table = []
        for name in self._variables:
            if name in images:
                table.extend(images[name].variables)
            else:
                table.append(name)
        power_cache: dict = {}

        def power(name, e):
            key = (name, e)
            if key not in power_cache:
                power_cache[key] = images[name] ** e
            return power_cache[key]

        result: dict = {}
        for mono, coeff in self._terms.items():
            kept = []
            factors = []
            for name, e in mono:
                if name in images:
                    factors.append(power(name, e))
                else:
                    kept.append((name, e))
            piece = Polynomial({tuple(kept): coeff})
            for f in factors:
                piece = piece * f
                if not piece:
                    break
            for m, c in piece._terms.items():
                result[m] = result.get(m, 0) + c
        return Polynomial(result, _merge_tables(table))

    def rename(self, mapping: Mapping[str, str]) -> "Polynomial":
        """Bijective renaming of variables (no capture check beyond injectivity)."""
        targets = [mapping.get(v, v) for v in self.used_variables()]
        if len(set(targets)) != len(targets):
            raise SubstitutionError("renaming is not injective on the used variables")
        terms = {}
        for mono, coeff in self._terms.items():
            new = tuple(sorted((mapping.get(n, n), e) for n, e in mono))
            terms[new] = coeff
        return Polynomial(terms, tuple(mapping.get(v, v) for v in self._variables))

    def evaluate(self, point: Mapping[str, Scalar]) -> Fraction:
        value = self.substitute({k: Polynomial.constant(v) for k, v in point.items()}, strict=False)
        if not value.is_constant():
            missing = ", ".join(sorted(value.used_variables()))
            raise VariableError(f"no value given for {missing}")
        return value.constant_value()

    def restrict_zero(self, names: Iterable[str]) -> "Polynomial":
        """Set the given variables to zero (drop every term that mentions one)."""
        names = set(names)
        return Polynomial(
            {m: c for m, c in self._terms.items() if not any(n in names for n, _ in m)},
            self._variables,
        )

    def map_monomials(self, fn) -> "Polynomial":
        """Rebuild from ``fn(monomial, coeff) -> (monomial, coeff) | None``."""
        terms: dict = {}
        for mono, coeff in self._terms.items():
            out = fn(mono, coeff)
            if out is None:
                continue
            m, c = out
            terms[m] = terms.get(m, 0) + c
        return Polynomial(terms, self._variables)

    # -- printing -------------------------------------------------------

    def _sorted_monomials(self):
        index = {name: i for i, name in enumerate(self._variables)}
        width = len(index)

        def key(mono):
            vec = [0] * width
            for name, e in mono:
                vec[index[name]] = e
            return (_mono_degree(mono), vec)

        return sorted(self._terms, key=key, reverse=True)

    def __str__(self):
        if not self._terms:
            return "0"
        index = {name: i for i, name in enumerate(self._variables)}
        pieces = []
        for mono in self._sorted_monomials():
            coeff = self._terms[mono]
            factors = [
                name if e == 1 else f"{name}^{e}"
                for name, e in sorted(mono, key=lambda p: index[p[0]])
            ]
            body = "*".join(factors)
            if not body:
                text = str(coeff)
            elif coeff == 1:
                text = body
            elif coeff == -1:
                text = "-" + body
            else:
                text = f"{coeff}*{body}"
            pieces.append(text)
        out = pieces[0]
        for text in pieces[1:]:
            out += " - " + text[1:] if text.startswith("-") else " + " + text
        return out

    def __repr__(self):
        return f"Polynomial({str(self)!r})"


def poly(value, variables: Iterable[str] = ()) -> Polynomial:
    """Convenience coercion: text, numbers, or polynomials."""
    if isinstance(value, str):
        return Polynomial.parse(value, variables)
    p = Polynomial.coerce(value)
    return p.with_variables(variables) if variables else p


def add(p, q) -> Polynomial:
    return Polynomial.coerce(p) + Polynomial.coerce(q)


def mul(p, q) -> Polynomial:
    return Polynomial.coerce(p) * Polynomial.coerce(q)


def substitute(p: Polynomial, bindings: Mapping[str, object], strict: bool = True) -> Polynomial:
    return p.substitute(bindings, strict=strict)


def partial_derivative(p: Polynomial, v: str) -> Polynomial:
    return p.diff(v)


def t_adic_valuation(p: Polynomial, t: str):
    return p.valuation(t)


class Truncated:
    """An element of A[eps]/(eps^(r+1)) with polynomial coefficients.

    ``coeffs[j]`` is the eps^j part.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Iterable, order: int):
        if order < 0:
            raise ValueError("order must be non-negative")
        cs = [Polynomial.coerce(c) for c in coeffs]
        if len(cs) > order + 1:
            cs = cs[: order + 1]
        cs += [Polynomial.zero()] * (order + 1 - len(cs))
        self.order = order
        self.coeffs = tuple(cs)

    @classmethod
    def scalar(cls, value, order: int) -> "Truncated":
        return cls([Polynomial.coerce(value)], order)

    @classmethod
    def from_polynomial(cls, p: Polynomial, eps: str, order: int) -> "Truncated":
        if eps not in p.variables:
            return cls([p], order)
        return cls([p.coefficient_of(eps, j) for j in range(order + 1)], order)

    def _check(self, other):
        if other.order != self.order:
            raise ValueError("truncation orders differ")

    def __add__(self, other):
        if not isinstance(other, Truncated):
            other = Truncated.scalar(other, self.order)
        self._check(other)
        return Truncated([a + b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    __radd__ = __add__

    def __neg__(self):
        return Truncated([-a for a in self.coeffs], self.order)

    def __sub__(self, other):
        if not isinstance(other, Truncated):
            other = Truncated.scalar(other, self.order)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Truncated):
            other = Truncated.scalar(other, self.order)
        self._check(other)
        r = self.order
        out = [Polynomial.zero() for _ in range(r + 1)]
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j in range(r + 1 - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] = out[i + j] + a * b
        return Truncated(out, r)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = Truncated.scalar(1, self.order)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        return isinstance(other, Truncated) and self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self):
        return f"Truncated({[str(c) for c in self.coeffs]}, order={self.order})"

    def to_polynomial(self, eps: str) -> Polynomial:
        e = Polynomial.var(eps)
        return sum((c * e ** j for j, c in enumerate(self.coeffs)), Polynomial.zero())


def evaluate_truncated(p: Polynomial, assignment: Mapping[str, Truncated], order: int) -> Truncated:
    """Evaluate ``p`` with some variables replaced by truncated elements.

    Variables missing from ``assignment`` are treated as scalars.
    """
    cache: dict = {}

    def power(name, e):
        key = (name, e)
        if key not in cache:
            if e == 1:
                cache[key] = assignment[name]
            else:
                cache[key] = power(name, e - 1) * assignment[name]
        return cache[key]

    total = [Polynomial.zero() for _ in range(order + 1)]
    for mono, coeff in p.items():
        scalar_part = []
        value = None
        for name, e in mono:
            if name in assignment:
                factor = power(name, e)
                value = factor if value is None else value * factor
            else:
                scalar_part.append((name, e))
        scalar = Polynomial({tuple(scalar_part): coeff})
        if value is None:
            total[0] = total[0] + scalar
        else:
            for j, c in enumerate(value.coeffs):
                if c:
                    total[j] = total[j] + scalar * c
    return Truncated(total, order)

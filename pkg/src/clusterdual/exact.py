"""Exact scalars and polynomials.

Four value types live here:

* ``Fraction`` (stdlib) plays the role of the exact rational.
* :class:`RatFunc` -- reduced multivariate rational functions over Q, backed by
  sympy's sparse ``FracField``. Fields are keyed by a sorted tuple of labels and
  values with different label sets are promoted to the union on contact.
* :class:`MultiLaurent` -- Laurent polynomials with rational coefficients.
* :class:`QScalar` -- integer Laurent polynomials in ``q^(1/d)``.

All values are immutable.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping, Optional

import sympy
from sympy.polys.domains import QQ
from sympy.polys.fields import FracField
from sympy.polys.orderings import lex


class DegenerateAssignment(ZeroDivisionError):
    """A substitution sent some denominator to zero."""


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions, gmpy/sympy rationals and "p/q" strings."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    num = getattr(value, "numerator", None)
    den = getattr(value, "denominator", None)
    if num is not None and den is not None:
        return Fraction(int(num), int(den))
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def fraction_str(value: Fraction) -> str:
    value = as_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _qq(value) -> "QQ.dtype":
    f = as_fraction(value)
    return QQ(f.numerator, f.denominator)


@lru_cache(maxsize=None)
def _field(labels: tuple[str, ...]) -> FracField:
    return FracField(labels, QQ, lex)


def _labels_key(labels: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(set(labels)))


# ---------------------------------------------------------------------------
# rational functions


class RatFunc:
    """A reduced quotient of polynomials with rational coefficients.

    The underlying field is determined by ``labels`` (sorted). The
    denominator is normalised by sympy to a positive leading coefficient
    in lex order.
    """

    __slots__ = ("_f", "_key")

    def __init__(self, element, _key=None):
        self._f = element
        self._key = _key

    # -- construction -----------------------------------------------------

    @classmethod
    def symbol(cls, label: str, labels: Iterable[str] = ()) -> "RatFunc":
        key = _labels_key([label, *labels])
        K = _field(key)
        return cls(K.gens[key.index(label)])

    @classmethod
    def symbols(cls, labels: Iterable[str]) -> list["RatFunc"]:
        labels = list(labels)
        return [cls.symbol(lab, labels) for lab in labels]

    @classmethod
    def constant(cls, value, labels: Iterable[str] = ()) -> "RatFunc":
        K = _field(_labels_key(labels))
        return cls(K.ground_new(_qq(value)))

    @classmethod
    def parse(cls, text: str, labels: Iterable[str] = ()) -> "RatFunc":
        """Parse an arithmetic expression such as ``"x2*(1+x1)/x1"``.

        ``^`` is accepted as exponentiation.
        """
        expr = sympy.sympify(text.replace("^", "**"), rational=True)
        names = {str(s) for s in expr.free_symbols}
        key = _labels_key([*names, *labels])
        return cls(_field(key).from_expr(expr))

    @classmethod
    def from_terms(cls, numer: Mapping, denom: Mapping, labels: Iterable[str]) -> "RatFunc":
        """Build from ``{label_exponent_tuple: coeff}`` maps keyed on ``labels`` order."""
        labels = list(labels)
        key = _labels_key(labels)
        K = _field(key)
        pos = [key.index(lab) for lab in labels]

        def poly(terms):
            out = {}
            for exps, c in terms.items():
                e = [0] * len(key)
                for p, v in zip(pos, exps):
                    e[p] = v
                out[tuple(e)] = _qq(c)
            return K.ring.from_dict(out) if out else K.ring.zero

        return cls(K.new(poly(numer), poly(denom)))

    # -- structure --------------------------------------------------------

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(s.name for s in self._f.field.symbols)

    @property
    def used_labels(self) -> tuple[str, ...]:
        labs = self.labels
        used = set()
        for poly in (self._f.numer, self._f.denom):
            for exps in poly.keys():
                used.update(i for i, e in enumerate(exps) if e)
        return tuple(labs[i] for i in sorted(used))

    def numerator_terms(self) -> dict[tuple[int, ...], Fraction]:
        return {e: as_fraction(c) for e, c in self._f.numer.items()}

    def denominator_terms(self) -> dict[tuple[int, ...], Fraction]:
        return {e: as_fraction(c) for e, c in self._f.denom.items()}

    def in_labels(self, labels: Iterable[str]) -> "RatFunc":
        key = _labels_key([*self.labels, *labels])
        if key == self.labels:
            return self
        return RatFunc(self._f.set_field(_field(key)))

    def is_zero(self) -> bool:
        return not self._f.numer

    def is_constant(self) -> bool:
        return not self.used_labels

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        zero = self._f.field.ring.zero_monom
        return as_fraction(self._f.numer.get(zero, 0)) / as_fraction(self._f.denom[zero])

    def diff(self, label: str) -> "RatFunc":
        if label not in self.labels:
            return RatFunc.constant(0, self.labels)
        K = self._f.field
        return RatFunc(self._f.diff(K.gens[self.labels.index(label)]))

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other._f.field is self._f.field:
                return self._f, other._f
            key = _labels_key([*self.labels, *other.labels])
            K = _field(key)
            return self._f.set_field(K), other._f.set_field(K)
        if isinstance(other, (int, Fraction)) or hasattr(other, "denominator"):
            return self._f, self._f.field.ground_new(_qq(other))
        return NotImplemented

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        return RatFunc(pair[0] + pair[1])

    __radd__ = __add__

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        return RatFunc(pair[0] - pair[1])

    def __rsub__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        return RatFunc(pair[1] - pair[0])

    def __mul__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        return RatFunc(pair[0] * pair[1])

    __rmul__ = __mul__

    def __truediv__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        if not pair[1].numer:
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(pair[0] / pair[1])

    def __rtruediv__(self, other):
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        if not pair[0].numer:
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(pair[1] / pair[0])

    def __neg__(self):
        return RatFunc(-self._f)

    def __pos__(self):
        return self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            raise TypeError("only integer powers are supported")
        if exponent < 0 and self.is_zero():
            raise ZeroDivisionError("negative power of zero")
        return RatFunc(self._f**exponent)

    # -- comparison -------------------------------------------------------

    def _canonical(self):
        if self._key is None:
            labs = self.labels

            def norm(poly):
                return frozenset(
                    (tuple((labs[i], e) for i, e in enumerate(exps) if e), as_fraction(c))
                    for exps, c in poly.items()
                )

            self._key = (norm(self._f.numer), norm(self._f.denom))
        return self._key

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            if other._f.field is self._f.field:
                return self._f == other._f
            return self._canonical() == other._canonical()
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        return pair[0] == pair[1]

    def __hash__(self):
        return hash(self._canonical())

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        return str(self._f.as_expr()).replace("**", "^")

    def to_sympy(self):
        return self._f.as_expr()


def ratfunc(value, labels: Iterable[str] = ()) -> RatFunc:
    """Coerce numbers, strings and RatFuncs to a RatFunc."""
    if isinstance(value, RatFunc):
        return value.in_labels(labels) if labels else value
    if isinstance(value, str):
        return RatFunc.parse(value, labels)
    return RatFunc.constant(value, labels)


def substitute(f: RatFunc, assignment: Mapping[str, RatFunc]) -> RatFunc:
    """Compose ``f`` with ``assignment`` (label -> image), reducing the result.

    Raises :class:`DegenerateAssignment` if the image of the denominator
    vanishes identically.
    """
    missing = set(f.used_labels) - set(assignment)
    if missing:
        raise KeyError(f"no image for {sorted(missing)}")
    images = {lab: ratfunc(v) for lab, v in assignment.items()}
    target = _labels_key(lab for img in images.values() for lab in img.labels)
    images = {lab: img.in_labels(target) for lab, img in images.items()}
    one = RatFunc.constant(1, target)
    labs = f.labels
    cache: dict[tuple[str, int], RatFunc] = {}

    def power(lab, e):
        if (lab, e) not in cache:
            cache[(lab, e)] = images[lab] ** e
        return cache[(lab, e)]

    def evaluate(terms):
        total = RatFunc.constant(0, target)
        for exps, c in terms.items():
            term = one
            for i, e in enumerate(exps):
                if e:
                    term = term * power(labs[i], e)
            total = total + term * c
        return total

    num = evaluate(f._f.numer)
    den = evaluate(f._f.denom)
    if den.is_zero():
        raise DegenerateAssignment(f"denominator of {f} vanishes under the assignment")
    return num / den


# ---------------------------------------------------------------------------
# Laurent polynomials


class MultiLaurent:
    """Finite sum of rational multiples of Laurent monomials.

    ``terms`` maps exponent tuples (aligned with ``labels``) to Fractions;
    zero coefficients are never stored.
    """

    __slots__ = ("labels", "terms")

    def __init__(self, labels: Iterable[str], terms: Mapping[tuple[int, ...], object] = ()):
        self.labels = tuple(labels)
        clean = {}
        for exps, c in dict(terms).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(self.labels):
                raise ValueError("exponent vector length does not match labels")
            c = as_fraction(c)
            if c:
                clean[exps] = clean.get(exps, 0) + c
                if not clean[exps]:
                    del clean[exps]
        self.terms = clean

    @classmethod
    def monomial(cls, labels, exps, coeff=1) -> "MultiLaurent":
        return cls(labels, {tuple(exps): coeff})

    @classmethod
    def constant(cls, labels, value) -> "MultiLaurent":
        labels = tuple(labels)
        return cls(labels, {(0,) * len(labels): value})

    def _check(self, other: "MultiLaurent"):
        if not isinstance(other, MultiLaurent):
            return None
        if other.labels != self.labels:
            raise ValueError(f"label mismatch: {self.labels} vs {other.labels}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MultiLaurent(self.labels, out)

    def __neg__(self):
        return MultiLaurent(self.labels, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return MultiLaurent(self.labels, {e: c * other for e, c in self.terms.items()})
        other = self._check(other)
        if other is None:
            return NotImplemented
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiLaurent(self.labels, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, MultiLaurent):
            return self.labels == other.labels and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == MultiLaurent.constant(self.labels, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.labels, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def to_ratfunc(self) -> RatFunc:
        lo = [min((e[i] for e in self.terms), default=0) for i in range(len(self.labels))]
        shift = [min(0, v) for v in lo]
        numer = {tuple(a - s for a, s in zip(e, shift)): c for e, c in self.terms.items()}
        denom = {tuple(-s for s in shift): 1}
        return RatFunc.from_terms(numer, denom, self.labels)

    def __repr__(self):
        return f"MultiLaurent({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms, reverse=True):
            c = self.terms[exps]
            mono = "*".join(
                lab if e == 1 else f"{lab}^{e}" for lab, e in zip(self.labels, exps) if e
            )
            if not mono:
                parts.append(fraction_str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{fraction_str(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def is_laurent(f: RatFunc, chart: Iterable[str]) -> Optional[MultiLaurent]:
    """Return ``f`` as a Laurent polynomial in ``chart`` or ``None``.

    ``f`` is Laurent exactly when its reduced denominator is a monomial.
    """
    chart = tuple(chart)
    extra = set(f.used_labels) - set(chart)
    if extra:
        raise ValueError(f"{f} uses labels outside the chart: {sorted(extra)}")
    denom = f.denominator_terms()
    if len(denom) != 1:
        return None
    (dexp, dcoeff), = denom.items()
    labs = f.labels
    index = {lab: i for i, lab in enumerate(labs)}
    pos = [index.get(lab) for lab in chart]

    def restrict(exps):
        return tuple(exps[p] if p is not None else 0 for p in pos)

    shift = restrict(dexp)
    terms = {}
    for exps, c in f.numerator_terms().items():
        e = tuple(a - b for a, b in zip(restrict(exps), shift))
        terms[e] = c / dcoeff
    return MultiLaurent(chart, terms)


# ---------------------------------------------------------------------------
# Laurent polynomials in q^(1/d)


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class QScalar:
    """Integer Laurent polynomial in ``t = q^(1/d)``.

    ``terms`` maps the scaled exponent ``k`` (meaning ``q^(k/d)``) to an
    integer coefficient.
    """

    __slots__ = ("d", "terms")

    def __init__(self, d: int = 1, terms: Mapping[int, int] = ()):
        if d < 1:
            raise ValueError("d must be positive")
        clean = {}
        for k, c in dict(terms).items():
            if c:
                if int(c) != c:
                    raise ValueError("QScalar coefficients are integers")
                clean[int(k)] = clean.get(int(k), 0) + int(c)
                if not clean[int(k)]:
                    del clean[int(k)]
        self.d = d
        self.terms = clean

    @classmethod
    def q_power(cls, exponent, d: int = 1, coeff: int = 1) -> "QScalar":
        """``coeff * q^exponent`` with ``exponent`` in ``(1/d)Z``."""
        exponent = as_fraction(exponent)
        scaled = exponent * d
        if scaled.denominator != 1:
            raise ValueError(f"q^{exponent} is not in Z[q^(1/{d})]")
        return cls(d, {int(scaled): coeff})

    @classmethod
    def one(cls, d: int = 1) -> "QScalar":
        return cls(d, {0: 1})

    @classmethod
    def zero(cls, d: int = 1) -> "QScalar":
        return cls(d, {})

    def with_d(self, d: int) -> "QScalar":
        if d == self.d:
            return self
        if d % self.d:
            raise ValueError(f"cannot rewrite q^(1/{self.d}) data over q^(1/{d})")
        f = d // self.d
        return QScalar(d, {k * f: c for k, c in self.terms.items()})

    def _pair(self, other):
        if isinstance(other, int):
            other = QScalar(self.d, {0: other})
        if not isinstance(other, QScalar):
            return None
        d = _lcm(self.d, other.d)
        return self.with_d(d), other.with_d(d)

    def __add__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        out = dict(a.terms)
        for k, c in b.terms.items():
            out[k] = out.get(k, 0) + c
        return QScalar(a.d, out)

    __radd__ = __add__

    def __neg__(self):
        return QScalar(self.d, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        return pair[0] + (-pair[1])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        out: dict[int, int] = {}
        for k1, c1 in a.terms.items():
            for k2, c2 in b.terms.items():
                out[k1 + k2] = out.get(k1 + k2, 0) + c1 * c2
        return QScalar(a.d, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials are invertible")
            ((k, c),) = self.terms.items()
            if c not in (1, -1):
                raise ValueError("only unit monomials are invertible")
            return QScalar(self.d, {-k * (-n): c ** (-n)})
        out = QScalar.one(self.d)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        return pair[0].terms == pair[1].terms

    def __hash__(self):
        # hash in lowest terms so that equal values hash alike
        g = self.d
        for k in self.terms:
            g = gcd(g, k)
        return hash((self.d // g, frozenset((k // g, c) for k, c in self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_unit_monomial(self) -> bool:
        return len(self.terms) == 1 and next(iter(self.terms.values())) in (1, -1)

    def is_nonnegative(self) -> bool:
        """All coefficients >= 0, i.e. membership in N[q^(±1/d)]."""
        return all(c > 0 for c in self.terms.values())

    def substitute_power(self, factor: int) -> "QScalar":
        """Replace ``q^(1/d)`` by ``q^(factor/d)``."""
        return QScalar(self.d, {k * factor: c for k, c in self.terms.items()})

    def to_json(self) -> dict:
        return {"d": self.d, "terms": {str(k): c for k, c in sorted(self.terms.items())}}

    @classmethod
    def from_json(cls, data: Mapping) -> "QScalar":
        return cls(int(data["d"]), {int(k): int(c) for k, c in data["terms"].items()})

    def __repr__(self):
        return f"QScalar({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, reverse=True):
            c = self.terms[k]
            e = Fraction(k, self.d)
            if e == 0:
                mono = ""
            elif e == 1:
                mono = "q"
            elif e.denominator == 1:
                mono = f"q^{e.numerator}"
            else:
                mono = f"q^({e.numerator}/{e.denominator})"
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def q_limit(s: QScalar) -> Fraction:
    """Value at ``q^(1/d) = 1``."""
    return Fraction(sum(s.terms.values()))


def q_divide(s: QScalar, by: QScalar) -> Optional[QScalar]:
    """Exact quotient ``s / by`` in ``Z[q^(±1/d)]``, or ``None`` if it does not exist."""
    if not by:
        raise ZeroDivisionError("division by the zero QScalar")
    s, by = s._pair(by)
    if not s:
        return QScalar(s.d)
    d = s.d
    lo_s, lo_b = min(s.terms), min(by.terms)
    # dense coefficient lists, lowest degree first
    num = [0] * (max(s.terms) - lo_s + 1)
    for k, c in s.terms.items():
        num[k - lo_s] = c
    den = [0] * (max(by.terms) - lo_b + 1)
    for k, c in by.terms.items():
        den[k - lo_b] = c
    if len(den) > len(num):
        return None
    lead = den[-1]
    quot = [0] * (len(num) - len(den) + 1)
    rem = list(num)
    for i in range(len(quot) - 1, -1, -1):
        c = rem[i + len(den) - 1]
        if c % lead:
            return None
        c //= lead
        quot[i] = c
        if c:
            for j, dc in enumerate(den):
                rem[i + j] -= c * dc
    if any(rem):
        return None
    shift = lo_s - lo_b
    return QScalar(d, {i + shift: c for i, c in enumerate(quot) if c})

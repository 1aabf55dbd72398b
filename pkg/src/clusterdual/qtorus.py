"""Quantum torus algebras attached to a seed.

Monomials are normal ordered, ``X^a = X_1^a_1 ... X_n^a_n``, and generators
satisfy ``X_i X_j = q^(2 eps_hat_ij) X_j X_i``. Moving ``X^b`` past ``X^a``
then gives the cocycle

    X^a X^b = q^(2 sum_{i>j} a_i eps_hat_ij b_j) X^(a+b).

Coefficients are QScalars in ``t = q^(1/d)`` with ``d`` twice the lcm of the
multipliers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Optional, Sequence

from .exact import MultiLaurent, QScalar, RatFunc, q_divide, q_limit
from .seed import Seed, SeedError, mutate


class CommutationError(ArithmeticError):
    """A commutator that is not divisible by ``q^(1/d) - 1``."""


class QTorus:
    """The quantum torus of a seed (only the exchange data is used)."""

    def __init__(self, seed: Seed):
        self.seed = seed
        self.n = seed.n
        self.labels = seed.labels
        self.d = 2 * lcm(*seed.multipliers) if seed.multipliers else 2
        self.eps = seed.epsilon_hat
        # 2 * eps_hat_ij in units of 1/d
        self._twist = []
        for row in self.eps:
            out = []
            for v in row:
                s = 2 * v * self.d
                if s.denominator != 1:
                    raise ValueError(f"q^(2*{v}) is not in Z[q^(1/{self.d})]")
                out.append(int(s))
            self._twist.append(out)

    def cocycle(self, a: Sequence[int], b: Sequence[int]) -> int:
        """Scaled exponent of the q-power in ``X^a X^b`` (units of ``1/d``)."""
        tw = self._twist
        total = 0
        for i in range(1, self.n):
            ai = a[i]
            if ai:
                row = tw[i]
                total += ai * sum(row[j] * b[j] for j in range(i) if b[j])
        return total

    def pairing(self, a: Sequence[int], b: Sequence[int]) -> int:
        """Scaled exponent of ``2 a^T eps_hat b``, so ``X^a X^b = q^(..) X^b X^a``."""
        return sum(a[i] * self._twist[i][j] * b[j] for i in range(self.n) for j in range(self.n) if a[i] and b[j])

    def element(self, terms: Mapping) -> "QTorusElement":
        return QTorusElement(self, terms)

    def monomial(self, exps: Sequence[int], coeff=None) -> "QTorusElement":
        coeff = QScalar.one(self.d) if coeff is None else coeff
        return QTorusElement(self, {tuple(exps): coeff})

    def generator(self, i: int, power: int = 1) -> "QTorusElement":
        """``X_i^power`` (1-based ``i``)."""
        exps = [0] * self.n
        exps[i - 1] = power
        return self.monomial(exps)

    def one(self) -> "QTorusElement":
        return self.monomial([0] * self.n)

    def zero(self) -> "QTorusElement":
        return QTorusElement(self, {})

    def scalar(self, s: QScalar) -> "QTorusElement":
        return self.monomial([0] * self.n, s)


class QTorusElement:
    """A finite sum of normal-ordered monomials with QScalar coefficients."""

    __slots__ = ("torus", "terms")

    def __init__(self, torus: QTorus, terms: Mapping = ()):
        self.torus = torus
        clean = {}
        for exps, c in dict(terms).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != torus.n:
                raise ValueError("exponent vector has the wrong length")
            if isinstance(c, int):
                c = QScalar(torus.d, {0: c})
            c = c.with_d(torus.d) if torus.d % c.d == 0 else c
            if exps in clean:
                c = clean[exps] + c
            if c:
                clean[exps] = c
            else:
                clean.pop(exps, None)
        self.terms = clean

    def _same(self, other):
        if isinstance(other, (int, QScalar)):
            return self.torus.scalar(other if isinstance(other, QScalar) else QScalar(self.torus.d, {0: other}))
        if not isinstance(other, QTorusElement):
            return None
        if other.torus is not self.torus and other.torus.eps != self.torus.eps:
            raise ValueError("elements of different quantum tori")
        return other

    def __add__(self, other):
        other = self._same(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return QTorusElement(self.torus, out)

    __radd__ = __add__

    def __neg__(self):
        return QTorusElement(self.torus, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._same(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, QScalar)):
            return QTorusElement(self.torus, {e: c * other for e, c in self.terms.items()})
        other = self._same(other)
        if other is None:
            return NotImplemented
        return qt_multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, QScalar)):
            return self * other
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials are inverted")
            ((e, c),) = self.terms.items()
            inv = [-x for x in e]
            # X^e X^-e = q^(cocycle) X^0, so (c X^e)^-1 = c^-1 q^(-cocycle) X^-e
            s = QScalar(self.torus.d, {-self.torus.cocycle(e, inv): 1}) * c ** -1
            return QTorusElement(self.torus, {tuple(inv): s}) ** (-n)
        out = self.torus.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._same(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def classical(self) -> MultiLaurent:
        """Specialise ``q^(1/d) = 1``."""
        return MultiLaurent(self.torus.labels, {e: q_limit(c) for e, c in self.terms.items()})

    def __repr__(self):
        return f"QTorusElement({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms):
            mono = "*".join(
                lab if x == 1 else f"{lab}^{x}" for lab, x in zip(self.torus.labels, e) if x
            ) or "1"
            parts.append(f"({self.terms[e]})*{mono}")
        return " + ".join(parts)


def qt_multiply(a: QTorusElement, b: QTorusElement) -> QTorusElement:
    """Twisted product in the normal-ordered basis."""
    torus = a.torus
    d = torus.d
    out: dict = {}
    for ea, ca in a.terms.items():
        for eb, cb in b.terms.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            c = ca * cb * QScalar(d, {torus.cocycle(ea, eb): 1})
            out[e] = out[e] + c if e in out else c
    return QTorusElement(torus, out)


def semiclassical_bracket(a: QTorusElement, b: QTorusElement) -> MultiLaurent:
    """``[a, b] / (d (q^(1/d) - 1))`` at ``q = 1``."""
    torus = a.torus
    d = torus.d
    comm = qt_multiply(a, b) - qt_multiply(b, a)
    step = QScalar(d, {1: 1, 0: -1})
    out = {}
    for e, c in comm.terms.items():
        quo = q_divide(c, step)
        if quo is None:
            raise CommutationError(f"coefficient {c} of {e} is not divisible by q^(1/{d}) - 1")
        out[e] = q_limit(quo) / d
    return MultiLaurent(torus.labels, out)


# ---------------------------------------------------------------------------
# quantum mutation


@dataclass
class ShiftFraction:
    """``numerator * (D_1 ... D_r)^-1`` with each ``D`` a Laurent polynomial in ``X_k``.

    Denominators are dicts ``power -> QScalar``. They commute with each
    other, so only their product matters for the checks below.
    """

    numerator: QTorusElement
    k: int
    denominators: list = field(default_factory=list)

    def denominator(self) -> dict:
        d = self.numerator.torus.d
        out = {0: QScalar.one(d)}
        for den in self.denominators:
            out = _upoly_mul(out, den)
        return out

    def classical(self) -> RatFunc:
        labels = self.numerator.torus.labels
        num = self.numerator.classical().to_ratfunc()
        xk = RatFunc.symbol(labels[self.k - 1], labels)
        den = RatFunc.constant(0, labels)
        for p, c in self.denominator().items():
            den = den + xk ** p * q_limit(c)
        return num / den


def _upoly_mul(a: Mapping[int, QScalar], b: Mapping[int, QScalar]) -> dict:
    out: dict = {}
    for p, c in a.items():
        for r, s in b.items():
            out[p + r] = out[p + r] + c * s if p + r in out else c * s
    return {p: c for p, c in out.items() if c}


def _upoly_shift(poly: Mapping[int, QScalar], scaled: int, d: int) -> dict:
    """``f(X_k) -> f(q^(scaled/d) X_k)``."""
    return {p: c * QScalar(d, {scaled * p: 1}) for p, c in poly.items()}


def _upoly_element(torus: QTorus, k: int, poly: Mapping[int, QScalar]) -> QTorusElement:
    out = {}
    for p, c in poly.items():
        e = [0] * torus.n
        e[k - 1] = p
        out[tuple(e)] = c
    return QTorusElement(torus, out)


def quantum_images(torus: QTorus, k: int) -> list[ShiftFraction]:
    """Images of the mutated generators ``X'_1 .. X'_n`` in the localised torus."""
    seed = torus.seed
    if not 1 <= k <= seed.m:
        raise SeedError(f"direction {k} is not mutable")
    d = torus.d
    step = d // seed.multipliers[k - 1]  # q_k = q^(1/d_k) = t^step
    out = []
    for i in range(1, torus.n + 1):
        if i == k:
            out.append(ShiftFraction(torus.generator(k, -1), k))
            continue
        e = seed.epsilon(i - 1, k - 1)
        factors = [{0: QScalar.one(d), (-1 if e > 0 else 1): QScalar(d, {(2 * a - 1) * step: 1})} for a in range(1, abs(e) + 1)]
        if e >= 0:
            out.append(ShiftFraction(torus.generator(i), k, factors))
        else:
            num = torus.generator(i)
            for f in factors:
                num = num * _upoly_element(torus, k, f)
            out.append(ShiftFraction(num, k))
    return out


@dataclass
class QuantumCheck:
    ok: bool
    classical_ok: bool
    relations: list = field(default_factory=list)
    counterexample: Optional[tuple] = None

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "classical_limit": self.classical_ok,
            "relations": self.relations,
            "counterexample": None if self.counterexample is None else list(self.counterexample),
        }


def _sigma(torus: QTorus, num: QTorusElement, k: int) -> int:
    """Scaled ``2 a . eps_hat[:, k]``, the same for every term ``X^a`` of ``num``."""
    vals = set()
    for e in num.terms:
        vals.add(sum(e[i] * torus._twist[i][k - 1] for i in range(torus.n)))
    if len(vals) != 1:
        raise ValueError("numerator terms shift X_k differently")
    return vals.pop()


def quantum_mutate_check(torus: QTorus, k: int) -> QuantumCheck:
    """Check the quantum mutation in direction ``k`` against both constraints.

    (a) at ``q = 1`` each image is the classical mutated variable;
    (b) ``X'_i X'_j = q^(2 eps_hat'_ij) X'_j X'_i`` for every pair. With
    ``X'_i = N_i D_i^-1`` and ``N f(X_k) = f(q^(2 s) X_k) N`` the relation
    clears denominators to

        N_i N_j D_j(q^(-2 s_i) X_k) D_i(X_k) = q^(2 eps_hat'_ij) N_j N_i D_i(q^(-2 s_j) X_k) D_j(X_k).
    """
    seed = torus.seed
    d = torus.d
    images = quantum_images(torus, k)
    mutated = mutate(seed.without_variables(), k)
    report = QuantumCheck(True, True)

    xs = RatFunc.symbols(seed.labels)
    start = Seed.initial(seed.epsilon_hat, seed.m, seed.multipliers, seed.labels)
    expected = mutate(start, k).variables
    for i, img in enumerate(images):
        if img.classical() != expected[i]:
            report.ok = report.classical_ok = False
            report.counterexample = (i + 1, i + 1)
            return report

    sig = [_sigma(torus, img.numerator, k) for img in images]
    dens = [img.denominator() for img in images]
    for i in range(torus.n):
        for j in range(i + 1, torus.n):
            ni, nj = images[i].numerator, images[j].numerator
            lhs = ni * nj * _upoly_element(torus, k, _upoly_mul(_upoly_shift(dens[j], -sig[i], d), dens[i]))
            twist = 2 * mutated.epsilon_hat[i][j] * d
            rhs = (
                nj * ni * _upoly_element(torus, k, _upoly_mul(_upoly_shift(dens[i], -sig[j], d), dens[j]))
            ) * QScalar(d, {int(twist): 1})
            good = lhs == rhs
            report.relations.append({"i": i + 1, "j": j + 1, "eps_hat": str(mutated.epsilon_hat[i][j]), "ok": good})
            if not good:
                report.ok = False
                if report.counterexample is None:
                    report.counterexample = (i + 1, j + 1)
    return report

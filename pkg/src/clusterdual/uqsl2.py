"""U_q(sl_2) in PBW normal form and its Chebyshev theta basis.

Relations: ``KE = q^2 EK``, ``KF = q^-2 FK`` and
``EF - FE = (q - q^-1)(K^-1 - K)``. A term ``(a, b, c)`` stands for
``F^a K^b E^c``; coefficients are QScalars with ``d = 2`` so that
``q^(1/2)`` is available for the semiclassical normalisation.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .exact import MultiLaurent, QScalar, q_divide, q_limit

D = 2
ONE = QScalar(D, {0: 1})


def qp(e) -> QScalar:
    """``q^e`` for ``e`` in ``(1/2)Z``."""
    return QScalar.q_power(e, D)


Q = qp(1)
QINV = qp(-1)


class UqElement:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping = ()):
        clean = {}
        for key, c in dict(terms).items():
            a, b, c_ = (int(x) for x in key)
            if a < 0 or c_ < 0:
                raise ValueError("F and E exponents are nonnegative")
            if isinstance(c, int):
                c = QScalar(D, {0: c})
            k = (a, b, c_)
            if k in clean:
                c = clean[k] + c
            if c:
                clean[k] = c.with_d(D) if c.d != D and D % c.d == 0 else c
            else:
                clean.pop(k, None)
        self.terms = clean

    @classmethod
    def monomial(cls, a: int = 0, b: int = 0, c: int = 0, coeff=ONE) -> "UqElement":
        return cls({(a, b, c): coeff})

    @classmethod
    def scalar(cls, s) -> "UqElement":
        return cls({(0, 0, 0): s})

    def __add__(self, other):
        other = _lift(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return UqElement(out)

    __radd__ = __add__

    def __neg__(self):
        return UqElement({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = _lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, QScalar)):
            return UqElement({k: c * other for k, c in self.terms.items()})
        other = _lift(other)
        if other is None:
            return NotImplemented
        return uq_multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, QScalar)):
            return self * other
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            if len(self.terms) == 1:
                ((k, c),) = self.terms.items()
                if k[0] == 0 and k[2] == 0:
                    return UqElement({(0, -k[1], 0): c ** -1}) ** (-n)
            raise ValueError("only K-monomials are inverted")
        out = UqElement.scalar(ONE)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        other = _lift(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((a + c for a, _, c in self.terms), default=-1)

    def to_json(self) -> dict:
        return {f"{a},{b},{c}": str(v) for (a, b, c), v in sorted(self.terms.items())}

    def __repr__(self):
        return f"UqElement({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b, c) in sorted(self.terms, reverse=True):
            mono = []
            for g, x in (("F", a), ("K", b), ("E", c)):
                if x == 1:
                    mono.append(g)
                elif x:
                    mono.append(f"{g}^{x}")
            parts.append(f"({self.terms[(a, b, c)]})" + ("*" + "*".join(mono) if mono else ""))
        return " + ".join(parts)


def _lift(x) -> Optional[UqElement]:
    if isinstance(x, UqElement):
        return x
    if isinstance(x, (int, QScalar)):
        return UqElement.scalar(x)
    return None


E = UqElement.monomial(0, 0, 1)
F = UqElement.monomial(1, 0, 0)
K = UqElement.monomial(0, 1, 0)
KINV = UqElement.monomial(0, -1, 0)


# ---------------------------------------------------------------------------
# rewriting


def _left_E(terms: Mapping) -> dict:
    """``E * x`` for ``x`` given by normal-ordered terms."""
    out: dict = {}

    def add(k, c):
        if k in out:
            c = out[k] + c
        if c:
            out[k] = c
        else:
            out.pop(k, None)

    qq = Q - QINV
    for (a, b, c), coeff in terms.items():
        # E F^a = F^a E + (q - q^-1) F^(a-1) sum_j (q^(2(a-1-j)) K^-1 - q^(-2(a-1-j)) K)
        # and E K^b = q^(-2b) K^b E
        add((a, b, c + 1), coeff * qp(-2 * b))
        if a:
            pos = QScalar(D, {})
            neg = QScalar(D, {})
            for j in range(a):
                pos = pos + qp(2 * (a - 1 - j))
                neg = neg + qp(-2 * (a - 1 - j))
            add((a - 1, b - 1, c), coeff * qq * pos)
            add((a - 1, b + 1, c), -(coeff * qq * neg))
    return out


def _left_K(terms: Mapping, s: int) -> dict:
    # K^s F^a = q^(-2sa) F^a K^s
    return {(a, b + s, c): coeff * qp(-2 * s * a) for (a, b, c), coeff in terms.items()}


def _left_F(terms: Mapping, r: int) -> dict:
    return {(a + r, b, c): coeff for (a, b, c), coeff in terms.items()}


def uq_multiply(x: UqElement, y: UqElement) -> UqElement:
    """Product in normal form."""
    out: dict = {}
    # group x by E-power so each E^c * y is computed once
    e_powers: dict[int, dict] = {0: dict(y.terms)}
    for (a, b, c), coeff in x.terms.items():
        for t in range(max(e_powers) + 1, c + 1):
            e_powers[t] = _left_E(e_powers[t - 1])
        part = _left_F(_left_K(e_powers[c], b), a)
        for k, v in part.items():
            v = coeff * v
            out[k] = out[k] + v if k in out else v
    return UqElement(out)


# ---------------------------------------------------------------------------
# Casimir, Chebyshev and the theta basis


def casimir() -> UqElement:
    """``C = EF - q K^-1 - q^-1 K``."""
    return E * F - KINV * Q - K * QINV


def chebyshev(n: int) -> list[int]:
    """Coefficients (constant term first) of ``T_n``.

    ``T_0 = 1`` and ``T_n(t + 1/t) = t^n + t^-n`` for ``n > 0``, so
    ``T_1 = x``, ``T_2 = x^2 - 2`` and ``T_(n+1) = x T_n - T_(n-1)`` from
    ``n = 2`` on. (The recursion does not reach back to ``T_0 = 1``.)
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return [1]
    prev, cur = [2], [0, 1]
    for _ in range(n - 1):
        nxt = [0] + cur
        for i, v in enumerate(prev):
            nxt[i] -= v
        prev, cur = cur, nxt
    return cur


_cheb_cache: dict[int, UqElement] = {}


def chebyshev_casimir(n: int) -> UqElement:
    """``T_n(C)`` in the algebra."""
    if n not in _cheb_cache:
        if n == 0:
            _cheb_cache[0] = UqElement.scalar(ONE)
        elif n == 1:
            _cheb_cache[1] = casimir()
        elif n == 2:
            _cheb_cache[2] = casimir() * casimir() - UqElement.scalar(QScalar(D, {0: 2}))
        else:
            _cheb_cache[n] = casimir() * chebyshev_casimir(n - 1) - chebyshev_casimir(n - 2)
    return _cheb_cache[n]


@dataclass(frozen=True, order=True)
class ThetaIndex:
    """``family`` is ``"E"`` (l >= 0, m in Z, n >= 0) or ``"F"`` (l in Z, m > 0, n >= 0)."""

    family: str
    l: int
    m: int
    n: int

    def __post_init__(self):
        if self.family == "E":
            ok = self.l >= 0 and self.n >= 0
        elif self.family == "F":
            ok = self.m > 0 and self.n >= 0
        else:
            ok = False
        if not ok:
            raise ValueError(f"invalid theta index {self}")

    def size(self) -> int:
        return abs(self.l) + abs(self.m) + self.n

    def leading(self) -> tuple[int, int, int]:
        """PBW exponents of the leading term."""
        if self.family == "E":
            return (self.n, self.m, self.n + self.l)
        return (self.m + self.n, self.l, self.n)

    @classmethod
    def from_leading(cls, a: int, b: int, c: int) -> "ThetaIndex":
        if c >= a:
            return cls("E", c - a, b, a)
        return cls("F", b, a - c, c)

    def __str__(self):
        return f"{self.family}({self.l},{self.m},{self.n})"


def theta_element(idx: ThetaIndex) -> UqElement:
    """``q^(lm) E^l K^m T_n(C)`` or ``q^(ml) K^l F^m T_n(C)``."""
    t = chebyshev_casimir(idx.n)
    if idx.family == "E":
        head = UqElement.monomial(0, 0, idx.l) * UqElement.monomial(0, idx.m, 0)
    else:
        head = UqElement.monomial(0, idx.l, 0) * UqElement.monomial(idx.m, 0, 0)
    return head * t * qp(idx.l * idx.m)


def theta_indices(max_size: int) -> list[ThetaIndex]:
    """All indices with ``|l| + |m| + n <= max_size``."""
    out = []
    for n in range(max_size + 1):
        for l in range(-max_size, max_size + 1):
            for m in range(-max_size, max_size + 1):
                if abs(l) + abs(m) + n > max_size:
                    continue
                if l >= 0:
                    out.append(ThetaIndex("E", l, m, n))
                if m > 0:
                    out.append(ThetaIndex("F", l, m, n))
    return sorted(set(out))


class ExpansionError(ValueError):
    pass


def expand_in_theta(x: UqElement, bound: Optional[int] = None) -> dict[ThetaIndex, QScalar]:
    """Coefficients of ``x`` in the theta basis.

    The change of basis is triangular for the total degree ``a + c`` with
    unit q-power leading coefficients, so peeling off the leading terms
    solves it exactly. ``bound`` caps the degree handled.
    """
    if bound is not None and x.degree() > bound:
        raise ExpansionError(f"degree {x.degree()} exceeds the bound {bound}")
    rest = dict(x.terms)
    out: dict[ThetaIndex, QScalar] = {}
    while rest:
        key = max(rest, key=lambda k: (k[0] + k[2], k))
        idx = ThetaIndex.from_leading(*key)
        th = theta_element(idx)
        lead = th.terms.get(key)
        if lead is None or not lead.is_unit_monomial():
            raise ExpansionError(f"leading coefficient of {idx} is not a unit q-power")
        lower = [k[0] + k[2] for k in th.terms if k != key]
        if lower and max(lower) >= key[0] + key[2]:
            raise ExpansionError(f"{idx} is not triangular")
        coeff = q_divide(rest[key], lead)
        if coeff is None:
            raise ExpansionError(f"{rest[key]} is not divisible by {lead}")
        out[idx] = out[idx] + coeff if idx in out else coeff
        for k, v in th.terms.items():
            v = rest[k] - coeff * v if k in rest else -(coeff * v)
            if v:
                rest[k] = v
            else:
                rest.pop(k, None)
    return {k: v for k, v in out.items() if v}


def expansion_json(expansion: Mapping[ThetaIndex, QScalar]) -> dict:
    return {str(k): str(v) for k, v in sorted(expansion.items())}


# ---------------------------------------------------------------------------
# semiclassical limit

SL2_LABELS = ("e", "f", "k")


def semiclassical_sl2(x: UqElement) -> MultiLaurent:
    """Set ``q^(1/2) = 1``: ``F^a K^b E^c`` becomes ``e^c f^a k^b``."""
    return MultiLaurent(SL2_LABELS, {(c, a, b): q_limit(v) for (a, b, c), v in x.terms.items()})


def sl2_bracket(x: UqElement, y: UqElement) -> MultiLaurent:
    """``[x, y] / (2 (q^(1/2) - 1))`` at ``q = 1``."""
    comm = x * y - y * x
    step = QScalar(D, {1: 1, 0: -1})
    out = {}
    for (a, b, c), v in comm.terms.items():
        quo = q_divide(v, step)
        if quo is None:
            raise ArithmeticError(f"commutator coefficient {v} is not divisible by q^(1/2) - 1")
        out[(c, a, b)] = q_limit(quo) / 2
    return MultiLaurent(SL2_LABELS, out)


# ---------------------------------------------------------------------------
# expression parsing


def parse_expr(text: str) -> UqElement:
    """Parse sums and products of ``E``, ``F``, ``K``, ``q`` and integers.

    ``^`` and ``**`` both mean powers; ``q`` may carry half-integer powers
    such as ``q^(1/2)``.
    """
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse {text!r}: {exc.msg}") from None

    gens = {"E": E, "F": F, "K": K}

    def number(node) -> Fraction:
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Fraction(node.value)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = number(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Div):
            return number(node.left) / number(node.right)
        raise ValueError(f"expected a number in {text!r}")

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return UqElement.scalar(QScalar(D, {0: node.value}))
        if isinstance(node, ast.Name):
            if node.id in gens:
                return gens[node.id]
            if node.id == "q":
                return UqElement.scalar(Q)
            raise ValueError(f"unknown symbol {node.id!r}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                exp = number(node.right)
                if isinstance(node.left, ast.Name) and node.left.id == "q":
                    return UqElement.scalar(qp(exp))
                if exp.denominator != 1:
                    raise ValueError("only q takes fractional powers")
                return walk(node.left) ** int(exp)
            left, right = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
        raise ValueError(f"unsupported syntax in {text!r}")

    return walk(tree)

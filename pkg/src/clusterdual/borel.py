"""Borel pairs in type A: Gauss decomposition, pinning data and the braid action.

Matrices are lists of rows whose entries are Fractions or RatFuncs. Both
support the field operations through the usual operators, so the helpers
below are written once for either.

Groups come in two modes. ``"SL"`` matrices are taken literally. ``"PGL"``
matrices are representatives normalised so that the last diagonal entry is
1, which is how triangular elements are printed in the worked PGL_3 example.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .exact import RatFunc, as_fraction

Matrix = list  # list of rows

SL = "SL"
PGL = "PGL"


class NotInBigCell(ValueError):
    """The matrix has no decomposition ``U+ H U-``."""


class TriangularityError(AssertionError):
    """A braid move left ``B+ x B-``; signals a convention mismatch."""


# ---------------------------------------------------------------------------
# small exact matrix helpers


def _zero(x) -> bool:
    if isinstance(x, RatFunc):
        return x.is_zero()
    return x == 0


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def mat(rows) -> Matrix:
    """Copy ``rows`` into a matrix, turning plain numbers into Fractions."""
    return [[x if isinstance(x, RatFunc) else as_fraction(x) for x in row] for row in rows]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            s = Fraction(0)
            for t in range(k):
                if not _zero(a[i][t]) and not _zero(b[t][j]):
                    s = s + a[i][t] * b[t][j]
            row.append(s)
        out.append(row)
    return out


def mat_prod(*ms: Matrix) -> Matrix:
    out = ms[0]
    for m in ms[1:]:
        out = matmul(out, m)
    return out


def mat_eq(a: Matrix, b: Matrix) -> bool:
    return all(_zero(x - y) for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def mat_scale(a: Matrix, c) -> Matrix:
    return [[x * c for x in row] for row in a]


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def transpose(a: Matrix) -> Matrix:
    return [list(c) for c in zip(*a)]


def diagonal(a: Matrix) -> list:
    return [a[i][i] for i in range(len(a))]


def diag(entries: Sequence) -> Matrix:
    n = len(entries)
    out = identity(n)
    for i, x in enumerate(entries):
        out[i][i] = x
    return out


def determinant(a: Matrix):
    """Fraction-free enough for our sizes: plain elimination with pivot search."""
    m = [row[:] for row in a]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if not _zero(m[r][c])), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det = det * m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            if not _zero(m[r][c]):
                f = m[r][c] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    m = [list(row) + identity(n)[i] for i, row in enumerate(a)]
    for c in range(n):
        p = next((r for r in range(c, n) if not _zero(m[r][c])), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[p] = m[p], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and not _zero(m[r][c]):
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank over the rationals."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    rk, cols = 0, len(m[0])
    for c in range(cols):
        p = next((r for r in range(rk, len(m)) if m[r][c] != 0), None)
        if p is None:
            continue
        m[rk], m[p] = m[p], m[rk]
        for r in range(rk + 1, len(m)):
            if m[r][c] != 0:
                f = m[r][c] / m[rk][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[rk])]
        rk += 1
    return rk


def is_upper(a: Matrix) -> bool:
    return all(_zero(a[i][j]) for i in range(len(a)) for j in range(i))


def is_lower(a: Matrix) -> bool:
    return is_upper(transpose(a))


def mat_str(a: Matrix) -> list[list[str]]:
    return [[str(x) for x in row] for row in a]


# ---------------------------------------------------------------------------
# Gauss decomposition and pinning


def gauss_decompose(g: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """``g = [g]_+ [g]_0 [g]_-`` with unipotent upper, diagonal, unipotent lower factors.

    Such a factorisation exists iff every trailing principal minor (lower
    right corner) is nonzero: reversing rows and columns turns it into the
    usual LDU factorisation. Raises :class:`NotInBigCell` otherwise.
    """
    n = len(g)
    # reversed matrix, then L D U by elimination without pivoting
    r = [[g[n - 1 - i][n - 1 - j] for j in range(n)] for i in range(n)]
    low = identity(n)
    work = [row[:] for row in r]
    for c in range(n):
        if _zero(work[c][c]):
            raise NotInBigCell(f"trailing principal minor of size {c + 1} vanishes")
        for i in range(c + 1, n):
            if not _zero(work[i][c]):
                f = work[i][c] / work[c][c]
                low[i][c] = f
                work[i] = [x - f * y for x, y in zip(work[i], work[c])]
    dvals = [work[i][i] for i in range(n)]
    up = [[work[i][j] / dvals[i] if j > i else Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def rev(a):
        return [[a[n - 1 - i][n - 1 - j] for j in range(n)] for i in range(n)]

    # rev(low) is unipotent upper, rev(up) unipotent lower
    return rev(low), diag(dvals[::-1]), rev(up)


def pi_B(b: Matrix) -> Matrix:
    """Projection of a Borel element onto the Cartan: its diagonal part."""
    return diag(diagonal(b))


def _check_index(i: int, n: int):
    if not 1 <= i <= n - 1:
        raise IndexError(f"simple root index {i} out of range 1..{n - 1}")


def unipotent_part_upper(b1: Matrix) -> Matrix:
    """``[b1]_+`` for upper triangular ``b1 = [b1]_+ [b1]_0``."""
    d = diagonal(b1)
    return [[b1[i][j] / d[j] for j in range(len(b1))] for i in range(len(b1))]


def unipotent_part_lower(b2: Matrix) -> Matrix:
    """``[b2]_-`` for lower triangular ``b2 = [b2]_0 [b2]_-``."""
    d = diagonal(b2)
    return [[b2[i][j] / d[i] for j in range(len(b2))] for i in range(len(b2))]


def chi(i: int, b1: Matrix):
    """Additive character ``chi_i`` of ``[b1]_+``: its entry ``(i, i+1)``."""
    _check_index(i, len(b1))
    return b1[i - 1][i] / b1[i][i]


def chi_minus(i: int, b2: Matrix):
    """``chi_i^-`` of ``[b2]_-``: its entry ``(i+1, i)``."""
    _check_index(i, len(b2))
    return b2[i][i - 1] / b2[i][i]


def gamma_embed(i: int, block: Matrix, n: int) -> Matrix:
    """Place a 2x2 block at rows and columns ``i, i+1`` (1-based)."""
    _check_index(i, n)
    out = identity(n)
    for a in range(2):
        for b in range(2):
            out[i - 1 + a][i - 1 + b] = block[a][b]
    return out


def simple_root(i: int, h: Matrix):
    """``alpha_i(h) = h_i / h_{i+1}``."""
    _check_index(i, len(h))
    return h[i - 1][i - 1] / h[i][i]


def x_elem(i: int, a, n: int) -> Matrix:
    return gamma_embed(i, [[Fraction(1), a], [Fraction(0), Fraction(1)]], n)


def y_elem(i: int, b, n: int) -> Matrix:
    return gamma_embed(i, [[Fraction(1), Fraction(0)], [b, Fraction(1)]], n)


# ---------------------------------------------------------------------------
# Borel pairs


@dataclass(frozen=True)
class BorelPair:
    b1: Matrix
    b2: Matrix
    mode: str = SL

    def __post_init__(self):
        if self.mode not in (SL, PGL):
            raise ValueError(f"unknown group mode {self.mode!r}")
        if not is_upper(self.b1):
            raise TriangularityError("b1 is not upper triangular")
        if not is_lower(self.b2):
            raise TriangularityError("b2 is not lower triangular")

    @property
    def n(self) -> int:
        return len(self.b1)

    def normalised(self) -> "BorelPair":
        if self.mode == SL:
            return self
        return BorelPair(_pgl_normalise(self.b1), _pgl_normalise(self.b2), PGL)

    def __eq__(self, other):
        if not isinstance(other, BorelPair):
            return NotImplemented
        a, b = self.normalised(), other.normalised()
        return a.mode == b.mode and mat_eq(a.b1, b.b1) and mat_eq(a.b2, b.b2)

    def to_json(self) -> dict:
        return {"group": f"{self.mode.lower()}{self.n}", "b1": mat_str(self.b1), "b2": mat_str(self.b2)}


def _pgl_normalise(m: Matrix) -> Matrix:
    c = m[-1][-1]
    return mat_scale(m, 1 / c)


def tau(p: BorelPair) -> Matrix:
    """Outer monodromy ``pi(b1) pi(b2)``; in PGL mode scaled to end in 1."""
    t = matmul(pi_B(p.b1), pi_B(p.b2))
    return _pgl_normalise(t) if p.mode == PGL else t


def in_dual_group(p: BorelPair) -> bool:
    return mat_eq(tau(p), identity(p.n))


def weyl_swap(h: Matrix, i: int, mode: str = SL) -> Matrix:
    """Action of the simple reflection ``s_i`` on a diagonal matrix."""
    d = diagonal(h)
    d[i - 1], d[i] = d[i], d[i - 1]
    out = diag(d)
    return _pgl_normalise(out) if mode == PGL else out


def braid_sigma(i: int, p: BorelPair) -> BorelPair:
    """``(b1, b2) -> (t1 b1 t2, t1 b2 t2)``."""
    n = p.n
    _check_index(i, n)
    c1 = chi(i, p.b1)
    c2 = chi_minus(i, p.b2)
    t1 = gamma_embed(i, [[Fraction(0), Fraction(1)], [Fraction(-1), c1]], n)
    t2 = gamma_embed(i, [[Fraction(0), Fraction(-1)], [Fraction(1), c2]], n)
    b1 = mat_prod(t1, p.b1, t2)
    b2 = mat_prod(t1, p.b2, t2)
    if not is_upper(b1) or not is_lower(b2):
        raise TriangularityError(f"sigma_{i} left B+ x B-")
    return BorelPair(b1, b2, p.mode).normalised()


def braid_word(word: Iterable[int], p: BorelPair) -> BorelPair:
    """Apply ``sigma_{w_1}`` first, then ``sigma_{w_2}``, and so on."""
    for i in word:
        p = braid_sigma(i, p)
    return p


def flag_membership(p: BorelPair, u: Matrix) -> bool:
    """Whether ``b1 b2^-1`` lies in the Borel ``u B+ u^-1``."""
    if _zero(determinant(u)):
        raise ZeroDivisionError("flag representative is singular")
    m = mat_prod(inverse(u), p.b1, inverse(p.b2), u)
    return is_upper(m)


# ---------------------------------------------------------------------------
# regularity and the Manin triple


def centralizer_dim(g: Matrix) -> int:
    """Dimension of ``{X traceless : gX = Xg}`` by exact linear algebra."""
    n = len(g)
    g = mat(g)
    rows = []
    # unknown X_ab sits at column a*n + b
    for i in range(n):
        for j in range(n):
            row = [Fraction(0)] * (n * n)
            for t in range(n):
                row[t * n + j] += g[i][t]  # (gX)_ij
                row[i * n + t] -= g[t][j]  # (Xg)_ij
            rows.append(row)
    rows.append([Fraction(int(a == b)) for a in range(n) for b in range(n)])
    return n * n - rank(rows)


def is_regular(g: Matrix) -> tuple[bool, int]:
    dim = centralizer_dim(g)
    return dim == len(g) - 1, dim


def trace(a: Matrix):
    return sum((a[i][i] for i in range(len(a))), Fraction(0))


def trace_form(x: Matrix, y: Matrix):
    return trace(matmul(x, y))


def double_pairing(x: Matrix, y: Matrix, x2: Matrix, y2: Matrix):
    """``<(x, y), (x2, y2)> = B(x, x2) - B(y, y2)`` with ``B`` the trace form."""
    return trace_form(x, x2) - trace_form(y, y2)


def in_p_plus(x: Matrix, y: Matrix) -> bool:
    """The diagonal copy of the Lie algebra."""
    return mat_eq(x, y)


def in_p_minus(x: Matrix, y: Matrix) -> bool:
    """``x`` upper, ``y`` lower, and the Cartan part of ``x + y`` vanishes."""
    return is_upper(x) and is_lower(y) and all(_zero(x[i][i] + y[i][i]) for i in range(len(x)))


@dataclass
class ManinReport:
    pairing: Fraction
    first_in_p_plus: bool
    second_in_p_plus: bool
    first_in_p_minus: bool
    second_in_p_minus: bool

    @property
    def isotropy_ok(self) -> bool:
        # pairs from the same subalgebra must pair to zero
        same = (self.first_in_p_plus and self.second_in_p_plus) or (
            self.first_in_p_minus and self.second_in_p_minus
        )
        return not same or self.pairing == 0


def manin_checks(x1: Matrix, y1: Matrix, x2: Matrix, y2: Matrix) -> ManinReport:
    for m in (x1, y1, x2, y2):
        if trace(m) != 0:
            raise ValueError("Lie algebra elements must be traceless")
    return ManinReport(
        double_pairing(x1, y1, x2, y2),
        in_p_plus(x1, y1),
        in_p_plus(x2, y2),
        in_p_minus(x1, y1),
        in_p_minus(x2, y2),
    )


def sl_basis(n: int) -> list[Matrix]:
    """Elementary matrices ``E_ij`` (i != j) and ``E_ii - E_{i+1,i+1}``."""
    out = []
    for i in range(n):
        for j in range(n):
            if i != j:
                m = [[Fraction(0)] * n for _ in range(n)]
                m[i][j] = Fraction(1)
                out.append(m)
    for i in range(n - 1):
        m = [[Fraction(0)] * n for _ in range(n)]
        m[i][i], m[i + 1][i + 1] = Fraction(1), Fraction(-1)
        out.append(m)
    return out


def double_gram(n: int) -> Matrix:
    """Gram matrix of the pairing on the basis ``(b, 0), (0, b)`` of the double."""
    zero = [[Fraction(0)] * n for _ in range(n)]
    basis = [(b, zero) for b in sl_basis(n)] + [(zero, b) for b in sl_basis(n)]
    return [[double_pairing(x, y, x2, y2) for (x2, y2) in basis] for (x, y) in basis]


# ---------------------------------------------------------------------------
# samplers used by the checks


def _rand_q(rng: random.Random, lo: int = -5, hi: int = 5, nonzero: bool = False) -> Fraction:
    while True:
        v = Fraction(rng.randint(lo, hi), rng.randint(1, 3))
        if v or not nonzero:
            return v


def random_borel_pair(rng: random.Random, n: int, mode: str = SL) -> BorelPair:
    """Random ``(u1 h1, h2 u2)`` with rational entries.

    SL mode keeps both diagonals of determinant 1; PGL mode normalises the
    last diagonal entries to 1.
    """
    def diag_part():
        d = [_rand_q(rng, nonzero=True) for _ in range(n - 1)]
        last = Fraction(1)
        for x in d:
            last /= x
        return d + [last]

    u1, u2 = identity(n), identity(n)
    for i in range(n):
        for j in range(i + 1, n):
            u1[i][j] = _rand_q(rng)
            u2[j][i] = _rand_q(rng)
    b1 = matmul(u1, diag(diag_part()))
    b2 = matmul(diag(diag_part()), u2)
    return BorelPair(b1, b2, mode).normalised()


def random_dual_pair(rng: random.Random, n: int, mode: str = SL) -> BorelPair:
    """Random pair ``(u1 h, h^-1 u2)`` with ``tau = e``."""
    p = random_borel_pair(rng, n, mode)
    h = diagonal(p.b1)
    u2 = unipotent_part_lower(p.b2)
    b2 = matmul(diag([1 / x for x in h]), u2)
    return BorelPair(p.b1, b2, mode)

"""Seeds, mutation and the log-canonical Poisson bracket.

Vertex indices in the public API are 1-based (``mutate(s, 1)`` mutates the
first vertex) because mutation sequences are conventionally written that
way. Permutations are 0-based tuples.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Optional, Sequence

from .exact import RatFunc, as_fraction, fraction_str


class SeedError(ValueError):
    pass


def sgn(x) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True, eq=False)
class Seed:
    """Exchange data plus (optionally) the current chart.

    ``epsilon_hat`` is the full n x n skew-symmetric matrix; vertices
    ``1..m`` are mutable and carry ``multipliers``. ``variables[i]`` is the
    i-th current chart variable written in the initial chart (whose
    coordinates are named by ``labels``). ``variables`` may be ``None`` for
    purely combinatorial work.
    """

    m: int
    multipliers: tuple[int, ...]
    epsilon_hat: tuple[tuple[Fraction, ...], ...]
    labels: tuple[str, ...]
    variables: Optional[tuple[RatFunc, ...]] = field(default=None)

    def __post_init__(self):
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise SeedError("labels must be distinct")
        if not 0 <= self.m <= n:
            raise SeedError("mutable count out of range")
        if len(self.multipliers) != self.m:
            raise SeedError("need one multiplier per mutable vertex")
        if any(int(d) != d or d < 1 for d in self.multipliers):
            raise SeedError("multipliers must be positive integers")
        eps = self.epsilon_hat
        if len(eps) != n or any(len(row) != n for row in eps):
            raise SeedError("epsilon_hat must be n x n")
        for i in range(n):
            for j in range(n):
                if eps[i][j] != -eps[j][i]:
                    raise SeedError(f"epsilon_hat not skew-symmetric at ({i + 1}, {j + 1})")
            for k in range(self.m):
                if (eps[i][k] * self.multipliers[k]).denominator != 1:
                    raise SeedError(
                        f"epsilon_hat[{i + 1}][{k + 1}] * d_{k + 1} is not an integer"
                    )
        if self.variables is not None and len(self.variables) != n:
            raise SeedError("need one variable per vertex")

    # -- construction -----------------------------------------------------

    @classmethod
    def _trusted(cls, m, multipliers, epsilon_hat, labels, variables=None) -> "Seed":
        # skips validation; only for data produced by mutation of a valid seed
        self = object.__new__(cls)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "multipliers", multipliers)
        object.__setattr__(self, "epsilon_hat", epsilon_hat)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "variables", variables)
        return self

    @classmethod
    def initial(
        cls,
        epsilon_hat: Sequence[Sequence],
        m: Optional[int] = None,
        multipliers: Optional[Sequence[int]] = None,
        labels: Optional[Sequence[str]] = None,
        track_variables: bool = True,
    ) -> "Seed":
        """Seed whose chart is the identity chart on ``labels``."""
        n = len(epsilon_hat)
        m = n if m is None else m
        multipliers = tuple(multipliers) if multipliers is not None else (1,) * m
        labels = tuple(labels) if labels is not None else tuple(f"x{i + 1}" for i in range(n))
        eps = tuple(tuple(as_fraction(v) for v in row) for row in epsilon_hat)
        variables = tuple(RatFunc.symbols(labels)) if track_variables else None
        return cls(m, tuple(int(d) for d in multipliers), eps, labels, variables)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def frozen(self) -> tuple[int, ...]:
        """1-based indices of frozen vertices."""
        return tuple(range(self.m + 1, self.n + 1))

    def epsilon(self, i: int, k: int) -> int:
        """Integer exchange entry ``eps_ik = eps_hat_ik * d_k`` (0-based, k mutable)."""
        value = self.epsilon_hat[i][k] * self.multipliers[k]
        return int(value)

    def exchange_matrix(self) -> list[list[int]]:
        """The n x m integer exchange matrix."""
        return [[self.epsilon(i, k) for k in range(self.m)] for i in range(self.n)]

    @property
    def variable_map(self) -> dict[str, RatFunc]:
        if self.variables is None:
            raise SeedError("this seed does not track variables")
        return dict(zip(self.labels, self.variables))

    def without_variables(self) -> "Seed":
        return Seed._trusted(self.m, self.multipliers, self.epsilon_hat, self.labels, None)

    def principal_part(self) -> "Seed":
        """The seed restricted to its mutable vertices."""
        eps = tuple(row[: self.m] for row in self.epsilon_hat[: self.m])
        return Seed._trusted(self.m, self.multipliers, eps, self.labels[: self.m], None)

    def permuted(self, perm: Sequence[int]) -> "Seed":
        """Vertex ``i`` of the result is vertex ``perm[i]`` of ``self`` (0-based).

        Labels name the initial-chart coordinates and stay where they are;
        exchange data, multipliers and chart variables move.
        """
        perm = tuple(perm)
        if sorted(perm) != list(range(self.n)):
            raise SeedError("not a permutation")
        if any((perm[i] < self.m) != (i < self.m) for i in range(self.n)):
            raise SeedError("permutation must keep mutable vertices first")
        eps = tuple(tuple(self.epsilon_hat[perm[i]][perm[j]] for j in range(self.n)) for i in range(self.n))
        mult = tuple(self.multipliers[perm[i]] for i in range(self.m))
        variables = None if self.variables is None else tuple(self.variables[p] for p in perm)
        return Seed(self.m, mult, eps, self.labels, variables)

    # -- equality ---------------------------------------------------------

    def _normalised(self):
        order = sorted(range(self.n), key=lambda i: (i >= self.m, self.labels[i]))
        if order == list(range(self.n)):
            return self
        p = self.permuted(order)
        return Seed(p.m, p.multipliers, p.epsilon_hat, tuple(self.labels[i] for i in order), p.variables)

    def __eq__(self, other):
        if not isinstance(other, Seed):
            return NotImplemented
        if set(self.labels) != set(other.labels) or self.m != other.m:
            return False
        a, b = self._normalised(), other._normalised()
        return (
            a.labels == b.labels
            and a.multipliers == b.multipliers
            and a.epsilon_hat == b.epsilon_hat
            and a.variables == b.variables
        )

    def __hash__(self):
        a = self._normalised()
        return hash((a.m, a.multipliers, a.epsilon_hat, a.labels))

    # -- serialisation ----------------------------------------------------

    def to_json(self, include_variables: bool = True) -> dict:
        data = {
            "n": self.n,
            "m": self.m,
            "multipliers": list(self.multipliers),
            "epsilon_hat": [[fraction_str(v) for v in row] for row in self.epsilon_hat],
            "labels": list(self.labels),
            "frozen": list(self.labels[self.m:]),
        }
        if include_variables and self.variables is not None:
            data["variables"] = {lab: str(v) for lab, v in zip(self.labels, self.variables)}
        return data

    @classmethod
    def from_json(cls, data: Mapping, track_variables: bool = True) -> "Seed":
        eps = data["epsilon_hat"]
        n = int(data.get("n", len(eps)))
        if len(eps) != n:
            raise SeedError("n does not match epsilon_hat")
        m = int(data.get("m", n))
        labels = data.get("labels") or [f"x{i + 1}" for i in range(n)]
        if "frozen" in data and list(data["frozen"]) != list(labels[m:]):
            raise SeedError("'frozen' must list exactly the last n - m labels")
        return cls.initial(eps, m, data.get("multipliers"), labels, track_variables)

    @classmethod
    def loads(cls, text: str, track_variables: bool = True) -> "Seed":
        return cls.from_json(json.loads(text), track_variables)

    def __repr__(self):
        rows = ", ".join("[" + " ".join(fraction_str(v) for v in row) + "]" for row in self.epsilon_hat)
        return f"Seed(m={self.m}, d={list(self.multipliers)}, labels={list(self.labels)}, eps_hat=[{rows}])"


# ---------------------------------------------------------------------------
# mutation


def mutate_matrix(eps: Sequence[Sequence[Fraction]], k: int, dk: int) -> tuple[tuple[Fraction, ...], ...]:
    """Mutate the full eps_hat matrix in direction ``k`` (0-based) with multiplier ``dk``."""
    n = len(eps)
    new = [list(row) for row in eps]
    col = [i for i in range(n) if eps[i][k]]
    row = [j for j in range(n) if eps[k][j]]
    for i in col:
        if i == k:
            continue
        a = eps[i][k]
        for j in row:
            if j == k:
                continue
            b = eps[k][j]
            if (a > 0) == (b > 0):
                # (|a| b + a |b|) / 2 is a*b*sign when signs agree, 0 otherwise
                new[i][j] = eps[i][j] + dk * a * (b if a > 0 else -b)
    for j in range(n):
        new[k][j] = -eps[k][j]
        new[j][k] = -eps[j][k]
    return tuple(tuple(r) for r in new)


def mutated_variables(seed: Seed, k: int, xs: Sequence[RatFunc]) -> list[RatFunc]:
    """Apply the chart-change formula of direction ``k`` (0-based) to values ``xs``."""
    xk = xs[k]
    out = []
    for i, xi in enumerate(xs):
        if i == k:
            out.append(1 / xk)
            continue
        e = seed.epsilon(i, k)
        if e == 0:
            out.append(xi)
        else:
            out.append(xi * (1 + xk ** (-sgn(e))) ** (-e))
    return out


def mutate(seed: Seed, k: int) -> Seed:
    """Seed mutation in direction ``k`` (1-based, must be mutable)."""
    if not isinstance(k, int) or not 1 <= k <= seed.n:
        raise SeedError(f"direction {k} out of range 1..{seed.n}")
    if k > seed.m:
        raise SeedError(f"direction {k} is frozen")
    k0 = k - 1
    eps = mutate_matrix(seed.epsilon_hat, k0, seed.multipliers[k0])
    variables = None
    if seed.variables is not None:
        variables = tuple(mutated_variables(seed, k0, seed.variables))
    return Seed._trusted(seed.m, seed.multipliers, eps, seed.labels, variables)


def apply_sequence(seed: Seed, sequence: Iterable[int]) -> Seed:
    """Mutate left to right along ``sequence``."""
    for k in sequence:
        seed = mutate(seed, k)
    return seed


def chart_change(seed: Seed, k: int) -> dict[str, RatFunc]:
    """Images of ``seed``'s own chart coordinates under mutation at ``k`` (1-based).

    The result sends each label to the corresponding coordinate of the
    adjacent chart written in the coordinates of ``seed``'s chart, both
    named by ``seed.labels``.
    """
    if not 1 <= k <= seed.m:
        raise SeedError(f"direction {k} is not mutable")
    xs = RatFunc.symbols(seed.labels)
    return dict(zip(seed.labels, mutated_variables(seed, k - 1, xs)))


# ---------------------------------------------------------------------------
# Poisson bracket


def poisson_bracket(f, g, seed: Seed) -> RatFunc:
    """``{f, g}`` for the bracket ``{x_i, x_j} = 2 eps_hat_ij x_i x_j`` of ``seed``'s chart."""
    f = f if isinstance(f, RatFunc) else RatFunc.constant(f, seed.labels)
    g = g if isinstance(g, RatFunc) else RatFunc.constant(g, seed.labels)
    xs = RatFunc.symbols(seed.labels)
    df = [f.diff(lab) for lab in seed.labels]
    dg = [g.diff(lab) for lab in seed.labels]
    total = RatFunc.constant(0, seed.labels)
    for i in range(seed.n):
        if df[i].is_zero():
            continue
        for j in range(seed.n):
            e = seed.epsilon_hat[i][j]
            if e and not dg[j].is_zero():
                total = total + (2 * e) * xs[i] * xs[j] * df[i] * dg[j]
    return total


# ---------------------------------------------------------------------------
# isomorphism


def seed_isomorphic(
    a: Seed,
    b: Seed,
    fixed: Iterable[int] = (),
    match_variables: bool = False,
) -> Optional[tuple[int, ...]]:
    """Find ``perm`` with ``b.permuted(perm)`` matching ``a``'s exchange data.

    The permutation preserves mutability and multipliers; vertices listed
    in ``fixed`` (0-based) map to themselves. With ``match_variables`` the
    chart variables must agree as well. Returns ``None`` if no such
    permutation exists.
    """
    if a.n != b.n or a.m != b.m:
        return None
    n, m = a.n, a.m
    fixed = set(fixed)
    ea, eb = a.epsilon_hat, b.epsilon_hat

    def signature(s: Seed, i: int):
        return (i < s.m, s.multipliers[i] if i < s.m else 0, tuple(sorted(s.epsilon_hat[i])))

    sig_a = [signature(a, i) for i in range(n)]
    sig_b = [signature(b, i) for i in range(n)]
    if sorted(sig_a) != sorted(sig_b):
        return None
    if match_variables:
        if a.variables is None or b.variables is None:
            raise SeedError("variables not tracked")
        if set(a.variables) != set(b.variables):
            return None
    candidates = []
    for i in range(n):
        if i in fixed:
            cands = [i] if sig_a[i] == sig_b[i] else []
        else:
            cands = [j for j in range(n) if sig_b[j] == sig_a[i] and j not in fixed]
            if match_variables:
                cands = [j for j in cands if b.variables[j] == a.variables[i]]
        if not cands:
            return None
        candidates.append(cands)
    order = sorted(range(n), key=lambda i: len(candidates[i]))
    perm = [-1] * n
    used = [False] * n

    def extend(pos: int) -> bool:
        if pos == n:
            return True
        i = order[pos]
        for j in candidates[i]:
            if used[j]:
                continue
            ok = True
            for prev in order[:pos]:
                pj = perm[prev]
                if ea[i][prev] != eb[j][pj]:
                    ok = False
                    break
            if not ok:
                continue
            perm[i] = j
            used[j] = True
            if extend(pos + 1):
                return True
            used[j] = False
            perm[i] = -1
        return False

    if extend(0):
        return tuple(perm)
    return None


# ---------------------------------------------------------------------------
# random seeds


def random_seed(
    rng: random.Random,
    n: int,
    m: Optional[int] = None,
    max_entry: int = 3,
    max_multiplier: int = 3,
    track_variables: bool = True,
) -> Seed:
    """A random skew-symmetrisable seed satisfying the integrality condition.

    Entries between vertices ``i``, ``k`` are integers divided by the gcd of
    their multipliers (frozen vertices count as multiplier 1 on their side,
    and frozen-frozen entries may be half-integers).
    """
    m = n if m is None else m
    mult = [rng.randint(1, max_multiplier) for _ in range(m)]
    eps = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            s = rng.randint(-max_entry, max_entry)
            if i < m and j < m:
                v = Fraction(s, gcd(mult[i], mult[j]))
            elif i < m:
                v = Fraction(s, mult[i])
            elif j < m:
                v = Fraction(s, mult[j])
            else:
                v = Fraction(s, 2)
            eps[i][j] = v
            eps[j][i] = -v
    return Seed.initial(eps, m, mult, None, track_variables)

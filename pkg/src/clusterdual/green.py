"""c-vectors, green/red vertices and maximal green sequences.

A framed seed appends one frozen vertex ``j'`` per mutable ``j`` with
``eps_hat[j'][j] = 1/d_j``, so the integer exchange matrix gains an identity
block. The c-vector of mutable ``j`` is the column ``(eps[i'][j])_i`` of that
block, read back as integers.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .seed import Seed, SeedError, mutate

GREEN = "green"
RED = "red"


class SignCoherenceError(AssertionError):
    """A c-vector with entries of both signs; indicates a bug, not bad input."""


def framed(seed: Seed) -> Seed:
    """Append the frame vertices to ``seed`` (variables are dropped)."""
    n, m = seed.n, seed.m
    size = n + m
    eps = [[Fraction(0)] * size for _ in range(size)]
    for i in range(n):
        for j in range(n):
            eps[i][j] = seed.epsilon_hat[i][j]
    for j in range(m):
        v = Fraction(1, seed.multipliers[j])
        eps[n + j][j] = v
        eps[j][n + j] = -v
    labels = list(seed.labels) + [f"{lab}'" for lab in seed.labels[:m]]
    return Seed.initial(eps, m, seed.multipliers, labels, track_variables=False)


@dataclass(frozen=True)
class GreenState:
    """A framed seed together with the size ``n`` of the unframed part."""

    seed: Seed
    n: int

    @classmethod
    def start(cls, seed: Seed) -> "GreenState":
        return cls(framed(seed), seed.n)

    @property
    def frame(self) -> range:
        return range(self.n, self.seed.n)

    def c_vector(self, j: int) -> tuple[int, ...]:
        """c-vector of mutable vertex ``j`` (1-based)."""
        j0 = j - 1
        d = self.seed.multipliers[j0]
        out = []
        for i in self.frame:
            v = self.seed.epsilon_hat[i][j0] * d
            if v.denominator != 1:
                raise SignCoherenceError(f"non-integral frame entry {v}")
            out.append(int(v))
        return tuple(out)

    def c_vectors(self) -> list[tuple[int, ...]]:
        return [self.c_vector(j) for j in range(1, self.seed.m + 1)]

    def mutate(self, k: int) -> "GreenState":
        return GreenState(mutate(self.seed, k), self.n)

    def all_red(self) -> bool:
        return all(classify(self, j) == RED for j in range(1, self.seed.m + 1))


def classify(state: GreenState, j: int) -> str:
    """``"green"`` if the c-vector of ``j`` is nonnegative, ``"red"`` if nonpositive."""
    if not 1 <= j <= state.seed.m:
        raise SeedError(f"vertex {j} is not mutable")
    c = state.c_vector(j)
    if all(v >= 0 for v in c) and any(c):
        return GREEN
    if all(v <= 0 for v in c) and any(c):
        return RED
    raise SignCoherenceError(f"c-vector {c} of vertex {j} is not sign-coherent")


def check_sign_coherence(state: GreenState) -> None:
    for j in range(1, state.seed.m + 1):
        classify(state, j)


def frame_block(state: GreenState) -> list[list[int]]:
    """The m x m integer block ``eps[i'][j]``."""
    return [list(col) for col in zip(*state.c_vectors())]


def is_negative_permutation(block: Sequence[Sequence[int]]) -> bool:
    m = len(block)
    cols = set()
    for row in block:
        nz = [(j, v) for j, v in enumerate(row) if v]
        if len(nz) != 1 or nz[0][1] != -1:
            return False
        cols.add(nz[0][0])
    return len(cols) == m


@dataclass
class Transcript:
    steps: list[dict] = field(default_factory=list)
    ok: bool = False
    reason: str = ""


def verify_mgs(seed: Seed, sequence: Sequence[int]) -> tuple[bool, Transcript]:
    """Check that ``sequence`` only mutates green vertices and ends all red."""
    state = GreenState.start(seed)
    transcript = Transcript()
    for step, k in enumerate(sequence, 1):
        if not 1 <= k <= seed.m:
            transcript.reason = f"step {step}: vertex {k} is not mutable"
            return False, transcript
        colour = classify(state, k)
        transcript.steps.append({"step": step, "vertex": k, "colour": colour, "c": state.c_vector(k)})
        if colour != GREEN:
            transcript.reason = f"step {step}: vertex {k} is red"
            return False, transcript
        state = state.mutate(k)
        check_sign_coherence(state)
    if not state.all_red():
        transcript.reason = "final state still has green vertices"
        return False, transcript
    transcript.ok = True
    return True, transcript


@dataclass
class SearchResult:
    found: bool
    sequence: Optional[tuple[int, ...]]
    explored: int
    exhausted: bool

    @property
    def length(self) -> Optional[int]:
        return None if self.sequence is None else len(self.sequence)

    def to_json(self) -> dict:
        return {
            "found": self.found,
            "sequence": None if self.sequence is None else list(self.sequence),
            "length": self.length,
            "explored": self.explored,
            "exhausted": self.exhausted,
        }


def _int_mutate(b: list[list[int]], k: int) -> list[list[int]]:
    """Integer matrix mutation of a (2m) x m extended exchange matrix at column ``k``."""
    bk = b[k]
    out = []
    for i, row in enumerate(b):
        a = row[k]
        if i == k:
            out.append([-v for v in row])
            continue
        new = row[:]
        new[k] = -a
        if a:
            for j, c in enumerate(bk):
                if j != k and c and (a > 0) == (c > 0):
                    new[j] += a * c if a > 0 else -a * c
        out.append(new)
    return out


def _int_key(b: list[list[int]], m: int, mult: Sequence[int]):
    cs = [tuple(b[m + i][j] for i in range(m)) for j in range(m)]
    if len(set(cs)) != m:
        raise SignCoherenceError("repeated c-vector")
    order = sorted(range(m), key=cs.__getitem__)
    return (
        tuple(cs[i] for i in order),
        tuple(mult[i] for i in order),
        tuple(b[i][j] for i in order for j in order),
    )


def _int_colour(b: list[list[int]], m: int, j: int) -> str:
    col = [b[m + i][j] for i in range(m)]
    if all(v >= 0 for v in col) and any(col):
        return GREEN
    if all(v <= 0 for v in col) and any(col):
        return RED
    raise SignCoherenceError(f"c-vector {tuple(col)} of vertex {j + 1} is not sign-coherent")


def search_mgs(seed: Seed, budget: int = 10_000) -> SearchResult:
    """Breadth-first search for a shortest maximal green sequence.

    Frozen vertices do not affect colours, so the search runs on the integer
    exchange matrix of the mutable part stacked over the frame block.
    States that agree up to a permutation fixing the frame are expanded
    once; c-vectors are pairwise distinct, so sorting by them gives a
    canonical form. ``budget`` caps the number of expanded states;
    ``exhausted`` is true when every reachable green state was visited.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    m = seed.m
    if m == 0:
        return SearchResult(True, (), 0, True)
    mult = seed.multipliers
    b = [[int(seed.epsilon(i, j)) for j in range(m)] for i in range(m)]
    b += [[int(i == j) for j in range(m)] for i in range(m)]
    seen = {_int_key(b, m, mult)}
    queue = deque([(b, ())])
    explored = 0
    while queue:
        if explored >= budget:
            return SearchResult(False, None, explored, False)
        cur, path = queue.popleft()
        explored += 1
        for k in range(m):
            if _int_colour(cur, m, k) != GREEN:
                continue
            nxt = _int_mutate(cur, k)
            colours = [_int_colour(nxt, m, j) for j in range(m)]
            new_path = path + (k + 1,)
            if all(c == RED for c in colours):
                return SearchResult(True, new_path, explored, False)
            key = _int_key(nxt, m, mult)
            if key in seen:
                continue
            seen.add(key)
            queue.append((nxt, new_path))
    return SearchResult(False, None, explored, True)


def enumerate_mgs(seed: Seed, max_length: int, budget: int = 100_000) -> list[tuple[int, ...]]:
    """Every maximal green sequence of length at most ``max_length`` (no deduplication)."""
    seed = seed.without_variables()
    found: list[tuple[int, ...]] = []
    visited = 0

    def walk(state: GreenState, path: tuple[int, ...]):
        nonlocal visited
        visited += 1
        if visited > budget:
            raise RuntimeError("enumeration budget exceeded")
        if state.all_red():
            found.append(path)
            return
        if len(path) >= max_length:
            return
        for k in range(1, seed.m + 1):
            if classify(state, k) == GREEN:
                nxt = state.mutate(k)
                check_sign_coherence(nxt)
                walk(nxt, path + (k,))

    walk(GreenState.start(seed), ())
    return found

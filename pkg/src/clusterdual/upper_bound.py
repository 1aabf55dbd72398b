"""Upper-bound membership certificates and exchange-graph exhaustion."""

from __future__ import annotations

from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .exact import MultiLaurent, RatFunc, is_laurent, substitute
from .seed import Seed, chart_change, mutate, seed_isomorphic

DEFAULT_BUDGET = 10_000


@dataclass(frozen=True)
class LaurentCertificate:
    """Per-chart Laurent forms of one function.

    ``charts`` maps ``"base"`` and ``"mu1"``, ``"mu2"``, ... to the Laurent
    form of the function in that chart, or ``None`` where it is not Laurent.
    """

    charts: dict[str, Optional[MultiLaurent]]
    member: bool
    witness: Optional[str] = None

    def to_json(self) -> dict:
        return {
            "verdict": "member" if self.member else "non-member",
            "witness": self.witness,
            "charts": {cid: None if lf is None else str(lf) for cid, lf in self.charts.items()},
        }


def _chart_forms(f: RatFunc, seed: Seed) -> list[tuple[str, RatFunc]]:
    forms = [("base", f)]
    for k in range(1, seed.m + 1):
        # the inverse chart change is the forward formula of the mutated seed
        back = chart_change(mutate(seed.without_variables(), k), k)
        forms.append((f"mu{k}", substitute(f, back)))
    return forms


def upper_bound_member(f: RatFunc, seed: Seed, threads: int = 1) -> LaurentCertificate:
    """Decide whether ``f`` (in ``seed``'s chart coordinates) lies in the upper bound."""
    f = f.in_labels(seed.labels) if isinstance(f, RatFunc) else RatFunc.constant(f, seed.labels)
    forms = _chart_forms(f, seed)

    def check(item):
        cid, g = item
        return cid, is_laurent(g, seed.labels)

    if threads > 1 and len(forms) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(check, forms))
    else:
        results = [check(item) for item in forms]
    charts = dict(results)
    witness = next((cid for cid, lf in results if lf is None), None)
    return LaurentCertificate(charts, witness is None, witness)


def verify_certificate(f: RatFunc, seed: Seed, cert: LaurentCertificate) -> bool:
    """Push each recorded Laurent form back to the base chart and compare with ``f``."""
    f = f.in_labels(seed.labels)
    for cid, lf in cert.charts.items():
        if lf is None:
            continue
        g = lf.to_ratfunc()
        if cid != "base":
            g = substitute(g, chart_change(seed, int(cid[2:])))
        if g != f:
            return False
    return True


# ---------------------------------------------------------------------------
# exchange graph


@dataclass
class ChartSet:
    """Seeds reached by breadth-first mutation, one per chart up to relabelling."""

    seeds: list[Seed] = field(default_factory=list)
    paths: list[tuple[int, ...]] = field(default_factory=list)
    truncated: bool = False

    def __len__(self):
        return len(self.seeds)


def enumerate_charts(seed: Seed, budget: int = DEFAULT_BUDGET) -> ChartSet:
    """Breadth-first exhaustion of the exchange graph of ``seed``.

    Two seeds are the same chart when some mutability- and
    multiplier-preserving permutation matches both their exchange data and
    their chart variables. Stops with ``truncated=True`` once ``budget``
    charts have been found and unexplored ones remain.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    if seed.variables is None:
        seed = Seed.initial(seed.epsilon_hat, seed.m, seed.multipliers, seed.labels)
    out = ChartSet()
    buckets: dict[frozenset, list[int]] = {}

    def known(s: Seed) -> bool:
        for idx in buckets.get(frozenset(s.variables), []):
            if seed_isomorphic(out.seeds[idx], s, match_variables=True) is not None:
                return True
        return False

    def add(s: Seed, path):
        buckets.setdefault(frozenset(s.variables), []).append(len(out.seeds))
        out.seeds.append(s)
        out.paths.append(tuple(path))

    add(seed, ())
    queue = deque([0])
    while queue:
        idx = queue.popleft()
        s, path = out.seeds[idx], out.paths[idx]
        for k in range(1, s.m + 1):
            t = mutate(s, k)
            if known(t):
                continue
            if len(out.seeds) >= budget:
                out.truncated = True
                return out
            add(t, path + (k,))
            queue.append(len(out.seeds) - 1)
    return out


def rewrite_in_chart(f: RatFunc, seed: Seed, path: Sequence[int]) -> RatFunc:
    """Express ``f`` (in ``seed``'s chart) in the chart reached along ``path``."""
    f = f.in_labels(seed.labels)
    current = seed.without_variables()
    for k in path:
        current = mutate(current, k)
        f = substitute(f, chart_change(current, k))
    return f


def laurent_everywhere(f: RatFunc, seed: Seed, charts: ChartSet) -> Optional[str]:
    """Return ``None`` if ``f`` is Laurent in every chart, else a path string of a failing chart."""
    for path in charts.paths:
        if is_laurent(rewrite_in_chart(f, seed, path), seed.labels) is None:
            return ",".join(map(str, path)) or "base"
    return None

import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from clusterdual.exact import RatFunc
from clusterdual.seed import (
    Seed,
    SeedError,
    apply_sequence,
    chart_change,
    mutate,
    poisson_bracket,
    random_seed,
    seed_isomorphic,
)

A2 = [[0, 1], [-1, 0]]


def test_a2_single_mutation():
    s = Seed.initial(A2)
    t = mutate(s, 1)
    x1, x2 = RatFunc.symbols(["x1", "x2"])
    assert t.epsilon_hat == ((0, -1), (1, 0))
    assert t.variables == (1 / x1, x2 * (1 + x1))


def test_pentagon():
    s = Seed.initial(A2)
    t = apply_sequence(s, (1, 2, 1, 2, 1))
    x1, x2 = RatFunc.symbols(["x1", "x2"])
    assert t.variables == (x2, x1)
    assert t.permuted((1, 0)) == s


def test_skew_symmetrisable_mutation_matches_integer_rule():
    # eps_ij' = -eps_ij on row/column k, else eps_ij + (|eps_ik| eps_kj + eps_ik |eps_kj|)/2
    rng = random.Random(3)
    for _ in range(50):
        s = random_seed(rng, 4, 3, track_variables=False)
        k = rng.randint(1, 3)
        t = mutate(s, k)
        b = [[s.epsilon(i, j) for j in range(s.m)] for i in range(s.n)]
        for i in range(s.n):
            for j in range(s.m):
                if i == k - 1 or j == k - 1:
                    want = -b[i][j]
                else:
                    bik, bkj = b[i][k - 1], b[k - 1][j]
                    want = b[i][j] + (abs(bik) * bkj + bik * abs(bkj)) // 2
                assert t.epsilon(i, j) == want


@given(st.integers(0, 10_000))
def test_involution_and_integrality(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 5)
    s = random_seed(rng, n, rng.randint(1, n))
    k = rng.randint(1, s.m)
    t = mutate(s, k)
    Seed(t.m, t.multipliers, t.epsilon_hat, t.labels)  # validates
    back = mutate(t, k)
    assert back.epsilon_hat == s.epsilon_hat
    assert back.variables == s.variables


def test_bracket_example():
    s = Seed.initial(A2)
    x1, x2 = RatFunc.symbols(["x1", "x2"])
    assert poisson_bracket(x1 * x2, x1, s) == -2 * x1**2 * x2
    assert poisson_bracket(x1, x2, s) == 2 * x1 * x2


@given(st.integers(0, 10_000))
def test_bracket_compatibility(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 3)
    s = random_seed(rng, n, rng.randint(1, n))
    k = rng.randint(1, s.m)
    t = mutate(s, k)
    for i in range(n):
        for j in range(n):
            xi, xj = t.variables[i], t.variables[j]
            assert poisson_bracket(xi, xj, s) == 2 * t.epsilon_hat[i][j] * xi * xj


def test_chart_change_inverse():
    s = Seed.initial([[0, 1], [-1, 0]], multipliers=(1, 2))
    from clusterdual.exact import substitute

    t = mutate(s.without_variables(), 1)
    fwd, back = chart_change(s, 1), chart_change(t, 1)
    for lab in s.labels:
        assert substitute(fwd[lab], back) == RatFunc.symbol(lab, s.labels)


def test_errors():
    s = Seed.initial(A2, m=1)
    with pytest.raises(SeedError):
        mutate(s, 2)
    with pytest.raises(SeedError):
        mutate(s, 3)
    with pytest.raises(SeedError):
        Seed.initial([[0, 1], [1, 0]])
    with pytest.raises(SeedError):
        Seed.initial([[0, Fraction(1, 2)], [Fraction(-1, 2), 0]])


def test_json_roundtrip():
    h = Fraction(1, 2)
    eps = [[0, 1, 1, 0], [-1, 0, 0, 2], [-1, 0, 0, h], [0, -2, -h, 0]]
    s = mutate(Seed.initial(eps, m=2), 1)
    data = json.loads(json.dumps(s.to_json()))
    back = Seed.from_json(data, track_variables=False)
    assert back.epsilon_hat == s.epsilon_hat
    assert back.m == 2
    with pytest.raises(SeedError):
        Seed.from_json({**data, "frozen": []})


def test_isomorphism():
    s = Seed.initial([[0, 1, 0], [-1, 0, 1], [0, -1, 0]])
    perm = (2, 1, 0)
    t = Seed.initial([[0, 1, 0], [-1, 0, 1], [0, -1, 0]]).permuted(perm)
    assert seed_isomorphic(s, t) is not None
    u = Seed.initial([[0, 1, 1], [-1, 0, 1], [-1, -1, 0]])
    assert seed_isomorphic(s, u) is None

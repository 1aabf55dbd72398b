import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import clusterdual.qtorus as qt
from clusterdual.exact import QScalar
from clusterdual.qtorus import (
    CommutationError,
    QTorus,
    ShiftFraction,
    quantum_images,
    quantum_mutate_check,
    semiclassical_bracket,
)
from clusterdual.seed import Seed, poisson_bracket, random_seed

HALF = Seed.initial([[0, Fraction(1, 2)], [Fraction(-1, 2), 0]], m=0)
A2 = Seed.initial([[0, 1], [-1, 0]])
B2 = Seed.initial([[0, 1], [-1, 0]], multipliers=(1, 2))


def swap_exponent(eps, a, b):
    """q-exponent of X^a X^b in normal order, by swapping single generators.

    The word X_1^a1 .. X_n^an X_1^b1 .. X_n^bn is sorted one adjacent swap
    at a time. Since X_i X_j = q^(2 eps_ij) X_j X_i, swapping X_i^r X_j^s
    (i > j) contributes 2 r s eps_ij.
    """
    word = [(i, e) for i, e in enumerate(a) if e] + [(i, e) for i, e in enumerate(b) if e]
    total = Fraction(0)
    changed = True
    while changed:
        changed = False
        for p in range(len(word) - 1):
            (i, r), (j, s) = word[p], word[p + 1]
            if i > j:
                total += 2 * r * s * eps[i][j]
                word[p], word[p + 1] = word[p + 1], word[p]
                changed = True
    return total


def test_generator_products():
    t = QTorus(HALF)
    x1, x2 = t.generator(1), t.generator(2)
    assert x1 * x2 == t.monomial([1, 1])
    assert x2 * x1 == t.monomial([1, 1], QScalar.q_power(-1, t.d))
    assert x1 * x2 == (x2 * x1) * QScalar.q_power(1, t.d)
    assert t.generator(1) * t.generator(1, -1) == t.one()


def _exps(n):
    return st.lists(st.integers(-3, 3), min_size=n, max_size=n)


@given(st.integers(0, 10_000), st.data())
def test_cocycle_matches_swap_oracle(seed, data):
    s = random_seed(random.Random(seed), 3, 2, max_entry=2, max_multiplier=2, track_variables=False)
    t = QTorus(s)
    a, b = data.draw(_exps(3)), data.draw(_exps(3))
    assert Fraction(t.cocycle(a, b), t.d) == swap_exponent(s.epsilon_hat, a, b)


def test_perturbed_cocycle_disagrees_with_oracle():
    # sum over i < j instead of i > j is the opposite ordering convention
    s = HALF
    a, b = (0, 1), (1, 0)
    wrong = sum(2 * a[i] * s.epsilon_hat[i][j] * b[j] for i in range(2) for j in range(2) if i < j)
    assert wrong != swap_exponent(s.epsilon_hat, a, b)


@given(st.integers(0, 10_000), st.data())
def test_associativity(seed, data):
    s = random_seed(random.Random(seed), 3, 3, max_entry=2, max_multiplier=2, track_variables=False)
    t = QTorus(s)

    def elem():
        return t.monomial(data.draw(_exps(3))) + t.monomial(data.draw(_exps(3)), QScalar(t.d, {1: 2}))

    x, y, z = elem(), elem(), elem()
    assert (x * y) * z == x * (y * z)


@given(st.integers(0, 10_000))
def test_semiclassical_bracket_matches_poisson(seed):
    rng = random.Random(seed)
    s = random_seed(rng, 3, 2, max_entry=2, max_multiplier=2, track_variables=False)
    t = QTorus(s)
    a = [rng.randint(-2, 2) for _ in range(3)]
    b = [rng.randint(-2, 2) for _ in range(3)]
    f, g = t.monomial(a) + t.one(), t.monomial(b)
    got = semiclassical_bracket(f, g).to_ratfunc()
    want = poisson_bracket(f.classical().to_ratfunc(), g.classical().to_ratfunc(), s)
    assert got == want


def test_non_divisible_commutator_raises(monkeypatch):
    t = QTorus(HALF)
    fake = t.monomial([1, 0], QScalar(t.d, {0: 1}))  # 1 is not divisible by t - 1
    calls = iter([fake, t.zero()])
    monkeypatch.setattr(qt, "qt_multiply", lambda x, y: next(calls))
    with pytest.raises(CommutationError):
        semiclassical_bracket(t.generator(1), t.generator(2))


@pytest.mark.parametrize("seed", [A2, B2, Seed.initial([[0, 1], [-1, 0]], multipliers=(1, 3))])
def test_quantum_mutation_rank2(seed):
    for k in (1, 2):
        rep = quantum_mutate_check(QTorus(seed), k)
        assert rep.ok and rep.classical_ok


def test_quantum_mutation_random_seeds():
    rng = random.Random(11)
    for _ in range(10):
        s = random_seed(rng, 4, 3, max_entry=2, max_multiplier=2, track_variables=False)
        for k in range(1, 4):
            assert quantum_mutate_check(QTorus(s), k).ok


def test_image_shapes():
    imgs = quantum_images(QTorus(A2), 1)
    assert imgs[0].numerator == QTorus(A2).generator(1, -1) and not imgs[0].denominators
    # eps_21 = -1: X'_2 = X_2 (1 + q X_1)
    assert imgs[1].denominators == [] and len(imgs[1].numerator.terms) == 2


def test_perturbed_mutation_is_rejected(monkeypatch):
    # drop the q-shifts inside (1 + q_k^(2a-1) X_k): the classical limit is
    # unchanged but the commutation relations break once eps_ik = 2
    seed = Seed.initial([[0, 0, 2], [0, 0, -1], [-2, 1, 0]])
    assert quantum_mutate_check(QTorus(seed), 3).ok
    real = qt.quantum_images

    def flattened(torus, k):
        out = []
        for img in real(torus, k):
            dens = [{p: QScalar.one(torus.d) for p in den} for den in img.denominators]
            out.append(ShiftFraction(img.numerator, img.k, dens))
        return out

    monkeypatch.setattr(qt, "quantum_images", flattened)
    rep = quantum_mutate_check(QTorus(seed), 3)
    assert rep.classical_ok and not rep.ok

import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, strategies as st

import clusterdual.borel as bm
from clusterdual.checks import example_entries, example_pair
from clusterdual.exact import RatFunc

a_, b_, c_, d_ = RatFunc.symbols(["a", "b", "c", "d"])


def sl2_pair():
    return bm.BorelPair(bm.mat([[a_, b_], [0, 1 / a_]]), bm.mat([[d_, 0], [c_, 1 / d_]]))


def to_sympy(m):
    syms = {s: sp.Symbol(s) for s in ("a", "b", "c", "d")}
    return sp.Matrix([[sp.sympify(str(x), locals=syms) for x in row] for row in m])


def sympy_sigma(b1, b2, i):
    """sigma_i written directly from the defining formula with sympy matrices."""
    n = b1.shape[0]
    c1 = b1[i - 1, i] / b1[i, i]
    c2 = b2[i, i - 1] / b2[i, i]
    t1, t2 = sp.eye(n), sp.eye(n)
    t1[i - 1:i + 1, i - 1:i + 1] = sp.Matrix([[0, 1], [-1, c1]])
    t2[i - 1:i + 1, i - 1:i + 1] = sp.Matrix([[0, -1], [1, c2]])
    return sp.simplify(t1 * b1 * t2), sp.simplify(t1 * b2 * t2)


def test_sl2_tau():
    assert bm.mat_eq(bm.tau(sl2_pair()), bm.diag([a_ * d_, 1 / (a_ * d_)]))


def test_sl2_sigma_golden_and_sympy_oracle():
    got = bm.braid_sigma(1, sl2_pair())
    assert bm.mat_eq(got.b1, bm.mat([[1 / a_, c_ * d_ / a_], [0, a_]]))
    assert bm.mat_eq(got.b2, bm.mat([[1 / d_, 0], [a_ * b_ / d_, d_]]))
    o1, o2 = sympy_sigma(to_sympy(sl2_pair().b1), to_sympy(sl2_pair().b2), 1)
    assert sp.simplify(to_sympy(got.b1) - o1) == sp.zeros(2)
    assert sp.simplify(to_sympy(got.b2) - o2) == sp.zeros(2)


def test_sl2_sigma_squared_golden():
    got = bm.braid_word([1, 1], sl2_pair())
    assert bm.mat_eq(got.b1, bm.mat([[a_, a_ * a_ * b_ / (d_ * d_)], [0, 1 / a_]]))
    assert bm.mat_eq(got.b2, bm.mat([[d_, 0], [c_ * d_ * d_ / (a_ * a_), 1 / d_]]))


def test_worked_pgl3_pair():
    for i in (1, 2):
        assert all(ok for _, ok in example_entries(i))
    p = example_pair()
    assert bm.in_dual_group(p)
    assert bm.braid_word([1, 2, 1], p) == bm.braid_word([2, 1, 2], p)
    assert bm.braid_word([], p) == p


def _rand_pair(seed, n, mode):
    return bm.random_borel_pair(random.Random(seed), n, mode)


@given(st.integers(0, 10**6), st.sampled_from([(3, bm.SL), (3, bm.PGL)]))
def test_braid_relation_random(seed, group):
    p = _rand_pair(seed, *group)
    try:
        lhs = bm.braid_word([1, 2, 1], p)
        rhs = bm.braid_word([2, 1, 2], p)
    except ZeroDivisionError:
        return  # a chi needs a vanishing diagonal entry
    assert lhs == rhs


@given(st.integers(0, 10**6), st.sampled_from([(2, bm.SL), (3, bm.SL), (3, bm.PGL)]), st.data())
def test_tau_equivariance_and_dual_group(seed, group, data):
    n, mode = group
    p = _rand_pair(seed, n, mode)
    i = data.draw(st.integers(1, n - 1))
    q = bm.braid_sigma(i, p)
    assert bm.mat_eq(bm.tau(q), bm.weyl_swap(bm.tau(p), i, mode))
    dual = bm.random_dual_pair(random.Random(seed), n, mode)
    assert bm.in_dual_group(dual) and bm.in_dual_group(bm.braid_sigma(i, dual))


def test_sigma_matches_sympy_on_random_sl3():
    rng = random.Random(3)
    for _ in range(10):
        p = bm.random_borel_pair(rng, 3)
        for i in (1, 2):
            got = bm.braid_sigma(i, p)
            o1, o2 = sympy_sigma(sp.Matrix(p.b1), sp.Matrix(p.b2), i)
            assert sp.Matrix(got.b1) == o1 and sp.Matrix(got.b2) == o2


def test_triangularity_errors():
    with pytest.raises(bm.TriangularityError):
        bm.BorelPair(bm.mat([[1, 0], [1, 1]]), bm.identity(2))
    with pytest.raises(IndexError):
        bm.braid_sigma(2, sl2_pair())


def _int_matrix(rng, n):
    return [[Fraction(rng.randint(-4, 4)) for _ in range(n)] for _ in range(n)]


@given(st.integers(0, 10**6), st.integers(2, 4))
def test_gauss_round_trip(seed, n):
    g = _int_matrix(random.Random(seed), n)
    try:
        up, h, low = bm.gauss_decompose(g)
    except bm.NotInBigCell:
        # oracle: some trailing principal minor vanishes
        minors = [sp.Matrix(g)[n - k:, n - k:].det() for k in range(1, n + 1)]
        assert 0 in minors
        return
    assert bm.mat_eq(bm.mat_prod(up, h, low), g)
    assert bm.is_upper(up) and bm.is_lower(low)
    assert all(up[i][i] == 1 and low[i][i] == 1 for i in range(n))


def test_gauss_examples():
    up, h, low = bm.gauss_decompose(bm.mat([[2, 1], [1, 1]]))
    assert bm.mat_eq(up, bm.mat([[1, 1], [0, 1]]))
    assert bm.mat_eq(h, bm.diag([1, 1]))
    assert bm.mat_eq(low, bm.mat([[1, 0], [1, 1]]))
    with pytest.raises(bm.NotInBigCell):
        bm.gauss_decompose(bm.mat([[0, 1], [1, 0]]))
    # nonzero leading minors are not enough
    with pytest.raises(bm.NotInBigCell):
        bm.gauss_decompose(bm.mat([[1, 1], [1, 0]]))


def test_regularity_examples():
    assert bm.is_regular(bm.identity(2)) == (False, 3)
    assert bm.is_regular(bm.mat([[1, 1], [0, 1]])) == (True, 1)
    assert bm.is_regular(bm.diag([2, Fraction(1, 2)])) == (True, 1)


@given(st.integers(0, 10**6), st.integers(2, 4))
def test_regularity_against_minimal_polynomial(seed, n):
    rng = random.Random(seed)
    # small entries and repeated blocks make irregular elements common
    g = [[Fraction(rng.choice([0, 0, 1, -1, 2])) for _ in range(n)] for _ in range(n)]
    if rng.random() < 0.3:
        g = bm.diag([Fraction(rng.choice([1, 2]))] * n)
    m = sp.Matrix(g)
    powers = [sp.eye(n)]
    for _ in range(n - 1):
        powers.append(powers[-1] * m)
    krylov = sp.Matrix([list(p) for p in powers])
    assert bm.is_regular(g)[0] == (krylov.rank() == n)


@given(st.integers(0, 10**6))
def test_gamma_is_homomorphism(seed):
    rng = random.Random(seed)
    A = _int_matrix(rng, 2)
    B = _int_matrix(rng, 2)
    for i in (1, 2, 3):
        lhs = bm.gamma_embed(i, bm.matmul(A, B), 4)
        rhs = bm.matmul(bm.gamma_embed(i, A, 4), bm.gamma_embed(i, B, 4))
        assert bm.mat_eq(lhs, rhs)


def test_tau_diagonal_pair():
    b = bm.diag([Fraction(2), Fraction(1, 2)])
    p = bm.BorelPair(b, b)
    assert bm.mat_eq(bm.tau(p), bm.diag([4, Fraction(1, 4)]))
    assert not bm.in_dual_group(p)


@given(st.integers(0, 10**6), st.sampled_from([2, 3]))
def test_manin_isotropy(seed, n):
    rng = random.Random(seed)

    def traceless(lower=False, upper=False):
        m = _int_matrix(rng, n)
        for i in range(n):
            for j in range(n):
                if (upper and i > j) or (lower and i < j):
                    m[i][j] = Fraction(0)
        m[n - 1][n - 1] -= bm.trace(m)
        return m

    x, x2 = traceless(), traceless()
    assert bm.manin_checks(x, x, x2, x2).pairing == 0
    u1, u2 = traceless(upper=True), traceless(upper=True)
    l1 = [[u1[i][j] if i > j else (-u1[i][i] if i == j else Fraction(0)) for j in range(n)] for i in range(n)]
    l2 = [[u2[i][j] if i > j else (-u2[i][i] if i == j else Fraction(0)) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i):
            l1[i][j], l2[i][j] = Fraction(rng.randint(-3, 3)), Fraction(rng.randint(-3, 3))
    rep = bm.manin_checks(u1, l1, u2, l2)
    assert rep.first_in_p_minus and rep.second_in_p_minus and rep.pairing == 0 and rep.isotropy_ok


def test_gram_nonsingular():
    for n, det in ((2, -4), (3, 9)):
        gram = bm.double_gram(n)
        assert bm.determinant(gram) == det == sp.Matrix(gram).det()


def test_flag_membership():
    up = bm.BorelPair(bm.mat([[1, 2], [0, 1]]), bm.identity(2))
    assert bm.flag_membership(up, bm.identity(2))
    low = bm.BorelPair(bm.identity(2), bm.mat([[1, 0], [3, 1]]))
    assert not bm.flag_membership(low, bm.identity(2))
    # the same element lies in the opposite Borel, i.e. the flag of w0
    w0 = bm.mat([[0, 1], [-1, 0]])
    assert bm.flag_membership(low, w0)
    with pytest.raises(ZeroDivisionError):
        bm.flag_membership(up, bm.mat([[1, 1], [1, 1]]))


def test_flag_membership_of_worked_pair_by_direct_product():
    p = example_pair()
    m = bm.matmul(p.b1, bm.inverse(p.b2))
    assert bm.flag_membership(p, bm.identity(3)) == bm.is_upper(m)
    assert not bm.is_upper(m)  # b1 b2^-1 = u1 h h u2^-1 has entries below the diagonal

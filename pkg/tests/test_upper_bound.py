import sympy as sp

from clusterdual.exact import MultiLaurent, RatFunc
from clusterdual.seed import Seed
from clusterdual.upper_bound import (
    enumerate_charts,
    laurent_everywhere,
    rewrite_in_chart,
    upper_bound_member,
    verify_certificate,
)

x1, x2 = RatFunc.symbols(["x1", "x2"])


def test_member_with_frozen_vertex():
    s = Seed.initial([[0, 1], [-1, 0]], m=1)
    f = x2 * (1 + x1)
    cert = upper_bound_member(f, s)
    assert cert.member
    assert cert.charts["mu1"] == MultiLaurent(["x1", "x2"], {(0, 1): 1})
    assert verify_certificate(f, s, cert)


def test_non_members():
    cert = upper_bound_member(1 / (1 + RatFunc.symbol("x1")), Seed.initial([[0]]))
    assert not cert.member and cert.witness == "base"
    cert = upper_bound_member((1 + x2) / x1, Seed.initial([[0, 1], [-1, 0]]))
    assert not cert.member and cert.witness == "mu1"


def test_threads_agree():
    s = Seed.initial([[0, 1], [-1, 0]])
    for f in [(1 + x2) / x1, x1 * x2 + x1 + 1, (1 + x1 + x2) / (x1 * x2)]:
        a, b = upper_bound_member(f, s), upper_bound_member(f, s, threads=3)
        assert a.to_json() == b.to_json()


def _sympy_chart_forms(expr):
    """Pull back along A2 cluster Poisson mutations, written out with sympy."""
    a, b = sp.symbols("x1 x2")
    # initial coordinates written in the adjacent charts
    forms = {(): expr}
    forms[(1,)] = expr.subs({a: 1 / a, b: b / (1 + 1 / a)}, simultaneous=True)
    forms[(2,)] = expr.subs({b: 1 / b, a: a * (1 + b)}, simultaneous=True)
    return forms


def test_membership_agrees_with_sympy_oracle():
    s = Seed.initial([[0, 1], [-1, 0]])
    charts = enumerate_charts(s)
    a, b = sp.symbols("x1 x2")
    for seed in charts.seeds:
        for v in seed.variables:
            cert = upper_bound_member(v, s)
            assert (laurent_everywhere(v, s, charts) is None) == cert.member
            if not cert.member:
                continue
            expr = sp.sympify(str(v), locals={"x1": a, "x2": b})
            for path, g in _sympy_chart_forms(expr).items():
                num, den = sp.fraction(sp.factor(sp.together(g)))
                assert sp.Poly(den, a, b).is_monomial, (v, path)


def test_cluster_poisson_variables_membership():
    s = Seed.initial([[0, 1], [-1, 0]])
    x1_, x2_ = s.variables
    assert upper_bound_member(x1_, s).member
    assert not upper_bound_member(x2_, s).member


def test_finite_type_chart_counts():
    # numbers of clusters in finite type: A1 2, A2 5, A3 14, B2 6, G2 8
    assert len(enumerate_charts(Seed.initial([[0]]))) == 2
    assert len(enumerate_charts(Seed.initial([[0, 1], [-1, 0]]))) == 5
    assert len(enumerate_charts(Seed.initial([[0, 1, 0], [-1, 0, 1], [0, -1, 0]]))) == 14
    assert len(enumerate_charts(Seed.initial([[0, 1], [-1, 0]], multipliers=(1, 2)))) == 6
    assert len(enumerate_charts(Seed.initial([[0, 1], [-1, 0]], multipliers=(1, 3)))) == 8
    assert len(enumerate_charts(Seed.initial([[0, 1], [-1, 0]], m=1))) == 2
    assert len(enumerate_charts(Seed.initial([[0]], m=0))) == 1


def test_budget_truncates():
    s = Seed.initial([[0, 2], [-2, 0]])  # Kronecker: infinitely many charts
    charts = enumerate_charts(s, budget=20)
    assert charts.truncated and len(charts) == 20


def test_rewrite_along_pentagon_returns_variable():
    s = Seed.initial([[0, 1], [-1, 0]])
    # after (1,2,1,2,1) the chart coordinates are (x2, x1) relabelled
    assert rewrite_in_chart(x1, s, (1, 2, 1, 2, 1)) == x2

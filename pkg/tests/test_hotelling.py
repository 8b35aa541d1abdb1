import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from oracles import hotelling_equilibrium_by_hand
from syntaxdepth.hotelling import (
    InvalidMarket,
    MarketConfig,
    NoConvergence,
    PricePair,
    UndercutRegime,
    best_response,
    best_response_solve,
    comparative_statics,
    demand_split,
    equilibrium,
    profit_quadratic,
    profits,
)

WORKED = MarketConfig(35, 4, 1, 1)


@st.composite
def markets(draw, max_fill=Fraction(1), exact=True):
    """Random valid configs; Fraction-valued when exact."""
    num = st.integers(1, 1000)
    l = Fraction(draw(num), draw(st.integers(1, 20)))
    c = Fraction(draw(num), draw(st.integers(1, 50)))
    a = l * max_fill * Fraction(draw(st.integers(0, 1000)), 1000)
    b = (l * max_fill - a) * Fraction(draw(st.integers(0, 1000)), 1000)
    if exact:
        return MarketConfig(l, a, b, c)
    # rounding to float can push a + b just past l
    assume(float(a) + float(b) <= float(l))
    return MarketConfig(float(l), float(a), float(b), float(c))


@st.composite
def interior_prices(draw, m):
    """Prices strictly inside the no-undercut region."""
    s = m.c * m.contested
    base = Fraction(draw(st.integers(0, 10**4)), 100) * m.c
    t = Fraction(draw(st.integers(-999, 999)), 1000)
    return PricePair(base + s + t * s, base + s)


def test_market_validation():
    for bad in [(0, 0, 0, 1), (1, -1, 0, 1), (1, 0, -1, 1), (1, 0, 0, 0), (10, 6, 5, 1)]:
        with pytest.raises(InvalidMarket):
            MarketConfig(*bad)
    MarketConfig(10, 5, 5, 1)  # a + b = l is allowed


# demand split

def test_split_worked_example():
    d = demand_split(WORKED, PricePair(36, 34))
    assert (d.x, d.y, d.q1, d.q2) == (14, 16, 18, 17)


@given(markets().filter(lambda m: m.contested > 0), st.integers(0, 10**4))
def test_split_equal_prices(m, p):
    d = demand_split(m, PricePair(p, p))
    assert d.x == d.y == m.contested / 2


def test_split_undercut_boundary():
    m = MarketConfig(35, 4, 1, 2)
    with pytest.raises(UndercutRegime) as info:
        demand_split(m, PricePair(10 + 2 * 30, 10))
    assert info.value.capturing_store == "B"
    assert info.value.capturing_quantity == 31
    with pytest.raises(UndercutRegime) as info:
        demand_split(m, PricePair(10, 10 + 2 * 30))
    assert info.value.capturing_store == "A"
    assert info.value.capturing_quantity == 34


def test_split_empty_segment_is_undercut():
    with pytest.raises(UndercutRegime):
        demand_split(MarketConfig(10, 5, 5, 1), PricePair(3, 3))


# profits

def test_profits_worked_example():
    assert profits(WORKED, PricePair(36, 34)) == (648, 578)


def test_profit_zero_price():
    pi1, _ = profits(WORKED, PricePair(0, 5))
    assert pi1 == 0


@settings(max_examples=300)
@given(st.data())
def test_profit_product_equals_quadratic(data):
    m = data.draw(markets().filter(lambda m: m.contested > 0))
    p = data.draw(interior_prices(m))
    assert profits(m, p) == profit_quadratic(m, p)
    fm = MarketConfig(float(m.l), float(m.a), float(m.b), float(m.c))
    fp = PricePair(float(p.p1), float(p.p2))
    for prod, quad in zip(profits(fm, fp), profit_quadratic(fm, fp)):
        assert prod == pytest.approx(quad, rel=1e-9, abs=1e-9 * fm.c * fm.l**2)


@settings(max_examples=300)
@given(st.data())
def test_conservation_exact(data):
    m = data.draw(markets().filter(lambda m: m.contested > 0))
    d = demand_split(m, data.draw(interior_prices(m)))
    assert d.x + d.y == m.l - m.a - m.b
    assert d.q1 + d.q2 == m.l
    assert d.x > 0 and d.y > 0


# equilibrium

def test_equilibrium_worked_example():
    eq = equilibrium(WORKED)
    assert (eq.prices.p1, eq.prices.p2) == (36, 34)
    assert (eq.split.q1, eq.split.q2) == (18, 17)
    assert (eq.profit1, eq.profit2) == (648, 578)
    assert eq.valid and eq.violations == ()


def test_equilibrium_matches_cramer_oracle_worked_example():
    assert hotelling_equilibrium_by_hand(35, 4, 1, 1) == (36, 34)


@settings(max_examples=200)
@given(markets())
def test_equilibrium_matches_cramer_oracle(m):
    eq = equilibrium(m)
    assert (eq.prices.p1, eq.prices.p2) == hotelling_equilibrium_by_hand(m.l, m.a, m.b, m.c)


@given(markets())
def test_equilibrium_symmetric(m):
    m = MarketConfig(m.l, m.a, m.a, m.c) if 2 * m.a <= m.l else MarketConfig(m.l, Fraction(0), Fraction(0), m.c)
    eq = equilibrium(m)
    assert eq.prices.p1 == eq.prices.p2 == m.c * m.l
    assert eq.split.q1 == eq.split.q2 == m.l / 2
    assert eq.profit1 == eq.profit2 == m.c * m.l**2 / 2


def test_equilibrium_empty_segment_flagged():
    eq = equilibrium(MarketConfig(10, 5, 5, 2))
    assert (eq.prices.p1, eq.prices.p2, eq.split.q1, eq.split.q2) == (20, 20, 5, 5)
    assert not eq.valid
    assert "contested_segment_nonempty" in eq.violations


def test_equilibrium_undercut_flagged():
    # a much larger than b: A's equilibrium price exceeds B's plus the crossing cost.
    eq = equilibrium(MarketConfig(10, 6, 0, 1))
    assert not eq.valid
    assert eq.violations == ("no_undercut_p1",)


@settings(max_examples=300)
@given(markets())
def test_equilibrium_identities_exact(m):
    eq = equilibrium(m)
    p, d = eq.prices, eq.split
    assert eq.profit1 == p.p1 * d.q1 and eq.profit2 == p.p2 * d.q2
    assert d.x + d.y == m.contested
    assert d.q1 + d.q2 == m.l
    assert p.p1 + p.p2 == 2 * m.c * m.l
    if eq.valid:
        assert d.q1 >= 0 and d.q2 >= 0


@settings(max_examples=300)
@given(markets(exact=False))
def test_swap_symmetry_exact_floats(m):
    e, s = equilibrium(m), equilibrium(m.swapped())
    assert (s.prices.p1, s.prices.p2) == (e.prices.p2, e.prices.p1)
    assert (s.split.q1, s.split.q2) == (e.split.q2, e.split.q1)
    assert (s.profit1, s.profit2) == (e.profit2, e.profit1)


@settings(max_examples=300)
@given(markets(exact=False), st.sampled_from([0.25, 0.5, 2.0, 4.0, 8.0]))
def test_homogeneity_in_c_floats(m, k):
    e = equilibrium(m)
    s = equilibrium(MarketConfig(m.l, m.a, m.b, m.c * k))
    assert (s.prices.p1, s.prices.p2) == (k * e.prices.p1, k * e.prices.p2)
    assert (s.profit1, s.profit2) == (k * e.profit1, k * e.profit2)
    assert (s.split.q1, s.split.q2) == (e.split.q1, e.split.q2)


@settings(max_examples=200)
@given(markets(), st.fractions(min_value=Fraction(1, 100), max_value=100))
def test_homogeneity_in_c_exact(m, k):
    e = equilibrium(m)
    s = equilibrium(MarketConfig(m.l, m.a, m.b, m.c * k))
    assert s.profit1 == k * e.profit1 and s.profit2 == k * e.profit2
    assert s.prices == PricePair(k * e.prices.p1, k * e.prices.p2)
    assert s.split == e.split


@settings(max_examples=200)
@given(markets(max_fill=Fraction(9, 10), exact=False))
def test_equilibrium_is_local_max(m):
    eq = equilibrium(m)
    eps = 1e-4 * m.c * m.l
    p1, p2 = eq.prices.p1, eq.prices.p2
    best1, best2 = profit_quadratic(m, eq.prices)
    for step in (eps, -eps):
        assert profit_quadratic(m, PricePair(p1 + step, p2))[0] <= best1
        assert profit_quadratic(m, PricePair(p1, p2 + step))[1] <= best2


def test_best_response_is_first_order_condition():
    # Numerical derivative of own profit vanishes at the best response.
    for store, rival in [(1, 34.0), (2, 36.0), (1, 0.0), (2, 100.0)]:
        p = best_response(WORKED, rival, store)
        h = 1e-4

        def own(x):
            pair = PricePair(x, rival) if store == 1 else PricePair(rival, x)
            return profit_quadratic(WORKED, pair)[store - 1]

        assert (own(p + h) - own(p - h)) / (2 * h) == pytest.approx(0, abs=1e-6)


# numeric solver

def test_best_response_solve_worked_example():
    eq = best_response_solve(WORKED, tol=1e-9)
    assert eq.prices.p1 == pytest.approx(36, abs=1e-6)
    assert eq.prices.p2 == pytest.approx(34, abs=1e-6)
    assert eq.valid and eq.iterations > 0


@pytest.mark.parametrize("l, a, c", [(10, 2, 1), (35, 0, 3), (1, 0.5, 0.1)])
def test_best_response_solve_symmetric(l, a, c):
    eq = best_response_solve(MarketConfig(l, a, a, c))
    assert eq.prices.p1 == pytest.approx(c * l, abs=1e-6)
    assert eq.prices.p2 == pytest.approx(c * l, abs=1e-6)


def test_best_response_solve_agrees_on_sweep():
    rng = random.Random(20261019)
    worst = 0.0
    for _ in range(200):
        l = rng.uniform(0.1, 500)
        a = rng.uniform(0, 0.9 * l)
        b = rng.uniform(0, 0.9 * l - a)
        m = MarketConfig(l, a, b, rng.uniform(0.01, 50))
        num, closed = best_response_solve(m), equilibrium(m)
        worst = max(worst, abs(num.prices.p1 - closed.prices.p1),
                    abs(num.prices.p2 - closed.prices.p2))
    assert worst < 1e-6


def test_best_response_solve_no_convergence():
    with pytest.raises(NoConvergence) as info:
        best_response_solve(WORKED, tol=1e-9, max_iter=2)
    assert info.value.iterations == 2
    with pytest.raises(ValueError):
        best_response_solve(WORKED, tol=0)


# comparative statics

def test_statics_vary_a():
    rows = comparative_statics(MarketConfig(35, 0, 1, 1), "a", list(range(11)))
    p1 = [r.equilibrium.prices.p1 for r in rows]
    assert all(x < y for x, y in zip(p1, p1[1:]))
    assert all(r.param == "a" for r in rows)


def test_statics_vary_c_proportional():
    rows = comparative_statics(WORKED, "c", [1, 2, 4])
    pi1 = [r.equilibrium.profit1 for r in rows]
    assert pi1 == [648, 1296, 2592]


def test_statics_vary_b():
    rows = comparative_statics(WORKED, "b", [0, 1, 2, 5, 10])
    p1 = [r.equilibrium.prices.p1 for r in rows]
    assert all(x > y for x, y in zip(p1, p1[1:]))


def test_statics_never_aborts():
    rows = comparative_statics(WORKED, "a", [4, 40, 30])
    assert [r.equilibrium is None for r in rows] == [False, True, False]
    assert "a + b must be <= l" in rows[1].error
    assert not rows[1].valid and not rows[2].valid
    with pytest.raises(ValueError):
        comparative_statics(WORKED, "q", [1])

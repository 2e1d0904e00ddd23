import math
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from trafficlaw.randmodels import ExponentParams, LambdaClass
from trafficlaw.theory import (
    G_TABLE,
    LOAD_TABLE,
    LP_TABLE,
    W_TABLE,
    AsymptoticOrder,
    Bound,
    LawKind,
    classify_law,
    exact,
    g_order,
    ln_order,
    lp_order,
    order_eval,
    ratio_slope,
    w_order,
)

CONST, SQRT, LINEAR = LambdaClass.CONST, LambdaClass.SQRT_N, LambdaClass.LINEAR_N
EPS = F(1, 10**6)


def P(i, s, d):
    return ExponentParams(i=float(i), s=float(s), d=float(d))


def key(o):
    return (o.n_exp, o.log_exp)


# --- sampling grid: interior points plus every critical line exactly ---------

D_GRID = [F(x) for x in ("0", "0.5", "0.999", "1", "1.001", "1.25", "1.499", "1.5", "1.501",
                         "1.75", "1.999", "2", "2.001", "2.5", "3", "7")]
S_GRID = [F(x) for x in ("0", "0.5", "0.999", "1", "1.001", "1.5", "1.999", "2", "2.001", "3", "6")]
I_BASE = [F(x) for x in ("0", "0.5", "0.999", "1", "1.001", "1.25", "1.499", "1.5", "1.501",
                         "1.75", "1.999", "2", "2.001", "2.5", "3", "9")]


def i_grid(d):
    extra = {3 - d, F(5, 2) - d}
    extra |= {x + dx for x in list(extra) for dx in (F(1, 1000), -F(1, 1000))}
    return sorted(v for v in set(I_BASE) | extra if v >= 0)


def grid():
    for d in D_GRID:
        for s in S_GRID:
            for i in i_grid(d):
                yield i, s, d


GRID = list(grid())


# --- order algebra -------------------------------------------------------------

def test_order_eval_examples():
    assert order_eval(AsymptoticOrder(1, 0), 100) == pytest.approx(100.0)
    assert order_eval(AsymptoticOrder(1, 1), 20) == pytest.approx(20 * math.log(20))
    assert order_eval(AsymptoticOrder(1, 1), 20) == pytest.approx(59.915, abs=5e-4)
    assert order_eval(AsymptoticOrder(F(3, 2), F(-1, 2)), 55) == pytest.approx(203.8, abs=0.05)


def test_order_eval_log_regime():
    for n in (0, 1, 2):
        with pytest.raises(ValueError, match="log regime undefined"):
            order_eval(AsymptoticOrder(1, 0), n)


def test_exact_parameters():
    assert exact(0.1) == F(1, 10)
    assert exact(1.5) == F(3, 2)
    assert AsymptoticOrder(0.5, -0.5).key == (F(1, 2), F(-1, 2))


def test_order_multiplication_and_compare():
    a = AsymptoticOrder(F(3, 2), F(-1, 2))
    b = AsymptoticOrder(F(1, 2), F(1, 2), Bound.OMEGA)
    c = a * b
    assert c.key == (2, 0) and c.bound is Bound.OMEGA
    assert AsymptoticOrder(1, 5) < AsymptoticOrder(F(11, 10), -3)
    assert AsymptoticOrder(1, 1) > AsymptoticOrder(1, 0)
    assert a.same_growth(a.with_bound(Bound.OMEGA))


@pytest.mark.parametrize("order,text", [
    (AsymptoticOrder(F(3, 2), F(-1, 2), Bound.OMEGA), "Omega(n^{3/2} * log(n)^{-1/2})"),
    (AsymptoticOrder(2, 0, Bound.OMEGA), "Omega(n^2)"),
    (AsymptoticOrder(1, 0, Bound.OMEGA), "Omega(n)"),
    (AsymptoticOrder(1, 1, Bound.OMEGA), "Omega(n * log(n))"),
    (AsymptoticOrder(0, 0), "Theta(1)"),
    (AsymptoticOrder(F(1, 2), -2), "Theta(n^{1/2} * log(n)^{-2})"),
    (AsymptoticOrder(-1, F(5, 2)), "Theta(n^{-1} * log(n)^{5/2})"),
])
def test_canonical_strings(order, text):
    assert str(order) == text


@given(st.fractions(F(1, 4), 4, max_denominator=4), st.fractions(-3, 3, max_denominator=2))
def test_order_eval_monotone(a, b):
    # d/dn of n^a (ln n)^b has the sign of a + b / ln n, which rises with n
    if a + b / F(math.log(8)) <= 0:
        return
    o = AsymptoticOrder(a, b)
    vals = [order_eval(o, n) for n in range(8, 400)]
    assert all(x < y for x, y in zip(vals, vals[1:]))


def test_load_orders_are_monotone_from_8():
    for lam in LambdaClass:
        for i, s, d in GRID:
            o = ln_order(lam, P(i, s, d))
            assert o.n_exp > 0
            assert o.n_exp + o.log_exp / F(math.log(8)) > 0


# --- table examples ------------------------------------------------------------

@pytest.mark.parametrize("s,expected", [
    (3, (0, 0)), (2, (0, 1)), (1.5, (F(1, 4), 0)), (1, (F(1, 2), F(-1, 2))), (0.5, (F(1, 2), 0)), (0, (F(1, 2), 0)),
])
def test_lp_order(s, expected):
    assert key(lp_order(s, "in_n")) == expected
    assert key(lp_order(s, "in_r")) == (F(1, 2), 0)


def test_lp_mode_rejected():
    with pytest.raises(ValueError):
        lp_order(1, "in_q")


@pytest.mark.parametrize("i,d,expected", [
    (0, 2, (0, 0)), (0.5, 0.5, (F(1, 2), 0)), (1, 1, (F(1, 2), -2)),
])
def test_g_order(i, d, expected):
    assert key(g_order(i, d)) == expected


@pytest.mark.parametrize("i,d,expected", [
    (0.5, 0.5, (2, 0)), (2.5, 3, (1, 0)), (1, 1, (2, -2)), (2.5, 0.5, (1, 0)), (1.5, 0.5, (F(3, 2), 0)),
])
def test_w_order(i, d, expected):
    assert key(w_order(i, d)) == expected


@pytest.mark.parametrize("lam,i,s,d,expected", [
    (CONST, 0.5, 0.5, 0.5, (2, 0)),
    (CONST, 0, 1, 3, (F(3, 2), F(-1, 2))),
    (CONST, 0, 2, 2.5, (1, 1)),
    (CONST, 0, 3, 3, (1, 0)),
    (CONST, 0, 2, 3, (1, 1)),
    (LINEAR, 0.5, 0.5, 0.5, (3, 0)),
])
def test_ln_order(lam, i, s, d, expected):
    o = ln_order(lam, P(i, s, d))
    assert key(o) == expected and o.bound is Bound.OMEGA


def test_ln_order_requires_uniform_geography():
    with pytest.raises(ValueError, match="uniform geography"):
        ln_order(CONST, ExponentParams(i=1, s=1, d=1, g=0.2))


@pytest.mark.parametrize("lam,i,s,d,law", [
    (CONST, 0, 3, 3, LawKind.SARNOFF),
    (CONST, 0, 2, 2, LawKind.ODLYZKO),
    (LINEAR, 0.5, 1, 0.5, LawKind.CUBE),
    (CONST, 0.5, 0.5, 0.5, LawKind.METCALFE),
    (CONST, 0, 1, 3, LawKind.OTHER),
])
def test_classify_examples(lam, i, s, d, law):
    assert classify_law(lam, P(i, s, d)).law is law


# --- structural properties ----------------------------------------------------

@pytest.mark.parametrize("name,table", [("L_P", LP_TABLE), ("G", G_TABLE), ("W", W_TABLE), ("load", LOAD_TABLE)])
def test_tables_partition_the_grid(name, table):
    for i, s, d in GRID:
        hits = sum(1 for pred, _ in table if pred(i, s, d))
        assert hits == 1, (name, i, s, d, hits)


def test_lambda_multiplicativity():
    for i, s, d in GRID:
        base = ln_order(CONST, P(i, s, d))
        assert key(ln_order(SQRT, P(i, s, d))) == (base.n_exp + F(1, 2), base.log_exp)
        assert key(ln_order(LINEAR, P(i, s, d))) == (base.n_exp + 1, base.log_exp)


def test_half_integer_log_exponents():
    seen = {ln_order(CONST, P(i, s, d)).log_exp for i, s, d in GRID}
    assert all(x.denominator in (1, 2) for x in seen)
    assert F(-1, 2) in seen and F(1, 2) in seen


def _limit(f, *args, at, eps=EPS):
    """Order just beside a boundary; the power may move by O(eps), the log may not."""
    args = list(args)
    args[at] += eps
    return f(*args)


def _continuous(a, b):
    return abs(a.n_exp - b.n_exp) <= 2 * EPS and a.log_exp == b.log_exp


# (function, boundary args, perturbed argument, side, continuous?)
BOUNDARIES = [
    # G(i, d)
    (g_order, (2, F(3, 2)), 1, +1, True),
    (g_order, (1, F(3, 2)), 1, +1, False),
    (g_order, (0, F(3, 2)), 1, -1, False),
    (g_order, (F(1, 2), 1), 1, +1, False),
    (g_order, (F(1, 2), 1), 1, -1, False),
    (g_order, (2, 1), 1, -1, True),
    (g_order, (F(5, 4), F(5, 4)), 0, +1, False),
    (g_order, (F(5, 4), F(5, 4)), 0, -1, False),
    # W(i, d)
    (w_order, (2, 2), 1, +1, True),
    (w_order, (1, 2), 1, +1, False),
    (w_order, (0, 2), 1, -1, False),
    (w_order, (F(5, 4), F(7, 4)), 0, +1, False),
    (w_order, (F(5, 4), F(7, 4)), 0, -1, False),
    (w_order, (1, F(3, 2)), 0, -1, False),
    (w_order, (3, 1), 1, -1, True),
    # L_P(s)
    (lambda s: lp_order(s), (2,), 0, +1, False),
    (lambda s: lp_order(s), (2,), 0, -1, False),
    (lambda s: lp_order(s), (1,), 0, +1, False),
    (lambda s: lp_order(s), (1,), 0, -1, False),
]


@pytest.mark.parametrize("f,args,at,side,continuous", BOUNDARIES)
def test_boundaries(f, args, at, side, continuous):
    here = f(*args)
    beside = _limit(f, *args, at=at, eps=side * EPS)
    assert _continuous(here, beside) is continuous


def test_load_boundaries():
    def load(i, s, d):
        return ln_order(CONST, P(i, s, d))

    # s crossing 2 at large d: log factor appears exactly on the line
    assert _continuous(load(0, 2, 3), load(0, 2 + EPS, 3)) is False
    assert key(load(0, 2, 3)) == (1, 1)
    # s crossing 1: n^{3/2} on both sides, sqrt(log) divisor only on the line
    assert key(load(0, 1, 3)) == (F(3, 2), F(-1, 2))
    assert _continuous(load(0, 1 - EPS, 3), load(0, 1 + EPS, 3))
    # d crossing 2 for i > 1 at s > 2 is continuous
    assert _continuous(load(3, 3, 2), load(3, 3, 2 + EPS))
    assert _continuous(load(3, 3, 2), load(3, 3, 2 - EPS))


# --- law-condition rows, transcribed independently ------------------------------

LAW_ROWS = [
    (LawKind.METCALFE, CONST, lambda i, s, d: s >= 0 and 0 <= d < 1 and 0 <= i < 1),
    (LawKind.METCALFE, SQRT, lambda i, s, d: 0 <= s < 1 and d > F(3, 2) and i >= 0),
    (LawKind.METCALFE, SQRT, lambda i, s, d: 0 <= s < 1 and d == F(3, 2) and i > 1),
    (LawKind.METCALFE, SQRT, lambda i, s, d: 0 <= s < 1 and 1 < d < F(3, 2) and i > F(5, 2) - d),
    (LawKind.METCALFE, SQRT, lambda i, s, d: 0 <= s < 1 and d == 1 and i >= 2),
    (LawKind.METCALFE, SQRT, lambda i, s, d: 0 <= s < 1 and 0 <= d < 1 and i > F(3, 2)),
    (LawKind.SARNOFF, CONST, lambda i, s, d: s > 2 and d > 2 and i >= 0),
    (LawKind.SARNOFF, CONST, lambda i, s, d: s > 2 and d == 2 and i > 1),
    (LawKind.SARNOFF, CONST, lambda i, s, d: s > 2 and 1 < d < 2 and i > 3 - d),
    (LawKind.SARNOFF, CONST, lambda i, s, d: s > 2 and d == 1 and i >= 2),
    (LawKind.SARNOFF, CONST, lambda i, s, d: s > 2 and 0 <= d < 1 and i > 2),
    (LawKind.ODLYZKO, CONST, lambda i, s, d: s == 2 and d >= 2 and i >= 0),
    (LawKind.ODLYZKO, CONST, lambda i, s, d: s > 2 and d == 2 and 0 <= i < 1),
    (LawKind.ODLYZKO, CONST, lambda i, s, d: s == 2 and 1 <= d < 2 and i >= 3 - d),
    (LawKind.ODLYZKO, CONST, lambda i, s, d: s > 2 and 0 <= d < 1 and i == 2),
    (LawKind.ODLYZKO, CONST, lambda i, s, d: s == 2 and 0 <= d < 1 and i >= 2),
    (LawKind.CUBE, LINEAR, lambda i, s, d: s >= 0 and 0 <= d < 1 and 0 <= i < 1),
]


@pytest.mark.parametrize("row", range(len(LAW_ROWS)))
def test_law_condition_row(row):
    law, lam, cond = LAW_ROWS[row]
    hits = [(i, s, d) for i, s, d in GRID if cond(i, s, d)]
    assert hits, "row not sampled"
    for i, s, d in hits:
        assert classify_law(lam, P(i, s, d)).law is law, (i, s, d)


def test_cube_unreachable_under_constant_rate():
    laws = {classify_law(CONST, P(i, s, d)).law for i, s, d in GRID}
    assert LawKind.CUBE not in laws
    assert {LawKind.SARNOFF, LawKind.ODLYZKO, LawKind.METCALFE} <= laws


# --- ratio slope -----------------------------------------------------------------

NS = [256, 512, 1024, 2048, 4096]


def test_ratio_slope_exact_cancellation():
    pts = [(n, 7.0 * n**2) for n in NS]
    assert abs(ratio_slope(pts, AsymptoticOrder(2, 0))) < 1e-12
    assert ratio_slope(pts, AsymptoticOrder(1, 0)) == pytest.approx(1.0, abs=1e-9)


def test_ratio_slope_errors():
    with pytest.raises(ValueError):
        ratio_slope([(10, 1.0), (20, 2.0)], AsymptoticOrder(1, 0))
    with pytest.raises(ValueError):
        ratio_slope([(10, 1.0), (20, 0.0), (40, 3.0)], AsymptoticOrder(1, 0))
    with pytest.raises(ValueError, match="log regime"):
        ratio_slope([(2, 1.0), (20, 2.0), (40, 3.0)], AsymptoticOrder(1, 0))

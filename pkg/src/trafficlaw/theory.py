"""Asymptotic orders and the closed-form scaling tables.

Each table is a flat list of rows ``(predicate(i, s, d), order(i, s, d))``
evaluated first-match.  Inequalities keep the strict / non-strict form of
the published tables so every row can be checked against them by eye.
Exponents are compared as exact rationals: ``exact(0.1) == Fraction(1, 10)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple

import numpy as np

from .randmodels import ExponentParams, LambdaClass


def exact(x) -> Fraction:
    """Exact rational for a parameter value, read from its shortest decimal form."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(repr(float(x)))


class Bound(enum.Enum):
    THETA = "Theta"
    OMEGA = "Omega"


@dataclass(frozen=True, order=False)
class AsymptoticOrder:
    """``n**n_exp * (ln n)**log_exp`` tagged as a Θ or Ω statement."""

    n_exp: Fraction = Fraction(0)
    log_exp: Fraction = Fraction(0)
    bound: Bound = Bound.THETA

    def __post_init__(self):
        object.__setattr__(self, "n_exp", exact(self.n_exp))
        object.__setattr__(self, "log_exp", exact(self.log_exp))

    @property
    def key(self) -> tuple[Fraction, Fraction]:
        return (self.n_exp, self.log_exp)

    def __mul__(self, other: "AsymptoticOrder") -> "AsymptoticOrder":
        bound = Bound.OMEGA if Bound.OMEGA in (self.bound, other.bound) else Bound.THETA
        return AsymptoticOrder(self.n_exp + other.n_exp, self.log_exp + other.log_exp, bound)

    def __lt__(self, other):
        return self.key < other.key

    def __le__(self, other):
        return self.key <= other.key

    def __gt__(self, other):
        return self.key > other.key

    def __ge__(self, other):
        return self.key >= other.key

    def same_growth(self, other) -> bool:
        return self.key == other.key

    def with_bound(self, bound: Bound) -> "AsymptoticOrder":
        return AsymptoticOrder(self.n_exp, self.log_exp, bound)

    def __str__(self):
        return f"{self.bound.value}({self.body()})"

    def body(self) -> str:
        parts = []
        if self.n_exp != 0:
            parts.append("n" + _power(self.n_exp))
        if self.log_exp != 0:
            parts.append("log(n)" + _power(self.log_exp))
        return " * ".join(parts) if parts else "1"


def _power(e: Fraction) -> str:
    if e == 1:
        return ""
    if e.denominator == 1 and e > 0:
        return f"^{e.numerator}"
    if e.denominator == 1:
        return f"^{{{e.numerator}}}"
    return f"^{{{e.numerator}/{e.denominator}}}"


def order_eval(o: AsymptoticOrder, n) -> float:
    if n < 3:
        raise ValueError(f"log regime undefined for n={n} (need n >= 3)")
    return float(n) ** float(o.n_exp) * math.log(n) ** float(o.log_exp)


def _o(n_exp, log_exp=0):
    return AsymptoticOrder(n_exp, log_exp, Bound.THETA)


H = Fraction(1, 2)
Q = Fraction(3, 2)
Row = tuple[Callable[[Fraction, Fraction, Fraction], bool], Callable[[Fraction, Fraction, Fraction], AsymptoticOrder]]


def _lookup(table: list[Row], i, s, d, what: str) -> AsymptoticOrder:
    i, s, d = exact(i), exact(s), exact(d)
    if min(i, s, d) < 0:
        raise ValueError("exponents must be >= 0")
    for pred, order in table:
        if pred(i, s, d):
            return order(i, s, d)
    raise AssertionError(f"no {what} row matches i={i}, s={s}, d={d}")


# Relationship-separation EMST factor: the n-part of L_P(s, r).
LP_TABLE: list[Row] = [
    (lambda i, s, d: s > 2,          lambda i, s, d: _o(0, 0)),
    (lambda i, s, d: s == 2,         lambda i, s, d: _o(0, 1)),
    (lambda i, s, d: 1 < s < 2,      lambda i, s, d: _o(1 - s / 2, 0)),
    (lambda i, s, d: s == 1,         lambda i, s, d: _o(H, -H)),
    (lambda i, s, d: 0 <= s < 1,     lambda i, s, d: _o(H, 0)),
]


def lp_order(s, mode: str = "in_n") -> AsymptoticOrder:
    """Order of |EMST| over r anchors: always ``sqrt(r)`` in r, tabulated in n."""
    if mode == "in_r":
        if exact(s) < 0:
            raise ValueError("exponents must be >= 0")
        return _o(H, 0)
    if mode != "in_n":
        raise ValueError(f"mode must be 'in_r' or 'in_n', got {mode!r}")
    return _lookup(LP_TABLE, 0, s, 0, "L_P")


# Destination-count normalization sum G(i, d).
G_TABLE: list[Row] = [
    (lambda i, s, d: d > Q,                          lambda i, s, d: _o(0)),
    (lambda i, s, d: d == Q and i > 1,               lambda i, s, d: _o(0)),
    (lambda i, s, d: d == Q and 0 <= i <= 1,         lambda i, s, d: _o(0, 1)),
    (lambda i, s, d: 1 < d < Q and i > 5 * H - d,    lambda i, s, d: _o(0)),
    (lambda i, s, d: 1 < d < Q and i == 5 * H - d,   lambda i, s, d: _o(0, 1)),
    (lambda i, s, d: 1 < d < Q and 1 < i < 5 * H - d, lambda i, s, d: _o(5 * H - i - d)),
    (lambda i, s, d: 1 < d < Q and i == 1,           lambda i, s, d: _o(Q - d, -1)),
    (lambda i, s, d: 1 < d < Q and 0 <= i < 1,       lambda i, s, d: _o(Q - d)),
    (lambda i, s, d: d == 1 and i >= Q,              lambda i, s, d: _o(0)),
    (lambda i, s, d: d == 1 and 1 < i < Q,           lambda i, s, d: _o(Q - i, -1)),
    (lambda i, s, d: d == 1 and i == 1,              lambda i, s, d: _o(H, -2)),
    (lambda i, s, d: d == 1 and 0 <= i < 1,          lambda i, s, d: _o(H, -1)),
    (lambda i, s, d: 0 <= d < 1 and i > Q,           lambda i, s, d: _o(0)),
    (lambda i, s, d: 0 <= d < 1 and i == Q,          lambda i, s, d: _o(0, 1)),
    (lambda i, s, d: 0 <= d < 1 and 1 < i < Q,       lambda i, s, d: _o(Q - i)),
    (lambda i, s, d: 0 <= d < 1 and i == 1,          lambda i, s, d: _o(H, -1)),
    (lambda i, s, d: 0 <= d < 1 and 0 <= i < 1,      lambda i, s, d: _o(H)),
]

# Total number of destinations W(i, d) = sum_k r_k.
W_TABLE: list[Row] = [
    (lambda i, s, d: d > 2,                          lambda i, s, d: _o(1)),
    (lambda i, s, d: d == 2 and i > 1,               lambda i, s, d: _o(1)),
    (lambda i, s, d: d == 2 and 0 <= i <= 1,         lambda i, s, d: _o(1, 1)),
    (lambda i, s, d: 1 < d < 2 and i > 3 - d,        lambda i, s, d: _o(1)),
    (lambda i, s, d: 1 < d < 2 and i == 3 - d,       lambda i, s, d: _o(1, 1)),
    (lambda i, s, d: 1 < d < 2 and 1 < i < 3 - d,    lambda i, s, d: _o(4 - i - d)),
    (lambda i, s, d: 1 < d < 2 and i == 1,           lambda i, s, d: _o(3 - d, -1)),
    (lambda i, s, d: 1 < d < 2 and 0 <= i < 1,       lambda i, s, d: _o(3 - d)),
    (lambda i, s, d: d == 1 and i >= 2,              lambda i, s, d: _o(1)),
    (lambda i, s, d: d == 1 and 1 < i < 2,           lambda i, s, d: _o(3 - i, -1)),
    (lambda i, s, d: d == 1 and i == 1,              lambda i, s, d: _o(2, -2)),
    (lambda i, s, d: d == 1 and 0 <= i < 1,          lambda i, s, d: _o(2, -1)),
    (lambda i, s, d: 0 <= d < 1 and i > 2,           lambda i, s, d: _o(1)),
    (lambda i, s, d: 0 <= d < 1 and i == 2,          lambda i, s, d: _o(1, 1)),
    (lambda i, s, d: 0 <= d < 1 and 1 < i < 2,       lambda i, s, d: _o(3 - i)),
    (lambda i, s, d: 0 <= d < 1 and i == 1,          lambda i, s, d: _o(2, -1)),
    (lambda i, s, d: 0 <= d < 1 and 0 <= i < 1,      lambda i, s, d: _o(2)),
]


def g_order(i, d) -> AsymptoticOrder:
    return _lookup(G_TABLE, i, 0, d, "G")


def w_order(i, d) -> AsymptoticOrder:
    return _lookup(W_TABLE, i, 0, d, "W")


# Traffic load L_N / lambda, blocks ordered (d band) x (s band), rows by i.
S_GT2 = lambda s: s > 2               # noqa: E731
S_EQ2 = lambda s: s == 2              # noqa: E731
S_1_2 = lambda s: 1 < s < 2           # noqa: E731
S_EQ1 = lambda s: s == 1              # noqa: E731
S_0_1 = lambda s: 0 <= s < 1          # noqa: E731

LOAD_TABLE: list[Row] = [
    # d > 2
    (lambda i, s, d: d > 2 and S_GT2(s) and i >= 0,             lambda i, s, d: _o(1)),
    (lambda i, s, d: d > 2 and S_EQ2(s) and i >= 0,             lambda i, s, d: _o(1, 1)),
    (lambda i, s, d: d > 2 and S_1_2(s) and i >= 0,             lambda i, s, d: _o(2 - s / 2)),
    (lambda i, s, d: d > 2 and S_EQ1(s) and i >= 0,             lambda i, s, d: _o(Q, -H)),
    (lambda i, s, d: d > 2 and S_0_1(s) and i >= 0,             lambda i, s, d: _o(Q)),
    # d = 2
    (lambda i, s, d: d == 2 and S_GT2(s) and i > 1,             lambda i, s, d: _o(1)),
    (lambda i, s, d: d == 2 and S_GT2(s) and 0 <= i <= 1,       lambda i, s, d: _o(1, 1)),
    (lambda i, s, d: d == 2 and S_EQ2(s) and i >= 0,            lambda i, s, d: _o(1, 1)),
    (lambda i, s, d: d == 2 and S_1_2(s) and i >= 0,            lambda i, s, d: _o(2 - s / 2)),
    (lambda i, s, d: d == 2 and S_EQ1(s) and i >= 0,            lambda i, s, d: _o(Q, -H)),
    (lambda i, s, d: d == 2 and S_0_1(s) and i >= 0,            lambda i, s, d: _o(Q)),
    # 3/2 < d < 2
    (lambda i, s, d: Q < d < 2 and S_GT2(s) and i > 3 - d,      lambda i, s, d: _o(1)),
    (lambda i, s, d: Q < d < 2 and S_GT2(s) and i == 3 - d,     lambda i, s, d: _o(1, 1)),
    (lambda i, s, d: Q < d < 2 and S_GT2(s) and 1 < i < 3 - d,  lambda i, s, d: _o(4 - i - d)),
    (lambda i, s, d: Q < d < 2 and S_GT2(s) and i == 1,         lambda i, s, d: _o(3 - d, -1)),
    (lambda i, s, d: Q < d < 2 and S_GT2(s) and 0 <= i < 1,     lambda i, s, d: _o(3 - d)),
    (lambda i, s, d: Q < d < 2 and S_EQ2(s) and i >= 3 - d,     lambda i, s, d: _o(1, 1)),
    (lambda i, s, d: Q < d < 2 and S_EQ2(s) and 1 < i < 3 - d,  lambda i, s, d: _o(4 - i - d)),
    (lambda i, s, d: Q < d < 2 and S_EQ2(s) and i == 1,         lambda i, s, d: _o(3 - d, -1)),
    (lambda i, s, d: Q < d < 2 and S_EQ2(s) and 0 <= i < 1,     lambda i, s, d: _o(3 - d)),
    (lambda i, s, d: Q < d < 2 and S_1_2(s) and i >= 3 - d,     lambda i, s, d: _o(2 - s / 2)),
    (lambda i, s, d: Q < d < 2 and S_1_2(s) and 1 < i < 3 - d,  lambda i, s, d: _o(4 - i - d)),
    (lambda i, s, d: Q < d < 2 and S_1_2(s) and i == 1,         lambda i, s, d: _o(3 - d, -1)),
    (lambda i, s, d: Q < d < 2 and S_1_2(s) and 0 <= i < 1,     lambda i, s, d: _o(3 - d)),
    (lambda i, s, d: Q < d < 2 and S_EQ1(s) and i >= 0,         lambda i, s, d: _o(Q, -H)),
    (lambda i, s, d: Q < d < 2 and S_0_1(s) and i >= 0,         lambda i, s, d: _o(Q)),
    # d = 3/2
    (lambda i, s, d: d == Q and S_GT2(s) and i > Q,             lambda i, s, d: _o(1)),
    (lambda i, s, d: d == Q and S_GT2(s) and i == Q,            lambda i, s, d: _o(1, 1)),
    (lambda i, s, d: d == Q and S_GT2(s) and 1 < i < Q,         lambda i, s, d: _o(5 * H - i)),
    (lambda i, s, d: d == Q and S_GT2(s) and i == 1,            lambda i, s, d: _o(Q, -1)),
    (lambda i, s, d: d == Q and S_GT2(s) and 0 <= i < 1,        lambda i, s, d: _o(Q)),
    (lambda i, s, d: d == Q and S_EQ2(s) and i >= Q,            lambda i, s, d: _o(1, 1)),
    (lambda i, s, d: d == Q and S_EQ2(s) and 1 < i < Q,         lambda i, s, d: _o(5 * H - i)),
    (lambda i, s, d: d == Q and S_EQ2(s) and i == 1,            lambda i, s, d: _o(Q, -1)),
    (lambda i, s, d: d == Q and S_EQ2(s) and 0 <= i < 1,        lambda i, s, d: _o(Q)),
    (lambda i, s, d: d == Q and S_1_2(s) and i >= Q,            lambda i, s, d: _o(2 - s / 2)),
    (lambda i, s, d: d == Q and S_1_2(s) and 1 < i < Q,         lambda i, s, d: _o(5 * H - i)),
    (lambda i, s, d: d == Q and S_1_2(s) and i == 1,            lambda i, s, d: _o(Q, -1)),
    (lambda i, s, d: d == Q and S_1_2(s) and 0 <= i < 1,        lambda i, s, d: _o(Q)),
    (lambda i, s, d: d == Q and S_EQ1(s) and i > 1,             lambda i, s, d: _o(Q, -H)),
    (lambda i, s, d: d == Q and S_EQ1(s) and 0 <= i <= 1,       lambda i, s, d: _o(Q, H)),
    (lambda i, s, d: d == Q and S_0_1(s) and i > 1,             lambda i, s, d: _o(Q)),
    (lambda i, s, d: d == Q and S_0_1(s) and 0 <= i <= 1,       lambda i, s, d: _o(Q, 1)),
    # 1 < d < 3/2
    (lambda i, s, d: 1 < d < Q and S_GT2(s) and i > 3 - d,      lambda i, s, d: _o(1)),
    (lambda i, s, d: 1 < d < Q and S_GT2(s) and i == 3 - d,     lambda i, s, d: _o(1, 1)),
    (lambda i, s, d: 1 < d < Q and S_GT2(s) and 1 < i < 3 - d,  lambda i, s, d: _o(4 - i - d)),
    (lambda i, s, d: 1 < d < Q and S_GT2(s) and i == 1,         lambda i, s, d: _o(3 - d, -1)),
    (lambda i, s, d: 1 < d < Q and S_GT2(s) and 0 <= i < 1,     lambda i, s, d: _o(3 - d)),
    (lambda i, s, d: 1 < d < Q and S_EQ2(s) and i >= 3 - d,     lambda i, s, d: _o(1, 1)),
    (lambda i, s, d: 1 < d < Q and S_EQ2(s) and 1 < i < 3 - d,  lambda i, s, d: _o(4 - i - d)),
    (lambda i, s, d: 1 < d < Q and S_EQ2(s) and i == 1,         lambda i, s, d: _o(3 - d, -1)),
    (lambda i, s, d: 1 < d < Q and S_EQ2(s) and 0 <= i < 1,     lambda i, s, d: _o(3 - d)),
    (lambda i, s, d: 1 < d < Q and S_1_2(s) and i >= 3 - d,     lambda i, s, d: _o(2 - s / 2)),
    (lambda i, s, d: 1 < d < Q and S_1_2(s) and 1 < i < 3 - d,  lambda i, s, d: _o(4 - i - d)),
    (lambda i, s, d: 1 < d < Q and S_1_2(s) and i == 1,         lambda i, s, d: _o(3 - d, -1)),
    (lambda i, s, d: 1 < d < Q and S_1_2(s) and 0 <= i < 1,     lambda i, s, d: _o(3 - d)),
    (lambda i, s, d: 1 < d < Q and S_EQ1(s) and i > 5 * H - d,  lambda i, s, d: _o(Q, -H)),
    (lambda i, s, d: 1 < d < Q and S_EQ1(s) and i == 5 * H - d, lambda i, s, d: _o(Q, H)),
    (lambda i, s, d: 1 < d < Q and S_EQ1(s) and 1 < i < 5 * H - d, lambda i, s, d: _o(4 - i - d)),
    (lambda i, s, d: 1 < d < Q and S_EQ1(s) and i == 1,         lambda i, s, d: _o(3 - d, -1)),
    (lambda i, s, d: 1 < d < Q and S_EQ1(s) and 0 <= i < 1,     lambda i, s, d: _o(3 - d)),
    (lambda i, s, d: 1 < d < Q and S_0_1(s) and i > 5 * H - d,  lambda i, s, d: _o(Q)),
    (lambda i, s, d: 1 < d < Q and S_0_1(s) and i == 5 * H - d, lambda i, s, d: _o(Q, 1)),
    (lambda i, s, d: 1 < d < Q and S_0_1(s) and 1 < i < 5 * H - d, lambda i, s, d: _o(4 - i - d)),
    (lambda i, s, d: 1 < d < Q and S_0_1(s) and i == 1,         lambda i, s, d: _o(3 - d, -1)),
    (lambda i, s, d: 1 < d < Q and S_0_1(s) and 0 <= i < 1,     lambda i, s, d: _o(3 - d)),
    # d = 1
    (lambda i, s, d: d == 1 and S_GT2(s) and i >= 2,            lambda i, s, d: _o(1)),
    (lambda i, s, d: d == 1 and S_EQ2(s) and i >= 2,            lambda i, s, d: _o(1, 1)),
    (lambda i, s, d: d == 1 and S_1_2(s) and i >= 2,            lambda i, s, d: _o(2 - s / 2)),
    (lambda i, s, d: d == 1 and S_EQ1(s) and i >= 2,            lambda i, s, d: _o(Q, -H)),
    (lambda i, s, d: d == 1 and S_0_1(s) and i >= 2,            lambda i, s, d: _o(Q)),
    (lambda i, s, d: d == 1 and 1 < i < 2,                      lambda i, s, d: _o(3 - i, -1)),
    (lambda i, s, d: d == 1 and i == 1,                         lambda i, s, d: _o(2, -2)),
    (lambda i, s, d: d == 1 and 0 <= i < 1,                     lambda i, s, d: _o(2, -1)),
    # 0 <= d < 1
    (lambda i, s, d: 0 <= d < 1 and S_GT2(s) and i > 2,         lambda i, s, d: _o(1)),
    (lambda i, s, d: 0 <= d < 1 and S_GT2(s) and i == 2,        lambda i, s, d: _o(1, 1)),
    (lambda i, s, d: 0 <= d < 1 and S_GT2(s) and 1 < i < 2,     lambda i, s, d: _o(3 - i)),
    (lambda i, s, d: 0 <= d < 1 and S_EQ2(s) and i >= 2,        lambda i, s, d: _o(1, 1)),
    (lambda i, s, d: 0 <= d < 1 and S_EQ2(s) and 1 < i < 2,     lambda i, s, d: _o(3 - i)),
    (lambda i, s, d: 0 <= d < 1 and S_1_2(s) and i >= 2,        lambda i, s, d: _o(2 - s / 2)),
    (lambda i, s, d: 0 <= d < 1 and S_1_2(s) and 1 < i < 2,     lambda i, s, d: _o(3 - i)),
    (lambda i, s, d: 0 <= d < 1 and S_EQ1(s) and i > Q,         lambda i, s, d: _o(Q, -H)),
    (lambda i, s, d: 0 <= d < 1 and S_EQ1(s) and i == Q,        lambda i, s, d: _o(Q, H)),
    (lambda i, s, d: 0 <= d < 1 and S_EQ1(s) and 1 < i < Q,     lambda i, s, d: _o(3 - i)),
    (lambda i, s, d: 0 <= d < 1 and S_0_1(s) and i > Q,         lambda i, s, d: _o(Q)),
    (lambda i, s, d: 0 <= d < 1 and S_0_1(s) and i == Q,        lambda i, s, d: _o(Q, 1)),
    (lambda i, s, d: 0 <= d < 1 and S_0_1(s) and 1 < i < Q,     lambda i, s, d: _o(3 - i)),
    (lambda i, s, d: 0 <= d < 1 and i == 1,                     lambda i, s, d: _o(2, -1)),
    (lambda i, s, d: 0 <= d < 1 and 0 <= i < 1,                 lambda i, s, d: _o(2)),
]


def ln_order(lam: LambdaClass, params: ExponentParams) -> AsymptoticOrder:
    """Lower-bound order of the traffic load, including the arrival rate."""
    params.require_uniform()
    cell = _lookup(LOAD_TABLE, params.i, params.s, params.d, "traffic-load")
    return AsymptoticOrder(cell.n_exp + lam.n_exp, cell.log_exp, Bound.OMEGA)


class LawKind(enum.Enum):
    SARNOFF = "Sarnoff"
    ODLYZKO = "Odlyzko"
    METCALFE = "Metcalfe"
    CUBE = "Cube"
    OTHER = "Other"


LAW_ORDERS = {
    LawKind.SARNOFF: (Fraction(1), Fraction(0)),
    LawKind.ODLYZKO: (Fraction(1), Fraction(1)),
    LawKind.METCALFE: (Fraction(2), Fraction(0)),
    LawKind.CUBE: (Fraction(3), Fraction(0)),
}


class Classification(NamedTuple):
    law: LawKind
    order: AsymptoticOrder


def law_of(order: AsymptoticOrder) -> LawKind:
    for law, key in LAW_ORDERS.items():
        if order.key == key:
            return law
    return LawKind.OTHER


def classify_law(lam: LambdaClass, params: ExponentParams) -> Classification:
    order = ln_order(lam, params)
    return Classification(law_of(order), order)


def ratio_slope(samples, theory: AsymptoticOrder) -> float:
    """OLS slope of ``ln(value / theory(n))`` against ``ln n``."""
    pts = [(float(n), float(v)) for n, v in samples]
    if len({n for n, _ in pts}) < 3:
        raise ValueError("ratio_slope needs at least 3 distinct n values")
    if any(v <= 0 for _, v in pts):
        raise ValueError("ratio_slope needs positive values")
    x = np.log([n for n, _ in pts])
    y = np.log([v / order_eval(theory, n) for n, v in pts])
    xc = x - x.mean()
    return float(xc @ (y - y.mean()) / (xc @ xc))

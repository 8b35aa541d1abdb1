"""Hotelling's linear city with two stores.

Consumers are spread uniformly along a line of length ``l``. Store A sits at
distance ``a`` from the left end and store B at distance ``b`` from the right
end; consumers pay price plus ``c`` per unit of distance travelled.

The arithmetic only uses ``+ - * /`` so every function works unchanged on
``fractions.Fraction`` inputs, which the tests use to check identities exactly.
The numeric solver is the exception and always works in floats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from numbers import Real
from typing import Sequence

DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITER = 10_000


class InvalidMarket(ValueError):
    pass


class UndercutRegime(ValueError):
    """One store's price lets it take the whole contested segment.

    ``capturing_store`` is ``"A"`` or ``"B"``; ``capturing_quantity`` is the
    demand that store would serve (its own hinterland plus the whole segment).
    No demand model is applied beyond that note.
    """

    def __init__(self, capturing_store: str, capturing_quantity: Real, detail: str):
        self.capturing_store = capturing_store
        self.capturing_quantity = capturing_quantity
        super().__init__(
            f"store {capturing_store} undercuts the rival and captures the whole "
            f"contested segment (quantity {capturing_quantity}): {detail}"
        )


class NoConvergence(RuntimeError):
    def __init__(self, iterations: int, last: PricePair, change: float):
        self.iterations = iterations
        self.last = last
        self.change = change
        super().__init__(
            f"best responses did not converge in {iterations} iterations "
            f"(last p1={last.p1}, p2={last.p2}, change={change})"
        )


@dataclass(frozen=True)
class MarketConfig:
    l: Real
    a: Real
    b: Real
    c: Real = 1

    def __post_init__(self) -> None:
        problems = []
        if not self.l > 0:
            problems.append(f"l must be > 0 (got {self.l})")
        if not self.c > 0:
            problems.append(f"c must be > 0 (got {self.c})")
        if not self.a >= 0:
            problems.append(f"a must be >= 0 (got {self.a})")
        if not self.b >= 0:
            problems.append(f"b must be >= 0 (got {self.b})")
        if not problems and not self.a + self.b <= self.l:
            problems.append(f"a + b must be <= l (got {self.a} + {self.b} > {self.l})")
        if problems:
            raise InvalidMarket("; ".join(problems))

    @property
    def contested(self) -> Real:
        """Length of the stretch between the two stores."""
        return self.l - self.a - self.b

    def swapped(self) -> MarketConfig:
        return replace(self, a=self.b, b=self.a)


@dataclass(frozen=True)
class PricePair:
    p1: Real
    p2: Real


@dataclass(frozen=True)
class DemandSplit:
    x: Real
    y: Real
    q1: Real
    q2: Real


@dataclass(frozen=True)
class Equilibrium:
    config: MarketConfig
    prices: PricePair
    split: DemandSplit
    profit1: Real
    profit2: Real
    valid: bool
    violations: tuple[str, ...] = ()
    iterations: int | None = field(default=None, compare=False)

    def as_dict(self) -> dict:
        return {
            "l": self.config.l, "a": self.config.a, "b": self.config.b, "c": self.config.c,
            "p1": self.prices.p1, "p2": self.prices.p2,
            "x": self.split.x, "y": self.split.y,
            "q1": self.split.q1, "q2": self.split.q2,
            "pi1": self.profit1, "pi2": self.profit2,
            "valid": self.valid, "violations": list(self.violations),
        }


def _split(m: MarketConfig, p: PricePair) -> DemandSplit:
    s = m.contested
    x = (s + (p.p2 - p.p1) / m.c) / 2
    y = (s + (p.p1 - p.p2) / m.c) / 2
    return DemandSplit(x, y, m.a + x, m.b + y)


def demand_split(m: MarketConfig, p: PricePair) -> DemandSplit:
    """Where the indifferent consumer sits, given both prices.

    Requires each price to be strictly below the rival's price plus the cost of
    crossing the contested segment; otherwise :class:`UndercutRegime`.
    """
    cross = m.c * m.contested
    if not p.p1 < p.p2 + cross:
        raise UndercutRegime("B", m.l - m.a, f"p1={p.p1} >= p2 + c(l-a-b)={p.p2 + cross}")
    if not p.p2 < p.p1 + cross:
        raise UndercutRegime("A", m.l - m.b, f"p2={p.p2} >= p1 + c(l-a-b)={p.p1 + cross}")
    return _split(m, p)


def profits(m: MarketConfig, p: PricePair) -> tuple[Real, Real]:
    d = demand_split(m, p)
    return p.p1 * d.q1, p.p2 * d.q2


def profit_quadratic(m: MarketConfig, p: PricePair) -> tuple[Real, Real]:
    """Profits in expanded quadratic form, defined for any prices.

    Agrees with :func:`profits` wherever the latter is defined.
    """
    l, a, b, c = m.l, m.a, m.b, m.c
    pi1 = (l + a - b) * p.p1 / 2 - p.p1 * p.p1 / (2 * c) + p.p1 * p.p2 / (2 * c)
    pi2 = (l - a + b) * p.p2 / 2 - p.p2 * p.p2 / (2 * c) + p.p1 * p.p2 / (2 * c)
    return pi1, pi2


def best_response(m: MarketConfig, rival_price: Real, store: int) -> Real:
    """Profit-maximizing own price with the rival's price held fixed.

    Zero of the derivative of the quadratic profit in the store's own price.
    """
    edge = m.a - m.b if store == 1 else m.b - m.a
    return (m.c * (m.l + edge) + rival_price) / 2


def _violations(m: MarketConfig, p: PricePair, d: DemandSplit) -> tuple[str, ...]:
    out = []
    if d.q1 < 0:
        out.append("q1_nonnegative")
    if d.q2 < 0:
        out.append("q2_nonnegative")
    cross = m.c * m.contested
    if not p.p1 < p.p2 + cross:
        out.append("no_undercut_p1")
    if not p.p2 < p.p1 + cross:
        out.append("no_undercut_p2")
    if not m.a + m.b < m.l:
        out.append("contested_segment_nonempty")
    return tuple(out)


def _assemble(m: MarketConfig, p: PricePair, iterations: int | None = None) -> Equilibrium:
    d = _split(m, p)
    bad = _violations(m, p, d)
    return Equilibrium(m, p, d, p.p1 * d.q1, p.p2 * d.q2, not bad, bad, iterations)


def equilibrium(m: MarketConfig) -> Equilibrium:
    """Closed-form equilibrium prices, quantities and profits.

    Never raises for a valid config: if the closed form lands outside the
    region where the demand split holds, the result has ``valid=False`` and
    the failed conditions are listed in ``violations``.
    """
    shift = (m.a - m.b) / 3
    p = PricePair(m.c * (m.l + shift), m.c * (m.l - shift))
    # Reduced forms rather than _split, so Fraction inputs stay exact.
    q1 = (m.l + shift) / 2
    q2 = (m.l - shift) / 2
    d = DemandSplit(q1 - m.a, q2 - m.b, q1, q2)
    bad = _violations(m, p, d)
    return Equilibrium(
        m, p, d,
        m.c / 2 * (m.l + shift) ** 2,
        m.c / 2 * (m.l - shift) ** 2,
        not bad, bad,
    )


def best_response_solve(m: MarketConfig, tol: float = DEFAULT_TOL,
                        max_iter: int = DEFAULT_MAX_ITER) -> Equilibrium:
    """Find the equilibrium by alternating best responses.

    Starts from ``p1 = p2 = c*l/2``; store A moves, then B answers the new
    price, until neither price moves by ``tol`` or more. Each full round
    shrinks the error by a factor of 4.
    """
    if not tol > 0:
        raise ValueError("tol must be > 0")
    fm = MarketConfig(float(m.l), float(m.a), float(m.b), float(m.c))
    p1 = p2 = fm.c * fm.l / 2
    change = math.inf
    for it in range(1, max_iter + 1):
        n1 = best_response(fm, p2, 1)
        n2 = best_response(fm, n1, 2)
        change = max(abs(n1 - p1), abs(n2 - p2))
        p1, p2 = n1, n2
        if change < tol:
            return _assemble(fm, PricePair(p1, p2), iterations=it)
    raise NoConvergence(max_iter, PricePair(p1, p2), change)


@dataclass(frozen=True)
class StaticsRow:
    param: str
    value: Real
    equilibrium: Equilibrium | None
    error: str | None = None

    @property
    def valid(self) -> bool:
        return self.equilibrium is not None and self.equilibrium.valid


def comparative_statics(m: MarketConfig, param: str,
                        grid: Sequence[Real]) -> list[StaticsRow]:
    """Closed-form equilibrium for each value of one parameter.

    Grid values that make the config itself invalid yield a row with no
    equilibrium and the error message; the sweep never stops early.
    """
    if param not in ("a", "b", "c", "l"):
        raise ValueError(f"param must be one of a, b, c, l (got {param!r})")
    rows = []
    for value in grid:
        try:
            cfg = replace(m, **{param: value})
        except InvalidMarket as exc:
            rows.append(StaticsRow(param, value, None, str(exc)))
            continue
        rows.append(StaticsRow(param, value, equilibrium(cfg)))
    return rows

"""Iterated logarithm, power towers of twos and the round-count bound."""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

DIGIT_BUDGET = 10**5


@dataclass(frozen=True)
class TowerValue:
    """``^height 2``, exact when it fits the digit budget, else symbolic."""

    height: int
    exact: int | None = None

    @property
    def symbolic(self) -> bool:
        return self.exact is None

    def __str__(self) -> str:
        if self.exact is None:
            return f"^{self.height} 2"
        return decimal_string(self.exact)

    def to_json(self) -> dict:
        return {
            "height": self.height,
            "exact": None if self.exact is None else decimal_string(self.exact),
            "symbolic": f"^{self.height} 2" if self.exact is None else None,
        }

    def at_least(self, x) -> bool:
        # a symbolic tower is larger than any value this library can hold
        return self.exact is None or self.exact >= x


def decimal_string(v: int) -> str:
    """``str(v)`` without the interpreter's int-to-str digit limit."""
    get_limit = getattr(sys, "get_int_max_str_digits", None)
    if get_limit is None:
        return str(v)
    old = get_limit()
    sys.set_int_max_str_digits(0)
    try:
        return str(v)
    finally:
        sys.set_int_max_str_digits(old)


def _pow2_digits(p: int) -> int:
    """Number of decimal digits of 2**p, or a huge sentinel for huge p."""
    if p.bit_length() > 60:
        return sys.maxsize
    return int(p * math.log10(2)) + 1


@lru_cache(maxsize=None)
def power_tower(i: int, digit_budget: int = DIGIT_BUDGET) -> TowerValue:
    """Tower of ``i`` twos; ``power_tower(0)`` is 1."""
    if i < 0:
        raise ValueError("tower height must be non-negative")
    value = 1
    for h in range(1, i + 1):
        if _pow2_digits(value) > digit_budget:
            return TowerValue(i)
        value = 2**value
    return TowerValue(i, value)


def log_star(x) -> int:
    """Iterated base-2 logarithm of a non-negative rational, computed exactly.

    Uses ``log* x <= i  iff  x <= ^i 2`` so no logarithm is ever evaluated.
    """
    if isinstance(x, float):
        x = Fraction(x)
    elif isinstance(x, str):
        x = Fraction(x)
    elif not isinstance(x, Rational):
        raise TypeError(f"log_star needs a rational, got {type(x).__name__}")
    if x < 0:
        raise ValueError("log_star is defined for x >= 0")
    i = 0
    while True:
        tower = power_tower(i)
        if tower.at_least(x):
            return i
        i += 1


def tower_reaches(c: int, levels: int, n: int) -> bool:
    """Whether ``E_levels(c) >= n`` where ``E_0(c) = c`` and ``E_j = 2**E_{j-1}``."""
    v = c
    for _ in range(levels):
        if v >= n.bit_length():
            # 2**v > n already
            return True
        v = 2**v
    return v >= n


def derived_lower_bound(n: int, k: int) -> int:
    """Least c such that ``k-1`` exponentiations of c reach n.

    Any valid k-ary c-colouring function over 1..n needs at least this many
    colours: k-1 speedup steps leave a 1-ary function with ``E_{k-1}(c)``
    colours, and that count must be at least n.
    """
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    c = 1
    while not tower_reaches(c, k - 1, n):
        c += 1
    return c


@dataclass(frozen=True)
class RoundBound:
    n: int
    log_star_n: int
    rational: Fraction
    rounds: int

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "log_star": self.log_star_n,
            "bound": str(self.rational),
            "min_rounds": self.rounds,
        }


def round_lower_bound(n: int) -> RoundBound:
    """``log*(n)/2 - 1`` exactly, plus its ceiling clamped at zero."""
    if n < 1:
        raise ValueError("n must be >= 1")
    ls = log_star(n)
    bound = Fraction(ls, 2) - 1
    return RoundBound(n, ls, bound, max(0, math.ceil(bound)))

"""The subset speedup transformation, the unary base check and speedup traces.

Speeding up a k-ary table A gives a (k-1)-ary table B where B(t) is the set
of colours A takes on every one-step extension ``t + (y,)``, ``y > t[-1]``.
Sets are encoded as integers 1..2^c.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .core import ColouringFunction, GuardError, ValidityReport, rank_index, table_guard, verify
from .numerics import decimal_string, derived_lower_bound, log_star, power_tower


def encode_subset(subset, c: int) -> int:
    """Subset of 1..c to 1 + its characteristic bit vector (bit i-1 for colour i)."""
    code = 1
    for i in set(subset):
        if not 1 <= i <= c:
            raise ValueError(f"colour {i} outside 1..{c}")
        code += 1 << (i - 1)
    return code


def decode_subset(code: int, c: int) -> frozenset[int]:
    if not 1 <= code <= 2**c:
        raise ValueError(f"code {code} outside 1..2^{c}")
    bits = code - 1
    return frozenset(i + 1 for i in range(c) if bits >> i & 1)


class InvalidInputError(ValueError):
    def __init__(self, report: ValidityReport, message: str = "input table is not valid"):
        super().__init__(message)
        self.report = report


def check_colour_growth(c: int) -> None:
    guard = table_guard()
    # 2**c > guard, without building 2**c for huge c
    if c >= guard.bit_length() and 2**c > guard:
        raise GuardError(f"colour count 2^{c} exceeds the size guard {guard}")


def speedup(a: ColouringFunction) -> ColouringFunction:
    """Build the (k-1)-ary 2^c-colour table from a k-ary c-colour table.

    Defined for any table; the output is only guaranteed valid when ``a`` is.
    """
    if a.k < 2:
        raise ValueError("cannot speed up a 1-ary table")
    check_colour_growth(a.c)
    n, k = a.n, a.k
    index = rank_index(n, k)
    table = a.table
    out = []
    for t in combinations(range(1, n + 1), k - 1):
        bits = 0
        for y in range(t[-1] + 1, n + 1):
            bits |= 1 << (table[index[t + (y,)]] - 1)
        out.append(bits + 1)
    return ColouringFunction(n, k - 1, 2**a.c, tuple(out))


@dataclass(frozen=True)
class BaseVerdict:
    n: int
    colour_count: int
    valid: bool
    witness: tuple[int, int] | None

    @property
    def holds(self) -> bool:
        return self.valid and self.colour_count >= self.n

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "colour_count": decimal_string(self.colour_count),
            "valid": self.valid,
            "colour_count_at_least_n": self.colour_count >= self.n,
            "holds": self.holds,
            "witness": None if self.witness is None else list(self.witness),
        }


def base_check(f: ColouringFunction) -> BaseVerdict:
    """Unary case: valid iff all n values differ, which forces c >= n.

    On an invalid table returns the lexicographically first pair
    ``x1 < x2`` with equal colours (always exists when c < n).
    """
    if f.k != 1:
        raise ValueError(f"base check needs a 1-ary table, got arity {f.k}")
    seen: dict[int, int] = {}
    witness = None
    for x2, v in enumerate(f.table, start=1):
        if v in seen:
            cand = (seen[v], x2)
            if witness is None or cand < witness:
                witness = cand
        else:
            seen[v] = x2
    return BaseVerdict(f.n, f.c, witness is None, witness)


@dataclass(frozen=True)
class TraceStep:
    arity: int
    colour_count: int
    required: int
    tower_height: int | None

    def to_json(self) -> dict:
        d = {
            "arity": self.arity,
            "colour_count": decimal_string(self.colour_count),
            "required_colours": decimal_string(self.required),
        }
        if self.tower_height is not None:
            d["tower_bound"] = power_tower(self.tower_height).to_json()
        return d


@dataclass
class SpeedupTrace:
    """Certificate of repeated speedup down to arity 1 plus the base check."""

    n: int
    steps: list[TraceStep]
    base: BaseVerdict
    final: ColouringFunction = field(repr=False)

    @property
    def arity(self) -> int:
        return self.steps[0].arity

    @property
    def tower_bound_holds(self) -> bool | None:
        # only meaningful when the input uses at most ^2 2 = 4 colours
        if self.steps[0].colour_count > 4:
            return None
        return power_tower(self.arity + 1).at_least(self.n)

    def to_json(self) -> dict:
        k = self.arity
        ls = log_star(self.n)
        return {
            "n": self.n,
            "steps": [s.to_json() for s in self.steps],
            "base_verdict": self.base.to_json(),
            "conclusion": {
                "final_colour_count_at_least_n": self.base.holds,
                "tower_bound_holds": self.tower_bound_holds,
                "log_star": {
                    "k_plus_1": k + 1,
                    "log_star_n": ls,
                    "holds": k + 1 >= ls,
                    "applies": self.steps[0].colour_count <= 4,
                },
            },
        }


class TraceRefused(GuardError):
    def __init__(self, step: int, arity: int, colour_count: int):
        symbolic = f"2^{decimal_string(colour_count)}"
        super().__init__(
            f"stopped before step {step}: arity {arity} table would need {symbolic} colours"
        )
        self.step = step
        self.arity = arity
        self.symbolic_colour_count = symbolic


def iterate_speedup(a: ColouringFunction, threads: int = 1) -> SpeedupTrace:
    """Speed a valid table down to arity 1, re-verifying every intermediate table."""
    report = verify(a, threads=threads)
    if not report.is_valid:
        raise InvalidInputError(report)
    n = a.n
    small_input = a.c <= 4

    def step_for(f: ColouringFunction, i: int) -> TraceStep:
        return TraceStep(f.k, f.c, derived_lower_bound(n, f.k), i + 2 if small_input else None)

    steps = [step_for(a, 0)]
    current = a
    while current.k > 1:
        try:
            check_colour_growth(current.c)
        except GuardError:
            raise TraceRefused(len(steps), current.k - 1, current.c) from None
        current = speedup(current)
        report = verify(current, threads=threads)
        if not report.is_valid:
            raise AssertionError(
                f"speedup produced an invalid table at arity {current.k}: {report.violations[:3]}"
            )
        steps.append(step_for(current, len(steps)))
    return SpeedupTrace(n, steps, base_check(current), current)

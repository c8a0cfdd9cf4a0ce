"""Radius-T algorithms on directed cycles.

A node at position i sees the identifiers ``ids[i-T..i+T]`` read along the
cycle direction, itself in the centre, and outputs a colour in {1, 2, 3}.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import permutations
from typing import Callable, Mapping, Sequence

from .core import ColouringFunction, FormatError, check_table_size

COLOURS = (1, 2, 3)


@dataclass(frozen=True)
class CycleInstance:
    ids: tuple[int, ...]

    def __post_init__(self):
        ids = tuple(self.ids)
        n = len(ids)
        if n < 2:
            raise ValueError("a cycle needs at least 2 nodes")
        if sorted(ids) != list(range(1, n + 1)):
            raise ValueError(f"identifiers must be a permutation of 1..{n}")
        object.__setattr__(self, "ids", ids)

    @property
    def n(self) -> int:
        return len(self.ids)

    def window(self, i: int, radius: int) -> tuple[int, ...]:
        n = len(self.ids)
        return tuple(self.ids[(i + d) % n] for d in range(-radius, radius + 1))

    def position(self, ident: int) -> int:
        return self.ids.index(ident)

    @classmethod
    def random(cls, n: int, seed: int = 0) -> "CycleInstance":
        ids = list(range(1, n + 1))
        random.Random(seed).shuffle(ids)
        return cls(tuple(ids))

    @classmethod
    def load(cls, path) -> "CycleInstance":
        ids = []
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    ids.append(int(line))
                except ValueError:
                    raise FormatError(f"{path}:{lineno}: not an identifier: {line!r}") from None
        try:
            return cls(tuple(ids))
        except ValueError as exc:
            raise FormatError(f"{path}: {exc}") from None


class UndefinedWindow(ValueError):
    """The algorithm has no output for this neighbourhood."""


@dataclass(frozen=True)
class RadiusAlgorithm:
    """Maps each (2T+1)-window of distinct identifiers to a colour in {1,2,3}."""

    radius: int
    rule: Callable[[tuple[int, ...]], int]
    name: str = "rule"

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("radius must be non-negative")

    @property
    def arity(self) -> int:
        return 2 * self.radius + 1

    def __call__(self, window: Sequence[int]) -> int:
        window = tuple(window)
        if len(window) != self.arity:
            raise ValueError(f"{self.name} expects {self.arity} identifiers, got {len(window)}")
        v = self.rule(window)
        if v not in COLOURS:
            raise ValueError(f"{self.name} returned colour {v!r} for {window}, expected 1, 2 or 3")
        return v

    @classmethod
    def from_table(cls, radius: int, table: Mapping[tuple[int, ...], int],
                   name: str = "table") -> "RadiusAlgorithm":
        """Explicit table over ordered windows of distinct identifiers."""
        def rule(window):
            try:
                return table[window]
            except KeyError:
                raise UndefinedWindow(f"{name} has no entry for {window}") from None
        return cls(radius, rule, name)

    @classmethod
    def from_colouring_function(cls, f: ColouringFunction, name: str = "table") -> "RadiusAlgorithm":
        """Use a colouring function as a rule; only increasing windows are defined."""
        if f.k % 2 == 0:
            raise ValueError(f"arity {f.k} is even, a radius-T window has odd length")
        if f.c > 3:
            raise ValueError(f"{name} uses {f.c} colours, an algorithm may use at most 3")

        def rule(window):
            if any(a >= b for a, b in zip(window, window[1:])):
                raise UndefinedWindow(f"{name} is only defined on increasing windows, got {window}")
            return f(*window)
        return cls(f.k // 2, rule, name)


def bucket(radius: int = 0) -> RadiusAlgorithm:
    """Colour ``((id - 1) mod 3) + 1`` of the centre node."""
    return RadiusAlgorithm(radius, lambda w: (w[len(w) // 2] - 1) % 3 + 1, "builtin:bucket")


def constant(radius: int = 0, colour: int = 1) -> RadiusAlgorithm:
    return RadiusAlgorithm(radius, lambda w: colour, f"builtin:constant{colour}")


@dataclass
class RunOutcome:
    colours: list[int]
    proper: bool
    violations: list[tuple[int, int]]
    rounds_used: int

    def to_json(self) -> dict:
        return {
            "colours": self.colours,
            "proper": self.proper,
            "violations": [list(v) for v in self.violations],
            "rounds_used": self.rounds_used,
        }


def check_colouring(colours: Sequence[int], rounds: int) -> RunOutcome:
    n = len(colours)
    bad = [(i, (i + 1) % n) for i in range(n) if colours[i] == colours[(i + 1) % n]]
    return RunOutcome(list(colours), not bad, bad, rounds)


def _require_distinct_windows(n: int, radius: int) -> None:
    if n < 2 * radius + 2:
        raise ValueError(
            f"cycle of {n} nodes is too short for radius {radius}: need n >= {2 * radius + 2}"
        )


def run_on_cycle(alg: RadiusAlgorithm, cycle: CycleInstance) -> RunOutcome:
    """Every node applies the rule to its window; then adjacent pairs are compared."""
    _require_distinct_windows(cycle.n, alg.radius)
    colours = [alg(cycle.window(i, alg.radius)) for i in range(cycle.n)]
    return check_colouring(colours, alg.radius)


def extract_colouring_function(alg: RadiusAlgorithm, n: int) -> ColouringFunction:
    """Restrict the rule to increasing windows: a (2T+1)-ary 3-colour table."""
    _require_distinct_windows(n, alg.radius)
    check_table_size(n, alg.arity)
    return ColouringFunction.from_rule(n, alg.arity, 3, alg)


def witness_cycle(violation: Sequence[int], n: int) -> CycleInstance:
    """Cycle with the violating ids consecutive, the rest appended ascending.

    If ``violation`` is an increasing (2T+2)-tuple on which an extracted table
    repeats a colour, the nodes at positions T and T+1 of this cycle see the
    two clashing windows.
    """
    head = list(violation)
    rest = sorted(set(range(1, n + 1)) - set(head))
    return CycleInstance(tuple(head + rest))


# Reference colour reduction (upper-bound side, round-synchronous)

def _cv_step(colour: int, pred: int) -> int:
    diff = colour ^ pred
    i = (diff & -diff).bit_length() - 1
    return 2 * i + (colour >> i & 1)


def reduction_rounds(n: int) -> int:
    """Bit-comparison rounds needed before every colour lies in 0..5.

    Colours start as ``id - 1 < n``; a round maps colours below ``2**L`` to
    colours below ``2L``.
    """
    bound = n
    rounds = 0
    while bound > 6:
        bound = 2 * (bound - 1).bit_length()
        rounds += 1
    return rounds


CLEANUP = (5, 4, 3)


def _cleanup(colours: list[int], target: int) -> list[int]:
    n = len(colours)
    out = list(colours)
    for i, v in enumerate(colours):
        if v == target:
            taken = {colours[i - 1], colours[(i + 1) % n]}
            out[i] = min(x for x in (0, 1, 2) if x not in taken)
    return out


@dataclass
class ReductionRun:
    round_colours: list[list[int]] = field(repr=False)
    outcome: RunOutcome
    complete: bool

    @property
    def rounds(self) -> int:
        return len(self.round_colours)

    @property
    def colour_counts(self) -> list[int]:
        return [len(set(cs)) for cs in self.round_colours]

    def to_json(self) -> dict:
        d = self.outcome.to_json()
        d["round_colour_counts"] = self.colour_counts
        d["complete"] = self.complete
        return d


def reference_colour_reduction(cycle: CycleInstance, rounds: int | None = None) -> ReductionRun:
    """Bit-comparison colour reduction followed by three cleanup rounds.

    Every round reads only the previous round's colours. ``rounds`` caps the
    number of rounds run; the default runs to completion.
    """
    colours = [x - 1 for x in cycle.ids]
    n = len(colours)
    schedule = [None] * reduction_rounds(n) + list(CLEANUP)
    if rounds is not None:
        schedule = schedule[:rounds]
    history = []
    for target in schedule:
        if target is None:
            colours = [_cv_step(colours[i], colours[i - 1]) for i in range(n)]
        else:
            colours = _cleanup(colours, target)
        history.append(list(colours))
    complete = len(schedule) == reduction_rounds(n) + len(CLEANUP)
    outcome = check_colouring([v + 1 for v in colours], len(schedule))
    if complete and not (outcome.proper and max(outcome.colours) <= 3):
        raise AssertionError(f"reduction failed on {cycle.ids}")
    return ReductionRun(history, outcome, complete)


def reduction_algorithm(n: int) -> RadiusAlgorithm:
    """The reference reduction as a radius-T rule, T = total rounds for n ids."""
    cv = reduction_rounds(n)
    radius = cv + len(CLEANUP)

    def rule(window):
        colours = [x - 1 for x in window]
        lo, hi = 0, len(window) - 1
        for _ in range(cv):
            colours = [_cv_step(colours[j], colours[j - 1]) if j > lo else colours[j]
                       for j in range(len(colours))]
            lo += 1
        for target in CLEANUP:
            new = list(colours)
            for j in range(lo + 1, hi):
                if colours[j] == target:
                    taken = {colours[j - 1], colours[j + 1]}
                    new[j] = min(x for x in (0, 1, 2) if x not in taken)
            colours = new
            lo += 1
            hi -= 1
        return colours[radius] + 1

    return RadiusAlgorithm(radius, rule, "builtin:reduction")


def all_cycles(n: int):
    """Every permutation of 1..n as a cycle."""
    for ids in permutations(range(1, n + 1)):
        yield CycleInstance(ids)


def proper_everywhere(alg: RadiusAlgorithm, n: int) -> bool:
    return all(run_on_cycle(alg, cyc).proper for cyc in all_cycles(n))


def ordered_windows(n: int, radius: int):
    """All windows of 2T+1 distinct identifiers, in every order."""
    return permutations(range(1, n + 1), 2 * radius + 1)

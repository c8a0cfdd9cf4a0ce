"""Exact minimum-colour search and enumeration of valid colouring functions.

The constraint graph has one vertex per increasing k-tuple and an edge
between ``t`` and every ``t[1:] + (y,)``. Tuples are assigned in
lexicographic order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator

from .core import ColouringFunction, check_table_size, rank_index
from .numerics import derived_lower_bound


class SearchExhausted(Exception):
    """No colour count up to ``c_max`` admits a valid table."""

    def __init__(self, n: int, k: int, c_max: int, nodes_explored: int):
        super().__init__(f"no valid {k}-ary table over 1..{n} with at most {c_max} colours")
        self.n = n
        self.k = k
        self.c_max = c_max
        self.nodes_explored = nodes_explored


@dataclass
class SearchResult:
    n: int
    k: int
    min_colours: int
    witness: ColouringFunction = field(repr=False)
    nodes_explored: int
    derived_lower_bound: int

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "min_colours": self.min_colours,
            "derived_lower_bound": self.derived_lower_bound,
            "nodes_explored": self.nodes_explored,
        }


def left_neighbours(n: int, k: int) -> list[list[int]]:
    """For each tuple rank, the ranks of ``(x0,) + t[:-1]`` with ``x0 < t[0]``."""
    index = rank_index(n, k)
    out = []
    for t in combinations(range(1, n + 1), k):
        head = t[:-1]
        out.append([index[(x0,) + head] for x0 in range(1, t[0])])
    return out


def shift_neighbours(n: int, k: int) -> list[list[int]]:
    """Left and right shift-neighbours of every tuple, by rank."""
    left = left_neighbours(n, k)
    both: list[list[int]] = [list(ls) for ls in left]
    for r, ls in enumerate(left):
        for j in ls:
            both[j].append(r)
    return both


class _Counter:
    def __init__(self):
        self.nodes = 0


def _backtrack(nbrs: list[list[int]], c: int, *, canonical: bool,
               rng: random.Random | None = None,
               counter: _Counter | None = None) -> Iterator[tuple[int, ...]]:
    """Yield every complete assignment satisfying the shift constraints.

    Variables are assigned in index order. Domains are bitmasks; whenever a
    domain shrinks to one colour that colour is struck from every neighbour,
    and an emptied domain fails the branch. This only discards values that
    cannot appear in any completion, so the yield order is the same as plain
    backtracking.

    With ``canonical`` a colour may only be introduced as max-so-far + 1, which
    keeps one representative per colour permutation. Without ``rng`` colours
    are tried ascending, so results come in lexicographic table order.
    """
    size = len(nbrs)
    if size == 0:
        yield ()
        return
    full = (1 << c) - 1
    dom = [full] * size
    trail: list[tuple[int, int]] = []

    def strike(queue: list[int]) -> bool:
        while queue:
            u = queue.pop()
            bit = dom[u]
            for x in nbrs[u]:
                d = dom[x]
                if d & bit:
                    trail.append((x, d))
                    d &= ~bit
                    dom[x] = d
                    if d == 0:
                        return False
                    if d & (d - 1) == 0:
                        queue.append(x)
        return True

    if c == 1 and not strike(list(range(size))):
        return
    trail.clear()

    def candidates(i: int, top: int) -> list[int]:
        d = dom[i]
        limit = min(c, top + 1) if canonical else c
        cands = [v for v in range(1, limit + 1) if d >> (v - 1) & 1]
        if rng is not None:
            rng.shuffle(cands)
        # popped from the end
        cands.reverse()
        return cands

    pending: list[list[int]] = [[] for _ in range(size)]
    marks = [0] * size
    top = [0] * (size + 1)
    colours = [0] * size
    pending[0] = candidates(0, 0)
    marks[0] = len(trail)
    i = 0
    while i >= 0:
        while len(trail) > marks[i]:
            x, d = trail.pop()
            dom[x] = d
        if not pending[i]:
            i -= 1
            continue
        v = pending[i].pop()
        if counter is not None:
            counter.nodes += 1
        colours[i] = v
        bit = 1 << (v - 1)
        ok = True
        if dom[i] != bit:
            trail.append((i, dom[i]))
            dom[i] = bit
            ok = strike([i])
        if not ok:
            continue
        if i == size - 1:
            yield tuple(colours)
            continue
        top[i + 1] = max(top[i], v)
        i += 1
        marks[i] = len(trail)
        pending[i] = candidates(i, top[i])


def min_colours(n: int, k: int, c_max: int | None = None) -> SearchResult:
    """Least c admitting a valid k-ary c-colouring function over 1..n.

    Iterative deepening from the speedup lower bound; each c gets a complete
    backtracking search, so the reported value is globally minimal.
    """
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    check_table_size(n, k)
    if c_max is None:
        c_max = max(n, 1)
    lb = derived_lower_bound(n, k)
    nbrs = shift_neighbours(n, k)
    counter = _Counter()
    for c in range(lb, c_max + 1):
        found = next(_backtrack(nbrs, c, canonical=True, counter=counter), None)
        if found is not None:
            witness = ColouringFunction(n, k, c, found)
            return SearchResult(n, k, c, witness, counter.nodes, lb)
    raise SearchExhausted(n, k, c_max, counter.nodes)


def enumerate_valid(n: int, k: int, c: int) -> Iterator[ColouringFunction]:
    """Every valid k-ary c-colour table over 1..n, once each, in table order."""
    check_table_size(n, k)
    for table in _backtrack(shift_neighbours(n, k), c, canonical=False):
        yield ColouringFunction(n, k, c, table)


def sample_valid(n: int, k: int, c: int, count: int, seed: int = 0) -> Iterator[ColouringFunction]:
    """``count`` valid tables from seeded randomised restarts (repeats possible).

    Stops early if the space turns out to be empty.
    """
    check_table_size(n, k)
    nbrs = shift_neighbours(n, k)
    rng = random.Random(seed)
    for _ in range(count):
        found = next(_backtrack(nbrs, c, canonical=False, rng=rng), None)
        if found is None:
            return
        yield ColouringFunction(n, k, c, found)


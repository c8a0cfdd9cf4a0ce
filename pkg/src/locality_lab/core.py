"""Identifier spaces, increasing tuples and colouring-function tables.

A k-ary c-colouring function over ``{1..n}`` is stored as a dense tuple of
colours indexed by the lexicographic rank of its argument tuple.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Callable, Iterator, Sequence

DEFAULT_GUARD = 10**8
GUARD_ENV = "LOCALITY_LAB_GUARD"
DEFAULT_MAX_VIOLATIONS = 1000


class GuardError(RuntimeError):
    """A table or colour count would exceed the configured size guard."""


class FormatError(ValueError):
    """Malformed cf-v1 text or another input file."""


def table_guard() -> int:
    raw = os.environ.get(GUARD_ENV)
    if raw is None:
        return DEFAULT_GUARD
    try:
        value = int(raw)
    except ValueError:
        raise GuardError(f"{GUARD_ENV} must be a decimal integer, got {raw!r}")
    if value < 0:
        raise GuardError(f"{GUARD_ENV} must be non-negative")
    return value


def check_table_size(n: int, k: int) -> int:
    size = comb(n, k)
    guard = table_guard()
    if size > guard:
        raise GuardError(f"table for n={n}, k={k} has {size} entries (guard {guard})")
    return size


@dataclass(frozen=True)
class IdSpace:
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"identifier space needs n >= 1, got {self.n!r}")

    def __contains__(self, x) -> bool:
        return isinstance(x, int) and 1 <= x <= self.n

    def tuples(self, k: int) -> Iterator[tuple[int, ...]]:
        """Increasing k-tuples in lexicographic order."""
        return combinations(range(1, self.n + 1), k)


def check_increasing(t: Sequence[int], n: int) -> tuple[int, ...]:
    t = tuple(t)
    if not t:
        raise ValueError("tuple must have at least one element")
    for x in t:
        if not isinstance(x, int) or not 1 <= x <= n:
            raise ValueError(f"{t} has an element outside 1..{n}")
    for a, b in zip(t, t[1:]):
        if a >= b:
            raise ValueError(f"{t} is not strictly increasing")
    return t


def tuple_rank(t: Sequence[int], n: int) -> int:
    """Lexicographic rank of an increasing tuple among all k-subsets of 1..n."""
    t = check_increasing(t, n)
    k = len(t)
    rank = 0
    prev = 0
    for i, x in enumerate(t):
        # skip every tuple whose i-th element is smaller than x
        for y in range(prev + 1, x):
            rank += comb(n - y, k - i - 1)
        prev = x
    return rank


def tuple_unrank(r: int, n: int, k: int) -> tuple[int, ...]:
    if k < 1:
        raise ValueError("k must be >= 1")
    total = comb(n, k)
    if not 0 <= r < total:
        raise ValueError(f"rank {r} out of range [0, {total})")
    out = []
    x = 1
    for i in range(k):
        while True:
            block = comb(n - x, k - i - 1)
            if r < block:
                break
            r -= block
            x += 1
        out.append(x)
        x += 1
    return tuple(out)


@lru_cache(maxsize=64)
def rank_index(n: int, k: int) -> dict[tuple[int, ...], int]:
    """Map from every increasing k-tuple to its rank (cached)."""
    return {t: r for r, t in enumerate(combinations(range(1, n + 1), k))}


@dataclass(frozen=True)
class ColouringFunction:
    """Total table from increasing k-tuples over 1..n to colours 1..c.

    Validity (no shift-related pair sharing a colour) is not enforced here;
    use :func:`verify`.
    """

    n: int
    k: int
    c: int
    table: tuple[int, ...] = field(repr=False)

    def __post_init__(self):
        IdSpace(self.n)
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"arity must be >= 1, got {self.k!r}")
        if not isinstance(self.c, int) or self.c < 1:
            raise ValueError(f"colour count must be >= 1, got {self.c!r}")
        size = check_table_size(self.n, self.k)
        table = tuple(self.table)
        if len(table) != size:
            raise ValueError(
                f"table has {len(table)} entries, expected C({self.n},{self.k})={size}"
            )
        for r, v in enumerate(table):
            if not isinstance(v, int) or not 1 <= v <= self.c:
                raise ValueError(
                    f"colour {v!r} at {tuple_unrank(r, self.n, self.k)} outside 1..{self.c}"
                )
        object.__setattr__(self, "table", table)

    @property
    def id_space(self) -> IdSpace:
        return IdSpace(self.n)

    def __len__(self) -> int:
        return len(self.table)

    def __call__(self, *xs: int) -> int:
        return self.table[self.rank(xs)]

    def rank(self, t: Sequence[int]) -> int:
        try:
            return rank_index(self.n, self.k)[tuple(t)]
        except KeyError:
            check_increasing(t, self.n)
            raise ValueError(f"{tuple(t)} has arity {len(t)}, expected {self.k}")

    def items(self) -> Iterator[tuple[tuple[int, ...], int]]:
        return zip(combinations(range(1, self.n + 1), self.k), self.table)

    def as_dict(self) -> dict[tuple[int, ...], int]:
        return dict(self.items())

    @classmethod
    def from_mapping(cls, n: int, k: int, c: int, mapping) -> "ColouringFunction":
        check_table_size(n, k)
        missing = [t for t in combinations(range(1, n + 1), k) if t not in mapping]
        if missing:
            raise ValueError(f"mapping is not total, first missing tuple {missing[0]}")
        if len(mapping) != comb(n, k):
            raise ValueError("mapping has entries that are not increasing k-tuples over 1..n")
        return cls(n, k, c, tuple(mapping[t] for t in combinations(range(1, n + 1), k)))

    @classmethod
    def from_rule(cls, n: int, k: int, c: int,
                  rule: Callable[[tuple[int, ...]], int]) -> "ColouringFunction":
        check_table_size(n, k)
        return cls(n, k, c, tuple(rule(t) for t in combinations(range(1, n + 1), k)))


@dataclass(frozen=True)
class ValidityReport:
    is_valid: bool
    violations: list[tuple[int, ...]]
    violation_count_exact: bool
    violation_count: int

    def to_json(self) -> dict:
        return {
            "valid": self.is_valid,
            "violations": [list(v) for v in self.violations],
            "violation_count": self.violation_count,
            "violation_count_exact": self.violation_count_exact,
        }


def _scan(f: ColouringFunction, first: int, cap: int) -> tuple[list[tuple[int, ...]], int]:
    index = rank_index(f.n, f.k)
    table = f.table
    k = f.k
    found = []
    count = 0
    for rest in combinations(range(first + 1, f.n + 1), k):
        if table[index[(first,) + rest[:-1]]] == table[index[rest]]:
            count += 1
            if len(found) < cap:
                found.append((first,) + rest)
    return found, count


def verify(f: ColouringFunction, max_violations: int | None = DEFAULT_MAX_VIOLATIONS,
           threads: int = 1) -> ValidityReport:
    """Check that no increasing (k+1)-tuple has equal colours on its two shifts.

    Violations are listed in lexicographic order. The scan is split by first
    element when ``threads > 1``; the report is identical either way.
    """
    cap = comb(f.n, f.k + 1) if max_violations is None else max_violations
    firsts = range(1, f.n - f.k + 1)
    if threads > 1 and len(firsts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda x: _scan(f, x, cap), firsts))
    else:
        parts = [_scan(f, x, cap) for x in firsts]
    violations: list[tuple[int, ...]] = []
    total = 0
    for found, count in parts:
        total += count
        violations.extend(found)
    del violations[cap:]
    return ValidityReport(
        is_valid=total == 0,
        violations=violations,
        violation_count_exact=len(violations) == total,
        violation_count=total,
    )


def normalize(f: ColouringFunction) -> ColouringFunction:
    """Relabel the colours that occur to 1..c' keeping their order."""
    used = sorted(set(f.table))
    relabel = {v: i for i, v in enumerate(used, start=1)}
    return ColouringFunction(f.n, f.k, max(len(used), 1), tuple(relabel[v] for v in f.table))


# cf-v1 text format

def dumps(f: ColouringFunction) -> str:
    lines = [f"cf-v1 n={f.n} k={f.k} c={f.c}"]
    for t, v in f.items():
        lines.append(" ".join(map(str, t)) + f" -> {v}")
    return "\n".join(lines) + "\n"


def _parse_header(line: str) -> tuple[int, int, int]:
    parts = line.split()
    if len(parts) != 4 or parts[0] != "cf-v1":
        raise FormatError(f"bad header {line!r}, expected 'cf-v1 n=<n> k=<k> c=<c>'")
    values = {}
    for part, key in zip(parts[1:], ("n", "k", "c")):
        name, sep, raw = part.partition("=")
        if name != key or not sep or not raw.isdigit():
            raise FormatError(f"bad header field {part!r}, expected {key}=<int>")
        values[key] = int(raw)
    return values["n"], values["k"], values["c"]


def loads(text: str) -> ColouringFunction:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise FormatError("empty cf-v1 document")
    n, k, c = _parse_header(lines[0])
    try:
        IdSpace(n)
        size = check_table_size(n, k)
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    body = lines[1:]
    expected = combinations(range(1, n + 1), k)
    table = []
    for lineno, line in enumerate(body, start=2):
        lhs, sep, rhs = line.partition("->")
        if not sep:
            raise FormatError(f"line {lineno}: missing '->'")
        try:
            t = tuple(int(x) for x in lhs.split())
            v = int(rhs.strip())
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer field in {line!r}") from None
        want = next(expected, None)
        if want is None:
            raise FormatError(f"line {lineno}: more than C({n},{k})={size} entries")
        if t != want:
            if len(t) == k and t in rank_index(n, k):
                kind = "duplicate" if rank_index(n, k)[t] < rank_index(n, k)[want] else "gap or out-of-order"
                raise FormatError(f"line {lineno}: {kind} tuple {t}, expected {want}")
            raise FormatError(f"line {lineno}: {t} is not an increasing {k}-tuple over 1..{n}")
        if not 1 <= v <= c:
            raise FormatError(f"line {lineno}: colour {v} outside 1..{c}")
        table.append(v)
    if len(table) != size:
        raise FormatError(f"expected {size} entries, found {len(table)}")
    return ColouringFunction(n, k, c, tuple(table))


def load(path) -> ColouringFunction:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def dump(f: ColouringFunction, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(f))


def identity_first(n: int, k: int) -> ColouringFunction:
    """The always-valid table x_1..x_k -> x_1, using n colours."""
    return ColouringFunction.from_rule(n, k, n, lambda t: t[0])

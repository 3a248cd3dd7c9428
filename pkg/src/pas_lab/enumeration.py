"""Exhaustive enumeration of small PASs and predicate-driven search.

Tables are produced in lexicographic order of the flattened table, with
undefined encoded as ``n``.  Exhaustive mode stops at ``n = 3``; larger
sizes are searched by deterministic sampling and reported as such.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterator, Optional

import numpy as np

from .classify import is_antisymmetric, is_reflexive, is_second_projection, is_transitive
from .core import FinitePas, canonicalize
from .errors import CapacityError, InputError
from .props import _CHECKERS, Prop

EXHAUSTIVE_BOUND = 3


def _check_size(n: int) -> None:
    if n < 1:
        raise InputError("size must be at least 1")
    if n > EXHAUSTIVE_BOUND:
        raise CapacityError(f"exhaustive enumeration supports n <= {EXHAUSTIVE_BOUND}, got {n}")


def table_count(n: int) -> int:
    return (n + 1) ** (n * n)


def enumerate_all(n: int, prefix: tuple = ()) -> Iterator[FinitePas]:
    """Every table of size ``n`` (starting with the flat ``prefix``) in lexicographic order."""
    _check_size(n)
    for rest in itertools.product(range(n + 1), repeat=n * n - len(prefix)):
        yield FinitePas.from_flat(n, prefix + rest)


def is_canonical(pas: FinitePas) -> bool:
    return canonicalize(pas) == pas


def enumerate_canonical(n: int) -> Iterator[FinitePas]:
    for pas in enumerate_all(n):
        if is_canonical(pas):
            yield pas


# Predicates usable in queries, cheapest first


def _prop(p: Prop) -> Callable[[FinitePas], bool]:
    check = _CHECKERS[p]
    return lambda pas: check(pas.table, pas.n)[0]


def _preorderal(pas: FinitePas) -> bool:
    return is_reflexive(pas) and is_transitive(pas)


def _posetal(pas: FinitePas) -> bool:
    return _preorderal(pas) and is_antisymmetric(pas)


_COST = {
    Prop.TRIVIAL: 0, Prop.FINITE: 0, Prop.TOTAL: 1, Prop.ONE_TOTAL: 1, Prop.ID: 1,
    Prop.ID_R: 1, Prop.EXT: 1, Prop.CONST: 1, Prop.AB: 1, Prop.TM: 2, Prop.ONE_WAY: 2,
    Prop.K: 2, Prop.TO: 3, Prop.TL: 3, Prop.COMP: 3, Prop.ASSOC: 4, Prop.S: 5,
}

PREDICATES: dict = {p.value: (_COST[p], _prop(p)) for p in Prop}
PREDICATES.update({
    "pi2": (1, is_second_projection),
    "reflexive": (1, is_reflexive),
    "transitive": (4, is_transitive),
    "preorderal": (4, _preorderal),
    "ant": (6, is_antisymmetric),
    "posetal": (7, _posetal),
})


def parse_predicates(text) -> frozenset:
    if text is None:
        return frozenset()
    tokens = text.split(",") if isinstance(text, str) else list(text)
    out = set()
    for tok in tokens:
        tok = tok.value if isinstance(tok, Prop) else str(tok).strip().lower()
        if not tok:
            continue
        if tok not in PREDICATES:
            raise InputError(f"unknown property or classification {tok!r}")
        out.add(tok)
    return frozenset(out)


class Mode(str, Enum):
    FIRST = "first"
    ALL = "all"
    COUNT = "count"


@dataclass(frozen=True)
class SearchQuery:
    n: int
    require: frozenset = frozenset()
    forbid: frozenset = frozenset()
    mode: Mode = Mode.FIRST
    canonical_only: bool = False
    samples: int = 100_000  # only used when n exceeds the exhaustive bound
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "require", parse_predicates(self.require))
        object.__setattr__(self, "forbid", parse_predicates(self.forbid))
        object.__setattr__(self, "mode", Mode(self.mode))
        clash = self.require & self.forbid
        if clash:
            raise InputError(f"contradictory query: {sorted(clash)} both required and forbidden")
        if self.n < 1:
            raise InputError("size must be at least 1")

    @property
    def exhaustive(self) -> bool:
        return self.n <= EXHAUSTIVE_BOUND

    def checks(self) -> list:
        items = [(PREDICATES[t][0], t, True) for t in self.require]
        items += [(PREDICATES[t][0], t, False) for t in self.forbid]
        return [(PREDICATES[t][1], want) for _, t, want in sorted(items)]

    def matches(self, pas: FinitePas, checks: Optional[list] = None) -> bool:
        for pred, want in checks if checks is not None else self.checks():
            if pred(pas) != want:
                return False
        return not self.canonical_only or is_canonical(pas)


@dataclass
class SearchResult:
    mode: Mode
    exhaustive: bool
    examined: int
    count: int = 0
    first: Optional[FinitePas] = None
    matches: list = field(default_factory=list)


def worker_count(requested: Optional[int] = None) -> int:
    if requested is not None:
        return max(1, requested)
    env = os.environ.get("PAS_LAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InputError(f"PAS_LAB_THREADS must be an integer, got {env!r}") from None
    return 1


def prefixes(n: int, length: int) -> list:
    """Disjoint flat-table prefixes that partition the enumeration in order."""
    return list(itertools.product(range(n + 1), repeat=min(length, n * n)))


def _scan(args) -> SearchResult:
    q, prefix = args
    checks = q.checks()
    res = SearchResult(q.mode, True, 0)
    for pas in enumerate_all(q.n, prefix):
        res.examined += 1
        if q.matches(pas, checks):
            res.count += 1
            if res.first is None:
                res.first = pas
                if q.mode is Mode.FIRST:
                    break
            if q.mode is Mode.ALL:
                res.matches.append(pas)
    return res


def _merge(q: SearchQuery, parts: list) -> SearchResult:
    # parts are in enumeration order, so the first hit is the earliest non-empty part
    out = SearchResult(q.mode, True, 0)
    for part in parts:
        out.examined += part.examined
        out.count += part.count
        out.matches.extend(part.matches)
        if out.first is None:
            out.first = part.first
    return out


def _sampled(q: SearchQuery) -> SearchResult:
    rng = np.random.default_rng(q.seed)
    checks = q.checks()
    res = SearchResult(q.mode, False, 0)
    size = q.n * q.n
    for flat in rng.integers(0, q.n + 1, size=(q.samples, size)):
        pas = FinitePas.from_flat(q.n, tuple(int(v) for v in flat))
        res.examined += 1
        if q.matches(pas, checks):
            res.count += 1
            if res.first is None:
                res.first = pas
                if q.mode is Mode.FIRST:
                    break
            if q.mode is Mode.ALL:
                res.matches.append(pas)
    return res


def search(q: SearchQuery, workers: Optional[int] = None) -> SearchResult:
    if not q.exhaustive:
        return _sampled(q)
    workers = worker_count(workers)
    if workers == 1 or q.n < 3:
        return _scan((q, ()))
    jobs = [(q, p) for p in prefixes(q.n, 2)]
    from multiprocessing import Pool

    with Pool(workers) as pool:
        if q.mode is Mode.FIRST:
            parts = []
            for part in pool.imap(_scan, jobs):
                parts.append(part)
                if part.first is not None:
                    pool.terminate()
                    break
        else:
            parts = pool.map(_scan, jobs)
    return _merge(q, parts)

"""Finite partial applicative structures.

A PAS on ``n`` elements is stored as an ``n x n`` table whose entry
``table[r][a]`` is the value of ``r . a`` (row = left operand) or ``None``
when the application is undefined.  Elements are the integers ``0..n-1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .endofn import PartialEndoFn
from .errors import CapacityError, InputError, ParseError

UNDEFINED = None
CANONICAL_BOUND = 6


@dataclass(frozen=True)
class FinitePas:
    n: int
    table: tuple

    def __post_init__(self):
        if self.n < 1:
            raise InputError("a PAS needs at least one element")
        if len(self.table) != self.n or any(len(row) != self.n for row in self.table):
            raise InputError(f"table must be {self.n}x{self.n}")
        for row in self.table:
            for v in row:
                if v is not None and not (isinstance(v, int) and 0 <= v < self.n):
                    raise InputError(f"table entry {v!r} out of range for size {self.n}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "FinitePas":
        """Build from nested lists; ``None`` or ``"-"`` marks an undefined entry."""
        table = tuple(
            tuple(None if v is None or v == "-" else int(v) for v in row) for row in rows
        )
        return cls(len(table), table)

    @classmethod
    def from_flat(cls, n: int, flat: Sequence[int]) -> "FinitePas":
        """Build from a flattened table where the value ``n`` encodes undefined."""
        table = tuple(
            tuple(None if v == n else v for v in flat[r * n:(r + 1) * n]) for r in range(n)
        )
        return cls(n, table)

    def flat(self) -> tuple:
        n = self.n
        return tuple(n if v is None else v for row in self.table for v in row)

    @property
    def elements(self) -> range:
        return range(self.n)

    def __str__(self):
        return format_table(self).rstrip("\n")


def trivial_pas() -> FinitePas:
    return FinitePas(1, ((0,),))


def second_projection(n: int) -> FinitePas:
    """The total PAS with ``a . b = b``."""
    return FinitePas(n, tuple(tuple(range(n)) for _ in range(n)))


def _check_element(pas: FinitePas, a) -> None:
    if not isinstance(a, int) or not 0 <= a < pas.n:
        raise InputError(f"element {a!r} out of range for size {pas.n}")


def apply(pas: FinitePas, a: int, b: int) -> Optional[int]:
    _check_element(pas, a)
    _check_element(pas, b)
    return pas.table[a][b]


# Terms: an int is a leaf, App(f, x) is the application f . x


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"

    def __str__(self):
        arg = f"({self.arg})" if isinstance(self.arg, App) else str(self.arg)
        return f"{self.fun} {arg}"


Term = Union[int, App]


def app(*terms: Term) -> Term:
    """Left-associated application: ``app(a, b, c)`` is ``(a . b) . c``."""
    if not terms:
        raise InputError("empty application")
    result = terms[0]
    for t in terms[1:]:
        result = App(result, t)
    return result


def eval_term(pas: FinitePas, t: Term) -> Optional[int]:
    if isinstance(t, App):
        f = eval_term(pas, t.fun)
        if f is None:
            return None
        x = eval_term(pas, t.arg)
        if x is None:
            return None
        return pas.table[f][x]
    _check_element(pas, t)
    return t


def kleene_equal(pas: FinitePas, t: Term, s: Term) -> bool:
    return eval_term(pas, t) == eval_term(pas, s)


def parse_term(text: str) -> Term:
    """Parse juxtaposition syntax, e.g. ``"0 1 2"`` is ``(0 . 1) . 2``."""
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            tokens.append(c)
            i += 1
        elif c.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(int(text[i:j]))
            i = j
        else:
            raise ParseError(f"unexpected character {c!r} in term")
    pos = 0

    def parse_seq():
        nonlocal pos
        items = []
        while pos < len(tokens) and tokens[pos] != ")":
            tok = tokens[pos]
            if tok == "(":
                pos += 1
                items.append(parse_seq())
                if pos >= len(tokens) or tokens[pos] != ")":
                    raise ParseError("unbalanced parentheses in term")
                pos += 1
            else:
                items.append(tok)
                pos += 1
        if not items:
            raise ParseError("empty term")
        return app(*items)

    term = parse_seq()
    if pos != len(tokens):
        raise ParseError("unbalanced parentheses in term")
    return term


def represented_fn(pas: FinitePas, r: int) -> PartialEndoFn:
    _check_element(pas, r)
    return PartialEndoFn(pas.n, pas.table[r])


def is_total(pas: FinitePas) -> bool:
    return all(v is not None for row in pas.table for v in row)


def relabel(pas: FinitePas, perm: Sequence[int]) -> FinitePas:
    """Image of ``pas`` under the bijection ``old -> perm[old]``."""
    n = pas.n
    if sorted(perm) != list(range(n)):
        raise InputError("relabeling must be a permutation of the carrier")
    table = [[None] * n for _ in range(n)]
    for r in range(n):
        for a in range(n):
            v = pas.table[r][a]
            table[perm[r]][perm[a]] = None if v is None else perm[v]
    return FinitePas(n, tuple(map(tuple, table)))


def _relabeled_flat(flat: tuple, n: int, perm: Sequence[int], inv: Sequence[int]) -> tuple:
    # entry (i, j) of the relabeled table is perm[table[inv[i]][inv[j]]]
    out = []
    for i in range(n):
        base = inv[i] * n
        for j in range(n):
            v = flat[base + inv[j]]
            out.append(n if v == n else perm[v])
    return tuple(out)


def canonicalize(pas: FinitePas, bound: int = CANONICAL_BOUND) -> FinitePas:
    """Lexicographically least relabeling; undefined sorts after every element."""
    n = pas.n
    if n > bound:
        raise CapacityError(f"canonicalize supports size <= {bound}, got {n}")
    flat = pas.flat()
    best = flat
    for perm in itertools.permutations(range(n)):
        inv = [0] * n
        for old, new in enumerate(perm):
            inv[new] = old
        cand = _relabeled_flat(flat, n, perm, inv)
        if cand < best:
            best = cand
    return FinitePas.from_flat(n, best)


def is_isomorphic(p: FinitePas, q: FinitePas) -> bool:
    return p.n == q.n and canonicalize(p) == canonicalize(q)


def parse_table(text: str) -> FinitePas:
    lines = [
        (no, line.strip())
        for no, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.strip().startswith("#")
    ]
    if not lines:
        raise ParseError("missing 'size n' header", 1)
    no, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != "size" or not parts[1].isdigit() or int(parts[1]) < 1:
        raise ParseError(f"expected 'size n' header, got {header!r}", no)
    n = int(parts[1])
    rows = lines[1:]
    if len(rows) != n:
        last = rows[-1][0] if rows else no
        raise ParseError(f"expected {n} table rows, got {len(rows)}", last)
    table = []
    for no, line in rows:
        tokens = line.split()
        if len(tokens) != n:
            raise ParseError(f"expected {n} entries, got {len(tokens)}", no)
        row = []
        for tok in tokens:
            if tok == "-":
                row.append(None)
            elif tok.isdigit() and int(tok) < n:
                row.append(int(tok))
            else:
                raise ParseError(f"bad entry {tok!r}", no)
        table.append(tuple(row))
    return FinitePas(n, tuple(table))


def format_table(pas: FinitePas) -> str:
    lines = [f"size {pas.n}"]
    for row in pas.table:
        lines.append(" ".join("-" if v is None else str(v) for v in row))
    return "\n".join(lines) + "\n"


def read_table(path) -> FinitePas:
    with open(path, encoding="utf-8") as fh:
        return parse_table(fh.read())

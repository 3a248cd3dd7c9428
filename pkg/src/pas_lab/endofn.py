"""Partial endofunctions on ``{0..n-1}``: orbits, divergence and TO/TL tests.

Order and divergence take values in the positive integers extended with
``math.inf``.  On a finite carrier iterating ``n`` steps always decides both.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

from .errors import InputError, ParseError, PreconditionError

INF = math.inf


@dataclass(frozen=True)
class PartialEndoFn:
    n: int
    images: tuple

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if len(self.images) != self.n:
            raise InputError(f"expected {self.n} images, got {len(self.images)}")
        for v in self.images:
            if v is not None and not (isinstance(v, int) and 0 <= v < self.n):
                raise InputError(f"image {v!r} out of range for size {self.n}")

    @classmethod
    def from_dict(cls, n: int, mapping: dict) -> "PartialEndoFn":
        return cls(n, tuple(mapping.get(a) for a in range(n)))

    def __call__(self, a: Optional[int]) -> Optional[int]:
        return None if a is None else self.images[a]

    @property
    def domain(self) -> frozenset:
        return frozenset(a for a, v in enumerate(self.images) if v is not None)

    def is_total(self) -> bool:
        return None not in self.images

    def as_dict(self) -> dict:
        return {a: v for a, v in enumerate(self.images) if v is not None}

    def __str__(self):
        return " ".join("-" if v is None else str(v) for v in self.images)


def identity(n: int) -> PartialEndoFn:
    return PartialEndoFn(n, tuple(range(n)))


def empty_fn(n: int) -> PartialEndoFn:
    return PartialEndoFn(n, (None,) * n)


class OrbitInfo(NamedTuple):
    ord: float
    delta: float


def orbit_info(f: PartialEndoFn, a: int) -> OrbitInfo:
    if not 0 <= a < f.n:
        raise InputError(f"element {a} out of range for size {f.n}")
    x = a
    for k in range(1, f.n + 1):
        x = f.images[x]
        if x is None:
            return OrbitInfo(INF, k)
        if x == a:
            return OrbitInfo(k, INF)
    return OrbitInfo(INF, INF)


def divergence(f: PartialEndoFn) -> int:
    finite = [d for _, d in (orbit_info(f, a) for a in range(f.n)) if d != INF]
    return max(finite, default=1)


def is_to(f: PartialEndoFn) -> bool:
    for a in range(f.n):
        o, d = orbit_info(f, a)
        if d == INF and not (o != INF and o % 2 == 1):
            return False
    return True


def is_tl(f: PartialEndoFn) -> bool:
    for a in range(f.n):
        o, d = orbit_info(f, a)
        if d == INF and o != 1:
            return False
    return True


def compose(g: PartialEndoFn, h: PartialEndoFn) -> PartialEndoFn:
    """``h o g``: apply ``g`` first, then ``h``."""
    if g.n != h.n:
        raise InputError(f"cannot compose functions on sizes {g.n} and {h.n}")
    return PartialEndoFn(g.n, tuple(h(g.images[a]) for a in range(g.n)))


def iterate(f: PartialEndoFn, k: int) -> PartialEndoFn:
    if k < 0:
        raise InputError("iteration count must be non-negative")
    result = identity(f.n)
    for _ in range(k):
        result = compose(result, f)
    return result


@dataclass(frozen=True)
class GraphDecomposition:
    cycles: tuple  # of (length, members) with members in cycle order
    tree_vertices: frozenset
    tail_vertices: frozenset

    def is_to(self) -> bool:
        return not self.tail_vertices and all(length % 2 == 1 for length, _ in self.cycles)

    def is_tl(self) -> bool:
        return not self.tail_vertices and all(length == 1 for length, _ in self.cycles)


def decompose_graph(f: PartialEndoFn) -> GraphDecomposition:
    """Split the functional graph of ``f`` into cycles, finite-divergence trees
    and tails (vertices draining into a cycle they do not lie on)."""
    cycles = []
    on_cycle = set()
    trees = set()
    tails = set()
    for a in range(f.n):
        o, d = orbit_info(f, a)
        if o != INF:
            if a not in on_cycle:
                members = [a]
                x = f.images[a]
                while x != a:
                    members.append(x)
                    x = f.images[x]
                on_cycle.update(members)
                cycles.append((o, tuple(members)))
        elif d != INF:
            trees.add(a)
        else:
            tails.add(a)
    return GraphDecomposition(tuple(cycles), frozenset(trees), frozenset(tails))


def build_injection(f: PartialEndoFn) -> list:
    """An injection ``{0..divergence(f)-1} -> carrier`` for a TL function.

    Follows the orbit of the least element of maximal finite divergence; with
    no finite divergence at all, returns ``[0]``.
    """
    if not is_tl(f):
        raise PreconditionError("build_injection requires a TL function")
    deltas = [orbit_info(f, a).delta for a in range(f.n)]
    finite = [d for d in deltas if d != INF]
    if not finite:
        return [0]
    top = max(finite)
    start = deltas.index(top)
    j = [start]
    for _ in range(top - 1):
        j.append(f.images[j[-1]])
    return j


def parse_fn(text: str) -> PartialEndoFn:
    lines = [
        (no, line.strip())
        for no, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.strip().startswith("#")
    ]
    if not lines:
        raise ParseError("missing 'fn n' header", 1)
    no, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != "fn" or not parts[1].isdigit() or int(parts[1]) < 1:
        raise ParseError(f"expected 'fn n' header, got {header!r}", no)
    n = int(parts[1])
    if len(lines) != 2:
        raise ParseError("expected exactly one line of images", lines[-1][0])
    no, body = lines[1]
    tokens = body.split()
    if len(tokens) != n:
        raise ParseError(f"expected {n} images, got {len(tokens)}", no)
    images = []
    for tok in tokens:
        if tok == "-":
            images.append(None)
        elif tok.isdigit() and int(tok) < n:
            images.append(int(tok))
        else:
            raise ParseError(f"bad image {tok!r}", no)
    return PartialEndoFn(n, tuple(images))


def format_fn(f: PartialEndoFn) -> str:
    return f"fn {f.n}\n{f}\n"


def all_partial_fns(n: int):
    """Every partial endofunction on ``n`` points, ``(n+1)**n`` of them."""
    for images in itertools.product(list(range(n)) + [None], repeat=n):
        yield PartialEndoFn(n, images)


def from_images(images: Sequence) -> PartialEndoFn:
    return PartialEndoFn(len(images), tuple(None if v == "-" else v for v in images))

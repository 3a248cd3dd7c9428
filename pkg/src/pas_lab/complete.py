"""Completeness of the finite fibers and the Boolean-valued comparison.

``R(r)`` is the set of defined values ``s . r``; ``R2`` collects the
elements with ``|R(r)| >= 2``.  Suprema and infima are searched
exhaustively over all packed predicates of a fiber.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .classify import classify
from .core import FinitePas
from .entail import (
    entailment_matrix,
    fiber_matrix,
    full_mask,
    pack,
    predicate_images,
    unpack,
)
from .errors import CapacityError, ConsistencyError, InputError, PreconditionError

BOUNDS_BITS_BOUND = 16  # single sup/inf search over 2**(m*n) predicates
COMPLETE_BITS_BOUND = 8  # whole-fiber completeness, pairwise over 2**(m*n)
CLOSURE_BOUND = 1 << 16  # distinct bound sets tolerated for non-preorder fibers


def r_of(pas: FinitePas, r: int) -> frozenset:
    return frozenset(row[r] for row in pas.table if row[r] is not None)


def r2(pas: FinitePas) -> frozenset:
    return frozenset(r for r in range(pas.n) if len(r_of(pas, r)) >= 2)


def product_exceeds(pas: FinitePas) -> bool:
    """Whether the product of the ``|R(r)|`` exceeds ``|R|``; stops as soon as it does."""
    prod = 1
    for r in range(pas.n):
        prod *= len(r_of(pas, r))
        if prod > pas.n:
            return True
        if prod == 0:
            return False
    return False


class Verdict(str, Enum):
    VIOLATES_NECESSARY = "violates_necessary"
    PASSES_NECESSARY = "passes_necessary"


@dataclass(frozen=True)
class CompletenessReport:
    r_of: dict
    r2: frozenset
    product_exceeds: bool
    r2_card_ok: bool  # |R2| < |R|
    r2_not_one: bool  # |R2| != 1 once |R| >= 2
    small_carrier_ok: bool  # |R| in {2, 3} forces R2 empty
    preorderal: bool
    warning: Optional[str]

    @property
    def necessary_conditions_hold(self) -> bool:
        return (not self.product_exceeds and self.r2_card_ok and self.r2_not_one
                and self.small_carrier_ok)

    @property
    def verdict(self) -> Verdict:
        if self.necessary_conditions_hold:
            return Verdict.PASSES_NECESSARY
        return Verdict.VIOLATES_NECESSARY

    def as_dict(self) -> dict:
        return {
            "r_of": {str(r): sorted(v) for r, v in sorted(self.r_of.items())},
            "r2": sorted(self.r2),
            "product_exceeds": self.product_exceeds,
            "r2_card_ok": self.r2_card_ok,
            "r2_not_one": self.r2_not_one,
            "small_carrier_ok": self.small_carrier_ok,
            "preorderal": self.preorderal,
            "verdict": self.verdict.value,
            "warning": self.warning,
        }


def necessary_conditions(pas: FinitePas) -> CompletenessReport:
    n = pas.n
    reach = {r: r_of(pas, r) for r in range(n)}
    big = r2(pas)
    pre = classify(pas).preorderal
    return CompletenessReport(
        r_of=reach,
        r2=big,
        product_exceeds=product_exceeds(pas),
        r2_card_ok=len(big) < n,
        r2_not_one=n < 2 or len(big) != 1,
        small_carrier_ok=n not in (2, 3) or not big,
        preorderal=pre,
        warning=None if pre else "PAS is not preorderal; the conditions assume it is",
    )


def comp1_family(pas: FinitePas) -> list:
    """The family ``phi_a`` over index set ``R``: ``{a}`` at index ``a``, empty elsewhere."""
    n = pas.n
    return [tuple(frozenset({a}) if x == a else frozenset() for x in range(n)) for a in range(n)]


# Exhaustive bound search


def _check_family(pas: FinitePas, m: int, family: Sequence) -> list:
    if m < 0:
        raise InputError("index size must be non-negative")
    bits = m * pas.n
    if bits > BOUNDS_BITS_BOUND:
        raise CapacityError(f"bound search needs m*n <= {BOUNDS_BITS_BOUND}, got {bits}")
    codes = []
    for phi in family:
        if len(phi) != m:
            raise InputError(f"family member has {len(phi)} coordinates, expected {m}")
        for A in phi:
            if any(not 0 <= a < pas.n for a in A):
                raise InputError(f"subset {sorted(A)} not contained in the carrier")
        codes.append(pack(phi, pas.n))
    return codes


def _entails_from(imgs: np.ndarray, x: int, codes: np.ndarray) -> np.ndarray:
    """Vector over ``codes``: does predicate ``x`` entail each of them."""
    out = np.zeros(codes.size, dtype=bool)
    for im in imgs[:, x]:
        if im >= 0:
            out |= (int(im) & ~codes) == 0
    return out


def _entails_to(imgs: np.ndarray, codes: np.ndarray, y: int) -> np.ndarray:
    """Vector over ``codes``: does each of them entail predicate ``y``."""
    out = np.zeros(codes.size, dtype=bool)
    for im in imgs:
        out |= (im >= 0) & ((im & ~y) == 0)
    return out


def _inclusion_extremes(mask: np.ndarray, bits: int, minimal: bool) -> np.ndarray:
    codes = np.arange(mask.size, dtype=np.int64)
    beaten = np.zeros(mask.size, dtype=bool)
    for b in range(bits):
        bit = 1 << b
        if minimal:
            has = (codes & bit) != 0
            beaten[has] |= mask[codes[has] ^ bit]
        else:
            lacks = (codes & bit) == 0
            beaten[lacks] |= mask[codes[lacks] | bit]
    return np.flatnonzero(mask & ~beaten)


def _upper_bounds(imgs, codes, family):
    ub = np.ones(codes.size, dtype=bool)
    for x in family:
        ub &= _entails_from(imgs, x, codes)
    return ub


def _lower_bounds(imgs, codes, family):
    lb = np.ones(codes.size, dtype=bool)
    for y in family:
        lb &= _entails_to(imgs, codes, y)
    return lb


def supremum(pas: FinitePas, m: int, family: Sequence) -> Optional[tuple]:
    """A least upper bound of ``family`` in the fiber over ``m`` indices, or ``None``.

    The upper bounds form an up-set for inclusion, so a candidate only has to
    entail the inclusion-minimal ones."""
    fam = _check_family(pas, m, family)
    bits = m * pas.n
    imgs = predicate_images(pas, m)
    codes = np.arange(1 << bits, dtype=np.int64)
    ub = _upper_bounds(imgs, codes, fam)
    cand = ub.copy()
    for d in _inclusion_extremes(ub, bits, minimal=True):
        cand &= _entails_to(imgs, codes, int(d))
        if not cand.any():
            return None
    hits = np.flatnonzero(cand)
    return unpack(int(hits[0]), pas.n, m) if hits.size else None


def infimum(pas: FinitePas, m: int, family: Sequence) -> Optional[tuple]:
    """A greatest lower bound of ``family``, or ``None``; lower bounds form a down-set."""
    fam = _check_family(pas, m, family)
    bits = m * pas.n
    imgs = predicate_images(pas, m)
    codes = np.arange(1 << bits, dtype=np.int64)
    lb = _lower_bounds(imgs, codes, fam)
    cand = lb.copy()
    for d in _inclusion_extremes(lb, bits, minimal=False):
        cand &= _entails_from(imgs, int(d), codes)
        if not cand.any():
            return None
    hits = np.flatnonzero(cand)
    return unpack(int(hits[0]), pas.n, m) if hits.size else None


def is_supremum(pas: FinitePas, m: int, family: Sequence, s: Sequence) -> bool:
    fam = _check_family(pas, m, family)
    (code,) = _check_family(pas, m, [s])
    bits = m * pas.n
    imgs = predicate_images(pas, m)
    codes = np.arange(1 << bits, dtype=np.int64)
    ub = _upper_bounds(imgs, codes, fam)
    return bool(ub[code] and (_entails_from(imgs, code, codes) | ~ub).all())


# Whole-fiber completeness through pairwise suprema


def pairwise_suprema(E: np.ndarray) -> np.ndarray:
    """``S[x, y]`` is the least code of a supremum of ``{x, y}`` under the
    relation ``E``, or -1.  The diagonal covers singleton families."""
    N = E.shape[0]
    notE = (~E).astype(np.float32)
    out = np.full((N, N), -1, dtype=np.int64)
    for x in range(N):
        ubs = E[x][None, :] & E  # ubs[y, w]: w bounds both x and y
        # z is a supremum iff it is a bound and entails every bound
        bad = (ubs.astype(np.float32) @ notE.T) > 0
        good = ubs & ~bad
        has = good.any(axis=1)
        out[x, has] = good[has].argmax(axis=1)
    return out


def _least_element(E: np.ndarray) -> int:
    rows = np.flatnonzero(E.all(axis=1))
    return int(rows[0]) if rows.size else -1


def _is_preorder(E: np.ndarray) -> bool:
    if not E.diagonal().all():
        return False
    Ef = E.astype(np.float32)
    return bool(((Ef @ Ef) > 0)[~E].sum() == 0)


def _closure_complete(E: np.ndarray) -> bool:
    """Exact test for an arbitrary relation: the bound sets of all families
    are the intersections of the individual up-sets, and each must contain
    an element entailing all of it."""
    N = E.shape[0]
    ups = [int("".join("1" if b else "0" for b in row[::-1]), 2) for row in E]
    full = (1 << N) - 1
    seen = {full}
    frontier = [full]
    while frontier:
        U = frontier.pop()
        rest = U
        while rest:
            z = (rest & -rest).bit_length() - 1
            if ups[z] & U == U:
                break
            rest &= rest - 1
        else:
            return False
        for up in ups:
            V = U & up
            if V not in seen:
                if len(seen) >= CLOSURE_BOUND:
                    raise CapacityError("too many distinct bound sets in a non-preorder fiber")
                seen.add(V)
                frontier.append(V)
    return True


def fiber_complete(pas: FinitePas, m: int) -> bool:
    """Every finite family in the fiber over ``m`` indices has a supremum.

    On a preorder with a least element, suprema of pairs generate all finite
    suprema, so pairs suffice.  Other fibers fall back to the exact closure test.
    """
    bits = m * pas.n
    if bits > COMPLETE_BITS_BOUND:
        raise CapacityError(f"fiber completeness needs m*n <= {COMPLETE_BITS_BOUND}, got {bits}")
    E = fiber_matrix(pas, m)
    if not _is_preorder(E):
        return _closure_complete(E)
    if _least_element(E) < 0:
        return False
    return bool((pairwise_suprema(E) >= 0).all())


def _reindex_codes(n: int, mi: int, f: Sequence[int]) -> np.ndarray:
    codes = np.arange(1 << (mi * n), dtype=np.int64)
    full = full_mask(n)
    out = np.zeros_like(codes)
    for j, i in enumerate(f):
        out |= ((codes >> (n * i)) & full) << (n * j)
    return out


def _bounds_preserved(EI: np.ndarray, EJ: np.ndarray, move: np.ndarray) -> bool:
    sup = pairwise_suprema(EI)
    xs, ys = np.nonzero(sup >= 0)
    if xs.size:
        s = move[sup[xs, ys]]
        ub = EJ[move[xs]] & EJ[move[ys]]
        ok = ub[np.arange(xs.size), s] & (EJ[s] | ~ub).all(axis=1)
        if not ok.all():
            return False
    least = _least_element(EI)
    if least >= 0 and not EJ[move[least]].all():
        return False
    return True


def reindexing_preserves(pas: FinitePas, max_index: int = 2) -> bool:
    """Suprema and infima of empty, singleton and pair families survive
    reindexing along every map between index sets of size <= ``max_index``."""
    n = pas.n
    if max_index * n > COMPLETE_BITS_BOUND:
        raise CapacityError(f"reindexing check needs max_index*n <= {COMPLETE_BITS_BOUND}")
    mats = {m: fiber_matrix(pas, m) for m in range(1, max_index + 1)}
    for mi in mats:
        for mj in mats:
            for f in itertools.product(range(mi), repeat=mj):
                move = _reindex_codes(n, mi, f)
                if not _bounds_preserved(mats[mi], mats[mj], move):
                    return False
                if not _bounds_preserved(mats[mi].T, mats[mj].T, move):
                    return False
    return True


# Boolean-valued comparison


@dataclass(frozen=True)
class BooleanTriposReport:
    items: dict
    fiber_checked_up_to: int

    @property
    def verdict(self) -> bool:
        return self.items[1]

    def as_dict(self) -> dict:
        return {
            "items": {str(k): v for k, v in self.items.items()},
            "fiber_checked_up_to": self.fiber_checked_up_to,
            "verdict": self.verdict,
        }


def _is_infimum_in(M: np.ndarray, c: int, family: Sequence[int]) -> bool:
    lower = np.ones(M.shape[0], dtype=bool)
    for x in family:
        lower &= M[:, x]
    return bool(lower[c] and M[lower, c].all())


def boolean_tripos_check(pas: FinitePas) -> BooleanTriposReport:
    """Evaluate the equivalent characterisations of being Boolean-valued and
    check that they agree."""
    if not classify(pas).preorderal:
        raise PreconditionError("the Boolean-valued comparison assumes a preorderal PAS")
    n = pas.n
    t = pas.table
    M = entailment_matrix(pas)
    N = 1 << n
    codes = np.arange(N, dtype=np.int64)
    inclusion = (codes[:, None] & ~codes[None, :]) == 0

    item1 = not r2(pas)
    item2 = all(v is None or v == a for row in t for a, v in enumerate(row))
    item3 = all(
        _is_infimum_in(M, 0, [1 << a, 1 << b]) for a in range(n) for b in range(n) if a != b
    )
    item4 = all(_is_infimum_in(M, A & B, [A, B]) for A in range(N) for B in range(N))
    item5 = bool((M == inclusion).all())

    top = max(1, COMPLETE_BITS_BOUND // n)
    top = min(top, 2)
    item6 = True
    for m in range(1, top + 1):
        E = fiber_matrix(pas, m)
        c = np.arange(E.shape[0], dtype=np.int64)
        if not ((E == ((c[:, None] & ~c[None, :]) == 0)).all() and fiber_complete(pas, m)):
            item6 = False
            break
    items = {1: item1, 2: item2, 3: item3, 4: item4, 5: item5, 6: item6}
    if len(set(items.values())) != 1:
        raise ConsistencyError(f"Boolean-valued characterisations disagree {items} on\n{pas}")
    return BooleanTriposReport(items, top)

"""Implication sets, entailment and finite fibers of the indexed relation.

Subsets of the carrier are frozensets at the API and ``n``-bit masks inside.
An indexed predicate over ``m`` indices is a tuple of ``m`` subsets; inside
the fiber code it is packed into one integer of ``m*n`` bits, subset ``i``
occupying bits ``n*i .. n*i+n-1``.  With this packing pointwise inclusion of
predicates is plain bitmask inclusion.
"""

from __future__ import annotations

import functools
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .core import FinitePas
from .errors import CapacityError, InputError

MATRIX_BOUND = 12  # powerset matrix is 4**n booleans
FIBER_BITS_BOUND = 12  # fiber matrix is 4**(m*n) booleans


class EntailmentWitness(NamedTuple):
    holds: bool
    realizer: Optional[int]


def to_mask(subset) -> int:
    if isinstance(subset, int):
        return subset
    mask = 0
    for a in subset:
        mask |= 1 << a
    return mask


def from_mask(mask: int) -> frozenset:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def _check_subset(pas: FinitePas, subset) -> int:
    mask = to_mask(subset)
    if mask < 0 or mask >> pas.n:
        raise InputError(f"subset {sorted(from_mask(mask)) if mask >= 0 else subset} "
                         f"not contained in a carrier of size {pas.n}")
    return mask


def full_mask(n: int) -> int:
    return (1 << n) - 1


@functools.lru_cache(maxsize=4096)
def image_masks(pas: FinitePas) -> tuple:
    """``image_masks(pas)[r][A]`` is the mask of ``[r](A)``, or -1 when
    ``[r]`` is undefined somewhere on ``A``."""
    return build_image_masks(pas)


def build_image_masks(pas: FinitePas) -> tuple:
    n = pas.n
    out = []
    for row in pas.table:
        img = [0] * (1 << n)
        for A in range(1, 1 << n):
            low = A & -A
            prev = img[A ^ low]
            v = row[low.bit_length() - 1]
            img[A] = -1 if prev < 0 or v is None else prev | (1 << v)
        out.append(tuple(img))
    return tuple(out)


@functools.lru_cache(maxsize=None)
def superset_masks(n: int) -> tuple:
    """Entry ``X`` is the bitmask over subsets ``B`` (as indices) with ``X`` inside ``B``."""
    N = 1 << n
    sup = [0] * N
    sup[N - 1] = 1 << (N - 1)
    for X in range(N - 2, -1, -1):
        missing = ~X & (N - 1)
        b = missing & -missing
        above = sup[X | b]
        sup[X] = above | (above >> b)
    return tuple(sup)


def build_entailment_rows(pas: FinitePas, images: Optional[tuple] = None) -> tuple:
    """Row ``A`` is the bitmask over subsets ``B`` with ``A`` entailing ``B``."""
    sup = superset_masks(pas.n)
    images = build_image_masks(pas) if images is None else images
    out = []
    for A in range(1 << pas.n):
        acc = 0
        for img in images:
            im = img[A]
            if im >= 0:
                acc |= sup[im]
        out.append(acc)
    return tuple(out)


def powerset_antisymmetric(rows: Sequence[int]) -> bool:
    for A, row in enumerate(rows):
        above = row >> (A + 1) << (A + 1)
        while above:
            low = above & -above
            if rows[low.bit_length() - 1] >> A & 1:
                return False
            above ^= low
    return True


def implication_mask(pas: FinitePas, A: int, B: int) -> int:
    images = image_masks(pas)
    out = 0
    for r in range(pas.n):
        im = images[r][A]
        if im >= 0 and not im & ~B:
            out |= 1 << r
    return out


def implication_set(pas: FinitePas, A, B) -> frozenset:
    """Elements ``r`` with ``r . a`` defined and in ``B`` for every ``a`` in ``A``."""
    A = _check_subset(pas, A)
    B = _check_subset(pas, B)
    return from_mask(implication_mask(pas, A, B))


def _lowest(mask: int) -> Optional[int]:
    return (mask & -mask).bit_length() - 1 if mask else None


def entails(pas: FinitePas, A, B) -> EntailmentWitness:
    m = implication_mask(pas, _check_subset(pas, A), _check_subset(pas, B))
    return EntailmentWitness(bool(m), _lowest(m))


def entails_indexed(pas: FinitePas, phi: Sequence, psi: Sequence) -> EntailmentWitness:
    if len(phi) != len(psi):
        raise InputError(f"index sizes differ: {len(phi)} vs {len(psi)}")
    common = full_mask(pas.n)
    for A, B in zip(phi, psi):
        common &= implication_mask(pas, _check_subset(pas, A), _check_subset(pas, B))
        if not common:
            break
    return EntailmentWitness(bool(common), _lowest(common))


def reindex(phi: Sequence, f: Sequence[int]) -> tuple:
    """Precompose ``phi`` with ``f``: the result at ``j`` is ``phi[f[j]]``."""
    m = len(phi)
    for j in f:
        if not 0 <= j < m:
            raise InputError(f"reindexing value {j} out of range for index size {m}")
    return tuple(phi[j] for j in f)


def parse_subset(text: str, n: int) -> frozenset:
    text = text.strip()
    if text in ("", "{}"):
        return frozenset()
    if text == "*":
        return frozenset(range(n))
    text = text.strip("{}")
    out = set()
    for tok in text.split(","):
        tok = tok.strip()
        if not tok.isdigit() or int(tok) >= n:
            raise InputError(f"bad subset element {tok!r} for carrier size {n}")
        out.add(int(tok))
    return frozenset(out)


def format_subset(subset) -> str:
    return "{" + ",".join(str(a) for a in sorted(subset)) + "}"


# Dense relations for whole fibers

def pack(phi: Sequence, n: int) -> int:
    code = 0
    for i, A in enumerate(phi):
        code |= to_mask(A) << (n * i)
    return code


def unpack(code: int, n: int, m: int) -> tuple:
    full = full_mask(n)
    return tuple(from_mask((code >> (n * i)) & full) for i in range(m))


def predicate_images(pas: FinitePas, m: int, images: Optional[tuple] = None) -> np.ndarray:
    """Array of shape ``(n, 2**(m*n))``: packed pointwise image of each packed
    predicate under ``[r]``, or -1 where some coordinate is undefined."""
    n = pas.n
    bits = m * n
    if bits > 24:
        raise CapacityError(f"fiber over {m} indices of a size-{n} PAS is too large")
    codes = np.arange(1 << bits, dtype=np.int64)
    full = full_mask(n)
    images = np.asarray(image_masks(pas) if images is None else images, dtype=np.int64)
    out = np.zeros((n, 1 << bits), dtype=np.int64)
    undefined = np.zeros((n, 1 << bits), dtype=bool)
    for i in range(m):
        coord = (codes >> (n * i)) & full
        part = images[:, coord]
        undefined |= part < 0
        out |= np.where(part < 0, 0, part) << (n * i)
    out[undefined] = -1
    return out


def fiber_matrix(pas: FinitePas, m: int) -> np.ndarray:
    """Boolean matrix ``E`` with ``E[x, y]`` iff predicate ``x`` entails ``y``
    over ``m`` indices, computed by brute force over realizers."""
    bits = m * pas.n
    if bits > FIBER_BITS_BOUND:
        raise CapacityError(f"fiber matrix needs m*n <= {FIBER_BITS_BOUND}, got {bits}")
    return _fiber_matrix(pas, m)


@functools.lru_cache(maxsize=256)
def _fiber_matrix(pas: FinitePas, m: int) -> np.ndarray:
    E = build_fiber_matrix(pas, m)
    E.setflags(write=False)
    return E


def build_fiber_matrix(pas: FinitePas, m: int, images: Optional[tuple] = None) -> np.ndarray:
    """Uncached form of :func:`fiber_matrix` without the size check."""
    imgs = predicate_images(pas, m, images)
    codes = np.arange(imgs.shape[1], dtype=np.int64)
    E = np.zeros((codes.size, codes.size), dtype=bool)
    for im in imgs:
        defined = im >= 0
        E[defined] |= (im[defined, None] & ~codes[None, :]) == 0
    return E


def entailment_matrix(pas: FinitePas) -> np.ndarray:
    """The relation on the powerset: ``M[A, B]`` iff ``A`` entails ``B``."""
    if pas.n > MATRIX_BOUND:
        raise CapacityError(f"powerset matrix needs n <= {MATRIX_BOUND}, got {pas.n}")
    return _fiber_matrix(pas, 1)


def fiber_reflexive(pas: FinitePas, m: int) -> bool:
    """Whether every predicate over ``m`` indices entails itself (diagonal only)."""
    imgs = predicate_images(pas, m)
    codes = np.arange(imgs.shape[1], dtype=np.int64)
    ok = np.zeros(codes.size, dtype=bool)
    for im in imgs:
        ok |= (im >= 0) & ((im & ~codes) == 0)
    return bool(ok.all())

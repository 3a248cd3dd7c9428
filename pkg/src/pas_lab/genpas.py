"""Posetal PASs generated by a TL partial function.

Given a TL function ``f`` and an injection ``j`` of ``{0..D-1}`` into the
carrier, where ``D`` is the divergence of ``f``, the generated PAS has
``j[k] . a = f^k(a)``.  Every other row is empty.  ``X`` denotes the
elements outside the image of ``j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

from . import endofn
from .core import FinitePas
from .endofn import INF, PartialEndoFn
from .errors import ConsistencyError, PreconditionError


@dataclass(frozen=True)
class GeneratedSpec:
    f: PartialEndoFn
    j: tuple
    x_set: frozenset = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "j", tuple(self.j))
        f, j = self.f, self.j
        if not endofn.is_tl(f):
            raise PreconditionError("the generating function must be TL")
        if any(not 0 <= x < f.n for x in j):
            raise PreconditionError("injection values must be carrier elements")
        if len(set(j)) != len(j):
            raise PreconditionError(f"j = {list(j)} is not injective")
        if len(j) != endofn.divergence(f):
            raise PreconditionError(
                f"j has length {len(j)} but the divergence of f is {endofn.divergence(f)}"
            )
        object.__setattr__(self, "x_set", frozenset(range(f.n)) - frozenset(j))

    @classmethod
    def default(cls, f: PartialEndoFn) -> "GeneratedSpec":
        return cls(f, tuple(endofn.build_injection(f)))

    @property
    def divergence(self) -> int:
        return len(self.j)

    def canonical(self) -> tuple:
        """Relabel so that ``j`` becomes the inclusion of ``{0..D-1}`` and ``X``
        follows in increasing order.  Returns ``(spec, perm)`` with ``perm[old] = new``."""
        n = self.f.n
        order = list(self.j) + sorted(self.x_set)
        perm = [0] * n
        for new, old in enumerate(order):
            perm[old] = new
        images = [None] * n
        for old, v in enumerate(self.f.images):
            images[perm[old]] = None if v is None else perm[v]
        return GeneratedSpec(PartialEndoFn(n, tuple(images)), tuple(range(len(self.j)))), perm


def generate(spec: GeneratedSpec, check: bool = True) -> FinitePas:
    n = spec.f.n
    rows = [(None,) * n for _ in range(n)]
    power = endofn.identity(n)
    for k, r in enumerate(spec.j):
        rows[r] = power.images
        power = endofn.compose(power, spec.f)
    pas = FinitePas(n, tuple(rows))
    if check:
        from .classify import classify

        if not classify(pas).posetal:
            raise ConsistencyError(f"generated PAS is not posetal:\n{pas}")
    return pas


class Shape(str, Enum):
    CASE1 = "case1"
    CASE2 = "case2"
    CASE3 = "case3"
    CASE4 = "case4"
    OTHER = "other"


@dataclass(frozen=True)
class CaseShape:
    shape: Shape
    chain: tuple
    beta: Optional[int] = None
    attach: Optional[int] = None  # k with f(beta) = chain[k], case 4 only
    # elements that may play the single X-element in an associative model
    x_candidates: tuple = ()


def case_shape(f: PartialEndoFn) -> CaseShape:
    """Match the functional graph of ``f`` against the four one-chain forms."""
    if not endofn.is_tl(f):
        raise PreconditionError("case_shape requires a TL function")
    top = endofn.divergence(f)
    if top <= 1:
        raise PreconditionError("case_shape requires divergence > 1")
    deltas = [endofn.orbit_info(f, a).delta for a in range(f.n)]
    start = deltas.index(top)
    chain = [start]
    for _ in range(top - 1):
        chain.append(f.images[chain[-1]])
    chain = tuple(chain)
    rest = sorted(set(range(f.n)) - set(chain))
    if not rest:
        return CaseShape(Shape.CASE1, chain)
    if len(rest) > 1:
        return CaseShape(Shape.OTHER, chain)
    beta = rest[0]
    target = f.images[beta]
    if target is None:
        return CaseShape(Shape.CASE2, chain, beta, x_candidates=(chain[-1], beta))
    if target == beta:
        return CaseShape(Shape.CASE3, chain, beta, x_candidates=(chain[-1], beta))
    k = chain.index(target)
    if k >= 1:
        return CaseShape(Shape.CASE4, chain, beta, attach=k, x_candidates=(chain[-1],))
    return CaseShape(Shape.OTHER, chain, beta)


@dataclass(frozen=True)
class GeneratedProfilePrediction:
    finite: bool
    trivial: bool
    total: bool
    id_r: bool
    ab: bool
    ext: bool
    comp: bool
    ext_comp: bool
    ext_assoc: bool
    ext_assoc_comp: bool
    assoc: Optional[bool]  # None: not determined by the structure theory
    shape: Optional[Shape] = None

    def predicted(self) -> dict:
        out = {
            "finite": self.finite,
            "trivial": self.trivial,
            "total": self.total,
            "id_r": self.id_r,
            "ab": self.ab,
            "ext": self.ext,
            "comp": self.comp,
            "ext_comp": self.ext_comp,
            "ext_assoc": self.ext_assoc,
            "ext_assoc_comp": self.ext_assoc_comp,
        }
        if self.assoc is not None:
            out["assoc"] = self.assoc
        return out


def _is_successor_chain(f: PartialEndoFn, top: int) -> bool:
    return all(f.images[i] == i + 1 for i in range(top - 1)) and f.images[top - 1] is None


def predict_profile(spec: GeneratedSpec) -> GeneratedProfilePrediction:
    spec, _ = spec.canonical()
    f = spec.f
    top = spec.divergence
    x_count = len(spec.x_set)
    all_finite = all(endofn.orbit_info(f, a).delta != INF for a in range(f.n))

    trivial = top == 1 and x_count == 0
    id_r = x_count == 0 and (top == 1 or _is_successor_chain(f, top))
    ext = x_count <= 1
    comp = top == 1 or (x_count > 0 and all_finite)

    if top == 1:
        shape = None
        ext_comp = ext_assoc = ext_assoc_comp = ext
    else:
        cs = case_shape(f)
        shape = cs.shape
        if ext != (shape is not Shape.OTHER):
            raise ConsistencyError(f"extensionality and case shape disagree for f = {f}")
        aligned = cs.chain == tuple(range(top))
        ext_comp = shape in (Shape.CASE2, Shape.CASE4)
        ext_assoc = shape in (Shape.CASE1, Shape.CASE2) and aligned
        ext_assoc_comp = shape is Shape.CASE2 and aligned
    if id_r:
        assoc = True
    elif ext:
        assoc = ext_assoc
    else:
        assoc = None
    return GeneratedProfilePrediction(
        finite=True,
        trivial=trivial,
        total=trivial,
        id_r=id_r,
        ab=id_r,
        ext=ext,
        comp=comp,
        ext_comp=ext_comp,
        ext_assoc=ext_assoc,
        ext_assoc_comp=ext_assoc_comp,
        assoc=assoc,
        shape=shape,
    )


def successor_chain(top: int, extra: int = 0) -> PartialEndoFn:
    """``i -> i+1`` for ``i < top-1``, undefined at ``top-1`` and on ``extra`` further points."""
    images = [i + 1 for i in range(top - 1)] + [None] * (1 + extra)
    return PartialEndoFn(top + extra, tuple(images))


def all_tl_functions(n: int):
    for f in endofn.all_partial_fns(n):
        if endofn.is_tl(f):
            yield f


def all_injections(f: PartialEndoFn):
    import itertools

    top = endofn.divergence(f)
    for j in itertools.permutations(range(f.n), top):
        yield GeneratedSpec(f, j)


def generated_profile_fields(pas: FinitePas) -> dict:
    """The directly computed values of the fields a prediction covers."""
    from .props import Prop, holds

    v = {p: holds(pas, p) for p in (Prop.TRIVIAL, Prop.TOTAL, Prop.ID_R, Prop.AB,
                                      Prop.EXT, Prop.COMP, Prop.ASSOC, Prop.FINITE)}
    return {
        "finite": v[Prop.FINITE],
        "trivial": v[Prop.TRIVIAL],
        "total": v[Prop.TOTAL],
        "id_r": v[Prop.ID_R],
        "ab": v[Prop.AB],
        "ext": v[Prop.EXT],
        "comp": v[Prop.COMP],
        "assoc": v[Prop.ASSOC],
        "ext_comp": v[Prop.EXT] and v[Prop.COMP],
        "ext_assoc": v[Prop.EXT] and v[Prop.ASSOC],
        "ext_assoc_comp": v[Prop.EXT] and v[Prop.ASSOC] and v[Prop.COMP],
    }


def prediction_mismatches(spec: GeneratedSpec, pas: Optional[FinitePas] = None) -> dict:
    """Fields where prediction and direct computation differ, as ``{field: (pred, actual)}``."""
    pas = generate(spec, check=False) if pas is None else pas
    predicted = predict_profile(spec).predicted()
    actual = generated_profile_fields(pas)
    return {k: (v, actual[k]) for k, v in predicted.items() if actual[k] != v}


__all__: Sequence[str] = [
    "GeneratedSpec",
    "generate",
    "Shape",
    "CaseShape",
    "case_shape",
    "GeneratedProfilePrediction",
    "predict_profile",
    "successor_chain",
    "all_tl_functions",
    "all_injections",
    "generated_profile_fields",
    "prediction_mismatches",
]

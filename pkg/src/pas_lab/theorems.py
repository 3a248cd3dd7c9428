"""Registry of propositions re-checked exhaustively on small tables.

Each entry maps an id to a predicate on :class:`TableFacts`, which lazily
computes and caches everything about one table, so running the whole suite
costs a single pass over the enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from . import endofn
from .core import FinitePas
from .entail import (
    build_entailment_rows,
    build_fiber_matrix,
    build_image_masks,
    powerset_antisymmetric,
    predicate_images,
)
from .enumeration import EXHAUSTIVE_BOUND, enumerate_all, prefixes, worker_count
from .errors import CapacityError, ConsistencyError, InputError, PreconditionError
from .props import _CHECKERS, Prop

P = Prop
MAX_STORED_VIOLATIONS = 20


def _antisymmetric(E: np.ndarray) -> bool:
    mutual = E & E.T
    np.fill_diagonal(mutual, False)
    return not mutual.any()


def _transitive(E: np.ndarray) -> bool:
    Ei = E.astype(np.int32)
    return not ((Ei @ Ei > 0) & ~E).any()


class TableFacts:
    """Lazily computed facts about one table."""

    def __init__(self, pas: FinitePas):
        self.pas = pas
        self.n = pas.n
        self.t = pas.table
        self._props = {}

    def __getitem__(self, p: Prop) -> bool:
        v = self._props.get(p)
        if v is None:
            v = self._props[p] = _CHECKERS[p](self.t, self.n)[0]
        return v

    @cached_property
    def images(self) -> tuple:
        return build_image_masks(self.pas)

    @cached_property
    def ent1(self) -> tuple:
        """``ent1[A]`` is the bitmask of all ``B`` with ``A`` entailing ``B``."""
        return build_entailment_rows(self.pas, self.images)

    def entails1(self, A: int, B: int) -> bool:
        return bool(self.ent1[A] >> B & 1)

    @cached_property
    def ant1(self) -> bool:
        return powerset_antisymmetric(self.ent1)

    @cached_property
    def trans(self) -> bool:
        """Every ``[s] o [r]`` is contained in some ``[t]``."""
        rows = self.t
        for r_row in rows:
            for s_row in rows:
                comp = [(a, s_row[x]) for a, x in enumerate(r_row)
                        if x is not None and s_row[x] is not None]
                if not any(all(row[a] == v for a, v in comp) for row in rows):
                    return False
        return True

    @cached_property
    def trans_fibers(self) -> bool:
        """Transitivity read off the fibers: over the index set of composable
        triples ``(a, r.a, s.(r.a))`` the first singleton predicate entails the third."""
        full = (1 << self.n) - 1
        imgs = self.images
        for r_row in self.t:
            for s_row in self.t:
                common = full
                for a, b in enumerate(r_row):
                    if b is None or s_row[b] is None:
                        continue
                    c = s_row[b]
                    ok = 0
                    for rr, img in enumerate(imgs):
                        if img[1 << a] == 1 << c:
                            ok |= 1 << rr
                    common &= ok
                if not common:
                    return False
        return True

    @cached_property
    def E2(self) -> np.ndarray:
        return build_fiber_matrix(self.pas, 2, self.images)

    @cached_property
    def fiber_refl(self) -> bool:
        """Reflexivity of the fiber indexed by the carrier itself."""
        imgs = predicate_images(self.pas, self.n, self.images)
        codes = np.arange(imgs.shape[1], dtype=np.int64)
        ok = np.zeros(codes.size, dtype=bool)
        for im in imgs:
            ok |= (im >= 0) & ((im & ~codes) == 0)
        return bool(ok.all())

    @cached_property
    def sgl_refl(self) -> bool:
        """The singleton predicate over the carrier entails itself."""
        return any(all(img[1 << a] == 1 << a for a in range(self.n)) for img in self.images)

    @cached_property
    def pi2(self) -> bool:
        ident = tuple(range(self.n))
        return all(row == ident for row in self.t)

    @cached_property
    def preorderal(self) -> bool:
        return self[P.ID] and self.trans

    @cached_property
    def posetal(self) -> bool:
        return self.preorderal and self.ant1

    @cached_property
    def rows(self) -> set:
        return set(self.t)

    def compose_rows(self, r_row: tuple, s_row: tuple) -> tuple:
        """The row of ``[s] o [r]``."""
        return tuple(None if x is None else s_row[x] for x in r_row)

    @cached_property
    def r2_empty(self) -> bool:
        return all(len({row[r] for row in self.t} - {None}) < 2 for r in range(self.n))


def _imp(a: bool, b: bool) -> bool:
    return not a or b


def _all_equal(*vals: bool) -> bool:
    return len(set(vals)) == 1


# Individual statements


def _basic(F: TableFacts) -> bool:
    n = F.n
    ident = tuple(range(n))
    closed = all(F.compose_rows(r, s) in F.rows for r in F.t for s in F.t)
    submonoid = ident in F.rows and closed
    return (
        _imp(F[P.TRIVIAL], all(F[p] for p in (P.ID, P.CONST, P.COMP, P.EXT, P.ONE_WAY)))
        and _imp(F[P.CONST], F[P.TM])
        and _imp(F[P.CONST] or F[P.ID] or F[P.TOTAL], F[P.ONE_TOTAL])
        and (F[P.ID] and F[P.COMP]) == submonoid
        and _imp(F[P.ONE_WAY] and F[P.TM], F[P.TRIVIAL])
    )


def _basicfin(F: TableFacts) -> bool:
    constant_rows = all(len(set(row)) == 1 for row in F.t)
    return (
        _imp(F[P.CONST], constant_rows)
        and _imp(F[P.CONST], F[P.COMP])
        and _imp(F[P.TM], F[P.EXT] and F[P.TOTAL])
        and _imp(F[P.CONST] and F[P.ID], F[P.TRIVIAL])
    )


def _interact(F: TableFacts) -> bool:
    if not _imp(F[P.ID_R], F[P.EXT]):
        return False
    if F[P.TOTAL] and F[P.ASSOC]:
        t = F.t
        for r in range(F.n):
            for s in range(F.n):
                if t[t[s][r]] != F.compose_rows(t[r], t[s]):
                    return False
        return F[P.COMP]
    return True


def _konst(F: TableFacts) -> bool:
    return _imp(F[P.K], F[P.CONST])


def _ktriv(F: TableFacts) -> bool:
    k = F[P.K]
    return _all_equal(F[P.TRIVIAL], k and F[P.FINITE], k and F[P.ID_R], k and F[P.ASSOC],
                      k and F[P.AB])


def _pca(F: TableFacts) -> bool:
    return F[P.K] and F[P.S]


def _pcathm(F: TableFacts) -> bool:
    return _imp(_pca(F), F[P.ID] and F[P.COMP])


def _pcatriv(F: TableFacts) -> bool:
    return _imp(_pca(F), _all_equal(F[P.TRIVIAL], F[P.AB], F[P.ASSOC], F[P.ID_R],
                                    F[P.ONE_WAY], F[P.FINITE]))


def _ref(F: TableFacts) -> bool:
    return _all_equal(F[P.ID], F.fiber_refl, F.sgl_refl)


def _tra(F: TableFacts) -> bool:
    if F.trans != F.trans_fibers:
        return False
    if F.trans:
        N = 1 << F.n
        ent = F.ent1
        for A in range(N):
            for B in range(N):
                if ent[A] >> B & 1 and ent[B] & ~ent[A]:
                    return False
        return _transitive(F.E2)
    return True


def _sym(F: TableFacts) -> bool:
    full = (1 << F.n) - 1
    return F.entails1(0, full) and not F.entails1(full, 0)


def _ant(F: TableFacts) -> bool:
    return F.ant1 == _antisymmetric(F.E2)


def _max(F: TableFacts) -> bool:
    N = 1 << F.n
    right_bounds = all(F.ent1[A] for A in range(N))
    maximum = any(all(F.entails1(A, B) for A in range(N)) for B in range(N))
    max2 = bool(F.E2.all(axis=0).any())
    bounds2 = bool(F.E2.any(axis=1).all())
    return _all_equal(right_bounds, maximum, F[P.ONE_TOTAL], max2, bounds2)


def _min(F: TableFacts) -> bool:
    N = 1 << F.n
    if F.ent1[0] != (1 << N) - 1 or not F.E2[0].all():
        return False
    # the maximum, when present, is the constant family with value R
    full = (1 << F.n) - 1
    if F[P.ONE_TOTAL]:
        top2 = full | (full << F.n)
        return bool(F.E2[:, top2].all()) and F.ent1[full] >> full & 1 == 1
    return True


def _const_char(F: TableFacts) -> bool:
    N = 1 << F.n
    nonempty = range(1, N)
    return F[P.CONST] == all(F.entails1(A, B) for A in nonempty for B in nonempty)


def _tm_char(F: TableFacts) -> bool:
    els = range(F.n)
    return F[P.TM] == all(F.entails1(1 << a, 1 << b) for a in els for b in els)


def _car1w(F: TableFacts) -> bool:
    els = range(F.n)
    ant_sgl = not any(
        F.entails1(1 << a, 1 << b) and F.entails1(1 << b, 1 << a)
        for a in els for b in els if a != b
    )
    return F[P.ONE_WAY] == ant_sgl


def _compant(F: TableFacts) -> bool:
    return _imp(F[P.COMP], F.trans)


def _ant_to(F: TableFacts) -> bool:
    return _imp(F.ant1, F[P.TO])


def _ant_1w(F: TableFacts) -> bool:
    return _imp(F.ant1, F[P.ONE_WAY])


def _trans_equiv(F: TableFacts) -> bool:
    if not F.trans:
        return True
    w = F[P.ONE_WAY]
    return (_all_equal(F.ant1, w and F[P.TL], w and F[P.TO])
            and _imp(F.ant1, F[P.TL]))


def _tl_trans_ant(F: TableFacts) -> bool:
    return _imp(F.trans and F[P.TL] and F[P.ONE_WAY], F.ant1)


def _tltot(F: TableFacts) -> bool:
    if not F[P.TOTAL]:
        return True
    if F[P.TL] != F.pi2:
        return False
    return _imp(F[P.TL], F.ant1 and F[P.COMP] and F.trans and F[P.ID])


def _carpos(F: TableFacts) -> bool:
    by_fibers = F.fiber_refl and F.trans_fibers and _antisymmetric(F.E2)
    by_powerset = F[P.ID] and F.trans and F.ant1
    by_functions = F[P.ID] and F.trans and F[P.TL] and F[P.ONE_WAY]
    return _all_equal(by_fibers, by_powerset, by_functions)


def _total_pas(F: TableFacts) -> bool:
    return _imp(F[P.TOTAL], F.posetal == F.pi2)


def _endpos(F: TableFacts) -> bool:
    if not F.posetal:
        return True
    triv = F[P.TRIVIAL]
    return (
        F[P.ONE_WAY] and F[P.ID] and F[P.ONE_TOTAL]
        and F[P.TM] == triv
        and F[P.CONST] == triv
        and (F[P.EXT] and F[P.TOTAL]) == triv
        and _imp(F[P.TOTAL], F[P.COMP])
    )


def _algpos(F: TableFacts) -> bool:
    if not F.posetal:
        return True
    triv = F[P.TRIVIAL]
    tot = F[P.TOTAL]
    return (
        _imp(F[P.AB], F[P.ID_R])
        and (tot and F[P.ID_R]) == triv
        and (tot and F[P.AB]) == triv
        and _imp(tot, F[P.ASSOC])
        and (F[P.ID_R] and F[P.COMP]) == triv
        and (F[P.AB] and F[P.COMP]) == triv
    )


def _posetal_ks(F: TableFacts) -> bool:
    if not F.posetal:
        return True
    return F[P.K] == F[P.TRIVIAL] and F[P.S] == F[P.TOTAL]


def _monoid_pca(F: TableFacts) -> bool:
    monoid = F[P.TOTAL] and F[P.ASSOC] and F[P.ID_R] and F[P.ID]
    pca = _pca(F)
    return (_imp(monoid and pca, F[P.TRIVIAL]) and _imp(monoid, F.preorderal)
            and _imp(pca, F.preorderal))


def _trans_submonoid(F: TableFacts) -> bool:
    if not (F.trans and F[P.ID]):
        return True
    total = [row for row in F.t if None not in row]
    return all(F.compose_rows(r, s) in F.rows for r in total for s in total)


def _ext_inclusion(F: TableFacts) -> bool:
    if not F[P.ID]:
        return True
    N = 1 << F.n
    return all(F.entails1(A, B) for A in range(N) for B in range(N) if not A & ~B)


def _total_trans_ant(F: TableFacts) -> bool:
    return _imp(F[P.TOTAL] and F.trans, F.ant1 == F[P.TL])


@lru_cache(maxsize=None)
def _row_iterates_closed(n: int, row: tuple) -> bool:
    f = endofn.PartialEndoFn(n, row)
    to, tl = endofn.is_to(f), endofn.is_tl(f)
    g = endofn.identity(n)
    for _ in range(n + 2):
        if (to and not endofn.is_to(g)) or (tl and not endofn.is_tl(g)):
            return False
        g = endofn.compose(g, f)
    return True


def _comptl(F: TableFacts) -> bool:
    return all(_row_iterates_closed(F.n, row) for row in F.t)


def _tripos_items(F: TableFacts) -> bool:
    if not F.preorderal:
        return True
    from .complete import boolean_tripos_check

    try:
        report = boolean_tripos_check(F.pas)
    except (ConsistencyError, PreconditionError):
        return False
    return report.verdict == F.r2_empty


@dataclass(frozen=True)
class Theorem:
    id: str
    statement: str
    check: Callable[[TableFacts], bool] = field(repr=False)


_ENTRIES = [
    ("basic", "trivial gives Id, Const, Comp, Ext, 1W; Const => TM; Const or Id or Total => 1-Total; "
              "Id and Comp iff represented functions form a submonoid; 1W and TM => Trivial", _basic),
    ("basicfin", "finite: Const makes every row constant; Const => Comp; TM => Ext and Total; "
                 "Const and Id => Trivial", _basicfin),
    ("interact", "ID_R => Ext; Total and Assoc give [s.r] = [s] o [r] and Comp", _interact),
    ("Konst", "K => Const", _konst),
    ("Ktriv", "Trivial iff K and Finite iff K and ID_R iff K and Assoc iff K and Ab", _ktriv),
    ("PCAthm", "a PCA satisfies Id and Comp", _pcathm),
    ("PCAtriv", "for a PCA: Trivial iff Ab iff Assoc iff ID_R iff 1W iff Finite", _pcatriv),
    ("ref", "reflexive iff Id", _ref),
    ("tra", "transitive iff every [s] o [r] is contained in some [t]", _tra),
    ("sym", "entailment is never symmetric", _sym),
    ("ant", "antisymmetric iff entailment on the powerset is antisymmetric", _ant),
    ("max", "right bounds iff maximum iff 1-Total", _max),
    ("min", "the empty predicate is a minimum; the full one is a maximum under 1-Total", _min),
    ("const_char", "Const iff all non-empty subsets entail each other", _const_char),
    ("tm_char", "TM iff all singletons entail each other", _tm_char),
    ("car1w", "1W iff entailment is antisymmetric on singletons", _car1w),
    ("compant", "Comp => Trans", _compant),
    ("ant_to", "Ant => TO", _ant_to),
    ("ant_1w", "Ant => 1W", _ant_1w),
    ("trans_equiv", "under Trans: Ant iff 1W and TL iff 1W and TO", _trans_equiv),
    ("tl_trans_ant", "under Trans: TL and 1W => Ant", _tl_trans_ant),
    ("tltot", "under Total: TL iff the operation is the second projection, and then "
              "Ant, Comp, Trans, Id", _tltot),
    ("carpos", "posetal iff reflexive, transitive, antisymmetric iff reflexive, transitive, "
               "TL and 1W", _carpos),
    ("totalPAS", "a total PAS is posetal iff the operation is the second projection", _total_pas),
    ("endpos", "posetal: 1W, Id, 1-Total; TM, Const, Ext and Total each iff Trivial; "
               "Total => Comp", _endpos),
    ("algpos", "posetal: Ab => ID_R; Total and ID_R, Total and Ab, ID_R and Comp, Ab and Comp "
               "each iff Trivial; Total => Assoc", _algpos),
    ("posetal_ks", "posetal: K iff Trivial, S iff Total", _posetal_ks),
    ("monoid_pca", "monoid and PCA => Trivial; monoids and PCAs are preorderal", _monoid_pca),
    ("trans_submonoid", "Trans and Id: total represented functions are closed under "
                        "composition", _trans_submonoid),
    ("ext_inclusion", "Id: inclusion implies entailment", _ext_inclusion),
    ("total_trans_ant", "under Total and Trans: Ant iff TL", _total_trans_ant),
    ("comptl", "iterates of TO (TL) represented functions are TO (TL)", _comptl),
    ("tripos_items", "preorderal: the Boolean-valued characterisations agree", _tripos_items),
]

REGISTRY: dict = {tid: Theorem(tid, text, fn) for tid, text, fn in _ENTRIES}


def theorem_ids() -> list:
    return list(REGISTRY)


@dataclass(frozen=True)
class TheoremReport:
    theorem_id: str
    size_bound: int
    instances: int
    violation_count: int
    violations: tuple  # first few offending tables, in enumeration order

    @property
    def ok(self) -> bool:
        return self.violation_count == 0

    def as_dict(self) -> dict:
        return {
            "theorem": self.theorem_id,
            "size_bound": self.size_bound,
            "instances": self.instances,
            "violation_count": self.violation_count,
            "violations": [[list(row) for row in v.table] for v in self.violations],
        }


def _resolve(ids: Optional[Iterable[str]]) -> list:
    if ids is None:
        return list(REGISTRY.values())
    out = []
    for tid in ids:
        if tid not in REGISTRY:
            raise InputError(f"unknown theorem id {tid!r}")
        out.append(REGISTRY[tid])
    return out


def _check_bound(size_bound: int) -> None:
    if size_bound < 1:
        raise InputError("size bound must be at least 1")
    if size_bound > EXHAUSTIVE_BOUND:
        raise CapacityError(f"exhaustive verification supports n <= {EXHAUSTIVE_BOUND}")


def _run_chunk(args) -> tuple:
    ids, n, prefix = args
    theorems = _resolve(ids)
    counts = [0] * len(theorems)
    stored = [[] for _ in theorems]
    instances = 0
    for pas in enumerate_all(n, prefix):
        instances += 1
        facts = TableFacts(pas)
        for i, th in enumerate(theorems):
            if not th.check(facts):
                counts[i] += 1
                if len(stored[i]) < MAX_STORED_VIOLATIONS:
                    stored[i].append(pas)
    return instances, counts, stored


def verify_suite(ids: Optional[Sequence[str]], size_bound: int,
                 workers: Optional[int] = None) -> list:
    """Check the listed theorems (all when ``ids`` is None) on every table of
    size ``1..size_bound`` in one pass."""
    theorems = _resolve(ids)
    _check_bound(size_bound)
    id_list = [th.id for th in theorems]
    jobs = []
    for n in range(1, size_bound + 1):
        if n == 3:
            jobs += [(id_list, n, p) for p in prefixes(n, 2)]
        else:
            jobs.append((id_list, n, ()))
    workers = worker_count(workers)
    if workers > 1 and len(jobs) > 1:
        from multiprocessing import Pool

        with Pool(workers) as pool:
            parts = pool.map(_run_chunk, jobs)
    else:
        parts = [_run_chunk(job) for job in jobs]

    total = sum(p[0] for p in parts)
    reports = []
    for i, tid in enumerate(id_list):
        count = sum(p[1][i] for p in parts)
        stored = [pas for p in parts for pas in p[2][i]][:MAX_STORED_VIOLATIONS]
        reports.append(TheoremReport(tid, size_bound, total, count, tuple(stored)))
    return reports


def verify_theorem(theorem_id: str, size_bound: int,
                   workers: Optional[int] = None) -> TheoremReport:
    return verify_suite([theorem_id], size_bound, workers)[0]

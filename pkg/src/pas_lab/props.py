"""Decision procedures for the named properties of a finite PAS.

Every check quantifies exhaustively over the carrier.  Existential
properties come with a witness, which is re-validated through the term
evaluator before it is handed out.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from . import endofn
from .core import FinitePas, app, eval_term
from .errors import ConsistencyError, InputError


class Prop(str, Enum):
    TRIVIAL = "trivial"
    FINITE = "finite"
    TOTAL = "total"
    ONE_TOTAL = "one_total"
    CONST = "const"
    ID = "id"
    TM = "tm"
    ONE_WAY = "one_way"
    EXT = "ext"
    COMP = "comp"
    ID_R = "id_r"
    ASSOC = "assoc"
    AB = "ab"
    K = "k"
    S = "s"
    TO = "to"
    TL = "tl"

    @classmethod
    def parse(cls, token: str) -> "Prop":
        try:
            return cls(token.strip().lower())
        except ValueError:
            raise InputError(f"unknown property {token!r}") from None


def _trivial(t, n):
    return n == 1 and t[0][0] == 0, None


def _total(t, n):
    return all(None not in row for row in t), None


def _one_total(t, n):
    for r, row in enumerate(t):
        if None not in row:
            return True, r
    return False, None


def _const(t, n):
    # witness: for each value a, an element computing the constant a
    makers = {}
    for c, row in enumerate(t):
        first = row[0]
        if first is not None and first not in makers and row.count(first) == n:
            makers[first] = c
    if len(makers) == n:
        return True, tuple(makers[a] for a in range(n))
    return False, None


def _id(t, n):
    ident = tuple(range(n))
    for i, row in enumerate(t):
        if row == ident:
            return True, i
    return False, None


def _tm(t, n):
    for a in range(n):
        if len({t[r][a] for r in range(n)} - {None}) != n:
            return False, None
    return True, None


def _one_way(t, n):
    reach = [{t[r][a] for r in range(n)} for a in range(n)]
    for a in range(n):
        for b in reach[a]:
            if b is not None and b != a and a in reach[b]:
                return False, None
    return True, None


def _ext(t, n):
    return len(set(t)) == n, None


def _comp(t, n):
    rows = set(t)
    for r_row in t:
        for s_row in t:
            if tuple(None if x is None else s_row[x] for x in r_row) not in rows:
                return False, None
    return True, None


def _id_r(t, n):
    for j in range(n):
        if all(t[a][j] == a for a in range(n)):
            return True, j
    return False, None


def _assoc(t, n):
    for a in range(n):
        ta = t[a]
        for b in range(n):
            ab = ta[b]
            tb = t[b]
            for c in range(n):
                bc = tb[c]
                lhs = None if bc is None else ta[bc]
                rhs = None if ab is None else t[ab][c]
                if lhs != rhs:
                    return False, None
    return True, None


def _ab(t, n):
    for a in range(n):
        for b in range(a + 1, n):
            if t[a][b] != t[b][a]:
                return False, None
    return True, None


def _k(t, n):
    for k in range(n):
        ok = True
        for a in range(n):
            ka = t[k][a]
            if ka is None or t[ka] != (a,) * n:
                ok = False
                break
        if ok:
            return True, k
    return False, None


def _is_s(t, n, s):
    for a in range(n):
        sa = t[s][a]
        if sa is None:
            return False
        ta = t[a]
        for b in range(n):
            sab = t[sa][b]
            if sab is None:
                return False
            tb = t[b]
            row = t[sab]
            for c in range(n):
                ac, bc = ta[c], tb[c]
                rhs = None if ac is None or bc is None else t[ac][bc]
                if row[c] != rhs:
                    return False
    return True


def _s(t, n):
    for s in range(n):
        if _is_s(t, n, s):
            return True, s
    return False, None


def _rows_satisfy(t, n, test):
    for row in t:
        if not test(endofn.PartialEndoFn(n, row)):
            return False, None
    return True, None


def _to(t, n):
    return _rows_satisfy(t, n, endofn.is_to)


def _tl(t, n):
    return _rows_satisfy(t, n, endofn.is_tl)


_CHECKERS = {
    Prop.TRIVIAL: _trivial,
    Prop.FINITE: lambda t, n: (True, None),
    Prop.TOTAL: _total,
    Prop.ONE_TOTAL: _one_total,
    Prop.CONST: _const,
    Prop.ID: _id,
    Prop.TM: _tm,
    Prop.ONE_WAY: _one_way,
    Prop.EXT: _ext,
    Prop.COMP: _comp,
    Prop.ID_R: _id_r,
    Prop.ASSOC: _assoc,
    Prop.AB: _ab,
    Prop.K: _k,
    Prop.S: _s,
    Prop.TO: _to,
    Prop.TL: _tl,
}


def validate_witness(pas: FinitePas, p: Prop, witness) -> bool:
    """Re-check a witness directly with the term evaluator."""
    n = pas.n
    ev = lambda *terms: eval_term(pas, app(*terms))  # noqa: E731
    els = range(n)
    if p is Prop.ONE_TOTAL:
        return all(ev(witness, a) is not None for a in els)
    if p is Prop.CONST:
        return len(witness) == n and all(ev(witness[a], b) == a for a in els for b in els)
    if p is Prop.ID:
        return all(ev(witness, a) == a for a in els)
    if p is Prop.ID_R:
        return all(ev(a, witness) == a for a in els)
    if p is Prop.K:
        return all(ev(witness, a, b) == a for a in els for b in els)
    if p is Prop.S:
        s = witness
        return all(ev(s, a, b) is not None for a in els for b in els) and all(
            ev(s, a, b, c) == ev(app(a, c), app(b, c)) for a in els for b in els for c in els
        )
    return witness is None


def check_property(pas: FinitePas, p) -> tuple:
    """Decide ``p`` on ``pas``; returns ``(holds, witness)``."""
    p = Prop.parse(p) if isinstance(p, str) and not isinstance(p, Prop) else p
    holds, witness = _CHECKERS[p](pas.table, pas.n)
    if holds and witness is not None and not validate_witness(pas, p, witness):
        raise ConsistencyError(f"witness {witness!r} for {p.value} failed re-validation")
    return holds, witness


def holds(pas: FinitePas, p) -> bool:
    return check_property(pas, p)[0]


@dataclass(frozen=True)
class PropertyProfile:
    values: dict
    witnesses: dict = field(default_factory=dict)

    def __getitem__(self, p) -> bool:
        return self.values[Prop(p)]

    def as_dict(self) -> dict:
        return {p.value: v for p, v in self.values.items()}

    def witness(self, p) -> Optional[object]:
        return self.witnesses.get(Prop(p))


def property_profile(pas: FinitePas) -> PropertyProfile:
    values = {}
    witnesses = {}
    for p in Prop:
        ok, w = check_property(pas, p)
        values[p] = ok
        if w is not None:
            witnesses[p] = w
    return PropertyProfile(values, witnesses)

"""Order-theoretic classification of a PAS through its entailment relation."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .core import FinitePas
from .entail import MATRIX_BOUND, build_entailment_rows, powerset_antisymmetric
from .errors import CapacityError, ConsistencyError
from .props import Prop, holds

ANTISYMMETRY_BOUND = MATRIX_BOUND


class Summary(str, Enum):
    NOT_PREORDERAL = "not_preorderal"
    PREORDERAL = "preorderal"
    POSETAL = "posetal"


@dataclass(frozen=True)
class ClassLabel:
    reflexive: bool
    transitive: bool
    antisymmetric: bool
    preorderal: bool
    posetal: bool

    @property
    def summary(self) -> Summary:
        if self.posetal:
            return Summary.POSETAL
        if self.preorderal:
            return Summary.PREORDERAL
        return Summary.NOT_PREORDERAL

    def as_dict(self) -> dict:
        return {
            "reflexive": self.reflexive,
            "transitive": self.transitive,
            "antisymmetric": self.antisymmetric,
            "preorderal": self.preorderal,
            "posetal": self.posetal,
            "summary": self.summary.value,
        }


def is_reflexive(pas: FinitePas) -> bool:
    return holds(pas, Prop.ID)


def transitivity_witnesses(pas: FinitePas) -> dict:
    """For each pair ``(r, s)`` the least ``t`` whose row extends ``[s] o [r]``;
    pairs without such ``t`` map to ``None``."""
    t = pas.table
    n = pas.n
    out = {}
    for r in range(n):
        for s in range(n):
            comp = [(a, t[s][x]) for a, x in enumerate(t[r]) if x is not None and t[s][x] is not None]
            out[r, s] = next(
                (c for c in range(n) if all(t[c][a] == v for a, v in comp)), None
            )
    return out


def is_transitive(pas: FinitePas) -> bool:
    rows = pas.table
    for r_row in rows:
        for s_row in rows:
            comp = [(a, s_row[x]) for a, x in enumerate(r_row) if x is not None and s_row[x] is not None]
            if not any(all(row[a] == v for a, v in comp) for row in rows):
                return False
    return True


def is_antisymmetric(pas: FinitePas, bound: int = ANTISYMMETRY_BOUND) -> bool:
    """Antisymmetry of entailment on the powerset, which decides every fiber."""
    if pas.n > bound:
        raise CapacityError(f"antisymmetry check supports size <= {bound}, got {pas.n}")
    return powerset_antisymmetric(build_entailment_rows(pas))


def is_second_projection(pas: FinitePas) -> bool:
    ident = tuple(range(pas.n))
    return all(row == ident for row in pas.table)


def classify(pas: FinitePas) -> ClassLabel:
    refl = is_reflexive(pas)
    trans = is_transitive(pas)
    ant = is_antisymmetric(pas)
    pre = refl and trans
    by_powerset = pre and ant
    by_functions = pre and holds(pas, Prop.TL) and holds(pas, Prop.ONE_WAY)
    if by_powerset != by_functions:
        raise ConsistencyError(
            f"posetal routes disagree (antisymmetry {by_powerset}, TL and 1W {by_functions}) on\n{pas}"
        )
    return ClassLabel(refl, trans, ant, pre, by_powerset)


def verify_theorem(theorem_id: str, size_bound: int, workers=None):
    """Exhaustively re-check one registered theorem; see :mod:`pas_lab.theorems`."""
    from .theorems import verify_theorem as _verify

    return _verify(theorem_id, size_bound, workers)

import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import corpus_table, tables
from pas_lab.core import FinitePas, trivial_pas
from pas_lab.entail import (
    build_entailment_rows,
    entailment_matrix,
    entails,
    entails_indexed,
    fiber_matrix,
    format_subset,
    implication_set,
    pack,
    parse_subset,
    powerset_antisymmetric,
    reindex,
    superset_masks,
    unpack,
)
from pas_lab.errors import CapacityError, InputError
from pas_lab.props import Prop, check_property, holds

T1 = FinitePas.from_rows([[1, 2, None], [None] * 3, [None] * 3])


def subsets(n):
    return st.frozensets(st.integers(0, n - 1))


class TestImplication:
    def test_empty_antecedent(self):
        assert implication_set(T1, set(), {1}) == {0, 1, 2}

    def test_trivial(self):
        assert implication_set(trivial_pas(), {0}, {0}) == {0}

    def test_table_scan(self):
        assert implication_set(T1, {0}, {1}) == {0}

    def test_out_of_range(self):
        with pytest.raises(InputError):
            implication_set(T1, {3}, {0})

    @given(tables(), st.data())
    def test_oracle(self, pas, data):
        A, B = data.draw(subsets(pas.n)), data.draw(subsets(pas.n))
        t = oracles.rows_of(pas)
        assert implication_set(pas, A, B) == oracles.implication(t, A, B)
        w = entails(pas, A, B)
        assert w.holds == oracles.entails(t, A, B)
        if w.holds:
            assert w.realizer == min(oracles.implication(t, A, B))

    @given(tables(), st.data())
    def test_monotone(self, pas, data):
        A, B = data.draw(subsets(pas.n)), data.draw(subsets(pas.n))
        A2, B2 = A & data.draw(subsets(pas.n)), B | data.draw(subsets(pas.n))
        assert implication_set(pas, A, B) <= implication_set(pas, A2, B2)


class TestEntails:
    def test_empty_entails_everything(self):
        for n in (1, 2, 3):
            full = set(range(n))
            p = FinitePas.from_rows([[None] * n] * n)
            assert entails(p, set(), full).holds
            assert not entails(p, full, set()).holds

    def test_eight_element_example(self):
        p = corpus_table("total_3")
        assert p.n == 8
        assert entails(p, {0, 1}, {2, 3}).holds
        assert entails(p, {2, 3}, {0, 1}).holds

    @given(tables())
    def test_id_extends_inclusion(self, pas):
        if holds(pas, Prop.ID):
            for A in oracles.subsets(pas.n):
                for B in oracles.subsets(pas.n):
                    if A <= B:
                        assert entails(pas, A, B).holds

    @given(tables())
    def test_characterizations(self, pas):
        nonempty = [A for A in oracles.subsets(pas.n) if A]
        all_nonempty = all(entails(pas, A, B).holds for A in nonempty for B in nonempty)
        assert all_nonempty == holds(pas, Prop.CONST)
        singles = all(entails(pas, {a}, {b}).holds for a in range(pas.n) for b in range(pas.n))
        assert singles == holds(pas, Prop.TM)
        single_ant = all(
            a == b or not (entails(pas, {a}, {b}).holds and entails(pas, {b}, {a}).holds)
            for a in range(pas.n) for b in range(pas.n)
        )
        assert single_ant == holds(pas, Prop.ONE_WAY)

    @given(tables())
    def test_never_symmetric(self, pas):
        full = set(range(pas.n))
        assert entails(pas, set(), full).holds and not entails(pas, full, set()).holds


class TestIndexed:
    def test_single_index_reduces(self):
        for A in oracles.subsets(3):
            for B in oracles.subsets(3):
                assert entails_indexed(T1, [A], [B]) == entails(T1, A, B)

    def test_reflexive_realized_by_identity(self):
        p = corpus_table("posetal_1")
        ok, i = check_property(p, Prop.ID)
        assert ok
        phi = ({0}, {1, 2}, set())
        w = entails_indexed(p, phi, phi)
        assert w.holds and p.table[w.realizer] == tuple(range(p.n))
        assert w.realizer == i

    def test_size_mismatch(self):
        with pytest.raises(InputError):
            entails_indexed(T1, [{0}], [{0}, {1}])

    def test_pointwise_does_not_imply_indexed(self):
        # the first size-2 table and 2-index pair where pointwise entailment
        # holds but no single realizer works
        found = None
        for flat in itertools.product(range(3), repeat=4):
            p = FinitePas.from_flat(2, flat)
            t = oracles.rows_of(p)
            for phi in oracles.predicates(2, 2):
                for psi in oracles.predicates(2, 2):
                    pointwise = all(oracles.entails(t, A, B) for A, B in zip(phi, psi))
                    if pointwise and not oracles.entails_indexed(t, phi, psi):
                        found = (p, phi, psi)
                        break
                if found:
                    break
            if found:
                break
        assert found is not None
        p, phi, psi = found
        assert all(entails(p, A, B).holds for A, B in zip(phi, psi))
        assert not entails_indexed(p, phi, psi).holds

    @given(tables(max_n=2), st.data())
    def test_oracle(self, pas, data):
        m = data.draw(st.integers(1, 3))
        phi = data.draw(st.lists(subsets(pas.n), min_size=m, max_size=m))
        psi = data.draw(st.lists(subsets(pas.n), min_size=m, max_size=m))
        assert entails_indexed(pas, phi, psi).holds == oracles.entails_indexed(
            oracles.rows_of(pas), phi, psi
        )


class TestReindex:
    PHI = (frozenset({0}), frozenset({1, 2}), frozenset())

    def test_identity(self):
        assert reindex(self.PHI, [0, 1, 2]) == self.PHI

    def test_constant(self):
        assert reindex(self.PHI, [1, 1]) == (self.PHI[1],) * 2

    def test_out_of_range(self):
        with pytest.raises(InputError):
            reindex(self.PHI, [3])

    @given(st.data())
    def test_functorial(self, data):
        g = data.draw(st.lists(st.integers(0, 2), min_size=1, max_size=4))
        f = data.draw(st.lists(st.integers(0, len(g) - 1), min_size=1, max_size=4))
        assert reindex(reindex(self.PHI, g), f) == reindex(self.PHI, [g[i] for i in f])

    @given(tables(), st.data())
    def test_realizer_survives(self, pas, data):
        phi = data.draw(st.lists(subsets(pas.n), min_size=2, max_size=2))
        psi = data.draw(st.lists(subsets(pas.n), min_size=2, max_size=2))
        f = data.draw(st.lists(st.integers(0, 1), min_size=1, max_size=3))
        w = entails_indexed(pas, phi, psi)
        if w.holds:
            re_phi, re_psi = reindex(phi, f), reindex(psi, f)
            assert w.realizer in oracles.implication(oracles.rows_of(pas), re_phi[0], re_psi[0])
            assert entails_indexed(pas, re_phi, re_psi).holds


class TestMatrices:
    @given(tables(max_n=2), st.integers(1, 2))
    def test_fiber_matrix_oracle(self, pas, m):
        ps, rel = oracles.fiber_relation(oracles.rows_of(pas), m)
        E = fiber_matrix(pas, m)
        for i, p in enumerate(ps):
            for j, q in enumerate(ps):
                assert E[pack(p, pas.n), pack(q, pas.n)] == (j in rel[i])

    def test_matrix_read_only(self):
        E = entailment_matrix(T1)
        with pytest.raises(ValueError):
            E[0, 0] = False

    def test_capacity(self):
        with pytest.raises(CapacityError):
            fiber_matrix(T1, 5)

    @given(tables(max_n=4))
    def test_rows_match_matrix(self, pas):
        rows = build_entailment_rows(pas)
        M = entailment_matrix(pas)
        for A, row in enumerate(rows):
            assert [bool(row >> B & 1) for B in range(1 << pas.n)] == M[A].tolist()
        anti = not (M & M.T & ~np.eye(M.shape[0], dtype=bool)).any()
        assert powerset_antisymmetric(rows) == anti

    @pytest.mark.parametrize("n", range(1, 7))
    def test_superset_masks(self, n):
        sup = superset_masks(n)
        for X in range(1 << n):
            assert sup[X] == sum(1 << Y for Y in range(1 << n) if Y & X == X)

    @given(tables(), st.integers(1, 3), st.data())
    def test_pack_roundtrip(self, pas, m, data):
        phi = tuple(data.draw(st.lists(subsets(pas.n), min_size=m, max_size=m)))
        assert unpack(pack(phi, pas.n), pas.n, m) == phi


class TestSubsetSyntax:
    @pytest.mark.parametrize(
        "text,expected", [("", set()), ("{}", set()), ("*", {0, 1, 2}), ("0,2", {0, 2}), ("{1}", {1})]
    )
    def test_parse(self, text, expected):
        assert parse_subset(text, 3) == expected

    @pytest.mark.parametrize("text", ["3", "a", "0,,1"])
    def test_bad(self, text):
        with pytest.raises(InputError):
            parse_subset(text, 3)

    def test_format(self):
        assert format_subset({2, 0}) == "{0,2}"

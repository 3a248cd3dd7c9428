import itertools

import pytest

import oracles
from pas_lab.core import FinitePas, canonicalize, is_isomorphic
from pas_lab.enumeration import (
    PREDICATES,
    Mode,
    SearchQuery,
    enumerate_all,
    enumerate_canonical,
    is_canonical,
    parse_predicates,
    prefixes,
    search,
    table_count,
    worker_count,
)
from pas_lab.errors import CapacityError, InputError
from pas_lab.props import Prop


class TestEnumerateAll:
    @pytest.mark.parametrize("n,count", [(1, 2), (2, 81)])
    def test_counts(self, n, count):
        tables = list(enumerate_all(n))
        assert len(tables) == count == table_count(n)
        assert len(set(tables)) == count

    def test_n3_count(self):
        assert sum(1 for _ in enumerate_all(3)) == 262144 == table_count(3)

    def test_order(self):
        flats = [p.flat() for p in enumerate_all(2)]
        assert flats == sorted(flats)
        assert flats[0] == (0, 0, 0, 0) and flats[-1] == (2, 2, 2, 2)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            next(enumerate_all(4))
        with pytest.raises(InputError):
            next(enumerate_all(0))

    def test_prefixes_partition(self):
        parts = [list(enumerate_all(2, p)) for p in prefixes(2, 2)]
        assert [q for part in parts for q in part] == list(enumerate_all(2))


class TestCanonical:
    def test_n1(self):
        assert len(list(enumerate_canonical(1))) == 2

    def test_n2_orbits(self):
        reps = list(enumerate_canonical(2))
        assert len(reps) == len({canonicalize(p) for p in enumerate_all(2)}) == 45
        assert all(is_canonical(p) for p in reps)
        for p, q in itertools.combinations(reps, 2):
            assert not is_isomorphic(p, q)

    def test_every_class_represented(self):
        reps = set(enumerate_canonical(2))
        assert all(canonicalize(p) in reps for p in enumerate_all(2))


class TestQuery:
    def test_contradiction(self):
        with pytest.raises(InputError):
            SearchQuery(2, require="tl", forbid="tl")

    def test_unknown_name(self):
        with pytest.raises(InputError):
            parse_predicates("tl,bogus")

    def test_names(self):
        assert {p.value for p in Prop} <= set(PREDICATES)
        assert parse_predicates("TL, one_way,") == {"tl", "one_way"}

    def test_cheapest_first(self):
        q = SearchQuery(2, require="posetal,trivial,tl")
        costs = [PREDICATES[name][0] for name in ("trivial", "tl", "posetal")]
        assert costs == sorted(costs)
        assert [fn for fn, _ in q.checks()] == [PREDICATES[k][1] for k in ("trivial", "tl", "posetal")]

    def test_workers_env(self, monkeypatch):
        monkeypatch.setenv("PAS_LAB_THREADS", "3")
        assert worker_count() == 3
        assert worker_count(2) == 2
        monkeypatch.setenv("PAS_LAB_THREADS", "x")
        with pytest.raises(InputError):
            worker_count()


class TestSearch:
    def test_k_nontrivial_none(self):
        res = search(SearchQuery(2, require="k", forbid="trivial"))
        assert res.first is None and res.exhaustive and res.examined == 81

    def test_count_mode(self):
        res = search(SearchQuery(2, require="total", mode="count"))
        assert res.count == 16

    def test_all_mode(self):
        res = search(SearchQuery(2, require="posetal", mode=Mode.ALL))
        assert len(res.matches) == res.count
        assert all(PREDICATES["posetal"][1](p) for p in res.matches)

    def test_canonical_only(self):
        full = search(SearchQuery(2, require="reflexive", mode="count"))
        canon = search(SearchQuery(2, require="reflexive", mode="count", canonical_only=True))
        assert 0 < canon.count < full.count

    def test_first_is_earliest_match(self):
        q = SearchQuery(3, require="tl,one_way", forbid="ant")
        res = search(q)
        expected = None
        for flat in itertools.product(range(4), repeat=9):
            p = FinitePas.from_flat(3, flat)
            t = oracles.rows_of(p)
            v = oracles.props(t)
            if v["tl"] and v["one_way"] and not oracles.powerset_antisymmetric(t):
                expected = p
                break
        assert res.first == expected
        assert res.first == search(q).first

    def test_parallel_matches_serial(self):
        q = SearchQuery(3, require="id,one_way", mode="count")
        assert search(q, workers=2).count == search(q, workers=1).count
        first = SearchQuery(3, require="tl,one_way", forbid="ant")
        assert search(first, workers=2).first == search(first, workers=1).first

    def test_sampled(self):
        res = search(SearchQuery(4, require="total", mode="count", samples=200, seed=1))
        assert not res.exhaustive and res.examined == 200
        again = search(SearchQuery(4, require="total", mode="count", samples=200, seed=1))
        assert again.count == res.count

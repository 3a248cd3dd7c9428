import pytest

from conftest import corpus_entries
from pas_lab.complete import fiber_complete, r2
from pas_lab.enumeration import PREDICATES

ENTRIES = corpus_entries()


def claim_mismatches(pas, side) -> dict:
    """Claims of one sidecar that the computed values contradict, as ``{key: (claimed, got)}``."""
    out = {}
    for key, want in side["claims"].items():
        got = PREDICATES[key][1](pas)
        if got != want:
            out[key] = (want, got)
    if "fiber_complete_2" in side:
        got = fiber_complete(pas, 2)
        if got != side["fiber_complete_2"]:
            out["fiber_complete_2"] = (side["fiber_complete_2"], got)
    if "r2" in side:
        got = sorted(r2(pas))
        if got != side["r2"]:
            out["r2"] = (side["r2"], got)
    return out


def test_corpus_size():
    groups = {}
    for name, _, _ in ENTRIES:
        groups.setdefault(name.rsplit("_", 1)[0], []).append(name)
    sizes = {k: len(v) for k, v in groups.items()}
    assert sizes == {"ant": 7, "trans": 4, "total": 5, "total_trans": 2, "posetal": 7, "complete": 2}


@pytest.mark.parametrize("name,pas,side", ENTRIES, ids=[e[0] for e in ENTRIES])
def test_claims(name, pas, side):
    assert side["claims"]
    assert claim_mismatches(pas, side) == {}

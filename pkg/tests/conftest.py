import json
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from pas_lab.core import FinitePas, read_table
from pas_lab.endofn import PartialEndoFn

settings.register_profile(
    "default", deadline=None, max_examples=150, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

TESTS = Path(__file__).parent
CORPUS = TESTS / "corpus"


def corpus_entries():
    """``(name, pas, sidecar)`` for every stored table, sorted by name."""
    out = []
    for path in sorted(CORPUS.glob("*.pas")):
        side = json.loads(path.with_suffix(".json").read_text())
        out.append((path.stem, read_table(path), side))
    return out


def corpus_table(name: str) -> FinitePas:
    return read_table(CORPUS / f"{name}.pas")


@st.composite
def tables(draw, min_n: int = 1, max_n: int = 3, total: bool = False):
    n = draw(st.integers(min_n, max_n))
    cell = st.integers(0, n - 1) if total else st.one_of(st.none(), st.integers(0, n - 1))
    flat = draw(st.lists(cell, min_size=n * n, max_size=n * n))
    return FinitePas.from_rows([flat[i * n:(i + 1) * n] for i in range(n)])


@st.composite
def endofns(draw, min_n: int = 1, max_n: int = 6):
    n = draw(st.integers(min_n, max_n))
    imgs = draw(st.lists(st.one_of(st.none(), st.integers(0, n - 1)), min_size=n, max_size=n))
    return PartialEndoFn(n, tuple(imgs))


@pytest.fixture(scope="session")
def corpus():
    return corpus_entries()


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)

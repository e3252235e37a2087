import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from generators import random_formal
from semired.builtin import BUILTIN, builtin
from semired.cyclo import CycNum, zeta
from semired.fixtures import (
    FixtureError,
    format_matrix,
    formal_document,
    galois_document,
    load_fixture,
    pair_document,
    parse_fixture,
    parse_matrix,
)
from semired.ldata import local_factor
from semired.transfer import TransferPair

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.mark.parametrize("name", sorted(BUILTIN))
def test_galois_documents_round_trip(name):
    d = builtin(name)
    text = galois_document(d).text()
    back = load_fixture(text).datum
    assert back.labels == d.labels
    assert [local_factor(back, v) for v in d.labels] == [local_factor(d, v) for v in d.labels]
    assert galois_document(back).text() == text


@given(st.integers(0, 10**6))
def test_formal_and_pair_documents_round_trip(seed):
    rng = random.Random(seed)
    pi = random_formal(rng, [5, 7, 11], (Fraction(0), Fraction(1, 2)), with_epsilon=True)
    back = load_fixture(formal_document(pi).text()).datum
    assert back.table() == pi.table() and back.epsilon == pi.epsilon
    pair = TransferPair.from_data(pi, pi, unknown1=("v7",))
    again = load_fixture(pair_document(pair).text()).pair
    assert again.side1 == pair.side1 and again.side2 == pair.side2
    assert again.epsilon1 == pair.epsilon1


def test_matrix_text_round_trip():
    one, w = CycNum.rational(1), zeta(3)
    m = ((w, one), (CycNum.rational(Fraction(-1, 2)), w * w))
    assert parse_matrix(format_matrix(m)) == m


@pytest.mark.parametrize("text,fragment", [
    ("[nonsense]\n", "unknown section"),
    ("[places]\nv5: q=5\n[places]\nv7: q=7\n", "duplicate section"),
    ("v5: q=5\n", "outside any section"),
    ("[places]\nv5 q=5\n", "key: value"),
    ("[places\n", "malformed section header"),
])
def test_document_syntax_errors(text, fragment):
    with pytest.raises(FixtureError, match=fragment):
        parse_fixture(text)


def test_errors_carry_line_numbers():
    with pytest.raises(FixtureError) as info:
        load_fixture((FIXTURES / "broken-assoc.gd").read_text())
    assert "associativity" in str(info.value) and str(info.value).startswith("line ")
    with pytest.raises(FixtureError, match="not declared"):
        load_fixture((FIXTURES / "dangling-place.gd").read_text())


@pytest.mark.parametrize("text,fragment", [
    ("[char]\ngen 1: -1\n", "without a \\[group\\]"),
    ("[places]\nv5: q=5\n[ldata]\nkind: formal\n", "no factor"),
    ("[places]\nv5: q=5\n[ldata]\nkind: banana\n", "unknown kind"),
    ("[places]\nv5: q=5\n[ldata]\nkind: formal\nplace v5: root(2,1; 0; 7)\n", "v5"),
    ("[places]\nv5: q=5\n[pair]\nside1 v5: unknown\n", "side2 has no entry"),
])
def test_semantic_errors(text, fragment):
    with pytest.raises(FixtureError, match=fragment):
        load_fixture(text)


@pytest.mark.parametrize("path", sorted(p.name for p in FIXTURES.glob("*.gd")
                                        if p.name not in ("broken-assoc.gd", "dangling-place.gd")))
def test_shipped_fixtures_load(path):
    fx = load_fixture((FIXTURES / path).read_text())
    assert fx.datum is not None or fx.pair is not None


def test_shipped_fixtures_match_the_generator():
    import importlib.util

    spec = importlib.util.spec_from_file_location("make_fixtures", FIXTURES.parent / "scripts" / "make_fixtures.py")
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    for name, text in module.documents().items():
        assert (FIXTURES / name).read_text() == text, name

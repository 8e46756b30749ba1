import random

import pytest

from kirkinv import catalog
from kirkinv.invariants import basing_change, k_sequences, kappa_table, rebase_component
from kirkinv.words import magnus_expand
from oracles import random_word


def entries():
    yield catalog.build_fenn_rolfsen()
    yield catalog.build_Y3()
    for n in range(3, 9):
        yield catalog.build_Y(n)
        yield catalog.build_stirling(n)
    for n in range(4, 7):
        for i in range(2, n):
            yield catalog.build_stirling_reversed(n, i)


@pytest.mark.parametrize("entry", list(entries()), ids=lambda e: f"{e.name}{e.params}")
def test_expected_tables(entry):
    assert entry.expected
    for exp, ok, actual in entry.check():
        assert ok, f"{exp.label}: expected {exp.expected!r}, got {actual!r}"
        assert exp.origin in ("published", "hand-derived", "by-definition")


def test_builder_bounds():
    with pytest.raises(ValueError):
        catalog.build_Y(2)
    with pytest.raises(ValueError):
        catalog.build_stirling(2)
    with pytest.raises(ValueError):
        catalog.build_stirling_reversed(5, 1)
    with pytest.raises(ValueError):
        catalog.build_stirling_reversed(5, 5)
    with pytest.raises(KeyError):
        catalog.build("nope")
    with pytest.raises(ValueError):
        catalog.build("Y")


def test_words_match_definitions():
    assert catalog.build_fenn_rolfsen().presentation.to_json()["components"] == {
        "1": [{"sign": -1, "word": "x2"}],
        "2": [{"sign": 1, "word": "x1"}],
    }
    assert catalog.build_Y(5).presentation.to_json()["components"] == {
        "5": [{"sign": 1, "word": "[x1,[x2,[x3,x4]]]"}]
    }
    assert catalog.build_stirling(5).presentation.to_json()["components"] == {
        "5": [{"sign": 1, "word": "x1"}, {"sign": -1, "word": "x1^[x2,[x3,x4]]"}]
    }
    assert catalog.build_stirling_reversed(5, 3).presentation.to_json()["components"] == {
        "5": [{"sign": 1, "word": "x1"}, {"sign": -1, "word": "x1^[x2,[x3^-1,x4]]"}]
    }
    y3 = catalog.build_Y3().presentation.to_json()["components"]["3"]
    assert [(r["sign"], r["word"]) for r in y3] == [
        (1, "x1 x2^-1"), (-1, "x1"), (1, "x2 x1"), (-1, "x2 x1 x2^-1")
    ]


def test_stirling_commutator_leading_monomial():
    # the expansion of c starts at X_2 ... X_{n-1}, over the full index range
    for n in range(4, 9):
        c = catalog.stirling_c(n).word(n, n)
        lead = (magnus_expand(c) - 1).leading_term()
        assert lead == (tuple(range(2, n)), 1)


def test_basing_fuzz_keeps_expected_values():
    rng = random.Random(31)
    for entry in (catalog.build_Y(3), catalog.build_stirling(3), catalog.build_Y(4), catalog.build_stirling(4)):
        n = entry.presentation.n
        for _ in range(50):
            p = entry.presentation
            for _ in range(rng.randint(1, 3)):
                j = rng.randint(1, n - 1)
                g = random_word(rng, n, n, 5)
                p = basing_change(p, j, g.to_expr(), components=[n])
                p = rebase_component(p, n, random_word(rng, n, n, 5).to_expr())
            for exp, ok, actual in entry.check(p):
                assert ok, (exp.label, actual)
            assert [r for *_, r in kappa_table(p, n)] == [r for *_, r in kappa_table(entry.presentation, n)]
            assert k_sequences(p, n) == k_sequences(entry.presentation, n)


def test_cross_section_lookup():
    assert catalog.cross_section("fenn-rolfsen").n == 2
    assert catalog.cross_section("Y", 3) == catalog.y3_cross_section()
    assert catalog.cross_section("Y", 5).n == 5
    with pytest.raises(KeyError):
        catalog.cross_section("stirling", 4)

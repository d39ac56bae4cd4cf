import pytest

from km_forge import errors
from km_forge.formulas import (BOT, TOP, Formula, Impl, Join, Meet, Var, biimp, enumerate_terms, neg, parse,
                               substitute, to_text)

p0, p1, p2 = Var(0), Var(1), Var(2)


@pytest.mark.parametrize("text, expected", [
    ("p0 & p1 | p2", Join(Meet(p0, p1), p2)),
    ("p0 -> p1 -> p2", Impl(p0, Impl(p1, p2))),
    ("p0 | p1 -> p2", Impl(Join(p0, p1), p2)),
    ("~p0", Impl(p0, BOT)),
    ("~~p0", neg(neg(p0))),
    ("p0 <-> p1", biimp(p0, p1)),
    ("(p0 -> p1) -> p0", Impl(Impl(p0, p1), p0)),
    ("0 | 1", Join(BOT, TOP)),
    ("⊥ -> ⊤", Impl(BOT, TOP)),
])
def test_parse(text, expected):
    assert parse(text) == expected


def test_parse_numbers_identifiers_by_first_appearance():
    assert parse("q & p -> q") == Impl(Meet(p0, p1), p0)
    # indexed names keep their index
    assert parse("p2 & p0") == Meet(p2, p0)


@pytest.mark.parametrize("text, position", [
    ("", 0),
    ("p0 & ", 5),
    ("p0 $ p1", 3),
    ("(p0", 3),
    ("p0 p1", 3),
])
def test_parse_errors_carry_position(text, position):
    with pytest.raises(errors.ParseError) as e:
        parse(text)
    assert e.value.position == position
    assert e.value.exit_code == 1


@pytest.mark.parametrize("formula, text", [
    (Impl(Impl(p0, p1), p2), "(p0 -> p1) -> p2"),
    (Impl(p0, Impl(p1, p2)), "p0 -> p1 -> p2"),
    (Meet(p0, Meet(p1, p2)), "p0 & (p1 & p2)"),
    (Meet(Join(p0, p1), p2), "(p0 | p1) & p2"),
    (Join(Meet(p0, p1), p2), "p0 & p1 | p2"),
])
def test_to_text_parenthesizes_minimally(formula, text):
    assert to_text(formula) == text
    assert parse(text) == formula


def test_formula_measures():
    f = Impl(Meet(p0, p2), BOT)
    assert (f.depth, f.size, f.arity) == (2, 5, 3)
    assert f.variables() == frozenset({0, 2})


def test_substitute():
    assert substitute(Meet(p0, p1), {1: TOP}) == Meet(p0, TOP)


def test_enumerate_terms_counts():
    assert list(enumerate_terms(1, 0)) == [p0, BOT, TOP]
    closed = list(enumerate_terms(0, 1))
    assert len(closed) == 14
    assert len(set(closed)) == 14


def test_enumerate_terms_is_ordered_by_depth():
    depths = [f.depth for f in enumerate_terms(1, 2)]
    assert depths == sorted(depths)


def test_formula_needs_a_key():
    class Nameless(Formula):
        __slots__ = ()

        def variables(self):
            return frozenset()

    with pytest.raises(TypeError):
        Nameless()

"""Expression language: grammar, round trips, error reporting."""

import random

import pytest

from moyal import scalars
from moyal.errors import ExpressionError
from moyal.expressions import (
    BinOp,
    Neg,
    Num,
    Pow,
    Sym,
    Var,
    parse,
    parse_coefficient,
    parse_poly,
    parse_series,
    print_ast,
)
from moyal.poly import Poly, pair_space, phase_space

SP = phase_space(1)


def random_ast(rng: random.Random, depth: int):
    if depth == 0:
        return rng.choice(
            [
                Num(rng.randint(0, 9)),
                Sym(rng.choice(["i", "mu"])),
                Var(rng.choice(["q1", "p1"])),
            ]
        )
    kind = rng.randrange(6)
    if kind == 0:
        return Neg(random_ast(rng, depth - 1))
    if kind == 1:
        base = rng.choice([Sym("mu"), Var("q1"), Var("p1"), Num(rng.randint(0, 5))])
        return Pow(base, rng.randint(0, 4))
    op = rng.choice(["+", "-", "*", "/"])
    return BinOp(op, random_ast(rng, depth - 1), random_ast(rng, depth - 1))


def test_parse_print_round_trip_200_random_asts():
    rng = random.Random(71)
    checked = 0
    while checked < 200:
        ast = random_ast(rng, rng.randint(1, 4))
        text = print_ast(ast)
        assert parse(text) == ast, text
        checked += 1


def test_poly_print_parse_round_trip():
    rng = random.Random(73)
    from conftest import random_poly

    for space in (SP, phase_space(2), pair_space(1)):
        for _ in range(20):
            p = random_poly(rng, space, 4, terms=4)
            assert parse_poly(str(p), space) == p


@pytest.mark.parametrize(
    "text,expected",
    [
        ("1 + 2*3", 7),
        ("(1 + 2)*3", 9),
        ("2^3^1", 8),
        ("-2^2", -4),
        ("6/2/3", 1),
        ("1 - 2 - 3", -4),
    ],
)
def test_precedence(text, expected):
    poly = parse_poly(text, SP)
    assert poly == Poly.constant(SP, scalars.Coefficient.from_int(expected))


def test_unary_minus_binds_looser_than_power():
    assert parse("-q1^2") == Neg(Pow(Var("q1"), 2))


def test_error_positions():
    with pytest.raises(ExpressionError) as err:
        parse("q1 +\n* p1")
    assert err.value.line == 2
    assert err.value.column == 1
    with pytest.raises(ExpressionError) as err:
        parse("q1 ? p1")
    assert err.value.column == 4
    assert err.value.token == "?"


def test_unknown_variable_message_lists_space():
    with pytest.raises(ExpressionError) as err:
        parse_poly("q3", SP)
    assert "q3" in str(err.value)
    assert "q1" in str(err.value)


def test_division_restrictions():
    assert parse_poly("q1/2", SP) == Poly.variable(SP, "q1").scale(
        scalars.Coefficient.from_fraction("1/2")
    )
    assert parse_poly("q1/mu^2", SP) == Poly.variable(SP, "q1").scale(
        (scalars.MU * scalars.MU).inverse()
    )
    with pytest.raises(ExpressionError):
        parse_poly("q1/p1", SP)
    with pytest.raises(ExpressionError):
        parse_poly("q1/0", SP)
    with pytest.raises(ExpressionError):
        parse_poly("q1/(mu - mu)", SP)


def test_exponent_must_be_nonnegative_literal():
    with pytest.raises(ExpressionError):
        parse("q1^mu")
    with pytest.raises(ExpressionError):
        parse("q1^(2)")


def test_series_parsing():
    series = parse_series("1, 1/6, mu^2, -i")
    assert series[0] == scalars.ONE
    assert series[2] == scalars.MU * scalars.MU
    assert series[3] == -scalars.I
    with pytest.raises(ExpressionError):
        parse_series("1,,2")
    with pytest.raises(ExpressionError):
        parse_series("  ")


def test_parse_coefficient_rejects_variables():
    with pytest.raises(ExpressionError):
        parse_coefficient("q1 + 1")

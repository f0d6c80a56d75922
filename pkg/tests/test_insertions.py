import math
from fractions import Fraction

import pytest

from realwdvv.insertions import (
    emit_table,
    expansion_coefficient,
    lower_bound,
    mixed_line_invariant,
    sphere_trade,
)


def _labels(max_degree):
    for degree in range(1, max_degree + 1):
        for lines in range(2 * degree + 1):
            for points in range((2 * degree - lines) // 2 + 1):
                yield degree, lines, points


@pytest.mark.parametrize(
    "m, p, q, expected",
    [(0, 2, 3, 1), (1, 1, 0, -1), (1, 0, 1, 1), (2, 1, 1, -1), (3, 2, 1, 1)],
)
def test_expansion_coefficient(m, p, q, expected):
    assert expansion_coefficient(m, p, q) == expected


def test_sphere_trade_doubles_and_adds_a_real_point(real_store):
    assert sphere_trade(real_store, 1, 0, 0) == 2
    assert sphere_trade(real_store, 1, 0, 0, spheres=2) == 4
    assert sphere_trade(real_store, 2, 0, 0) == 0


@pytest.mark.parametrize(
    "degree, minus, plus, points, expected",
    [
        (1, 1, 0, 0, -1),
        (1, 0, 1, 0, 1),
        (1, 1, 1, 0, -2),
        (3, 3, 0, 0, -14),
        (3, 1, 1, 0, 6),
        (3, 2, 2, 0, -24),
    ],
)
def test_mixed_line_invariant(real_store, degree, minus, plus, points, expected):
    assert mixed_line_invariant(real_store, degree, minus, plus, points) == expected


@pytest.mark.parametrize(
    "degree, lines, points, expected",
    [(3, 3, 0, 6), (3, 4, 0, 12), (1, 2, 0, 0), (3, 5, 0, 16)],
)
def test_lower_bound(real_store, degree, lines, points, expected):
    assert lower_bound(real_store, degree, lines, points) == expected


def test_table_rows(real_store, complex_store):
    table = emit_table(real_store, complex_store, 3)
    rows = {(row.degree, row.lines, row.points): row for row in table}
    assert len(rows) == 29

    row = rows[(3, 4, 0)]
    assert row.expansion == (16, -12, -24, -12, 16)
    assert (row.minimum, row.complex_count, row.real_points) == (12, 1312, 2)

    row = rows[(2, 4, 0)]
    assert row.expansion == (8, 8, 0, -8, -8)
    assert (row.minimum, row.complex_count) == (0, 92)

    assert [rows[(1, a, b)].expansion for a, b in ((0, 0), (0, 1), (1, 0), (2, 0))] == [
        (1,),
        (-1,),
        (-1, 1),
        (0, -2, 0),
    ]


@pytest.mark.parametrize("degree, lines, points", list(_labels(4)))
def test_swap_symmetry(real_store, degree, lines, points):
    for plus in range(lines + 1):
        minus = lines - plus
        sign = (-1) ** (degree + minus + plus + 1)
        assert mixed_line_invariant(real_store, degree, minus, plus, points) == sign * (
            mixed_line_invariant(real_store, degree, plus, minus, points)
        )


@pytest.mark.parametrize("degree, lines, points", list(_labels(4)))
def test_averaging_reassembles_the_averaged_line(real_store, degree, lines, points):
    total = sum(
        math.comb(lines, i)
        * mixed_line_invariant(real_store, degree, lines - i, i, points)
        for i in range(lines + 1)
    )
    assert Fraction(total, 2**lines) == real_store.invariant(degree, lines, points)


def test_minimum_column_is_non_negative(real_store, complex_store):
    assert all(row.minimum >= 0 for row in emit_table(real_store, complex_store, 3))

import random
from fractions import Fraction

import pytest

from realwdvv.algebra import (
    LinearEquation,
    LinearForm,
    MultiIndex,
    RationalLinearSystem,
    TruncatedSeries,
    Truncation,
    format_rational,
    multi_binomial,
    parse_rational,
    residual,
    solve_linear,
)
from realwdvv.errors import (
    InconsistentSystemError,
    NonlinearTermError,
    SeriesMismatchError,
)


def test_multi_binomial_is_product_of_binomials():
    lam = MultiIndex((0, 0, 3, 2))
    assert multi_binomial(lam, MultiIndex((0, 0, 1, 1))) == 6
    assert multi_binomial(lam, MultiIndex.zeros(4)) == 1
    assert multi_binomial(lam, lam) == 1


@pytest.mark.parametrize("seed", range(6))
def test_multi_binomial_is_symmetric_in_the_complement(seed):
    rng = random.Random(seed)
    lam = MultiIndex(tuple(rng.randint(0, 5) for _ in range(4)))
    for alpha, beta in lam.splittings():
        assert multi_binomial(lam, alpha) == multi_binomial(lam, lam - alpha)
        assert multi_binomial(lam, alpha) == multi_binomial(lam, beta)


def test_multi_binomial_rejects_alpha_not_below_lambda():
    with pytest.raises(ValueError):
        multi_binomial(MultiIndex((0, 0, 1, 0)), MultiIndex((0, 0, 0, 1)))


def test_multi_index_sizes_and_weight():
    lam = MultiIndex((0, 1, 2, 1))
    assert lam.size == 4
    assert lam.weight((0, 1, 2, 3)) == 8
    assert lam.factorial() == 2
    assert lam.expand() == (1, 2, 2, 3)
    assert str(lam) == "(0,1,2,1)"


def test_multi_index_subtraction_needs_componentwise_order():
    lam = MultiIndex((0, 0, 2, 1))
    assert lam - MultiIndex((0, 0, 1, 1)) == MultiIndex((0, 0, 1, 0))
    with pytest.raises(ValueError):
        MultiIndex((0, 0, 1, 0)) - lam
    with pytest.raises(ValueError):
        MultiIndex((0, -1, 0, 0))


def test_multi_index_constructors_agree():
    assert MultiIndex.of(4, {2: 2, 3: 1}) == MultiIndex.from_insertions(4, [2, 3, 2])
    assert MultiIndex.unit(4, 1) == MultiIndex.zeros(4).plus(1)


def test_splittings_cover_every_sub_index_once():
    lam = MultiIndex((0, 0, 2, 1))
    pairs = list(lam.splittings())
    assert len(pairs) == 3 * 2
    assert len({alpha for alpha, _ in pairs}) == len(pairs)
    for alpha, beta in pairs:
        assert alpha + beta == lam


@pytest.mark.parametrize(
    "value, text",
    [(Fraction(5), "5"), (Fraction(-3, 4), "-3/4"), (Fraction(0), "0")],
)
def test_rational_text_form(value, text):
    assert format_rational(value) == text
    assert parse_rational(text) == value


def test_linear_equation_drops_zero_coefficients():
    equation = LinearEquation({"x": 0, "y": Fraction(2)}, 1)
    assert dict(equation.coefficients) == {"y": 2}
    assert residual(equation, {"y": Fraction(-1, 2)}) == 0
    assert LinearEquation({"x": 0}).is_trivial


def test_solve_linear_unique_solution():
    system = RationalLinearSystem.from_equations(
        [
            LinearEquation({"x": 1, "y": 1}, -3),
            LinearEquation({"x": 1, "y": -1}, -1),
        ]
    )
    solution = solve_linear(system)
    assert solution.is_unique
    assert solution.values == {"x": 2, "y": 1}


def test_solve_linear_reports_witness_of_inconsistency():
    system = RationalLinearSystem.from_equations(
        [
            LinearEquation({"x": 1}, -1),
            LinearEquation({"x": 2}, -2),
            LinearEquation({"x": 1}, -2),
        ]
    )
    with pytest.raises(InconsistentSystemError) as excinfo:
        solve_linear(system, context="toy")
    assert excinfo.value.equation_index == 2
    assert excinfo.value.residual == -1
    assert "toy" in str(excinfo.value)


def test_solve_linear_keeps_relations_for_underdetermined_keys():
    system = RationalLinearSystem.from_equations(
        [LinearEquation({"x": 2, "y": 3}, -6), LinearEquation({"z": 1}, -1)],
        unknowns=["x", "y", "z"],
    )
    solution = solve_linear(system)
    assert solution.values == {"z": 1}
    # Largest numerator pivots, so y is expressed through the free x.
    assert solution.free == ("x",)
    assert set(solution.relations) == {"y"}
    assert set(solution.undetermined) == {"x", "y"}
    (relation,) = solution.relation_equations()
    assert residual(relation, {"x": Fraction(0), "y": Fraction(2)}) == 0
    assert residual(relation, {"x": Fraction(3), "y": Fraction(0)}) == 0


def test_linear_system_rejects_undeclared_unknowns():
    with pytest.raises(ValueError):
        RationalLinearSystem(("x",), (LinearEquation({"y": 1}),))
    with pytest.raises(ValueError):
        RationalLinearSystem(("x", "x"), ())


def test_from_equations_orders_declared_unknowns_first():
    system = RationalLinearSystem.from_equations(
        [LinearEquation({"b": 1, "c": 1})], unknowns=["a"]
    )
    assert system.unknowns == ("a", "b", "c")


@pytest.mark.parametrize("seed", range(8))
def test_solve_linear_recovers_planted_solution(seed):
    rng = random.Random(seed)
    unknowns = [f"x{i}" for i in range(rng.randint(2, 6))]
    planted = {key: Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for key in unknowns}
    equations = []
    for _ in range(len(unknowns) + 2):
        coefficients = {key: Fraction(rng.randint(-5, 5)) for key in unknowns}
        constant = -sum(c * planted[key] for key, c in coefficients.items())
        equations.append(LinearEquation(coefficients, constant))

    solution = solve_linear(RationalLinearSystem.from_equations(equations, unknowns))

    for key, value in solution.values.items():
        assert value == planted[key]
    for relation in solution.relation_equations():
        assert residual(relation, planted) == 0


def test_linear_form_product_of_unknowns_is_rejected():
    with pytest.raises(NonlinearTermError):
        LinearForm.of_unknown("x") * LinearForm.of_unknown("y")


def test_linear_form_scales_through_constants():
    form = LinearForm.of_unknown("x", 2) * LinearForm.of_constant(Fraction(3))
    form.accumulate(LinearForm({"x": 1}, 4), factor=-6)
    assert form.is_constant
    assert form.constant == -24


VARIABLES = ("x", "y")


def _series(terms, caps=(3, 3), total_cap=None):
    return TruncatedSeries(VARIABLES, Truncation(caps, total_cap, (0, 1)), terms)


def test_series_product_respects_caps():
    one_plus_x = _series({(0, 0): 1, (1, 0): 1}, caps=(2, 3))
    square = one_plus_x * one_plus_x
    assert square.terms() == {(0, 0): 1, (1, 0): 2, (2, 0): 1}
    cube = square * one_plus_x
    assert (3, 0) not in cube.terms()


def test_series_drops_terms_above_the_total_cap():
    series = _series({(1, 1): 1, (2, 1): 5}, total_cap=2)
    assert len(series) == 1


def test_series_partial_lowers_the_cap():
    series = _series({(2, 0): 1, (0, 3): 1})
    derived = series.partial("x")
    assert derived.terms() == {(1, 0): 2}
    assert derived.truncation.caps == (2, 3)
    with pytest.raises(SeriesMismatchError):
        series.partial("z")


def test_series_sum_takes_the_smaller_caps():
    total = _series({(1, 0): 1}, caps=(1, 3)) + _series({(0, 2): 1}, caps=(3, 1))
    assert total.truncation.caps == (1, 1)
    assert total.is_zero() is False
    assert total.terms() == {(1, 0): 1}


def test_series_difference_of_equal_series_is_zero():
    series = _series({(1, 2): Fraction(1, 3)})
    assert (series - series).is_zero()


def test_series_over_different_variables_do_not_mix():
    other = TruncatedSeries(("x", "z"), Truncation((3, 3)), {(1, 0): 1})
    with pytest.raises(SeriesMismatchError):
        _series({(1, 0): 1}) + other


def test_lowest_nonzero_prefers_total_degree():
    series = _series({(0, 2): 1, (1, 0): 3, (0, 1): 0})
    assert series.lowest_nonzero() == (1, 0)
    assert _series({}).lowest_nonzero() is None


def test_monomial_places_powers_by_name():
    truncation = Truncation((3, 3))
    series = TruncatedSeries.monomial(VARIABLES, truncation, {"y": 2}, Fraction(7))
    assert series.coefficient((0, 2)) == 7


def _random_series(rng):
    terms = {
        (rng.randint(0, 3), rng.randint(0, 3)): Fraction(
            rng.randint(-3, 3), rng.randint(1, 3)
        )
        for _ in range(rng.randint(0, 5))
    }
    return _series(terms, total_cap=4)


@pytest.mark.parametrize("seed", range(10))
def test_series_ring_laws(seed):
    rng = random.Random(seed)
    a, b, c = (_random_series(rng) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("variable", VARIABLES)
def test_series_partial_follows_the_leibniz_rule(seed, variable):
    rng = random.Random(seed)
    a, b = _random_series(rng), _random_series(rng)
    expected = a.partial(variable) * b + a * b.partial(variable)
    assert (a * b).partial(variable) == expected

"""Genus-0 Gromov–Witten invariants of ℙ³ through lines and points.

Degree one is seeded; each higher degree is a linear system built from
associativity of the quantum product, where the degree-d unknowns only
enter through the classical three-point contraction.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Sequence

from realwdvv.algebra import (
    LinearEquation,
    LinearForm,
    MultiIndex,
    RationalLinearSystem,
    multi_binomial,
    solve_linear,
)
from realwdvv.errors import NotSolvedError, UnderdeterminedSystemError
from realwdvv.target import ProjectiveSpaceP3

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class ComplexKey:
    """N_d(a lines, b points): ``lines`` h² and ``points`` h³ insertions."""

    degree: int
    lines: int
    points: int

    def __str__(self) -> str:
        return f"N_{self.degree}(l^{self.lines} pt^{self.points})"


DEGREE_ONE_SEEDS: dict[ComplexKey, Fraction] = {
    ComplexKey(1, 4, 0): Fraction(2),
    ComplexKey(1, 2, 1): Fraction(1),
    ComplexKey(1, 0, 2): Fraction(1),
}


@dataclass(frozen=True)
class ReducedInsertions:
    """``multiplier`` times the invariant at ``key``; a classical number when
    ``key`` is None."""

    multiplier: Fraction
    key: ComplexKey | None


def reduce_insertions(
    target: ProjectiveSpaceP3, degree: int, insertions: MultiIndex
) -> ReducedInsertions | None:
    """Apply the fundamental-class and divisor axioms; None is an exact zero."""
    if degree < 0:
        return None
    if degree == 0:
        if insertions.size != 3:
            return None
        value = target.intersection(insertions)
        return ReducedInsertions(value, None) if value else None
    if insertions[0]:
        return None

    multiplier = Fraction(1)
    entries = list(insertions)
    for index, count in enumerate(entries):
        if not count:
            continue
        pairing = target.divisor_pairing(index, degree)
        if pairing is not None:
            multiplier *= pairing**count
            entries[index] = 0
    reduced = MultiIndex(tuple(entries))
    if not multiplier or not target.complex_gate(degree, reduced):
        return None
    lines, points = target.line_point_counts(reduced)
    return ReducedInsertions(multiplier, ComplexKey(degree, lines, points))


def gated_keys(target: ProjectiveSpaceP3, degree: int) -> list[ComplexKey]:
    excess = target.dimension + target.ell_omega(degree) - 3
    return sorted(
        ComplexKey(degree, *target.line_point_counts(insertions))
        for insertions in target.insertions_with_excess(excess)
    )


class ComplexStore:
    def __init__(
        self,
        target: ProjectiveSpaceP3,
        values: Mapping[ComplexKey, Fraction],
        solved_up_to: int,
    ):
        self.target = target
        self.solved_up_to = solved_up_to
        self._values = dict(sorted(values.items()))

    def __len__(self) -> int:
        return len(self._values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ComplexStore):
            return NotImplemented
        return (
            self.target.name == other.target.name
            and self.solved_up_to == other.solved_up_to
            and self._values == other._values
        )

    def items(self) -> Iterator[tuple[ComplexKey, Fraction]]:
        return iter(self._values.items())

    def _require(self, degree: int) -> None:
        if degree > self.solved_up_to:
            raise NotSolvedError(degree, self.solved_up_to)

    def invariant(self, degree: int, lines: int, points: int) -> Fraction:
        """N_d through ``lines`` lines and ``points`` points; 0 off the gate."""
        if degree == 0:
            return self.evaluate(0, self.target.insertions(lines, points))
        self._require(degree)
        if not self.target.complex_gate(degree, self.target.insertions(lines, points)):
            return Fraction(0)
        return self._values[ComplexKey(degree, lines, points)]

    def evaluate(self, degree: int, insertions: MultiIndex | Sequence[int]) -> Fraction:
        """⟨μ^λ⟩_d for a raw insertion multi-index or list of basis indices."""
        if not isinstance(insertions, MultiIndex):
            insertions = MultiIndex.from_insertions(self.target.size, insertions)
        if degree > 0:
            self._require(degree)
        reduced = reduce_insertions(self.target, degree, insertions)
        if reduced is None:
            return Fraction(0)
        if reduced.key is None:
            return reduced.multiplier
        return reduced.multiplier * self._values[reduced.key]


Factor = Callable[[int, MultiIndex], LinearForm]


def four_point(
    target: ProjectiveSpaceP3,
    factor: Factor,
    degree: int,
    left: tuple[int, int],
    right: tuple[int, int],
    lam: MultiIndex,
) -> LinearForm:
    """Coefficient of q^d t^λ/λ! in Σ_{e,f} Φ_{i j e} g^{ef} Φ_{f k l}."""
    total = LinearForm()
    for first in range(degree + 1):
        second = degree - first
        for alpha, beta in lam.splittings():
            weight = multi_binomial(lam, alpha)
            for e, f, inverse in target.inverse_pairs():
                head = factor(first, alpha.plus(*left, e))
                if head.is_zero:
                    continue
                tail = factor(second, beta.plus(f, *right))
                if tail.is_zero:
                    continue
                total.accumulate(head * tail, weight * inverse)
    return total


def associativity_instances(
    target: ProjectiveSpaceP3, degree: int
) -> Iterator[tuple[tuple[int, int, int, int], MultiIndex]]:
    """Sorted quadruples of non-unit basis indices with every λ passing the gate."""
    for quad in itertools.combinations_with_replacement(range(1, target.size), 4):
        excess = target.ell_omega(degree) + target.dimension - sum(
            target.half_degree(index) for index in quad
        )
        for lam in target.insertions_with_excess(excess):
            yield quad, lam


def associativity_equations(
    target: ProjectiveSpaceP3, factor: Factor, degree: int
) -> Iterator[LinearEquation]:
    for (i, j, k, l), lam in associativity_instances(target, degree):
        base = four_point(target, factor, degree, (i, j), (k, l), lam)
        for swapped in (((i, k), (j, l)), ((i, l), (j, k))):
            form = LinearForm()
            form.accumulate(base)
            form.accumulate(four_point(target, factor, degree, *swapped, lam), -1)
            if not form.is_zero:
                yield form.to_equation(f"({i}{j}|{k}{l}) d={degree} lambda={lam}")


class _ComplexResolver:
    """Evaluates factors against known values; degree ``open_degree`` keys
    become unknowns."""

    def __init__(
        self,
        target: ProjectiveSpaceP3,
        known: Mapping[ComplexKey, Fraction],
        open_degree: int | None,
        solved_up_to: int,
    ):
        self.target = target
        self.known = known
        self.open_degree = open_degree
        self.solved_up_to = solved_up_to
        self._cache: dict[tuple[int, MultiIndex], LinearForm] = {}

    def __call__(self, degree: int, insertions: MultiIndex) -> LinearForm:
        cached = self._cache.get((degree, insertions))
        if cached is None:
            cached = self._resolve(degree, insertions)
            self._cache[(degree, insertions)] = cached
        return cached

    def _resolve(self, degree: int, insertions: MultiIndex) -> LinearForm:
        reduced = reduce_insertions(self.target, degree, insertions)
        if reduced is None:
            return LinearForm()
        if reduced.key is None:
            return LinearForm.of_constant(reduced.multiplier)
        if reduced.key in self.known:
            return LinearForm.of_constant(reduced.multiplier * self.known[reduced.key])
        if reduced.key.degree == self.open_degree:
            return LinearForm.of_unknown(reduced.key, reduced.multiplier)
        raise NotSolvedError(reduced.key.degree, self.solved_up_to)


def solve_complex(
    target: ProjectiveSpaceP3,
    max_degree: int,
    seeds: Mapping[ComplexKey, Fraction] | None = None,
) -> ComplexStore:
    if max_degree < 1:
        raise ValueError("max_degree must be at least 1")
    known: dict[ComplexKey, Fraction] = {
        key: Fraction(value) for key, value in (seeds or DEGREE_ONE_SEEDS).items()
    }
    for key in known:
        if key not in gated_keys(target, key.degree):
            raise ValueError(f"seed {key} violates the dimension gate")

    for degree in range(1, max_degree + 1):
        unknowns = [key for key in gated_keys(target, degree) if key not in known]
        resolver = _ComplexResolver(target, known, degree, degree - 1)
        equations = list(associativity_equations(target, resolver, degree))
        logger.info(
            "complex degree %d: %d unknowns, %d equations",
            degree,
            len(unknowns),
            len(equations),
        )
        solution = solve_linear(
            RationalLinearSystem.from_equations(equations, unknowns),
            context=f"complex degree {degree}",
        )
        if not solution.is_unique or len(solution.values) < len(unknowns):
            raise UnderdeterminedSystemError(degree, solution.undetermined)
        known.update(solution.values)

    return ComplexStore(target, known, max_degree)


def complex_residuals(
    store: ComplexStore, max_degree: int | None = None
) -> list[tuple[str, Fraction]]:
    """Associativity equations that fail to vanish on the stored values."""
    top = store.solved_up_to if max_degree is None else max_degree
    resolver = _ComplexResolver(
        store.target, dict(store.items()), None, store.solved_up_to
    )
    failures = []
    for degree in range(1, top + 1):
        for equation in associativity_equations(store.target, resolver, degree):
            if equation.constant:
                failures.append((equation.label, equation.constant))
    return failures

"""Exact arithmetic shared by every solver: multi-indices, sparse linear
systems over the rationals and truncated multivariate power series."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

from realwdvv.errors import (
    InconsistentSystemError,
    NonlinearTermError,
    SeriesMismatchError,
)

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True, order=True)
class MultiIndex:
    """Counts of insertions per basis element.

    Ordering is lexicographic on the entries so keys sort deterministically;
    the componentwise partial order is :meth:`is_below`.
    """

    entries: tuple[int, ...]

    def __post_init__(self):
        if any(entry < 0 for entry in self.entries):
            raise ValueError(f"negative entry in multi-index {self.entries}")

    @classmethod
    def zeros(cls, length: int) -> MultiIndex:
        return cls((0,) * length)

    @classmethod
    def unit(cls, length: int, index: int) -> MultiIndex:
        entries = [0] * length
        entries[index] = 1
        return cls(tuple(entries))

    @classmethod
    def of(cls, length: int, counts: Mapping[int, int]) -> MultiIndex:
        entries = [0] * length
        for index, count in counts.items():
            entries[index] += count
        return cls(tuple(entries))

    @classmethod
    def from_insertions(cls, length: int, insertions: Iterable[int]) -> MultiIndex:
        entries = [0] * length
        for index in insertions:
            entries[index] += 1
        return cls(tuple(entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, index: int) -> int:
        return self.entries[index]

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __add__(self, other: MultiIndex) -> MultiIndex:
        return MultiIndex(tuple(x + y for x, y in zip(self.entries, other.entries)))

    def __sub__(self, other: MultiIndex) -> MultiIndex:
        if not other.is_below(self):
            raise ValueError(f"{other.entries} is not below {self.entries}")
        return MultiIndex(tuple(x - y for x, y in zip(self.entries, other.entries)))

    def plus(self, *indices: int) -> MultiIndex:
        """Add one insertion for each basis index given."""
        entries = list(self.entries)
        for index in indices:
            entries[index] += 1
        return MultiIndex(tuple(entries))

    @property
    def size(self) -> int:
        """|λ|, the number of insertions."""
        return sum(self.entries)

    def weight(self, half_degrees: Sequence[int]) -> int:
        """‖λ‖, the insertion count weighted by half-degree."""
        return sum(count * degree for count, degree in zip(self.entries, half_degrees))

    def is_below(self, other: MultiIndex) -> bool:
        return all(x <= y for x, y in zip(self.entries, other.entries))

    def splittings(self) -> Iterator[tuple[MultiIndex, MultiIndex]]:
        """Every (α, β) with α + β = λ, α running lexicographically."""
        for alpha in itertools.product(*(range(count + 1) for count in self.entries)):
            beta = tuple(count - part for count, part in zip(self.entries, alpha))
            yield MultiIndex(alpha), MultiIndex(beta)

    def factorial(self) -> int:
        return math.prod(math.factorial(count) for count in self.entries)

    def expand(self) -> tuple[int, ...]:
        """The raw insertion list μ^λ as repeated basis indices."""
        return tuple(
            index for index, count in enumerate(self.entries) for _ in range(count)
        )

    def __str__(self) -> str:
        return "(" + ",".join(str(entry) for entry in self.entries) + ")"


def multi_binomial(lam: MultiIndex, alpha: MultiIndex) -> Fraction:
    """C(λ, α) = ∏ C(λ_j, α_j)."""
    if len(lam) != len(alpha) or not alpha.is_below(lam):
        raise ValueError(f"{alpha} is not below {lam}")
    return Fraction(math.prod(math.comb(n, k) for n, k in zip(lam, alpha)))


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


# --- linear systems -----------------------------------------------------------


@dataclass(frozen=True)
class LinearEquation:
    """Σ c_x·x + constant = 0."""

    coefficients: Mapping[Hashable, Fraction]
    constant: Fraction = ZERO
    label: str = ""

    def __post_init__(self):
        cleaned = {key: Fraction(c) for key, c in self.coefficients.items() if c}
        object.__setattr__(self, "coefficients", MappingProxyType(cleaned))
        object.__setattr__(self, "constant", Fraction(self.constant))

    @property
    def unknowns(self) -> frozenset:
        return frozenset(self.coefficients)

    @property
    def is_trivial(self) -> bool:
        return not self.coefficients and self.constant == 0

    def evaluate(self, values: Mapping[Hashable, Fraction]) -> Fraction:
        return residual(self, values)

    def __str__(self) -> str:
        parts = [f"{format_rational(c)}*{key}" for key, c in self.coefficients.items()]
        parts.append(format_rational(self.constant))
        prefix = f"[{self.label}] " if self.label else ""
        return prefix + " + ".join(parts) + " = 0"


def residual(equation: LinearEquation, values: Mapping[Hashable, Fraction]) -> Fraction:
    """Left side of the equation with every unknown substituted."""
    total = equation.constant
    for key, coefficient in equation.coefficients.items():
        total += coefficient * values[key]
    return total


class LinearForm:
    """Mutable accumulator for a linear expression while an equation is built.

    Multiplying two forms that both carry unknowns raises
    :class:`NonlinearTermError`.
    """

    __slots__ = ("coefficients", "constant")

    def __init__(
        self,
        coefficients: Mapping[Hashable, Fraction] | None = None,
        constant: Fraction = ZERO,
    ):
        self.coefficients: dict[Hashable, Fraction] = dict(coefficients or {})
        self.constant = Fraction(constant)

    @classmethod
    def of_constant(cls, value: Fraction) -> LinearForm:
        return cls(constant=value)

    @classmethod
    def of_unknown(cls, key: Hashable, coefficient: Fraction = ONE) -> LinearForm:
        return cls({key: Fraction(coefficient)})

    @property
    def is_constant(self) -> bool:
        return not self.coefficients

    @property
    def is_zero(self) -> bool:
        return not self.coefficients and self.constant == 0

    def scaled(self, factor: Fraction) -> LinearForm:
        if factor == 0:
            return LinearForm()
        return LinearForm(
            {key: c * factor for key, c in self.coefficients.items()},
            self.constant * factor,
        )

    def __mul__(self, other: LinearForm) -> LinearForm:
        if self.coefficients and other.coefficients:
            raise NonlinearTermError(
                f"product of unknowns {sorted(map(str, self.coefficients))} and "
                f"{sorted(map(str, other.coefficients))}"
            )
        if self.coefficients:
            return self.scaled(other.constant)
        return other.scaled(self.constant)

    def accumulate(self, other: LinearForm, factor: Fraction = ONE) -> None:
        if factor == 0:
            return
        for key, c in other.coefficients.items():
            updated = self.coefficients.get(key, ZERO) + c * factor
            if updated:
                self.coefficients[key] = updated
            else:
                self.coefficients.pop(key, None)
        self.constant += other.constant * factor

    def to_equation(self, label: str = "") -> LinearEquation:
        return LinearEquation(self.coefficients, self.constant, label)

    def __repr__(self) -> str:
        return f"LinearForm({self.coefficients!r}, {self.constant!r})"


@dataclass(frozen=True)
class RationalLinearSystem:
    unknowns: tuple[Hashable, ...]
    equations: tuple[LinearEquation, ...]

    def __post_init__(self):
        known = set(self.unknowns)
        if len(known) != len(self.unknowns):
            raise ValueError("duplicate unknowns in linear system")
        for index, equation in enumerate(self.equations):
            stray = equation.unknowns - known
            if stray:
                names = sorted(map(str, stray))
                raise ValueError(f"equation #{index} uses undeclared unknowns {names}")

    @classmethod
    def from_equations(
        cls,
        equations: Iterable[LinearEquation],
        unknowns: Iterable[Hashable] = (),
    ) -> RationalLinearSystem:
        """Declared unknowns first, then any others in order of appearance."""
        equations = tuple(equations)
        ordered = dict.fromkeys(unknowns)
        for equation in equations:
            for key in equation.coefficients:
                ordered.setdefault(key)
        return cls(tuple(ordered), equations)


@dataclass(frozen=True)
class LinearSolution:
    """Result of :func:`solve_linear`.

    ``relations`` maps each pivot that still depends on free unknowns to its
    reduced equation (pivot + Σ c·free + constant = 0).
    """

    values: Mapping[Hashable, Fraction]
    free: tuple[Hashable, ...]
    relations: Mapping[Hashable, LinearEquation] = field(default_factory=dict)

    @property
    def is_unique(self) -> bool:
        return not self.free

    @property
    def undetermined(self) -> tuple[Hashable, ...]:
        return self.free + tuple(self.relations)

    def relation_equations(self) -> list[LinearEquation]:
        return list(self.relations.values())


def solve_linear(system: RationalLinearSystem, context: str = "") -> LinearSolution:
    """Incremental reduced row echelon form over ℚ.

    The pivot of each new row is its coefficient with the largest numerator
    magnitude; ties go to the earliest declared unknown.
    """
    order = {key: position for position, key in enumerate(system.unknowns)}
    rows: dict[Hashable, dict[Hashable, Fraction]] = {}
    constants: dict[Hashable, Fraction] = {}

    for index, equation in enumerate(system.equations):
        coefficients = dict(equation.coefficients)
        constant = equation.constant

        for key in [key for key in coefficients if key in rows]:
            c = coefficients.pop(key)
            for other, value in rows[key].items():
                updated = coefficients.get(other, ZERO) - c * value
                if updated:
                    coefficients[other] = updated
                else:
                    coefficients.pop(other, None)
            constant -= c * constants[key]

        if not coefficients:
            if constant != 0:
                raise InconsistentSystemError(index, constant, context)
            continue

        pivot = max(
            coefficients,
            key=lambda key: (abs(coefficients[key].numerator), -order[key]),
        )
        scale = coefficients.pop(pivot)
        row = {key: c / scale for key, c in coefficients.items()}
        row_constant = constant / scale

        for other_pivot, other_row in rows.items():
            c = other_row.pop(pivot, None)
            if not c:
                continue
            for key, value in row.items():
                updated = other_row.get(key, ZERO) - c * value
                if updated:
                    other_row[key] = updated
                else:
                    other_row.pop(key, None)
            constants[other_pivot] -= c * row_constant

        rows[pivot] = row
        constants[pivot] = row_constant

    values: dict[Hashable, Fraction] = {}
    relations: dict[Hashable, LinearEquation] = {}
    for pivot in sorted(rows, key=order.__getitem__):
        row = rows[pivot]
        if row:
            relations[pivot] = LinearEquation(
                {pivot: ONE, **row}, constants[pivot], label=f"relation for {pivot}"
            )
        else:
            values[pivot] = -constants[pivot]
    free = tuple(key for key in system.unknowns if key not in rows)
    return LinearSolution(values, free, relations)


# --- truncated series ---------------------------------------------------------


@dataclass(frozen=True)
class Truncation:
    """Per-variable exponent caps plus a cap on the total degree of a subset
    of the variables. A cap of ``None`` means unbounded."""

    caps: tuple[int | None, ...]
    total_cap: int | None = None
    total_over: tuple[int, ...] = ()

    def admits(self, exponent: Sequence[int]) -> bool:
        for power, cap in zip(exponent, self.caps):
            if cap is not None and power > cap:
                return False
        if self.total_cap is not None:
            if sum(exponent[i] for i in self.total_over) > self.total_cap:
                return False
        return True

    def meet(self, other: Truncation) -> Truncation:
        if len(self.caps) != len(other.caps) or self.total_over != other.total_over:
            raise SeriesMismatchError("truncations over different variables")
        return Truncation(
            tuple(_min_cap(x, y) for x, y in zip(self.caps, other.caps)),
            _min_cap(self.total_cap, other.total_cap),
            self.total_over,
        )

    def lowered(self, index: int) -> Truncation:
        """Caps that remain exact after differentiating in variable ``index``."""
        caps = list(self.caps)
        if caps[index] is not None:
            caps[index] -= 1
        total = self.total_cap
        if total is not None and index in self.total_over:
            total -= 1
        return Truncation(tuple(caps), total, self.total_over)


def _min_cap(x: int | None, y: int | None) -> int | None:
    if x is None:
        return y
    if y is None:
        return x
    return min(x, y)


class TruncatedSeries:
    """Multivariate power series over ℚ stored as exponent -> coefficient."""

    __slots__ = ("variables", "truncation", "_terms")

    def __init__(
        self,
        variables: Sequence[str],
        truncation: Truncation,
        terms: Mapping[tuple[int, ...], Fraction] | None = None,
    ):
        self.variables = tuple(variables)
        if len(truncation.caps) != len(self.variables):
            raise SeriesMismatchError("one cap per variable is required")
        self.truncation = truncation
        self._terms: dict[tuple[int, ...], Fraction] = {}
        for exponent, coefficient in (terms or {}).items():
            exponent = tuple(exponent)
            if len(exponent) != len(self.variables):
                raise SeriesMismatchError(f"exponent {exponent} has the wrong length")
            if coefficient and truncation.admits(exponent):
                self._terms[exponent] = self._terms.get(exponent, ZERO) + Fraction(
                    coefficient
                )

    @classmethod
    def monomial(
        cls,
        variables: Sequence[str],
        truncation: Truncation,
        powers: Mapping[str, int],
        coefficient: Fraction = ONE,
    ) -> TruncatedSeries:
        index = {name: position for position, name in enumerate(variables)}
        exponent = [0] * len(variables)
        for name, power in powers.items():
            exponent[index[name]] = power
        return cls(variables, truncation, {tuple(exponent): coefficient})

    def _check(self, other: TruncatedSeries) -> None:
        if self.variables != other.variables:
            raise SeriesMismatchError(
                f"variables {self.variables} and {other.variables} differ"
            )

    def terms(self) -> Mapping[tuple[int, ...], Fraction]:
        return MappingProxyType(self._terms)

    def coefficient(self, exponent: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exponent), ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.variables == other.variables and self._terms == other._terms

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        self._check(other)
        truncation = self.truncation.meet(other.truncation)
        merged = dict(self._terms)
        for exponent, coefficient in other._terms.items():
            merged[exponent] = merged.get(exponent, ZERO) + coefficient
        return TruncatedSeries(self.variables, truncation, merged)

    def __neg__(self) -> TruncatedSeries:
        return self.scaled(-ONE)

    def __sub__(self, other: TruncatedSeries) -> TruncatedSeries:
        return self + (-other)

    def scaled(self, factor: Fraction) -> TruncatedSeries:
        return TruncatedSeries(
            self.variables,
            self.truncation,
            {exponent: c * factor for exponent, c in self._terms.items()},
        )

    def __mul__(self, other: TruncatedSeries) -> TruncatedSeries:
        self._check(other)
        truncation = self.truncation.meet(other.truncation)
        admits = truncation.admits
        product: dict[tuple[int, ...], Fraction] = {}
        right = list(other._terms.items())
        for left_exponent, left_coefficient in self._terms.items():
            if not admits(left_exponent):
                continue
            for right_exponent, right_coefficient in right:
                exponent = tuple(x + y for x, y in zip(left_exponent, right_exponent))
                if not admits(exponent):
                    continue
                product[exponent] = (
                    product.get(exponent, ZERO) + left_coefficient * right_coefficient
                )
        return TruncatedSeries(self.variables, truncation, product)

    def partial(self, variable: str) -> TruncatedSeries:
        try:
            index = self.variables.index(variable)
        except ValueError as e:
            raise SeriesMismatchError(f"no variable named {variable!r}") from e
        derived: dict[tuple[int, ...], Fraction] = {}
        for exponent, coefficient in self._terms.items():
            power = exponent[index]
            if power == 0:
                continue
            lowered = exponent[:index] + (power - 1,) + exponent[index + 1 :]
            derived[lowered] = coefficient * power
        return TruncatedSeries(self.variables, self.truncation.lowered(index), derived)

    def lowest_nonzero(self) -> tuple[int, ...] | None:
        """The nonzero exponent of least total degree, ties broken lexicographically."""
        if not self._terms:
            return None
        return min(self._terms, key=lambda exponent: (sum(exponent), exponent))

    def __repr__(self) -> str:
        return f"TruncatedSeries({self.variables}, {len(self._terms)} terms)"

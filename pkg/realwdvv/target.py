"""Cohomological data of a real symplectic sixfold (X, ω, φ).

Everything is graded by half-degree: μ ∈ H^{2p}(X) has half-degree p.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

from realwdvv.algebra import (
    LinearEquation,
    MultiIndex,
    RationalLinearSystem,
    solve_linear,
)
from realwdvv.errors import ConfigurationError, EngineError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BasisElement:
    label: str
    half_degree: int
    phi_sign: int


@dataclass(frozen=True, order=True)
class DegreeClass:
    """A curve class; for ℙ³ the multiple d of the line class."""

    value: int

    def __add__(self, other: DegreeClass) -> DegreeClass:
        return DegreeClass(self.value + other.value)

    def __int__(self) -> int:
        return self.value


def _degree(B: DegreeClass | int) -> int:
    return B.value if isinstance(B, DegreeClass) else int(B)


class TargetModel(ABC):
    """Basis μ⋆ of H⁰ ⊕ H²₋ ⊕ H⁴₊ ⊕ H⁶ together with the maps both WDVV sides use."""

    name: str
    dimension: int = 3
    basis: tuple[BasisElement, ...]

    @property
    def size(self) -> int:
        return len(self.basis)

    @cached_property
    def half_degrees(self) -> tuple[int, ...]:
        return tuple(element.half_degree for element in self.basis)

    def half_degree(self, index: int) -> int:
        return self.basis[index].half_degree

    def phi_sign(self, index: int) -> int:
        return self.basis[index].phi_sign

    @abstractmethod
    def ell_omega(self, B: DegreeClass | int) -> int:
        """⟨c₁(X, ω), B⟩."""

    @abstractmethod
    def doubling(self, B: DegreeClass | int) -> int:
        """𝔡(B) = B − φ_*(B), as a real degree."""

    @abstractmethod
    def z2_trivial(self, B: DegreeClass | int) -> bool:
        """Whether B is trivial over the real locus with ℤ₂ coefficients."""

    @abstractmethod
    def intersection(self, insertions: MultiIndex) -> Fraction:
        """⟨∏ μ^λ, [X]⟩."""

    @abstractmethod
    def divisor_pairing(self, index: int, B: DegreeClass | int) -> Fraction | None:
        """⟨μ_index, B⟩ if μ_index is a divisor class, otherwise None."""

    def real_parity_vanishes(
        self, B: DegreeClass | int, insertions: MultiIndex
    ) -> bool:
        """Vanishing for ℤ₂-trivial B when ℓ_ω(B)/2 matches the H⁴ count mod 2."""
        h4 = sum(
            count
            for count, element in zip(insertions, self.basis)
            if element.half_degree == 2
        )
        return self.z2_trivial(B) and (self.ell_omega(B) // 2 - h4) % 2 == 0

    def vanishing_slot(self, index: int) -> bool:
        """Classes in H²₊ ⊕ H⁴₋ kill every open invariant they enter."""
        element = self.basis[index]
        return (element.half_degree, element.phi_sign) in ((1, 1), (2, -1))

    def cup_pairing(self, i: int, j: int) -> Fraction:
        return self.intersection(MultiIndex.zeros(self.size).plus(i, j))

    @cached_property
    def pairing(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(
            tuple(self.cup_pairing(i, j) for j in range(self.size))
            for i in range(self.size)
        )

    @cached_property
    def pairing_inverse(self) -> tuple[tuple[Fraction, ...], ...]:
        columns = []
        for column in range(self.size):
            equations = [
                LinearEquation(
                    {(column, j): self.pairing[i][j] for j in range(self.size)},
                    -Fraction(int(i == column)),
                )
                for i in range(self.size)
            ]
            unknowns = [(column, j) for j in range(self.size)]
            solution = solve_linear(
                RationalLinearSystem.from_equations(equations, unknowns),
                context=f"{self.name} pairing inverse",
            )
            if not solution.is_unique:
                raise EngineError(f"pairing of target {self.name} is degenerate")
            columns.append([solution.values[(column, j)] for j in range(self.size)])
        return tuple(
            tuple(columns[j][i] for j in range(self.size)) for i in range(self.size)
        )

    def inverse_pairs(self) -> Iterator[tuple[int, int, Fraction]]:
        """Nonzero entries (i, j, g^{ij})."""
        for i, row in enumerate(self.pairing_inverse):
            for j, value in enumerate(row):
                if value:
                    yield i, j, value

    def real_dimension(self, B: DegreeClass | int, insertions: MultiIndex) -> int:
        """k_B(μ^λ) = (ℓ_ω(B) + 2l − Σ deg μ_i)/2, the number of real points."""
        twice = self.ell_omega(B) + 2 * insertions.size - 2 * insertions.weight(
            self.half_degrees
        )
        return twice // 2

    def complex_gate(self, B: DegreeClass | int, insertions: MultiIndex) -> bool:
        """Σ|μ_i| = dim X + ℓ_ω(B) + l − 3."""
        return insertions.weight(self.half_degrees) == (
            self.dimension + self.ell_omega(B) + insertions.size - 3
        )

    @cached_property
    def top_index(self) -> int:
        """Index of the Poincaré dual of a point."""
        return self.half_degrees.index(self.dimension)

    def point_pairing(self, index: int) -> Fraction:
        """⟨μ_index, [pt]⟩."""
        insertions = MultiIndex.zeros(self.size).plus(index, self.top_index)
        return self.intersection(insertions)

    def insertion_slots(self) -> tuple[int, ...]:
        """Basis indices that survive divisor and fundamental-class reduction."""
        return tuple(
            index
            for index, element in enumerate(self.basis)
            if element.half_degree >= 2 and not self.vanishing_slot(index)
        )

    def insertions_with_excess(self, excess: int) -> Iterator[MultiIndex]:
        """Multi-indices λ on the insertion slots with ‖λ‖ − |λ| = excess."""
        slots = self.insertion_slots()

        def fill(position: int, remaining: int, counts: dict[int, int]):
            if position == len(slots):
                if remaining == 0:
                    yield MultiIndex.of(self.size, counts)
                return
            step = self.half_degree(slots[position]) - 1
            for count in range(remaining // step + 1):
                yield from fill(
                    position + 1,
                    remaining - count * step,
                    {**counts, slots[position]: count},
                )

        if excess < 0:
            return
        yield from fill(0, excess, {})


class ProjectiveSpaceP3(TargetModel):
    """(ℙ³, τ₃) with basis 1, h, h², h³ and φ*h = −h."""

    name = "p3"
    line_index = 2
    point_index = 3

    def __init__(self):
        self.basis = tuple(
            BasisElement(label, degree, (-1) ** degree)
            for degree, label in enumerate(("1", "h", "h2", "h3"))
        )

    def ell_omega(self, B: DegreeClass | int) -> int:
        return 4 * _degree(B)

    def doubling(self, B: DegreeClass | int) -> int:
        return 2 * _degree(B)

    def z2_trivial(self, B: DegreeClass | int) -> bool:
        return _degree(B) % 2 == 0

    def intersection(self, insertions: MultiIndex) -> Fraction:
        return Fraction(int(insertions.weight(self.half_degrees) == self.dimension))

    def divisor_pairing(self, index: int, B: DegreeClass | int) -> Fraction | None:
        if self.basis[index].half_degree != 1:
            return None
        return Fraction(_degree(B))

    def real_parity_vanishes(
        self, B: DegreeClass | int, insertions: MultiIndex
    ) -> bool:
        # Stronger than the general rule: d + a even vanishes for every d.
        return (_degree(B) + insertions[self.line_index]) % 2 == 0

    def insertions(self, lines: int, points: int) -> MultiIndex:
        return MultiIndex.of(
            self.size, {self.line_index: lines, self.point_index: points}
        )

    def line_point_counts(self, insertions: MultiIndex) -> tuple[int, int]:
        return insertions[self.line_index], insertions[self.point_index]


TARGETS: dict[str, type[TargetModel]] = {"p3": ProjectiveSpaceP3}


def get_target(name: str) -> TargetModel:
    try:
        target_class = TARGETS[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown target {name!r}; available: {', '.join(sorted(TARGETS))}"
        ) from None
    logger.debug("using target %s", name)
    return target_class()


def basis_labels(target: TargetModel, indices: Sequence[int]) -> str:
    return ",".join(target.basis[index].label for index in indices)

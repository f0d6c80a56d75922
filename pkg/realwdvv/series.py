"""Generating functions Φ and Ω as truncated series, and the two PDEs they satisfy.

This is an independent check on the coefficient solver: the residual series
of each PDE must vanish below the caps.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from realwdvv.algebra import MultiIndex, TruncatedSeries, Truncation
from realwdvv.complex_gw import ComplexStore
from realwdvv.errors import NotSolvedError
from realwdvv.real_wdvv import (
    Relation,
    RealStore,
    canonical_relations,
    normalize,
    store_builder,
)
from realwdvv.target import TargetModel

logger = logging.getLogger(__name__)

U = "u"
Q = "q"


def t(index: int) -> str:
    return f"t{index}"


def series_variables(target: TargetModel) -> tuple[str, ...]:
    return tuple(t(index) for index in range(target.size)) + (U, Q)


def potential_truncation(target: TargetModel, q_cap: int, t_cap: int) -> Truncation:
    """q ≤ D, u ≤ 2D + 2, each t and their total ≤ T."""
    return Truncation(
        (t_cap,) * target.size + (2 * q_cap + 2, q_cap),
        total_cap=t_cap,
        total_over=tuple(range(target.size)),
    )


def _bounded_indices(length: int, total: int) -> Iterator[MultiIndex]:
    def fill(position: int, remaining: int, entries: tuple[int, ...]):
        if position == length:
            yield MultiIndex(entries)
            return
        for count in range(remaining + 1):
            yield from fill(position + 1, remaining - count, entries + (count,))

    yield from fill(0, total, ())


class PotentialPair:
    """Φ in (t, q) and Ω in (t, u, q), sharing one variable list."""

    def __init__(
        self,
        target: TargetModel,
        phi: TruncatedSeries,
        omega: TruncatedSeries,
        q_cap: int,
        t_cap: int,
    ):
        self.target = target
        self.phi = phi
        self.omega = omega
        self.q_cap = q_cap
        self.t_cap = t_cap
        self._derivatives: dict[tuple[str, tuple[str, ...]], TruncatedSeries] = {}

    @property
    def u_cap(self) -> int:
        return 2 * self.q_cap + 2

    def derivative(self, which: str, *variables: str) -> TruncatedSeries:
        """Mixed partial of ``phi`` or ``omega``; partials commute, so it is cached."""
        key = (which, tuple(sorted(variables)))
        cached = self._derivatives.get(key)
        if cached is None:
            if not variables:
                cached = self.phi if which == "phi" else self.omega
            else:
                *rest, last = key[1]
                cached = self.derivative(which, *rest).partial(last)
            self._derivatives[key] = cached
        return cached


def coefficient_weight(lam: MultiIndex, power: int = 0, halvings: int = 0) -> Fraction:
    """2^{-halvings} / (power! λ!): what one unit of an invariant, or of a
    relation's LHS − RHS, contributes to the coefficient of t^λ u^power."""
    return Fraction(2) ** -halvings / (math.factorial(power) * lam.factorial())


def _u_power(relation: Relation, points: int) -> int:
    return points - 1 if relation.kind == "M12" else points


def relation_weight(relation: Relation, lam: MultiIndex, points: int) -> Fraction:
    """Factor between an instance's LHS − RHS and its residual coefficient."""
    shift = 0 if relation.kind == "M12" else 1
    return coefficient_weight(lam, _u_power(relation, points), lam.size + shift)


def build_potentials(
    target: TargetModel,
    complex_store: ComplexStore,
    real_store: RealStore,
    q_cap: int,
    t_cap: int,
) -> PotentialPair:
    if q_cap > real_store.solved_up_to:
        raise NotSolvedError(q_cap, real_store.solved_up_to)
    complex_top = max(d for d in range(q_cap + 1) if target.doubling(d) <= q_cap)
    if complex_top > complex_store.solved_up_to:
        raise NotSolvedError(complex_top, complex_store.solved_up_to)

    variables = series_variables(target)
    truncation = potential_truncation(target, q_cap, t_cap)
    phi_terms: dict[tuple[int, ...], Fraction] = {}
    omega_terms: dict[tuple[int, ...], Fraction] = {}

    for lam in _bounded_indices(target.size, t_cap):
        for complex_degree in range(complex_top + 1):
            value = complex_store.evaluate(complex_degree, lam)
            if value:
                exponent = lam.entries + (0, target.doubling(complex_degree))
                phi_terms[exponent] = value * coefficient_weight(lam)

        for degree in range(q_cap + 1):
            normalized = normalize(target, lam, degree, apply_parity=False)
            if normalized is None:
                continue
            if normalized.key is None:
                points, value = 1, normalized.multiplier
            else:
                points = normalized.key.points
                value = normalized.multiplier * real_store.value(normalized.key)
            if value:
                exponent = lam.entries + (points, degree)
                omega_terms[exponent] = value * coefficient_weight(
                    lam, points, lam.size - 1
                )

    logger.debug("potentials: %d Φ terms, %d Ω terms", len(phi_terms), len(omega_terms))
    return PotentialPair(
        target,
        TruncatedSeries(variables, truncation, phi_terms),
        TruncatedSeries(variables, truncation, omega_terms),
        q_cap,
        t_cap,
    )


def _contraction(
    pair: PotentialPair, a: int, b: int, second: tuple[str, ...]
) -> TruncatedSeries:
    """Σ_{i,j} (∂_a∂_b∂_i Φ) g^{ij} (∂_j ∂_second Ω)."""
    total = None
    for i, j, inverse in pair.target.inverse_pairs():
        term = pair.derivative("phi", t(a), t(b), t(i)) * pair.derivative(
            "omega", t(j), *second
        )
        term = term.scaled(inverse)
        total = term if total is None else total + term
    return total


def pde_residual(pair: PotentialPair, relation: Relation) -> TruncatedSeries:
    """Left side minus right side of the chosen PDE."""
    d = pair.derivative
    if relation.kind == "M12":
        a, b = relation.slots
        return (
            _contraction(pair, a, b, (U,))
            + d("omega", t(a), t(b)) * d("omega", U, U)
            - d("omega", t(a), U) * d("omega", t(b), U)
        )
    a, b, c = relation.slots
    left = _contraction(pair, a, b, (t(c),)) + d("omega", t(a), t(b)) * d(
        "omega", t(c), U
    )
    right = _contraction(pair, a, c, (t(b),)) + d("omega", t(a), t(c)) * d(
        "omega", t(b), U
    )
    return left - right


def residual_coefficient(
    residual: TruncatedSeries,
    relation: Relation,
    degree: int,
    points: int,
    lam: MultiIndex,
) -> Fraction:
    """Coefficient of q^d u^{k'} t^λ, with k' = k − 1 for M12 and k for M03."""
    power = _u_power(relation, points)
    exponent = lam.entries + (power, degree)
    if not residual.truncation.admits(exponent):
        raise ValueError(f"exponent {exponent} lies above the residual caps")
    return residual.coefficient(exponent)


def instance_value(
    real_store: RealStore,
    complex_store: ComplexStore,
    relation: Relation,
    degree: int,
    points: int,
    lam: MultiIndex,
) -> Fraction:
    """relation_weight times LHS − RHS of the instance on the stored values."""
    instance = store_builder(real_store, complex_store).instance(
        relation, degree, points, lam
    )
    if instance is None:
        return Fraction(0)
    return relation_weight(relation, lam, points) * instance.constant


@dataclass(frozen=True)
class ResidualReport:
    relation: Relation
    passed: bool
    first_exponent: tuple[int, ...] | None = None
    value: Fraction | None = None
    nonzero_terms: int = 0


def describe_exponent(variables: tuple[str, ...], exponent: tuple[int, ...]) -> str:
    parts = [
        name if power == 1 else f"{name}^{power}"
        for name, power in zip(variables, exponent)
        if power
    ]
    return "*".join(parts) or "1"


def check_relation(pair: PotentialPair, relation: Relation) -> ResidualReport:
    residual = pde_residual(pair, relation)
    first = residual.lowest_nonzero()
    if first is None:
        return ResidualReport(relation, True)
    logger.warning(
        "%s residual nonzero at %s",
        relation,
        describe_exponent(residual.variables, first),
    )
    return ResidualReport(
        relation, False, first, residual.coefficient(first), len(residual)
    )


def verify_pde(pair: PotentialPair) -> list[ResidualReport]:
    """One report per canonical (a ≤ b) M12 and (b < c) M03 tuple."""
    return [
        check_relation(pair, relation) for relation in canonical_relations(pair.target)
    ]

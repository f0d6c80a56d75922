"""Open genus-0 invariants ⟨(h²)^a (h³)^b⟩_{d,k} of (ℙ³, τ₃) from the two real
WDVV relations.

Each relation, expanded at a coefficient (d, k, λ), is linear in the degree-d
invariants once every lower degree is known: products of two open invariants
split the degree as d₁ + d₂ with both parts positive, except for the
⟨1⟩_{0,1} = ⟨1, [pt]⟩ term. The invariants ⟨⟩_{d,2d} and ⟨pt⟩_{1,0} never get
a net coefficient in their own degree, so they are carried to the next degree,
where they multiply known degree-one numbers.
"""

from __future__ import annotations

import itertools
import logging
import math
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
from realwdvv.complex_gw import ComplexStore
from realwdvv.errors import (
    ConfigurationError,
    NonlinearTermError,
    NotSolvedError,
    UnderdeterminedSystemError,
)
from realwdvv.target import ProjectiveSpaceP3, TargetModel

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class RealKey:
    degree: int
    insertions: MultiIndex
    points: int

    def __str__(self) -> str:
        return f"<{self.insertions}>_{{{self.degree},{self.points}}}"


@dataclass(frozen=True)
class Normalized:
    """``multiplier`` times the invariant at ``key``; ``key`` is None for the
    degree-zero value ⟨1, [pt]⟩ alone."""

    key: RealKey | None
    multiplier: Fraction


def normalize(
    target: TargetModel,
    insertions: MultiIndex | Sequence[int],
    degree: int,
    points: int | None = None,
    *,
    apply_parity: bool = True,
) -> Normalized | None:
    """Reduce a raw insertion list to a canonical key; None is an exact zero.

    ``points`` defaults to the dimension formula; any other value is zero.
    """
    if not isinstance(insertions, MultiIndex):
        insertions = MultiIndex.from_insertions(target.size, insertions)

    if degree == 0:
        if insertions.size != 1 or points not in (None, 1):
            return None
        (index,) = insertions.expand()
        if target.half_degree(index) != 0:
            return None
        value = target.point_pairing(index)
        return Normalized(None, value) if value else None
    if degree < 0:
        return None

    multiplier = Fraction(1)
    entries = list(insertions)
    for index, count in enumerate(entries):
        if not count:
            continue
        if target.half_degree(index) == 0 or target.vanishing_slot(index):
            return None
        pairing = target.divisor_pairing(index, degree)
        if pairing is not None:
            multiplier *= pairing**count
            entries[index] = 0
    if not multiplier:
        return None

    reduced = MultiIndex(tuple(entries))
    expected = target.real_dimension(degree, reduced)
    if expected < 0 or (points is not None and points != expected):
        return None
    if apply_parity and target.real_parity_vanishes(degree, reduced):
        return None
    return Normalized(RealKey(degree, reduced, expected), multiplier)


def real_keys(target: TargetModel, degree: int) -> list[RealKey]:
    """Every canonical key of the given degree with k ≥ 0."""
    keys = []
    for excess in range(target.ell_omega(degree) // 2 + 1):
        for insertions in target.insertions_with_excess(excess):
            keys.append(
                RealKey(degree, insertions, target.real_dimension(degree, insertions))
            )
    return sorted(keys)


def seed_key(target: TargetModel) -> RealKey:
    """⟨⟩_{1,k}: degree-one curves through real points only."""
    empty = MultiIndex.zeros(target.size)
    return RealKey(1, empty, target.real_dimension(1, empty))


@dataclass(frozen=True)
class Relation:
    """M12(a, b) or M03(a, b, c), named by the (k, l) of the boundary they come from."""

    kind: str
    slots: tuple[int, ...]

    @classmethod
    def m12(cls, a: int, b: int) -> Relation:
        return cls("M12", (a, b))

    @classmethod
    def m03(cls, a: int, b: int, c: int) -> Relation:
        return cls("M03", (a, b, c))

    def __str__(self) -> str:
        return f"{self.kind}({','.join(map(str, self.slots))})"


def canonical_relations(target: TargetModel) -> list[Relation]:
    """M12 with a ≤ b and M03 with b < c; b = c makes M03 identically zero."""
    relations = [
        Relation.m12(a, b)
        for a, b in itertools.combinations_with_replacement(range(target.size), 2)
    ]
    relations += [
        Relation.m03(a, b, c)
        for a in range(target.size)
        for b, c in itertools.combinations(range(target.size), 2)
    ]
    return relations


def relation_points(
    target: TargetModel, relation: Relation, degree: int, lam: MultiIndex
) -> int | None:
    """The k at which the relation's dimension gate holds, if it is an integer."""
    extra = 1 if relation.kind == "M12" else 2
    twice = (
        target.ell_omega(degree)
        + 2 * (lam.size + extra)
        - 2 * sum(target.half_degree(slot) for slot in relation.slots)
        - 2 * lam.weight(target.half_degrees)
    )
    if twice % 2:
        return None
    return twice // 2


def relation_gate(
    target: TargetModel, relation: Relation, degree: int, points: int, lam: MultiIndex
) -> bool:
    """ℓ_ω(B)/2 − k + |λ| + 1 = |a| + |b| + ‖λ‖ for M12 (k ≥ 1), and the
    same with +2 and |c| added for M03 (k ≥ 0)."""
    minimum = 1 if relation.kind == "M12" else 0
    return (
        points >= minimum
        and relation_points(target, relation, degree, lam) == points
    )


@dataclass(frozen=True)
class LinearInstance:
    """One relation at one coefficient, as Σ c·x + constant = 0 in the open unknowns."""

    relation: Relation
    degree: int
    points: int
    insertions: MultiIndex
    equation: LinearEquation

    @property
    def coefficients(self) -> Mapping[RealKey, Fraction]:
        return self.equation.coefficients

    @property
    def constant(self) -> Fraction:
        return self.equation.constant

    def __str__(self) -> str:
        return (
            f"{self.relation} d={self.degree} k={self.points} lambda={self.insertions}"
        )


RealFactor = Callable[[int, MultiIndex, int], LinearForm]


class RelationBuilder:
    """Expands M12/M03 at (d, k, λ) against a complex store and a real factor lookup."""

    def __init__(
        self, target: TargetModel, complex_store: ComplexStore, factor: RealFactor
    ):
        self.target = target
        self.complex_store = complex_store
        self.factor = factor

    def _classical_sum(
        self,
        a: int,
        b: int,
        tail: tuple[int, ...],
        degree: int,
        points: int,
        lam: MultiIndex,
    ) -> LinearForm:
        """Σ 2^{|α|} C(λ,α) ⟨a,b,i,α⟩^X_{B'} g^{ij} ⟨j,tail,β⟩_{B₀,k}
        over B₀ + 𝔡(B') = B."""
        total = LinearForm()
        for complex_degree in itertools.count():
            remaining = degree - self.target.doubling(complex_degree)
            if remaining < 0:
                break
            for alpha, beta in lam.splittings():
                weight = 2**alpha.size * multi_binomial(lam, alpha)
                for i, j, inverse in self.target.inverse_pairs():
                    closed = self.complex_store.evaluate(
                        complex_degree, alpha.plus(a, b, i)
                    )
                    if not closed:
                        continue
                    real = self.factor(remaining, beta.plus(j, *tail), points)
                    if not real.is_zero:
                        total.accumulate(real, weight * inverse * closed)
        return total

    def _split_sum(
        self,
        head: tuple[int, ...],
        head_shift: int,
        tail: tuple[int, ...],
        tail_shift: int,
        degree: int,
        available: int,
        lam: MultiIndex,
    ) -> LinearForm:
        """Σ C(n,k₁) C(λ,α) ⟨head,α⟩_{B₁,k₁+s} ⟨tail,β⟩_{B₂,k₂+t} with k₁ + k₂ = n."""
        total = LinearForm()
        for first in range(degree + 1):
            second = degree - first
            for alpha, beta in lam.splittings():
                head_insertions = alpha.plus(*head)
                # k₁ is forced by the dimension formula of the first factor.
                k1 = self.target.real_dimension(first, head_insertions) - head_shift
                if k1 < 0 or k1 > available:
                    continue
                left = self.factor(first, head_insertions, k1 + head_shift)
                if left.is_zero:
                    continue
                right = self.factor(
                    second, beta.plus(*tail), available - k1 + tail_shift
                )
                if right.is_zero:
                    continue
                weight = math.comb(available, k1) * multi_binomial(lam, alpha)
                total.accumulate(left * right, Fraction(weight))
        return total

    def psi(
        self, a: int, b: int, c: int, degree: int, points: int, lam: MultiIndex
    ) -> LinearForm:
        """Ψ_{a,b;c}(λ) at (B, k)."""
        total = self._classical_sum(a, b, (c,), degree, points, lam)
        total.accumulate(self._split_sum((a, b), 0, (c,), 1, degree, points, lam))
        return total

    def m12_instance(
        self, a: int, b: int, degree: int, points: int, lam: MultiIndex
    ) -> LinearInstance | None:
        relation = Relation.m12(a, b)
        if not relation_gate(self.target, relation, degree, points, lam):
            return None
        n = points - 1
        form = self._classical_sum(a, b, (), degree, points, lam)
        form.accumulate(self._split_sum((a, b), 0, (), 2, degree, n, lam))
        form.accumulate(self._split_sum((a,), 1, (b,), 1, degree, n, lam), -1)
        return LinearInstance(
            relation, degree, points, lam, form.to_equation(f"{relation} d={degree}")
        )

    def m03_instance(
        self, a: int, b: int, c: int, degree: int, points: int, lam: MultiIndex
    ) -> LinearInstance | None:
        relation = Relation.m03(a, b, c)
        if not relation_gate(self.target, relation, degree, points, lam):
            return None
        form = self.psi(a, b, c, degree, points, lam)
        form.accumulate(self.psi(a, c, b, degree, points, lam), -1)
        return LinearInstance(
            relation, degree, points, lam, form.to_equation(f"{relation} d={degree}")
        )

    def instance(
        self, relation: Relation, degree: int, points: int, lam: MultiIndex
    ) -> LinearInstance | None:
        if relation.kind == "M12":
            return self.m12_instance(*relation.slots, degree, points, lam)
        return self.m03_instance(*relation.slots, degree, points, lam)

    def gated_parameters(
        self, relation: Relation, degree: int
    ) -> Iterator[tuple[int, MultiIndex]]:
        """(k, λ) with λ on the insertion slots and the gate satisfied."""
        extra = 1 if relation.kind == "M12" else 2
        minimum = 1 if relation.kind == "M12" else 0
        ceiling = (
            self.target.ell_omega(degree) // 2
            + extra
            - sum(self.target.half_degree(slot) for slot in relation.slots)
            - minimum
        )
        for excess in range(ceiling + 1):
            for lam in self.target.insertions_with_excess(excess):
                points = relation_points(self.target, relation, degree, lam)
                if points is not None and points >= minimum:
                    yield points, lam

    def instances(self, degree: int) -> Iterator[LinearInstance]:
        """Every gated instance at this degree; bilinear ones are skipped."""
        skipped = 0
        for relation in canonical_relations(self.target):
            for points, lam in self.gated_parameters(relation, degree):
                try:
                    found = self.instance(relation, degree, points, lam)
                except NonlinearTermError as e:
                    skipped += 1
                    logger.debug(
                        "skipping %s k=%d lambda=%s: %s", relation, points, lam, e
                    )
                    continue
                if found is not None:
                    yield found
        if skipped:
            logger.info("degree %d: skipped %d bilinear instances", degree, skipped)


class _RealResolver:
    """Factor lookup: ``known`` values are constants, keys of ``open_degree``
    and ``carried`` keys are unknowns, anything else is an error."""

    def __init__(
        self,
        target: TargetModel,
        known: Mapping[RealKey, Fraction],
        solved_up_to: int,
        open_degree: int | None = None,
        carried: frozenset[RealKey] = frozenset(),
    ):
        self.target = target
        self.known = known
        self.solved_up_to = solved_up_to
        self.open_degree = open_degree
        self.carried = carried
        self._cache: dict[tuple[int, MultiIndex, int], LinearForm] = {}

    def __call__(self, degree: int, insertions: MultiIndex, points: int) -> LinearForm:
        key = (degree, insertions, points)
        cached = self._cache.get(key)
        if cached is None:
            cached = self._resolve(degree, insertions, points)
            self._cache[key] = cached
        return cached

    def _resolve(self, degree: int, insertions: MultiIndex, points: int) -> LinearForm:
        normalized = normalize(
            self.target, insertions, degree, points, apply_parity=False
        )
        if normalized is None:
            return LinearForm()
        if normalized.key is None:
            return LinearForm.of_constant(normalized.multiplier)
        key = normalized.key
        if key in self.known:
            return LinearForm.of_constant(normalized.multiplier * self.known[key])
        if key in self.carried or key.degree == self.open_degree:
            return LinearForm.of_unknown(key, normalized.multiplier)
        raise NotSolvedError(key.degree, self.solved_up_to)


class RealStore:
    """Solved open invariants for one OSpin seed; parity-vanishing keys hold 0."""

    def __init__(
        self,
        target: TargetModel,
        values: Mapping[RealKey, Fraction],
        solved_up_to: int,
        seed: int,
    ):
        self.target = target
        self.solved_up_to = solved_up_to
        self.seed = seed
        self._values = dict(sorted(values.items()))

    def __len__(self) -> int:
        return len(self._values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RealStore):
            return NotImplemented
        return (
            self.target.name == other.target.name
            and self.solved_up_to == other.solved_up_to
            and self.seed == other.seed
            and self._values == other._values
        )

    def items(self) -> Iterator[tuple[RealKey, Fraction]]:
        return iter(self._values.items())

    def value(self, key: RealKey) -> Fraction:
        if key.degree > self.solved_up_to:
            raise NotSolvedError(key.degree, self.solved_up_to)
        return self._values.get(key, Fraction(0))

    def lookup(
        self,
        degree: int,
        insertions: MultiIndex | Sequence[int],
        points: int | None = None,
    ) -> Fraction:
        """⟨μ^λ⟩_{d,k} for a raw insertion list."""
        if degree > self.solved_up_to:
            raise NotSolvedError(degree, self.solved_up_to)
        normalized = normalize(self.target, insertions, degree, points)
        if normalized is None:
            return Fraction(0)
        if normalized.key is None:
            return normalized.multiplier
        return normalized.multiplier * self.value(normalized.key)

    def invariant(self, degree: int, lines: int, points: int) -> Fraction:
        """⟨ℓ̃^a pt^b⟩_d with k = 2d − a − 2b real points; 0 when k < 0."""
        target = self.target
        if not isinstance(target, ProjectiveSpaceP3):
            raise ConfigurationError(f"target {target.name} has no line/point reading")
        return self.lookup(degree, target.insertions(lines, points))

    def parity_violations(self) -> list[RealKey]:
        return [
            key
            for key, value in self._values.items()
            if value and self.target.real_parity_vanishes(key.degree, key.insertions)
        ]

    def truncated(self, max_degree: int) -> RealStore:
        top = min(max_degree, self.solved_up_to)
        return RealStore(
            self.target,
            {key: value for key, value in self._values.items() if key.degree <= top},
            top,
            self.seed,
        )

    def flipped(self) -> RealStore:
        """The store for the opposite seed: v ↦ (−1)^{k+1} v."""
        return RealStore(
            self.target,
            {
                key: value if key.points % 2 else -value
                for key, value in self._values.items()
            },
            self.solved_up_to,
            -self.seed,
        )


def solve_real(
    target: TargetModel,
    complex_store: ComplexStore,
    max_degree: int,
    seed: int = 1,
) -> RealStore:
    """Solve degree tiers 1..max_degree+1; the extra tier only pins the
    carried keys of the last requested degree."""
    if seed not in (1, -1):
        raise ConfigurationError(f"seed must be +1 or -1, got {seed!r}")
    if max_degree < 1:
        raise ValueError("max_degree must be at least 1")

    known: dict[RealKey, Fraction] = {seed_key(target): Fraction(seed)}
    carried: frozenset[RealKey] = frozenset()
    carried_relations: list[LinearEquation] = []

    for degree in range(1, max_degree + 2):
        fresh = [key for key in real_keys(target, degree) if key not in known]
        resolver = _RealResolver(target, known, degree - 1, degree, carried)
        builder = RelationBuilder(target, complex_store, resolver)

        equations = list(carried_relations)
        equations += [
            LinearEquation({key: Fraction(1)}, label=f"parity {key}")
            for key in fresh
            if target.real_parity_vanishes(key.degree, key.insertions)
        ]
        equations += [
            instance.equation
            for instance in builder.instances(degree)
            if not instance.equation.is_trivial
        ]
        unknowns = sorted(carried) + fresh
        solution = solve_linear(
            RationalLinearSystem.from_equations(equations, unknowns),
            context=f"real degree {degree}",
        )

        stale = sorted(key for key in carried if key not in solution.values)
        if stale:
            raise UnderdeterminedSystemError(degree - 1, stale)
        known.update(solution.values)
        carried = frozenset(solution.undetermined)
        carried_relations = solution.relation_equations()
        logger.info(
            "real degree %d: %d unknowns, %d equations, %d carried forward",
            degree,
            len(unknowns),
            len(equations),
            len(carried),
        )

    values = {key: value for key, value in known.items() if key.degree <= max_degree}
    return RealStore(target, values, max_degree, seed)


def store_builder(store: RealStore, complex_store: ComplexStore) -> RelationBuilder:
    """A builder whose instances are fully evaluated on solved stores."""
    resolver = _RealResolver(store.target, dict(store.items()), store.solved_up_to)
    return RelationBuilder(store.target, complex_store, resolver)


def real_residuals(
    store: RealStore, complex_store: ComplexStore, max_degree: int | None = None
) -> list[LinearInstance]:
    """Gated instances whose value on the stored invariants is not zero."""
    top = store.solved_up_to if max_degree is None else max_degree
    builder = store_builder(store, complex_store)
    failures = []
    for degree in range(1, top + 1):
        for instance in builder.instances(degree):
            if instance.constant:
                failures.append(instance)
    return failures

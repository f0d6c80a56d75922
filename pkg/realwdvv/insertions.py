"""Line classes ℓ₋, ℓ₊ in H₂(ℙ³ − ℝℙ³), their average ℓ̃ and the sphere s.

ℓ₊ = ℓ₋ + s and an s-insertion trades for one more real point at twice the
value, so every ℓ₋^p ℓ₊^q invariant expands over the averaged ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from realwdvv.complex_gw import ComplexStore
from realwdvv.errors import EngineError
from realwdvv.real_wdvv import RealStore


def expansion_coefficient(m: int, p: int, q: int) -> int:
    """c_m(p, q) = Σ_{i+j=m} (−1)^i C(p,i) C(q,j)."""
    return sum((-1) ** i * math.comb(p, i) * math.comb(q, m - i) for i in range(m + 1))


def sphere_trade(
    store: RealStore, degree: int, lines: int, points: int, spheres: int = 1
) -> Fraction:
    """⟨ℓ̃^a s^m pt^b⟩_{d,k} = 2^m ⟨ℓ̃^a pt^b⟩_{d,k+m}."""
    target = store.target
    insertions = target.insertions(lines, points)
    # s is a relative degree-4 class, counted like a line in the dimension formula.
    with_spheres = target.real_dimension(
        degree, target.insertions(lines + spheres, points)
    )
    without = with_spheres + spheres
    if without != target.real_dimension(degree, insertions):
        raise EngineError("sphere trade broke the dimension count")
    if with_spheres < 0:
        return Fraction(0)
    return 2**spheres * store.lookup(degree, insertions, without)


def mixed_line_invariant(
    store: RealStore, degree: int, minus: int, plus: int, points: int
) -> Fraction:
    """⟨ℓ₋^p ℓ₊^q pt^b⟩_d via ℓ_± = ℓ̃ ± s/2."""
    total = Fraction(0)
    for m in range(minus + plus + 1):
        c = expansion_coefficient(m, minus, plus)
        if c:
            traded = sphere_trade(store, degree, minus + plus - m, points, spheres=m)
            total += c * traded / 2**m
    return total


def lower_bound(store: RealStore, degree: int, lines: int, points: int) -> Fraction:
    """min over i of |⟨ℓ₋^{a−i} ℓ₊^i pt^b⟩_d|."""
    return min(
        abs(mixed_line_invariant(store, degree, lines - i, i, points))
        for i in range(lines + 1)
    )


@dataclass(frozen=True)
class TableRow:
    """One (d, a, b) row: a conjugate line pairs, b conjugate point pairs."""

    degree: int
    lines: int
    points: int
    averaged: int
    expansion: tuple[int, ...]
    minimum: int
    complex_count: int

    @property
    def real_points(self) -> int:
        return 2 * self.degree - self.lines - 2 * self.points


def _integral(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise EngineError(f"non-integral {what}: {value}")
    return value.numerator


def emit_table(
    store: RealStore, complex_store: ComplexStore, max_degree: int
) -> list[TableRow]:
    rows = []
    for degree in range(1, max_degree + 1):
        for lines in range(2 * degree + 1):
            for points in range((2 * degree - lines) // 2 + 1):
                where = f"entry at d={degree} a={lines} b={points}"
                expansion = tuple(
                    _integral(
                        mixed_line_invariant(store, degree, lines - i, i, points), where
                    )
                    for i in range(lines + 1)
                )
                k = 2 * degree - lines - 2 * points
                rows.append(
                    TableRow(
                        degree=degree,
                        lines=lines,
                        points=points,
                        averaged=_integral(
                            store.invariant(degree, lines, points), where
                        ),
                        expansion=expansion,
                        minimum=min(abs(value) for value in expansion),
                        complex_count=_integral(
                            complex_store.invariant(degree, 2 * lines, 2 * points + k),
                            where,
                        ),
                    )
                )
    return rows

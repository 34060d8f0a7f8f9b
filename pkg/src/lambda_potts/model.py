"""Parameters, the lambda pair table, ball energies and both Hamiltonians.

Spins are the labels 1, 2, 3.  Couplings may be ints, floats or
``fractions.Fraction``; every function here uses plain arithmetic, so exact
inputs give exact outputs.
"""

from __future__ import annotations

import itertools
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real

from .tree_group import (
    TreeMode,
    TreeShape,
    Vertex,
    edges,
    levels,
    next_nearest_pairs,
)

SPINS = (1, 2, 3)

Configuration = Mapping[Vertex, int]


@dataclass(frozen=True)
class ModelParams:
    """Couplings of the lambda model with competing Potts interactions.

    a_bar is lambda(i, j) for |i-j| = 2, b_frak for |i-j| = 1, b_cal for
    i = j; J multiplies the next-nearest-neighbour Kronecker delta.  beta is
    only used by the Gibbs-measure code.
    """

    a_bar: Real = 0
    b_frak: Real = 0
    b_cal: Real = 0
    J: Real = 0
    beta: Real = 1

    def couplings(self) -> tuple[Real, Real, Real, Real]:
        return (self.a_bar, self.b_frak, self.b_cal, self.J)

    def is_exact(self) -> bool:
        return all(isinstance(v, (int, Fraction)) for v in self.couplings())


def check_spin(s: int) -> int:
    if s not in SPINS:
        raise ValueError(f"spin must be 1, 2 or 3, got {s!r}")
    return s


def flip_spin(s: int) -> int:
    return 4 - s


def dot(i: int, j: int) -> Fraction:
    """Inner product of the planar unit vectors representing spins i and j."""
    return Fraction(1) if i == j else Fraction(-1, 2)


def lam(i: int, j: int, p: ModelParams) -> Real:
    gap = abs(check_spin(i) - check_spin(j))
    if gap == 2:
        return p.a_bar
    if gap == 1:
        return p.b_frak
    return p.b_cal


@dataclass(frozen=True)
class BallConfig:
    """Spins on a unit ball: centre, the parent x_down, and the k children."""

    center: int
    parent: int
    children: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        for s in (self.center, self.parent, *self.children):
            check_spin(s)

    @property
    def neighbours(self) -> tuple[int, ...]:
        return (self.parent, *self.children)

    def flipped(self) -> "BallConfig":
        return BallConfig(
            flip_spin(self.center),
            flip_spin(self.parent),
            tuple(flip_spin(s) for s in self.children),
        )


def all_balls(k: int = 2) -> list[BallConfig]:
    return [
        BallConfig(c, p, kids)
        for c in SPINS
        for p in SPINS
        for kids in itertools.product(SPINS, repeat=k)
    ]


def ball_energy(b: BallConfig, p: ModelParams) -> Real:
    edge_sum = sum(lam(b.center, s, p) for s in b.neighbours)
    equal_pairs = sum(1 for s, t in itertools.combinations(b.neighbours, 2) if s == t)
    half = Fraction(1, 2) if p.is_exact() else 0.5
    # each edge is shared by two balls, each next-nearest pair lies in exactly one
    return half * edge_sum + p.J * equal_pairs


def energy_table(p: ModelParams) -> tuple[Real, ...]:
    """U_1, ..., U_12."""
    a, B, C, J = p.a_bar, p.b_frak, p.b_cal, p.J
    half = Fraction(1, 2) if p.is_exact() else 0.5
    return (
        3 * C * half + 3 * J,
        (2 * C + B) * half + J,
        (2 * C + a) * half + J,
        (2 * B + a) * half + J,
        (2 * a + C) * half + J,
        3 * a * half + 3 * J,
        3 * B * half + J,
        (2 * B + C) * half,
        (2 * a + B) * half + J,
        (a + B + C) * half,
        3 * B * half + 3 * J,
        (2 * B + C) * half + J,
    )


def ball_class(b: BallConfig) -> int:
    """Symbolic class m (1..12) of a k=2 ball: the U_m formula its energy follows.

    Determined from the multiset of centre-neighbour gaps and the number of
    equal neighbour pairs, so it does not depend on parameter values.
    """
    if len(b.children) != 2:
        raise ValueError("symbolic classes are defined for k=2 balls")
    gaps = tuple(sorted(abs(b.center - s) for s in b.neighbours))
    equal_pairs = sum(1 for s, t in itertools.combinations(b.neighbours, 2) if s == t)
    return _CLASS_BY_SIGNATURE[(gaps, equal_pairs)]


# (sorted gaps, equal neighbour pairs) -> m, read off the U_m formulas
_CLASS_BY_SIGNATURE = {
    ((0, 0, 0), 3): 1,
    ((0, 0, 1), 1): 2,
    ((0, 0, 2), 1): 3,
    ((1, 1, 2), 1): 4,
    ((0, 2, 2), 1): 5,
    ((2, 2, 2), 3): 6,
    ((1, 1, 1), 1): 7,
    ((0, 1, 1), 0): 8,
    ((1, 2, 2), 1): 9,
    ((0, 1, 2), 0): 10,
    ((1, 1, 1), 3): 11,
    ((0, 1, 1), 1): 12,
}


def _require_total(config: Configuration, vertices: Sequence[Vertex]) -> None:
    missing = [v for v in vertices if v not in config]
    if missing:
        raise ValueError(f"configuration undefined on {len(missing)} vertices, e.g. {missing[0]}")


def hamiltonian_full(
    config: Configuration, p: ModelParams, n: int, k: int = 2
) -> Real:
    """H on V_n of the full tree: + sum of lambda over edges + J * equal
    next-nearest pairs (every unordered distance-two pair)."""
    shape = TreeShape(k, TreeMode.FULL)
    _, ball = levels(shape, n)
    _require_total(config, ball)
    total = sum(lam(config[x], config[y], p) for x, y in edges(shape, n))
    same = sum(1 for x, z in next_nearest_pairs(shape, n, "all") if config[x] == config[z])
    return total + p.J * same


def hamiltonian_semi(
    config: Configuration, p: ModelParams, n: int, k: int = 2
) -> Real:
    """H on V_n of the semi-infinite tree with the opposite sign convention:
    -J * equal (x, z) pairs with z a grandchild of x, minus the lambda sum."""
    shape = TreeShape(k, TreeMode.SEMI)
    _, ball = levels(shape, n)
    _require_total(config, ball)
    total = sum(lam(config[x], config[y], p) for x, y in edges(shape, n))
    same = sum(
        1 for x, z in next_nearest_pairs(shape, n, "descendant") if config[x] == config[z]
    )
    return -p.J * same - total

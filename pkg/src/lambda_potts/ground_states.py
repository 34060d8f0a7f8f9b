"""Ground states of the lambda model on the full Cayley tree of order two.

A configuration is a ground state when every unit ball has the minimal ball
energy.  Two notions of "allowed ball" are supported:

* ``classes=None``: the ball energy equals min(U_1..U_12) (the definition).
* ``classes={m, ...}``: the ball's symbolic class (which U_m formula its
  energy follows, see :func:`~lambda_potts.model.ball_class`) is one of the
  given ids.  Away from region boundaries the two coincide; on boundaries
  such as A_4 and A_12, where several U_m tie, the symbolic reading is the
  one used when a statement talks about "balls of class C_m".
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .model import (
    SPINS,
    BallConfig,
    Configuration,
    ModelParams,
    all_balls,
    ball_class,
    ball_energy,
    energy_table,
    flip_spin,
)
from .tree_group import (
    Subgroup,
    TreeMode,
    TreeShape,
    Vertex,
    coset_of,
    levels,
    successors,
)

FULL2 = TreeShape(2, TreeMode.FULL)
REGIONS = tuple(range(1, 13))
TIE_TOL = 1e-12


def _same(x, y, exact: bool, tol: float = TIE_TOL) -> bool:
    if exact:
        return x == y
    return abs(x - y) <= tol * max(1.0, abs(x), abs(y))


def classify_region(p: ModelParams, tol: float = TIE_TOL) -> frozenset[int]:
    """All m with U_m equal to the minimum of the energy table."""
    table = energy_table(p)
    lo = min(table)
    exact = p.is_exact()
    return frozenset(m for m, u in zip(REGIONS, table) if _same(u, lo, exact, tol))


def region_gap(p: ModelParams) -> float:
    """Distance from the minimum to the second-smallest distinct U value."""
    table = sorted(energy_table(p))
    rest = [u for u in table if u != table[0]]
    return float(rest[0] - table[0]) if rest else 0.0


def region_by_inequalities(p: ModelParams, m: int) -> bool:
    """The printed inequality description of A_m, evaluated literally.

    These descriptions are a cross-check only; :func:`classify_region` is
    authoritative.  Several of them disagree with the argmin (see
    :func:`inequality_discrepancies`).
    """
    a, B, C, J = p.couplings()
    if m == 1:
        return a >= C and B >= C and J <= min((a - C) / 4, (B - C) / 4, (a + B - 2 * C) / 6)
    if m == 2:
        return a >= B >= C and (B - C) / 4 <= J <= (B - C) / 2
    if m == 3:
        return B >= a >= C and (a - C) / 4 <= J <= (B - C) / 2
    if m == 4:
        return a == B and C >= a and 0 <= J <= (C - a) / 2
    if m == 5:
        return B >= C >= a and (C - a) / 4 <= J <= (B - a) / 2
    if m == 6:
        return C >= a and B >= a and J <= min((C - a) / 4, (B - a) / 4, (B + C - 2 * a) / 6)
    if m == 7:
        return a >= B and C >= B and 0 <= J <= (C - B) / 2
    if m == 8:
        return a >= B and 0 <= J and abs(B - C) >= 2 * J and C - a <= 2 * J
    if m == 9:
        return C >= B >= a and (B - a) / 4 <= J <= (C - a) / 2
    if m == 10:
        return 0 <= B - a <= 2 * J and abs(a - C) <= 2 * J and abs(B - C) <= 2 * J
    if m == 11:
        return C >= B and a >= B and J <= 0
    if m == 12:
        return C == B and a >= B and J == 0
    raise ValueError(f"region id must be 1..12, got {m}")


def inequality_discrepancies(samples: Iterable[ModelParams]) -> dict[int, list[ModelParams]]:
    """Per region, the samples where the printed set and the argmin disagree."""
    out: dict[int, list[ModelParams]] = {m: [] for m in REGIONS}
    for p in samples:
        argmin = classify_region(p)
        for m in REGIONS:
            if region_by_inequalities(p, m) != (m in argmin):
                out[m].append(p)
    return out


def minimal_ball_classes(p: ModelParams, k: int = 2) -> list[BallConfig]:
    """Brute force: every ball configuration whose energy is minimal."""
    balls = all_balls(k)
    energies = [ball_energy(b, p) for b in balls]
    lo = min(energies)
    exact = p.is_exact()
    return [b for b, e in zip(balls, energies) if _same(e, lo, exact)]


def _allowed_balls(p: ModelParams | None, classes: Iterable[int] | None) -> frozenset:
    """Allowed (centre, neighbour, neighbour, neighbour) tuples for k=2."""
    if classes is not None:
        wanted = frozenset(classes)
        balls = [b for b in all_balls(2) if ball_class(b) in wanted]
    else:
        if p is None:
            raise ValueError("either params or classes is required")
        balls = minimal_ball_classes(p, 2)
    return frozenset((b.center, b.parent, *b.children) for b in balls)


@dataclass(frozen=True)
class PeriodicSpec:
    """Spin assigned to each coset of ``subgroup`` (index i -> assignment[i])."""

    subgroup: Subgroup
    assignment: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(self.assignment))
        if len(self.assignment) != self.subgroup.index:
            raise ValueError(
                f"{self.subgroup.name} has {self.subgroup.index} cosets, "
                f"got {len(self.assignment)} spins"
            )
        for s in self.assignment:
            if s not in SPINS:
                raise ValueError(f"bad spin {s!r}")


def build_periodic(spec: PeriodicSpec, shape: TreeShape, n: int) -> dict[Vertex, int]:
    spec.subgroup.validate(shape.k)
    _, ball = levels(shape, n)
    return {x: spec.assignment[coset_of(x, spec.subgroup)] for x in ball}


def flip_config(config: Mapping[Vertex, int]) -> dict[Vertex, int]:
    return {x: flip_spin(s) for x, s in config.items()}


def complete_balls(
    config: Mapping[Vertex, int], n: int, shape: TreeShape = FULL2
) -> Iterator[tuple[Vertex, BallConfig]]:
    """Unit balls lying inside V_n, i.e. centred in V_{n-1} (root included).

    For the root the first neighbour a_1 plays the role of the parent; the
    ball energy is symmetric in the neighbours, so nothing depends on it.
    """
    _, inner = levels(shape, n - 1)
    for x in inner:
        kids = [config[y] for y in successors(x, shape)]
        if x:
            yield x, BallConfig(config[x], config[x[:-1]], tuple(kids))
        else:
            yield x, BallConfig(config[x], kids[0], tuple(kids[1:]))


def verify_ground_state(
    config: Configuration,
    p: ModelParams | None,
    n: int,
    classes: Iterable[int] | None = None,
) -> bool:
    """True iff every complete unit ball in V_n of the full tree is allowed."""
    if n < 2:
        raise ValueError("depth must be at least 2 to contain a ball with a parent")
    allowed = _allowed_balls(p, classes)
    return all(
        (b.center, b.parent, *b.children) in allowed for _, b in complete_balls(config, n)
    )


@dataclass
class GroundStateSearch:
    """Outcome of the exhaustive search at a finite depth."""

    depth: int
    found: bool
    count: int
    witness: dict[Vertex, int] | None = field(default=None, repr=False)

    def describe(self) -> str:
        if not self.found:
            return f"no ground state up to depth {self.depth}"
        return f"{self.count} ground-state configurations on V_{self.depth}"


def _search_tables(allowed: frozenset):
    by_center_parent: dict[tuple[int, int], list[tuple[int, int]]] = {}
    root_options: dict[int, list[tuple[int, int, int]]] = {}
    for c, par, x, y in allowed:
        by_center_parent.setdefault((c, par), []).append((x, y))
    # ball energy and class are symmetric in the three neighbours
    for c in SPINS:
        root_options[c] = [
            nb for nb in itertools.product(SPINS, repeat=3) if (c, *nb) in allowed
        ]
    return by_center_parent, root_options


def ground_state_exists(
    p: ModelParams | None,
    n: int = 3,
    classes: Iterable[int] | None = None,
) -> GroundStateSearch:
    """Exhaustive search over configurations on V_n of the full order-2 tree.

    Dynamic programming over (remaining depth, parent spin, own spin): given
    those, the subtree below a vertex is independent of the rest, so the
    search is exact and also counts every configuration whose complete
    balls are all allowed.  A negative answer certifies absence up to depth
    n only.
    """
    if n < 2:
        raise ValueError("depth must be at least 2")
    allowed = _allowed_balls(p, classes)
    kids_of, root_options = _search_tables(allowed)

    @lru_cache(maxsize=None)
    def count(rem: int, par: int, s: int) -> int:
        if rem == 0:
            return 1
        total = 0
        for kids in kids_of.get((s, par), ()):
            prod = 1
            for c in kids:
                prod *= count(rem - 1, s, c)
                if not prod:
                    break
            total += prod
        return total

    total = 0
    for s in SPINS:
        for nb in root_options[s]:
            prod = 1
            for c in nb:
                prod *= count(n - 1, s, c)
            total += prod
    if not total:
        return GroundStateSearch(n, False, 0)

    witness: dict[Vertex, int] = {}

    def fill(x: Vertex, par: int, s: int, rem: int) -> None:
        witness[x] = s
        if rem == 0:
            return
        for kids in kids_of[(s, par)]:
            if all(count(rem - 1, s, c) for c in kids):
                for y, c in zip(successors(x, FULL2), kids):
                    fill(y, s, c, rem - 1)
                return
        raise AssertionError("count table inconsistent")

    # prefer a constant witness when one exists, it is the easiest to read
    candidates = sorted(
        ((s, nb) for s in SPINS for nb in root_options[s]),
        key=lambda t: (len(set((t[0], *t[1]))), t),
    )
    for s, nb in candidates:
        if all(count(n - 1, s, c) for c in nb):
            witness[()] = s
            for y, c in zip(successors((), FULL2), nb):
                fill(y, s, c, n - 1)
            break
    return GroundStateSearch(n, True, total, witness)


def periodic_ground_states(
    p: ModelParams | None,
    H: Subgroup,
    n: int = 3,
    classes: Iterable[int] | None = None,
) -> list[PeriodicSpec]:
    """Every spin assignment to the cosets of H that yields a ground state on V_n."""
    if n < 2:
        raise ValueError("depth must be at least 2")
    classes = None if classes is None else tuple(classes)
    found = []
    for assignment in itertools.product(SPINS, repeat=H.index):
        spec = PeriodicSpec(H, assignment)
        if verify_ground_state(build_periodic(spec, FULL2, n), p, n, classes):
            found.append(spec)
    return found


def count_periodic_ground_states(
    p: ModelParams | None,
    H: Subgroup,
    n: int = 3,
    classes: Iterable[int] | None = None,
) -> int:
    return len(periodic_ground_states(p, H, n, classes))


def sample_region(
    m: int,
    rng: random.Random | int | None = None,
    margin: float = 1e-6,
    box: int = 3,
    max_tries: int = 200_000,
) -> ModelParams:
    """Rejection-sample exact parameters (step 1/100 in [-box, box]^4) with
    argmin {m} and a strict margin over every other U.

    A_4 and A_12 have empty interiors (A_4 forces a_bar = b_frak, which ties
    U_4 with U_7 and U_9; A_12 forces b_cal = b_frak and J = 0); for them a
    point of the printed boundary set is returned instead, see
    :func:`sample_boundary`.
    """
    if m not in REGIONS:
        raise ValueError(f"region id must be 1..12, got {m}")
    rng = rng if isinstance(rng, random.Random) else random.Random(rng)
    if m in (4, 12):
        return sample_boundary(m, rng)
    lim = 100 * box
    for _ in range(max_tries):
        a, B, C, J = (Fraction(rng.randint(-lim, lim), 100) for _ in range(4))
        p = ModelParams(a, B, C, J)
        table = energy_table(p)
        lo = table[m - 1]
        if all(u - lo >= margin for i, u in enumerate(table) if i != m - 1):
            return p
    raise RuntimeError(f"no interior point of A_{m} found in {max_tries} draws")


def sample_boundary(m: int, rng: random.Random | int | None = None) -> ModelParams:
    """Exact point of A_4 or A_12 built from the equalities defining them."""
    rng = rng if isinstance(rng, random.Random) else random.Random(rng)
    x = Fraction(rng.randint(-200, 200), 100)
    gap = Fraction(rng.randint(10, 200), 100)
    if m == 4:
        J = gap * Fraction(rng.randint(1, 99), 200)  # strictly inside (0, gap/2)
        p = ModelParams(x, x, x + gap, J)
    elif m == 12:
        p = ModelParams(x + gap, x, x, Fraction(0))
    else:
        raise ValueError("only A_4 and A_12 lack interior points")
    assert m in classify_region(p) and region_by_inequalities(p, m)
    return p


def witness_records(config: Mapping[Vertex, int]) -> list[tuple[str, int]]:
    """Vertex words as text ('e', '1', '1-2', ...) paired with spins, BFS order."""
    ordered = sorted(config, key=lambda v: (len(v), v))
    return [("-".join(map(str, v)) if v else "e", config[v]) for v in ordered]

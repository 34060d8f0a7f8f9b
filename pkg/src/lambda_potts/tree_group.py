"""Vertices of the Cayley tree as reduced words of the group G_k.

G_k is the free product of k+1 cyclic groups of order two with generators
a_1, ..., a_{k+1}.  A vertex is stored as a tuple of generator indices with
no two equal letters adjacent; the empty tuple is the identity / root.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import Enum

Vertex = tuple[int, ...]

IDENTITY: Vertex = ()


class TreeMode(str, Enum):
    FULL = "full"
    SEMI = "semi-infinite"


@dataclass(frozen=True)
class TreeShape:
    """Branching order ``k`` plus whether the root has k+1 or k forward neighbours.

    In semi-infinite mode the root's children are a_1 .. a_k (the branch
    through a_{k+1} is cut off); every other vertex has k children in both
    modes.
    """

    k: int = 2
    mode: TreeMode = TreeMode.FULL

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"branching order must be >= 1, got {self.k}")
        object.__setattr__(self, "mode", TreeMode(self.mode))

    @property
    def n_generators(self) -> int:
        return self.k + 1

    def root_degree(self) -> int:
        return self.k + 1 if self.mode is TreeMode.FULL else self.k


def reduce(word: Iterable[int], k: int = 2) -> Vertex:
    """Cancel adjacent equal letters (a_i a_i = e) until none remain."""
    out: list[int] = []
    for letter in word:
        if not 1 <= letter <= k + 1:
            raise ValueError(f"generator index {letter} out of range 1..{k + 1}")
        if out and out[-1] == letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def multiply(x: Sequence[int], y: Sequence[int], k: int = 2) -> Vertex:
    return reduce((*x, *y), k)


def is_vertex(x: Sequence[int], shape: TreeShape) -> bool:
    if any(not 1 <= a <= shape.k + 1 for a in x):
        return False
    if any(a == b for a, b in zip(x, x[1:])):
        return False
    if shape.mode is TreeMode.SEMI and x and x[0] == shape.k + 1:
        return False
    return True


def parent(x: Vertex) -> Vertex:
    if not x:
        raise ValueError("the root has no parent")
    return x[:-1]


def successors(x: Vertex, shape: TreeShape) -> list[Vertex]:
    """Forward neighbours S(x), in increasing generator order."""
    if not x:
        top = shape.k + 1 if shape.mode is TreeMode.FULL else shape.k
        return [(j,) for j in range(1, top + 1)]
    last = x[-1]
    return [x + (j,) for j in range(1, shape.k + 2) if j != last]


def neighbors(x: Vertex, shape: TreeShape) -> list[Vertex]:
    """S_1(x): parent first (when it exists), then successors."""
    if not x:
        return successors(x, shape)
    return [parent(x)] + successors(x, shape)


def levels(shape: TreeShape, n: int) -> tuple[list[Vertex], list[Vertex]]:
    """Return (W_n, V_n); V_n is listed level by level (BFS order)."""
    if n < 0:
        raise ValueError("depth must be non-negative")
    sphere = [IDENTITY]
    ball = [IDENTITY]
    for _ in range(n):
        sphere = [y for x in sphere for y in successors(x, shape)]
        ball.extend(sphere)
    return sphere, ball


def sphere_size(shape: TreeShape, n: int) -> int:
    if n == 0:
        return 1
    return shape.root_degree() * shape.k ** (n - 1)


def next_nearest_pairs(
    shape: TreeShape, n: int, mode: str = "all"
) -> list[tuple[Vertex, Vertex]]:
    """Vertex pairs at tree distance two inside V_n.

    ``mode="all"`` gives every unordered pair once (siblings and
    grandparent/grandchild).  ``mode="descendant"`` gives ordered pairs
    (x, z) with z in S(S(x)) only.
    """
    if mode not in ("all", "descendant"):
        raise ValueError(f"unknown mode {mode!r}")
    _, ball = levels(shape, n)
    depth_ok = lambda v: len(v) <= n  # noqa: E731
    pairs: list[tuple[Vertex, Vertex]] = []
    for x in ball:
        for y in successors(x, shape):
            if not depth_ok(y):
                continue
            for z in successors(y, shape):
                if depth_ok(z):
                    pairs.append((x, z))
        if mode == "all":
            kids = [y for y in successors(x, shape) if depth_ok(y)]
            for i, y in enumerate(kids):
                for z in kids[i + 1 :]:
                    pairs.append((y, z))
    return pairs


def edges(shape: TreeShape, n: int) -> list[tuple[Vertex, Vertex]]:
    """Edges of L_n as (parent, child) pairs."""
    _, ball = levels(shape, n)
    return [(parent(v), v) for v in ball if v]


def letter_count(x: Sequence[int], j: int) -> int:
    return sum(1 for a in x if a == j)


class SubgroupKind(str, Enum):
    WHOLE = "whole"
    LETTER_PARITY = "letter-parity"
    EVEN_LENGTH = "even-length"
    LETTER_PAIR_PARITY = "letter-pair-parity"
    LENGTH_AND_LETTER_PARITY = "length-and-letter-parity"


@dataclass(frozen=True)
class Subgroup:
    """A finite-index normal subgroup defined by letter-count parities.

    * ``WHOLE``: G_k itself (index 1, translation-invariant configurations).
    * ``LETTER_PARITY``: H_A, sum of w_j over j in ``letters`` even (index 2).
    * ``EVEN_LENGTH``: words of even length (index 2).
    * ``LETTER_PAIR_PARITY``: w_i and w_j both even (index 4); cosets are
      numbered 2*(w_i mod 2) + (w_j mod 2).
    * ``LENGTH_AND_LETTER_PARITY``: |x| and w_i both even (index 4); cosets
      are numbered 2*(|x| mod 2) + (w_i mod 2).
    """

    kind: SubgroupKind
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "kind", SubgroupKind(self.kind))
        object.__setattr__(self, "letters", tuple(self.letters))
        need = {
            SubgroupKind.WHOLE: None,
            SubgroupKind.LETTER_PARITY: None,
            SubgroupKind.EVEN_LENGTH: 0,
            SubgroupKind.LETTER_PAIR_PARITY: 2,
            SubgroupKind.LENGTH_AND_LETTER_PARITY: 1,
        }[self.kind]
        if self.kind is SubgroupKind.LETTER_PARITY and not self.letters:
            raise ValueError("letter-parity subgroup needs a non-empty letter set")
        if need is not None and len(self.letters) != need:
            raise ValueError(f"{self.kind.value} subgroup takes {need} letters")

    @property
    def index(self) -> int:
        if self.kind is SubgroupKind.WHOLE:
            return 1
        if self.kind in (SubgroupKind.LETTER_PARITY, SubgroupKind.EVEN_LENGTH):
            return 2
        return 4

    def validate(self, k: int) -> None:
        bad = [j for j in self.letters if not 1 <= j <= k + 1]
        if bad:
            raise ValueError(f"letters {bad} out of range for k={k}")

    @property
    def name(self) -> str:
        letters = ",".join(str(j) for j in self.letters)
        return {
            SubgroupKind.WHOLE: "G",
            SubgroupKind.LETTER_PARITY: f"H_{{{letters}}}",
            SubgroupKind.EVEN_LENGTH: "G^(2)",
            SubgroupKind.LETTER_PAIR_PARITY: f"G^{{4}}[{letters}]",
            SubgroupKind.LENGTH_AND_LETTER_PARITY: f"G^(4)[{letters}]",
        }[self.kind]


# The subgroups used for the k=2 ground-state theorems.
WHOLE_GROUP = Subgroup(SubgroupKind.WHOLE)
H_A1 = Subgroup(SubgroupKind.LETTER_PARITY, (1,))
G2_EVEN = Subgroup(SubgroupKind.EVEN_LENGTH)
G2_PAIR4 = Subgroup(SubgroupKind.LETTER_PAIR_PARITY, (1, 2))
G2_LEN4 = Subgroup(SubgroupKind.LENGTH_AND_LETTER_PARITY, (1,))

SUBGROUPS = {
    "whole": WHOLE_GROUP,
    "H_a1": H_A1,
    "G2_2": G2_EVEN,
    "G2_4pair": G2_PAIR4,
    "G2_4": G2_LEN4,
}


def coset_of(x: Sequence[int], H: Subgroup) -> int:
    """Label of the coset of H containing x; the subgroup itself is coset 0."""
    kind = H.kind
    if kind is SubgroupKind.WHOLE:
        return 0
    if kind is SubgroupKind.LETTER_PARITY:
        return sum(letter_count(x, j) for j in H.letters) % 2
    if kind is SubgroupKind.EVEN_LENGTH:
        return len(x) % 2
    if kind is SubgroupKind.LETTER_PAIR_PARITY:
        i, j = H.letters
        return 2 * (letter_count(x, i) % 2) + letter_count(x, j) % 2
    (i,) = H.letters
    return 2 * (len(x) % 2) + letter_count(x, i) % 2

"""Linear algebra over the two-element field, with vectors stored as int bitsets.

Bit i of a vector is its coordinate on basis element i.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Sequence


class NotAComplex(ValueError):
    pass


class NotACycle(ValueError):
    pass


def bits(vec: int) -> list[int]:
    out = []
    while vec:
        low = vec & -vec
        out.append(low.bit_length() - 1)
        vec ^= low
    return out


def from_indices(idx) -> int:
    v = 0
    for i in idx:
        v ^= 1 << i
    return v


class Echelon:
    """Incremental row echelon form that remembers how each row was built.

    Each stored row carries a tag bitset recording which inserted vectors
    were summed to produce it, so membership queries can return a witness.
    """

    def __init__(self):
        self.rows: dict[int, tuple[int, int]] = {}  # pivot bit -> (row, tag)
        self.count = 0

    def reduce(self, vec: int) -> tuple[int, int]:
        tag = 0
        while vec:
            top = vec.bit_length() - 1
            hit = self.rows.get(top)
            if hit is None:
                break
            vec ^= hit[0]
            tag ^= hit[1]
        return vec, tag

    def reduce_fully(self, vec: int) -> tuple[int, int]:
        """Clear every pivot bit, not just the leading one; the result is a
        canonical representative of vec modulo the span."""
        tag = 0
        for p in sorted(self.rows, reverse=True):
            if vec >> p & 1:
                row, t = self.rows[p]
                vec ^= row
                tag ^= t
        return vec, tag

    def add(self, vec: int) -> bool:
        """Insert vec; return False when it was already in the span."""
        tag_in = 1 << self.count
        self.count += 1
        red, tag = self.reduce(vec)
        if not red:
            return False
        self.rows[red.bit_length() - 1] = (red, tag ^ tag_in)
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


def rank(vectors: Sequence[int]) -> int:
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return ech.rank


def kernel(columns: Sequence[int]) -> list[int]:
    """Basis of {x : sum_j x_j columns[j] = 0}."""
    ech = Echelon()
    out = []
    for j, col in enumerate(columns):
        red, tag = ech.reduce(col)
        if red:
            ech.rows[red.bit_length() - 1] = (red, tag ^ (1 << j))
        else:
            out.append(tag ^ (1 << j))
        ech.count += 1
    return out


def solve(columns: Sequence[int], target: int) -> int | None:
    """Some x with sum_j x_j columns[j] = target, or None."""
    ech = Echelon()
    for col in columns:
        ech.add(col)
    red, tag = ech.reduce(target)
    return None if red else tag


def apply(columns: Sequence[int], x: int) -> int:
    out = 0
    for j in bits(x):
        out ^= columns[j]
    return out


def compose_columns(outer: Sequence[int], inner: Sequence[int]) -> list[int]:
    """Columns of outer @ inner."""
    return [apply(outer, c) for c in inner]


@dataclass
class ChainComplexF2:
    labels: list[Hashable]
    columns: list[int]  # columns[j] = D(basis_j)
    index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.index:
            self.index = {lab: i for i, lab in enumerate(self.labels)}

    @property
    def dim(self) -> int:
        return len(self.labels)

    def d(self, vec: int) -> int:
        return apply(self.columns, vec)

    def squares_to_zero(self) -> bool:
        return all(self.d(c) == 0 for c in self.columns)

    def vector(self, labels) -> int:
        v = 0
        for lab in labels:
            v ^= 1 << self.index[lab]
        return v

    def labels_of(self, vec: int) -> list[Hashable]:
        return [self.labels[i] for i in bits(vec)]

    def matrix(self) -> list[list[int]]:
        n = self.dim
        return [[(self.columns[j] >> i) & 1 for j in range(n)] for i in range(n)]


@dataclass
class Homology:
    rank: int
    representatives: list[int]
    complex: ChainComplexF2 = field(repr=False)
    boundaries: Echelon = field(repr=False)
    _basis: Echelon = field(repr=False, default=None)

    def normal_form(self, cycle: int) -> int:
        if self.complex.d(cycle):
            raise NotACycle("vector is not a cycle")
        return self.boundaries.reduce_fully(cycle)[0]

    def is_boundary(self, cycle: int) -> bool:
        return self.normal_form(cycle) == 0

    def coordinates(self, cycle: int) -> int:
        """Coordinates of the class of cycle in the representative basis."""
        if self._basis is None:
            ech = Echelon()
            for v in self.boundaries.rows.values():
                ech.add(v[0])
            nb = ech.count
            for r in self.representatives:
                ech.add(r)
            self._basis = (ech, nb)
        ech, nb = self._basis
        red, tag = ech.reduce(cycle)
        if red:
            raise NotACycle("vector is not in the cycle space")
        return tag >> nb

    def to_json(self, fmt=str) -> dict:
        return {
            "rank": self.rank,
            "representatives": [sorted(map(fmt, self.complex.labels_of(r))) for r in self.representatives],
        }


def homology(C: ChainComplexF2) -> Homology:
    if not C.squares_to_zero():
        raise NotAComplex("differential does not square to zero")
    image = Echelon()
    for col in C.columns:
        image.add(col)
    reps = []
    span = Echelon()
    for row, _ in image.rows.values():
        span.add(row)
    for z in kernel(C.columns):
        if span.add(z):
            reps.append(z)
    # canonical representatives: reduce modulo boundaries
    reps = [image.reduce_fully(z)[0] for z in reps]
    return Homology(len(reps), reps, C, image)

"""Pointed matched circles.

Points are numbered 1..n along the orientation, starting just after the
basepoint, so the basepoint sits in the gap between point n and point 1.
A matching is stored as a tuple of pair ids, one per point, canonically
renumbered by first occurrence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence


class PMCError(ValueError):
    """Base class for invalid pointed matched circle data."""


class NotMultipleOfFour(PMCError):
    pass


class PairCountWrong(PMCError):
    pass


class SurgeryDisconnected(PMCError):
    pass


@dataclass(frozen=True, order=True)
class ReebChord:
    start: int
    end: int

    def __post_init__(self):
        if not self.start < self.end:
            raise ValueError(f"Reeb chord needs start < end, got [{self.start},{self.end}]")

    def __iter__(self):
        return iter((self.start, self.end))

    def __repr__(self):
        return f"[{self.start},{self.end}]"


def canonical_matching(matching: Sequence) -> tuple[int, ...]:
    """Renumber pair labels 1, 2, ... in order of first occurrence."""
    relabel: dict = {}
    out = []
    for label in matching:
        if label not in relabel:
            relabel[label] = len(relabel) + 1
        out.append(relabel[label])
    return tuple(out)


def surgery_circle_count(matching: Sequence[int]) -> int:
    """Number of circles left after band surgery along every matched pair.

    Arc i runs from point i to point i+1 (arc n wraps through the basepoint
    back to point 1). Arriving at point p the traversal crosses the band to
    the partner q and continues along the arc leaving q.
    """
    n = len(matching)
    if n == 0:
        return 1
    partner = _partners(matching)
    succ = [partner[(a + 1) % n] for a in range(n)]  # 0-based arc/point indices
    seen = [False] * n
    cycles = 0
    for a in range(n):
        if seen[a]:
            continue
        cycles += 1
        while not seen[a]:
            seen[a] = True
            a = succ[a]
    return cycles


def _partners(matching: Sequence[int]) -> list[int]:
    where: dict[int, list[int]] = {}
    for i, label in enumerate(matching):
        where.setdefault(label, []).append(i)
    partner = [0] * len(matching)
    for a, b in where.values():
        partner[a], partner[b] = b, a
    return partner


@dataclass(frozen=True)
class PointedMatchedCircle:
    matching: tuple[int, ...]
    name: str | None = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return len(self.matching)

    @property
    def genus(self) -> int:
        return self.n // 4

    @property
    def pairs(self) -> tuple[int, ...]:
        return tuple(range(1, self.n // 2 + 1))

    def pair_of(self, point: int) -> int:
        return self.matching[point - 1]

    def points_of(self, pair: int) -> tuple[int, int]:
        a, b = (i + 1 for i, label in enumerate(self.matching) if label == pair)
        return a, b

    def partner(self, point: int) -> int:
        a, b = self.points_of(self.pair_of(point))
        return b if point == a else a

    def to_json(self) -> dict:
        out = {"points": self.n, "matching": list(self.matching)}
        if self.name is not None:
            out["name"] = self.name
        return out

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"PMC{label}({list(self.matching)})"


def validate_pmc(matching: Sequence, points: int | None = None, name: str | None = None) -> PointedMatchedCircle:
    matching = list(matching)
    n = len(matching) if points is None else points
    if n != len(matching):
        raise PMCError(f"point count {n} does not match matching length {len(matching)}")
    if n % 4:
        raise NotMultipleOfFour(f"{n} marked points is not a multiple of 4")
    counts: dict = {}
    for label in matching:
        counts[label] = counts.get(label, 0) + 1
    bad = sorted(str(lab) for lab, c in counts.items() if c != 2)
    if bad:
        raise PairCountWrong(f"pair ids {', '.join(bad)} do not occur exactly twice")
    canon = canonical_matching(matching)
    circles = surgery_circle_count(canon)
    if circles != 1:
        raise SurgeryDisconnected(f"surgery along the matching gives {circles} circles")
    return PointedMatchedCircle(canon, name)


def pmc_from_json(data: dict) -> PointedMatchedCircle:
    return validate_pmc(data["matching"], data.get("points"), data.get("name"))


def genus(pmc: PointedMatchedCircle) -> int:
    return pmc.genus


def reeb_chords(pmc: PointedMatchedCircle) -> list[ReebChord]:
    return [ReebChord(s, t) for s, t in combinations(range(1, pmc.n + 1), 2)]


def reverse_orientation(pmc: PointedMatchedCircle) -> PointedMatchedCircle:
    """Point i goes to point n+1-i; the matching is carried along."""
    name = None if pmc.name is None else pmc.name + "-rev"
    if pmc.name and pmc.name.endswith("-rev"):
        name = pmc.name[: -len("-rev")]
    return PointedMatchedCircle(canonical_matching(pmc.matching[::-1]), name)


def reverse_chord(pmc: PointedMatchedCircle, chord: ReebChord) -> ReebChord:
    n = pmc.n
    return ReebChord(n + 1 - chord.end, n + 1 - chord.start)


def torus() -> PointedMatchedCircle:
    return validate_pmc([1, 2, 1, 2], name="torus")


def genus2_antipodal() -> PointedMatchedCircle:
    return validate_pmc([1, 2, 3, 4, 1, 2, 3, 4], name="genus2-antipodal")


def genus2_split() -> PointedMatchedCircle:
    """Connected sum of two torus circles."""
    return validate_pmc([1, 2, 1, 2, 3, 4, 3, 4], name="genus2-split")


def all_matchings(n: int) -> Iterable[tuple[int, ...]]:
    """Every canonical pairing of n points (not necessarily surgery-connected)."""
    if n == 0:
        yield ()
        return

    def rec(labels: list[int], next_label: int):
        try:
            i = labels.index(0)
        except ValueError:
            yield tuple(labels)
            return
        labels[i] = next_label
        for j in range(i + 1, len(labels)):
            if labels[j] == 0:
                labels[j] = next_label
                yield from rec(labels, next_label + 1)
                labels[j] = 0
        labels[i] = 0

    yield from rec([0] * n, 1)

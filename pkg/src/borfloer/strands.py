"""The strands algebra A(Z) of a pointed matched circle.

Basis elements are StrandTerms: a set of Reeb chords (moving strands) plus a
set of matched pairs carrying smeared horizontal strands. Products and the
differential are evaluated on literal strand diagrams on the n points, where
a smeared horizontal is the sum of its two possible positions, and the
result is grouped back into StrandTerms. Coefficients live in F2.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations, product
from typing import Iterable, Iterator

from .pmc import PointedMatchedCircle, ReebChord


class CircleMismatch(ValueError):
    pass


class ClosureError(RuntimeError):
    """A computed product or differential left the smeared subalgebra."""


@dataclass(frozen=True, order=True)
class StrandTerm:
    chords: tuple[ReebChord, ...] = ()
    horizontals: tuple[int, ...] = ()

    @classmethod
    def make(cls, chords: Iterable = (), horizontals: Iterable[int] = ()) -> "StrandTerm":
        cs = tuple(sorted(c if isinstance(c, ReebChord) else ReebChord(*c) for c in chords))
        return cls(cs, tuple(sorted(horizontals)))

    @property
    def weight(self) -> int:
        return len(self.chords) + len(self.horizontals)

    @property
    def is_idempotent(self) -> bool:
        return not self.chords

    def sort_key(self):
        return (self.weight, tuple((c.start, c.end) for c in self.chords), self.horizontals)

    def to_json(self) -> dict:
        return {"chords": [[c.start, c.end] for c in self.chords], "horizontals": list(self.horizontals)}

    def __repr__(self):
        parts = [repr(c) for c in self.chords] + [f"h{p}" for p in self.horizontals]
        return "{" + ",".join(parts) + "}"


def is_valid_term(pmc: PointedMatchedCircle, term: StrandTerm) -> bool:
    starts = [pmc.pair_of(c.start) for c in term.chords] + list(term.horizontals)
    ends = [pmc.pair_of(c.end) for c in term.chords] + list(term.horizontals)
    points = [c.start for c in term.chords]
    tails = [c.end for c in term.chords]
    if any(not 1 <= p <= pmc.n for c in term.chords for p in c):
        return False
    if any(p not in pmc.pairs for p in term.horizontals):
        return False
    return (
        len(set(starts)) == len(starts)
        and len(set(ends)) == len(ends)
        and len(set(points)) == len(points)
        and len(set(tails)) == len(tails)
    )


def left_idem(pmc: PointedMatchedCircle, term: StrandTerm) -> frozenset[int]:
    return frozenset(pmc.pair_of(c.start) for c in term.chords) | frozenset(term.horizontals)


def right_idem(pmc: PointedMatchedCircle, term: StrandTerm) -> frozenset[int]:
    return frozenset(pmc.pair_of(c.end) for c in term.chords) | frozenset(term.horizontals)


# -- literal strand diagrams -------------------------------------------------
# A literal diagram is a sorted tuple of (start, end) with start <= end.


def _inversions(strands) -> int:
    inv = 0
    for (s1, t1), (s2, t2) in combinations(strands, 2):
        if (s1 - s2) * (t1 - t2) < 0:
            inv += 1
    return inv


def _compose(first, second):
    """Concatenate literal diagrams; None when ends and starts disagree or a pair crosses twice."""
    follow = dict(second)
    if set(t for _, t in first) != set(follow):
        return None
    out = tuple(sorted((s, follow[t]) for s, t in first))
    if _inversions(out) != _inversions(first) + _inversions(second):
        return None
    return out


def _resolutions(strands) -> Iterator[tuple]:
    inv = _inversions(strands)
    strands = list(strands)
    for i, j in combinations(range(len(strands)), 2):
        (s1, t1), (s2, t2) = strands[i], strands[j]
        if (s1 - s2) * (t1 - t2) >= 0:
            continue
        new = strands[:]
        new[i], new[j] = (s1, t2), (s2, t1)
        new = tuple(sorted(new))
        if _inversions(new) == inv - 1:
            yield new


class Algebra:
    """A(Z) with memoized basis, products and differentials."""

    def __init__(self, pmc: PointedMatchedCircle):
        self.pmc = pmc
        self._basis: list[StrandTerm] | None = None
        self._index: dict[StrandTerm, int] | None = None
        self._mul_cache: dict = {}
        self._d_cache: dict = {}

    def __repr__(self):
        return f"Algebra({self.pmc!r})"

    # -- basis ---------------------------------------------------------------
    @property
    def basis(self) -> list[StrandTerm]:
        if self._basis is None:
            self._basis = enumerate_basis(self.pmc)
            self._index = {t: i for i, t in enumerate(self._basis)}
        return self._basis

    def index(self, term: StrandTerm) -> int:
        self.basis
        return self._index[term]

    @cached_property
    def basis_by_idempotents(self) -> dict[tuple[frozenset, frozenset], list[StrandTerm]]:
        out: dict = {}
        for t in self.basis:
            out.setdefault((self.left_idem(t), self.right_idem(t)), []).append(t)
        return out

    def left_idem(self, term: StrandTerm) -> frozenset[int]:
        return left_idem(self.pmc, term)

    def right_idem(self, term: StrandTerm) -> frozenset[int]:
        return right_idem(self.pmc, term)

    # -- elements ------------------------------------------------------------
    def element(self, terms: Iterable[StrandTerm] = ()) -> "AlgebraElement":
        acc: set = set()
        for t in terms:
            acc ^= {t}
        return AlgebraElement(self, frozenset(acc))

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, frozenset())

    def term(self, chords=(), horizontals=()) -> "AlgebraElement":
        t = StrandTerm.make(chords, horizontals)
        if not is_valid_term(self.pmc, t):
            raise ValueError(f"{t!r} is not a strand diagram over {self.pmc!r}")
        return AlgebraElement(self, frozenset([t]))

    def idempotent(self, pairs: Iterable[int]) -> "AlgebraElement":
        return self.term((), pairs)

    def unit(self) -> "AlgebraElement":
        pairs = self.pmc.pairs
        terms = [StrandTerm.make((), hs) for r in range(len(pairs) + 1) for hs in combinations(pairs, r)]
        return AlgebraElement(self, frozenset(terms))

    # -- operations on basis terms --------------------------------------------
    def _sections(self, term: StrandTerm):
        chords = [(c.start, c.end) for c in term.chords]
        choices = [self.pmc.points_of(p) for p in term.horizontals]
        for pick in product(*choices):
            yield tuple(sorted(chords + [(u, u) for u in pick]))

    def _smear(self, literal: dict) -> frozenset[StrandTerm]:
        """Group a mod-2 sum of literal diagrams back into StrandTerms."""
        groups: dict[StrandTerm, int] = {}
        for diagram, coeff in literal.items():
            if not coeff:
                continue
            chords = [ReebChord(s, t) for s, t in diagram if s < t]
            hs = [self.pmc.pair_of(s) for s, t in diagram if s == t]
            term = StrandTerm.make(chords, hs)
            groups[term] = groups.get(term, 0) + 1
        out = []
        for term, count in groups.items():
            full = 2 ** len(term.horizontals)
            if not is_valid_term(self.pmc, term) or count != full:
                raise ClosureError(f"literal sum does not regroup at {term!r} ({count}/{full} sections)")
            out.append(term)
        return frozenset(out)

    def multiply_terms(self, a: StrandTerm, b: StrandTerm) -> frozenset[StrandTerm]:
        key = (a, b)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        if a.weight != b.weight or self.right_idem(a) != self.left_idem(b):
            res = frozenset()
        else:
            literal: dict = {}
            for x in self._sections(a):
                for y in self._sections(b):
                    z = _compose(x, y)
                    if z is not None:
                        literal[z] = literal.get(z, 0) ^ 1
            res = self._smear(literal)
        self._mul_cache[key] = res
        return res

    def differential_term(self, a: StrandTerm) -> frozenset[StrandTerm]:
        hit = self._d_cache.get(a)
        if hit is not None:
            return hit
        literal: dict = {}
        for x in self._sections(a):
            for z in _resolutions(x):
                literal[z] = literal.get(z, 0) ^ 1
        res = self._smear(literal)
        self._d_cache[a] = res
        return res


@dataclass(frozen=True)
class AlgebraElement:
    algebra: Algebra
    terms: frozenset[StrandTerm]

    @property
    def pmc(self) -> PointedMatchedCircle:
        return self.algebra.pmc

    def _check(self, other: "AlgebraElement"):
        if self.algebra.pmc != other.algebra.pmc:
            raise CircleMismatch(f"{self.algebra.pmc!r} vs {other.algebra.pmc!r}")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        return AlgebraElement(self.algebra, self.terms ^ other.terms)

    __sub__ = __add__

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        return multiply_strands(self, other)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra.pmc == other.algebra.pmc and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __iter__(self):
        return iter(self.sorted_terms())

    def __len__(self):
        return len(self.terms)

    def sorted_terms(self) -> list[StrandTerm]:
        return sorted(self.terms, key=StrandTerm.sort_key)

    @property
    def is_idempotent(self) -> bool:
        return all(t.is_idempotent for t in self.terms)

    def to_json(self) -> dict:
        return {"terms": [t.to_json() for t in self.sorted_terms()]}

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(repr(t) for t in self.sorted_terms())


def enumerate_basis(pmc: PointedMatchedCircle) -> list[StrandTerm]:
    """Every StrandTerm over pmc, sorted by (weight, chords, horizontals)."""
    n = pmc.n
    out: list[StrandTerm] = []

    # Choose start points one at a time (increasing), each with an end, then
    # fill the remaining pairs with optional horizontals.
    def rec(next_start: int, chords: list, used_start_pairs: set, used_ends: set, used_end_pairs: set):
        free = [p for p in pmc.pairs if p not in used_start_pairs and p not in used_end_pairs]
        for r in range(len(free) + 1):
            for hs in combinations(free, r):
                out.append(StrandTerm.make(chords, hs))
        for s in range(next_start, n + 1):
            ps = pmc.pair_of(s)
            if ps in used_start_pairs:
                continue
            for t in range(s + 1, n + 1):
                pt = pmc.pair_of(t)
                if t in used_ends or pt in used_end_pairs:
                    continue
                chords.append(ReebChord(s, t))
                used_start_pairs.add(ps)
                used_ends.add(t)
                used_end_pairs.add(pt)
                rec(s + 1, chords, used_start_pairs, used_ends, used_end_pairs)
                chords.pop()
                used_start_pairs.discard(ps)
                used_ends.discard(t)
                used_end_pairs.discard(pt)

    rec(1, [], set(), set(), set())
    return sorted(set(out), key=StrandTerm.sort_key)


def basis_by_weight(pmc: PointedMatchedCircle) -> dict[int, list[StrandTerm]]:
    groups: dict[int, list[StrandTerm]] = {}
    for t in enumerate_basis(pmc):
        groups.setdefault(t.weight, []).append(t)
    return groups


@lru_cache(maxsize=None)
def algebra_for(pmc: PointedMatchedCircle) -> Algebra:
    return Algebra(pmc)


def multiply_strands(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    a._check(b)
    alg = a.algebra
    acc: set = set()
    for x in a.terms:
        for y in b.terms:
            for z in alg.multiply_terms(x, y):
                acc ^= {z}
    return AlgebraElement(alg, frozenset(acc))


def differential_strands(a: AlgebraElement) -> AlgebraElement:
    alg = a.algebra
    acc: set = set()
    for x in a.terms:
        for z in alg.differential_term(x):
            acc ^= {z}
    return AlgebraElement(alg, frozenset(acc))


def unit(pmc: PointedMatchedCircle) -> AlgebraElement:
    return algebra_for(pmc).unit()


def idempotent_element(pmc: PointedMatchedCircle, pairs: Iterable[int]) -> AlgebraElement:
    return algebra_for(pmc).idempotent(pairs)


def element_from_json(alg: Algebra, data: dict) -> AlgebraElement:
    terms = []
    for t in data["terms"]:
        term = StrandTerm.make(t.get("chords", ()), t.get("horizontals", ()))
        if not is_valid_term(alg.pmc, term):
            raise ValueError(f"{term!r} is not a strand diagram over {alg.pmc!r}")
        terms.append(term)
    return alg.element(terms)

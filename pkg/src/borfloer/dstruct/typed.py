"""Type-D structures over A(-Z) and their morphisms, as finite data.

A generator x carries an idempotent: a set of matched pairs of -Z. An entry
x -> a (x) y of delta1 requires left_idem(a) = I(x) and right_idem(a) = I(y).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from ..pmc import PointedMatchedCircle, pmc_from_json, reverse_orientation
from ..strands import Algebra, AlgebraElement, CircleMismatch, StrandTerm, algebra_for, element_from_json


class IdempotentViolation(ValueError):
    pass


class ChainMismatch(ValueError):
    pass


def _xor_into(acc: dict, key, count: int = 1) -> None:
    if count & 1:
        if key in acc:
            del acc[key]
        else:
            acc[key] = 1


@dataclass
class TypeDStructure:
    circle: PointedMatchedCircle
    generators: list[tuple[str, frozenset[int]]]
    delta1: list[tuple[str, AlgebraElement, str]] = field(default_factory=list)
    name: str = ""

    def __post_init__(self):
        self.generators = [(g, frozenset(i)) for g, i in self.generators]
        names = [g for g, _ in self.generators]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {self.name or 'structure'}")
        self.idem = dict(self.generators)
        self.order = {g: k for k, (g, _) in enumerate(self.generators)}
        for src, coeff, dst in self.delta1:
            if src not in self.idem or dst not in self.idem:
                raise ValueError(f"delta1 entry {src} -> {dst} names an unknown generator")
            if coeff.algebra is not self.algebra:
                raise CircleMismatch("coefficient lies in a different algebra")
        self._check_idempotents()

    @property
    def algebra(self) -> Algebra:
        return algebra_for(reverse_orientation(self.circle))

    @property
    def names(self) -> list[str]:
        return [g for g, _ in self.generators]

    def _check_idempotents(self):
        alg = self.algebra
        for src, coeff, dst in self.delta1:
            for t in coeff:
                if alg.left_idem(t) != self.idem[src] or alg.right_idem(t) != self.idem[dst]:
                    raise IdempotentViolation(
                        f"{src} -> {t!r} {dst}: coefficient idempotents "
                        f"{sorted(alg.left_idem(t))}/{sorted(alg.right_idem(t))} do not match "
                        f"{sorted(self.idem[src])}/{sorted(self.idem[dst])}"
                    )

    def delta_terms(self) -> dict[str, list[tuple[StrandTerm, str]]]:
        """delta1 expanded into basis terms, with mod-2 cancellation."""
        acc: dict[str, dict] = {g: {} for g in self.names}
        for src, coeff, dst in self.delta1:
            for t in coeff:
                _xor_into(acc[src], (t, dst))
        return {g: sorted(d, key=lambda k: (k[0].sort_key(), self.order[k[1]])) for g, d in acc.items()}

    def delta_of(self, gen: str) -> dict[str, AlgebraElement]:
        out: dict[str, set] = {}
        for t, dst in self.delta_terms()[gen]:
            out.setdefault(dst, set()).add(t)
        alg = self.algebra
        return {dst: alg.element(ts) for dst, ts in out.items()}

    def to_json(self) -> dict:
        return {
            "pmc": self.circle.name or list(self.circle.matching),
            "name": self.name,
            "generators": [{"name": g, "idempotent": sorted(i)} for g, i in self.generators],
            "delta1": [
                {"from": src, "coeff": self.algebra.element([t]).to_json(), "to": dst}
                for src in self.names
                for t, dst in self.delta_terms()[src]
            ],
        }


def structure_from_json(data: dict, circles: dict[str, PointedMatchedCircle]) -> TypeDStructure:
    pmc_ref = data["pmc"]
    if isinstance(pmc_ref, str):
        if pmc_ref not in circles:
            raise KeyError(f"unknown circle {pmc_ref!r}")
        circle = circles[pmc_ref]
    elif isinstance(pmc_ref, dict):
        circle = pmc_from_json(pmc_ref)
    else:
        from ..pmc import validate_pmc

        circle = validate_pmc(pmc_ref)
    alg = algebra_for(reverse_orientation(circle))
    gens = [(g["name"], frozenset(g["idempotent"])) for g in data["generators"]]
    delta = [(e["from"], element_from_json(alg, e["coeff"]), e["to"]) for e in data.get("delta1", [])]
    return TypeDStructure(circle, gens, delta, data.get("name", ""))


@dataclass(frozen=True)
class TypeDMorphism:
    source: TypeDStructure = field(compare=False, hash=False, repr=False)
    target: TypeDStructure = field(compare=False, hash=False, repr=False)
    entries: frozenset[tuple[str, StrandTerm, str]] = frozenset()

    def __post_init__(self):
        alg = self.source.algebra
        for u, a, v in self.entries:
            if u not in self.source.idem or v not in self.target.idem:
                raise ValueError(f"entry {u} -> {v} names an unknown generator")
            if alg.left_idem(a) != self.source.idem[u] or alg.right_idem(a) != self.target.idem[v]:
                raise IdempotentViolation(f"entry ({u}, {a!r}, {v}) is not a basic morphism")

    @classmethod
    def from_terms(cls, source, target, terms: Iterable[tuple[str, StrandTerm, str]]) -> "TypeDMorphism":
        acc: dict = {}
        for key in terms:
            _xor_into(acc, key)
        return cls(source, target, frozenset(acc))

    def __add__(self, other: "TypeDMorphism") -> "TypeDMorphism":
        return TypeDMorphism(self.source, self.target, self.entries ^ other.entries)

    def __bool__(self):
        return bool(self.entries)

    def sorted_entries(self) -> list[tuple[str, StrandTerm, str]]:
        so, to = self.source.order, self.target.order
        return sorted(self.entries, key=lambda e: (so[e[0]], to[e[2]], e[1].sort_key()))

    def to_json(self) -> dict:
        return {
            "source": self.source.name,
            "target": self.target.name,
            "entries": [{"from": u, "coeff": {"terms": [a.to_json()]}, "to": v} for u, a, v in self.sorted_entries()],
        }

    def __repr__(self):
        body = " + ".join(f"({u}->{a!r}{v})" for u, a, v in self.sorted_entries()) or "0"
        return f"Mor[{body}]"


def morphism_from_json(data: dict, source: TypeDStructure, target: TypeDStructure) -> TypeDMorphism:
    alg = source.algebra
    terms = []
    for e in data.get("entries", []):
        for t in element_from_json(alg, e["coeff"]):
            terms.append((e["from"], t, e["to"]))
    return TypeDMorphism.from_terms(source, target, terms)


def identity_morphism(N: TypeDStructure) -> TypeDMorphism:
    return TypeDMorphism(N, N, frozenset((g, StrandTerm.make((), sorted(i)), g) for g, i in N.generators))


# -- structure equation -----------------------------------------------------

@dataclass
class StructureReport:
    ok: bool
    residuals: dict[str, dict[str, AlgebraElement]]

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "residuals": [
                {"generator": g, "terms": [{"coeff": c.to_json(), "to": dst} for dst, c in sorted(res.items())]}
                for g, res in sorted(self.residuals.items())
            ],
        }

    def describe(self) -> str:
        if self.ok:
            return "structure equation holds"
        parts = []
        for g, res in sorted(self.residuals.items()):
            body = " + ".join(f"{c!r}(x){dst}" for dst, c in sorted(res.items()))
            parts.append(f"{g}: {body}")
        return "structure equation fails: " + "; ".join(parts)


def check_structure_equation(N: TypeDStructure) -> StructureReport:
    """(mu2 (x) I)(I (x) delta1) delta1 + (mu1 (x) I) delta1 on every generator."""
    alg = N.algebra
    delta = N.delta_terms()
    residuals = {}
    for x in N.names:
        acc: dict = {}
        for a, y in delta[x]:
            for t in alg.differential_term(a):
                _xor_into(acc, (t, y))
            for b, z in delta[y]:
                for t in alg.multiply_terms(a, b):
                    _xor_into(acc, (t, z))
        if acc:
            res: dict[str, set] = {}
            for t, z in acc:
                res.setdefault(z, set()).add(t)
            residuals[x] = {z: alg.element(ts) for z, ts in res.items()}
    return StructureReport(not residuals, residuals)


def induced_module_check(N: TypeDStructure) -> bool:
    """m1 = (mu2 (x) I)(I (x) delta1) + mu1 (x) I on A (x) N squares to zero."""
    alg = N.algebra
    delta = N.delta_terms()
    basis = [(a, y) for y in N.names for a in alg.basis if alg.right_idem(a) == N.idem[y]]

    def m1(vec: dict) -> dict:
        out: dict = {}
        for a, y in vec:
            for t in alg.differential_term(a):
                _xor_into(out, (t, y))
            for b, z in delta[y]:
                for t in alg.multiply_terms(a, b):
                    _xor_into(out, (t, z))
        return out

    return all(not m1(m1({key: 1})) for key in basis)


# -- iterates ---------------------------------------------------------------

def iterate_delta(N: TypeDStructure, i: int) -> dict[str, frozenset]:
    """delta^i(x) as a set of (tuple of i algebra terms, generator)."""
    if i < 0:
        raise ValueError("i must be nonnegative")
    delta = N.delta_terms()
    cur = {x: {((), x): 1} for x in N.names}
    for _ in range(i):
        nxt = {}
        for x, vec in cur.items():
            acc: dict = {}
            for word, y in vec:
                for a, z in delta[y]:
                    _xor_into(acc, (word + (a,), z))
            nxt[x] = acc
        cur = nxt
    return {x: frozenset(v) for x, v in cur.items()}


@dataclass
class Boundedness:
    bounded: bool
    depth: int | None
    cutoff: int

    def to_json(self) -> dict:
        return {"bounded": self.bounded, "depth": self.depth, "cutoff": self.cutoff}


def is_bounded(N: TypeDStructure, cutoff: int = 16) -> Boundedness:
    if cutoff < 1:
        raise ValueError("cutoff must be at least 1")
    delta = N.delta_terms()
    cur: dict = {((), x): 1 for x in N.names}
    for i in range(1, cutoff + 1):
        nxt: dict = {}
        for word, y in cur:
            for a, z in delta[y]:
                _xor_into(nxt, (word + (a,), z))
        if not nxt:
            return Boundedness(True, i, cutoff)
        cur = nxt
    return Boundedness(False, None, cutoff)

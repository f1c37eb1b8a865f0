"""Small type-D structures over the torus algebra, and a random generator.

Chord names follow the torus convention: rho1 = [1,2], rho2 = [2,3],
rho3 = [3,4], rho12 = [1,3], rho23 = [2,4], rho123 = [1,4]. Pair 1 is
{1, 3} and pair 2 is {2, 4}.
"""

from __future__ import annotations

import random

from ..pmc import PointedMatchedCircle, reverse_orientation, torus
from ..strands import algebra_for
from .typed import TypeDStructure, check_structure_equation

RHO = {
    "rho1": (1, 2),
    "rho2": (2, 3),
    "rho3": (3, 4),
    "rho12": (1, 3),
    "rho23": (2, 4),
    "rho123": (1, 4),
}


def rho(name: str, pmc: PointedMatchedCircle | None = None):
    pmc = pmc or torus()
    return algebra_for(reverse_orientation(pmc)).term([RHO[name]])


def _structure(name, gens, arrows) -> TypeDStructure:
    pmc = torus()
    delta = [(src, rho(r, pmc), dst) for src, r, dst in arrows]
    return TypeDStructure(pmc, gens, delta, name)


def single_point() -> TypeDStructure:
    """One generator in the {1,3} idempotent with no differential."""
    return _structure("single", [("x", {1})], [])


def loop12() -> TypeDStructure:
    return _structure("loop12", [("x", {1})], [("x", "rho12", "x")])


def loop23() -> TypeDStructure:
    return _structure("loop23", [("y", {2})], [("y", "rho23", "y")])


def fork() -> TypeDStructure:
    """x -> (rho1 + rho3) y."""
    return _structure("fork", [("x", {1}), ("y", {2})], [("x", "rho1", "y"), ("x", "rho3", "y")])


def long_arrow() -> TypeDStructure:
    return _structure("long", [("x", {1}), ("y", {2})], [("x", "rho123", "y")])


def broken_pair() -> TypeDStructure:
    """Fails the structure equation with residual rho12 x."""
    return _structure("broken", [("x", {1}), ("y", {2})], [("x", "rho1", "y"), ("y", "rho2", "x")])


def shipped_structures() -> list[TypeDStructure]:
    return [single_point(), loop12(), loop23(), fork(), long_arrow()]


def random_structure(rng: random.Random, pmc: PointedMatchedCircle | None = None, max_gens: int = 4,
                     density: float = 0.35) -> TypeDStructure:
    """Random generators in the middle idempotents, with random delta1."""
    pmc = pmc or torus()
    alg = algebra_for(reverse_orientation(pmc))
    k = pmc.genus
    idems = sorted({frozenset(t.horizontals) for t in alg.basis if t.is_idempotent and len(t.horizontals) == k},
                   key=sorted)
    n = rng.randint(1, max_gens)
    gens = [(f"g{i}", rng.choice(idems)) for i in range(n)]
    table = alg.basis_by_idempotents
    delta = []
    for src, isrc in gens:
        for dst, idst in gens:
            for t in sorted(table.get((isrc, idst), []), key=lambda t: t.sort_key()):
                if not t.is_idempotent and rng.random() < density:
                    delta.append((src, alg.element([t]), dst))
    return TypeDStructure(pmc, gens, delta, f"random{rng.randrange(10**6)}")


def random_valid_structures(count: int, seed: int = 0, **kw) -> list[TypeDStructure]:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        N = random_structure(rng, **kw)
        if check_structure_equation(N).ok and N.delta1:
            out.append(N)
    return out

"""Verification suites shared by the CLI and the test-suite.

Each suite returns a CheckResult with deterministic counters and, on
failure, the first offending input rendered as text.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .azdiag.at import build_at, default_offsets, offset_family
from .azdiag.az import act_sum, az_action_left, az_action_right, az_differential, az_generators, build_az, generator_of, strand_sum
from .azdiag.triangle import at_face_generators, at_triangle_product
from .pmc import PointedMatchedCircle, reverse_orientation
from .strands import Algebra, StrandTerm, algebra_for


@dataclass
class CheckResult:
    name: str
    passed: bool = True
    counts: dict = field(default_factory=dict)
    failure: str | None = None

    def fail(self, msg: str):
        if self.passed:
            self.passed = False
            self.failure = msg

    def bump(self, key: str, n: int = 1):
        self.counts[key] = self.counts.get(key, 0) + n

    def to_json(self) -> dict:
        return {"check": self.name, "status": "PASS" if self.passed else "FAIL", "counts": self.counts,
                "failure": self.failure}


def _fmt(terms) -> str:
    return "{" + ", ".join(sorted(repr(t) for t in terms)) + "}"


def _by_left(alg: Algebra) -> dict:
    out: dict = {}
    for b in alg.basis:
        out.setdefault(alg.left_idem(b), []).append(b)
    return out


def _mul(alg: Algebra, x: frozenset, y: frozenset) -> frozenset:
    acc: set = set()
    for a in x:
        for b in y:
            acc ^= alg.multiply_terms(a, b)
    return frozenset(acc)


def _d(alg: Algebra, x: frozenset) -> frozenset:
    acc: set = set()
    for a in x:
        acc ^= alg.differential_term(a)
    return frozenset(acc)


def composable_triples(alg: Algebra, count: int, seed: int = 0) -> list[tuple[StrandTerm, ...]]:
    rng = random.Random(seed)
    by_left = _by_left(alg)
    basis = alg.basis
    out = []
    while len(out) < count:
        a = rng.choice(basis)
        b = rng.choice(by_left[alg.right_idem(a)])
        c = rng.choice(by_left[alg.right_idem(b)])
        out.append((a, b, c))
    return out


def check_axioms(pmc: PointedMatchedCircle, assoc_samples: int | None = None, seed: int = 0) -> CheckResult:
    """d^2 = 0, Leibniz, associativity, unit and idempotent laws.

    Leibniz runs over all pairs for small algebras and otherwise over pairs
    with matching idempotents; for any other pair both sides vanish because
    d preserves idempotents. Associativity is exhaustive when
    assoc_samples is None.
    """
    alg = algebra_for(pmc)
    res = CheckResult("axioms")
    basis = alg.basis
    res.counts["basis"] = len(basis)
    for a in basis:
        res.bump("d_squared")
        if _d(alg, alg.differential_term(a)):
            res.fail(f"d^2 {a!r} != 0")
    by_left = _by_left(alg)
    every_pair = len(basis) <= 256
    for a in basis:
        for b in basis if every_pair else by_left.get(alg.right_idem(a), ()):
            res.bump("leibniz")
            ea, eb = frozenset([a]), frozenset([b])
            lhs = _d(alg, alg.multiply_terms(a, b))
            rhs = _mul(alg, _d(alg, ea), eb) ^ _mul(alg, ea, _d(alg, eb))
            if lhs != rhs:
                res.fail(f"Leibniz fails on {a!r}, {b!r}: {_fmt(lhs)} vs {_fmt(rhs)}")
    if assoc_samples is None:
        triples = ((a, b, c) for a in basis for b in basis for c in basis)
    else:
        triples = composable_triples(alg, assoc_samples, seed)
    for a, b, c in triples:
        res.bump("associativity")
        ea, ec = frozenset([a]), frozenset([c])
        if _mul(alg, alg.multiply_terms(a, b), ec) != _mul(alg, ea, alg.multiply_terms(b, c)):
            res.fail(f"associativity fails on {a!r}, {b!r}, {c!r}")
    one = alg.unit().terms
    idems = [t for t in basis if t.is_idempotent]
    for a in basis:
        res.bump("unit")
        if _mul(alg, one, frozenset([a])) != {a} or _mul(alg, frozenset([a]), one) != {a}:
            res.fail(f"unit law fails on {a!r}")
        li = StrandTerm.make((), sorted(alg.left_idem(a)))
        ri = StrandTerm.make((), sorted(alg.right_idem(a)))
        if alg.multiply_terms(li, a) != {a} or alg.multiply_terms(a, ri) != {a}:
            res.fail(f"idempotent law fails on {a!r}")
    for e in idems:
        for f in idems:
            res.bump("idempotents")
            want = {e} if e == f else set()
            if alg.multiply_terms(e, f) != want:
                res.fail(f"{e!r} * {f!r} is not {_fmt(want)}")
    return res


def check_az(pmc: PointedMatchedCircle, action_samples: int | None = None, seed: int = 0) -> CheckResult:
    """AZ generators against the strands algebra.

    Differentials are always exhaustive. Actions are exhaustive when
    action_samples is None. Otherwise three samples in four have matching
    idempotents and the fourth is a uniform pair, which mostly multiplies
    to zero.
    """
    alg = algebra_for(pmc)
    model = build_az(pmc)
    res = CheckResult("az")
    gens = az_generators(model)
    terms = [g.to_strand() for g in gens]
    res.counts["generators"] = len(gens)
    if len(set(terms)) != len(terms) or set(terms) != set(alg.basis):
        res.fail(f"to_strand is not a bijection: {len(set(terms))} images for {len(alg.basis)} basis elements")
        return res
    for g in gens:
        res.bump("differential")
        d = az_differential(g)
        got, want = strand_sum(d), alg.differential_term(g.to_strand())
        if got != want:
            res.fail(f"differential of {g.to_strand()!r}: {_fmt(got)} vs {_fmt(want)}")
        if act_sum(d, az_differential):
            res.fail(f"d^2 of {g.to_strand()!r} is nonzero")
    basis = alg.basis
    if action_samples is None:
        pairs = [(a, b) for a in basis for b in basis]
    else:
        rng = random.Random(seed)
        by_left = _by_left(alg)
        pairs = []
        for k in range(action_samples):
            a = rng.choice(basis)
            b = rng.choice(by_left[alg.right_idem(a)]) if k % 4 else rng.choice(basis)
            pairs.append((a, b))
    for a, b in pairs:
        res.bump("actions")
        want = alg.multiply_terms(a, b)
        left = strand_sum(az_action_left(a, generator_of(pmc, b)))
        right = strand_sum(az_action_right(generator_of(pmc, a), b))
        if left != want or right != want:
            res.fail(f"action on {a!r}, {b!r}: left {_fmt(left)}, right {_fmt(right)}, expected {_fmt(want)}")
    if action_samples is None:
        for a in basis:
            for x in gens:
                for b in basis:
                    res.bump("bimodule")
                    lhs = act_sum(az_action_right(x, b), lambda y: az_action_left(a, y))
                    rhs = act_sum(az_action_left(a, x), lambda y: az_action_right(y, b))
                    if lhs != rhs:
                        res.fail(f"left and right actions do not commute on {a!r}, {x.to_strand()!r}, {b!r}")
    return res


def standard_offset_families(pmc: PointedMatchedCircle) -> dict[str, dict]:
    return {
        "default": default_offsets(pmc),
        "wide": offset_family(pmc, "1/500", "7/10000"),
        "e-below": offset_family(pmc, "1/1000", "-3/10000"),
        "g-flipped": offset_family(pmc, "1/1000", "3/10000", g_sign=-1),
    }


def check_at(pmc: PointedMatchedCircle, families: dict[str, dict] | None = None, pair_samples: int | None = None,
             seed: int = 0) -> CheckResult:
    """Triangle products on the AT model against multiplication in A(-Z).

    Every offset family must reproduce the product, which also makes the
    product table independent of the offsets.
    """
    alg = algebra_for(reverse_orientation(pmc))
    families = families or standard_offset_families(pmc)
    res = CheckResult("at")
    res.counts["offset_families"] = len(families)
    for label in sorted(families):
        model = build_at(pmc, families[label])
        faces = {f: at_face_generators(model, f) for f in ("gamma-delta", "delta-epsilon", "gamma-epsilon")}
        for face, gens in faces.items():
            images = [g.to_strand() for g in gens]
            if len(set(images)) != len(images) or set(images) != set(alg.basis):
                res.fail(f"{label}: {face} generators do not biject with the basis")
                return res
        pairs = [(r, s) for r in faces["gamma-delta"] for s in faces["delta-epsilon"]]
        if pair_samples is not None and len(pairs) > pair_samples:
            pairs = random.Random(seed).sample(pairs, pair_samples)
        for r, s in pairs:
            res.bump("products")
            got = frozenset(z.to_strand() for z in at_triangle_product(r, s))
            want = alg.multiply_terms(r.to_strand(), s.to_strand())
            if got != want:
                res.fail(f"{label}: {r.to_strand()!r} then {s.to_strand()!r} gives {_fmt(got)}, expected {_fmt(want)}")
    return res


SUITES = {"axioms": check_axioms, "az": check_az, "at": check_at}

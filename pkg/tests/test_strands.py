import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from borfloer.pmc import genus2_antipodal, genus2_split, reeb_chords, torus, validate_pmc
from borfloer.strands import (
    CircleMismatch,
    StrandTerm,
    algebra_for,
    basis_by_weight,
    differential_strands,
    element_from_json,
    enumerate_basis,
    idempotent_element,
    left_idem,
    multiply_strands,
    right_idem,
    unit,
)

T = torus()
A = algebra_for(T)


def t(*chords, h=()):
    return StrandTerm.make(chords, h)


def el(*terms):
    return A.element(terms)


def brute_basis(pmc):
    """Every chord subset and horizontal subset obeying one point per arc."""
    chords = [(c.start, c.end) for c in reeb_chords(pmc)]
    out = set()
    for r in range(len(pmc.pairs) + 1):
        for cs in combinations(chords, r):
            starts = [pmc.pair_of(s) for s, _ in cs]
            ends = [pmc.pair_of(e) for _, e in cs]
            if len(set(starts)) < r or len(set(ends)) < r:
                continue
            free = [p for p in pmc.pairs if p not in starts and p not in ends]
            for k in range(len(free) + 1):
                for hs in combinations(free, k):
                    out.add(StrandTerm.make(cs, hs))
    return out


@pytest.mark.parametrize("pmc", [T, genus2_split(), genus2_antipodal(), validate_pmc([])], ids=str)
def test_basis_matches_brute_force(pmc):
    basis = enumerate_basis(pmc)
    assert len(basis) == len(set(basis))
    assert set(basis) == brute_basis(pmc)
    assert basis == sorted(basis, key=lambda s: s.sort_key())


def test_torus_weights():
    groups = basis_by_weight(T)
    assert {w: len(v) for w, v in groups.items()} == {0: 1, 1: 8, 2: 7}
    assert set(groups[1]) == {t(h=[1]), t(h=[2]), t((1, 2)), t((2, 3)), t((3, 4)), t((1, 3)), t((2, 4)), t((1, 4))}


def test_idempotents_of_terms():
    assert left_idem(T, t((2, 3))) == {2} and right_idem(T, t((2, 3))) == {1}
    assert left_idem(T, t(h=[1])) == right_idem(T, t(h=[1])) == {1}
    assert left_idem(T, t((1, 3))) == right_idem(T, t((1, 3))) == {1}


def test_torus_products():
    assert el(t((1, 3))) * el(t((3, 4))) == el(t((1, 4)))
    assert el(t(h=[1])) * el(t(h=[2])) == A.zero()
    assert el(t(h=[1])) * el(t(h=[1])) == el(t(h=[1]))
    assert el(t((2, 3))) * el(t((1, 2))) == A.zero()
    assert el(t((1, 2))) * el(t((2, 4))) == el(t((1, 4)))


def test_double_crossing_vanishes_in_genus_two():
    alg = algebra_for(genus2_antipodal())
    a = alg.term([(1, 4), (2, 3)])
    b = alg.term([(4, 7), (3, 8)])
    assert not multiply_strands(a, b)


def test_differential_examples():
    for term in basis_by_weight(T)[1]:
        assert not differential_strands(el(term))
    assert differential_strands(el(t((1, 4), (2, 3)))) == el(t((1, 3), (2, 4)))
    assert not differential_strands(el(t(h=[1])))


def test_unit_and_idempotents():
    one = unit(T)
    assert one * el(t((1, 3))) == el(t((1, 3))) == el(t((1, 3))) * one
    e = idempotent_element(T, [])
    assert e == el(t()) and e * e == e


def test_circle_mismatch():
    other = algebra_for(genus2_split())
    with pytest.raises(CircleMismatch):
        A.unit() * other.unit()


def test_invalid_term_rejected():
    with pytest.raises(ValueError):
        A.term([(1, 3)], [1])


def test_json_roundtrip():
    x = el(t((1, 4), (2, 3)), t(h=[1, 2]))
    assert element_from_json(A, x.to_json()) == x


# -- an independent product for chord-only terms -----------------------------

def _inv(pairs):
    return sum(1 for (s1, e1), (s2, e2) in combinations(pairs, 2) if (s1 - s2) * (e1 - e2) < 0)


def chord_product(a, b):
    """Concatenate literal chords; zero unless ends meet starts and no crossing is lost."""
    ends = {e: s for s, e in a}
    starts = {s: e for s, e in b}
    if set(ends) != set(starts):
        return None
    glued = [(ends[m], starts[m]) for m in ends]
    if _inv(glued) != _inv(a) + _inv(b):
        return None
    return tuple(sorted(glued))


G2 = genus2_antipodal()
A2 = algebra_for(G2)
CHORD_ONLY = [s for s in A2.basis if not s.horizontals and s.chords]


@settings(max_examples=300, deadline=None)
@given(st.randoms(use_true_random=False))
def test_chord_products_against_concatenation(rng):
    a = rng.choice(CHORD_ONLY)
    ends = {A2.pmc.pair_of(c.end) for c in a.chords}
    partners = [s for s in CHORD_ONLY if {A2.pmc.pair_of(c.start) for c in s.chords} == ends]
    b = rng.choice(partners)
    lit = chord_product([(c.start, c.end) for c in a.chords], [(c.start, c.end) for c in b.chords])
    got = A2.multiply_terms(a, b)
    if lit is None:
        assert not got
    else:
        assert got == {StrandTerm.make(lit, ())}


SPLIT = algebra_for(genus2_split())


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(SPLIT.basis), st.sampled_from(SPLIT.basis))
def test_weight_is_preserved(a, b):
    alg = SPLIT
    for c in alg.multiply_terms(a, b):
        assert c.weight == a.weight == b.weight
    for c in alg.differential_term(a):
        assert c.weight == a.weight


@settings(max_examples=200, deadline=None)
@given(st.lists(st.sampled_from(A.basis), max_size=5), st.lists(st.sampled_from(A.basis), max_size=5),
       st.lists(st.sampled_from(A.basis), max_size=5))
def test_bilinear_and_leibniz_on_sums(xs, ys, zs):
    x, y, z = A.element(xs), A.element(ys), A.element(zs)
    assert x * (y + z) == x * y + x * z
    d = differential_strands
    assert d(x * y) == d(x) * y + x * d(y)
    assert (x * y) * z == x * (y * z)


def test_random_genus_two_leibniz():
    rng = random.Random(3)
    by_left = {}
    for s in A2.basis:
        by_left.setdefault(A2.left_idem(s), []).append(s)
    for _ in range(500):
        a = rng.choice(A2.basis)
        b = rng.choice(by_left[A2.right_idem(a)])
        x, y = A2.element([a]), A2.element([b])
        d = differential_strands
        assert d(x * y) == d(x) * y + x * d(y)

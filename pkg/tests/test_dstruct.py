import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from borfloer.dstruct import (
    ChainComplexF2,
    ChainMismatch,
    FilteredLinearMap,
    IdempotentViolation,
    NonIdempotentEvaluation,
    NotAComplex,
    NotACycle,
    NotStrictlyLower,
    SingularPreservingPart,
    TypeDMorphism,
    TypeDStructure,
    box_tensor_complex,
    check_structure_equation,
    compose,
    compose_via_evaluation,
    g_at_map,
    homology,
    identity_morphism,
    invert_filtered,
    is_bounded,
    is_homotopic,
    mor_complex,
    morphism_from_json,
    structure_from_json,
    yoneda_product,
)
from borfloer.dstruct import mor as mor_module
from borfloer.dstruct.fixtures import (
    broken_pair,
    fork,
    long_arrow,
    loop12,
    random_valid_structures,
    rho,
    shipped_structures,
    single_point,
)
from borfloer.dstruct.gf2 import bits, kernel, rank, solve
from borfloer.dstruct.mor import basis_morphisms, zero_morphism
from borfloer.dstruct.typed import induced_module_check, iterate_delta
from borfloer.pmc import genus2_split, torus
from borfloer.strands import CircleMismatch, StrandTerm

T = torus()


def term(*chords, h=()):
    return StrandTerm.make(chords, h)


def bare(name, idem):
    return TypeDStructure(T, [(name, idem)], [], name)


# -- structures -----------------------------------------------------------------

def test_structure_equation_examples():
    assert check_structure_equation(single_point()).ok
    assert check_structure_equation(loop12()).ok
    rep = check_structure_equation(broken_pair())
    assert not rep.ok
    assert {g: {d: c.sorted_terms() for d, c in r.items()} for g, r in rep.residuals.items()} == {
        "x": {"x": [term((1, 3))]}}


def test_induced_module_agrees():
    for N in shipped_structures() + [broken_pair()]:
        assert induced_module_check(N) == check_structure_equation(N).ok


def test_random_fixtures_agree_with_induced_module():
    rng = random.Random(4)
    from borfloer.dstruct.fixtures import random_structure

    for _ in range(40):
        N = random_structure(rng)
        assert induced_module_check(N) == check_structure_equation(N).ok


def test_idempotent_violation():
    with pytest.raises(IdempotentViolation):
        TypeDStructure(T, [("x", {2}), ("y", {2})], [("x", rho("rho1"), "y")])


def test_boundedness():
    assert (is_bounded(single_point()).bounded, is_bounded(single_point()).depth) == (True, 1)
    for cutoff in (1, 5, 12):
        assert not is_bounded(loop12(), cutoff).bounded
    assert is_bounded(long_arrow()).depth == 2
    words = iterate_delta(loop12(), 3)["x"]
    assert words == {((term((1, 3)),) * 3, "x")}
    with pytest.raises(ValueError):
        is_bounded(loop12(), 0)


def test_structure_json_roundtrip():
    for N in shipped_structures():
        again = structure_from_json(N.to_json(), {"torus": T})
        assert again.to_json() == N.to_json()


# -- Mor complexes ---------------------------------------------------------------

def test_rank_two_fixture():
    M = mor_complex(single_point(), single_point())
    assert [(u, a, v) for u, a, v in M.basis] == [("x", term(h=[1]), "x"), ("x", term((1, 3)), "x")]
    assert M.complex.columns == [0, 0]
    assert homology(M.complex).rank == 2


def test_empty_source_gives_zero_complex():
    empty = TypeDStructure(T, [], [], "empty")
    M = mor_complex(empty, fork())
    assert M.complex.dim == 0 and homology(M.complex).rank == 0


def test_circle_mismatch():
    other = TypeDStructure(genus2_split(), [("z", {1, 3})], [], "other")
    with pytest.raises(CircleMismatch):
        mor_complex(single_point(), other)


@pytest.mark.parametrize("pair", list(itertools.product(shipped_structures(), repeat=2)),
                         ids=lambda p: f"{p[0].name}-{p[1].name}")
def test_box_tensor_matrices_identical(pair):
    N1, N2 = pair
    M = mor_complex(N1, N2)
    B = box_tensor_complex(N1, N2)
    assert B.labels == M.complex.labels and B.columns == M.complex.columns
    assert homology(B).rank == homology(M.complex).rank


def test_compose_example():
    u, v, w = bare("u", {1}), bare("v", {2}), bare("w", {1})
    f = TypeDMorphism(u, v, frozenset([("u", term((1, 2)), "v")]))
    g = TypeDMorphism(v, w, frozenset([("v", term((2, 3)), "w")]))
    assert compose(f, g).entries == {("u", term((1, 3)), "w")}
    assert compose(identity_morphism(u), f) == f == compose(f, identity_morphism(v))
    other = bare("v2", {2})
    h = TypeDMorphism(other, w, frozenset([("v2", term((2, 3)), "w")]))
    with pytest.raises(ChainMismatch):
        compose(f, h)


def test_disjoint_middle_is_zero():
    N = fork()
    f = TypeDMorphism(N, N, frozenset([("x", term(h=[1]), "x")]))
    g = TypeDMorphism(N, N, frozenset([("y", term(h=[2]), "y")]))
    assert not compose(f, g) and not compose_via_evaluation(f, g) and not g_at_map(f, g)


def test_evaluation_must_be_idempotent(monkeypatch):
    N = single_point()
    f = identity_morphism(N)
    monkeypatch.setattr(mor_module, "evaluation", lambda tgt, a, b: N.algebra.term([(1, 3)]))
    with pytest.raises(NonIdempotentEvaluation):
        compose_via_evaluation(f, f)


def _triples(structs):
    return list(itertools.product(structs, repeat=3))


@pytest.mark.parametrize("triple", _triples(shipped_structures()), ids=lambda t: "-".join(n.name for n in t))
def test_composition_identities_on_shipped_fixtures(triple):
    N1, N2, N3 = triple
    M12, M23, M13 = mor_complex(N1, N2), mor_complex(N2, N3), mor_complex(N1, N3)
    for f in basis_morphisms(M12):
        assert compose(identity_morphism(N1), f) == f == compose(f, identity_morphism(N2))
        for g in basis_morphisms(M23):
            c = compose(f, g)
            assert c == compose_via_evaluation(f, g) == g_at_map(f, g)
            assert M13.D(c) == compose(M12.D(f), g) + compose(f, M23.D(g))


def test_associativity_on_fixture_triples():
    Ns = shipped_structures()
    for N1, N2, N3, N4 in itertools.islice(itertools.product(Ns, repeat=4), 0, None, 7):
        for f in basis_morphisms(mor_complex(N1, N2)):
            for g in basis_morphisms(mor_complex(N2, N3)):
                for h in basis_morphisms(mor_complex(N3, N4)):
                    assert compose(compose(f, g), h) == compose(f, compose(g, h))


def test_random_pairs_compose_via_evaluation():
    rng = random.Random(11)
    Ns = shipped_structures()
    done = 0
    while done < 10_000:
        N1, N2, N3 = (rng.choice(Ns) for _ in range(3))
        B12, B23 = basis_morphisms(mor_complex(N1, N2)), basis_morphisms(mor_complex(N2, N3))
        for _ in range(200):
            f, g = rng.choice(B12), rng.choice(B23)
            assert compose(f, g) == compose_via_evaluation(f, g) == g_at_map(f, g)
            done += 1


RANDOM = random_valid_structures(60, seed=7)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(RANDOM), st.sampled_from(RANDOM), st.sampled_from(RANDOM), st.randoms(use_true_random=False))
def test_random_fixture_properties(N1, N2, N3, rng):
    M12, M23, M13 = mor_complex(N1, N2), mor_complex(N2, N3), mor_complex(N1, N3)
    for M, (a, b) in ((M12, (N1, N2)), (M13, (N1, N3))):
        assert M.complex.squares_to_zero()
        assert box_tensor_complex(a, b).columns == M.complex.columns
    f = M12.morphism(rng.getrandbits(M12.complex.dim) if M12.complex.dim else 0)
    g = M23.morphism(rng.getrandbits(M23.complex.dim) if M23.complex.dim else 0)
    c = compose(f, g)
    assert c == compose_via_evaluation(f, g) == g_at_map(f, g)
    assert M13.D(c) == compose(M12.D(f), g) + compose(f, M23.D(g))


# -- homology, Yoneda, homotopy --------------------------------------------------

def test_homology_small_complexes():
    assert homology(ChainComplexF2(list("abc"), [0, 0, 0])).rank == 3
    assert homology(ChainComplexF2(["x", "y"], [0b10, 0])).rank == 0
    with pytest.raises(NotAComplex):
        homology(ChainComplexF2(["x", "y"], [0b10, 0b10]))


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 9), st.randoms(use_true_random=False))
def test_homology_rank_nullity(n, rng):
    # D = P Q with Q P = 0 built from a random split
    k = rng.randint(0, n)
    cols = [0] * n
    src = list(range(k))
    tgt = list(range(k, n))
    for j in src:
        cols[j] = sum(1 << t for t in tgt if rng.random() < 0.5)
    C = ChainComplexF2(list(range(n)), cols)
    H = homology(C)
    assert H.rank == n - 2 * rank(cols)
    for z in kernel(cols):
        assert C.d(z) == 0


def test_solve_and_bits():
    cols = [0b011, 0b110]
    assert solve(cols, 0b101) == 0b11
    assert solve(cols, 0b001) is None
    assert bits(0b1011) == [0, 1, 3]


def test_yoneda_products():
    N = single_point()
    M = mor_complex(N, N)
    unit, r12 = basis_morphisms(M)
    assert yoneda_product(M, unit, M, r12, M) == r12
    assert yoneda_product(M, identity_morphism(N), M, r12, M) == r12
    N2 = fork()
    M2 = mor_complex(N2, N2)
    H2 = homology(M2.complex)
    boundary = M2.morphism(M2.complex.columns[0])
    cycle = M2.morphism(H2.representatives[0])
    assert not yoneda_product(M2, boundary, M2, cycle, M2)
    not_cycle = next(b for b in basis_morphisms(M2) if M2.D(b))
    with pytest.raises(NotACycle):
        yoneda_product(M2, not_cycle, M2, cycle, M2)


def test_yoneda_is_well_defined():
    rng = random.Random(2)
    Ns = shipped_structures()
    for N1, N2, N3 in itertools.product(Ns, repeat=3):
        M12, M23, M13 = mor_complex(N1, N2), mor_complex(N2, N3), mor_complex(N1, N3)
        H12, H23 = homology(M12.complex), homology(M23.complex)
        for r in H12.representatives:
            for s in H23.representatives:
                base = yoneda_product(M12, M12.morphism(r), M23, M23.morphism(s), M13)
                dr = M12.complex.d(rng.getrandbits(M12.complex.dim)) if M12.complex.dim else 0
                ds = M23.complex.d(rng.getrandbits(M23.complex.dim)) if M23.complex.dim else 0
                moved = yoneda_product(M12, M12.morphism(r ^ dr), M23, M23.morphism(s ^ ds), M13)
                assert moved == base


def test_homotopy_solving():
    N = fork()
    M = mor_complex(N, N)
    f = identity_morphism(N)
    assert is_homotopic(M, f, f) == zero_morphism(N, N)
    rng = random.Random(5)
    for _ in range(20):
        h0 = M.morphism(rng.getrandbits(M.complex.dim))
        g = f + M.D(h0)
        h = is_homotopic(M, f, g)
        assert h is not None and M.D(h) == M.D(h0)
    H = homology(M.complex)
    for r in H.representatives:
        assert is_homotopic(M, M.morphism(r), zero_morphism(N, N)) is None


def test_homotopy_is_transitive():
    N = long_arrow()
    M = mor_complex(N, N)
    rng = random.Random(9)
    f = identity_morphism(N)
    g = f + M.D(M.morphism(rng.getrandbits(M.complex.dim)))
    k = g + M.D(M.morphism(rng.getrandbits(M.complex.dim)))
    h1, h2 = is_homotopic(M, f, g), is_homotopic(M, g, k)
    assert M.D(h1 + h2) == f + k


def test_morphism_json_roundtrip():
    N = fork()
    f = identity_morphism(N)
    assert morphism_from_json(f.to_json(), N, N) == f


# -- filtered inversion ----------------------------------------------------------

def test_identity_inverts_to_identity():
    F = FilteredLinearMap(np.eye(5, dtype=np.uint8), [0, 1, 2, 3, 4])
    assert np.array_equal(invert_filtered(F), np.eye(5, dtype=np.uint8))


def test_unipotent_inverse_is_geometric_series():
    n = 64
    rng = np.random.default_rng(1)
    N = np.triu(rng.integers(0, 2, (n, n)), 1).astype(np.uint8)
    F = FilteredLinearMap(np.eye(n, dtype=np.uint8) ^ N, list(range(n)))
    total = np.eye(n, dtype=np.int64)
    power = np.eye(n, dtype=np.int64)
    for _ in range(n):
        power = (power @ N) % 2
        total = (total + power) % 2
    assert np.array_equal(invert_filtered(F), total.astype(np.uint8))


def test_singular_preserving_part():
    with pytest.raises(SingularPreservingPart):
        invert_filtered(FilteredLinearMap(np.array([[1, 1], [1, 1]]), [0, 0]))


def test_raising_entry_rejected():
    with pytest.raises(NotStrictlyLower):
        invert_filtered(FilteredLinearMap(np.array([[1, 0], [1, 1]]), ["0", "1/2"]))

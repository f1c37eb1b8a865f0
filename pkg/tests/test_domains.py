import copy
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from borfloer.azdiag import build_at, offset_family
from borfloer.azdiag.model import Region
from borfloer.domains import (
    BasepointRegionTouched,
    Domain,
    PatternInvalid,
    brute_force_triangle_domains,
    corner_weight,
    enumerate_positive_triangle_domains,
    euler_measure,
    index_data,
    interior_vertices,
    kernel_dimension,
    polygon_index,
    region_euler,
    region_euler_polygon,
    satisfies_pattern,
    triangle_patterns,
    verify_triangle_lemma,
)
from borfloer.pmc import genus2_split, torus, validate_pmc

T = torus()
M = build_at(T)
FREE = [r.id for r in M.regions if not r.basepoint]


def test_corner_weights():
    assert [corner_weight(a) for a in (30, 60, 90, 120, 150)] == [
        Fraction(1, 6), Fraction(1, 12), 0, Fraction(-1, 12), Fraction(-1, 6)]


@pytest.mark.parametrize("angles, want", [((60,) * 3, Fraction(1, 4)), ((90,) * 4, 0), ((120,) * 6, Fraction(-1, 2))])
def test_polygon_measures(angles, want):
    r = Region(0, [0], [(i, a) for i, a in enumerate(angles)])
    assert region_euler(r) == want == region_euler_polygon(r)


def test_flat_rectangle_matches_chi_formula():
    r = Region(0, [0], [(i, 90) for i in range(4)])
    assert region_euler(r) == 1 - Fraction(4, 4)


@pytest.mark.parametrize("pmc", [T, genus2_split()], ids=str)
def test_corner_sum_agrees_with_polygon_formula(pmc):
    m = build_at(pmc)
    polys = [r for r in m.regions if r.is_polygon]
    assert polys
    for r in polys:
        assert region_euler(r) == region_euler_polygon(r), r.id


def test_index_formula():
    assert polygon_index(1, 2, 1, Fraction(1, 4), 0) == 0
    assert polygon_index(1, 2, 1, Fraction(1, 4), 1) == 1
    for g in range(1, 4):
        for chi in range(-2, g + 1):
            for m in range(3):
                assert polygon_index(g, 2, chi, Fraction(g, 4), m) == g - chi + m


def test_basepoint_region_rejected():
    (b,) = M.basepoint_regions
    with pytest.raises(BasepointRegionTouched):
        euler_measure(Domain.from_dict(M, {b: 1}))


vectors = st.lists(st.integers(-3, 3), min_size=len(FREE), max_size=len(FREE))


def _domain(vals):
    return Domain.from_dict(M, dict(zip(FREE, vals)))


@settings(max_examples=200, deadline=None)
@given(vectors, vectors)
def test_euler_measure_is_additive(a, b):
    d1, d2 = _domain(a), _domain(b)
    assert euler_measure(d1 + d2) == euler_measure(d1) + euler_measure(d2)


def nullspace(rows, ncols):
    """Rational nullspace by Gauss-Jordan elimination."""
    rows = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        rows[r] = [x / rows[r][c] for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -rows[i][free]
        basis.append(v)
    return basis


def _relations(model):
    rows = []
    for v in interior_vertices(model):
        row = [0] * len(model.regions)
        for rid, ang in v.quadrants:
            row[rid] += 1 if ang == 60 else -1
        rows.append(row)
    for b in model.basepoint_regions:
        rows.append([1 if i == b else 0 for i in range(len(model.regions))])
    return rows


KERNEL = nullspace(_relations(M), len(M.regions))


def test_kernel_dimension():
    assert len(KERNEL) == kernel_dimension(M)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-2, 2), min_size=len(KERNEL), max_size=len(KERNEL)))
def test_cornerless_domains_have_zero_measure(coeffs):
    # vertex relations vanish everywhere and the basepoint region is empty
    vec = [sum(c * v[i] for c, v in zip(coeffs, KERNEL)) for i in range(len(M.regions))]
    scale = math.lcm(*(x.denominator for x in vec))
    vec = [int(x * scale) for x in vec]
    d = Domain(M, tuple(vec))
    assert satisfies_pattern(d, ())
    assert euler_measure(d) == 0


def test_cap_zero_is_empty():
    for pat in triangle_patterns(M)[:20]:
        assert enumerate_positive_triangle_domains(M, pat, 0) == []


def test_small_triangles_realise_their_own_pattern():
    found = 0
    for r in M.regions:
        if r.basepoint or sorted(a for _, a in r.corners) != [60, 60, 60]:
            continue
        corners = tuple(sorted(v for v, _ in r.corners))
        if any(M.vertices[v].kind != "interior" for v in corners):
            continue
        fams = {M.vertex_families(M.vertices[v]) for v in corners}
        if len(fams) != 3:
            continue
        d = Domain.from_dict(M, {r.id: 1}, corners)
        assert satisfies_pattern(d, corners)
        assert d.multiplicities in [x.multiplicities for x in enumerate_positive_triangle_domains(M, corners, 1)]
        found += 1
    assert found >= 3


def test_pattern_validation():
    crossing = interior_vertices(M)[0].id
    with pytest.raises(PatternInvalid):
        enumerate_positive_triangle_domains(M, (crossing,), 2)
    with pytest.raises(PatternInvalid):
        enumerate_positive_triangle_domains(M, (10_000, 1, 2), 2)


def test_every_domain_satisfies_its_pattern():
    for pat in triangle_patterns(M):
        for d in enumerate_positive_triangle_domains(M, pat, 4):
            assert d.is_positive and satisfies_pattern(d, pat)
            assert max(d.multiplicities) <= 4


def test_boundary_corners_cancel():
    for pat in triangle_patterns(M):
        for d in enumerate_positive_triangle_domains(M, pat, 4):
            assert euler_measure(d) == euler_measure(d, include_boundary=False)


def test_lattice_matches_brute_force_at_cap_two():
    brute = brute_force_triangle_domains(M, 2)
    for pat in triangle_patterns(M):
        lat = sorted(d.multiplicities for d in enumerate_positive_triangle_domains(M, pat, 2))
        assert lat == sorted(d.multiplicities for d in brute.get(pat, [])), pat


def test_lemma_passes_at_cap_four():
    rep = verify_triangle_lemma(M, 4)
    assert rep.passed and rep.euler_values == ["1/4"]
    out = rep.to_json()
    assert out["all_euler_g_over_4"] and out["witness"] is None
    assert out["domains_checked"] == 82 and out["boundary_touching"] == 64


def test_census_is_offset_stable():
    other = build_at(T, offset_family(T, "1/500", "7/10000"))
    a, b = verify_triangle_lemma(M, 4), verify_triangle_lemma(other, 4)
    assert (a.domains, a.boundary_touching, a.euler_values) == (b.domains, b.boundary_touching, b.euler_values)


def test_vacuous_cases():
    assert verify_triangle_lemma(M, 0).to_json()["domains_checked"] == 0
    empty = verify_triangle_lemma(build_at(validate_pmc([])), 4)
    assert empty.passed and empty.domains == 0


def test_index_data():
    pat = triangle_patterns(M)
    d = next(d for p in pat for d in enumerate_positive_triangle_domains(M, p, 4))
    data = index_data(d, chi_S=1, m=0)
    assert data.euler_measure == Fraction(1, 4) and data.index == 0


def test_fault_injection_fails_with_witness():
    bad = copy.deepcopy(M)
    used = {int(r) for p in triangle_patterns(M) for d in enumerate_positive_triangle_domains(M, p, 1)
            for r in d.to_json()["multiplicities"]}
    rid = min(used)
    vid, ang = bad.regions[rid].corners[0]
    bad.regions[rid].corners[0] = (vid, 90 if ang != 90 else 60)
    out = verify_triangle_lemma(bad, 4)
    assert out.status == "FAIL"
    assert out.witness is not None and str(rid) in out.witness["domain"]["multiplicities"]

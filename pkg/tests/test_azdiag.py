import json
from collections import Counter
from pathlib import Path

import pytest

from borfloer.azdiag import (
    DegenerateOffsets,
    FaceMismatch,
    InvalidCircle,
    at_face_generators,
    at_triangle_product,
    az_action_left,
    az_action_right,
    az_differential,
    az_generators,
    build_at,
    build_az,
    generator_of,
    offset_family,
)
from borfloer.azdiag.triangle import generator_for_strand
from borfloer.checks import check_at, check_az, standard_offset_families
from borfloer.pmc import PointedMatchedCircle, genus2_split, reverse_orientation, torus, validate_pmc
from borfloer.strands import StrandTerm, algebra_for

GOLDEN = Path(__file__).parent / "golden"
T = torus()


def t(*chords, h=()):
    return StrandTerm.make(chords, h)


def strands(gens):
    return {g.to_strand() for g in gens}


# -- AZ -------------------------------------------------------------------------

def test_az_torus_shape():
    m = build_az(T)
    fams = Counter(a.family for a in m.arcs)
    assert fams == {"alpha": 2, "beta": 2}
    gens = az_generators(m)
    assert len(gens) == 16
    assert Counter(len(g.points) for g in gens) == {0: 1, 1: 8, 2: 7}
    assert sorted(strands(gens), key=lambda s: s.sort_key()) == algebra_for(T).basis


def test_az_point_readout():
    m = build_az(T)
    (v,) = [v for v in m.vertices if v.coords == (1, 2)]
    assert v.label == "[1,3]"
    assert generator_of(T, t((1, 3))).points == ((1, 3),)


def test_az_genus_zero():
    m = build_az(validate_pmc([]))
    assert m.arcs == []
    (g,) = az_generators(m)
    assert g.to_strand() == t()
    assert not az_differential(g)


def test_az_rejects_non_circles():
    with pytest.raises(InvalidCircle):
        build_az(PointedMatchedCircle((1, 1, 2, 2)))


def test_az_differential_example():
    x = generator_of(T, t((1, 4), (2, 3)))
    assert strands(az_differential(x)) == {t((1, 3), (2, 4))}
    assert not az_differential(generator_of(T, t()))


def test_az_actions_examples():
    x = generator_of(T, t((2, 3)))
    assert strands(az_action_left(t((1, 2)), x)) == {t((1, 3))}
    for g in az_generators(build_az(T)):
        s = g.to_strand()
        # weight is additive, so h1 fixes exactly the terms whose left idempotent is {1}
        want = {s} if algebra_for(T).left_idem(s) == {1} else set()
        assert strands(az_action_left(t(h=[1]), g)) == want


def test_az_suite_torus_exhaustive():
    res = check_az(T)
    assert res.passed, res.failure
    assert res.counts == {"generators": 16, "differential": 16, "actions": 256, "bimodule": 4096}


def test_az_suite_genus_two_sampled():
    res = check_az(genus2_split(), action_samples=2000)
    assert res.passed, res.failure
    assert res.counts["generators"] == 688


# -- AT -------------------------------------------------------------------------

def test_at_boundary_and_tree():
    m = build_at(T)
    assert sorted(m.boundary_components) == ["delta", "epsilon", "gamma"]
    (rid,) = m.basepoint_regions
    base = m.regions[rid]
    assert {"gamma", "delta", "epsilon"} <= set(base.boundary)
    assert sorted(leaf for leaf, _ in m.basepoint_leaves) == ["delta", "epsilon", "gamma"]


def test_at_angle_pattern():
    m = build_at(T)
    interior = [v for v in m.vertices if v.kind == "interior"]
    assert len(interior) == 24
    for v in interior:
        angles = [a for _, a in v.quadrants]
        assert sum(angles) == 360
        assert sorted(angles) in ([60, 60, 120, 120], [90, 90, 90, 90])
        assert angles[0] == angles[2] and angles[1] == angles[3]


def test_at_corner_angles_are_multiples_of_thirty():
    for pmc in (T, genus2_split()):
        m = build_at(pmc)
        for r in m.regions:
            for _, ang in r.corners:
                assert ang in (30, 60, 90, 120, 150)


def test_at_non_basepoint_regions_are_discs():
    for pmc in (T, genus2_split()):
        m = build_at(pmc)
        for r in m.regions:
            if not r.basepoint:
                assert r.chi == 1 and not r.band_boundary


def test_zero_offsets_degenerate():
    with pytest.raises(DegenerateOffsets):
        build_at(T, {"g": [0, 0], "e": [0, 0]})
    with pytest.raises(DegenerateOffsets):
        build_at(T, offset_family(T, "1/3", "0"))


def test_triangle_worked_examples():
    m = build_at(T)
    rho = generator_for_strand(m, "gamma-delta", t((1, 3)))
    sigma = generator_for_strand(m, "delta-epsilon", t((3, 4)))
    assert strands(at_triangle_product(rho, sigma)) == {t((1, 4))}
    # in the opposite convention rho23 then rho1 is the product rho1 . rho23
    rho = generator_for_strand(m, "gamma-delta", t((1, 2)))
    sigma = generator_for_strand(m, "delta-epsilon", t((2, 4)))
    assert strands(at_triangle_product(rho, sigma)) == {t((1, 4))}


def test_triangle_idempotents():
    m = build_at(T)
    for p in (1, 2):
        for q in (1, 2):
            r = generator_for_strand(m, "gamma-delta", t(h=[p]))
            s = generator_for_strand(m, "delta-epsilon", t(h=[q]))
            assert strands(at_triangle_product(r, s)) == ({t(h=[p])} if p == q else set())


def test_triangle_face_mismatch():
    m = build_at(T)
    (g,) = [x for x in at_face_generators(m, "gamma-epsilon") if not x.vertices]
    with pytest.raises(FaceMismatch):
        at_triangle_product(g, g)


def test_triangle_all_pairs_all_families():
    fams = standard_offset_families(T)
    fams["fine"] = offset_family(T, "1/100", "1/300")
    res = check_at(T, fams)
    assert res.passed, res.failure
    assert res.counts["products"] == 256 * len(fams)


def test_triangle_product_table_is_offset_independent():
    tables = []
    for offs in standard_offset_families(T).values():
        m = build_at(T, offs)
        table = {}
        for r in at_face_generators(m, "gamma-delta"):
            for s in at_face_generators(m, "delta-epsilon"):
                table[(r.to_strand(), s.to_strand())] = frozenset(strands(at_triangle_product(r, s)))
        tables.append(table)
    assert all(tab == tables[0] for tab in tables)


def test_triangle_genus_two_sampled():
    res = check_at(genus2_split(), {"default": None}, pair_samples=3000)
    assert res.passed, res.failure


def test_products_land_in_reversed_algebra():
    rev = algebra_for(reverse_orientation(T))
    m = build_at(T)
    for r in at_face_generators(m, "gamma-delta"):
        assert r.to_strand() in rev.basis


# -- golden dumps ---------------------------------------------------------------

@pytest.mark.parametrize("kind", ["az", "at"])
def test_golden_model_dumps(kind):
    model = build_az(T) if kind == "az" else build_at(T)
    text = json.dumps(model.to_json(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    assert text == (GOLDEN / f"{kind}_torus.json").read_text()

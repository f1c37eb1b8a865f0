"""Generators of the three face diagrams of AT and the triangle-gluing product.

A crossing of two families is read off from where its two lines meet the top
edge. The face gamma-delta reads [d, g], delta-epsilon reads [e, d] and
gamma-epsilon reads [e, g]; equal ends mean the crossing sits at the glued
edge and stands for a horizontal strand. Readings live in A(Z); strand terms
are reported in A(-Z) through i -> n + 1 - i.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from ..pmc import ReebChord, reverse_orientation
from ..strands import StrandTerm
from .model import PlanarDiagramModel

FACES = {
    "gamma-delta": ("d", "g"),
    "delta-epsilon": ("e", "d"),
    "gamma-epsilon": ("e", "g"),
}


class FaceMismatch(ValueError):
    pass


@dataclass(frozen=True, order=True)
class ATGenerator:
    face: str
    vertices: tuple[int, ...]
    model: PlanarDiagramModel = field(compare=False, repr=False, default=None)

    def to_strand(self) -> StrandTerm:
        return at_to_strand(self)

    def __repr__(self):
        return f"AT[{self.face}]{self.to_strand()!r}"


def _top_x(model: PlanarDiagramModel, line: str) -> Fraction:
    fam, i = line[0], int(line[1:])
    pmc = model.pmc
    p = pmc.pair_of(i)
    sign = 1 if pmc.partner(i) > i else -1
    if fam == "d":
        return Fraction(i)
    return Fraction(i) + sign * Fraction(model.offsets[fam][p - 1])


def reading(model: PlanarDiagramModel, face: str, vid: int) -> tuple[int, int]:
    """Literal (left, right) ends on the top edge of the crossing's triangle."""
    v = model.vertices[vid]
    left_fam, right_fam = FACES[face]
    by_fam = {ln[0]: ln for ln in v.lines}
    left = round(_top_x(model, by_fam[left_fam]))
    right = round(_top_x(model, by_fam[right_fam]))
    return left, right


def face_vertices(model: PlanarDiagramModel, face: str) -> list[int]:
    want = set(FACES[face])
    return [v.id for v in model.vertices if v.kind == "interior" and {ln[0] for ln in v.lines} == want]


def at_face_generators(model: PlanarDiagramModel, face: str) -> list[ATGenerator]:
    """Sets of face crossings using each arc of each family at most once."""
    if face not in FACES:
        raise FaceMismatch(f"unknown face {face!r}")
    verts = face_vertices(model, face)
    out = []
    for size in range(len(model.pmc.pairs) + 1):
        for combo in combinations(verts, size):
            arcs = [a for vid in combo for a in model.vertices[vid].arcs]
            if len(arcs) == len(set(arcs)):
                out.append(ATGenerator(face, tuple(sorted(combo)), model))
    return out


def _reading_z(gen: ATGenerator) -> list[tuple[int, int]]:
    return [reading(gen.model, gen.face, vid) for vid in gen.vertices]


def at_to_strand(gen: ATGenerator) -> StrandTerm:
    pmc = gen.model.pmc
    rev = reverse_orientation(pmc)
    n = pmc.n
    chords, hs = [], []
    for left, right in _reading_z(gen):
        if left == right:
            hs.append(rev.pair_of(n + 1 - left))
        else:
            chords.append(ReebChord(n + 1 - right, n + 1 - left))
    return StrandTerm.make(chords, hs)


def _lookup(model: PlanarDiagramModel, face: str) -> dict:
    pmc = model.pmc
    table = {}
    for vid in face_vertices(model, face):
        left, right = reading(model, face, vid)
        key = ("h", pmc.pair_of(left)) if left == right else (left, right)
        if key in table:
            raise AssertionError(f"two {face} crossings read as {key}")
        table[key] = vid
    return table


def at_triangle_product(rho: ATGenerator, sigma: ATGenerator) -> frozenset[ATGenerator]:
    """Glue the triangles of rho (gamma-delta) and sigma (delta-epsilon).

    sigma's crossing over [b, c] and rho's crossing over [c, a] share their
    delta arc; together with the rectangle between them they fill the
    triangle over [b, a], whose corner is the gamma-epsilon crossing of the
    lines from a and b. The gluing fails when two glued triangles nest so
    that one pair of pieces lies strictly inside the other on both sides.
    """
    if rho.face != "gamma-delta" or sigma.face != "delta-epsilon":
        raise FaceMismatch(f"need gamma-delta then delta-epsilon, got {rho.face}, {sigma.face}")
    if rho.model is not sigma.model:
        raise FaceMismatch("generators come from different models")
    model = rho.model
    pmc = model.pmc

    def delta_arc(vid):
        return next(a for a in model.vertices[vid].arcs if a.startswith("delta"))

    rho_by = {delta_arc(v): reading(model, "gamma-delta", v) for v in rho.vertices}
    sig_by = {delta_arc(v): reading(model, "delta-epsilon", v) for v in sigma.vertices}
    if set(rho_by) != set(sig_by):
        return frozenset()
    paths = []  # literal (b, c, a) per glued triangle
    for arc, (c1, a) in rho_by.items():
        b, c2 = sig_by[arc]
        rho_h, sig_h = c1 == a, b == c2
        if rho_h and sig_h:
            paths.append((b, b, b, True))
        elif rho_h:
            paths.append((b, c2, c2, False))
        elif sig_h:
            paths.append((c1, c1, a, False))
        elif c1 == c2:
            paths.append((b, c1, a, False))
        else:
            return frozenset()
    for (b1, c1, a1, _), (b2, c2, a2, _) in combinations(paths, 2):
        if (b1 < b2 and c2 < c1 and a1 < a2) or (b2 < b1 and c1 < c2 and a2 < a1):
            return frozenset()
    table = _lookup(model, "gamma-epsilon")
    out = []
    for b, c, a, hor in paths:
        key = ("h", pmc.pair_of(b)) if b == a else (b, a)
        out.append(table[key])
    verts = tuple(sorted(out))
    arcs = [x for vid in verts for x in model.vertices[vid].arcs]
    if len(arcs) != len(set(arcs)):
        return frozenset()
    return frozenset({ATGenerator("gamma-epsilon", verts, model)})


def generator_for_strand(model: PlanarDiagramModel, face: str, term: StrandTerm) -> ATGenerator:
    for g in at_face_generators(model, face):
        if g.to_strand() == term:
            return g
    raise KeyError(term)

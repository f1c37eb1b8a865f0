"""The AZ model: the half-diamond x, y >= 0, x + y <= N with N = 4k + 1.

Lines x = i carry the beta arcs and lines y = N - i the alpha arcs, i = 1..n.
The point (s, N - t) with s < t is the chord [s, t]; the diagonal point
(i, N - i) is glued to its partner and stands for the horizontal of its pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import networkx as nx

from ..pmc import PointedMatchedCircle, ReebChord, validate_pmc
from ..strands import StrandTerm, algebra_for
from .model import Arc, InvalidCircle, PlanarDiagramModel, Region, Vertex


@dataclass(frozen=True, order=True)
class DiagramGenerator:
    """A set of intersection points, stored as (s, t) labels.

    (s, t) with s < t is the interior point (s, N - t); (p, p) with p the
    smaller point of a pair is that pair's glued diagonal point.
    """

    points: tuple[tuple[int, int], ...]
    pmc: PointedMatchedCircle = field(compare=False, repr=False, default=None)

    def to_strand(self) -> StrandTerm:
        return to_strand(self)

    def __repr__(self):
        return "Gen" + repr(self.to_strand())


def _check_pmc(pmc) -> PointedMatchedCircle:
    if isinstance(pmc, PointedMatchedCircle):
        try:
            return validate_pmc(pmc.matching, name=pmc.name)
        except ValueError as exc:
            raise InvalidCircle(str(exc)) from exc
    raise InvalidCircle(f"expected a PointedMatchedCircle, got {type(pmc).__name__}")


def _square_id(a: int, b: int) -> str:
    return f"sq{a},{b}"


@lru_cache(maxsize=None)
def build_az(pmc: PointedMatchedCircle) -> PlanarDiagramModel:
    pmc = _check_pmc(pmc)
    n = pmc.n
    N = n + 1
    arcs = []
    for p in pmc.pairs:
        arcs.append(Arc(f"alpha{p}", "alpha", p))
        arcs.append(Arc(f"beta{p}", "beta", p))

    # faces: unit squares below the diagonal and the diagonal cells c_0..c_n
    faces: list[str] = []
    for a in range(N):
        for b in range(N):
            if a + b + 2 <= N:
                faces.append(_square_id(a, b))
    faces += [f"c{i}" for i in range(n + 1)]

    glue = nx.Graph()
    glue.add_nodes_from(faces)
    identifications = []
    for p in pmc.pairs:
        i, j = pmc.points_of(p)
        glue.add_edge(f"c{i}", f"c{j - 1}")
        glue.add_edge(f"c{i - 1}", f"c{j}")
        identifications.append({"pair": p, "points": [i, j], "diagonal": [[i, N - i], [j, N - j]]})
    # the basepoint sits on the diagonal between n and 1; the corner square
    # at the origin is marked together with it
    if n:
        glue.add_edge(f"c{n}", _square_id(0, 0))

    components = sorted((sorted(c, key=faces.index) for c in nx.connected_components(glue)), key=lambda c: faces.index(c[0]))
    region_of = {}
    for rid, comp in enumerate(components):
        for f in comp:
            region_of[f] = rid

    def face_at(a: int, b: int) -> str:
        return _square_id(a, b) if a + b + 2 <= N else f"c{a}"

    vertices = []
    corners: dict[int, list] = {rid: [] for rid in range(len(components))}
    for s in range(1, n + 1):
        for t in range(s, n + 1):
            vid = len(vertices)
            arcs_here = (f"beta{pmc.pair_of(s)}", f"alpha{pmc.pair_of(t)}")
            coords = (Fraction(s), Fraction(N - t))
            if s == t:
                if pmc.partner(s) < s:
                    continue
                vertices.append(Vertex(vid, coords, "glue", arcs_here, label=f"h{pmc.pair_of(s)}"))
                continue
            y = N - t
            quads = [face_at(s, y), face_at(s - 1, y), face_at(s - 1, y - 1), face_at(s, y - 1)]
            qs = [(region_of[f], 90) for f in quads]
            vertices.append(Vertex(vid, coords, "interior", arcs_here, qs, label=f"[{s},{t}]"))
            for rid, ang in qs:
                corners[rid].append((vid, ang))

    base_rid = region_of[f"c{n}"]
    regions = []
    for rid, comp in enumerate(components):
        touched = []
        if any(f.startswith("sq0,") for f in comp):
            touched.append("alpha-boundary")
        if any(f.startswith("sq") and f.endswith(",0") for f in comp):
            touched.append("beta-boundary")
        if any(f.startswith("c") for f in comp):
            touched.append("diagonal")
        regions.append(Region(rid, comp, corners[rid], touched, basepoint=rid == base_rid))
    return PlanarDiagramModel(
        kind="AZ",
        pmc=pmc,
        arcs=arcs,
        vertices=vertices,
        regions=regions,
        identifications=identifications,
        boundary_components=["alpha-boundary", "beta-boundary", "diagonal"],
        basepoint_leaves=[("diagonal", base_rid)],
    )


def _gen(pmc: PointedMatchedCircle, points) -> DiagramGenerator:
    return DiagramGenerator(tuple(sorted(points)), pmc)


def generator_of(pmc: PointedMatchedCircle, term: StrandTerm) -> DiagramGenerator:
    pts = [(c.start, c.end) for c in term.chords]
    for p in term.horizontals:
        a, _ = pmc.points_of(p)
        pts.append((a, a))
    return _gen(pmc, pts)


def to_strand(x: DiagramGenerator) -> StrandTerm:
    chords = [ReebChord(s, t) for s, t in x.points if s < t]
    hs = [x.pmc.pair_of(s) for s, t in x.points if s == t]
    return StrandTerm.make(chords, hs)


def az_generators(model: PlanarDiagramModel) -> list[DiagramGenerator]:
    """All generators: at most one point on each alpha arc and each beta arc."""
    pmc = model.pmc
    n = pmc.n
    out = []

    def rec(s: int, pts: list, beta_used: set, alpha_used: set):
        if s > n:
            out.append(_gen(pmc, pts))
            return
        rec(s + 1, pts, beta_used, alpha_used)
        ps = pmc.pair_of(s)
        if ps in beta_used:
            return
        for t in range(s, n + 1):
            pt = pmc.pair_of(t)
            if pt in alpha_used:
                continue
            if s == t and pmc.partner(s) < s:
                continue  # glued copy already offered at the smaller point
            if s == t:
                pts.append((s, s))
                rec(s + 1, pts, beta_used | {ps}, alpha_used | {pt})
                pts.pop()
                continue
            pts.append((s, t))
            rec(s + 1, pts, beta_used | {ps}, alpha_used | {pt})
            pts.pop()

    rec(1, [], set(), set())
    return sorted(out, key=lambda g: g.to_strand().sort_key())


def _diag_reps(pmc, s: int) -> list[int]:
    return list(pmc.points_of(pmc.pair_of(s)))


def az_differential(x: DiagramGenerator) -> frozenset[DiagramGenerator]:
    """Sum over empty embedded rectangles leaving x.

    A rectangle has x-corners at its lower-left (s1, N-t1) and upper-right
    (s2, N-t2) with s1 < s2 and t2 < t1; the upper-right corner may be either
    copy of a glued diagonal point. Its interior must contain no point of x.
    """
    pmc = x.pmc
    chords = [(s, t) for s, t in x.points if s < t]
    diag = [s for s, t in x.points if s == t]
    corners = [(s, t, (s, t)) for s, t in chords]
    for p in diag:
        for u in _diag_reps(pmc, p):
            corners.append((u, u, (p, p)))
    out: dict[DiagramGenerator, int] = {}
    for s1, t1, key1 in corners:
        if s1 == t1:
            continue  # a diagonal point is never the lower-left corner
        for s2, t2, key2 in corners:
            if key2 == key1 or not (s1 < s2 and t2 < t1):
                continue
            if any(s1 < s < s2 and t2 < t < t1 for s, t in chords):
                continue
            rest = [q for q in x.points if q != key1 and q != key2]
            new = [(s1, t2), (s2, t1)]
            new = [(min(pmc.points_of(pmc.pair_of(a))),) * 2 if a == b else (a, b) for a, b in new]
            y = _gen(pmc, rest + new)
            out[y] = out.get(y, 0) ^ 1
    return frozenset(g for g, c in out.items() if c)


def rectangle_domain(s1: int, t1: int, s2: int, t2: int, N: int) -> list[str]:
    """Unit squares of the rectangle with corners (s1, N-t1) and (s2, N-t2)."""
    return [_square_id(a, b) for a in range(s1, s2) for b in range(N - t1, N - t2)]


def _strands(x: DiagramGenerator):
    """Each point of x as (start, end, is_horizontal)."""
    pmc = x.pmc
    out = []
    for s, t in x.points:
        if s < t:
            out.append((s, t, False))
        else:
            out.append((s, s, True))
    return out


def _inside(px: int, py: int, box) -> bool:
    x0, x1, y0, y1 = box
    return x0 < px < x1 and y0 < py < y1


def az_action_right(x: DiagramGenerator, a: StrandTerm) -> frozenset[DiagramGenerator]:
    """x · a: half-strips running from x to the alpha boundary (x = 0).

    Each chord [t, t'] of a continues the point of x on the alpha arc of t
    (an interior point ending at t, or the diagonal point at t) down to
    height N - t'. The strip [0, s] x [N - t', N - t] may not hold both the
    old and new positions of another moving point strictly inside it.
    """
    pmc = x.pmc
    N = pmc.n + 1
    strands = _strands(x)
    by_end: dict[int, int] = {}
    for idx, (s, t, hor) in enumerate(strands):
        if hor:
            for u in _diag_reps(pmc, s):
                by_end[u] = idx
        else:
            by_end[t] = idx
    moves: dict[int, tuple[int, int, int]] = {}  # strand -> (s, t, t')
    for c in a.chords:
        idx = by_end.get(c.start)
        if idx is None or idx in moves:
            return frozenset()
        s, t, hor = strands[idx]
        s0 = c.start if hor else s
        moves[idx] = (s0, c.start, c.end)
    # everything else must be carried by a horizontal of a on its end pair
    leftover = sorted(pmc.pair_of(s if hor else t) for idx, (s, t, hor) in enumerate(strands) if idx not in moves)
    if leftover != sorted(a.horizontals):
        return frozenset()
    boxes = {idx: (0, s0, N - t2, N - t1) for idx, (s0, t1, t2) in moves.items()}
    positions = []
    for idx, (s, t, hor) in enumerate(strands):
        if idx in moves:
            s0, t1, t2 = moves[idx]
            positions.append((idx, (s0, N - t1), (s0, N - t2)))
        else:
            positions.append((idx, (s, N - t), (s, N - t)))
    for j, box in boxes.items():
        for i, p, q in positions:
            if i != j and _inside(*p, box) and _inside(*q, box):
                return frozenset()
    pts = []
    for idx, (s, t, hor) in enumerate(strands):
        if idx in moves:
            s0, _, t2 = moves[idx]
            pts.append((s0, t2))
        else:
            pts.append((s, t))
    return frozenset({_gen(pmc, pts)})


def az_action_left(a: StrandTerm, x: DiagramGenerator) -> frozenset[DiagramGenerator]:
    """a · x: half-strips running from x to the beta boundary (y = 0)."""
    pmc = x.pmc
    strands = _strands(x)
    N = pmc.n + 1
    by_start: dict[int, int] = {}
    for idx, (s, t, hor) in enumerate(strands):
        if hor:
            for u in _diag_reps(pmc, s):
                by_start[u] = idx
        else:
            by_start[s] = idx
    moves: dict[int, tuple[int, int, int]] = {}  # strand -> (s', s, t)
    for c in a.chords:
        idx = by_start.get(c.end)
        if idx is None or idx in moves:
            return frozenset()
        s, t, hor = strands[idx]
        moves[idx] = (c.start, c.end, c.end if hor else t)
    leftover = sorted(pmc.pair_of(s) for idx, (s, t, hor) in enumerate(strands) if idx not in moves)
    if leftover != sorted(a.horizontals):
        return frozenset()
    boxes = {idx: (s1, s2, 0, N - t) for idx, (s1, s2, t) in moves.items()}
    positions = []
    for idx, (s, t, hor) in enumerate(strands):
        if idx in moves:
            s1, s2, t0 = moves[idx]
            positions.append((idx, (s2, N - t0), (s1, N - t0)))
        else:
            positions.append((idx, (s, N - t), (s, N - t)))
    for j, box in boxes.items():
        for i, p, q in positions:
            if i != j and _inside(*p, box) and _inside(*q, box):
                return frozenset()
    pts = []
    for idx, (s, t, hor) in enumerate(strands):
        if idx in moves:
            s1, _, t0 = moves[idx]
            pts.append((s1, t0))
        else:
            pts.append((s, t))
    return frozenset({_gen(pmc, pts)})


def act_sum(gens, fn) -> frozenset[DiagramGenerator]:
    """Apply fn to each generator of an F2-sum and add the results."""
    out: dict = {}
    for g in gens:
        for h in fn(g):
            out[h] = out.get(h, 0) ^ 1
    return frozenset(g for g, c in out.items() if c)


def strand_sum(gens) -> frozenset[StrandTerm]:
    return frozenset(to_strand(g) for g in gens)


def algebra_of_model(model: PlanarDiagramModel):
    return algebra_for(model.pmc)

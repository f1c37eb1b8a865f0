"""The AT model: three line families in the square, glued along the top edge.

Coordinates are exact rationals in the frame (x, w) with w = sqrt(3) (y - N):
the 30 and 150 degree lines become the diagonals w = x - c and w = c - x.
The bottom edge is placed at w = -2N; only the d-lines reach it and every
crossing has w > -N, so the combinatorics are those of the true square.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import networkx as nx

from ..pmc import PointedMatchedCircle
from .az import _check_pmc
from .model import Arc, PlanarDiagramModel, Region, Vertex

GLUE_RADIUS = Fraction(1, 4)
FAMILY_OF = {"g": "gamma", "d": "delta", "e": "epsilon"}


class DegenerateOffsets(ValueError):
    pass


def default_offsets(pmc: PointedMatchedCircle) -> dict:
    return {
        "g": [Fraction(p, 1000) for p in pmc.pairs],
        "e": [Fraction(p, 1000) + Fraction(3, 10000) for p in pmc.pairs],
    }


def offset_family(pmc: PointedMatchedCircle, scale, shift, g_sign: int = 1) -> dict:
    """Offsets g_p = scale * p and e_p = scale * p + shift."""
    scale, shift = Fraction(scale), Fraction(shift)
    return {
        "g": [g_sign * scale * p for p in pmc.pairs],
        "e": [scale * p + shift for p in pmc.pairs],
    }


def _normalize_offsets(pmc, offsets) -> dict:
    if offsets is None:
        offsets = default_offsets(pmc)
    out = {}
    for key in ("g", "e"):
        vals = offsets.get(key)
        if vals is None or len(vals) != len(pmc.pairs):
            raise DegenerateOffsets(f"need {len(pmc.pairs)} {key}-offsets, one per pair")
        out[key] = [Fraction(str(v)) if isinstance(v, float) else Fraction(v) for v in vals]
    for key, vals in out.items():
        for v in vals:
            if v == 0:
                raise DegenerateOffsets(f"zero {key}-offset leaves a triple point unresolved")
            if abs(v) >= GLUE_RADIUS:
                raise DegenerateOffsets(f"{key}-offset {v} reaches outside the glued interval")
    return out


# -- direction bookkeeping ---------------------------------------------------

def true_angle(dx: Fraction, dw: Fraction) -> int:
    """Angle in degrees of a sheared direction, measured in the true plane."""
    if dw == 0:
        return 0 if dx > 0 else 180
    if dx == 0:
        return 90 if dw > 0 else 270
    if dx == dw:
        return 30 if dx > 0 else 210
    if dx == -dw:
        return 150 if dw > 0 else 330
    raise ValueError(f"unexpected direction ({dx}, {dw})")


@dataclass
class _Segment:
    name: str  # literal line ("g3") or square edge ("left", "top", ...)
    p: tuple[Fraction, Fraction]
    q: tuple[Fraction, Fraction]

    @property
    def is_line(self) -> bool:
        return self.name[0] in "gde" and self.name[1:].isdigit()


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


def _intersect(s: _Segment, t: _Segment):
    (x1, y1), (x2, y2) = s.p, s.q
    (x3, y3), (x4, y4) = t.p, t.q
    dx1, dy1 = x2 - x1, y2 - y1
    dx2, dy2 = x4 - x3, y4 - y3
    den = _cross(dx1, dy1, dx2, dy2)
    if den == 0:
        return None
    u = _cross(x3 - x1, y3 - y1, dx2, dy2) / den
    v = _cross(x3 - x1, y3 - y1, dx1, dy1) / den
    if 0 <= u <= 1 and 0 <= v <= 1:
        return (x1 + u * dx1, y1 + u * dy1)
    return None


def _on_segment(s: _Segment, pt) -> bool:
    (x1, y1), (x2, y2) = s.p, s.q
    if _cross(x2 - x1, y2 - y1, pt[0] - x1, pt[1] - y1) != 0:
        return False
    return min(x1, x2) <= pt[0] <= max(x1, x2) and min(y1, y2) <= pt[1] <= max(y1, y2)


def _line_segments(pmc: PointedMatchedCircle, offs: dict) -> list[_Segment]:
    n = pmc.n
    N = Fraction(n + 1)
    segs = []
    for i in range(1, n + 1):
        p = pmc.pair_of(i)
        sign = 1 if pmc.partner(i) > i else -1
        og = sign * offs["g"][p - 1]
        oe = sign * offs["e"][p - 1]
        # the partner side is the image under x -> i + j - x, so its offsets flip
        segs.append(_Segment(f"g{i}", (Fraction(0), -i - og), (i + og, Fraction(0))))
        segs.append(_Segment(f"d{i}", (Fraction(i), Fraction(0)), (Fraction(i), -2 * N)))
        segs.append(_Segment(f"e{i}", (i + oe, Fraction(0)), (N, i + oe - N)))
    return segs


@lru_cache(maxsize=64)
def _build_at_cached(pmc: PointedMatchedCircle, key: tuple) -> PlanarDiagramModel:
    offs = {"g": list(key[0]), "e": list(key[1])}
    return _build(pmc, offs)


def build_at(pmc: PointedMatchedCircle, offsets: dict | None = None) -> PlanarDiagramModel:
    pmc = _check_pmc(pmc)
    offs = _normalize_offsets(pmc, offsets)
    return _build_at_cached(pmc, (tuple(offs["g"]), tuple(offs["e"])))


def _build(pmc: PointedMatchedCircle, offs: dict) -> PlanarDiagramModel:
    n = pmc.n
    N = Fraction(n + 1)
    B = -2 * N
    zero = Fraction(0)
    lines = _line_segments(pmc, offs)
    edges = [
        _Segment("left", (zero, B), (zero, zero)),
        _Segment("bottom", (zero, B), (N, B)),
        _Segment("right", (N, B), (N, zero)),
        _Segment("top", (zero, zero), (N, zero)),
    ]

    # band ends on the top edge
    seam_ends = []
    for i in range(1, n + 1):
        seam_ends += [i - GLUE_RADIUS, i + GLUE_RADIUS]

    # points on each segment
    on: dict[int, set] = defaultdict(set)
    allsegs = lines + edges
    for idx, s in enumerate(allsegs):
        on[idx].update([s.p, s.q])
    crossings: dict[tuple, set] = defaultdict(set)
    for (a, s), (b, t) in combinations(enumerate(lines), 2):
        pt = _intersect(s, t)
        if pt is None:
            continue
        if pt[1] == 0:
            raise DegenerateOffsets(f"{s.name} and {t.name} meet on the glued edge")
        if pt[1] < 0:
            if pt[0] <= 0 or pt[0] >= N:
                raise DegenerateOffsets(f"{s.name} and {t.name} meet on the square boundary")
            crossings[pt].update([s.name, t.name])
            on[a].add(pt)
            on[b].add(pt)
    for pt, names in crossings.items():
        if len(names) > 2:
            raise DegenerateOffsets(f"unresolved triple point of {sorted(names)} at {pt}")
    top_idx = len(lines) + 3
    for x in seam_ends:
        on[top_idx].add((x, zero))
    for idx, s in enumerate(lines):
        for end in (s.p, s.q):
            for eidx, e in enumerate(edges):
                if _on_segment(e, end):
                    on[len(lines) + eidx].add(end)
        top_x = s.q[0] if s.name[0] == "g" else s.p[0]
        i = int(s.name[1:])
        if abs(top_x - i) >= GLUE_RADIUS:
            raise DegenerateOffsets(f"{s.name} leaves the glued interval at {i}")

    # planar graph
    seg_of_edge: dict[frozenset, str] = {}
    adj: dict[tuple, set] = defaultdict(set)
    for idx, s in enumerate(allsegs):
        pts = sorted(on[idx], key=lambda p: ((p[0] - s.p[0]) ** 2 + (p[1] - s.p[1]) ** 2))
        for u, v in zip(pts, pts[1:]):
            adj[u].add(v)
            adj[v].add(u)
            seg_of_edge[frozenset((u, v))] = s.name

    def ang(u, v) -> int:
        return true_angle(v[0] - u[0], v[1] - u[1])

    order = {v: sorted(nb, key=lambda w: ang(v, w)) for v, nb in adj.items()}

    # faces, each traversed with the face on the left
    face_of: dict[tuple, int] = {}
    faces: list[list[tuple]] = []
    for u in sorted(adj):
        for v in order[u]:
            if (u, v) in face_of:
                continue
            fid = len(faces)
            cycle = []
            a, b = u, v
            while (a, b) not in face_of:
                face_of[(a, b)] = fid
                cycle.append((a, b))
                nb = order[b]
                k = nb.index(a)
                c = nb[(k - 1) % len(nb)]
                a, b = b, c
            faces.append(cycle)

    def area2(cycle):
        return sum(_cross(a[0], a[1], b[0], b[1]) for a, b in cycle)

    outer = [fid for fid, cyc in enumerate(faces) if area2(cyc) < 0]
    assert len(outer) == 1, outer
    outer = outer[0]

    # vertices
    vid_of: dict[tuple, int] = {}
    vertices: list[Vertex] = []
    edge_names = {"left", "bottom", "right", "top"}
    for pt in sorted(adj, key=lambda p: (-p[1], p[0])):
        through = sorted({seg_of_edge[frozenset((pt, w))] for w in adj[pt]})
        lns = tuple(sorted(s for s in through if s not in edge_names))
        if pt in crossings:
            kind = "interior"
        elif lns and pt[1] == 0:
            kind = "glue"
        elif lns:
            kind = "boundary"
        elif pt[1] == 0 and pt[0] in seam_ends:
            kind = "band_end"
        else:
            kind = "corner"
        arcs = tuple(f"{FAMILY_OF[s[0]]}{pmc.pair_of(int(s[1:]))}" for s in lns)
        vid = len(vertices)
        vid_of[pt] = vid
        vertices.append(Vertex(vid, pt, kind, arcs, label="x".join(lns), lines=lns))

    # glue faces across the seam pieces
    glue = nx.Graph()
    inner = [fid for fid in range(len(faces)) if fid != outer]
    glue.add_nodes_from(inner)

    def seam_of(x) -> int | None:
        for i in range(1, n + 1):
            if i - GLUE_RADIUS <= x <= i + GLUE_RADIUS:
                return i
        return None

    top_face: dict[tuple, int] = {}
    free_faces = set()
    for u, v in face_of:
        if u[1] == 0 and v[1] == 0 and u[0] > v[0] and face_of[(u, v)] != outer:
            mid = (u[0] + v[0]) / 2
            i = seam_of(mid)
            if i is None:
                free_faces.add(face_of[(u, v)])
            else:
                top_face[(v[0], u[0])] = face_of[(u, v)]
    identifications = []
    glued_pairs = []
    for p in pmc.pairs:
        i, j = pmc.points_of(p)
        for (a, b), f in sorted(top_face.items()):
            if seam_of((a + b) / 2) != i:
                continue
            image = (i + j - b, i + j - a)
            if image not in top_face:
                raise DegenerateOffsets(f"seam piece {a}..{b} has no partner at {j}")
            g = top_face[image]
            glue.add_edge(f, g)
            glued_pairs.append((f, g))
            identifications.append({"pair": p, "piece": [str(a), str(b)], "partner": [str(image[0]), str(image[1])]})

    # the two handles join the faces at the three marked corners
    corner_pts = [(zero, B), (N, B), (N, zero)]

    def face_at_corner(pt):
        for (a, b), fid in face_of.items():
            if b == pt and fid != outer:
                return fid
        raise AssertionError(pt)

    base_faces = [face_at_corner(pt) for pt in corner_pts]
    glue.add_edge(base_faces[0], base_faces[1])
    glue.add_edge(base_faces[1], base_faces[2])

    comps = sorted((sorted(c) for c in nx.connected_components(glue)), key=lambda c: c[0])
    region_of = {}
    for rid, comp in enumerate(comps):
        for f in comp:
            region_of[f] = rid

    def corner_angle(fid: int, k: int) -> tuple[tuple, int]:
        a, b = faces[fid][k]
        _, c = faces[fid][(k + 1) % len(faces[fid])]
        theta = (ang(b, a) - ang(b, c)) % 360
        return b, theta or 360

    regions = []
    for rid, comp in enumerate(comps):
        corners = []
        boundary = set()
        for f in comp:
            for k in range(len(faces[f])):
                pt, theta = corner_angle(f, k)
                if theta != 180 and vertices[vid_of[pt]].kind not in ("glue", "band_end"):
                    corners.append((vid_of[pt], theta))
            for u, v in faces[f]:
                name = seg_of_edge[frozenset((u, v))]
                if name == "left" or (name == "top" and f in free_faces):
                    boundary.add("gamma")
                elif name == "bottom":
                    boundary.add("delta")
                elif name == "right":
                    boundary.add("epsilon")
        n_glued = sum(1 for f, g in glued_pairs if region_of[f] == rid)
        is_base = base_faces[0] in comp
        regions.append(
            Region(
                rid,
                comp,
                sorted(corners),
                sorted(boundary),
                basepoint=is_base,
                chi=len(comp) - n_glued,
                band_boundary=any(f in free_faces for f in comp),
            )
        )

    for v in vertices:
        if v.kind != "interior":
            continue
        pt = v.coords
        nb = order[pt]
        quads = []
        for k, w in enumerate(nb):
            nxt = nb[(k + 1) % len(nb)]
            theta = (ang(pt, nxt) - ang(pt, w)) % 360
            quads.append((region_of[face_of[(pt, w)]], theta))
        v.quadrants = quads

    arcs = []
    for fam in ("g", "d", "e"):
        for p in pmc.pairs:
            arcs.append(Arc(f"{FAMILY_OF[fam]}{p}", FAMILY_OF[fam], p))
    base_rid = region_of[base_faces[0]]
    return PlanarDiagramModel(
        kind="AT",
        pmc=pmc,
        arcs=arcs,
        vertices=vertices,
        regions=regions,
        identifications=identifications,
        boundary_components=["gamma", "delta", "epsilon"],
        basepoint_leaves=[(b, base_rid) for b in ("gamma", "delta", "epsilon") if b in regions[base_rid].boundary],
        offsets={k: [str(x) for x in v] for k, v in offs.items()},
    )

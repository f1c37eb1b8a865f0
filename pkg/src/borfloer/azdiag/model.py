"""Combinatorial data shared by the AZ and AT planar models."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..pmc import PointedMatchedCircle


class InvalidCircle(ValueError):
    pass


@dataclass(frozen=True)
class Arc:
    name: str
    family: str
    pair: int


@dataclass
class Vertex:
    id: int
    coords: tuple[Fraction, Fraction]
    kind: str  # interior | boundary | corner | glue | band_end
    arcs: tuple[str, ...] = ()
    # interior vertices: regions around the point in counterclockwise order,
    # with the interior angle (degrees) each region occupies there
    quadrants: list[tuple[int, int]] = field(default_factory=list)
    label: str = ""
    # literal lines through the point, e.g. ("g3", "d1"); AT only
    lines: tuple[str, ...] = ()


@dataclass
class Region:
    id: int
    faces: list[int]
    corners: list[tuple[int, int]]  # (vertex id, interior angle in degrees)
    boundary: list[str] = field(default_factory=list)  # boundary components touched
    basepoint: bool = False
    chi: int = 1
    # touches a free stretch of boundary carried through a band; the band is
    # treated as smooth, so its ends are not corners
    band_boundary: bool = False

    @property
    def is_polygon(self) -> bool:
        return not self.basepoint and not self.band_boundary and self.chi == 1


@dataclass
class PlanarDiagramModel:
    kind: str
    pmc: PointedMatchedCircle
    arcs: list[Arc]
    vertices: list[Vertex]
    regions: list[Region]
    identifications: list[dict]
    boundary_components: list[str]
    basepoint_leaves: list[tuple[str, int]] = field(default_factory=list)
    offsets: dict | None = None

    def arc(self, name: str) -> Arc:
        for a in self.arcs:
            if a.name == name:
                return a
        raise KeyError(name)

    def vertex_families(self, v: Vertex) -> tuple[str, ...]:
        return tuple(sorted(self.arc(a).family for a in v.arcs))

    @property
    def basepoint_regions(self) -> list[int]:
        return [r.id for r in self.regions if r.basepoint]

    def to_json(self) -> dict:
        def q(x: Fraction) -> str:
            return str(x)

        return {
            "kind": self.kind,
            "pmc": self.pmc.to_json(),
            "offsets": self.offsets,
            "arcs": [{"name": a.name, "family": a.family, "pair": a.pair} for a in self.arcs],
            "vertices": [
                {
                    "id": v.id,
                    "coords": [q(v.coords[0]), q(v.coords[1])],
                    "kind": v.kind,
                    "arcs": list(v.arcs),
                    "label": v.label,
                    "lines": list(v.lines),
                    "quadrants": [[rid, ang] for rid, ang in v.quadrants],
                }
                for v in self.vertices
            ],
            "regions": [
                {
                    "id": r.id,
                    "faces": list(r.faces),
                    "corners": [[vid, ang] for vid, ang in r.corners],
                    "boundary": list(r.boundary),
                    "basepoint": r.basepoint,
                    "chi": r.chi,
                    "band_boundary": r.band_boundary,
                }
                for r in self.regions
            ],
            "identifications": self.identifications,
            "boundary_components": self.boundary_components,
            "basepoint_leaves": [list(x) for x in self.basepoint_leaves],
        }

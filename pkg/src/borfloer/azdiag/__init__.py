"""Planar models of the interpolating diagrams: the AZ square and the AT triple."""

from .at import DegenerateOffsets, build_at, default_offsets, offset_family
from .az import (
    DiagramGenerator,
    az_action_left,
    az_action_right,
    az_differential,
    az_generators,
    build_az,
    generator_of,
    to_strand,
)
from .model import Arc, InvalidCircle, PlanarDiagramModel, Region, Vertex
from .triangle import ATGenerator, FaceMismatch, at_face_generators, at_to_strand, at_triangle_product

__all__ = [
    "ATGenerator",
    "Arc",
    "DegenerateOffsets",
    "DiagramGenerator",
    "FaceMismatch",
    "InvalidCircle",
    "PlanarDiagramModel",
    "Region",
    "Vertex",
    "at_face_generators",
    "at_to_strand",
    "at_triangle_product",
    "az_action_left",
    "az_action_right",
    "az_differential",
    "az_generators",
    "build_at",
    "build_az",
    "default_offsets",
    "generator_of",
    "offset_family",
    "to_strand",
]

"""foldsim: origami mechanism design, simulation, and optimization."""

from . import errors
from .design import (
    BOUNDARY,
    CREASE,
    CreasePattern,
    Edge,
    KeyPoint,
    Panel,
    add_edge,
    add_keypoint,
    load,
    loads,
    merge_keypoints,
    save,
    validate,
)
from .panels import detect_panel, mesh_pattern, perturb_collinear, sort_ccw, triangulate_panel

__version__ = "0.1.0"

__all__ = [
    "BOUNDARY",
    "CREASE",
    "CreasePattern",
    "Edge",
    "KeyPoint",
    "Panel",
    "add_edge",
    "add_keypoint",
    "detect_panel",
    "errors",
    "load",
    "loads",
    "merge_keypoints",
    "mesh_pattern",
    "perturb_collinear",
    "save",
    "sort_ccw",
    "triangulate_panel",
    "validate",
]

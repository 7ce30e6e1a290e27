"""Click-driven panel detection and meshing.

detect_panel finds the smallest planar face enclosing a click, sort_ccw
orders its vertices counterclockwise about the centroid, perturb_collinear
nudges flat triples so triangulation never sees a degenerate corner, and
mesh_pattern stitches the per-panel triangulations into one mesh whose
triangles reference the original keypoint ids.
"""

import math
from dataclasses import dataclass, field

from . import cdt, errors, faces, geometry
from .design import CREASE, Panel

PERTURB_REL_EPS = 1e-9  # fraction of the pattern bbox diagonal
EDGE_CLICK_REL_TOL = 1e-12


@dataclass
class TriMesh:
    triangles: list  # (panel_index, (a, b, c)) with CCW rest orientation
    constrained_edges: set = field(default_factory=set)

    def panel_triangles(self, panel_index):
        return [t for pi, t in self.triangles if pi == panel_index]


def _canonical_cycle(cycle):
    """Rotate so the smallest id leads; orientation is preserved."""
    k = cycle.index(min(cycle))
    return list(cycle[k:]) + list(cycle[:k])


def sort_ccw(cycle, positions):
    """Order cycle vertices by angle about their centroid, CCW.

    Ties broken by ascending id. The centroid sort is only valid for
    star-shaped polygons; if the sorted polygon self-intersects or has
    non-positive area the panel is rejected rather than silently mangled.
    """
    ids = list(cycle)
    if len(ids) < 3:
        raise errors.DegeneratePolygon("cycle has fewer than 3 vertices", entity=ids)
    pts = [positions[v] for v in ids]
    if all(
        geometry.orient_sign(pts[0], pts[1], p) == 0 for p in pts[2:]
    ):
        raise errors.DegeneratePolygon("all cycle vertices collinear", entity=ids)
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)
    order = sorted(
        ids,
        key=lambda v: (
            math.atan2(positions[v][1] - cy, positions[v][0] - cx),
            v,
        ),
    )
    sorted_pts = [positions[v] for v in order]
    if not geometry.polygon_is_simple(sorted_pts):
        raise errors.NonStarShapedPanel(
            "centroid angle sort produced a self-intersecting polygon",
            entity=ids,
        )
    if geometry.polygon_signed_area(sorted_pts) <= 0.0:
        raise errors.NonStarShapedPanel(
            "centroid angle sort produced non-positive area", entity=ids
        )
    return _canonical_cycle(order)


def detect_panel(pattern, click):
    """Smallest planar face containing the click, as a CCW Panel."""
    pos = pattern.positions2d()
    if not pattern.edges:
        raise errors.NoEnclosingCycle("pattern has no edges", entity=tuple(click))
    diag = geometry.bbox_diagonal(pos.values())
    tol = EDGE_CLICK_REL_TOL * (diag if diag > 0.0 else 1.0)
    click = (float(click[0]), float(click[1]))
    for e in pattern.edges:
        if geometry.point_segment_distance(click, pos[e.a], pos[e.b]) <= tol:
            raise errors.OnEdgeAmbiguous(
                f"click lies on edge {e.key}", entity=e.key
            )
    for cycle, _area in faces.bounded_faces(pos, [(e.a, e.b) for e in pattern.edges]):
        if len(set(cycle)) != len(cycle):
            continue  # face wraps a dangling edge; not a panel candidate
        if not geometry.point_in_polygon(click, [pos[v] for v in cycle]):
            continue
        ordered = sort_ccw(cycle, pos)
        sides = [
            pattern.find_edge(ordered[i], ordered[(i + 1) % len(ordered)])
            for i in range(len(ordered))
        ]
        if any(e is None for e in sides):
            raise errors.NonStarShapedPanel(
                "sorted cycle does not follow the face boundary", entity=ordered
            )
        if not any(e.kind == CREASE for e in sides):
            raise errors.NoCreaseInCycle(
                "enclosing face has only boundary edges", entity=ordered
            )
        for existing in pattern.panels:
            if _canonical_cycle(existing.cycle) == ordered:
                raise errors.PanelAlreadyDefined(
                    "face is already claimed by a panel", entity=ordered
                )
        return Panel(cycle=ordered)
    raise errors.NoEnclosingCycle(
        "click is in the outer face", entity=tuple(click)
    )


def perturb_collinear(positions, cycle):
    """Displace vertices of flat consecutive triples off the line.

    Collinearity is judged on the input positions, so a run of midpoints on
    one edge all shift to the same side by the same offset. Returns a new
    positions map; untouched ids keep their exact input coordinates.
    """
    eps = PERTURB_REL_EPS * geometry.bbox_diagonal(positions.values())
    if eps == 0.0:
        eps = PERTURB_REL_EPS
    out = dict(positions)
    n = len(cycle)
    for i in range(n):
        prev_p = positions[cycle[i - 1]]
        mid_id = cycle[i]
        mid_p = positions[mid_id]
        next_p = positions[cycle[(i + 1) % n]]
        if geometry.orient_sign(prev_p, mid_p, next_p) != 0:
            continue
        dx, dy = next_p[0] - prev_p[0], next_p[1] - prev_p[1]
        if dx == 0.0 and dy == 0.0:
            dx, dy = next_p[0] - mid_p[0], next_p[1] - mid_p[1]
        norm = math.hypot(dx, dy)
        if norm == 0.0:
            continue
        out[mid_id] = (mid_p[0] - eps * dy / norm, mid_p[1] + eps * dx / norm)
    return out


def triangulate_panel(panel, positions):
    """CDT of one panel; triangles carry original keypoint ids, CCW."""
    return cdt.triangulate_polygon(list(panel.cycle), positions)


def mesh_pattern(pattern):
    """Triangulate every panel of the pattern into one TriMesh."""
    if not pattern.panels:
        raise errors.NoPanels("pattern has no panels to mesh")
    pos = pattern.positions2d()
    triangles = []
    for pi, panel in enumerate(pattern.panels):
        perturbed = perturb_collinear(pos, panel.cycle)
        try:
            tris = triangulate_panel(panel, perturbed)
        except errors.TriangulationFailed as exc:
            raise errors.TriangulationFailed(
                f"panel {pi}: {exc}", entity=pi
            ) from exc
        triangles.extend((pi, tri) for tri in tris)
    constrained = {e.key for e in pattern.edges}
    return TriMesh(triangles=triangles, constrained_edges=constrained)

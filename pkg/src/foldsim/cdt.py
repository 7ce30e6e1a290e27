"""Constrained Delaunay triangulation of a simple polygon.

Two stages: ear clipping produces some valid triangulation of the (possibly
non-convex) polygon, then Lawson edge flips restore the Delaunay property on
every internal diagonal. Polygon sides are constraints and never flip. A
simple polygon with n vertices always yields n - 2 triangles.
"""

from . import errors
from .geometry import in_circumcircle, orient, orient_sign


def _point_in_triangle(p, a, b, c):
    # triangle is CCW; boundary counts as inside for ear rejection
    return (
        orient_sign(a, b, p) >= 0
        and orient_sign(b, c, p) >= 0
        and orient_sign(c, a, p) >= 0
    )


def _ear_clip(ids, positions):
    """Triangulate a CCW simple polygon; returns CCW id triples."""
    working = list(ids)
    triangles = []
    guard = 0
    while len(working) > 3:
        guard += 1
        if guard > 4 * len(ids) * len(ids):
            raise errors.TriangulationFailed(
                "ear search did not terminate", entity=list(ids)
            )
        clipped = False
        n = len(working)
        for i in range(n):
            prev_id = working[i - 1]
            ear_id = working[i]
            next_id = working[(i + 1) % n]
            a, b, c = positions[prev_id], positions[ear_id], positions[next_id]
            if orient_sign(a, b, c) <= 0:
                continue  # reflex or flat corner
            blocked = False
            for other in working:
                if other in (prev_id, ear_id, next_id):
                    continue
                if _point_in_triangle(positions[other], a, b, c):
                    blocked = True
                    break
            if blocked:
                continue
            triangles.append((prev_id, ear_id, next_id))
            working.pop(i)
            clipped = True
            break
        if not clipped:
            raise errors.TriangulationFailed(
                "no ear found; polygon is degenerate or self-intersecting",
                entity=list(ids),
            )
    a, b, c = working
    if orient_sign(positions[a], positions[b], positions[c]) <= 0:
        raise errors.TriangulationFailed(
            "final triangle is degenerate", entity=list(ids)
        )
    triangles.append((a, b, c))
    return triangles


def _edge_map(triangles):
    """Undirected edge -> list of triangle indices sharing it."""
    emap = {}
    for ti, tri in enumerate(triangles):
        for k in range(3):
            a, b = tri[k], tri[(k + 1) % 3]
            key = (a, b) if a < b else (b, a)
            emap.setdefault(key, []).append(ti)
    return emap


def _opposite(tri, edge_key):
    for v in tri:
        if v not in edge_key:
            return v
    raise errors.TriangulationFailed("triangle does not contain edge", entity=edge_key)


def _lawson_flips(triangles, positions, constrained):
    """Flip non-constrained diagonals until locally Delaunay."""
    triangles = [tuple(t) for t in triangles]
    max_rounds = 3 * len(triangles) * len(triangles) + 16
    for _ in range(max_rounds):
        emap = _edge_map(triangles)
        flipped = False
        for key, owners in emap.items():
            if key in constrained or len(owners) != 2:
                continue
            t1, t2 = triangles[owners[0]], triangles[owners[1]]
            p = _opposite(t1, key)
            q = _opposite(t2, key)
            a, b = key
            if not in_circumcircle(
                positions[t1[0]], positions[t1[1]], positions[t1[2]], positions[q]
            ):
                continue
            # replace diagonal a-b with p-q; keep both new triangles CCW
            n1 = (p, a, q) if orient(positions[p], positions[a], positions[q]) > 0 else (p, q, a)
            n2 = (p, b, q) if orient(positions[p], positions[b], positions[q]) > 0 else (p, q, b)
            if (
                orient(positions[n1[0]], positions[n1[1]], positions[n1[2]]) <= 0
                or orient(positions[n2[0]], positions[n2[1]], positions[n2[2]]) <= 0
            ):
                continue  # quad is not convex; flip would invert a triangle
            triangles[owners[0]] = n1
            triangles[owners[1]] = n2
            flipped = True
            break
        if not flipped:
            return triangles
    raise errors.TriangulationFailed("flip loop did not converge")


def triangulate_polygon(ids, positions):
    """CCW simple polygon (as keypoint ids) -> list of CCW id triples.

    positions maps id -> (x, y). Sides of the polygon are constrained edges.
    """
    if len(ids) < 3:
        raise errors.TriangulationFailed("polygon has fewer than 3 vertices", entity=list(ids))
    if len(set(ids)) != len(ids):
        raise errors.TriangulationFailed("polygon repeats a vertex", entity=list(ids))
    triangles = _ear_clip(ids, positions)
    constrained = set()
    n = len(ids)
    for i in range(n):
        a, b = ids[i], ids[(i + 1) % n]
        constrained.add((a, b) if a < b else (b, a))
    triangles = _lawson_flips(triangles, positions, constrained)
    if len(triangles) != n - 2:
        raise errors.TriangulationFailed(
            f"expected {n - 2} triangles, produced {len(triangles)}", entity=list(ids)
        )
    return triangles

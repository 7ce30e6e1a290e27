"""Planar geometry predicates shared by the design graph and the mesher.

All functions operate on 2D points (the z = 0 design plane). Orientation
tests use a collinearity epsilon scaled by the magnitudes involved so that
hand-placed coordinates a few meters across behave robustly.
"""

import math

COLLINEAR_EPS = 1e-12


def orient(a, b, c):
    """Signed twice-area of triangle abc; > 0 for counterclockwise."""
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def orient_sign(a, b, c, eps=COLLINEAR_EPS):
    """-1, 0, +1 classification of orient() with a scale-aware epsilon."""
    d = orient(a, b, c)
    scale = max(
        abs(b[0] - a[0]) + abs(b[1] - a[1]),
        abs(c[0] - a[0]) + abs(c[1] - a[1]),
        1.0,
    )
    if abs(d) <= eps * scale * scale:
        return 0
    return 1 if d > 0.0 else -1


def _on_segment(a, b, p):
    """True if collinear point p lies within the closed box spanned by a, b."""
    return (
        min(a[0], b[0]) - COLLINEAR_EPS <= p[0] <= max(a[0], b[0]) + COLLINEAR_EPS
        and min(a[1], b[1]) - COLLINEAR_EPS <= p[1] <= max(a[1], b[1]) + COLLINEAR_EPS
    )


def _proper_cross(p1, p2, q1, q2):
    """Full improper-intersection test, endpoints included."""
    d1 = orient_sign(q1, q2, p1)
    d2 = orient_sign(q1, q2, p2)
    d3 = orient_sign(p1, p2, q1)
    d4 = orient_sign(p1, p2, q2)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and (
        (d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)
    ):
        return True
    if d1 == 0 and _on_segment(q1, q2, p1):
        return True
    if d2 == 0 and _on_segment(q1, q2, p2):
        return True
    if d3 == 0 and _on_segment(p1, p2, q1):
        return True
    if d4 == 0 and _on_segment(p1, p2, q2):
        return True
    return False


def segments_cross(p1, p2, q1, q2, *, allow_shared_endpoints=True):
    """True if the two segments make contact beyond what the rule permits.

    With allow_shared_endpoints (the design-graph rule for edges incident to
    a common keypoint), touching at a shared endpoint value is legal; any
    other contact, including collinear overlap past the shared point, is a
    crossing. Without it, any contact at all counts.
    """
    if allow_shared_endpoints:
        pe = (tuple(p1[:2]), tuple(p2[:2]))
        qe = (tuple(q1[:2]), tuple(q2[:2]))
        shared = [(i, j) for i in range(2) for j in range(2) if pe[i] == qe[j]]
        if len(shared) >= 2:
            # Identical segments are the duplicate-edge case, not a crossing.
            return False
        if len(shared) == 1:
            i, j = shared[0]
            other_p = pe[1 - i]
            other_q = qe[1 - j]
            if orient_sign(q1, q2, other_p) == 0 and _on_segment(q1, q2, other_p):
                return True
            if orient_sign(p1, p2, other_q) == 0 and _on_segment(p1, p2, other_q):
                return True
            return False
    return _proper_cross(p1, p2, q1, q2)


def polygon_signed_area(points):
    """Shoelace signed area; positive for counterclockwise polygons."""
    acc = 0.0
    n = len(points)
    for i in range(n):
        x1, y1 = points[i][0], points[i][1]
        x2, y2 = points[(i + 1) % n][0], points[(i + 1) % n][1]
        acc += x1 * y2 - x2 * y1
    return 0.5 * acc


def polygon_is_simple(points):
    """True if no two non-adjacent polygon edges intersect."""
    n = len(points)
    if n < 3:
        return False
    for i in range(n):
        if tuple(points[i][:2]) == tuple(points[(i + 1) % n][:2]):
            return False  # zero-length side
    for i in range(n):
        a1 = points[i]
        a2 = points[(i + 1) % n]
        for j in range(i + 1, n):
            b1 = points[j]
            b2 = points[(j + 1) % n]
            adjacent = (j == (i + 1) % n) or ((j + 1) % n == i)
            if segments_cross(a1, a2, b1, b2, allow_shared_endpoints=adjacent):
                return False
    return True


def point_in_polygon(point, points):
    """Ray-crossing containment test; boundary points are unreliable here."""
    x, y = point[0], point[1]
    inside = False
    n = len(points)
    for i in range(n):
        x1, y1 = points[i][0], points[i][1]
        x2, y2 = points[(i + 1) % n][0], points[(i + 1) % n][1]
        if (y1 > y) != (y2 > y):
            xi = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if x < xi:
                inside = not inside
    return inside


def point_segment_distance(p, a, b):
    ax, ay = a[0], a[1]
    dx, dy = b[0] - ax, b[1] - ay
    L2 = dx * dx + dy * dy
    if L2 == 0.0:
        return math.hypot(p[0] - ax, p[1] - ay)
    t = ((p[0] - ax) * dx + (p[1] - ay) * dy) / L2
    t = min(1.0, max(0.0, t))
    return math.hypot(p[0] - (ax + t * dx), p[1] - (ay + t * dy))


def bbox_diagonal(points):
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    if not xs:
        return 0.0
    return math.hypot(max(xs) - min(xs), max(ys) - min(ys))


def in_circumcircle(a, b, c, d, eps=1e-12):
    """True if d lies strictly inside the circumcircle of CCW triangle abc."""
    adx, ady = a[0] - d[0], a[1] - d[1]
    bdx, bdy = b[0] - d[0], b[1] - d[1]
    cdx, cdy = c[0] - d[0], c[1] - d[1]
    det = (
        (adx * adx + ady * ady) * (bdx * cdy - cdx * bdy)
        - (bdx * bdx + bdy * bdy) * (adx * cdy - cdx * ady)
        + (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady)
    )
    scale = max(
        adx * adx + ady * ady,
        bdx * bdx + bdy * bdy,
        cdx * cdx + cdy * cdy,
        1e-300,
    )
    return det > eps * scale * scale

"""Planar face enumeration by half-edge walking.

Every undirected pattern edge becomes two directed half-edges. Around each
vertex the outgoing edges are sorted by angle; when a walk arrives at v along
u -> v, it leaves along the neighbor that is next clockwise from u. Walking
every half-edge once yields each bounded face as a counterclockwise cycle
plus one clockwise outer face per connected component.
"""

import math


def _sorted_neighbors(positions, adjacency):
    out = {}
    for v, nbrs in adjacency.items():
        vx, vy = positions[v]
        out[v] = sorted(
            nbrs, key=lambda u: math.atan2(positions[u][1] - vy, positions[u][0] - vx)
        )
    return out


def _signed_area(positions, cycle):
    s = 0.0
    for i in range(len(cycle)):
        x1, y1 = positions[cycle[i]]
        x2, y2 = positions[cycle[(i + 1) % len(cycle)]]
        s += x1 * y2 - x2 * y1
    return 0.5 * s


def enumerate_faces(positions, edges):
    """All face cycles of the planar graph.

    positions: id -> (x, y); edges: iterable of (a, b) undirected pairs.
    Returns list of (cycle, signed_area). Bounded faces have positive area;
    outer boundaries come out clockwise (negative). Dangling (bridge) edges
    appear twice in their face cycle, which is correct for the walk but such
    faces are rejected later by the panel layer.
    """
    adjacency = {}
    for a, b in edges:
        adjacency.setdefault(a, []).append(b)
        adjacency.setdefault(b, []).append(a)
    nbrs = _sorted_neighbors(positions, adjacency)

    visited = set()
    faces = []
    for a, b in edges:
        for he in ((a, b), (b, a)):
            if he in visited:
                continue
            cycle = []
            u, v = he
            while (u, v) not in visited:
                visited.add((u, v))
                cycle.append(v)
                ring = nbrs[v]
                i = ring.index(u)
                w = ring[i - 1]  # next clockwise from the arrival direction
                u, v = v, w
            faces.append((cycle, _signed_area(positions, cycle)))
    return faces


def bounded_faces(positions, edges):
    """Only the counterclockwise (interior) faces, smallest area first."""
    out = [
        (cycle, area)
        for cycle, area in enumerate_faces(positions, edges)
        if area > 0.0
    ]
    out.sort(key=lambda fa: fa[1])
    return out

"""Triangulation tests: conservation checks against independent references.

``run_suite`` is shared with the acceptance tests, which run it at full size.
"""

import time

import numpy as np
import pytest

import oracle_geom as og
from foldsim import cdt, errors
from foldsim.geometry import in_circumcircle, orient, polygon_signed_area


def _edge_uses(triangles):
    uses = {}
    for t in triangles:
        for i in range(3):
            a, b = t[i], t[(i + 1) % 3]
            key = (a, b) if a < b else (b, a)
            uses[key] = uses.get(key, 0) + 1
    return uses


def check_triangulation(ids, positions):
    """Triangulate one polygon and verify every structural invariant."""
    triangles = cdt.triangulate_polygon(ids, positions)
    n = len(ids)
    assert len(triangles) == n - 2

    poly_area = polygon_signed_area([positions[i] for i in ids])
    assert poly_area > 0.0  # caller must hand us CCW rings

    tri_area = 0.0
    for t in triangles:
        assert len(set(t)) == 3
        assert set(t) <= set(ids)
        a = 0.5 * orient(positions[t[0]], positions[t[1]], positions[t[2]])
        assert a > 0.0  # output triangles stay CCW
        tri_area += a
    assert abs(tri_area - poly_area) <= 1e-9 * abs(poly_area)

    uses = _edge_uses(triangles)
    sides = set()
    for i in range(n):
        a, b = ids[i], ids[(i + 1) % n]
        sides.add((a, b) if a < b else (b, a))
    for side in sides:
        assert uses.get(side) == 1  # polygon sides survive, each on the hull
    for key, count in uses.items():
        assert count == (1 if key in sides else 2)
    return triangles


def run_suite(count, seed=2024):
    """Random-polygon sweep; returns wall time so callers can budget it."""
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    for k in range(count):
        poly = og.random_simple_polygon(rng)
        # non-contiguous ids so nothing can lean on ids being 0..n-1
        ids = [3 * i + 7 for i in range(len(poly))]
        positions = {i: p for i, p in zip(ids, poly)}
        check_triangulation(ids, positions)
    return time.perf_counter() - t0


def test_random_polygon_suite_small():
    run_suite(150)


def test_square_takes_delaunay_diagonal():
    # lop-sided quad: only one diagonal is locally Delaunay
    positions = {0: (0.0, 0.0), 1: (2.0, 0.0), 2: (2.1, 1.0), 3: (0.0, 0.9)}
    triangles = cdt.triangulate_polygon([0, 1, 2, 3], positions)
    uses = _edge_uses(triangles)
    interior = [k for k, c in uses.items() if c == 2]
    assert len(interior) == 1
    for t in triangles:
        rest = [i for i in (0, 1, 2, 3) if i not in t]
        assert not in_circumcircle(
            positions[t[0]], positions[t[1]], positions[t[2]], positions[rest[0]]
        )


def test_reflex_polygon():
    poly = og.comb_polygon(10)
    ids = list(range(10))
    check_triangulation(ids, {i: p for i, p in zip(ids, poly)})


def test_no_flippable_edge_remains():
    """Fixpoint: re-checking the flip condition finds nothing to do."""
    rng = np.random.default_rng(5)
    for _ in range(50):
        poly = og.random_simple_polygon(rng)
        ids = list(range(len(poly)))
        positions = {i: p for i, p in zip(ids, poly)}
        triangles = check_triangulation(ids, positions)
        sides = set()
        n = len(ids)
        for i in range(n):
            a, b = ids[i], ids[(i + 1) % n]
            sides.add((a, b) if a < b else (b, a))
        owners = {}
        for ti, t in enumerate(triangles):
            for i in range(3):
                a, b = t[i], t[(i + 1) % 3]
                key = (a, b) if a < b else (b, a)
                owners.setdefault(key, []).append(ti)
        for key, own in owners.items():
            if key in sides or len(own) != 2:
                continue
            t1, t2 = triangles[own[0]], triangles[own[1]]
            q = next(v for v in t2 if v not in key)
            p = next(v for v in t1 if v not in key)
            a, b = key
            flippable = in_circumcircle(
                positions[t1[0]], positions[t1[1]], positions[t1[2]], positions[q]
            )
            if flippable:
                # the flip must have been vetoed by the convexity guard
                crossed = orient(positions[p], positions[q], positions[a]) * orient(
                    positions[p], positions[q], positions[b]
                )
                assert crossed > 0.0


def test_rejects_too_few_vertices():
    with pytest.raises(errors.TriangulationFailed):
        cdt.triangulate_polygon([0, 1], {0: (0, 0), 1: (1, 0)})


def test_rejects_repeated_vertex():
    pos = {0: (0, 0), 1: (1, 0), 2: (1, 1)}
    with pytest.raises(errors.TriangulationFailed):
        cdt.triangulate_polygon([0, 1, 2, 1], {**pos, 3: (0, 1)})


def test_rejects_collinear_ring():
    pos = {0: (0.0, 0.0), 1: (1.0, 0.0), 2: (2.0, 0.0)}
    with pytest.raises(errors.TriangulationFailed):
        cdt.triangulate_polygon([0, 1, 2], pos)


def test_collinear_run_on_boundary_is_fine():
    # straight runs of boundary vertices occur in real patterns
    pos = {0: (0, 0), 1: (1, 0), 2: (2, 0), 3: (2, 1), 4: (0, 1)}
    check_triangulation([0, 1, 2, 3, 4], pos)

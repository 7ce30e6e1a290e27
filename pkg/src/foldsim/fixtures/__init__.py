"""Bundled example patterns.

Each builder assembles its pattern through the public design operations
(add_keypoint, add_edge, detect_panel clicks, merge_keypoints), so the
fixtures double as end-to-end exercises of the editing pipeline. The same
patterns are shipped as design files next to this module; ``load`` reads
the shipped copy, and a regression test keeps builders and files in sync.
"""

import math
from importlib import resources

from .. import catapult, design, panels
from ..design import BOUNDARY, CREASE, CreasePattern

LOCKED = (False, False, False)
FREE = (True, True, True)


def build_three_arm_star():
    """Central triangle with three single-triangle arms, tips actuated in z."""
    pattern = CreasePattern(name="three_arm_star")
    r_in, r_out = 0.06, 0.12
    for deg in (90.0, 210.0, 330.0):
        a = math.radians(deg)
        design.add_keypoint(pattern, (r_in * math.cos(a), r_in * math.sin(a), 0.0))
    for deg in (150.0, 270.0, 30.0):
        a = math.radians(deg)
        design.add_keypoint(
            pattern,
            (r_out * math.cos(a), r_out * math.sin(a), 0.0),
            actuation="z",
        )
    for a, b in ((0, 1), (1, 2), (2, 0)):
        design.add_edge(pattern, a, b, CREASE)
    for a, b in ((0, 3), (1, 3), (1, 4), (2, 4), (2, 5), (0, 5)):
        design.add_edge(pattern, a, b, BOUNDARY)
    pos = pattern.positions2d()
    clicks = [(0.0, 0.0)]
    for tip, (va, vb) in ((3, (0, 1)), (4, (1, 2)), (5, (2, 0))):
        clicks.append(
            (
                (pos[va][0] + pos[vb][0] + pos[tip][0]) / 3.0,
                (pos[va][1] + pos[vb][1] + pos[tip][1]) / 3.0,
            )
        )
    for click in clicks:
        pattern.panels.append(panels.detect_panel(pattern, click))
    return pattern


def build_accordion():
    """Six-panel pleated strip; left edge anchored, right edge driven in x."""
    pattern = CreasePattern(name="accordion")
    cols, w, h = 7, 0.04, 0.08
    for k in range(cols):
        dof = LOCKED if k == 0 else FREE
        act = "x" if k == cols - 1 else None
        design.add_keypoint(pattern, (k * w, 0.0, 0.0), dof_mask=dof, actuation=act)
    for k in range(cols):
        dof = LOCKED if k == 0 else FREE
        act = "x" if k == cols - 1 else None
        design.add_keypoint(pattern, (k * w, h, 0.0), dof_mask=dof, actuation=act)
    for k in range(cols):
        kind = BOUNDARY if k in (0, cols - 1) else CREASE
        design.add_edge(pattern, k, k + cols, kind)
    for k in range(cols - 1):
        design.add_edge(pattern, k, k + 1, BOUNDARY)
        design.add_edge(pattern, k + cols, k + cols + 1, BOUNDARY)
    for k in range(cols - 1):
        pattern.panels.append(
            panels.detect_panel(pattern, ((k + 0.5) * w, h / 2.0))
        )
    return pattern


def build_corrugation():
    """Passive 4 x 2 corrugated sheet; every interior edge is a ridge."""
    pattern = CreasePattern(name="corrugation")
    cols, rows, w, h = 5, 3, 0.035, 0.05
    for j in range(rows):
        for k in range(cols):
            design.add_keypoint(pattern, (k * w, j * h, 0.0))
    def kp(k, j):
        return j * cols + k
    for j in range(rows - 1):
        for k in range(cols):
            kind = CREASE if 1 <= k <= cols - 2 else BOUNDARY
            design.add_edge(pattern, kp(k, j), kp(k, j + 1), kind)
    for j in range(rows):
        for k in range(cols - 1):
            kind = CREASE if j == 1 else BOUNDARY
            design.add_edge(pattern, kp(k, j), kp(k + 1, j), kind)
    for j in range(rows - 1):
        for k in range(cols - 1):
            pattern.panels.append(
                panels.detect_panel(pattern, ((k + 0.5) * w, (j + 0.5) * h))
            )
    return pattern


def _build_cross(name):
    """Locked central square with four free flaps, panels clicked."""
    pattern = CreasePattern(name=name)
    s = 0.05
    coords = [
        ((0, 0), LOCKED), ((1, 0), LOCKED), ((1, 1), LOCKED), ((0, 1), LOCKED),
        ((1, 2), FREE), ((0, 2), FREE),      # 4, 5  north
        ((2, 0), FREE), ((2, 1), FREE),      # 6, 7  east
        ((1, -1), FREE), ((0, -1), FREE),    # 8, 9  south
        ((-1, 1), FREE), ((-1, 0), FREE),    # 10, 11  west
    ]
    for (x, y), dof in coords:
        design.add_keypoint(pattern, (x * s, y * s, 0.0), dof_mask=dof)
    for a, b in ((0, 1), (1, 2), (2, 3), (3, 0)):
        design.add_edge(pattern, a, b, CREASE)
    for a, b in (
        (2, 4), (4, 5), (5, 3),      # north
        (1, 6), (6, 7), (7, 2),      # east
        (0, 9), (9, 8), (8, 1),      # south
        (3, 10), (10, 11), (11, 0),  # west
    ):
        design.add_edge(pattern, a, b, BOUNDARY)
    for cx, cy in ((0.5, 0.5), (0.5, 1.5), (1.5, 0.5), (0.5, -0.5), (-0.5, 0.5)):
        pattern.panels.append(panels.detect_panel(pattern, (cx * s, cy * s)))
    return pattern


def build_rotor_block():
    """Closed-loop box corner: seams merged on the NE and SW diagonals.

    Folding all four flaps up makes an open box; the two merged corner pairs
    keep adjacent flaps attached so the loop closes instead of gaping.
    """
    pattern = _build_cross("rotor_block")
    design.merge_keypoints(pattern, 7, 4, unify_edges=True)    # north e-corner onto east
    design.merge_keypoints(pattern, 11, 9, unify_edges=True)   # south w-corner onto west
    pattern.keypoint(5).actuation = "z"
    pattern.keypoint(8).actuation = "z"
    return pattern


def build_contractor_block():
    """Closed-loop box corner seamed on the NW and SE diagonals instead."""
    pattern = _build_cross("contractor_block")
    design.merge_keypoints(pattern, 10, 5, unify_edges=True)   # north w-corner onto west
    design.merge_keypoints(pattern, 8, 6, unify_edges=True)    # east s-corner onto south
    pattern.keypoint(7).actuation = "x"
    pattern.keypoint(11).actuation = "x"
    return pattern


def build_gripper():
    """Locked palm with two jointed fingers; distal keypoints curl in z."""
    pattern = CreasePattern(name="gripper")
    coords = [
        ((0.0, 0.0), LOCKED, None),        # 0 palm
        ((0.06, 0.0), LOCKED, None),       # 1
        ((0.06, 0.01), FREE, None),        # 2 finger 1 root
        ((0.06, 0.025), FREE, None),       # 3
        ((0.06, 0.035), FREE, None),       # 4 finger 2 root
        ((0.06, 0.05), FREE, None),        # 5
        ((0.06, 0.06), LOCKED, None),      # 6
        ((0.0, 0.06), LOCKED, None),       # 7
        ((0.10, 0.01), FREE, None),        # 8 finger 1 knuckle
        ((0.10, 0.025), FREE, None),       # 9
        ((0.14, 0.01), FREE, "z"),         # 10 finger 1 tip
        ((0.14, 0.025), FREE, "z"),        # 11
        ((0.10, 0.035), FREE, None),       # 12 finger 2 knuckle
        ((0.10, 0.05), FREE, None),        # 13
        ((0.14, 0.035), FREE, "z"),        # 14 finger 2 tip
        ((0.14, 0.05), FREE, "z"),         # 15
    ]
    for (x, y), dof, act in coords:
        design.add_keypoint(pattern, (x, y, 0.0), dof_mask=dof, actuation=act)
    for a, b in ((2, 3), (4, 5), (8, 9), (12, 13)):
        design.add_edge(pattern, a, b, CREASE)
    for a, b in (
        (0, 1), (1, 2), (3, 4), (5, 6), (6, 7), (7, 0),
        (2, 8), (9, 3), (8, 10), (10, 11), (11, 9),
        (4, 12), (13, 5), (12, 14), (14, 15), (15, 13),
    ):
        design.add_edge(pattern, a, b, BOUNDARY)
    for click in (
        (0.03, 0.03),
        (0.08, 0.0175), (0.12, 0.0175),
        (0.08, 0.0425), (0.12, 0.0425),
    ):
        pattern.panels.append(panels.detect_panel(pattern, click))
    return pattern


def build_walker():
    """Free body plate with four fold-down legs, one stepped tip each."""
    pattern = CreasePattern(name="walker")
    body = [
        (0.0, 0.0), (0.015, 0.0), (0.03, 0.0), (0.05, 0.0), (0.065, 0.0),
        (0.08, 0.0), (0.08, 0.05), (0.065, 0.05), (0.05, 0.05), (0.03, 0.05),
        (0.015, 0.05), (0.0, 0.05),
    ]
    tips = [
        ((0.015, -0.03), "z"), ((0.03, -0.03), None),    # 12, 13 front left
        ((0.05, -0.03), None), ((0.065, -0.03), "z"),    # 14, 15 front right
        ((0.065, 0.08), "z"), ((0.05, 0.08), None),      # 16, 17 back right
        ((0.03, 0.08), None), ((0.015, 0.08), "z"),      # 18, 19 back left
    ]
    for x, y in body:
        design.add_keypoint(pattern, (x, y, 0.0))
    for (x, y), act in tips:
        design.add_keypoint(pattern, (x, y, 0.0), actuation=act)
    for a, b in ((1, 2), (3, 4), (7, 8), (9, 10)):
        design.add_edge(pattern, a, b, CREASE)
    for a, b in (
        (0, 1), (2, 3), (4, 5), (5, 6), (6, 7), (8, 9), (10, 11), (11, 0),
        (1, 12), (12, 13), (13, 2),
        (3, 14), (14, 15), (15, 4),
        (7, 16), (16, 17), (17, 8),
        (9, 18), (18, 19), (19, 10),
    ):
        design.add_edge(pattern, a, b, BOUNDARY)
    for click in (
        (0.04, 0.025),
        (0.0225, -0.015), (0.0575, -0.015),
        (0.0575, 0.065), (0.0225, 0.065),
    ):
        pattern.panels.append(panels.detect_panel(pattern, click))
    return pattern


def build_balancer():
    """Free plate with one long and one short wing, opposite corners driven."""
    pattern = CreasePattern(name="balancer")
    coords = [
        ((0.0, 0.0), None), ((0.1, 0.0), None),
        ((0.1, 0.04), None), ((0.0, 0.04), None),
        ((0.1, 0.10), "z"), ((0.0, 0.10), None),     # 4, 5 long wing
        ((0.1, -0.06), None), ((0.0, -0.06), "z"),   # 6, 7 short wing
    ]
    for (x, y), act in coords:
        design.add_keypoint(pattern, (x, y, 0.0), actuation=act)
    for a, b in ((0, 1), (2, 3)):
        design.add_edge(pattern, a, b, CREASE)
    for a, b in ((1, 2), (3, 0), (2, 4), (4, 5), (5, 3), (0, 7), (7, 6), (6, 1)):
        design.add_edge(pattern, a, b, BOUNDARY)
    for click in ((0.05, 0.02), (0.05, 0.07), (0.05, -0.03)):
        pattern.panels.append(panels.detect_panel(pattern, click))
    return pattern


def build_catapult():
    """The throwing-study template at its canonical initial parameters."""
    pattern, _ = catapult.build_catapult(catapult.INITIAL_PARAMS)
    return pattern


BUILDERS = {
    "three_arm_star": build_three_arm_star,
    "accordion": build_accordion,
    "corrugation": build_corrugation,
    "rotor_block": build_rotor_block,
    "contractor_block": build_contractor_block,
    "gripper": build_gripper,
    "walker": build_walker,
    "balancer": build_balancer,
    "catapult": build_catapult,
}


def names():
    return sorted(BUILDERS)


def build(name):
    try:
        return BUILDERS[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; have {names()}") from None


def load(name):
    """The shipped design file for a fixture, parsed."""
    if name not in BUILDERS:
        raise KeyError(f"unknown fixture {name!r}; have {names()}")
    text = (resources.files(__name__) / f"{name}.json").read_text("utf-8")
    return design.loads(text)


def regenerate(dest_dir):
    """Rewrite the shipped design files from the builders (dev utility)."""
    import pathlib

    dest = pathlib.Path(dest_dir)
    for name, builder in BUILDERS.items():
        design.save(builder(), dest / f"{name}.json")

"""Parametric six-panel throwing mechanism.

The template is a fixed flat layout: two large wings hinged along a spine on
the x axis, two triangular flaps meeting at an apex, and a two-panel throwing
arm ridge running forward along the axis. Two parameters vary: the sector
angle theta (placement of the two sector keypoints 2 and 6, symmetric about
the axis) and the arm length (keypoint 10). Everything else is identical
across builds.

The throw protocol folds the sheet rigidly (zero elastic energy), drops the
payload sphere just above the arm tip, and holds the two actuated wing
corners in place while the sphere settles into the pocket between the arm
and the flaps. It then commands both corners further inward; the degree-4
apex vertex gears the small wing rotation into a fast arm pitch, which
flings the sphere backward over the spine. Fitness is the horizontal
displacement of the sphere along the throwing axis at rest.
"""

import csv
import math
from dataclasses import dataclass

from . import design, errors, panels
from .design import BOUNDARY, CREASE, CreasePattern
from .engine import rollout
from .engine.assembly import assemble
from .engine.types import (
    ActuationEvent,
    GroundConfig,
    MaterialParams,
    RigidSphere,
    SceneConfig,
)

THETA_RANGE = (100.0, 226.0)   # degrees
ARM_RANGE = (0.08, 0.18)       # m

# fixed template dimensions (m)
SECTOR_RADIUS = 0.075          # apex -> keypoints 2/6
SPINE_MID_X = -0.08            # keypoint 1
TAIL_X = -0.16                 # keypoint 9
WING_BACK = (-0.15, 0.12)      # keypoints 3/5 (mirrored)
WING_FRONT = (0.05, 0.14)      # keypoints 4/7 (mirrored, actuated)
ARM_BASE_X = 0.05              # keypoint 8

LOCKED = (False, False, False)
FREE = (True, True, True)

# throw rollouts integrate at a quarter of the engine default step: the stiff
# sheet and the light arm keypoints sit past the explicit stability limit at
# dt = 5e-4, and a soft sheet just twists around the pulled corner instead of
# transmitting the fold through the vertex
THROW_MATERIAL = MaterialParams()

# softer contact than the engine default: the 1 g payload needs the per-step
# contact impulse below its own momentum or every touch becomes a bounce.
# High friction so the payload seats in the pocket instead of sliding down
# a steeply pitched arm and getting slapped mid-slide.
THROW_SCENE = SceneConfig(
    dt=1.25e-4,
    ground=GroundConfig(contact_stiffness=1000.0, friction_coeff=1.2),
)


@dataclass(frozen=True)
class CatapultParams:
    theta: float        # sector angle, degrees
    arm_length: float   # m

    def __post_init__(self):
        lo, hi = THETA_RANGE
        if not (lo <= self.theta <= hi):
            raise errors.ParamsOutOfRange(
                f"theta {self.theta} outside [{lo}, {hi}] degrees",
                entity="theta",
            )
        lo, hi = ARM_RANGE
        if not (lo <= self.arm_length <= hi):
            raise errors.ParamsOutOfRange(
                f"arm_length {self.arm_length} outside [{lo}, {hi}] m",
                entity="arm_length",
            )


# canonical starting point for optimization runs: folded past vertical, the
# payload dribbles off the back instead of being thrown, but the working
# sector angles are only a step or two away in theta
INITIAL_PARAMS = CatapultParams(theta=140.0, arm_length=0.12)


def _sector_xy(theta):
    """Planar position of keypoint 2 (keypoint 6 is its exact mirror)."""
    half = 0.5 * theta
    if half == 90.0:
        # keep the flat-sector case exactly collinear with the axis
        return 0.0, SECTOR_RADIUS
    a = math.radians(half)
    return SECTOR_RADIUS * math.cos(a), SECTOR_RADIUS * math.sin(a)


def build_catapult(params):
    """Template pattern + mesh for one (theta, arm_length) pair."""
    x2, y2 = _sector_xy(params.theta)
    l = params.arm_length
    pattern = CreasePattern(name="catapult")
    coords = [
        ((0.0, 0.0), LOCKED, None),                      # 0 apex
        ((SPINE_MID_X, 0.0), LOCKED, None),              # 1 spine mid
        ((x2, y2), FREE, None),                          # 2 sector, left
        (WING_BACK, FREE, None),                         # 3
        (WING_FRONT, FREE, "y"),                         # 4 actuated
        ((WING_BACK[0], -WING_BACK[1]), FREE, None),     # 5
        ((x2, -y2), FREE, None),                         # 6 sector, right
        ((WING_FRONT[0], -WING_FRONT[1]), FREE, "y"),    # 7 actuated
        ((ARM_BASE_X, 0.0), FREE, None),                 # 8 arm base
        ((TAIL_X, 0.0), LOCKED, None),                   # 9 tail
        ((l, 0.0), FREE, None),                          # 10 arm tip
    ]
    for (x, y), dof, act in coords:
        design.add_keypoint(pattern, (x, y, 0.0), dof_mask=dof, actuation=act)
    for a, b in ((0, 1), (1, 9), (0, 2), (0, 6), (0, 8), (2, 8), (6, 8), (8, 10)):
        design.add_edge(pattern, a, b, CREASE)
    for a, b in ((2, 4), (4, 3), (3, 9), (9, 5), (5, 7), (7, 6), (2, 10), (6, 10)):
        design.add_edge(pattern, a, b, BOUNDARY)

    wing = [(0.0, 0.0), (x2, y2), WING_FRONT, WING_BACK, (TAIL_X, 0.0), (SPINE_MID_X, 0.0)]
    wx = sum(p[0] for p in wing) / 6.0
    wy = sum(p[1] for p in wing) / 6.0
    clicks = [
        (wx, wy),                                        # wing, left
        (wx, -wy),                                       # wing, right
        ((x2 + ARM_BASE_X) / 3.0, y2 / 3.0),             # flap, left
        ((x2 + ARM_BASE_X) / 3.0, -y2 / 3.0),            # flap, right
        ((x2 + ARM_BASE_X + l) / 3.0, y2 / 3.0),         # arm, left
        ((x2 + ARM_BASE_X + l) / 3.0, -y2 / 3.0),        # arm, right
    ]
    for click in clicks:
        pattern.panels.append(panels.detect_panel(pattern, click))
    return pattern, panels.mesh_pattern(pattern)


# --- rigid folding ----------------------------------------------------------

def arm_pitch_deg(params, wing_tilt_deg):
    """Arm ridge pitch produced by tilting the wings, degrees.

    The apex is a flat-foldable degree-4 vertex; the ridge pitch psi obeys
    tan(psi / 2) = tan(alpha) * sin(beta) for wing tilt beta.
    """
    a = math.radians(0.5 * params.theta)
    b = math.radians(wing_tilt_deg)
    return math.degrees(2.0 * math.atan(math.tan(a) * math.sin(b)))


def wing_tilt_for_pitch(params, arm_pitch):
    """Inverse of arm_pitch_deg: wing tilt (degrees) giving the pitch."""
    a = math.radians(0.5 * params.theta)
    t = math.tan(math.radians(0.5 * arm_pitch)) / math.tan(a)
    t = max(-1.0, min(1.0, t))
    return math.degrees(math.asin(t))


def folded_positions(params, wing_tilt_deg):
    """Strain-free folded pose: every panel placed by a rigid motion.

    Wings rotate about the x axis by the tilt; the flap/arm assembly follows
    the vertex kinematics. The ridge keypoints stay in the xz plane; the arm
    tip is continued from the flat pose so the fold branch is unambiguous.
    If the pose dips below ground it is rigidly raised to touch z = 0.
    """
    x2, y2 = _sector_xy(params.theta)
    l = params.arm_length
    beta = math.radians(wing_tilt_deg)
    sb, cb = math.sin(beta), math.cos(beta)

    def wing_pt(x, y):
        return (x, y * cb, abs(y) * sb)

    pos = {
        0: (0.0, 0.0, 0.0),
        1: (SPINE_MID_X, 0.0, 0.0),
        9: (TAIL_X, 0.0, 0.0),
        2: (x2, y2 * cb, y2 * sb),
        6: (x2, -y2 * cb, y2 * sb),
        3: wing_pt(*WING_BACK),
        4: wing_pt(*WING_FRONT),
        5: wing_pt(WING_BACK[0], -WING_BACK[1]),
        7: wing_pt(WING_FRONT[0], -WING_FRONT[1]),
    }
    c, s = x2, y2  # sector keypoint in its flat position

    psi = 2.0 * math.atan(math.tan(math.radians(0.5 * params.theta)) * sb)
    x8 = ARM_BASE_X * math.cos(psi)
    z8 = ARM_BASE_X * math.sin(psi)
    pos[8] = (x8, 0.0, z8)

    # arm tip: intersection of |8-10| and |2-10| distance constraints in the
    # xz plane, followed from the flat pose in small tilt increments so the
    # quadratic always takes the physical branch
    x10, z10 = l, 0.0
    n_sub = 48
    for k in range(1, n_sub + 1):
        bk = beta * k / n_sub
        sbk = math.sin(bk)
        psik = 2.0 * math.atan(math.tan(math.radians(0.5 * params.theta)) * sbk)
        x8k = ARM_BASE_X * math.cos(psik)
        z8k = ARM_BASE_X * math.sin(psik)
        a1 = c - x8k
        b1 = s * sbk - z8k
        c1 = l * (c - ARM_BASE_X)
        rr = (l - ARM_BASE_X) ** 2
        # line a1*x + b1*z = c1 intersected with circle about (x8k, z8k),
        # solved in coordinates shifted to the circle center
        g = c1 - a1 * x8k - b1 * z8k
        if abs(b1) >= abs(a1):
            qa = 1.0 + (a1 / b1) ** 2
            qb = -2.0 * (a1 / b1) * (g / b1)
            qc = (g / b1) ** 2 - rr
            disc = qb * qb - 4.0 * qa * qc
            disc = math.sqrt(disc) if disc > 0.0 else 0.0
            r1 = (-qb + disc) / (2.0 * qa)
            r2 = (-qb - disc) / (2.0 * qa)
            cands = [
                (x8k + w, z8k + (g - a1 * w) / b1) for w in (r1, r2)
            ]
        else:
            qa = 1.0 + (b1 / a1) ** 2
            qb = -2.0 * (b1 / a1) * (g / a1)
            qc = (g / a1) ** 2 - rr
            disc = qb * qb - 4.0 * qa * qc
            disc = math.sqrt(disc) if disc > 0.0 else 0.0
            r1 = (-qb + disc) / (2.0 * qa)
            r2 = (-qb - disc) / (2.0 * qa)
            cands = [
                (x8k + (g - b1 * w) / a1, z8k + w) for w in (r1, r2)
            ]
        x10, z10 = min(
            cands, key=lambda p: (p[0] - x10) ** 2 + (p[1] - z10) ** 2
        )
    pos[10] = (x10, 0.0, z10)

    lift = -min(p[2] for p in pos.values())
    if lift > 0.0:
        pos = {k: (p[0], p[1], p[2] + lift) for k, p in pos.items()}
    return pos


# --- throw protocol ---------------------------------------------------------

@dataclass(frozen=True)
class ThrowProtocol:
    sphere_mass: float = 0.001
    sphere_radius: float = 0.01
    drop_clearance: float = 0.002      # sphere surface above the arm tip
    # every design folds its wings down by the same tilt; whether that turns
    # the arm pair into an upward-opening scoop (and how steep) is decided by
    # the sector angle. The tilt is chosen so a mid-range design pitches its
    # arm to -60 degrees. Reflex sectors fold the arm into a ridge instead
    # and throw poorly, which is the point.
    fold_tilt_deg: float = -21.37
    # one positional command shared by every design: both wing corners are
    # driven outward by this displacement, whatever the fold travel is
    squeeze_displacement: float = 0.0100
    settle_persist_steps: int = 10     # consecutive contact steps = settled
    settle_dwell: float = 0.05         # s between settling and firing
    settle_timeout: float = 0.6        # s; trigger fires here regardless
    trigger_step: int | None = None    # fixed-step override
    max_speed: float = 0.21            # m/s servo slew at the wing corners
    # servo force scales with the corner keypoint's lumped mass; the default
    # engine gain cannot hold the hanging wings against gravity. Kept
    # work-limited: a stronger servo pays the lifting cost of any arm length
    # and the distance landscape flattens in arm_length
    gain: float = 500.0
    tip_speed_target: float = 2.08     # rad/s reference peak, diagnostics
    axis: str = "x"


def _throw_events(protocol, trigger_step):
    """Hold-then-fling servo schedule, identical for all designs.

    A zero-displacement hold pins both wing corners at their folded position
    from the first step, so the pose survives however long settling takes.
    The fling event is superposed on the hold at the trigger: two equal-gain
    servos average their targets, so it carries twice the commanded
    displacement and twice the slew to net the protocol's values.
    """
    hold = dict(trigger_step=0, max_speed=protocol.max_speed, gain=protocol.gain)
    dy = 2.0 * protocol.squeeze_displacement
    fling = dict(
        trigger_step=trigger_step,
        max_speed=2.0 * protocol.max_speed,
        gain=protocol.gain,
    )
    return (
        ActuationEvent(keypoint_ids=(4,), axis="y", target_displacement=0.0, **hold),
        ActuationEvent(keypoint_ids=(7,), axis="y", target_displacement=0.0, **hold),
        ActuationEvent(keypoint_ids=(4,), axis="y", target_displacement=+dy, **fling),
        ActuationEvent(keypoint_ids=(7,), axis="y", target_displacement=-dy, **fling),
    )


def _drop_point(pattern, mesh, pose, protocol):
    """Sphere center above the arm tip, raised until it clears the sheet.

    The folded channel walls can be steep at the tip, so "radius plus
    clearance above the tip vertex" may intersect them; the center is lifted
    in 1 mm increments until every triangle is at least clearance away.
    """
    from .engine.kernels_py import _closest_point_triangle

    tx, ty, tz = pose[10]
    gap = protocol.sphere_radius + protocol.drop_clearance
    z = tz + gap
    tris = [tuple(t) for _, t in mesh.triangles]
    for _ in range(1000):
        clear = True
        for a, b, c in tris:
            pa, pb, pc = pose[a], pose[b], pose[c]
            qx, qy, qz, _, _, _ = _closest_point_triangle(
                tx, ty, z, pa[0], pa[1], pa[2],
                pb[0], pb[1], pb[2], pc[0], pc[1], pc[2],
            )
            if (tx - qx) ** 2 + (ty - qy) ** 2 + (z - qz) ** 2 < gap * gap:
                clear = False
                break
        if clear:
            return (tx, ty, z)
        z += 0.001
    return (tx, ty, z)


def throw_setup(params, protocol=None, material=None, scene=None):
    """Assembled simulation + folded pose + payload scene for one design.

    Returns (sim, initial_positions, fold0_deg). The returned sim's scene
    carries the payload sphere hovering over the arm tip.
    """
    protocol = protocol or ThrowProtocol()
    material = material or THROW_MATERIAL
    scene = scene or THROW_SCENE
    pattern, mesh = build_catapult(params)
    fold0 = protocol.fold_tilt_deg
    pose = folded_positions(params, fold0)
    payload = RigidSphere(
        mass=protocol.sphere_mass,
        radius=protocol.sphere_radius,
        initial_position=_drop_point(pattern, mesh, pose, protocol),
    )
    scene = scene.with_(payload=payload)
    sim = assemble(pattern, mesh, material, scene)
    return sim, pose, fold0


def _find_settle_step(sim, initial_positions, protocol, events):
    """First step with sphere contact persisting settle_persist_steps.

    Runs under the same event schedule as the throw; only the hold servos
    produce force this early, so the search replays bit-for-bit as the
    pre-trigger part of the final rollout.
    """
    state = rollout.make_state(sim, initial_positions)
    base = state.positions.copy()
    limit = int(round(protocol.settle_timeout / sim.scene.dt))
    streak = 0
    while state.step < limit:
        state = rollout.step(sim, state, events=events, base_positions=base)
        _, _, contact = rollout.contact_forces(sim, state)
        streak = streak + 1 if contact else 0
        if streak >= protocol.settle_persist_steps:
            return state.step
    return limit


def throw_details(params, protocol=None, material=None, scene=None):
    """Full rollout record: (distance, trajectory, trigger_step, events)."""
    protocol = protocol or ThrowProtocol()
    sim, pose, fold0 = throw_setup(params, protocol, material, scene)
    if protocol.trigger_step is not None:
        trigger = protocol.trigger_step
    else:
        # the fling events are forceless until their trigger, so searching
        # with a sentinel far past the timeout replays the real pre-trigger
        # dynamics exactly
        sentinel = _throw_events(protocol, 1 << 30)
        trigger = _find_settle_step(sim, pose, protocol, sentinel)
        trigger += int(round(protocol.settle_dwell / sim.scene.dt))
    events = _throw_events(protocol, trigger)
    traj = rollout.run_rollout(
        None, None, sim=sim, events=events, initial_positions=pose
    )
    return (
        rollout.throw_distance(traj, protocol.axis),
        traj,
        trigger,
        events,
    )


def evaluate(params, protocol=None, material=None, scene=None):
    """Throwing distance (m) for one design; deterministic."""
    distance, _, _, _ = throw_details(params, protocol, material, scene)
    return distance


# --- parameter sweep --------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    theta: float
    arm_length: float
    distance: float
    failed: bool


def _grid(lo, hi, n):
    if n == 1:
        return [lo]
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def sweep(
    theta_range=THETA_RANGE,
    l_range=ARM_RANGE,
    grid_dims=(72, 40),
    protocol=None,
    material=None,
    scene=None,
    progress=None,
):
    """Evaluate every grid point (endpoints inclusive), row-major in theta.

    Failed or diverged rollouts score 0.0 with the failed flag set; the grid
    is never aborted. Rows come back in deterministic grid order.
    """
    nt, nl = grid_dims
    if nt < 1 or nl < 1:
        raise ValueError("grid_dims must be positive")
    rows = []
    thetas = _grid(theta_range[0], theta_range[1], nt)
    arms = _grid(l_range[0], l_range[1], nl)
    total = nt * nl
    for ti, theta in enumerate(thetas):
        for li, arm in enumerate(arms):
            try:
                d = evaluate(
                    CatapultParams(theta=theta, arm_length=arm),
                    protocol, material, scene,
                )
                rows.append(SweepRow(theta, arm, d, False))
            except errors.FoldsimError:
                rows.append(SweepRow(theta, arm, 0.0, True))
            if progress is not None:
                progress(ti * nl + li + 1, total)
    return rows


def write_heatmap_csv(rows, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["theta_deg", "l_m", "distance_m", "failed"])
        for r in rows:
            w.writerow(
                [repr(r.theta), repr(r.arm_length), repr(r.distance),
                 int(r.failed)]
            )


def bin_rows(rows, bins=(12, 10), theta_range=THETA_RANGE, l_range=ARM_RANGE):
    """Average the sweep into a coarse grid of (theta, l) bins."""
    nt, nl = bins
    t_lo, t_hi = theta_range
    l_lo, l_hi = l_range
    acc = {}
    for r in rows:
        bi = min(int((r.theta - t_lo) / (t_hi - t_lo) * nt), nt - 1)
        bj = min(int((r.arm_length - l_lo) / (l_hi - l_lo) * nl), nl - 1)
        tot, cnt = acc.get((bi, bj), (0.0, 0))
        acc[(bi, bj)] = (tot + r.distance, cnt + 1)
    out = []
    for (bi, bj), (tot, cnt) in sorted(acc.items()):
        out.append(
            {
                "theta_bin_lo": t_lo + (t_hi - t_lo) * bi / nt,
                "theta_bin_hi": t_lo + (t_hi - t_lo) * (bi + 1) / nt,
                "l_bin_lo": l_lo + (l_hi - l_lo) * bj / nl,
                "l_bin_hi": l_lo + (l_hi - l_lo) * (bj + 1) / nl,
                "mean_distance_m": tot / cnt,
                "count": cnt,
            }
        )
    return out


def write_binned_csv(binned, path):
    cols = [
        "theta_bin_lo", "theta_bin_hi", "l_bin_lo", "l_bin_hi",
        "mean_distance_m", "count",
    ]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(cols)
        for row in binned:
            w.writerow(
                [repr(row[c]) if isinstance(row[c], float) else row[c]
                 for c in cols]
            )

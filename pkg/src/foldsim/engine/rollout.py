"""Rollout driver: state construction, stepping, trajectories, throw metric."""

import math
from dataclasses import dataclass, field

import numpy as np

from .. import errors
from . import kernels
from .types import ActuationEvent, Frame, Trajectory

AXIS_INDEX = {"x": 0, "y": 1, "z": 2}

STOP_SPEED = 1e-3    # m/s
STOP_WINDOW = 0.2    # s of sustained rest before early stop
DEFAULT_FRAME_STRIDE = 20


@dataclass
class SimState:
    time: float
    step: int
    positions: np.ndarray      # (n, 3)
    velocities: np.ndarray     # (n, 3)
    sphere: np.ndarray | None  # (6,) pos+vel or None
    rest_counter: int = 0

    def copy(self):
        return SimState(
            time=self.time,
            step=self.step,
            positions=self.positions.copy(),
            velocities=self.velocities.copy(),
            sphere=None if self.sphere is None else self.sphere.copy(),
            rest_counter=self.rest_counter,
        )


def make_state(sim, initial_positions=None):
    """Fresh state at t=0. initial_positions: id -> 3-vector overrides."""
    pos = sim.pos0.copy()
    if initial_positions is not None:
        if isinstance(initial_positions, dict):
            for kp_id, p in initial_positions.items():
                if kp_id not in sim.id2idx:
                    raise errors.UnknownKeypoint(
                        f"initial position for unknown keypoint {kp_id}",
                        entity=kp_id,
                    )
                pos[sim.id2idx[kp_id]] = p
        else:
            arr = np.asarray(initial_positions, dtype=np.float64)
            if arr.shape != pos.shape:
                raise errors.LengthMismatch(
                    f"initial_positions shape {arr.shape} != {pos.shape}",
                )
            pos = arr.copy()
    vel = np.zeros_like(pos)
    sphere = None
    if sim.scene.payload is not None:
        sphere = np.zeros(6, dtype=np.float64)
        sphere[:3] = sim.scene.payload.initial_position
    return SimState(time=0.0, step=0, positions=pos, velocities=vel, sphere=sphere)


def _flatten_events(sim, events, base_positions):
    """One row per (event, keypoint); validates actuation annotations."""
    rows_idx, rows_axis, rows_base, rows_target = [], [], [], []
    rows_trigger, rows_vmax, rows_gain = [], [], []
    for ev in events:
        ax = AXIS_INDEX[ev.axis]
        for kp_id in ev.keypoint_ids:
            if kp_id not in sim.id2idx:
                raise errors.UnknownKeypoint(
                    f"actuation event targets unknown keypoint {kp_id}",
                    entity=kp_id,
                )
            declared = sim.actuated_axis.get(kp_id)
            if declared != ev.axis:
                raise errors.NotActuatedKeypoint(
                    f"keypoint {kp_id} is not actuated on axis {ev.axis!r}",
                    entity=kp_id,
                )
            i = sim.id2idx[kp_id]
            rows_idx.append(i)
            rows_axis.append(ax)
            rows_base.append(float(base_positions[i, ax]))
            rows_target.append(float(ev.target_displacement))
            rows_trigger.append(int(ev.trigger_step))
            rows_vmax.append(float(ev.max_speed))
            rows_gain.append(float(ev.gain))
    return (
        np.asarray(rows_idx, dtype=np.int32),
        np.asarray(rows_axis, dtype=np.int32),
        np.asarray(rows_base, dtype=np.float64),
        np.asarray(rows_target, dtype=np.float64),
        np.asarray(rows_trigger, dtype=np.int64),
        np.asarray(rows_vmax, dtype=np.float64),
        np.asarray(rows_gain, dtype=np.float64),
    )


_EMPTY_EVENTS = (
    np.zeros(0, dtype=np.int32),
    np.zeros(0, dtype=np.int32),
    np.zeros(0, dtype=np.float64),
    np.zeros(0, dtype=np.float64),
    np.zeros(0, dtype=np.int64),
    np.zeros(0, dtype=np.float64),
    np.zeros(0, dtype=np.float64),
)


def _dummy_sphere():
    return np.zeros(6, dtype=np.float64)


def membrane_forces(sim, state):
    lam, mu = sim.material.lame()
    return kernels.membrane_forces_arrays(
        state.positions, sim.tri, sim.dm_inv, sim.rest_area,
        lam, mu, sim.material.thickness,
    )


def hinge_forces(sim, state):
    return kernels.hinge_forces_arrays(
        state.positions, sim.hinge, sim.hinge_rest,
        sim.material.panel_bend_stiffness,
    )


def contact_forces(sim, state):
    """Returns (keypoint forces, sphere force, contact flag)."""
    g = sim.scene.ground
    payload = sim.scene.payload
    sphere_enabled = state.sphere is not None and payload is not None
    return kernels.contact_forces_arrays(
        state.positions, state.velocities,
        state.sphere if sphere_enabled else _dummy_sphere(),
        1 if sphere_enabled else 0,
        sim.tri, sim.mass,
        payload.mass if payload else 1.0,
        payload.radius if payload else 1.0,
        g.contact_stiffness, g.contact_damping, g.friction_coeff,
        sim.scene.dt, 1 if g.enabled else 0,
    )


def apply_actuation(sim, state, events, base_positions=None):
    """Servo forces at the state's step; base defaults to rollout-start pose."""
    base = base_positions if base_positions is not None else state.positions
    flat = _flatten_events(sim, events, base)
    return kernels.actuation_forces_arrays(
        state.positions, state.velocities, sim.mass,
        *flat, state.step, sim.scene.dt,
    )


def _advance(sim, state, flat_events, n_steps, stop_steps):
    g = sim.scene.ground
    payload = sim.scene.payload
    lam, mu = sim.material.lame()
    sphere_enabled = state.sphere is not None and payload is not None
    sph = state.sphere if sphere_enabled else _dummy_sphere()
    status, steps_done, rc = kernels.advance_arrays(
        state.positions, state.velocities, sph,
        sim.tri, sim.dm_inv, sim.rest_area, sim.hinge, sim.hinge_rest,
        sim.mass, sim.dof_free,
        lam, mu, sim.material.thickness,
        sim.material.panel_bend_stiffness, sim.material.damping,
        sim.scene.gravity[0], sim.scene.gravity[1], sim.scene.gravity[2],
        sim.scene.dt,
        1 if g.enabled else 0,
        g.contact_stiffness, g.contact_damping, g.friction_coeff,
        1 if sphere_enabled else 0,
        payload.mass if payload else 1.0,
        payload.radius if payload else 1.0,
        *flat_events,
        state.step, n_steps, STOP_SPEED, stop_steps, state.rest_counter,
    )
    state.step += steps_done
    state.time = state.step * sim.scene.dt
    state.rest_counter = rc
    return status, steps_done


def step(sim, state, events=(), base_positions=None):
    """One integration step; returns a new state (input untouched)."""
    out = state.copy()
    if events:
        base = base_positions if base_positions is not None else state.positions
        flat = _flatten_events(sim, events, base)
    else:
        flat = _EMPTY_EVENTS
    status, _ = _advance(sim, out, flat, 1, stop_steps=1 << 62)
    if status == 2:
        raise errors.NumericalBlowup(
            f"position exceeded 1e3 m at step {out.step}", entity=out.step
        )
    return out


def _record_frame(traj, state):
    fr = Frame(
        step=state.step,
        time=state.time,
        positions=[[float(v) for v in row] for row in state.positions],
        velocities=[[float(v) for v in row] for row in state.velocities],
    )
    if state.sphere is not None:
        fr.sphere_position = [float(v) for v in state.sphere[:3]]
        fr.sphere_velocity = [float(v) for v in state.sphere[3:]]
    traj.frames.append(fr)


def run_rollout(
    pattern, mesh, material=None, scene=None, events=(),
    *, initial_positions=None, frame_stride=DEFAULT_FRAME_STRIDE, sim=None,
):
    """Integrate to max_time or sphere rest; returns the sampled Trajectory."""
    from .assembly import assemble

    if sim is None:
        sim = assemble(pattern, mesh, material, scene)
    state = make_state(sim, initial_positions)
    flat = (
        _flatten_events(sim, events, state.positions)
        if events else _EMPTY_EVENTS
    )
    dt = sim.scene.dt
    max_steps = int(round(sim.scene.max_time / dt))
    stop_steps = int(round(STOP_WINDOW / dt))

    traj = Trajectory(keypoint_ids=list(sim.kp_ids), backend=kernels.BACKEND_NAME)
    _record_frame(traj, state)
    while state.step < max_steps:
        chunk = min(frame_stride, max_steps - state.step)
        status, _ = _advance(sim, state, flat, chunk, stop_steps)
        _record_frame(traj, state)
        if status == 1:
            traj.sphere_at_rest = True
            traj.stopped_step = state.step
            break
        if status == 2:
            raise errors.NumericalBlowup(
                f"position exceeded 1e3 m at step {state.step}",
                entity=state.step,
            )
    return traj


def throw_distance(trajectory, axis="x"):
    """|final - initial| sphere coordinate along axis, at verified rest."""
    ax = AXIS_INDEX[axis]
    frames = trajectory.frames
    if not frames or frames[0].sphere_position is None:
        raise errors.SphereNeverAtRest(
            "trajectory has no sphere states", entity=axis
        )
    if not trajectory.sphere_at_rest:
        raise errors.SphereNeverAtRest(
            "sphere never satisfied the rest condition", entity=axis
        )
    return abs(frames[-1].sphere_position[ax] - frames[0].sphere_position[ax])

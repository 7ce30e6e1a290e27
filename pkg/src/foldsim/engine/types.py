"""Value types shared across the simulation engine."""

import json
from dataclasses import dataclass, field, replace


@dataclass(frozen=True)
class MaterialParams:
    youngs_modulus: float = 1e7        # Pa
    poisson_ratio: float = 0.3
    thickness: float = 0.002           # m
    density: float = 1270.0            # kg/m^3, PETG-like
    panel_bend_stiffness: float = 0.05  # N*m/rad on non-crease interior edges
    damping: float = 2.0               # 1/s, mass-proportional

    def __post_init__(self):
        if not (0.0 <= self.poisson_ratio <= 0.49):
            raise ValueError("poisson_ratio must be in [0, 0.49]")
        for name in ("youngs_modulus", "thickness", "density", "damping"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")
        if self.panel_bend_stiffness < 0.0:
            raise ValueError("panel_bend_stiffness must be >= 0")

    def lame(self):
        """Plane-stress Lame parameters (lam, mu) for thin sheets."""
        e, nu = self.youngs_modulus, self.poisson_ratio
        mu = e / (2.0 * (1.0 + nu))
        lam = e * nu / (1.0 - nu * nu)
        return lam, mu

    def with_(self, **kw):
        return replace(self, **kw)


@dataclass(frozen=True)
class GroundConfig:
    enabled: bool = True
    contact_stiffness: float = 1e4   # N/m
    contact_damping: float = 10.0    # N*s/m
    friction_coeff: float = 0.5

    def __post_init__(self):
        for name in ("contact_stiffness", "contact_damping", "friction_coeff"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be >= 0")


@dataclass(frozen=True)
class RigidSphere:
    mass: float = 0.001   # kg
    radius: float = 0.01  # m
    initial_position: tuple = (0.0, 0.0, 1.0)

    def __post_init__(self):
        if self.mass <= 0.0 or self.radius <= 0.0:
            raise ValueError("sphere mass and radius must be positive")
        object.__setattr__(
            self, "initial_position", tuple(float(v) for v in self.initial_position)
        )


@dataclass(frozen=True)
class SceneConfig:
    gravity: tuple = (0.0, 0.0, -9.81)
    ground: GroundConfig = field(default_factory=GroundConfig)
    payload: RigidSphere | None = None
    dt: float = 5e-4
    max_time: float = 5.0

    def __post_init__(self):
        if self.dt <= 0.0:
            raise ValueError("dt must be positive")
        object.__setattr__(self, "gravity", tuple(float(v) for v in self.gravity))

    def with_(self, **kw):
        return replace(self, **kw)


@dataclass(frozen=True)
class ActuationEvent:
    keypoint_ids: tuple
    axis: str                      # "x" | "y" | "z"
    target_displacement: float     # m, signed, along axis
    trigger_step: int = 10
    max_speed: float = 0.21        # m/s reference slew limit
    gain: float = 60.0             # 1/s servo frequency

    def __post_init__(self):
        object.__setattr__(self, "keypoint_ids", tuple(int(v) for v in self.keypoint_ids))
        if self.axis not in ("x", "y", "z"):
            raise ValueError(f"unknown axis {self.axis!r}")
        if self.trigger_step < 0:
            raise ValueError("trigger_step must be >= 0")
        if self.max_speed <= 0.0 or self.gain <= 0.0:
            raise ValueError("max_speed and gain must be positive")


@dataclass
class Frame:
    step: int
    time: float
    positions: list            # n x 3 nested lists, keypoint id order
    velocities: list
    sphere_position: list | None = None
    sphere_velocity: list | None = None

    def to_dict(self):
        d = {
            "step": self.step,
            "time": self.time,
            "positions": self.positions,
            "velocities": self.velocities,
        }
        if self.sphere_position is not None:
            d["sphere_position"] = self.sphere_position
            d["sphere_velocity"] = self.sphere_velocity
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(
            step=d["step"],
            time=d["time"],
            positions=d["positions"],
            velocities=d["velocities"],
            sphere_position=d.get("sphere_position"),
            sphere_velocity=d.get("sphere_velocity"),
        )


@dataclass
class Trajectory:
    keypoint_ids: list
    frames: list = field(default_factory=list)
    sphere_at_rest: bool = False
    stopped_step: int | None = None
    backend: str = ""

    def final_frame(self):
        return self.frames[-1]

    def dumps_jsonl(self):
        """One JSON object per line: a header then every frame.

        repr-roundtrip floats keep the dump bit-faithful to the run.
        """
        header = {
            "keypoint_ids": self.keypoint_ids,
            "sphere_at_rest": self.sphere_at_rest,
            "stopped_step": self.stopped_step,
            "backend": self.backend,
        }
        lines = [json.dumps(header, separators=(",", ":"))]
        for fr in self.frames:
            lines.append(json.dumps(fr.to_dict(), separators=(",", ":")))
        return "\n".join(lines) + "\n"

    @classmethod
    def loads_jsonl(cls, text):
        lines = [ln for ln in text.splitlines() if ln.strip()]
        header = json.loads(lines[0])
        traj = cls(
            keypoint_ids=header["keypoint_ids"],
            sphere_at_rest=header["sphere_at_rest"],
            stopped_step=header["stopped_step"],
            backend=header.get("backend", ""),
        )
        traj.frames = [Frame.from_dict(json.loads(ln)) for ln in lines[1:]]
        return traj

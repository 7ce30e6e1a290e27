"""Run-setup files: material, scene, and actuation events as one JSON doc.

A design file says what the sheet is; a setup file says how to drive it.
Keeping them separate lets one design run under many scenes (and the other
way round) without either file growing modes.
"""

import json
from dataclasses import dataclass, field

from .engine.types import (
    ActuationEvent,
    GroundConfig,
    MaterialParams,
    RigidSphere,
    SceneConfig,
)

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class RunSetup:
    material: MaterialParams = field(default_factory=MaterialParams)
    scene: SceneConfig = field(default_factory=SceneConfig)
    events: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))


def to_dict(setup):
    m, s = setup.material, setup.scene
    doc = {
        "version": SCHEMA_VERSION,
        "material": {
            "youngs_modulus": m.youngs_modulus,
            "poisson_ratio": m.poisson_ratio,
            "thickness": m.thickness,
            "density": m.density,
            "panel_bend_stiffness": m.panel_bend_stiffness,
            "damping": m.damping,
        },
        "scene": {
            "gravity": list(s.gravity),
            "ground": {
                "enabled": s.ground.enabled,
                "contact_stiffness": s.ground.contact_stiffness,
                "contact_damping": s.ground.contact_damping,
                "friction_coeff": s.ground.friction_coeff,
            },
            "payload": None,
            "dt": s.dt,
            "max_time": s.max_time,
        },
        "events": [
            {
                "keypoint_ids": list(ev.keypoint_ids),
                "axis": ev.axis,
                "target_displacement": ev.target_displacement,
                "trigger_step": ev.trigger_step,
                "max_speed": ev.max_speed,
                "gain": ev.gain,
            }
            for ev in setup.events
        ],
    }
    if s.payload is not None:
        doc["scene"]["payload"] = {
            "mass": s.payload.mass,
            "radius": s.payload.radius,
            "initial_position": list(s.payload.initial_position),
        }
    return doc


def _build(cls, data, what):
    try:
        return cls(**data)
    except TypeError as exc:
        # surfaces unknown keys with the file's vocabulary, not the class's
        raise ValueError(f"bad {what} section: {exc}") from None


def from_dict(data):
    if data.get("version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported setup file version {data.get('version')!r}")
    sd = dict(data.get("scene", {}))
    gd = sd.pop("ground", None)
    if gd is not None:
        sd["ground"] = _build(GroundConfig, gd, "ground")
    pd = sd.pop("payload", None)
    if pd is not None:
        sd["payload"] = _build(RigidSphere, pd, "payload")
    return RunSetup(
        material=_build(MaterialParams, data.get("material", {}), "material"),
        scene=_build(SceneConfig, sd, "scene"),
        events=tuple(
            _build(ActuationEvent, ed, "event") for ed in data.get("events", [])
        ),
    )


def dumps(setup):
    return json.dumps(to_dict(setup), indent=2) + "\n"


def loads(text):
    return from_dict(json.loads(text))


def save(setup, path):
    with open(path, "w") as fh:
        fh.write(dumps(setup))


def load(path):
    with open(path) as fh:
        return from_dict(json.load(fh))

"""Simulation engine: backend selection happens here, once, at import.

FOLDSIM_BACKEND=python forces the pure-Python kernels; FOLDSIM_BACKEND=compiled
requires the extension and raises if it is missing. Default: compiled when
available, Python otherwise. Both expose the same array API and produce
bit-identical trajectories (see tests/test_backend_parity.py).
"""

import os

from . import kernels_py

_choice = os.environ.get("FOLDSIM_BACKEND", "auto").lower()

if _choice == "python":
    kernels = kernels_py
elif _choice == "compiled":
    from . import _kernels as kernels  # noqa: F401 - hard requirement
else:
    try:
        from . import _kernels as kernels
    except ImportError:
        kernels = kernels_py

BACKEND = kernels.BACKEND_NAME

from .assembly import Simulation, assemble, build_hinges
from .rollout import (
    apply_actuation,
    contact_forces,
    hinge_forces,
    make_state,
    membrane_forces,
    run_rollout,
    step,
    throw_distance,
)
from .types import (
    ActuationEvent,
    Frame,
    GroundConfig,
    MaterialParams,
    RigidSphere,
    SceneConfig,
    Trajectory,
)

__all__ = [
    "ActuationEvent",
    "BACKEND",
    "Frame",
    "GroundConfig",
    "MaterialParams",
    "RigidSphere",
    "SceneConfig",
    "Simulation",
    "Trajectory",
    "apply_actuation",
    "assemble",
    "build_hinges",
    "contact_forces",
    "hinge_forces",
    "kernels",
    "make_state",
    "membrane_forces",
    "run_rollout",
    "step",
    "throw_distance",
]

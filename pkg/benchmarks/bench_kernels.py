"""Compiled vs pure-Python kernel timing on two representative workloads.

Backend choice is locked in at import, so each backend runs in its own
subprocess and reports timings as JSON on stdout. Run from the repo root:

    python3 benchmarks/bench_kernels.py
"""

import json
import os
import subprocess
import sys

CHILD = r"""
import json, time
from foldsim import catapult, fixtures, panels
from foldsim.engine import BACKEND, rollout
from foldsim.engine.types import SceneConfig

out = {"backend": BACKEND}

# settle: a passive sheet dropped on the ground, no payload
pat = fixtures.build("corrugation")
mesh = panels.mesh_pattern(pat)
scene = SceneConfig(dt=2.5e-4, max_time=1.0)
rollout.run_rollout(pat, mesh, scene=scene)          # warm-up
t0 = time.perf_counter()
traj = rollout.run_rollout(pat, mesh, scene=scene)
out["settle_s"] = time.perf_counter() - t0
out["settle_steps"] = traj.frames[-1].step

# throw: the full evaluate pipeline, contact + payload + servos
params = catapult.CatapultParams(115.5, 0.102)
catapult.evaluate(params)                            # warm-up
t0 = time.perf_counter()
d = catapult.evaluate(params)
out["throw_s"] = time.perf_counter() - t0
out["throw_distance"] = d
print(json.dumps(out))
"""


def run_backend(name):
    env = dict(os.environ, FOLDSIM_BACKEND=name)
    proc = subprocess.run(
        [sys.executable, "-c", CHILD],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    return json.loads(proc.stdout.splitlines()[-1])


def main():
    results = [run_backend("python"), run_backend("compiled")]
    py, cc = results
    if py["throw_distance"] != cc["throw_distance"]:
        print("WARNING: backends disagree on throw distance", file=sys.stderr)
    print(f"{'workload':<10} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for key, label in (("settle_s", "settle"), ("throw_s", "throw")):
        ratio = py[key] / cc[key]
        print(f"{label:<10} {py[key]:>9.3f}s {cc[key]:>9.3f}s {ratio:>7.1f}x")
    steps = py["settle_steps"]
    print(f"\nsettle is {steps} integration steps; "
          f"throw includes settle detection and rest detection.")


if __name__ == "__main__":
    main()

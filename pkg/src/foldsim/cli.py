"""Command line front end.

Every subcommand finishes with one JSON summary line on stdout so scripts can
consume results without scraping; anything chattier goes to files. Exit codes:
0 success, 1 domain error (validation failures, simulation faults), 2 usage.
"""

import argparse
import json
import os
import sys
import time

from . import __version__, catapult, cma, design, errors, mjcf, panels, scenes
from .engine import rollout

DEFAULT_PORT = int(os.environ.get("FOLDSIM_PORT", "8765"))
DEFAULT_DATA_DIR = os.environ.get("FOLDSIM_DATA_DIR", "./foldsim-data")


def _summary(payload):
    print(json.dumps(payload))


def _fail(exc):
    if isinstance(exc, errors.FoldsimError):
        print(json.dumps(exc.to_dict()), file=sys.stderr)
    else:
        print(str(exc), file=sys.stderr)
    return 1


def _grid_spec(text):
    try:
        a, b = text.lower().split("x")
        cols, rows = int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"grid must look like 72x40, got {text!r}"
        ) from None
    if cols < 2 or rows < 2:
        raise argparse.ArgumentTypeError("grid needs at least 2 points per axis")
    return cols, rows


def _range_spec(text):
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"range must look like LO:HI, got {text!r}"
        ) from None
    if not lo < hi:
        raise argparse.ArgumentTypeError("range must have LO < HI")
    return lo, hi


def cmd_validate(args):
    pattern = design.load(args.design)
    violations = design.validate(pattern, include_warnings=args.warnings)
    for v in violations:
        print(f"{v.code}: {v.message}", file=sys.stderr)
    _summary(
        {
            "command": "validate",
            "design": pattern.name,
            "violations": len(violations),
            "ok": not violations,
        }
    )
    return 0 if not violations else 1


def cmd_mesh(args):
    pattern = design.load(args.design)
    mesh = panels.mesh_pattern(pattern)
    _summary(
        {
            "command": "mesh",
            "design": pattern.name,
            "keypoints": len(pattern.keypoints),
            "triangles": len(mesh.triangles),
            "panels": len(pattern.panels),
        }
    )
    return 0


def cmd_export(args):
    pattern = design.load(args.design)
    mesh = panels.mesh_pattern(pattern)
    setup = scenes.load(args.scene) if args.scene else scenes.RunSetup()
    doc = mjcf.export_mjcf(pattern, mesh, scene=setup.scene, material=setup.material)
    with open(args.out, "w") as fh:
        fh.write(doc.xml_text)
    audit = mjcf.check_mjcf(doc, pattern, mesh)
    for v in audit:
        print(f"{v.code}: {v.message}", file=sys.stderr)
    _summary(
        {
            "command": "export",
            "design": pattern.name,
            "out": args.out,
            "audit_failures": len(audit),
            **doc.stats,
        }
    )
    return 0 if not audit else 1


def cmd_simulate(args):
    pattern = design.load(args.design)
    mesh = panels.mesh_pattern(pattern)
    setup = scenes.load(args.scene) if args.scene else scenes.RunSetup()
    t0 = time.perf_counter()
    traj = rollout.run_rollout(
        pattern,
        mesh,
        material=setup.material,
        scene=setup.scene,
        events=setup.events,
        frame_stride=args.stride,
    )
    elapsed = time.perf_counter() - t0
    if args.frames:
        with open(args.frames, "w") as fh:
            fh.write(traj.dumps_jsonl())
    last = traj.final_frame()
    _summary(
        {
            "command": "simulate",
            "design": pattern.name,
            "frames": len(traj.frames),
            "final_time": last.time,
            "sphere_at_rest": traj.sphere_at_rest,
            "stopped_step": traj.stopped_step,
            "backend": traj.backend,
            "wall_seconds": round(elapsed, 3),
        }
    )
    return 0


def cmd_sweep(args):
    cols, rows_n = args.grid
    t0 = time.perf_counter()
    rows = catapult.sweep(args.theta, args.arm, grid_dims=(cols, rows_n))
    catapult.write_heatmap_csv(rows, args.out)
    failed = sum(1 for r in rows if r.failed)
    _summary(
        {
            "command": "sweep",
            "grid": f"{cols}x{rows_n}",
            "rows": len(rows),
            "failed": failed,
            "best": max((r.distance for r in rows), default=0.0),
            "out": args.out,
            "wall_seconds": round(time.perf_counter() - t0, 3),
        }
    )
    return 0


def cmd_optimize(args):
    t0 = time.perf_counter()
    result = cma.optimize_catapult(
        seed=args.seed,
        generations=args.generations,
        sigma0=args.sigma,
        population=args.population,
    )
    cma.write_result(result, args.out)
    if args.trajectory:
        cma.write_trajectory_csv(result, args.trajectory)
    _summary(
        {
            "command": "optimize",
            "seed": args.seed,
            "generations": result.records[-1].generation,
            "best_params": list(result.best_params),
            "best_fitness": result.best_fitness,
            "out": args.out,
            "wall_seconds": round(time.perf_counter() - t0, 3),
        }
    )
    return 0


def cmd_serve(args):
    import uvicorn

    from .server import create_app

    app = create_app(args.data_dir)
    _summary({"command": "serve", "port": args.port, "data_dir": args.data_dir})
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="foldsim",
        description="Crease-pattern design, simulation, and throw optimization.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("validate", help="check a design file against the editing rules")
    q.add_argument("design")
    q.add_argument("--warnings", action="store_true", help="include advisory checks")
    q.set_defaults(fn=cmd_validate)

    q = sub.add_parser("mesh", help="triangulate all panels and report sizes")
    q.add_argument("design")
    q.set_defaults(fn=cmd_mesh)

    q = sub.add_parser("export", help="write the simulator model XML")
    q.add_argument("design")
    q.add_argument("--out", required=True)
    q.add_argument("--scene", help="run-setup JSON for material/scene sections")
    q.set_defaults(fn=cmd_export)

    q = sub.add_parser("simulate", help="run a rollout and optionally dump frames")
    q.add_argument("design")
    q.add_argument("--scene", help="run-setup JSON (material, scene, events)")
    q.add_argument("--frames", help="write sampled frames as JSON lines")
    q.add_argument("--stride", type=int, default=rollout.DEFAULT_FRAME_STRIDE)
    q.set_defaults(fn=cmd_simulate)

    q = sub.add_parser("sweep", help="grid-evaluate the throwing template")
    q.add_argument("--grid", type=_grid_spec, default=(72, 40), metavar="TxL")
    q.add_argument(
        "--theta", type=_range_spec, default=catapult.THETA_RANGE, metavar="LO:HI"
    )
    q.add_argument(
        "--arm", type=_range_spec, default=catapult.ARM_RANGE, metavar="LO:HI"
    )
    q.add_argument("--out", required=True)
    q.set_defaults(fn=cmd_sweep)

    q = sub.add_parser("optimize", help="run the evolution strategy on the template")
    q.add_argument("--sigma", type=float, default=0.025)
    q.add_argument("--generations", type=int, default=200)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--population", type=int, default=None)
    q.add_argument("--out", required=True)
    q.add_argument("--trajectory", help="also write the per-generation CSV here")
    q.set_defaults(fn=cmd_optimize)

    q = sub.add_parser("serve", help="start the local JSON service")
    q.add_argument("--port", type=int, default=DEFAULT_PORT)
    q.add_argument("--host", default="127.0.0.1")
    q.add_argument("--data-dir", default=DEFAULT_DATA_DIR)
    q.set_defaults(fn=cmd_serve)

    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (errors.FoldsimError, ValueError, OSError) as exc:
        return _fail(exc)


if __name__ == "__main__":
    sys.exit(main())

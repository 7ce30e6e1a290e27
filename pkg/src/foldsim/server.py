"""Local JSON service over the design/simulate/optimize pipeline.

State lives on disk under one data directory (designs/ and jobs/), so a
restart loses nothing but in-flight jobs. Design mutations serialize through
a per-id lock; files are written atomically so readers always see a complete
document. Long work runs on a small worker pool and is polled through the
jobs endpoints rather than blocking a request.
"""

import json
import os
import re
import tempfile
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from fastapi import FastAPI, Query
from fastapi.responses import JSONResponse, PlainTextResponse

from . import catapult, cma, design, errors, fixtures, mjcf, panels, scenes
from .engine import rollout

ID_PATTERN = re.compile(r"^[A-Za-z0-9_-]{1,64}$")
FRAME_PAGE_LIMIT = 200
WORKERS = 2


class HttpFault(Exception):
    """A non-domain request failure with an explicit status class."""

    def __init__(self, status, code, message, entity=None):
        super().__init__(message)
        self.status = status
        self.payload = {"code": code, "message": message, "entity": entity}


def _atomic_write(path, text):
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _require(body, key):
    if key not in body:
        raise HttpFault(400, "MissingField", f"body needs {key!r}", entity=key)
    return body[key]


def _check_id(value, what):
    if not isinstance(value, str) or not ID_PATTERN.match(value):
        raise HttpFault(
            400, "BadId", f"{what} must match {ID_PATTERN.pattern}", entity=value
        )
    return value


class DesignStore:
    """One JSON file per design; a lock per id serializes writers."""

    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._locks = {}
        self._meta = threading.Lock()

    def lock(self, design_id):
        with self._meta:
            return self._locks.setdefault(design_id, threading.Lock())

    def path(self, design_id):
        return self.root / f"{design_id}.json"

    def ids(self):
        return sorted(p.stem for p in self.root.glob("*.json"))

    def load(self, design_id):
        path = self.path(design_id)
        if not path.exists():
            raise HttpFault(
                404, "UnknownDesign", f"no design {design_id!r}", entity=design_id
            )
        return design.loads(path.read_text())

    def save(self, design_id, pattern):
        _atomic_write(self.path(design_id), design.dumps(pattern))


class JobStore:
    """Job records and artifacts under jobs/{id}/; status only moves forward."""

    ORDER = {"queued": 0, "running": 1, "done": 2, "failed": 2}

    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def job_dir(self, job_id):
        return self.root / job_id

    def create(self, kind):
        job_id = uuid.uuid4().hex[:12]
        d = self.job_dir(job_id)
        d.mkdir(parents=True)
        record = {
            "id": job_id,
            "kind": kind,
            "status": "queued",
            "progress": 0.0,
            "result": None,
            "error": None,
        }
        _atomic_write(d / "record.json", json.dumps(record))
        return record

    def read(self, job_id):
        path = self.job_dir(job_id) / "record.json"
        if not path.exists():
            raise HttpFault(404, "UnknownJob", f"no job {job_id!r}", entity=job_id)
        return json.loads(path.read_text())

    def update(self, job_id, **changes):
        with self._lock:
            record = self.read(job_id)
            new_status = changes.get("status", record["status"])
            if self.ORDER[new_status] < self.ORDER[record["status"]]:
                return record  # terminal states and running never roll back
            record.update(changes)
            _atomic_write(self.job_dir(job_id) / "record.json", json.dumps(record))
            return record


def _setup_from(body):
    doc = body.get("setup")
    if doc is None:
        return scenes.RunSetup()
    return scenes.from_dict(doc)


def create_app(data_dir):
    data = Path(data_dir)
    designs = DesignStore(data / "designs")
    jobs = JobStore(data / "jobs")
    pool = ThreadPoolExecutor(max_workers=WORKERS)
    app = FastAPI(title="foldsim", version="1")

    @app.exception_handler(errors.FoldsimError)
    def _domain_error(request, exc):
        return JSONResponse(status_code=422, content=exc.to_dict())

    @app.exception_handler(HttpFault)
    def _http_fault(request, exc):
        return JSONResponse(status_code=exc.status, content=exc.payload)

    @app.exception_handler(ValueError)
    def _bad_doc(request, exc):
        return JSONResponse(
            status_code=400,
            content={"code": "BadDocument", "message": str(exc), "entity": None},
        )

    # -- designs -------------------------------------------------------------

    @app.get("/health")
    def health():
        return {"ok": True, "version": design.SCHEMA_VERSION}

    @app.get("/designs")
    def list_designs():
        return {"ids": designs.ids()}

    @app.post("/designs")
    def create_design(body: dict):
        pattern = design.from_dict(_require(body, "design"))
        design_id = body.get("id") or uuid.uuid4().hex[:12]
        _check_id(design_id, "design id")
        with designs.lock(design_id):
            designs.save(design_id, pattern)
        return {"id": design_id, "design": design.to_dict(pattern)}

    @app.get("/designs/{design_id}")
    def get_design(design_id: str):
        return design.to_dict(designs.load(design_id))

    @app.post("/designs/{design_id}/keypoints")
    def add_keypoint(design_id: str, body: dict):
        act = body.get("actuation")
        with designs.lock(design_id):
            pattern = designs.load(design_id)
            new_id = design.add_keypoint(
                pattern,
                tuple(_require(body, "pos")),
                dof_mask=tuple(body.get("dof", (True, True, True))),
                actuation=act["axis"] if act else None,
            )
            designs.save(design_id, pattern)
        return {"keypoint_id": new_id, "design": design.to_dict(pattern)}

    @app.post("/designs/{design_id}/edges")
    def add_edge(design_id: str, body: dict):
        with designs.lock(design_id):
            pattern = designs.load(design_id)
            design.add_edge(
                pattern,
                int(_require(body, "a")),
                int(_require(body, "b")),
                body.get("kind", design.CREASE),
            )
            designs.save(design_id, pattern)
        return {"design": design.to_dict(pattern)}

    @app.post("/designs/{design_id}/merge")
    def merge(design_id: str, body: dict):
        with designs.lock(design_id):
            pattern = designs.load(design_id)
            design.merge_keypoints(
                pattern,
                int(_require(body, "survivor")),
                int(_require(body, "victim")),
                unify_edges=bool(body.get("unify_edges", False)),
            )
            designs.save(design_id, pattern)
        return {"design": design.to_dict(pattern)}

    @app.post("/designs/{design_id}/panel-detect")
    def panel_detect(design_id: str, body: dict):
        click = _require(body, "click")
        with designs.lock(design_id):
            pattern = designs.load(design_id)
            panel = panels.detect_panel(pattern, (float(click[0]), float(click[1])))
            pattern.panels.append(panel)
            designs.save(design_id, pattern)
        return {"cycle": list(panel.cycle), "design": design.to_dict(pattern)}

    @app.get("/designs/{design_id}/mesh")
    def get_mesh(design_id: str):
        pattern = designs.load(design_id)
        mesh = panels.mesh_pattern(pattern)
        return {
            "triangles": [
                {"panel": pi, "ids": list(tri)} for pi, tri in mesh.triangles
            ],
            "constrained_edges": sorted(list(e) for e in mesh.constrained_edges),
        }

    @app.post("/designs/{design_id}/export")
    def export(design_id: str, body: dict = None):
        setup = _setup_from(body or {})
        pattern = designs.load(design_id)
        mesh = panels.mesh_pattern(pattern)
        doc = mjcf.export_mjcf(
            pattern, mesh, scene=setup.scene, material=setup.material
        )
        return PlainTextResponse(doc.xml_text, media_type="application/xml")

    # -- fixtures ------------------------------------------------------------

    @app.get("/fixtures")
    def list_fixtures():
        return {"names": fixtures.names()}

    @app.get("/fixtures/{name}")
    def get_fixture(name: str):
        try:
            return design.to_dict(fixtures.load(name))
        except KeyError as exc:
            raise HttpFault(404, "UnknownFixture", str(exc), entity=name) from None

    # -- jobs ----------------------------------------------------------------

    def _run_job(job_id, work):
        jobs.update(job_id, status="running")
        try:
            result = work()
        except errors.FoldsimError as exc:
            jobs.update(job_id, status="failed", error=exc.to_dict())
        except Exception as exc:  # noqa: BLE001 - recorded, not raised
            jobs.update(
                job_id,
                status="failed",
                error={"code": "Internal", "message": str(exc), "entity": None},
            )
        else:
            jobs.update(job_id, status="done", progress=1.0, result=result)

    def _submit(kind, make_work):
        record = jobs.create(kind)
        pool.submit(_run_job, record["id"], make_work(record["id"]))
        return {"id": record["id"], "status": record["status"]}

    @app.post("/jobs/simulate")
    def job_simulate(body: dict):
        design_id = _check_id(_require(body, "design_id"), "design id")
        setup = _setup_from(body)
        stride = int(body.get("stride", rollout.DEFAULT_FRAME_STRIDE))
        pattern = designs.load(design_id)  # fail fast on unknown ids

        def make_work(job_id):
            def work():
                mesh = panels.mesh_pattern(pattern)
                traj = rollout.run_rollout(
                    pattern,
                    mesh,
                    material=setup.material,
                    scene=setup.scene,
                    events=setup.events,
                    frame_stride=stride,
                )
                _atomic_write(jobs.job_dir(job_id) / "frames.jsonl", traj.dumps_jsonl())
                last = traj.final_frame()
                return {
                    "design_id": design_id,
                    "frames": len(traj.frames),
                    "final_time": last.time,
                    "sphere_at_rest": traj.sphere_at_rest,
                    "stopped_step": traj.stopped_step,
                    "backend": traj.backend,
                }

            return work

        return _submit("simulate", make_work)

    @app.post("/jobs/sweep")
    def job_sweep(body: dict):
        grid = body.get("grid", [72, 40])
        theta = body.get("theta", list(catapult.THETA_RANGE))
        arm = body.get("arm", list(catapult.ARM_RANGE))

        def make_work(job_id):
            def tick(done, total):
                if done % 20 == 0 or done == total:
                    jobs.update(job_id, progress=done / total)

            def work():
                rows = catapult.sweep(
                    tuple(theta),
                    tuple(arm),
                    grid_dims=(int(grid[0]), int(grid[1])),
                    progress=tick,
                )
                catapult.write_heatmap_csv(rows, jobs.job_dir(job_id) / "heatmap.csv")
                return {
                    "rows": len(rows),
                    "failed": sum(1 for r in rows if r.failed),
                    "best": max((r.distance for r in rows), default=0.0),
                    "artifact": "heatmap.csv",
                }

            return work

        return _submit("sweep", make_work)

    @app.post("/jobs/optimize")
    def job_optimize(body: dict):
        seed = int(body.get("seed", 0))
        generations = int(body.get("generations", 200))
        sigma0 = float(body.get("sigma", 0.025))
        population = body.get("population")

        def make_work(job_id):
            def tick(gen, total):
                jobs.update(job_id, progress=gen / total)

            def work():
                result = cma.optimize_catapult(
                    seed=seed,
                    generations=generations,
                    sigma0=sigma0,
                    population=None if population is None else int(population),
                    progress=tick,
                )
                d = jobs.job_dir(job_id)
                cma.write_result(result, d / "result.txt")
                cma.write_trajectory_csv(result, d / "trajectory.csv")
                return {
                    "seed": seed,
                    "generations": result.records[-1].generation,
                    "best_params": list(result.best_params),
                    "best_fitness": result.best_fitness,
                    "artifacts": ["result.txt", "trajectory.csv"],
                }

            return work

        return _submit("optimize", make_work)

    @app.get("/jobs/{job_id}")
    def get_job(job_id: str):
        return jobs.read(job_id)

    @app.get("/jobs/{job_id}/frames")
    def get_frames(
        job_id: str,
        start: int = Query(0, alias="from", ge=0),
        limit: int = Query(FRAME_PAGE_LIMIT, ge=1, le=FRAME_PAGE_LIMIT),
    ):
        record = jobs.read(job_id)
        path = jobs.job_dir(job_id) / "frames.jsonl"
        frames = []
        total = 0
        if path.exists():
            lines = [ln for ln in path.read_text().splitlines() if ln.strip()]
            total = max(len(lines) - 1, 0)  # first line is the header
            for ln in lines[1 + start : 1 + start + limit]:
                frames.append(json.loads(ln))
        return {
            "from": start,
            "frames": frames,
            "next": start + len(frames),
            "total": total,
            "complete": record["status"] in ("done", "failed"),
        }

    @app.get("/jobs/{job_id}/artifacts/{name}")
    def get_artifact(job_id: str, name: str):
        jobs.read(job_id)
        if name not in ("heatmap.csv", "result.txt", "trajectory.csv", "frames.jsonl"):
            raise HttpFault(404, "UnknownArtifact", f"no artifact {name!r}", entity=name)
        path = jobs.job_dir(job_id) / name
        if not path.exists():
            raise HttpFault(404, "UnknownArtifact", f"{name} not written", entity=name)
        return PlainTextResponse(path.read_text(), media_type="text/plain")

    return app

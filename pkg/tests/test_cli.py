"""End-to-end checks of the command line front end.

Each subcommand must end with exactly one JSON summary line on stdout and
follow the exit-code contract: 0 success, 1 domain error, 2 usage. Most
tests drive cli.main() in process for speed; a few go through a real
subprocess to pin down the installed entry point and argparse's own exits.
"""

import json
import subprocess
import sys

import pytest

from foldsim import __version__, cli, design, fixtures, scenes
from foldsim.engine import types


def run_cli(argv, capsys):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def last_json(stdout):
    return json.loads(stdout.strip().splitlines()[-1])


def run_proc(argv):
    return subprocess.run(
        [sys.executable, "-m", "foldsim.cli", *argv],
        capture_output=True,
        text=True,
    )


@pytest.fixture
def catapult_file(tmp_path):
    path = tmp_path / "catapult.json"
    design.save(fixtures.build("catapult"), str(path))
    return str(path)


def test_version_flag():
    proc = run_proc(["--version"])
    assert proc.returncode == 0
    assert proc.stdout.strip() == f"foldsim {__version__}"


def test_no_arguments_is_a_usage_error():
    proc = run_proc([])
    assert proc.returncode == 2
    assert "usage:" in proc.stderr


def test_unknown_subcommand_is_a_usage_error():
    proc = run_proc(["frobnicate"])
    assert proc.returncode == 2
    assert "usage:" in proc.stderr


def test_validate_clean_design(catapult_file, capsys):
    code, out, err = run_cli(["validate", catapult_file], capsys)
    assert code == 0
    assert err == ""
    summary = last_json(out)
    assert summary == {
        "command": "validate",
        "design": "catapult",
        "violations": 0,
        "ok": True,
    }


def test_validate_reports_violations(tmp_path, capsys):
    pattern = fixtures.build("catapult")
    pattern.edges.append(design.Edge(a=4, b=4, kind=design.BOUNDARY))
    path = tmp_path / "broken.json"
    design.save(pattern, str(path))

    code, out, err = run_cli(["validate", str(path)], capsys)
    assert code == 1
    assert "SelfEdge" in err
    summary = last_json(out)
    assert summary["ok"] is False
    assert summary["violations"] >= 1


def test_validate_missing_file(tmp_path, capsys):
    code, out, err = run_cli(["validate", str(tmp_path / "nope.json")], capsys)
    assert code == 1
    assert out == ""
    assert "nope.json" in err


def test_mesh_summary(catapult_file, capsys):
    code, out, err = run_cli(["mesh", catapult_file], capsys)
    assert code == 0
    summary = last_json(out)
    assert summary == {
        "command": "mesh",
        "design": "catapult",
        "keypoints": 11,
        "triangles": 12,
        "panels": 6,
    }


def test_export_writes_model_xml(catapult_file, tmp_path, capsys):
    out_path = tmp_path / "model.xml"
    code, out, err = run_cli(
        ["export", catapult_file, "--out", str(out_path)], capsys
    )
    assert code == 0
    assert err == ""
    summary = last_json(out)
    assert summary["audit_failures"] == 0
    assert summary["flex_count"] == 6
    assert summary["actuator_count"] == 2
    assert out_path.read_text().startswith("<mujoco")


def test_export_honors_scene_file(catapult_file, tmp_path, capsys):
    setup = scenes.RunSetup(
        scene=types.SceneConfig(
            payload=types.RigidSphere(initial_position=(0.1, 0.0, 0.05))
        )
    )
    scene_path = tmp_path / "setup.json"
    scenes.save(setup, str(scene_path))
    out_path = tmp_path / "model.xml"

    code, out, err = run_cli(
        ["export", catapult_file, "--out", str(out_path), "--scene", str(scene_path)],
        capsys,
    )
    assert code == 0
    summary = last_json(out)
    # 11 keypoint bodies plus the payload sphere
    assert summary["body_count"] == 12
    assert "payload" in out_path.read_text()


def test_simulate_writes_frame_dump(tmp_path, capsys):
    pattern = fixtures.build("three_arm_star")
    design_path = tmp_path / "star.json"
    design.save(pattern, str(design_path))
    setup = scenes.RunSetup(scene=types.SceneConfig(dt=1e-4, max_time=0.01))
    scene_path = tmp_path / "setup.json"
    scenes.save(setup, str(scene_path))
    frames_path = tmp_path / "frames.jsonl"

    code, out, err = run_cli(
        [
            "simulate",
            str(design_path),
            "--scene",
            str(scene_path),
            "--frames",
            str(frames_path),
            "--stride",
            "25",
        ],
        capsys,
    )
    assert code == 0
    summary = last_json(out)
    assert summary["frames"] == 5  # steps 0,25,50,75,100
    assert summary["final_time"] == pytest.approx(0.01)
    assert summary["backend"] in ("python", "compiled")

    traj = types.Trajectory.loads_jsonl(frames_path.read_text())
    assert len(traj.frames) == summary["frames"]
    assert traj.frames[-1].step == 100


def test_simulate_surfaces_blowup_as_domain_error(tmp_path, capsys):
    # fine meshes are unstable at the coarse default step; the CLI must
    # report that as a domain failure, not a traceback
    pattern = fixtures.build("gripper")
    design_path = tmp_path / "gripper.json"
    design.save(pattern, str(design_path))

    code, out, err = run_cli(["simulate", str(design_path)], capsys)
    assert code == 1
    assert out == ""
    detail = json.loads(err.strip().splitlines()[-1])
    assert detail["code"] == "NumericalBlowup"


def test_sweep_summary_and_csv(tmp_path, capsys):
    out_path = tmp_path / "heatmap.csv"
    code, out, err = run_cli(
        [
            "sweep",
            "--grid",
            "2x2",
            "--theta",
            "110:130",
            "--arm",
            "0.10:0.12",
            "--out",
            str(out_path),
        ],
        capsys,
    )
    assert code == 0
    summary = last_json(out)
    assert summary["grid"] == "2x2"
    assert summary["rows"] == 4
    assert summary["failed"] == 0
    assert summary["best"] > 0.0
    lines = out_path.read_text().strip().splitlines()
    assert lines[0] == "theta_deg,l_m,distance_m,failed"
    assert len(lines) == 5


def test_sweep_rejects_degenerate_grid(tmp_path):
    proc = run_proc(["sweep", "--grid", "1x5", "--out", str(tmp_path / "x.csv")])
    assert proc.returncode == 2
    assert "at least 2 points" in proc.stderr


def test_sweep_rejects_inverted_range(tmp_path):
    proc = run_proc(
        ["sweep", "--theta", "130:110", "--out", str(tmp_path / "x.csv")]
    )
    assert proc.returncode == 2
    assert "LO < HI" in proc.stderr


def test_optimize_smoke(tmp_path, capsys):
    out_path = tmp_path / "result.txt"
    csv_path = tmp_path / "trajectory.csv"
    code, out, err = run_cli(
        [
            "optimize",
            "--seed",
            "0",
            "--generations",
            "2",
            "--population",
            "4",
            "--out",
            str(out_path),
            "--trajectory",
            str(csv_path),
        ],
        capsys,
    )
    assert code == 0
    summary = last_json(out)
    assert summary["generations"] == 2
    assert len(summary["best_params"]) == 2
    assert summary["best_fitness"] > 0.0
    assert out_path.read_text().startswith("cma-es result\n")
    csv_lines = csv_path.read_text().strip().splitlines()
    assert csv_lines[0] == "generation,theta_deg,l_m,fitness_m,sigma"
    assert len(csv_lines) == 4  # header + generations 0..2

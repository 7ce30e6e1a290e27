import numpy as np
import pytest

from foldsim import design, errors, panels
from foldsim.design import CREASE, CreasePattern
from foldsim.engine import assembly, kernels, kernels_py, rollout
from foldsim.engine.types import (
    GroundConfig,
    MaterialParams,
    RigidSphere,
    SceneConfig,
)

DT = 1e-4
KN = 1e4
DN = 10.0
MU = 0.5

NO_TRI = np.zeros((0, 3), dtype=np.int32)
NO_SPHERE = np.zeros(6)


def ground_force(pos, vel, mass):
    f, _, _ = kernels.contact_forces_arrays(
        np.asarray(pos, dtype=np.float64),
        np.asarray(vel, dtype=np.float64),
        NO_SPHERE, 0, NO_TRI,
        np.asarray(mass, dtype=np.float64),
        1.0, 1.0, KN, DN, MU, DT, 1,
    )
    return f


def test_ground_normal_force_formula():
    m = 0.004
    f = ground_force([[0, 0, -0.001]], [[0, 0, -0.1]], [m])
    dn_eff = min(DN, m / (2 * DT))  # the cap engages for light nodes
    assert f[0, 2] == pytest.approx(KN * 0.001 + dn_eff * 0.1, rel=1e-12)
    assert f[0, 0] == 0.0 and f[0, 1] == 0.0


def test_ground_ignores_airborne_and_never_sucks():
    f = ground_force([[0, 0, 0.01]], [[0, 0, -1.0]], [0.004])
    assert np.all(f == 0.0)
    # separating fast: damping would make fn negative; clamp to zero
    f = ground_force([[0, 0, -1e-5]], [[0, 0, 5.0]], [0.004])
    assert f[0, 2] == 0.0


def test_ground_friction_coulomb_branch():
    m = 0.004
    pos = [[0, 0, -0.002]]
    vel = [[2.0, 0.0, 0.0]]
    f = ground_force(pos, vel, [m])
    fn = f[0, 2]
    assert fn > 0.0
    # fast sliding: Coulomb cap is the smaller bound
    assert MU * fn < m * 2.0 / DT
    assert f[0, 0] == pytest.approx(-MU * fn, rel=1e-12)


def test_ground_friction_full_stop_branch():
    m = 0.004
    vslow = 1e-4
    f = ground_force([[0, 0, -0.002]], [[vslow, 0.0, 0.0]], [m])
    # slow sliding: the stopping force m v / dt undercuts the Coulomb cap
    assert m * vslow / DT < MU * f[0, 2]
    assert f[0, 0] == pytest.approx(-m * vslow / DT, rel=1e-12)


def test_ground_friction_opposes_motion_direction():
    f = ground_force([[0, 0, -0.002]], [[1.0, 1.0, 0.0]], [0.004])
    assert f[0, 0] == pytest.approx(f[0, 1])
    assert f[0, 0] < 0.0


def _sphere_state(center, vel=(0, 0, 0)):
    s = np.zeros(6)
    s[:3] = center
    s[3:] = vel
    return s


def test_sphere_on_ground():
    radius, ms = 0.01, 0.002
    sph = _sphere_state((0, 0, 0.008), (0.5, 0, -0.1))
    f, fs, contact = kernels.contact_forces_arrays(
        np.zeros((0, 3)), np.zeros((0, 3)), sph, 1, NO_TRI,
        np.zeros(0), ms, radius, KN, DN, MU, DT, 1,
    )
    assert contact == 1
    dn_eff = min(DN, ms / (2 * DT))
    fn = KN * (radius - 0.008) + dn_eff * 0.1
    assert fs[2] == pytest.approx(fn, rel=1e-12)
    ft = min(MU * fn, ms * 0.5 / DT)
    assert fs[0] == pytest.approx(-ft, rel=1e-12)  # sliding in +x


def test_sphere_face_contact_action_reaction():
    # one big triangle in the z=0 plane; sphere overlaps its interior
    pos = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    vel = np.zeros((3, 3))
    tri = np.array([[0, 1, 2]], dtype=np.int32)
    radius, ms = 0.05, 0.002
    sph = _sphere_state((0.2, 0.2, 0.03))
    f, fs, contact = kernels.contact_forces_arrays(
        pos, vel, sph, 1, tri, np.full(3, 0.01), ms, radius, KN, DN, MU, DT, 0,
    )
    assert contact == 1
    assert fs[2] == pytest.approx(KN * (radius - 0.03), rel=1e-12)
    assert fs[0] == pytest.approx(0.0, abs=1e-10)  # roundoff in the normal
    np.testing.assert_allclose(f.sum(axis=0), -fs, rtol=0, atol=1e-12)
    # barycentric split at (0.2, 0.2): 60/20/20
    np.testing.assert_allclose(f[0, 2], -0.6 * fs[2], rtol=1e-12)
    np.testing.assert_allclose(f[1, 2], -0.2 * fs[2], rtol=1e-12)


def test_sphere_vertex_contact_loads_one_keypoint():
    pos = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    tri = np.array([[0, 1, 2]], dtype=np.int32)
    sph = _sphere_state((-0.02, -0.02, 0.0))
    f, fs, contact = kernels.contact_forces_arrays(
        pos, np.zeros((3, 3)), sph, 1, tri, np.full(3, 0.01),
        0.002, 0.05, KN, DN, MU, DT, 0,
    )
    assert contact == 1
    assert np.all(f[1] == 0.0) and np.all(f[2] == 0.0)
    np.testing.assert_allclose(f[0], -np.asarray(fs), rtol=0, atol=1e-15)


def test_sphere_uses_contact_point_velocity():
    # mesh moving with the sphere: no relative motion, no damping term
    pos = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    vel = np.full((3, 3), 0.0)
    vel[:, 0] = 0.3
    tri = np.array([[0, 1, 2]], dtype=np.int32)
    sph = _sphere_state((0.2, 0.2, 0.03), (0.3, 0, 0))
    f, fs, _ = kernels.contact_forces_arrays(
        pos, vel, sph, 1, tri, np.full(3, 0.01), 0.002, 0.05, KN, DN, MU, DT, 0,
    )
    assert fs[0] == pytest.approx(0.0, abs=1e-10)  # no friction drag
    assert fs[2] == pytest.approx(KN * 0.02, rel=1e-12)


CP_CASES = [
    # (point, expected closest, expected barycentric)
    ((0.2, 0.2, 0.5), (0.2, 0.2, 0.0), (0.6, 0.2, 0.2)),   # interior
    ((-1.0, -1.0, 0.0), (0.0, 0.0, 0.0), (1.0, 0.0, 0.0)),  # vertex A
    ((2.0, -0.1, 0.0), (1.0, 0.0, 0.0), (0.0, 1.0, 0.0)),   # vertex B
    ((-0.1, 2.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)),   # vertex C
    ((0.5, -1.0, 0.3), (0.5, 0.0, 0.0), (0.5, 0.5, 0.0)),   # edge AB
    ((-1.0, 0.5, 0.0), (0.0, 0.5, 0.0), (0.5, 0.0, 0.5)),   # edge AC
    ((1.0, 1.0, 0.0), (0.5, 0.5, 0.0), (0.0, 0.5, 0.5)),    # edge BC
]


@pytest.mark.parametrize("p,q_ref,bary_ref", CP_CASES)
def test_closest_point_regions(p, q_ref, bary_ref):
    out = kernels_py._closest_point_triangle(
        *p, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0
    )
    np.testing.assert_allclose(out[:3], q_ref, rtol=0, atol=1e-15)
    np.testing.assert_allclose(out[3:], bary_ref, rtol=0, atol=1e-15)


def test_closest_point_random_vs_sampling():
    rng = np.random.default_rng(12)
    for _ in range(40):
        a, b, c = rng.standard_normal((3, 3))
        p = 2.0 * rng.standard_normal(3)
        qx, qy, qz, u, v, w = kernels_py._closest_point_triangle(*p, *a, *b, *c)
        q = np.array([qx, qy, qz])
        # barycentric consistency
        np.testing.assert_allclose(u * a + v * b + w * c, q, atol=1e-12)
        assert min(u, v, w) >= -1e-12 and abs(u + v + w - 1.0) < 1e-12
        # no sampled point of the triangle may beat the reported distance
        grid = np.linspace(0.0, 1.0, 60)
        uu, vv = np.meshgrid(grid, grid)
        keep = uu + vv <= 1.0
        uu, vv = uu[keep], vv[keep]
        pts = (
            np.outer(1.0 - uu - vv, a) + np.outer(uu, b) + np.outer(vv, c)
        )
        d_samp = np.sqrt(((pts - p) ** 2).sum(axis=1)).min()
        d_code = np.linalg.norm(q - p)
        assert d_code <= d_samp + 1e-12
        edge = max(np.linalg.norm(b - a), np.linalg.norm(c - a))
        assert d_code >= d_samp - edge / 30.0


def _plate_sim(scene):
    pat = CreasePattern(name="plate")
    for p in [(-0.05, -0.05), (0.05, -0.05), (0.05, 0.05), (-0.05, 0.05)]:
        design.add_keypoint(pat, p, dof_mask=(False, False, False))
    for a, b in [(0, 1), (1, 2), (2, 3), (3, 0)]:
        design.add_edge(pat, a, b, kind=CREASE)
    pat.panels.append(panels.detect_panel(pat, (0.0, 0.0)))
    mesh = panels.mesh_pattern(pat)
    return pat, mesh, assembly.assemble(pat, mesh, MaterialParams(), scene)


def test_dropped_sphere_settles_and_reports_rest():
    radius = 0.01
    scene = SceneConfig(
        payload=RigidSphere(mass=0.001, radius=radius, initial_position=(0.0, 0.0, 0.05)),
        dt=DT,
        max_time=3.0,
        ground=GroundConfig(contact_stiffness=KN, friction_coeff=MU),
    )
    pat, mesh, sim = _plate_sim(scene)
    traj = rollout.run_rollout(pat, mesh, sim=sim)
    assert traj.sphere_at_rest
    assert traj.stopped_step is not None
    final = traj.frames[-1].sphere_position
    assert abs(final[2] - radius) < 1e-4
    assert abs(final[0]) < 1e-6 and abs(final[1]) < 1e-6
    assert rollout.throw_distance(traj) < 1e-6


def test_throw_distance_requires_rest():
    radius = 0.01
    scene = SceneConfig(
        payload=RigidSphere(mass=0.001, radius=radius, initial_position=(0.0, 0.0, 0.3)),
        dt=DT,
        max_time=0.01,  # ends while the sphere is still falling
    )
    pat, mesh, sim = _plate_sim(scene)
    traj = rollout.run_rollout(pat, mesh, sim=sim)
    assert not traj.sphere_at_rest
    with pytest.raises(errors.SphereNeverAtRest):
        rollout.throw_distance(traj)


def test_throw_distance_requires_sphere():
    scene = SceneConfig(dt=DT, max_time=0.01)
    pat, mesh, sim = _plate_sim(scene)
    traj = rollout.run_rollout(pat, mesh, sim=sim)
    with pytest.raises(errors.SphereNeverAtRest):
        rollout.throw_distance(traj)

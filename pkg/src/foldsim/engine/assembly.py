"""Turn a pattern + mesh into packed simulation arrays.

Keypoints become point masses (lumped from incident triangle mass), panel
triangles become constant-strain membrane elements with rest shape taken
from the flat pattern coordinates, and every interior non-crease triangle
pair gets a bending hinge. Creases get nothing, which is exactly what makes
them fold freely.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .. import errors
from ..design import CREASE
from .types import MaterialParams, SceneConfig

DEGENERATE_AREA = 1e-12  # m^2


@dataclass
class Simulation:
    kp_ids: list                 # sorted keypoint ids; row order for all arrays
    id2idx: dict
    pos0: np.ndarray             # (n, 3) pattern positions
    dof_free: np.ndarray         # (n, 3) uint8, 1 = free
    mass: np.ndarray             # (n,)
    tri: np.ndarray              # (m, 3) int32 indices
    tri_panel: np.ndarray        # (m,) int32 panel index
    dm_inv: np.ndarray           # (m, 4) rows of the 2x2 inverse rest matrix
    rest_area: np.ndarray        # (m,)
    hinge: np.ndarray            # (h, 4) int32: edge i0-i1, opposite i2, i3
    hinge_rest: np.ndarray       # (h,) rest dihedral
    actuated_axis: dict          # kp id -> axis name
    material: MaterialParams = field(default_factory=MaterialParams)
    scene: SceneConfig = field(default_factory=SceneConfig)

    @property
    def n_keypoints(self):
        return len(self.kp_ids)

    @property
    def n_triangles(self):
        return self.tri.shape[0]


def _dihedral(p, i0, i1, i2, i3):
    ex, ey, ez = p[i1][0] - p[i0][0], p[i1][1] - p[i0][1], p[i1][2] - p[i0][2]
    ax, ay, az = p[i2][0] - p[i0][0], p[i2][1] - p[i0][1], p[i2][2] - p[i0][2]
    bx, by, bz = p[i3][0] - p[i0][0], p[i3][1] - p[i0][1], p[i3][2] - p[i0][2]
    nax, nay, naz = ey * az - ez * ay, ez * ax - ex * az, ex * ay - ey * ax
    nbx, nby, nbz = by * ez - bz * ey, bz * ex - bx * ez, bx * ey - by * ex
    le = math.sqrt(ex * ex + ey * ey + ez * ez)
    cxx = nay * nbz - naz * nby
    cxy = naz * nbx - nax * nbz
    cxz = nax * nby - nay * nbx
    s = (cxx * ex + cxy * ey + cxz * ez) / le
    c = nax * nbx + nay * nby + naz * nbz
    return math.atan2(s, c)


def build_hinges(mesh, crease_keys, id2idx):
    """Stencils for interior non-crease triangle-pair edges, id-sorted."""
    owners = {}
    for t_index, (_pi, tri) in enumerate(mesh.triangles):
        for k in range(3):
            a, b = tri[k], tri[(k + 1) % 3]
            key = (a, b) if a < b else (b, a)
            owners.setdefault(key, []).append(t_index)
    stencils = []
    for key in sorted(owners):
        if key in crease_keys or len(owners[key]) != 2:
            continue
        t1 = mesh.triangles[owners[key][0]][1]
        t2 = mesh.triangles[owners[key][1]][1]
        opp1 = next(v for v in t1 if v not in key)
        opp2 = next(v for v in t2 if v not in key)
        stencils.append(
            (id2idx[key[0]], id2idx[key[1]], id2idx[opp1], id2idx[opp2])
        )
    return stencils


def assemble(pattern, mesh, material=None, scene=None):
    material = material or MaterialParams()
    scene = scene or SceneConfig()

    kp_ids = sorted(kp.id for kp in pattern.keypoints)
    id2idx = {kp_id: i for i, kp_id in enumerate(kp_ids)}
    kps = {kp.id: kp for kp in pattern.keypoints}

    n = len(kp_ids)
    pos0 = np.zeros((n, 3), dtype=np.float64)
    dof_free = np.zeros((n, 3), dtype=np.uint8)
    for kp_id, i in id2idx.items():
        kp = kps[kp_id]
        pos0[i] = kp.position
        dof_free[i] = [1 if f else 0 for f in kp.dof_mask]

    m = len(mesh.triangles)
    tri = np.zeros((m, 3), dtype=np.int32)
    tri_panel = np.zeros(m, dtype=np.int32)
    dm_inv = np.zeros((m, 4), dtype=np.float64)
    rest_area = np.zeros(m, dtype=np.float64)
    mass = np.zeros(n, dtype=np.float64)

    for t_index, (panel_index, (ia, ib, ic)) in enumerate(mesh.triangles):
        i, j, k = id2idx[ia], id2idx[ib], id2idx[ic]
        tri[t_index] = (i, j, k)
        tri_panel[t_index] = panel_index
        x1 = pos0[j, 0] - pos0[i, 0]
        y1 = pos0[j, 1] - pos0[i, 1]
        x2 = pos0[k, 0] - pos0[i, 0]
        y2 = pos0[k, 1] - pos0[i, 1]
        det = x1 * y2 - x2 * y1
        area = 0.5 * det
        if area < DEGENERATE_AREA:
            raise errors.DegenerateRestTriangle(
                f"triangle {(ia, ib, ic)} rest area {area:.3e} m^2",
                entity=(ia, ib, ic),
            )
        rest_area[t_index] = area
        # inverse of [[x1, x2], [y1, y2]]
        dm_inv[t_index] = (y2 / det, -x2 / det, -y1 / det, x1 / det)
        node_mass = material.density * material.thickness * area / 3.0
        mass[i] += node_mass
        mass[j] += node_mass
        mass[k] += node_mass

    for kp_id, i in id2idx.items():
        if mass[i] == 0.0:
            raise errors.ZeroMassKeypoint(
                f"keypoint {kp_id} belongs to no triangle", entity=kp_id
            )

    crease_keys = {e.key for e in pattern.edges if e.kind == CREASE}
    stencils = build_hinges(mesh, crease_keys, id2idx)
    hinge = np.asarray(stencils, dtype=np.int32).reshape(len(stencils), 4)
    hinge_rest = np.zeros(len(stencils), dtype=np.float64)
    plist = [tuple(row) for row in pos0]
    for hi, (i0, i1, i2, i3) in enumerate(stencils):
        hinge_rest[hi] = _dihedral(plist, i0, i1, i2, i3)

    actuated_axis = {
        kp.id: kp.actuation for kp in pattern.keypoints if kp.actuation
    }

    return Simulation(
        kp_ids=kp_ids,
        id2idx=id2idx,
        pos0=pos0,
        dof_free=dof_free,
        mass=mass,
        tri=tri,
        tri_panel=tri_panel,
        dm_inv=dm_inv,
        rest_area=rest_area,
        hinge=hinge,
        hinge_rest=hinge_rest,
        actuated_axis=actuated_axis,
        material=material,
        scene=scene,
    )

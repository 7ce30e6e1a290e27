"""MJCF (MuJoCo XML) export and structural audit.

export_mjcf turns a pattern + mesh + scene + material into a byte-stable XML
document: one body per keypoint with slide joints on its free axes, one flex
per panel whose vertices are those keypoint bodies, position actuators on
actuated keypoints, plus ground plane and payload sphere when the scene has
them. check_mjcf parses a document back and audits it against the pattern and
mesh without ever running MuJoCo.

Float attributes use %.9g so identical inputs always produce identical bytes.
See SCHEMA.md for the exact element/attribute inventory emitted here.
"""

import xml.etree.ElementTree as ET
from dataclasses import dataclass
from xml.sax.saxutils import escape

from . import errors
from .design import AXES, Violation, validate
from .engine.types import MaterialParams, SceneConfig

AXIS_VECTORS = {"x": "1 0 0", "y": "0 1 0", "z": "0 0 1"}

# nominal point inertia for keypoint bodies; MuJoCo needs a positive value
# but the engine treats keypoints as translating point masses
POINT_INERTIA = 1e-9

GROUND_HALF_EXTENT = 2.0  # m, plane half-size in the emitted geom


@dataclass
class MjcfDocument:
    xml_text: str
    stats: dict  # body_count, flex_count, actuator_count


def _f(x):
    """%.9g: shortest 9-significant-digit decimal, stable across runs."""
    return f"{float(x):.9g}"


def _vec(values):
    return " ".join(_f(v) for v in values)


def _attr(value):
    return escape(str(value), {'"': "&quot;"})


def _lumped_masses(pattern, mesh, material):
    pos = pattern.positions2d()
    mass = {kp.id: 0.0 for kp in pattern.keypoints}
    for _pi, (a, b, c) in mesh.triangles:
        (x0, y0), (x1, y1), (x2, y2) = pos[a], pos[b], pos[c]
        area = 0.5 * abs((x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0))
        share = material.density * material.thickness * area / 3.0
        for v in (a, b, c):
            mass[v] += share
    return mass


def export_mjcf(pattern, mesh, scene=None, material=None):
    """Emit the MJCF document for a meshed pattern.

    Raises UnmeshedPanel if any panel has no triangles in the mesh, and the
    first pattern validation failure as its matching error type.
    """
    scene = scene if scene is not None else SceneConfig()
    material = material if material is not None else MaterialParams()

    for v in validate(pattern):
        err = getattr(errors, v.code, errors.FoldsimError)
        raise err(v.message, entity=v.entity)
    for pi in range(len(pattern.panels)):
        if not mesh.panel_triangles(pi):
            raise errors.UnmeshedPanel(f"panel {pi} has no triangles", entity=pi)

    kps = sorted(pattern.keypoints, key=lambda kp: kp.id)
    masses = _lumped_masses(pattern, mesh, material)

    lines = []
    out = lines.append
    out(f'<mujoco model="{_attr(pattern.name)}">')
    out(
        f'  <option timestep="{_f(scene.dt)}" gravity="{_vec(scene.gravity)}"/>'
    )
    out(
        f"  <!-- panel_bend_stiffness {_f(material.panel_bend_stiffness)}"
        " N*m/rad: internal hinge constant, no flex equivalent -->"
    )
    out("  <worldbody>")
    if scene.ground.enabled:
        g = scene.ground
        out(
            '    <geom name="ground" type="plane" pos="0 0 0"'
            f' size="{_f(GROUND_HALF_EXTENT)} {_f(GROUND_HALF_EXTENT)} 0.1"'
            f' friction="{_f(g.friction_coeff)} 0.005 0.0001"/>'
        )
    body_count = 0
    for kp in kps:
        out(f'    <body name="kp{kp.id}" pos="{_vec(kp.position)}">')
        body_count += 1
        for axis, free in zip(AXES, kp.dof_mask):
            if free:
                out(
                    f'      <joint name="kp{kp.id}_{axis}" type="slide"'
                    f' axis="{AXIS_VECTORS[axis]}"/>'
                )
        i = _f(POINT_INERTIA)
        out(
            f'      <inertial pos="0 0 0" mass="{_f(masses[kp.id])}"'
            f' diaginertia="{i} {i} {i}"/>'
        )
        out("    </body>")
    if scene.payload is not None:
        s = scene.payload
        out(f'    <body name="payload" pos="{_vec(s.initial_position)}">')
        out('      <freejoint name="payload_free"/>')
        out(
            '      <geom name="payload_sphere" type="sphere"'
            f' size="{_f(s.radius)}" mass="{_f(s.mass)}"/>'
        )
        out("    </body>")
        body_count += 1
    out("  </worldbody>")

    out("  <deformable>")
    flex_count = 0
    for pi, panel in enumerate(pattern.panels):
        cycle = list(panel.cycle)
        local = {kp_id: k for k, kp_id in enumerate(cycle)}
        element = []
        for a, b, c in mesh.panel_triangles(pi):
            element.extend((local[a], local[b], local[c]))
        body_attr = " ".join(f"kp{v}" for v in cycle)
        elem_attr = " ".join(str(k) for k in element)
        out(
            f'    <flex name="panel{pi}" dim="2"'
            f' radius="{_f(material.thickness / 2.0)}"'
            f' damping="{_f(material.damping)}"'
            f' body="{body_attr}" element="{elem_attr}">'
        )
        out(
            f'      <elasticity young="{_f(material.youngs_modulus)}"'
            f' poisson="{_f(material.poisson_ratio)}"/>'
        )
        out("    </flex>")
        flex_count += 1
    out("  </deformable>")

    actuated = [kp for kp in kps if kp.actuation is not None]
    actuator_count = 0
    if actuated:
        out("  <actuator>")
        for kp in actuated:
            out(
                f'    <position name="act_kp{kp.id}_{kp.actuation}"'
                f' joint="kp{kp.id}_{kp.actuation}" kp="60"/>'
            )
            actuator_count += 1
        out("  </actuator>")
    out("</mujoco>")

    return MjcfDocument(
        xml_text="\n".join(lines) + "\n",
        stats={
            "body_count": body_count,
            "flex_count": flex_count,
            "actuator_count": actuator_count,
        },
    )


def check_mjcf(doc, pattern, mesh):
    """Structural parse-back audit; returns Violation records, never raises."""
    out = []
    try:
        root = ET.fromstring(doc.xml_text)
    except ET.ParseError as exc:
        return [Violation("MalformedXml", str(exc))]

    bodies = root.findall(".//worldbody//body")
    name_counts = {}
    for b in bodies:
        name = b.get("name", "")
        name_counts[name] = name_counts.get(name, 0) + 1
    kp_ids = sorted(kp.id for kp in pattern.keypoints)
    for kp_id in kp_ids:
        n = name_counts.get(f"kp{kp_id}", 0)
        if n == 0:
            out.append(
                Violation("MissingKeypointBody", f"no body kp{kp_id}", kp_id)
            )
        elif n > 1:
            out.append(
                Violation(
                    "DuplicatedSharedKeypoint",
                    f"body kp{kp_id} appears {n} times; shared keypoints "
                    "must be one body referenced by every flex",
                    kp_id,
                )
            )

    joint_names = {
        j.get("name") for j in root.findall(".//worldbody//body/joint")
    }
    for kp in pattern.keypoints:
        for axis, free in zip(AXES, kp.dof_mask):
            jname = f"kp{kp.id}_{axis}"
            if free and jname not in joint_names:
                out.append(
                    Violation("MissingJoint", f"free axis without joint {jname}", kp.id)
                )
            if not free and jname in joint_names:
                out.append(
                    Violation("LockedAxisJoint", f"locked axis has joint {jname}", kp.id)
                )

    flexes = root.findall(".//deformable/flex")
    if len(flexes) != len(pattern.panels):
        out.append(
            Violation(
                "FlexCountMismatch",
                f"{len(flexes)} flex elements for {len(pattern.panels)} panels",
            )
        )
    by_name = {fl.get("name"): fl for fl in flexes}
    for pi, panel in enumerate(pattern.panels):
        fl = by_name.get(f"panel{pi}")
        if fl is None:
            out.append(Violation("MissingFlex", f"no flex panel{pi}", pi))
            continue
        flex_bodies = fl.get("body", "").split()
        cycle = list(panel.cycle)
        if len(flex_bodies) != len(cycle):
            out.append(
                Violation(
                    "FlexVertexCountMismatch",
                    f"panel{pi} lists {len(flex_bodies)} vertices for a "
                    f"{len(cycle)}-cycle",
                    pi,
                )
            )
        for name in flex_bodies:
            if name_counts.get(name, 0) == 0:
                out.append(
                    Violation(
                        "MissingFlexBody",
                        f"panel{pi} references absent body {name}",
                        pi,
                    )
                )
        element = fl.get("element", "").split()
        tris = mesh.panel_triangles(pi)
        if len(element) != 3 * len(tris):
            out.append(
                Violation(
                    "FlexElementCountMismatch",
                    f"panel{pi} has {len(element)} element indices for "
                    f"{len(tris)} triangles",
                    pi,
                )
            )
            continue
        for k, idx in enumerate(element):
            if not idx.isdigit() or int(idx) >= len(flex_bodies):
                out.append(
                    Violation(
                        "FlexElementIndexOutOfRange",
                        f"panel{pi} element slot {k} has index {idx!r}",
                        pi,
                    )
                )
                break
        else:
            # indices resolve; confirm they name the meshed triangles
            got = set()
            for t in range(len(tris)):
                tri_bodies = tuple(
                    flex_bodies[int(element[3 * t + j])] for j in range(3)
                )
                got.add(frozenset(tri_bodies))
            want = {frozenset(f"kp{v}" for v in tri) for tri in tris}
            if got != want:
                out.append(
                    Violation(
                        "FlexElementMismatch",
                        f"panel{pi} elements disagree with the mesh triangles",
                        pi,
                    )
                )

    actuator_joints = {
        a.get("joint") for a in root.findall(".//actuator/position")
    }
    actuator_names = {
        a.get("name") for a in root.findall(".//actuator/position")
    }
    for kp in pattern.keypoints:
        if kp.actuation is None:
            continue
        aname = f"act_kp{kp.id}_{kp.actuation}"
        if aname not in actuator_names:
            out.append(
                Violation(
                    "MissingActuator",
                    f"actuated keypoint {kp.id} has no actuator {aname}",
                    kp.id,
                )
            )
        elif f"kp{kp.id}_{kp.actuation}" not in actuator_joints:
            out.append(
                Violation(
                    "ActuatorJointMismatch",
                    f"{aname} does not drive joint kp{kp.id}_{kp.actuation}",
                    kp.id,
                )
            )
    return out

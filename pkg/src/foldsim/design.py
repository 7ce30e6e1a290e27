"""Crease-pattern graph: keypoints, edges, panels, mutation ops, validation, JSON io.

A pattern is a planar graph in the z = 0 plane. Keypoints carry translational
DOF masks and optional actuation axes; edges are creases (fold lines) or
boundaries; panels are counterclockwise cycles of keypoint ids claimed by the
panel-detection step. Patterns are value-semantic: copy() gives an
independent, equal object.
"""

import copy as _copy
import json
from dataclasses import dataclass, field

from . import errors, geometry

CREASE = "crease"
BOUNDARY = "boundary"
AXES = ("x", "y", "z")

SCHEMA_VERSION = 1


@dataclass
class KeyPoint:
    id: int
    position: tuple
    dof_mask: tuple = (True, True, True)
    actuation: str | None = None

    def __post_init__(self):
        self.position = (
            float(self.position[0]),
            float(self.position[1]),
            float(self.position[2]) if len(self.position) > 2 else 0.0,
        )
        self.dof_mask = tuple(bool(v) for v in self.dof_mask)
        if len(self.dof_mask) != 3:
            raise ValueError("dof_mask must have three entries")
        if self.actuation is not None and self.actuation not in AXES:
            raise ValueError(f"unknown actuation axis {self.actuation!r}")


@dataclass
class Edge:
    a: int
    b: int
    kind: str = CREASE

    def __post_init__(self):
        if self.kind not in (CREASE, BOUNDARY):
            raise ValueError(f"unknown edge kind {self.kind!r}")

    @property
    def key(self):
        return (self.a, self.b) if self.a < self.b else (self.b, self.a)


@dataclass
class Panel:
    cycle: list


@dataclass
class Violation:
    code: str
    message: str
    entity: object = None
    warning: bool = False

    def to_dict(self):
        return {
            "code": self.code,
            "message": self.message,
            "entity": self.entity,
            "warning": self.warning,
        }


@dataclass
class CreasePattern:
    name: str = "untitled"
    keypoints: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    panels: list = field(default_factory=list)

    def copy(self):
        return _copy.deepcopy(self)

    def keypoint(self, kp_id):
        for kp in self.keypoints:
            if kp.id == kp_id:
                return kp
        raise errors.UnknownKeypoint(f"keypoint {kp_id} does not exist", entity=kp_id)

    def has_keypoint(self, kp_id):
        return any(kp.id == kp_id for kp in self.keypoints)

    def positions2d(self):
        """id -> (x, y) map for planar predicates."""
        return {kp.id: (kp.position[0], kp.position[1]) for kp in self.keypoints}

    def edge_keys(self):
        return {e.key for e in self.edges}

    def find_edge(self, a, b):
        key = (a, b) if a < b else (b, a)
        for e in self.edges:
            if e.key == key:
                return e
        return None


def _check_actuation(dof_mask, actuation):
    if actuation is None:
        return
    axis_index = AXES.index(actuation)
    if not dof_mask[axis_index]:
        raise errors.InconsistentActuation(
            f"actuation axis {actuation!r} is locked by the dof mask",
            entity=actuation,
        )


def add_keypoint(pattern, position, dof_mask=(True, True, True), actuation=None):
    """Append a keypoint; new id = max existing id + 1 (0 for the first)."""
    dof_mask = tuple(bool(v) for v in dof_mask)
    _check_actuation(dof_mask, actuation)
    new_id = max((kp.id for kp in pattern.keypoints), default=-1) + 1
    pattern.keypoints.append(
        KeyPoint(id=new_id, position=position, dof_mask=dof_mask, actuation=actuation)
    )
    return new_id


def add_edge(pattern, a, b, kind=CREASE):
    """Insert edge {a, b}; rejects duplicates, self-edges, and crossings."""
    if a == b:
        raise errors.SelfEdge(f"edge endpoints coincide ({a})", entity=a)
    kp_a = pattern.keypoint(a)
    kp_b = pattern.keypoint(b)
    key = (a, b) if a < b else (b, a)
    if key in pattern.edge_keys():
        raise errors.DuplicateEdge(f"edge {key} already exists", entity=key)
    pos = pattern.positions2d()
    p1, p2 = pos[a], pos[b]
    for other in pattern.edges:
        q1, q2 = pos[other.a], pos[other.b]
        shares_id = bool({a, b} & {other.a, other.b})
        if geometry.segments_cross(
            p1, p2, q1, q2, allow_shared_endpoints=shares_id
        ):
            raise errors.EdgeCrossing(
                f"edge {key} crosses existing edge {other.key}",
                entity=(key, other.key),
            )
    del kp_a, kp_b
    edge = Edge(a=a, b=b, kind=kind)
    pattern.edges.append(edge)
    return edge


def merge_keypoints(pattern, survivor_id, victim_id, *, unify_edges=False):
    """Redirect every reference from victim to survivor and drop the victim.

    Raises if the rewrite would produce a self-edge or a duplicate edge.
    unify_edges relaxes the duplicate rule for loop-closing seams: when the
    rewritten edge coincides with an existing edge of the same kind, the two
    collapse into one, which is how a strip of panels closes into a loop.
    """
    pattern.keypoint(survivor_id)
    pattern.keypoint(victim_id)
    if survivor_id == victim_id:
        raise errors.MergeCreatesSelfEdge(
            "cannot merge a keypoint with itself", entity=survivor_id
        )

    def rewrite(kp_id):
        return survivor_id if kp_id == victim_id else kp_id

    new_keys = []
    for e in pattern.edges:
        na, nb = rewrite(e.a), rewrite(e.b)
        if na == nb:
            raise errors.MergeCreatesSelfEdge(
                f"merge collapses edge {e.key} to a point", entity=e.key
            )
        new_keys.append((na, nb) if na < nb else (nb, na))
    merged_edges = []
    seen = {}
    for e, key in zip(pattern.edges, new_keys):
        if key in seen:
            if not unify_edges:
                raise errors.MergeCreatesDuplicateEdge(
                    f"merge makes edges coincide at {key}", entity=key
                )
            if seen[key].kind != e.kind:
                raise errors.MergeCreatesDuplicateEdge(
                    f"seam edges at {key} disagree on kind", entity=key
                )
            continue
        ne = Edge(a=rewrite(e.a), b=rewrite(e.b), kind=e.kind)
        seen[key] = ne
        merged_edges.append(ne)
    pattern.edges = merged_edges
    pattern.keypoints = [kp for kp in pattern.keypoints if kp.id != victim_id]
    for panel in pattern.panels:
        panel.cycle = [rewrite(v) for v in panel.cycle]
    return pattern


def validate(pattern, include_warnings=False):
    """Invariant audit; returns violations as data, never raises."""
    out = []
    seen_ids = set()
    for kp in pattern.keypoints:
        if kp.id in seen_ids:
            out.append(
                Violation("DuplicateKeypointId", f"id {kp.id} repeats", kp.id)
            )
        seen_ids.add(kp.id)
        if kp.actuation is not None:
            if not kp.dof_mask[AXES.index(kp.actuation)]:
                out.append(
                    Violation(
                        "InconsistentActuation",
                        f"keypoint {kp.id} actuates locked axis {kp.actuation}",
                        kp.id,
                    )
                )
    edge_keys = set()
    for e in pattern.edges:
        if e.a == e.b:
            out.append(Violation("SelfEdge", f"edge {e.a}-{e.b}", e.key))
            continue
        missing = [v for v in (e.a, e.b) if v not in seen_ids]
        if missing:
            out.append(
                Violation(
                    "UnknownKeypoint",
                    f"edge {e.key} references missing keypoint {missing[0]}",
                    e.key,
                )
            )
            continue
        if e.key in edge_keys:
            out.append(Violation("DuplicateEdge", f"edge {e.key} repeats", e.key))
        edge_keys.add(e.key)

    pos = pattern.positions2d()
    checkable = [e for e in pattern.edges if e.a in pos and e.b in pos and e.a != e.b]
    for i, e1 in enumerate(checkable):
        for e2 in checkable[i + 1 :]:
            shares_id = bool({e1.a, e1.b} & {e2.a, e2.b})
            if geometry.segments_cross(
                pos[e1.a], pos[e1.b], pos[e2.a], pos[e2.b],
                allow_shared_endpoints=shares_id,
            ):
                out.append(
                    Violation(
                        "EdgeCrossing",
                        f"edges {e1.key} and {e2.key} intersect",
                        (e1.key, e2.key),
                    )
                )

    for idx, panel in enumerate(pattern.panels):
        cyc = panel.cycle
        if len(cyc) < 3:
            out.append(Violation("ShortPanelCycle", f"panel {idx} has < 3 vertices", idx))
            continue
        if any(v not in seen_ids for v in cyc):
            out.append(
                Violation("UnknownKeypoint", f"panel {idx} references missing keypoint", idx)
            )
            continue
        has_crease = False
        broken = False
        for k in range(len(cyc)):
            a, b = cyc[k], cyc[(k + 1) % len(cyc)]
            edge = pattern.find_edge(a, b)
            if edge is None:
                out.append(
                    Violation(
                        "MissingPanelEdge",
                        f"panel {idx} side {a}-{b} is not a pattern edge",
                        idx,
                    )
                )
                broken = True
                break
            if edge.kind == CREASE:
                has_crease = True
        if broken:
            continue
        if not has_crease:
            out.append(
                Violation("NoCreaseInCycle", f"panel {idx} has no crease edge", idx)
            )
        area = geometry.polygon_signed_area([pos[v] for v in cyc])
        if area <= 0.0:
            out.append(
                Violation("NonCCWPanel", f"panel {idx} signed area {area:.3e}", idx)
            )

    if include_warnings:
        used = set()
        for e in pattern.edges:
            used.update((e.a, e.b))
        for kp in pattern.keypoints:
            if kp.id not in used:
                out.append(
                    Violation(
                        "IsolatedKeypoint",
                        f"keypoint {kp.id} has no incident edge",
                        kp.id,
                        warning=True,
                    )
                )
    return out


# --- serialization -----------------------------------------------------------

def to_dict(pattern):
    kps = sorted(pattern.keypoints, key=lambda kp: kp.id)
    return {
        "version": SCHEMA_VERSION,
        "name": pattern.name,
        "keypoints": [
            {
                "id": kp.id,
                "pos": list(kp.position),
                "dof": list(kp.dof_mask),
                "actuation": {"axis": kp.actuation} if kp.actuation else None,
            }
            for kp in kps
        ],
        "edges": [{"a": e.a, "b": e.b, "kind": e.kind} for e in pattern.edges],
        "panels": [list(p.cycle) for p in pattern.panels],
    }


def from_dict(data):
    if data.get("version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported design file version {data.get('version')!r}")
    pattern = CreasePattern(name=data.get("name", "untitled"))
    for kd in data["keypoints"]:
        act = kd.get("actuation")
        pattern.keypoints.append(
            KeyPoint(
                id=int(kd["id"]),
                position=tuple(kd["pos"]),
                dof_mask=tuple(kd["dof"]),
                actuation=act["axis"] if act else None,
            )
        )
    for ed in data["edges"]:
        pattern.edges.append(Edge(a=int(ed["a"]), b=int(ed["b"]), kind=ed["kind"]))
    for cyc in data.get("panels", []):
        pattern.panels.append(Panel(cycle=[int(v) for v in cyc]))
    return pattern


def dumps(pattern):
    """Canonical design-file text: stable key order, 2-space indent."""
    return json.dumps(to_dict(pattern), indent=2) + "\n"


def loads(text):
    return from_dict(json.loads(text))


def save(pattern, path):
    with open(path, "w") as fh:
        fh.write(dumps(pattern))


def load(path):
    with open(path) as fh:
        return loads(fh.read())

"""Exception types raised by the design, meshing, simulation and optimizer layers.

Every error carries an optional ``entity`` naming the offending object
(keypoint id, edge pair, panel index) so callers can surface structured
diagnostics without parsing messages.
"""


class FoldsimError(Exception):
    """Base class for all domain errors."""

    code = "FoldsimError"

    def __init__(self, message, entity=None):
        super().__init__(message)
        self.entity = entity

    def to_dict(self):
        return {
            "code": type(self).code,
            "message": str(self),
            "entity": self.entity,
        }


def _error(name, base=FoldsimError):
    cls = type(name, (base,), {"code": name})
    cls.__module__ = __name__
    return cls


# design graph
UnknownKeypoint = _error("UnknownKeypoint")
InconsistentActuation = _error("InconsistentActuation")
SelfEdge = _error("SelfEdge")
DuplicateEdge = _error("DuplicateEdge")
EdgeCrossing = _error("EdgeCrossing")
MergeCreatesDuplicateEdge = _error("MergeCreatesDuplicateEdge")
MergeCreatesSelfEdge = _error("MergeCreatesSelfEdge")

# panel meshing
NoEnclosingCycle = _error("NoEnclosingCycle")
NoCreaseInCycle = _error("NoCreaseInCycle")
PanelAlreadyDefined = _error("PanelAlreadyDefined")
OnEdgeAmbiguous = _error("OnEdgeAmbiguous")
DegeneratePolygon = _error("DegeneratePolygon")
NonStarShapedPanel = _error("NonStarShapedPanel")
TriangulationFailed = _error("TriangulationFailed")
NoPanels = _error("NoPanels")

# simulation
ZeroMassKeypoint = _error("ZeroMassKeypoint")
DegenerateRestTriangle = _error("DegenerateRestTriangle")
NumericalBlowup = _error("NumericalBlowup")
NotActuatedKeypoint = _error("NotActuatedKeypoint")
SphereNeverAtRest = _error("SphereNeverAtRest")

# export
UnmeshedPanel = _error("UnmeshedPanel")

# catapult scenario
ParamsOutOfRange = _error("ParamsOutOfRange")

# optimizer
BadBounds = _error("BadBounds")
LengthMismatch = _error("LengthMismatch")

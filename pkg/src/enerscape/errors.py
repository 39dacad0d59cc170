"""Engine error hierarchy.

Every error carries a stable ``code`` string that is returned verbatim by the
HTTP layer and printed by the CLI, so clients can match on it.
"""


class EngineError(Exception):
    """Base class for all engine-level failures."""

    code = "EngineError"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)


class InvalidInput(EngineError):
    code = "InvalidInput"


class InvalidWall(EngineError):
    code = "InvalidWall"


class InvalidContent(EngineError):
    code = "InvalidContent"


class InvalidScenario(EngineError):
    code = "InvalidScenario"


class UnknownMaterial(EngineError):
    code = "UnknownMaterial"


class InvalidThickness(EngineError):
    code = "InvalidThickness"


class InvalidDialValue(EngineError):
    code = "InvalidDialValue"


class NotAvailable(EngineError):
    code = "NotAvailable"


class AlreadyCollected(EngineError):
    code = "AlreadyCollected"


class NotCollected(EngineError):
    code = "NotCollected"


class NotProjected(EngineError):
    code = "NotProjected"


class PositionOccupied(EngineError):
    code = "PositionOccupied"


class PositionEmpty(EngineError):
    code = "PositionEmpty"


class UnknownLayer(EngineError):
    code = "UnknownLayer"


class AlreadyPlaced(EngineError):
    code = "AlreadyPlaced"


class EmptyAssembly(EngineError):
    code = "EmptyAssembly"


class NoStructuralLayer(EngineError):
    code = "NoStructuralLayer"


class NoSample(EngineError):
    code = "NoSample"


class WallRejected(EngineError):
    code = "WallRejected"


class SimulationPending(EngineError):
    code = "SimulationPending"


class NoPendingSimulation(EngineError):
    code = "NoPendingSimulation"


class UnknownAction(EngineError):
    code = "UnknownAction"


class TrainingFailed(EngineError):
    code = "TrainingFailed"


class IncompatibleModel(EngineError):
    code = "IncompatibleModel"


class RestoreFailed(EngineError):
    code = "RestoreFailed"

"""Simulation job execution and headless playthrough running.

A pending job carries the assigned wall and the desk's simulation
parameters. Executing it fills the full gadget report: the four wall gadgets
from the physics module plus the energy result from either the oracle or a
loaded surrogate model. The play runner drives a scripted action list and
completes jobs synchronously, which is what certifies the golden
playthrough end to end.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .climate import SimulationParams, annual_energy
from .content import ContentPack
from .errors import InvalidInput
from .physics import GadgetReport
from .quest import EventKind, GameEngine, GameState
from .surrogate import SurrogateModel, predict


def execute_simulation(
    content: ContentPack,
    pending: dict,
    model: Optional[SurrogateModel] = None,
) -> GadgetReport:
    """Turn a pending job into a finished gadget report (oracle or surrogate)."""
    wall = content.wall_from_dict(pending["wall"])
    params = SimulationParams.from_dict(pending["params"])
    report = content.gadget_report(wall)
    if model is not None:
        report.energy = predict(model, params).energy
    else:
        report.energy = annual_energy(params, content.room, content.climate, content.rating_bands)
    return report


def parse_script_line(line: str) -> Optional[dict]:
    """One action per line, verb then arguments; '#' starts a comment."""
    stripped = line.strip()
    if not stripped or stripped.startswith("#"):
        return None
    parts = stripped.split()
    verb, args = parts[0], parts[1:]
    try:
        if verb in ("CollectHint", "ProjectHint"):
            return {"type": verb, "hint_id": args[0]}
        if verb in ("PlayCassette", "CreateWallSample", "AssignWallSample",
                    "ReadGadgets", "TryDoor"):
            return {"type": verb}
        if verb == "SetDeskDial":
            return {"type": verb, "dial": args[0], "value": args[1]}
        if verb == "SpawnLayer":
            return {"type": verb, "material": args[0], "thickness": float(args[1])}
        if verb == "PlaceLayer":
            return {"type": verb, "bench_index": int(args[0]), "position": int(args[1])}
        if verb == "RemoveLayer":
            return {"type": verb, "position": int(args[0])}
    except (IndexError, ValueError) as exc:
        raise InvalidInput(f"bad script line {stripped!r}: {exc}") from exc
    raise InvalidInput(f"bad script line {stripped!r}: unknown action {verb!r}")


def load_script(path: str | Path) -> list[dict]:
    actions = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        action = parse_script_line(line)
        if action is not None:
            actions.append(action)
    return actions


@dataclass
class PlayResult:
    state: GameState
    door_opened: bool


def run_script(
    engine: GameEngine,
    actions: list[dict],
    seed: int = 0,
    model: Optional[SurrogateModel] = None,
    on_event=None,
) -> PlayResult:
    """Apply actions in order, completing simulation jobs synchronously."""
    state = engine.new_session(seed)
    if on_event:
        for event in state.event_log:
            on_event(event)

    def deliver(events):
        if on_event:
            for event in events:
                on_event(event)

    for action in actions:
        outcome = engine.apply(state, action)
        deliver(outcome.events)
        if any(e.kind is EventKind.SIMULATION_STARTED for e in outcome.events):
            report = execute_simulation(engine.content, state.pending_simulation, model)
            deliver(engine.complete_simulation(state, report).events)
    return PlayResult(state=state, door_opened=state.door_open)

"""Escape-room quest engine.

Scenario data (quests, hints, desk solution) is declarative JSON; the engine
is a deterministic state machine over it. Hints spawn when their quest
activates, completing a minor quest plays a chime, completing a major quest
plays the fanfare, runs a day/night cycle and unlocks one of the four door
locks. Every mutation appends gapless, sequence-numbered events to the
session log, which doubles as the poll feed for clients.

All validation happens before any mutation: when an action raises, the
state is untouched (the property tests rely on this).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Optional

from . import physics
from .climate import PARAM_RANGES, SimulationParams
from .content import ContentPack, ORIENTATIONS
from .errors import (
    AlreadyCollected,
    AlreadyPlaced,
    EmptyAssembly,
    InvalidDialValue,
    InvalidInput,
    InvalidScenario,
    InvalidThickness,
    NoPendingSimulation,
    NoSample,
    NoStructuralLayer,
    NotAvailable,
    NotCollected,
    NotProjected,
    PositionEmpty,
    PositionOccupied,
    SimulationPending,
    UnknownAction,
    UnknownLayer,
    WallRejected,
)
from .physics import GadgetReport, MoldLevel, StabilityLevel, rating_index

MAX_ASSEMBLY_POSITIONS = 16

DIAL_NAMES = (
    "orientation",
    "month",
    "hour",
    "location",
    "cooling_enabled",
    "shades_on",
    "setpoint_heating",
    "setpoint_cooling",
    "window_u",
    "shgc",
)

DEFAULT_DESK = {
    "orientation": "N",
    "month": 1,
    "hour": 8,
    "location": "Graz",
    "cooling_enabled": False,
    "shades_on": False,
    "setpoint_heating": 21.0,
    "setpoint_cooling": 25.0,
    "window_u": 1.3,
    "shgc": 0.6,
}

CONDITION_KINDS = ("dials", "collect_hints", "project_hint", "wall_passes")


class QuestKind(Enum):
    MINOR = "Minor"
    MAJOR = "Major"


class QuestStatus(Enum):
    INACTIVE = "Inactive"
    ACTIVE = "Active"
    COMPLETED = "Completed"


class EventKind(Enum):
    QUEST_ACTIVATED = "QuestActivated"
    HINT_SPAWNED = "HintSpawned"
    HINT_COLLECTED = "HintCollected"
    MINOR_CHIME = "MinorChime"
    MAJOR_FANFARE = "MajorFanfare"
    DAY_NIGHT_CYCLE = "DayNightCycle"
    LOCK_UNLOCKED = "LockUnlocked"
    SIMULATION_STARTED = "SimulationStarted"
    SIMULATION_COMPLETED = "SimulationCompleted"
    DOOR_OPENED = "DoorOpened"
    VALIDATION_FEEDBACK = "ValidationFeedback"


@dataclass(frozen=True)
class Event:
    seq: int
    kind: EventKind
    payload: dict

    def to_dict(self) -> dict:
        return {"seq": self.seq, "kind": self.kind.value, "payload": self.payload}

    @classmethod
    def from_dict(cls, data: dict) -> "Event":
        return cls(seq=int(data["seq"]), kind=EventKind(data["kind"]), payload=data["payload"])


@dataclass(frozen=True)
class HintDef:
    id: str
    quest_id: str
    text: str
    figure_asset_id: str
    voiceover_transcript: str

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "quest_id": self.quest_id,
            "text": self.text,
            "figure_asset_id": self.figure_asset_id,
            "voiceover_transcript": self.voiceover_transcript,
        }


@dataclass(frozen=True)
class QuestDef:
    id: str
    title: str
    kind: QuestKind
    prerequisites: tuple[str, ...]
    condition: dict


@dataclass(frozen=True)
class Scenario:
    id: str
    title: str
    quests: tuple[QuestDef, ...]
    hints: tuple[HintDef, ...]
    desk_initial: dict
    desk_solution: dict
    gadget_pass_thresholds: str

    def quest(self, quest_id: str) -> QuestDef:
        for q in self.quests:
            if q.id == quest_id:
                return q
        raise InvalidInput(f"unknown quest {quest_id!r}")

    def hint(self, hint_id: str) -> Optional[HintDef]:
        for h in self.hints:
            if h.id == hint_id:
                return h
        return None

    def hints_for_quest(self, quest_id: str) -> list[HintDef]:
        return [h for h in self.hints if h.quest_id == quest_id]

    @property
    def major_count(self) -> int:
        return sum(1 for q in self.quests if q.kind is QuestKind.MAJOR)


def validate_scenario_data(data: dict) -> list[str]:
    """All structural problems in a scenario document; empty means valid."""
    problems: list[str] = []
    err = problems.append

    if not isinstance(data.get("id"), str) or not data.get("id"):
        err("id: missing or not a string")
    quests = data.get("quests")
    quest_ids: list[str] = []
    if not isinstance(quests, list) or not quests:
        err("quests: missing or empty")
        quests = []
    for i, q in enumerate(quests):
        where = f"quests[{i}]"
        qid = q.get("id")
        if not isinstance(qid, str) or not qid:
            err(f"{where}.id: missing")
            continue
        if qid in quest_ids:
            err(f"{where}: duplicate id {qid!r}")
        quest_ids.append(qid)
        if q.get("kind") not in ("Minor", "Major"):
            err(f"{where}.kind: must be Minor or Major")
        prereqs = q.get("prerequisites", [])
        if not isinstance(prereqs, list):
            err(f"{where}.prerequisites: must be a list")
            prereqs = []
        if qid in prereqs:
            err(f"{where}: quest cannot require itself")
        condition = q.get("condition", {})
        kind = condition.get("kind")
        if kind not in CONDITION_KINDS:
            err(f"{where}.condition.kind: unknown kind {kind!r}")
        elif kind == "dials":
            dials = condition.get("dials")
            if not isinstance(dials, list) or not dials:
                err(f"{where}.condition.dials: missing or empty")
            else:
                for dial in dials:
                    if dial not in ("orientation", "month", "hour", "location"):
                        err(f"{where}.condition.dials: {dial!r} has no solution entry")

    known = set(quest_ids)
    for i, q in enumerate(quests):
        for p in q.get("prerequisites", []) or []:
            if p not in known:
                err(f"quests[{i}]: unknown prerequisite {p!r}")

    # prerequisite graph must be a DAG
    graph = {q.get("id"): [p for p in (q.get("prerequisites") or []) if p in known]
             for q in quests if q.get("id")}
    state: dict[str, int] = {}

    def has_cycle(node: str) -> bool:
        state[node] = 1
        for neighbor in graph.get(node, []):
            mark = state.get(neighbor, 0)
            if mark == 1 or (mark == 0 and has_cycle(neighbor)):
                return True
        state[node] = 2
        return False

    if any(state.get(n, 0) == 0 and has_cycle(n) for n in graph):
        err("quests: prerequisites contain a cycle")

    majors = sum(1 for q in quests if q.get("kind") == "Major")
    if majors not in (0, 4):
        err(f"quests: {majors} major quests; need 4 (escape room) or 0 (sample)")

    hints = data.get("hints", [])
    hint_ids = set()
    if not isinstance(hints, list):
        err("hints: must be a list")
        hints = []
    for i, h in enumerate(hints):
        where = f"hints[{i}]"
        hid = h.get("id")
        if not isinstance(hid, str) or not hid:
            err(f"{where}.id: missing")
            continue
        if hid in hint_ids:
            err(f"{where}: duplicate id {hid!r}")
        hint_ids.add(hid)
        if h.get("quest_id") not in known:
            err(f"{where}.quest_id: unknown quest {h.get('quest_id')!r}")
        for key in ("text", "voiceover_transcript"):
            if not isinstance(h.get(key), str) or not h.get(key):
                err(f"{where}.{key}: missing or empty")

    # conditions may only reference defined hints/dials
    for i, q in enumerate(quests):
        condition = q.get("condition", {})
        if condition.get("kind") == "collect_hints":
            ids = condition.get("hint_ids")
            if not isinstance(ids, list) or not ids:
                err(f"quests[{i}].condition.hint_ids: missing or empty")
            else:
                for hid in ids:
                    if hid not in hint_ids:
                        err(f"quests[{i}].condition: unknown hint {hid!r}")
        if condition.get("kind") == "project_hint":
            hid = condition.get("hint_id")
            if hid is not None and hid not in hint_ids:
                err(f"quests[{i}].condition: unknown hint {hid!r}")

    solution = data.get("desk_solution", {})
    if not isinstance(solution, dict):
        err("desk_solution: must be an object")
        solution = {}
    for dial, value in solution.items():
        if dial not in ("orientation", "month", "hour", "location"):
            err(f"desk_solution.{dial}: not a solvable dial")
    if "orientation" in solution and solution["orientation"] not in ORIENTATIONS:
        err("desk_solution.orientation: invalid")
    if "month" in solution and solution["month"] not in range(1, 13):
        err("desk_solution.month: invalid")
    if "hour" in solution and solution["hour"] not in range(0, 24):
        err("desk_solution.hour: invalid")

    if not isinstance(data.get("gadget_pass_thresholds", "default"), str):
        err("gadget_pass_thresholds: must be a string key")
    return problems


def load_scenario(path: str | Path) -> Scenario:
    scenario_path = Path(path)
    try:
        data = json.loads(scenario_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidScenario(f"{scenario_path}: {exc}") from exc
    problems = validate_scenario_data(data)
    if problems:
        raise InvalidScenario(f"{scenario_path}: " + "; ".join(problems))
    quests = tuple(
        QuestDef(
            id=q["id"],
            title=q.get("title", q["id"]),
            kind=QuestKind(q["kind"]),
            prerequisites=tuple(q.get("prerequisites", [])),
            condition=q["condition"],
        )
        for q in data["quests"]
    )
    hints = tuple(
        HintDef(
            id=h["id"],
            quest_id=h["quest_id"],
            text=h["text"],
            figure_asset_id=h.get("figure_asset_id", ""),
            voiceover_transcript=h["voiceover_transcript"],
        )
        for h in data.get("hints", [])
    )
    desk_initial = dict(DEFAULT_DESK)
    desk_initial.update(data.get("desk_initial", {}))
    return Scenario(
        id=data["id"],
        title=data.get("title", data["id"]),
        quests=quests,
        hints=hints,
        desk_initial=desk_initial,
        desk_solution=data.get("desk_solution", {}),
        gadget_pass_thresholds=data.get("gadget_pass_thresholds", "default"),
    )


def validate_scenario_against_content(scenario: Scenario, content: ContentPack) -> list[str]:
    """Cross-checks that need the content pack (locations, threshold keys)."""
    problems = []
    if scenario.gadget_pass_thresholds not in content.gadget_pass:
        problems.append(
            f"gadget_pass_thresholds {scenario.gadget_pass_thresholds!r} not in content pack"
        )
    for desk_name, desk in (("desk_initial", scenario.desk_initial),
                            ("desk_solution", scenario.desk_solution)):
        location = desk.get("location")
        if location is not None and location not in content.climate.locations:
            problems.append(f"{desk_name}.location: unknown location {location!r}")
    return problems


@dataclass
class GameState:
    scenario_id: str
    seed: int
    next_seq: int = 1
    quest_status: dict = field(default_factory=dict)
    spawned_hints: list = field(default_factory=list)
    collected_hints: list = field(default_factory=list)
    projected_hint: Optional[str] = None
    locks_unlocked: int = 0
    door_open: bool = False
    desk: dict = field(default_factory=dict)
    bench_spawned: list = field(default_factory=list)  # [{"material", "thickness"}]
    bench_assembly: dict = field(default_factory=dict)  # position -> spawned index
    created_sample: Optional[dict] = None
    assigned_wall: Optional[dict] = None
    last_gadgets: Optional[dict] = None
    pending_simulation: Optional[dict] = None
    day_night_cycles_run: int = 0
    event_log: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "scenario_id": self.scenario_id,
            "seed": self.seed,
            "next_seq": self.next_seq,
            "quest_status": dict(self.quest_status),
            "spawned_hints": list(self.spawned_hints),
            "collected_hints": list(self.collected_hints),
            "projected_hint": self.projected_hint,
            "locks_unlocked": self.locks_unlocked,
            "door_open": self.door_open,
            "desk": dict(self.desk),
            "bench_spawned": [dict(l) for l in self.bench_spawned],
            "bench_assembly": [[pos, idx] for pos, idx in sorted(self.bench_assembly.items())],
            "created_sample": self.created_sample,
            "assigned_wall": self.assigned_wall,
            "last_gadgets": self.last_gadgets,
            "pending_simulation": self.pending_simulation,
            "day_night_cycles_run": self.day_night_cycles_run,
            "event_log": [e.to_dict() for e in self.event_log],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GameState":
        return cls(
            scenario_id=data["scenario_id"],
            seed=int(data["seed"]),
            next_seq=int(data["next_seq"]),
            quest_status=dict(data["quest_status"]),
            spawned_hints=list(data["spawned_hints"]),
            collected_hints=list(data["collected_hints"]),
            projected_hint=data["projected_hint"],
            locks_unlocked=int(data["locks_unlocked"]),
            door_open=bool(data["door_open"]),
            desk=dict(data["desk"]),
            bench_spawned=[dict(l) for l in data["bench_spawned"]],
            bench_assembly={int(pos): int(idx) for pos, idx in data["bench_assembly"]},
            created_sample=data["created_sample"],
            assigned_wall=data["assigned_wall"],
            last_gadgets=data["last_gadgets"],
            pending_simulation=data["pending_simulation"],
            day_night_cycles_run=int(data["day_night_cycles_run"]),
            event_log=[Event.from_dict(e) for e in data["event_log"]],
        )


@dataclass(frozen=True)
class ActionOutcome:
    events: tuple[Event, ...]
    data: Optional[dict] = None


class GameEngine:
    """Applies actions to a session's state under the scenario's rules."""

    def __init__(self, scenario: Scenario, content: ContentPack):
        self.scenario = scenario
        self.content = content
        problems = validate_scenario_against_content(scenario, content)
        if problems:
            raise InvalidScenario("; ".join(problems))

    # -- session lifecycle ------------------------------------------------

    def new_session(self, seed: int = 0) -> GameState:
        state = GameState(
            scenario_id=self.scenario.id,
            seed=seed,
            quest_status={q.id: QuestStatus.INACTIVE.value for q in self.scenario.quests},
            desk=dict(self.scenario.desk_initial),
        )
        # prerequisite-free quests start active; completion is only evaluated
        # once the player acts
        for quest in self.scenario.quests:
            if not quest.prerequisites:
                self._activate(state, quest)
        return state

    # -- events ------------------------------------------------------------

    def _emit(self, state: GameState, events: list, kind: EventKind, payload: dict) -> None:
        event = Event(seq=state.next_seq, kind=kind, payload=payload)
        state.next_seq += 1
        state.event_log.append(event)
        events.append(event)

    def _activate(self, state: GameState, quest: QuestDef, events: Optional[list] = None) -> None:
        sink = events if events is not None else []
        state.quest_status[quest.id] = QuestStatus.ACTIVE.value
        self._emit(state, sink, EventKind.QUEST_ACTIVATED, {"quest_id": quest.id})
        for hint in self.scenario.hints_for_quest(quest.id):
            state.spawned_hints.append(hint.id)
            self._emit(
                state, sink, EventKind.HINT_SPAWNED,
                {"hint_id": hint.id, "quest_id": quest.id},
            )

    # -- conditions ----------------------------------------------------------

    def _condition_met(self, quest: QuestDef, state: GameState) -> bool:
        condition = quest.condition
        kind = condition["kind"]
        if kind == "dials":
            return all(
                state.desk.get(dial) == self.scenario.desk_solution.get(dial)
                for dial in condition["dials"]
            )
        if kind == "collect_hints":
            return all(h in state.collected_hints for h in condition["hint_ids"])
        if kind == "project_hint":
            wanted = condition.get("hint_id")
            if wanted is None:
                return state.projected_hint is not None
            return state.projected_hint == wanted
        if kind == "wall_passes":
            return self._wall_passes(state)
        raise InvalidScenario(f"unknown condition kind {kind!r}")

    def _pass_thresholds(self):
        return self.content.gadget_pass[self.scenario.gadget_pass_thresholds]

    def _failing_gadgets(self, report: dict) -> list[str]:
        thresholds = self._pass_thresholds()
        failed = []
        if not report["u_value_ok"]:
            failed.append("u_value")
        if MoldLevel(report["mold"]).severity > thresholds.max_mold.severity:
            failed.append("mold")
        if StabilityLevel(report["stability"]).severity > thresholds.max_stability.severity:
            failed.append("stability")
        energy = report.get("energy")
        if energy is None:
            failed.append("rating")
        else:
            bands = self.content.rating_bands
            if rating_index(energy["rating"], bands) > rating_index(
                self._pass_thresholds().max_rating, bands
            ):
                failed.append("rating")
        return failed

    def _wall_passes(self, state: GameState) -> bool:
        if state.assigned_wall is None or state.last_gadgets is None:
            return False
        return not self._failing_gadgets(state.last_gadgets)

    def _run_quest_cycle(self, state: GameState, events: list) -> None:
        progressed = True
        while progressed:
            progressed = False
            for quest in self.scenario.quests:
                if state.quest_status[quest.id] != QuestStatus.ACTIVE.value:
                    continue
                if not self._condition_met(quest, state):
                    continue
                state.quest_status[quest.id] = QuestStatus.COMPLETED.value
                progressed = True
                if quest.kind is QuestKind.MAJOR:
                    state.locks_unlocked += 1
                    state.day_night_cycles_run += 1
                    self._emit(state, events, EventKind.MAJOR_FANFARE, {"quest_id": quest.id})
                    self._emit(
                        state, events, EventKind.DAY_NIGHT_CYCLE,
                        {"cycle": state.day_night_cycles_run},
                    )
                    self._emit(
                        state, events, EventKind.LOCK_UNLOCKED,
                        {"locks_unlocked": state.locks_unlocked},
                    )
                else:
                    self._emit(state, events, EventKind.MINOR_CHIME, {"quest_id": quest.id})
            for quest in self.scenario.quests:
                if state.quest_status[quest.id] != QuestStatus.INACTIVE.value:
                    continue
                if all(
                    state.quest_status[p] == QuestStatus.COMPLETED.value
                    for p in quest.prerequisites
                ):
                    self._activate(state, quest, events)
                    progressed = True

    # -- actions ---------------------------------------------------------

    def apply(self, state: GameState, action: Any) -> ActionOutcome:
        if not isinstance(action, dict) or "type" not in action:
            raise UnknownAction("action must be an object with a 'type' field")
        handler = getattr(self, f"_action_{_snake(action['type'])}", None)
        if handler is None:
            raise UnknownAction(f"unknown action type {action['type']!r}")
        return handler(state, action)

    def _action_collect_hint(self, state: GameState, action: dict) -> ActionOutcome:
        hint_id = _required_str(action, "hint_id")
        if hint_id not in state.spawned_hints:
            raise NotAvailable(f"hint {hint_id!r} has not spawned")
        if hint_id in state.collected_hints:
            raise AlreadyCollected(f"hint {hint_id!r} already collected")
        events: list[Event] = []
        state.collected_hints.append(hint_id)
        self._emit(state, events, EventKind.HINT_COLLECTED, {"hint_id": hint_id})
        self._run_quest_cycle(state, events)
        return ActionOutcome(tuple(events))

    def _action_project_hint(self, state: GameState, action: dict) -> ActionOutcome:
        hint_id = _required_str(action, "hint_id")
        if hint_id not in state.collected_hints:
            raise NotCollected(f"hint {hint_id!r} has not been collected")
        events: list[Event] = []
        state.projected_hint = hint_id
        self._run_quest_cycle(state, events)
        return ActionOutcome(tuple(events))

    def _action_play_cassette(self, state: GameState, action: dict) -> ActionOutcome:
        if state.projected_hint is None:
            raise NotProjected("no hint is projected")
        transcript = self.replay_hint(state, state.projected_hint)
        return ActionOutcome((), {"transcript": transcript})

    def _action_set_desk_dial(self, state: GameState, action: dict) -> ActionOutcome:
        dial = _required_str(action, "dial")
        if dial not in DIAL_NAMES:
            raise InvalidDialValue(f"unknown dial {dial!r}")
        value = self._coerce_dial(dial, action.get("value"))
        events: list[Event] = []
        state.desk[dial] = value
        self._run_quest_cycle(state, events)
        return ActionOutcome(tuple(events))

    def _coerce_dial(self, dial: str, value: Any):
        try:
            if dial == "orientation":
                if value not in ORIENTATIONS:
                    raise ValueError
                return value
            if dial == "location":
                if value not in self.content.climate.locations:
                    raise ValueError
                return value
            if dial in ("month", "hour"):
                number = int(value)
                low, high = (1, 12) if dial == "month" else (0, 23)
                if not low <= number <= high:
                    raise ValueError
                return number
            if dial in ("cooling_enabled", "shades_on"):
                if isinstance(value, bool):
                    return value
                if value in ("true", "false"):
                    return value == "true"
                raise ValueError
            number = float(value)
            low, high = PARAM_RANGES[dial]
            if not low <= number <= high:
                raise ValueError
            return number
        except (TypeError, ValueError):
            raise InvalidDialValue(f"invalid value {value!r} for dial {dial!r}") from None

    def _action_spawn_layer(self, state: GameState, action: dict) -> ActionOutcome:
        material_id = _required_str(action, "material")
        material = self.content.material(material_id)
        try:
            thickness = float(action["thickness"])
        except (KeyError, TypeError, ValueError):
            raise InvalidThickness("thickness must be a number") from None
        if not thickness > 0:
            raise InvalidThickness(f"thickness must be > 0, got {thickness}")
        state.bench_spawned.append({"material": material.id, "thickness": thickness})
        self._run_quest_cycle(state, events := [])
        return ActionOutcome(tuple(events), {"bench_index": len(state.bench_spawned) - 1})

    def _action_place_layer(self, state: GameState, action: dict) -> ActionOutcome:
        bench_index = _required_int(action, "bench_index")
        position = _required_int(action, "position")
        if not 0 <= bench_index < len(state.bench_spawned):
            raise UnknownLayer(f"no spawned layer at bench index {bench_index}")
        if not 0 <= position < MAX_ASSEMBLY_POSITIONS:
            raise InvalidInput(f"position must be 0..{MAX_ASSEMBLY_POSITIONS - 1}")
        if bench_index in state.bench_assembly.values():
            raise AlreadyPlaced(f"bench layer {bench_index} is already in the assembly")
        if position in state.bench_assembly:
            raise PositionOccupied(f"assembly position {position} is occupied")
        events: list[Event] = []
        state.bench_assembly[position] = bench_index
        self._run_quest_cycle(state, events)
        return ActionOutcome(tuple(events))

    def _action_remove_layer(self, state: GameState, action: dict) -> ActionOutcome:
        position = _required_int(action, "position")
        if position not in state.bench_assembly:
            raise PositionEmpty(f"assembly position {position} is empty")
        events: list[Event] = []
        del state.bench_assembly[position]
        self._run_quest_cycle(state, events)
        return ActionOutcome(tuple(events))

    def _action_create_wall_sample(self, state: GameState, action: dict) -> ActionOutcome:
        if not state.bench_assembly:
            raise EmptyAssembly("the assembly holds no layers")
        ordered = [state.bench_spawned[idx] for _, idx in sorted(state.bench_assembly.items())]
        system = None
        for layer in ordered:
            material = self.content.material(layer["material"])
            if material.structural_system is not None:
                system = material.structural_system
                break
        if system is None:
            raise NoStructuralLayer("the assembly has no structural layer")
        wall_dict = {"system": system.value, "layers": [dict(l) for l in ordered]}
        wall = self.content.wall_from_dict(wall_dict)
        validation = self.content.validate_layer_order(wall)
        events: list[Event] = []
        state.created_sample = wall_dict
        self._emit(
            state, events, EventKind.VALIDATION_FEEDBACK,
            {"context": "wall_sample", **validation.to_dict()},
        )
        self._run_quest_cycle(state, events)
        return ActionOutcome(tuple(events), {"validation": validation.to_dict(), "wall": wall_dict})

    def _action_assign_wall_sample(self, state: GameState, action: dict) -> ActionOutcome:
        if state.created_sample is None:
            raise NoSample("no wall sample has been created")
        if state.pending_simulation is not None:
            raise SimulationPending("a simulation job is already pending")
        wall = self.content.wall_from_dict(state.created_sample)
        validation = self.content.validate_layer_order(wall)
        if not validation.ok:
            messages = "; ".join(v.message for v in validation.violations)
            raise WallRejected(f"wall sample fails the layer-order check: {messages}")
        wall_u = physics.compute_u_value(wall, self.content.surface)
        params = SimulationParams(
            location=state.desk["location"],
            orientation=state.desk["orientation"],
            month=state.desk["month"],
            hour=state.desk["hour"],
            cooling_enabled=state.desk["cooling_enabled"],
            shades_on=state.desk["shades_on"],
            setpoint_heating=state.desk["setpoint_heating"],
            setpoint_cooling=state.desk["setpoint_cooling"],
            window_u=state.desk["window_u"],
            shgc=state.desk["shgc"],
            wall_u=wall_u,
        )
        events: list[Event] = []
        state.assigned_wall = state.created_sample
        state.pending_simulation = {
            "params": params.to_dict(),
            "wall": state.created_sample,
        }
        self._emit(state, events, EventKind.SIMULATION_STARTED, {"params": params.to_dict()})
        self._run_quest_cycle(state, events)
        return ActionOutcome(tuple(events))

    def _action_read_gadgets(self, state: GameState, action: dict) -> ActionOutcome:
        return ActionOutcome((), {"gadgets": state.last_gadgets})

    def _action_try_door(self, state: GameState, action: dict) -> ActionOutcome:
        events: list[Event] = []
        if state.door_open:
            self._emit(
                state, events, EventKind.VALIDATION_FEEDBACK,
                {"context": "door", "message": "the door is already open"},
            )
        elif state.locks_unlocked == 4:
            state.door_open = True
            self._emit(state, events, EventKind.DOOR_OPENED, {})
        else:
            self._emit(
                state, events, EventKind.VALIDATION_FEEDBACK,
                {
                    "context": "door",
                    "locks_unlocked": state.locks_unlocked,
                    "message": f"{4 - state.locks_unlocked} locks remain",
                },
            )
        return ActionOutcome(tuple(events))

    # -- simulation completion and the cassette ---------------------------

    def complete_simulation(self, state: GameState, report: GadgetReport | dict) -> ActionOutcome:
        if state.pending_simulation is None:
            raise NoPendingSimulation("no simulation job is pending")
        report_dict = report.to_dict() if isinstance(report, GadgetReport) else dict(report)
        events: list[Event] = []
        state.last_gadgets = report_dict
        state.pending_simulation = None
        self._emit(state, events, EventKind.SIMULATION_COMPLETED, {"report": report_dict})
        self._run_quest_cycle(state, events)
        for quest in self.scenario.quests:
            if (
                quest.condition.get("kind") == "wall_passes"
                and state.quest_status[quest.id] == QuestStatus.ACTIVE.value
            ):
                self._emit(
                    state, events, EventKind.VALIDATION_FEEDBACK,
                    {
                        "context": "wall_quest",
                        "quest_id": quest.id,
                        "failed_gadgets": self._failing_gadgets(report_dict),
                    },
                )
        return ActionOutcome(tuple(events))

    def replay_hint(self, state: GameState, hint_id: str) -> str:
        if hint_id not in state.collected_hints or state.projected_hint != hint_id:
            raise NotProjected(f"hint {hint_id!r} is not on the projector")
        hint = self.scenario.hint(hint_id)
        if hint is None:
            raise InvalidInput(f"unknown hint {hint_id!r}")
        return hint.voiceover_transcript


def _snake(name: str) -> str:
    out = []
    for i, ch in enumerate(name):
        if ch.isupper() and i > 0:
            out.append("_")
        out.append(ch.lower())
    return "".join(out)


def _required_str(action: dict, key: str) -> str:
    value = action.get(key)
    if not isinstance(value, str) or not value:
        raise InvalidInput(f"action field {key!r} must be a non-empty string")
    return value


def _required_int(action: dict, key: str) -> int:
    value = action.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        try:
            value = int(str(value))
        except (TypeError, ValueError):
            raise InvalidInput(f"action field {key!r} must be an integer") from None
    return value

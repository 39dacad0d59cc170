"""Content pack loading and validation.

A content pack is a versioned JSON file holding the materials catalog,
canonical layer orders, gadget thresholds, rating bands, the room model and
the climate table. It is loaded read-only at startup; everything the course
staff may want to tune lives here rather than in code.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

from .errors import InvalidContent, UnknownMaterial
from . import physics
from .physics import (
    CostModel,
    Layer,
    Material,
    MaterialCategory,
    MoldLevel,
    MoldThresholds,
    StabilityLevel,
    StructuralSystem,
    SurfaceConditions,
    WallConstruction,
)

ORIENTATIONS = ["N", "NE", "E", "SE", "S", "SW", "W", "NW"]


@dataclass(frozen=True)
class ClimateLocation:
    name: str
    monthly_mean_temp: tuple[float, ...]  # °C, Jan..Dec
    monthly_south_irradiance: tuple[float, ...]  # W/m², vertical south façade


@dataclass(frozen=True)
class ClimateTable:
    locations: dict[str, ClimateLocation]
    orientation_factors: dict[str, float]


@dataclass(frozen=True)
class RoomModel:
    floor_area: float  # m²
    volume: float  # m³
    opaque_wall_area: float  # m²
    window_area: float  # m²
    air_change_rate: float  # 1/h
    internal_gains: float  # W/m²


@dataclass(frozen=True)
class GadgetPassThresholds:
    """Worst still-acceptable gadget values for completing a wall quest."""

    max_mold: MoldLevel
    max_stability: StabilityLevel
    max_rating: str


@dataclass(frozen=True)
class ContentPack:
    version: str
    materials: dict[str, Material]
    canonical_orders: dict[StructuralSystem, list[MaterialCategory]]
    surface: SurfaceConditions
    mold_thresholds: MoldThresholds
    stability_minimums: dict[StructuralSystem, float]
    cost_model: CostModel
    u_range: tuple[float, float]
    rating_bands: list[tuple[str, Optional[float]]]
    gadget_pass: dict[str, GadgetPassThresholds]
    room: RoomModel
    climate: ClimateTable
    sha256: str

    def material(self, material_id: str) -> Material:
        try:
            return self.materials[material_id]
        except KeyError:
            raise UnknownMaterial(f"unknown material {material_id!r}") from None

    def wall_from_dict(self, data: dict) -> WallConstruction:
        layers = tuple(
            Layer(self.material(entry["material"]), float(entry["thickness"]))
            for entry in data["layers"]
        )
        return WallConstruction(system=StructuralSystem(data["system"]), layers=layers)

    @staticmethod
    def wall_to_dict(wall: WallConstruction) -> dict:
        return {
            "system": wall.system.value,
            "layers": [
                {"material": l.material.id, "thickness": l.thickness} for l in wall.layers
            ],
        }

    def gadget_report(self, wall: WallConstruction) -> physics.GadgetReport:
        return physics.gadget_report(
            wall,
            self.surface,
            mold_thresholds=self.mold_thresholds,
            cost_model=self.cost_model,
            stability_minimums=self.stability_minimums,
            u_range=self.u_range,
        )

    def validate_layer_order(self, wall: WallConstruction) -> physics.ValidationResult:
        return physics.validate_layer_order(wall, self.canonical_orders)


def default_content_path() -> Path:
    return Path(resources.files("enerscape").joinpath("data/content_pack.json"))


def validate_content_data(data: dict) -> list[str]:
    """Return all schema and invariant problems found; empty list means valid."""
    problems: list[str] = []

    def err(msg: str) -> None:
        problems.append(msg)

    if not isinstance(data.get("version"), str) or not data.get("version"):
        err("version: missing or not a string")

    materials = data.get("materials")
    categories_seen = set()
    systems_seen = set()
    ids_seen = set()
    if not isinstance(materials, list) or not materials:
        err("materials: missing or empty")
    else:
        for i, m in enumerate(materials):
            where = f"materials[{i}]"
            try:
                mat = _parse_material(m)
            except Exception as exc:
                err(f"{where}: {exc}")
                continue
            if mat.id in ids_seen:
                err(f"{where}: duplicate id {mat.id!r}")
            ids_seen.add(mat.id)
            categories_seen.add(mat.category)
            if mat.structural_system is not None:
                systems_seen.add(mat.structural_system)
        missing_cats = set(MaterialCategory) - categories_seen
        if missing_cats:
            err(
                "materials: no entry for categories "
                + ", ".join(sorted(c.value for c in missing_cats))
            )
        missing_sys = set(StructuralSystem) - systems_seen
        if missing_sys:
            err(
                "materials: no structural entry for systems "
                + ", ".join(sorted(s.value for s in missing_sys))
            )

    orders = data.get("canonical_orders", {})
    for system in StructuralSystem:
        order = orders.get(system.value)
        if not isinstance(order, list) or not order:
            err(f"canonical_orders.{system.value}: missing or empty")
            continue
        try:
            cats = [MaterialCategory(c) for c in order]
        except ValueError as exc:
            err(f"canonical_orders.{system.value}: {exc}")
            continue
        if cats.count(MaterialCategory.STRUCTURAL) != 1:
            err(f"canonical_orders.{system.value}: must contain exactly one Structural")

    try:
        _parse_surface(data.get("surface_conditions", {}))
    except Exception as exc:
        err(f"surface_conditions: {exc}")

    mold = data.get("mold_f_rsi_thresholds", {})
    try:
        light, moderate, heavy = (
            float(mold["light"]),
            float(mold["moderate"]),
            float(mold["heavy"]),
        )
        if not 0.0 < heavy <= moderate <= light < 1.0:
            err("mold_f_rsi_thresholds: need 0 < heavy <= moderate <= light < 1")
        if float(mold["condensate_allowance"]) < 0:
            err("mold_f_rsi_thresholds.condensate_allowance: must be >= 0")
    except Exception as exc:
        err(f"mold_f_rsi_thresholds: {exc}")

    mins = data.get("stability_min_thickness", {})
    for system in StructuralSystem:
        value = mins.get(system.value)
        if not isinstance(value, (int, float)) or value <= 0:
            err(f"stability_min_thickness.{system.value}: missing or not > 0")

    cost = data.get("cost_model", {})
    try:
        if float(cost["labor_per_layer"]) < 0:
            err("cost_model.labor_per_layer: must be >= 0")
        if not float(cost["cheap_max"]) <= float(cost["medium_max"]):
            err("cost_model: cheap_max must be <= medium_max")
    except Exception as exc:
        err(f"cost_model: {exc}")

    u_range = data.get("u_value_range")
    if (
        not isinstance(u_range, list)
        or len(u_range) != 2
        or not 0 < float(u_range[0]) < float(u_range[1])
    ):
        err("u_value_range: need [lo, hi] with 0 < lo < hi")

    bands = data.get("rating_bands")
    band_labels: list[str] = []
    if not isinstance(bands, list) or len(bands) < 2:
        err("rating_bands: need at least two bands")
    else:
        uppers = []
        for i, entry in enumerate(bands):
            if not (isinstance(entry, list) and len(entry) == 2 and isinstance(entry[0], str)):
                err(f"rating_bands[{i}]: need [label, upper]")
                continue
            band_labels.append(entry[0])
            uppers.append(entry[1])
        if len(set(band_labels)) != len(band_labels):
            err("rating_bands: duplicate labels")
        finite = [u for u in uppers if u is not None]
        if any(b is None for b in uppers[:-1]) or (uppers and uppers[-1] is not None):
            err("rating_bands: only the last band may be unbounded, and it must be")
        if finite != sorted(finite) or len(set(finite)) != len(finite):
            err("rating_bands: upper bounds must be strictly increasing")

    for name, gp in (data.get("gadget_pass") or {}).items():
        where = f"gadget_pass.{name}"
        try:
            MoldLevel(gp["max_mold"])
            StabilityLevel(gp["max_stability"])
            if band_labels and gp["max_rating"] not in band_labels:
                err(f"{where}.max_rating: not a rating band label")
        except Exception as exc:
            err(f"{where}: {exc}")
    if "default" not in (data.get("gadget_pass") or {}):
        err("gadget_pass: must define a 'default' entry")

    room = data.get("room", {})
    for key in (
        "floor_area",
        "volume",
        "opaque_wall_area",
        "window_area",
        "air_change_rate",
        "internal_gains",
    ):
        value = room.get(key)
        if not isinstance(value, (int, float)) or value <= 0:
            err(f"room.{key}: missing or not > 0")

    climate = data.get("climate", {})
    factors = climate.get("orientation_factors", {})
    for orientation in ORIENTATIONS:
        value = factors.get(orientation)
        if not isinstance(value, (int, float)) or not 0 < value <= 1:
            err(f"climate.orientation_factors.{orientation}: missing or not in (0, 1]")
    locations = climate.get("locations", {})
    if not isinstance(locations, dict) or not locations:
        err("climate.locations: missing or empty")
    else:
        for name, loc in locations.items():
            for key in ("monthly_mean_temp", "monthly_south_irradiance"):
                series = loc.get(key)
                if not isinstance(series, list) or len(series) != 12:
                    err(f"climate.locations.{name}.{key}: need 12 monthly values")
                elif key == "monthly_south_irradiance" and any(v < 0 for v in series):
                    err(f"climate.locations.{name}.{key}: irradiance must be >= 0")

    return problems


def _parse_material(m: dict) -> Material:
    system = m.get("structural_system")
    return Material(
        id=m["id"],
        name=m["name"],
        category=MaterialCategory(m["category"]),
        conductivity=float(m["conductivity"]),
        vapor_resistance=float(m["vapor_resistance"]),
        unit_cost=float(m["unit_cost"]),
        min_thickness=float(m["min_thickness"]),
        max_thickness=float(m["max_thickness"]),
        structural_system=StructuralSystem(system) if system is not None else None,
    )


def _parse_surface(s: dict) -> SurfaceConditions:
    return SurfaceConditions(
        theta_i=float(s["theta_i"]),
        rh_i=float(s["rh_i"]),
        theta_e=float(s["theta_e"]),
        rh_e=float(s["rh_e"]),
        r_si=float(s["r_si"]),
        r_se=float(s["r_se"]),
    )


def load_content_pack(path: str | Path | None = None) -> ContentPack:
    """Load and validate a content pack; raises InvalidContent on any problem."""
    pack_path = Path(path) if path is not None else default_content_path()
    raw = pack_path.read_bytes()
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InvalidContent(f"{pack_path}: not valid JSON: {exc}") from exc
    problems = validate_content_data(data)
    if problems:
        raise InvalidContent(f"{pack_path}: " + "; ".join(problems))

    materials = {m["id"]: _parse_material(m) for m in data["materials"]}
    orders = {
        StructuralSystem(system): [MaterialCategory(c) for c in cats]
        for system, cats in data["canonical_orders"].items()
    }
    mold = data["mold_f_rsi_thresholds"]
    cost = data["cost_model"]
    climate_data = data["climate"]
    locations = {
        name: ClimateLocation(
            name=name,
            monthly_mean_temp=tuple(float(v) for v in loc["monthly_mean_temp"]),
            monthly_south_irradiance=tuple(
                float(v) for v in loc["monthly_south_irradiance"]
            ),
        )
        for name, loc in climate_data["locations"].items()
    }
    room = data["room"]
    return ContentPack(
        version=data["version"],
        materials=materials,
        canonical_orders=orders,
        surface=_parse_surface(data["surface_conditions"]),
        mold_thresholds=MoldThresholds(
            light=float(mold["light"]),
            moderate=float(mold["moderate"]),
            heavy=float(mold["heavy"]),
            condensate_allowance=float(mold["condensate_allowance"]),
        ),
        stability_minimums={
            StructuralSystem(k): float(v)
            for k, v in data["stability_min_thickness"].items()
        },
        cost_model=CostModel(
            labor_per_layer=float(cost["labor_per_layer"]),
            cheap_max=float(cost["cheap_max"]),
            medium_max=float(cost["medium_max"]),
        ),
        u_range=(float(data["u_value_range"][0]), float(data["u_value_range"][1])),
        rating_bands=[
            (label, float(upper) if upper is not None else None)
            for label, upper in data["rating_bands"]
        ],
        gadget_pass={
            name: GadgetPassThresholds(
                max_mold=MoldLevel(gp["max_mold"]),
                max_stability=StabilityLevel(gp["max_stability"]),
                max_rating=gp["max_rating"],
            )
            for name, gp in data["gadget_pass"].items()
        },
        room=RoomModel(
            floor_area=float(room["floor_area"]),
            volume=float(room["volume"]),
            opaque_wall_area=float(room["opaque_wall_area"]),
            window_area=float(room["window_area"]),
            air_change_rate=float(room["air_change_rate"]),
            internal_gains=float(room["internal_gains"]),
        ),
        climate=ClimateTable(
            locations=locations,
            orientation_factors={
                k: float(v) for k, v in climate_data["orientation_factors"].items()
            },
        ),
        sha256=hashlib.sha256(raw).hexdigest(),
    )

"""Annual heating/cooling energy oracle and training-set sampling.

A 12-month quasi-steady balance for the sample office: one overall heat
transfer coefficient (walls + window + ventilation), monthly solar and
internal gains with a fixed 0.9 utilization factor, and separate heating
and cooling sums. This plays the role of the slow reference simulator; the
surrogate module learns to imitate it.

The desk's month/hour dials drive the sun display and quest checks only;
an annual figure cannot depend on them, so they never enter the balance.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .content import ClimateTable, ContentPack, RoomModel, ORIENTATIONS
from .errors import InvalidInput
from .physics import DEFAULT_RATING_BANDS, energy_rating

MONTH_HOURS = (744, 672, 744, 720, 744, 720, 744, 744, 720, 744, 720, 744)

VENTILATION_HEAT_CAPACITY = 0.34  # Wh/(m³·K), air heat capacity per volume
GAIN_UTILIZATION = 0.9
SHADE_FACTOR = 0.3  # transmitted fraction with shades drawn

# Continuous parameter ranges: validation bounds, sampler strata and the
# surrogate's normalization (and clamping) ranges all use this table.
PARAM_RANGES = {
    "setpoint_heating": (18.0, 25.0),
    "setpoint_cooling": (22.0, 28.0),
    "window_u": (0.6, 2.8),
    "shgc": (0.1, 0.8),
    "wall_u": (0.1, 4.5),
}


@dataclass(frozen=True)
class SimulationParams:
    """Desk and gadget inputs for one energy calculation."""

    location: str
    orientation: str
    month: int  # 1..12, sun display only
    hour: int  # 0..23, sun display only
    cooling_enabled: bool
    shades_on: bool
    setpoint_heating: float  # °C
    setpoint_cooling: float  # °C
    window_u: float  # W/(m²·K)
    shgc: float
    wall_u: float  # W/(m²·K)

    def to_dict(self) -> dict:
        return {
            "location": self.location,
            "orientation": self.orientation,
            "month": self.month,
            "hour": self.hour,
            "cooling_enabled": self.cooling_enabled,
            "shades_on": self.shades_on,
            "setpoint_heating": self.setpoint_heating,
            "setpoint_cooling": self.setpoint_cooling,
            "window_u": self.window_u,
            "shgc": self.shgc,
            "wall_u": self.wall_u,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SimulationParams":
        return cls(
            location=str(data["location"]),
            orientation=str(data["orientation"]),
            month=int(data["month"]),
            hour=int(data["hour"]),
            cooling_enabled=bool(data["cooling_enabled"]),
            shades_on=bool(data["shades_on"]),
            setpoint_heating=float(data["setpoint_heating"]),
            setpoint_cooling=float(data["setpoint_cooling"]),
            window_u=float(data["window_u"]),
            shgc=float(data["shgc"]),
            wall_u=float(data["wall_u"]),
        )


def validate_params(params: SimulationParams, climate: ClimateTable) -> None:
    """Raise InvalidInput when a field is outside its allowed domain."""
    if params.location not in climate.locations:
        raise InvalidInput(f"unknown location {params.location!r}")
    if params.orientation not in climate.orientation_factors:
        raise InvalidInput(f"unknown orientation {params.orientation!r}")
    if not 1 <= params.month <= 12:
        raise InvalidInput("month must be in 1..12")
    if not 0 <= params.hour <= 23:
        raise InvalidInput("hour must be in 0..23")
    for name in ("setpoint_heating", "setpoint_cooling", "window_u", "shgc"):
        lo, hi = PARAM_RANGES[name]
        value = getattr(params, name)
        if not lo <= value <= hi:
            raise InvalidInput(f"{name} {value} outside [{lo}, {hi}]")
    if params.wall_u <= 0:
        raise InvalidInput("wall_u must be > 0")


@dataclass(frozen=True)
class EnergyResult:
    heating: float  # kWh/(m²·a)
    cooling: float  # kWh/(m²·a)
    total: float  # kWh/(m²·a)
    rating: str

    def to_dict(self) -> dict:
        return {
            "heating": self.heating,
            "cooling": self.cooling,
            "total": self.total,
            "rating": self.rating,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EnergyResult":
        return cls(
            heating=float(data["heating"]),
            cooling=float(data["cooling"]),
            total=float(data["total"]),
            rating=str(data["rating"]),
        )

    @classmethod
    def from_loads(cls, heating: float, cooling: float, bands=DEFAULT_RATING_BANDS) -> "EnergyResult":
        total = heating + cooling
        return cls(heating=heating, cooling=cooling, total=total, rating=energy_rating(total, bands))


def annual_energy(
    params: SimulationParams,
    room: RoomModel,
    climate: ClimateTable,
    bands=DEFAULT_RATING_BANDS,
) -> EnergyResult:
    """Monthly quasi-steady heating/cooling balance, kWh/(m²·a).

    H = wall_u·A_wall + window_u·A_win + 0.34·n·V. Monthly gains are internal
    plus orientation- and shade-scaled solar on the window; 90 % of gains
    offset heating losses, and with cooling enabled 90 % of the transmission
    to cooler outdoor air offsets the gain surplus.
    """
    if params.location not in climate.locations:
        raise InvalidInput(f"unknown location {params.location!r}")
    location = climate.locations[params.location]
    f_orient = climate.orientation_factors[params.orientation]
    f_shade = SHADE_FACTOR if params.shades_on else 1.0

    h_total = (
        params.wall_u * room.opaque_wall_area
        + params.window_u * room.window_area
        + VENTILATION_HEAT_CAPACITY * room.air_change_rate * room.volume
    )  # W/K
    internal_w = room.internal_gains * room.floor_area  # W

    heating_wh = 0.0
    cooling_wh = 0.0
    for theta_e, irradiance, hours in zip(
        location.monthly_mean_temp, location.monthly_south_irradiance, MONTH_HOURS
    ):
        solar_w = params.shgc * room.window_area * irradiance * f_orient * f_shade
        gains = (internal_w + solar_w) * hours  # Wh
        loss_heating = h_total * max(0.0, params.setpoint_heating - theta_e) * hours
        heating_wh += max(0.0, loss_heating - GAIN_UTILIZATION * gains)
        if params.cooling_enabled:
            # transmission on hot months is a load; on cool months a utilized credit
            hot_transmission = h_total * max(0.0, theta_e - params.setpoint_cooling) * hours
            credit = h_total * max(0.0, params.setpoint_cooling - theta_e) * hours
            cooling_wh += max(0.0, gains + hot_transmission - GAIN_UTILIZATION * credit)

    heating = heating_wh / room.floor_area / 1000.0
    cooling = cooling_wh / room.floor_area / 1000.0
    return EnergyResult.from_loads(heating, cooling, bands)


@dataclass(frozen=True)
class DatasetRow:
    params: SimulationParams
    result: EnergyResult


DATASET_COLUMNS = [
    "location",
    "orientation",
    "month",
    "hour",
    "cooling_enabled",
    "shades_on",
    "setpoint_heating",
    "setpoint_cooling",
    "window_u",
    "shgc",
    "wall_u",
    "heating",
    "cooling",
    "total",
    "rating",
]


def sample_params(n: int, seed: int, climate: ClimateTable) -> list[SimulationParams]:
    """Deterministic Latin-hypercube-style draw over the parameter space.

    Each continuous dimension is stratified into n equal bins visited in a
    seeded random permutation; enums and flags are sampled uniformly. The
    random stream order is fixed, so (n, seed) fully determine the output.
    """
    if n < 1:
        raise InvalidInput("sample count must be >= 1")
    rng = np.random.default_rng(seed)
    continuous: dict[str, np.ndarray] = {}
    for name in ("setpoint_heating", "setpoint_cooling", "window_u", "shgc", "wall_u"):
        lo, hi = PARAM_RANGES[name]
        strata = rng.permutation(n)
        offsets = rng.random(n)
        continuous[name] = lo + (strata + offsets) / n * (hi - lo)
    location_names = sorted(climate.locations)
    locations = rng.integers(0, len(location_names), n)
    orientations = rng.integers(0, len(ORIENTATIONS), n)
    months = rng.integers(1, 13, n)
    hours = rng.integers(0, 24, n)
    cooling = rng.integers(0, 2, n)
    shades = rng.integers(0, 2, n)
    return [
        SimulationParams(
            location=location_names[locations[i]],
            orientation=ORIENTATIONS[orientations[i]],
            month=int(months[i]),
            hour=int(hours[i]),
            cooling_enabled=bool(cooling[i]),
            shades_on=bool(shades[i]),
            setpoint_heating=float(continuous["setpoint_heating"][i]),
            setpoint_cooling=float(continuous["setpoint_cooling"][i]),
            window_u=float(continuous["window_u"][i]),
            shgc=float(continuous["shgc"][i]),
            wall_u=float(continuous["wall_u"][i]),
        )
        for i in range(n)
    ]


def sample_dataset(
    n: int,
    seed: int,
    climate: ClimateTable,
    room: RoomModel,
    bands=DEFAULT_RATING_BANDS,
) -> list[DatasetRow]:
    """Sample n parameter sets and label each with the oracle result."""
    return [
        DatasetRow(params, annual_energy(params, room, climate, bands))
        for params in sample_params(n, seed, climate)
    ]


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def dataset_to_csv(rows: Iterable[DatasetRow]) -> str:
    """Serialize rows with a fixed column order; floats keep full precision."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(DATASET_COLUMNS)
    for row in rows:
        p, r = row.params, row.result
        writer.writerow(
            [
                _format_cell(v)
                for v in (
                    p.location,
                    p.orientation,
                    p.month,
                    p.hour,
                    p.cooling_enabled,
                    p.shades_on,
                    p.setpoint_heating,
                    p.setpoint_cooling,
                    p.window_u,
                    p.shgc,
                    p.wall_u,
                    r.heating,
                    r.cooling,
                    r.total,
                    r.rating,
                )
            ]
        )
    return buf.getvalue()


def dataset_from_csv(text: str) -> list[DatasetRow]:
    reader = csv.DictReader(io.StringIO(text))
    missing = set(DATASET_COLUMNS) - set(reader.fieldnames or [])
    if missing:
        raise InvalidInput(f"dataset is missing columns: {sorted(missing)}")
    rows = []
    for record in reader:
        params = SimulationParams(
            location=record["location"],
            orientation=record["orientation"],
            month=int(record["month"]),
            hour=int(record["hour"]),
            cooling_enabled=record["cooling_enabled"] == "true",
            shades_on=record["shades_on"] == "true",
            setpoint_heating=float(record["setpoint_heating"]),
            setpoint_cooling=float(record["setpoint_cooling"]),
            window_u=float(record["window_u"]),
            shgc=float(record["shgc"]),
            wall_u=float(record["wall_u"]),
        )
        result = EnergyResult(
            heating=float(record["heating"]),
            cooling=float(record["cooling"]),
            total=float(record["total"]),
            rating=record["rating"],
        )
        rows.append(DatasetRow(params, result))
    return rows


def write_dataset(path: str | Path, rows: Iterable[DatasetRow]) -> None:
    Path(path).write_text(dataset_to_csv(rows), encoding="utf-8")


def read_dataset(path: str | Path) -> list[DatasetRow]:
    return dataset_from_csv(Path(path).read_text(encoding="utf-8"))

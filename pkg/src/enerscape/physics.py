"""Steady-state wall physics behind the five evaluation gadgets.

Pure functions over layered wall constructions: thermal transmittance
(series resistance), Magnus dew point, interface temperature and vapor
pressure profiles with an interstitial condensation check, construction
cost, structural stability and the A+..H energy rating bands.

All thresholds and band tables have module-level defaults matching the
shipped content pack; callers may override them with pack values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

from .errors import InvalidInput, InvalidWall

# Magnus saturation-vapor-pressure coefficients (over water).
MAGNUS_A = 17.62
MAGNUS_B = 243.12  # °C
P_SAT_0 = 611.2  # Pa, saturation pressure at 0 °C

# Standard surface film resistances, m²·K/W (horizontal heat flow).
DEFAULT_R_SI = 0.13
DEFAULT_R_SE = 0.04

# Vapor diffusion through still air and the design condensation period used
# to turn an excess-pressure crossing into an accumulated condensate mass.
VAPOR_DIFFUSION_COEFF = 2e-10  # kg/(m·s·Pa)
DESIGN_PERIOD_HOURS = 1440.0


class MaterialCategory(Enum):
    INTERIOR_FINISH = "InteriorFinish"
    STRUCTURAL = "Structural"
    INSULATION = "Insulation"
    MEMBRANE = "Membrane"
    EXTERIOR_FINISH = "ExteriorFinish"


class StructuralSystem(Enum):
    MASONRY = "Masonry"
    REINFORCED_CONCRETE = "ReinforcedConcrete"
    TIMBER = "Timber"


class MoldLevel(Enum):
    NONE = "None"
    LIGHT = "Light"
    MODERATE = "Moderate"
    HEAVY = "Heavy"

    @property
    def severity(self) -> int:
        return _MOLD_ORDER.index(self)


_MOLD_ORDER = [MoldLevel.NONE, MoldLevel.LIGHT, MoldLevel.MODERATE, MoldLevel.HEAVY]


class CostTier(Enum):
    CHEAP = "Cheap"
    MEDIUM = "Medium"
    EXPENSIVE = "Expensive"


class StabilityLevel(Enum):
    NO_CRACKS = "NoCracks"
    MINOR_CRACKS = "MinorCracks"
    SEVERE_CRACKS = "SevereCracks"
    COLLAPSE = "Collapse"

    @property
    def severity(self) -> int:
        return _STABILITY_ORDER.index(self)


_STABILITY_ORDER = [
    StabilityLevel.NO_CRACKS,
    StabilityLevel.MINOR_CRACKS,
    StabilityLevel.SEVERE_CRACKS,
    StabilityLevel.COLLAPSE,
]


@dataclass(frozen=True)
class Material:
    """One catalog entry: thermal, hygric, cost and structural properties."""

    id: str
    name: str
    category: MaterialCategory
    conductivity: float  # λ, W/(m·K)
    vapor_resistance: float  # μ, dimensionless
    unit_cost: float  # EUR/m³
    min_thickness: float  # m
    max_thickness: float  # m
    structural_system: Optional[StructuralSystem] = None

    def __post_init__(self):
        if self.conductivity <= 0:
            raise InvalidInput(f"material {self.id}: conductivity must be > 0")
        if self.vapor_resistance < 1:
            raise InvalidInput(f"material {self.id}: vapor resistance must be >= 1")
        if self.unit_cost < 0:
            raise InvalidInput(f"material {self.id}: unit cost must be >= 0")
        if self.min_thickness > self.max_thickness:
            raise InvalidInput(f"material {self.id}: min_thickness > max_thickness")
        is_structural = self.category is MaterialCategory.STRUCTURAL
        if is_structural != (self.structural_system is not None):
            raise InvalidInput(
                f"material {self.id}: structural_system must be set exactly for "
                "Structural materials"
            )


@dataclass(frozen=True)
class Layer:
    """A material slice of given thickness, as placed in a wall."""

    material: Material
    thickness: float  # d, m

    @property
    def resistance(self) -> float:
        """Thermal resistance d/λ, m²·K/W."""
        return self.thickness / self.material.conductivity

    @property
    def diffusion_thickness(self) -> float:
        """Equivalent air-layer diffusion thickness s_d = μ·d, m."""
        return self.material.vapor_resistance * self.thickness


@dataclass(frozen=True)
class WallConstruction:
    """Ordered layer stack, interior to exterior, for one structural system.

    The dataclass itself accepts any candidate stack (the assembly bench
    builds invalid ones on purpose); ``check_wall`` enforces the invariants
    the physics operations need.
    """

    system: StructuralSystem
    layers: tuple[Layer, ...]

    def structural_index(self) -> Optional[int]:
        for i, layer in enumerate(self.layers):
            if layer.material.category is MaterialCategory.STRUCTURAL:
                return i
        return None


@dataclass(frozen=True)
class SurfaceConditions:
    """Design air states and film resistances on both wall faces."""

    theta_i: float = 20.0  # °C interior air
    rh_i: float = 50.0  # % interior
    theta_e: float = -10.0  # °C exterior design
    rh_e: float = 80.0  # % exterior
    r_si: float = DEFAULT_R_SI  # m²·K/W
    r_se: float = DEFAULT_R_SE  # m²·K/W

    def __post_init__(self):
        for label, rh in (("interior", self.rh_i), ("exterior", self.rh_e)):
            if not 0 < rh <= 100:
                raise InvalidInput(f"{label} relative humidity must be in (0, 100]")
        if self.r_si <= 0 or self.r_se <= 0:
            raise InvalidInput("surface resistances must be > 0")


DEFAULT_SURFACE = SurfaceConditions()


@dataclass(frozen=True)
class MoldThresholds:
    """Temperature-factor (f_Rsi) limits below which each level triggers,
    plus the condensate mass tolerated per design period before an interface
    counts as condensing (trace amounts re-evaporate in summer)."""

    light: float = 0.71
    moderate: float = 0.65
    heavy: float = 0.60
    condensate_allowance: float = 0.5  # kg/m² per design period, tolerable/re-evaporable


DEFAULT_MOLD_THRESHOLDS = MoldThresholds()

# Minimum structural layer thickness per system, m.
DEFAULT_STABILITY_MINIMUMS = {
    StructuralSystem.MASONRY: 0.25,
    StructuralSystem.REINFORCED_CONCRETE: 0.18,
    StructuralSystem.TIMBER: 0.12,
}


@dataclass(frozen=True)
class CostModel:
    """Per-layer labor constant plus tier boundaries (EUR/m², lower-inclusive)."""

    labor_per_layer: float = 15.0
    cheap_max: float = 180.0
    medium_max: float = 320.0


DEFAULT_COST_MODEL = CostModel()

DEFAULT_U_RANGE = (0.12, 0.35)  # W/(m²·K), acceptable band for the slider gadget

# Rating bands as (label, inclusive upper bound in kWh/(m²·a)); None = unbounded.
DEFAULT_RATING_BANDS: list[tuple[str, Optional[float]]] = [
    ("A+", 15.0),
    ("A", 25.0),
    ("B", 50.0),
    ("C", 75.0),
    ("D", 100.0),
    ("E", 150.0),
    ("F", 200.0),
    ("G", 250.0),
    ("H", None),
]

DEFAULT_CANONICAL_ORDERS: dict[StructuralSystem, list[MaterialCategory]] = {
    StructuralSystem.MASONRY: [
        MaterialCategory.INTERIOR_FINISH,
        MaterialCategory.STRUCTURAL,
        MaterialCategory.INSULATION,
        MaterialCategory.EXTERIOR_FINISH,
    ],
    StructuralSystem.REINFORCED_CONCRETE: [
        MaterialCategory.INTERIOR_FINISH,
        MaterialCategory.STRUCTURAL,
        MaterialCategory.INSULATION,
        MaterialCategory.EXTERIOR_FINISH,
    ],
    StructuralSystem.TIMBER: [
        MaterialCategory.INTERIOR_FINISH,
        MaterialCategory.MEMBRANE,
        MaterialCategory.STRUCTURAL,
        MaterialCategory.INSULATION,
        MaterialCategory.MEMBRANE,
        MaterialCategory.EXTERIOR_FINISH,
    ],
}


@dataclass(frozen=True)
class Violation:
    kind: str  # missing_category | extra_category | misordered | thickness_range | system_mismatch
    message: str
    position: Optional[int] = None  # layer index, interior side = 0

    def to_dict(self) -> dict:
        return {"kind": self.kind, "message": self.message, "position": self.position}


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    violations: tuple[Violation, ...] = ()

    def to_dict(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_dict() for v in self.violations]}


@dataclass
class GadgetReport:
    """The five evaluation results shown to the player."""

    u_value: float  # W/(m²·K)
    u_value_ok: bool
    mold: MoldLevel
    cost_per_m2: float  # EUR/m²
    cost_tier: CostTier
    stability: StabilityLevel
    energy: Optional["EnergyResult"] = None  # filled once a simulation job completes

    def to_dict(self) -> dict:
        return {
            "u_value": self.u_value,
            "u_value_ok": self.u_value_ok,
            "mold": self.mold.value,
            "cost_per_m2": self.cost_per_m2,
            "cost_tier": self.cost_tier.value,
            "stability": self.stability.value,
            "energy": self.energy.to_dict() if self.energy is not None else None,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GadgetReport":
        from .climate import EnergyResult

        energy = data.get("energy")
        return cls(
            u_value=float(data["u_value"]),
            u_value_ok=bool(data["u_value_ok"]),
            mold=MoldLevel(data["mold"]),
            cost_per_m2=float(data["cost_per_m2"]),
            cost_tier=CostTier(data["cost_tier"]),
            stability=StabilityLevel(data["stability"]),
            energy=EnergyResult.from_dict(energy) if energy is not None else None,
        )


def check_wall(wall: WallConstruction) -> None:
    """Raise InvalidWall unless the stack satisfies the basic invariants:
    non-empty, positive thicknesses, exactly one structural layer whose
    system matches the wall's."""
    if not wall.layers:
        raise InvalidWall("wall has no layers")
    for i, layer in enumerate(wall.layers):
        if not (layer.thickness > 0 and math.isfinite(layer.thickness)):
            raise InvalidWall(f"layer {i} has non-positive thickness")
    structural = [
        l for l in wall.layers if l.material.category is MaterialCategory.STRUCTURAL
    ]
    if len(structural) != 1:
        raise InvalidWall(f"wall must have exactly one structural layer, found {len(structural)}")
    if structural[0].material.structural_system is not wall.system:
        raise InvalidWall(
            f"structural layer is {structural[0].material.structural_system.value}, "
            f"wall system is {wall.system.value}"
        )


def compute_u_value(wall: WallConstruction, surf: SurfaceConditions = DEFAULT_SURFACE) -> float:
    """Thermal transmittance 1 / (R_si + Σ d_i/λ_i + R_se), W/(m²·K)."""
    check_wall(wall)
    r_total = surf.r_si + sum(l.resistance for l in wall.layers) + surf.r_se
    return 1.0 / r_total


def saturation_pressure(theta: float) -> float:
    """Magnus saturation vapor pressure over water, Pa."""
    return P_SAT_0 * math.exp(MAGNUS_A * theta / (MAGNUS_B + theta))


def dew_point(theta: float, rh: float) -> float:
    """Dew-point temperature (°C) of air at theta °C and rh % via Magnus."""
    if not -40.0 <= theta <= 60.0:
        raise InvalidInput(f"temperature {theta} °C outside [-40, 60]")
    if not 1.0 <= rh <= 100.0:
        raise InvalidInput(f"relative humidity {rh} % outside [1, 100]")
    if rh == 100.0:
        return theta  # saturation identity, exact
    gamma = math.log(rh / 100.0) + MAGNUS_A * theta / (MAGNUS_B + theta)
    return MAGNUS_B * gamma / (MAGNUS_A - gamma)


def temperature_profile(
    wall: WallConstruction, surf: SurfaceConditions = DEFAULT_SURFACE
) -> list[float]:
    """Interface temperatures from interior surface to exterior surface, °C.

    Linear in cumulative resistance; length = layer count + 1.
    """
    check_wall(wall)
    r_total = surf.r_si + sum(l.resistance for l in wall.layers) + surf.r_se
    delta = surf.theta_i - surf.theta_e
    temps = []
    r_cum = surf.r_si
    temps.append(surf.theta_i - delta * r_cum / r_total)
    for layer in wall.layers:
        r_cum += layer.resistance
        temps.append(surf.theta_i - delta * r_cum / r_total)
    return temps


@dataclass(frozen=True)
class GlaserResult:
    """Per-interface hygrothermal state, interior surface to exterior surface."""

    temperatures: tuple[float, ...]  # °C
    vapor_pressures: tuple[float, ...]  # Pa, linear in cumulative s_d
    saturation_pressures: tuple[float, ...]  # Pa
    condensate: tuple[float, ...] = ()  # kg/m² accumulated over the design period
    condensing: tuple[int, ...] = field(default=())  # interfaces above the allowance


def glaser_check(
    wall: WallConstruction,
    surf: SurfaceConditions = DEFAULT_SURFACE,
    condensate_allowance: float = DEFAULT_MOLD_THRESHOLDS.condensate_allowance,
) -> GlaserResult:
    """Steady-state condensation check against Magnus saturation.

    The vapor pressure profile is linear in cumulative diffusion thickness
    s_d = μ·d. Where it exceeds saturation at an interface, the condensate
    deposited over the design period is the inflow/outflow flux difference
    with the interface pinned at saturation; only interfaces accumulating
    more than the allowance count as condensing.
    """
    temps = temperature_profile(wall, surf)
    p_i = surf.rh_i / 100.0 * saturation_pressure(surf.theta_i)
    p_e = surf.rh_e / 100.0 * saturation_pressure(surf.theta_e)
    sd_total = sum(l.diffusion_thickness for l in wall.layers)
    sd_cum = [0.0]
    for layer in wall.layers:
        sd_cum.append(sd_cum[-1] + layer.diffusion_thickness)
    pressures = [p_i + (p_e - p_i) * sd / sd_total for sd in sd_cum]
    p_sats = [saturation_pressure(t) for t in temps]

    period_s = DESIGN_PERIOD_HOURS * 3600.0
    condensate = []
    for k, (p, ps) in enumerate(zip(pressures, p_sats)):
        if p <= ps:
            condensate.append(0.0)
            continue
        sd_in, sd_out = sd_cum[k], sd_total - sd_cum[k]
        if sd_in == 0.0:
            # interior surface: unthrottled supply, condensation is immediate
            condensate.append(math.inf)
            continue
        flux_in = VAPOR_DIFFUSION_COEFF * (p_i - ps) / sd_in
        flux_out = VAPOR_DIFFUSION_COEFF * (ps - p_e) / sd_out if sd_out > 0 else math.inf
        condensate.append(max(0.0, (flux_in - flux_out) * period_s))
    condensing = tuple(i for i, mass in enumerate(condensate) if mass > condensate_allowance)
    return GlaserResult(
        tuple(temps), tuple(pressures), tuple(p_sats), tuple(condensate), condensing
    )


def temperature_factor(
    wall: WallConstruction, surf: SurfaceConditions = DEFAULT_SURFACE
) -> float:
    """f_Rsi = (θ_si − θ_e) / (θ_i − θ_e); raises InvalidInput when θ_i = θ_e."""
    if surf.theta_i == surf.theta_e:
        raise InvalidInput("temperature factor undefined for zero gradient")
    theta_si = temperature_profile(wall, surf)[0]
    return (theta_si - surf.theta_e) / (surf.theta_i - surf.theta_e)


def mold_level(
    wall: WallConstruction,
    surf: SurfaceConditions = DEFAULT_SURFACE,
    thresholds: MoldThresholds = DEFAULT_MOLD_THRESHOLDS,
) -> MoldLevel:
    """Mold risk from the surface temperature factor plus the condensation check.

    Heavy when f_Rsi is very low or condensate forms on the structural layer's
    interior side; Moderate on low f_Rsi or any interstitial condensation;
    Light on mildly low f_Rsi; otherwise None. A zero air-temperature gradient
    has no driving potential and returns None.
    """
    check_wall(wall)
    if surf.theta_i == surf.theta_e:
        return MoldLevel.NONE
    f_rsi = temperature_factor(wall, surf)
    glaser = glaser_check(wall, surf, thresholds.condensate_allowance)
    structural_interior_interface = wall.structural_index()
    if f_rsi < thresholds.heavy or structural_interior_interface in glaser.condensing:
        return MoldLevel.HEAVY
    if f_rsi < thresholds.moderate or glaser.condensing:
        return MoldLevel.MODERATE
    if f_rsi < thresholds.light:
        return MoldLevel.LIGHT
    return MoldLevel.NONE


def wall_cost(
    wall: WallConstruction, model: CostModel = DEFAULT_COST_MODEL
) -> tuple[float, CostTier]:
    """Material volume cost plus a fixed labor charge per layer, EUR/m²."""
    check_wall(wall)
    cost = sum(l.thickness * l.material.unit_cost for l in wall.layers)
    cost += model.labor_per_layer * len(wall.layers)
    if cost <= model.cheap_max:
        tier = CostTier.CHEAP
    elif cost <= model.medium_max:
        tier = CostTier.MEDIUM
    else:
        tier = CostTier.EXPENSIVE
    return cost, tier


def stability_level(
    wall: WallConstruction,
    minimums: dict[StructuralSystem, float] = DEFAULT_STABILITY_MINIMUMS,
) -> StabilityLevel:
    """Crack level from the structural thickness ratio against the system minimum."""
    check_wall(wall)
    idx = wall.structural_index()
    ratio = wall.layers[idx].thickness / minimums[wall.system]
    if ratio >= 1.0:
        return StabilityLevel.NO_CRACKS
    if ratio >= 0.8:
        return StabilityLevel.MINOR_CRACKS
    if ratio >= 0.6:
        return StabilityLevel.SEVERE_CRACKS
    return StabilityLevel.COLLAPSE


def u_value_ok(u: float, u_range: tuple[float, float] = DEFAULT_U_RANGE) -> bool:
    """Whether the transmittance sits in the acceptable band (inclusive)."""
    if u <= 0:
        raise InvalidInput("u-value must be > 0")
    lo, hi = u_range
    return lo <= u <= hi


def energy_rating(
    q: float, bands: Sequence[tuple[str, Optional[float]]] = DEFAULT_RATING_BANDS
) -> str:
    """Band label for a specific energy demand q in kWh/(m²·a), upper-inclusive."""
    if q < 0:
        raise InvalidInput("energy demand must be >= 0")
    for label, upper in bands:
        if upper is None or q <= upper:
            return label
    return bands[-1][0]


def rating_index(
    label: str, bands: Sequence[tuple[str, Optional[float]]] = DEFAULT_RATING_BANDS
) -> int:
    """Position of a band label in the table (A+ = 0); InvalidInput if unknown."""
    for i, (name, _) in enumerate(bands):
        if name == label:
            return i
    raise InvalidInput(f"unknown rating band {label!r}")


def validate_layer_order(
    wall: WallConstruction,
    canonical_orders: dict[StructuralSystem, list[MaterialCategory]] | None = None,
) -> ValidationResult:
    """Check a candidate stack against the canonical category order.

    Reports thickness-range violations, structural-system mismatches, then
    missing/extra categories, then the first mis-ordering; violations are
    listed in interior-to-exterior positional order within each group.
    """
    orders = canonical_orders if canonical_orders is not None else DEFAULT_CANONICAL_ORDERS
    expected = orders[wall.system]
    violations: list[Violation] = []

    for i, layer in enumerate(wall.layers):
        m = layer.material
        if not (m.min_thickness <= layer.thickness <= m.max_thickness):
            violations.append(
                Violation(
                    "thickness_range",
                    f"{m.name} thickness {layer.thickness:g} m outside "
                    f"[{m.min_thickness:g}, {m.max_thickness:g}] m",
                    position=i,
                )
            )
        if (
            m.category is MaterialCategory.STRUCTURAL
            and m.structural_system is not wall.system
        ):
            violations.append(
                Violation(
                    "system_mismatch",
                    f"{m.name} is a {m.structural_system.value} material in a "
                    f"{wall.system.value} wall",
                    position=i,
                )
            )

    got = [l.material.category for l in wall.layers]
    expected_counts = {cat: expected.count(cat) for cat in MaterialCategory}
    got_counts = {cat: got.count(cat) for cat in MaterialCategory}

    for cat in expected:
        missing = expected_counts[cat] - got_counts[cat]
        if missing > 0:
            violations.append(Violation("missing_category", f"missing {cat.value}"))
            expected_counts[cat] = got_counts[cat]  # report each category once

    running: dict[MaterialCategory, int] = {cat: 0 for cat in MaterialCategory}
    for i, cat in enumerate(got):
        running[cat] += 1
        if running[cat] > expected.count(cat):
            violations.append(
                Violation("extra_category", f"extra {cat.value}", position=i)
            )

    if sorted(c.value for c in got) == sorted(c.value for c in expected) and got != expected:
        for i, (have, want) in enumerate(zip(got, expected)):
            if have is not want:
                violations.append(
                    Violation(
                        "misordered", f"{have.value} before {want.value}", position=i
                    )
                )
                break

    return ValidationResult(ok=not violations, violations=tuple(violations))


def gadget_report(
    wall: WallConstruction,
    surf: SurfaceConditions = DEFAULT_SURFACE,
    *,
    mold_thresholds: MoldThresholds = DEFAULT_MOLD_THRESHOLDS,
    cost_model: CostModel = DEFAULT_COST_MODEL,
    stability_minimums: dict[StructuralSystem, float] = DEFAULT_STABILITY_MINIMUMS,
    u_range: tuple[float, float] = DEFAULT_U_RANGE,
) -> GadgetReport:
    """Evaluate the four wall-only gadgets; the energy gadget is attached
    once a simulation job delivers its result."""
    u = compute_u_value(wall, surf)
    cost, tier = wall_cost(wall, cost_model)
    return GadgetReport(
        u_value=u,
        u_value_ok=u_value_ok(u, u_range),
        mold=mold_level(wall, surf, mold_thresholds),
        cost_per_m2=cost,
        cost_tier=tier,
        stability=stability_level(wall, stability_minimums),
        energy=None,
    )

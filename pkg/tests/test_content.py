"""Content pack schema validation and shipped-pack guarantees."""

import json

import pytest

from enerscape.content import default_content_path, load_content_pack, validate_content_data
from enerscape.errors import InvalidContent, UnknownMaterial
from enerscape.physics import MaterialCategory, StructuralSystem


@pytest.fixture(scope="module")
def pack():
    return load_content_pack()


@pytest.fixture()
def pack_data():
    return json.loads(default_content_path().read_text())


def test_shipped_pack_valid(pack_data):
    assert validate_content_data(pack_data) == []


def test_shipped_catalog_coverage(pack):
    assert len(pack.materials) >= 12
    categories = {m.category for m in pack.materials.values()}
    assert categories == set(MaterialCategory)
    systems = {m.structural_system for m in pack.materials.values() if m.structural_system}
    assert systems == set(StructuralSystem)


def test_shipped_climate_has_graz_and_three_locations(pack):
    assert "Graz" in pack.climate.locations
    assert len(pack.climate.locations) >= 3
    for loc in pack.climate.locations.values():
        assert len(loc.monthly_mean_temp) == 12
        assert len(loc.monthly_south_irradiance) == 12
        assert all(i >= 0 for i in loc.monthly_south_irradiance)
    factors = pack.climate.orientation_factors
    assert max(factors, key=factors.get) == "S"


def test_unknown_material_raises(pack):
    with pytest.raises(UnknownMaterial):
        pack.material("adamantium")


def test_wall_round_trip(pack):
    wall = pack.wall_from_dict(
        {
            "system": "Masonry",
            "layers": [
                {"material": "interior_plaster", "thickness": 0.015},
                {"material": "brick_masonry", "thickness": 0.25},
                {"material": "eps_board", "thickness": 0.16},
                {"material": "exterior_render", "thickness": 0.004},
            ],
        }
    )
    assert pack.wall_to_dict(wall)["layers"][1]["material"] == "brick_masonry"
    report = pack.gadget_report(wall)
    assert report.u_value_ok
    assert report.energy is None


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.pop("version"),
        lambda d: d["materials"].clear(),
        lambda d: d["materials"][0].update(conductivity=-1),
        lambda d: d["canonical_orders"].pop("Timber"),
        lambda d: d["mold_f_rsi_thresholds"].update(heavy=0.9),
        lambda d: d["rating_bands"].__setitem__(0, ["A+", None]),
        lambda d: d["rating_bands"].__setitem__(1, ["A", 10.0]),
        lambda d: d["gadget_pass"].pop("default"),
        lambda d: d["room"].update(floor_area=0),
        lambda d: d["climate"]["orientation_factors"].pop("NW"),
        lambda d: d["climate"]["locations"]["Graz"]["monthly_mean_temp"].pop(),
    ],
)
def test_validator_catches_defects(pack_data, mutate):
    mutate(pack_data)
    assert validate_content_data(pack_data) != []


def test_load_rejects_broken_pack(tmp_path, pack_data):
    pack_data["room"]["volume"] = -5
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(pack_data))
    with pytest.raises(InvalidContent):
        load_content_pack(path)


def test_duplicate_material_id_rejected(pack_data):
    pack_data["materials"].append(dict(pack_data["materials"][0]))
    problems = validate_content_data(pack_data)
    assert any("duplicate" in p for p in problems)

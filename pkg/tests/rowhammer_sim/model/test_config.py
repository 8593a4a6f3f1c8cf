import pytest

from rowhammer_sim.model import (
    ConfigError,
    InputError,
    MappingSchemeEnum,
    SimConfig,
    TrrVariantEnum,
    apply_overrides,
    available_keys,
    config_from_mapping,
    load_config,
    parse_overrides,
)
from tests.rowhammer_sim.fixtures import small_config


def test_defaults():
    config = load_config()
    assert config == SimConfig()
    assert config.rowhammer_threshold == 45_000
    assert config.trr_variant == TrrVariantEnum.NONE
    assert config.address_mapping == MappingSchemeEnum.ROW_BANK_RANK_CHANNEL_COLUMN
    assert config.half_double_prob == 0.0
    assert config.auto_refresh
    assert config.trr_persist_tables


def test_available_keys():
    keys = available_keys()
    for key in ("rowhammer_threshold", "trr_variant", "rows_per_bank", "t_refi", "synthetic_traffic"):
        assert key in keys


def test_load_yaml(tmp_path):
    (tmp_path / "sim.yaml").write_text(
        """
rowhammer_threshold: 1000
double_sided_prob: 0.5
trr_variant: Counter
device_file: maps/device.json
rh_stat_file: /tmp/flips.txt
geometry:
  banks_per_rank: 2
  rows_per_bank: 128
timing:
  t_refi: 1000
  t_refw: 64000
""",
        encoding="utf-8",
    )
    config = load_config(tmp_path / "sim.yaml")
    assert config.rowhammer_threshold == 1000
    assert config.double_sided_prob == 0.5
    assert config.trr_variant == TrrVariantEnum.COUNTER
    assert config.geometry.banks_per_rank == 2
    assert config.geometry.rows_per_bank == 128
    assert config.timing.t_refw == 64000
    assert config.resolved_timing.rows_refreshed_per_refi == 2
    # Relative paths anchor at the file, absolute ones are kept.
    assert config.device_file == tmp_path / "maps" / "device.json"
    assert str(config.rh_stat_file) == "/tmp/flips.txt"


def test_load_json(tmp_path):
    (tmp_path / "sim.json").write_text('{"rng_seed": 7, "fill_pattern": "0x0F"}', encoding="utf-8")
    config = load_config(tmp_path / "sim.json")
    assert config.rng_seed == 7
    assert config.fill_pattern == 0x0F


def test_load_missing(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_config(tmp_path / "missing.yaml")


def test_load_not_a_mapping(tmp_path):
    (tmp_path / "sim.yaml").write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(InputError):
        load_config(tmp_path / "sim.yaml")


@pytest.mark.parametrize(
    "name, data, field",
    [
        ("unknown key", {"hammer_count": 3}, "hammer_count"),
        ("unknown geometry key", {"geometry": {"lanes": 3}}, "geometry.lanes"),
        ("probability above one", {"single_sided_prob": 1.5}, "single_sided_prob"),
        ("negative threshold", {"rowhammer_threshold": -1}, "rowhammer_threshold"),
        ("bad integer", {"rowhammer_threshold": "many"}, "rowhammer_threshold"),
        ("bad boolean", {"auto_refresh": "maybe"}, "auto_refresh"),
        ("unknown trr variant", {"trr_variant": "magic"}, "trr_variant"),
        ("unknown mapping", {"address_mapping": "CoRoBa"}, "address_mapping"),
        ("ecc without matrix", {"enable_ecc": True}, "p_matrix"),
        ("fill pattern above a byte", {"fill_pattern": 256}, "fill_pattern"),
        ("window not a multiple of refi", {"t_refi": 1000, "t_refw": 64500}, "t_refw"),
        ("counter without table", {"trr_variant": "counter", "counter_table_length": 0}, "counter_table_length"),
        ("trr without threshold", {"trr_variant": "probabilistic", "trr_threshold": 0}, "trr_threshold"),
    ],
)
def test_invalid(name, data, field):
    with pytest.raises(ConfigError) as e:
        config_from_mapping(data)
    assert e.value.field == field, f"case {name} expected field {field}, but got {e.value.field}"
    assert str(e.value).startswith(f"{field}: ")


def test_overrides():
    config = small_config()
    overrides = parse_overrides(["rowhammer_threshold=10", "trr_variant = probabilistic", "rows_per_bank=128"])
    assert overrides == {"rowhammer_threshold": "10", "trr_variant": "probabilistic", "rows_per_bank": "128"}

    updated = apply_overrides(config, overrides)
    assert updated.rowhammer_threshold == 10
    assert updated.trr_variant == TrrVariantEnum.PROBABILISTIC
    assert updated.geometry.rows_per_bank == 128
    assert updated.geometry.columns_per_row == config.geometry.columns_per_row
    # Overrides never touch the original.
    assert config.rowhammer_threshold == 45_000

    assert apply_overrides(config, {}) is config
    assert config.with_overrides({"rng_seed": "3"}).rng_seed == 3


def test_override_without_equals():
    with pytest.raises(ConfigError):
        parse_overrides(["rowhammer_threshold"])


def test_small_config():
    config = small_config()
    assert config.geometry.rows_per_bank == 64
    assert config.resolved_timing.refis_per_window == 64
    assert config.resolved_timing.rows_refreshed_per_refi == 1

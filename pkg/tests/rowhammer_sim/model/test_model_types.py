import pytest

from rowhammer_sim.model import (
    AddressError,
    ConfigError,
    DeviceAddress,
    DeviceGeometry,
    InputError,
    TimingParams,
    TraceError,
)


def test_default_geometry():
    g = DeviceGeometry()
    g.validate()
    assert g.capacity == 1 << 30
    assert g.column_bytes == 1
    assert g.access_columns == 1024


def test_geometry_wider_bit_columns():
    # 512 weak-cell columns over 64 bytes: one byte per access column.
    g = DeviceGeometry(columns_per_row=512, bytes_per_row=64)
    g.validate()
    assert g.column_bytes == 1
    assert g.access_columns == 64


@pytest.mark.parametrize(
    "name, kwargs, field",
    [
        ("zero banks", {"banks_per_rank": 0}, "banks_per_rank"),
        ("more columns than bits", {"columns_per_row": 1024, "bytes_per_row": 64}, "columns_per_row"),
        ("columns not dividing bytes", {"columns_per_row": 3, "bytes_per_row": 64}, "columns_per_row"),
    ],
)
def test_geometry_validation(name, kwargs, field):
    with pytest.raises(ConfigError) as e:
        DeviceGeometry(**kwargs).validate()
    assert e.value.field == field, f"case {name}"


def test_address_validate():
    g = DeviceGeometry(rows_per_bank=16)
    DeviceAddress(bank=15, row=15).validate(g)
    with pytest.raises(AddressError):
        DeviceAddress(row=16).validate(g)


def test_timing_resolve():
    t = TimingParams().resolve(DeviceGeometry())
    assert t.refis_per_window == 8192
    assert t.rows_refreshed_per_refi == 8


def test_timing_validation():
    g = DeviceGeometry(rows_per_bank=64)
    with pytest.raises(ConfigError) as e:
        TimingParams(t_refi=1000, t_refw=1500).validate(g)
    assert e.value.field == "t_refw"
    with pytest.raises(ConfigError) as e:
        TimingParams(t_refi=1000, t_refw=4000, rows_refreshed_per_refi=8).validate(g)
    assert e.value.field == "rows_refreshed_per_refi"


def test_error_hierarchy():
    e = TraceError("bad record", 7)
    assert isinstance(e, InputError)
    assert isinstance(e, ValueError)
    assert e.line == 7
    assert str(e) == "line 7: bad record"

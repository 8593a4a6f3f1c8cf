import pytest

from rowhammer_sim.model import ConfigError
from rowhammer_sim.simulator import CommandKindEnum
from rowhammer_sim.traffic import TrafficPatternEnum, TrafficSpec, generate, parse_traffic_spec
from tests.rowhammer_sim.fixtures import small_config

_GEOMETRY = small_config().geometry


def test_double_sided():
    spec = TrafficSpec(rows=(10,), rounds=5, interval=100)
    commands = list(generate(spec, _GEOMETRY))
    assert len(commands) == 10
    assert [c.address.row for c in commands] == [9, 11] * 5
    assert [c.tick for c in commands] == list(range(100, 1001, 100))
    assert all(c.kind == CommandKindEnum.ACT for c in commands)


def test_start_tick():
    spec = TrafficSpec(rows=(10,), rounds=2, interval=7, start_tick=1000)
    assert [c.tick for c in generate(spec, _GEOMETRY)] == [1007, 1014, 1021, 1028]


def test_single_sided():
    spec = TrafficSpec(pattern=TrafficPatternEnum.SINGLE_SIDED, rows=(3,), acts_per_round=1, rounds=4)
    assert [c.address.row for c in generate(spec, _GEOMETRY)] == [3] * 4
    assert spec.victims(64) == [2, 4]


def test_n_sided():
    spec = TrafficSpec(pattern=TrafficPatternEnum.N_SIDED, rows=(1, 3, 5), acts_per_round=3, rounds=2)
    assert [c.address.row for c in generate(spec, _GEOMETRY)] == [1, 3, 5, 1, 3, 5]
    assert spec.victims(64) == [0, 2, 4, 6]


def test_uniform_random():
    spec = TrafficSpec(pattern=TrafficPatternEnum.UNIFORM_RANDOM, rows=(7, 9, 11), rounds=500, seed=4)
    rows = [c.address.row for c in generate(spec, _GEOMETRY)]
    assert len(rows) == 1000
    assert set(rows) == {7, 9, 11}
    assert rows == [c.address.row for c in generate(spec, _GEOMETRY)]

    whole = TrafficSpec(pattern=TrafficPatternEnum.UNIFORM_RANDOM, rounds=2000)
    rows = [c.address.row for c in generate(whole, _GEOMETRY)]
    assert min(rows) >= 0
    assert max(rows) < 64
    assert len(set(rows)) == 64


def test_victim_reads():
    spec = TrafficSpec(rows=(10,), rounds=1, interval=10, victim_reads=True)
    commands = list(generate(spec, _GEOMETRY))
    reads = commands[2:]
    assert [c.kind for c in reads] == [CommandKindEnum.RD] * 8
    assert [c.address.column for c in reads] == list(range(0, 64, 8))
    assert all(c.address.row == 10 for c in reads)
    assert reads[-1].tick == 100


def test_zero_rounds():
    assert list(generate(TrafficSpec(rows=(10,), rounds=0, victim_reads=True), _GEOMETRY)) == []


@pytest.mark.parametrize(
    "name, spec, field",
    [
        ("double sided on the edge", TrafficSpec(rows=(0,)), "synthetic_traffic.rows"),
        ("double sided two rows", TrafficSpec(rows=(3, 5)), "synthetic_traffic.rows"),
        ("n sided one row", TrafficSpec(pattern=TrafficPatternEnum.N_SIDED, rows=(3,)), "synthetic_traffic.rows"),
        ("row out of range", TrafficSpec(pattern=TrafficPatternEnum.UNIFORM_RANDOM, rows=(64,)), "synthetic_traffic.rows"),
        ("bank out of range", TrafficSpec(rows=(10,), bank=1), "synthetic_traffic.bank"),
        ("zero interval", TrafficSpec(rows=(10,), interval=0), "synthetic_traffic.interval"),
    ],
)
def test_invalid(name, spec, field):
    with pytest.raises(ConfigError) as e:
        generate(spec, _GEOMETRY)
    assert e.value.field == field, f"case {name}"


def test_parse_traffic_spec():
    spec = parse_traffic_spec("pattern=n_sided;rows=1,3,5;acts_per_round=3;rounds=10;victim_reads=true")
    assert spec == TrafficSpec(
        pattern=TrafficPatternEnum.N_SIDED,
        rows=(1, 3, 5),
        acts_per_round=3,
        rounds=10,
        victim_reads=True,
    )
    assert parse_traffic_spec({"rows": [10], "rounds": "1e3"}).total_acts == 2000
    assert parse_traffic_spec(spec) is spec

    with pytest.raises(ConfigError) as e:
        parse_traffic_spec({"pattern": "zigzag"})
    assert e.value.field == "synthetic_traffic.pattern"
    with pytest.raises(ConfigError) as e:
        parse_traffic_spec({"speed": 1}, "traffic")
    assert e.value.field == "traffic.speed"


def test_config_traffic():
    config = small_config(synthetic_traffic={"rows": [10], "rounds": 3})
    assert config.synthetic_traffic.total_acts == 6
    with pytest.raises(ConfigError) as e:
        small_config(synthetic_traffic={"rows": [63]})
    assert e.value.field == "synthetic_traffic.rows"

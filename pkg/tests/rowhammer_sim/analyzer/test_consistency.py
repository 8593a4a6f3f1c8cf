import pytest

from rowhammer_sim.analyzer import ConsistencyReport, online_offline_consistency
from rowhammer_sim.devicemap import DeviceMap
from rowhammer_sim.model import InvariantError
from rowhammer_sim.simulator import Command
from rowhammer_sim.traffic import TrafficPatternEnum, TrafficSpec, generate
from tests.rowhammer_sim.fixtures import small_config


def test_deterministic():
    config = small_config(rowhammer_threshold=0, single_sided_prob=1.0, double_sided_prob=1.0)
    device_map = DeviceMap(config.geometry, {(0, 0, 5): [1, 2, 3, 4, 5]})
    report = online_offline_consistency([Command.act(10, 0, 0, 4)], config, n_seeds=3, device_map=device_map)
    assert report.online == [5, 5, 5]
    assert report.offline_expected == pytest.approx(5.0)
    assert report.sigma == 0
    assert report.z == 0
    report.check()


def test_statistical_agreement():
    config = small_config(rowhammer_threshold=0, single_sided_prob=0.01, rng_seed=100)
    device_map = DeviceMap(config.geometry, {(0, 0, 5): range(20)})
    commands = generate(
        TrafficSpec(pattern=TrafficPatternEnum.SINGLE_SIDED, rows=(4,), acts_per_round=1, rounds=100, interval=10),
        config.geometry,
    )
    report = online_offline_consistency(commands, config, n_seeds=30, device_map=device_map, tolerance=4.0)
    assert report.offline_expected == pytest.approx(20 * (1 - 0.99**100))
    assert report.seeds == 30
    assert len(report.online) == 30
    report.check()


def test_trr_protected():
    config = small_config(
        rowhammer_threshold=8,
        single_sided_prob=1.0,
        trr_variant="counter",
        trr_threshold=5,
    )
    device_map = DeviceMap(config.geometry, {(0, 0, 5): [0, 1]})
    commands = [Command.act(100 + 200 * i, 0, 0, 4) for i in range(50)]
    report = online_offline_consistency(commands, config, n_seeds=2, device_map=device_map)
    assert report.online == [0, 0]
    assert report.offline_expected == 0
    report.check()


def test_report_check():
    report = ConsistencyReport(seeds=10, online_mean=12.0, offline_expected=10.0, sigma=0.5)
    assert report.z == pytest.approx(4.0)
    assert not report.within_tolerance
    with pytest.raises(InvariantError):
        report.check()

    exact = ConsistencyReport(seeds=1, online_mean=1.0, offline_expected=2.0, sigma=0.0)
    assert not exact.within_tolerance


@pytest.mark.slow
def test_random_traces_agree():
    geometry = small_config().geometry
    device_map = DeviceMap(geometry, {(0, 0, r): range(0, 64, 4) for r in range(0, 20, 2)})
    zs = []
    for p in (1e-3, 1e-2):
        config = small_config(
            rowhammer_threshold=5,
            single_sided_prob=p,
            double_sided_prob=2 * p,
            half_double_prob=p / 2,
            rng_seed=1_000,
        )
        for seed in range(20):
            spec = TrafficSpec(
                pattern=TrafficPatternEnum.UNIFORM_RANDOM,
                rows=tuple(range(2, 18)),
                acts_per_round=1,
                rounds=200,
                interval=10,
                seed=seed,
            )
            report = online_offline_consistency(generate(spec, geometry), config, n_seeds=30, device_map=device_map)
            assert report.offline_expected > 0
            zs.append(abs(report.z))

    assert len(zs) == 40
    # 40 comparisons at 3 sigma leave room for a chance excursion or two.
    assert sum(z > 3 for z in zs) <= 3
    assert max(zs) < 4.5

import math

import pytest

from rowhammer_sim.devicemap import DeviceMap
from rowhammer_sim.simulator import Command, Engine
from rowhammer_sim.simulator import engine as engine_module
from tests.rowhammer_sim.fixtures import small_config


def _alternate(rows, count, start=10):
    """
    Activate `rows` in turn, one tick apart, `count` ACTs in total.
    """
    return [Command.act(start + i, 0, 0, rows[i % len(rows)]) for i in range(count)]


@pytest.mark.slow
def test_rollover_clears_counters_at_scale():
    config = small_config(t_refw=40_000, trr_variant="counter", trr_threshold=50, trr_persist_tables=False)
    engine = Engine(config)
    rollovers = 0
    for command in _alternate([4, 6, 20, 21, 40], 100_000):
        window = engine.window
        engine.advance(command.tick)
        if engine.window != window:
            rollovers += 1
            for state in engine.states.values():
                assert state.window == engine.window
                assert not state.acts
                assert not state.exposure
                assert not state.evals
            mitigation = engine.mitigations[(0, 0)]
            assert not mitigation.tables
            assert not mitigation.pending
        engine.step(command)

    report = engine.finish()
    assert rollovers == 2
    # ACTs at ticks 10 to 100009 against boundaries at 40000 and 80000.
    assert [w.activations for w in report.windows] == [39_990, 40_000, 20_010]
    assert report.activations == 100_000


@pytest.mark.slow
def test_saturation_at_scale():
    config = small_config(rowhammer_threshold=0, double_sided_prob=1e-3, t_refi=10_000, t_refw=1_000_000)
    engine = Engine(config, DeviceMap(config.geometry, {(0, 0, 5): range(50)}))
    counts = []
    for i, command in enumerate(_alternate([4, 6], 200_000)):
        engine.step(command)
        if (i + 1) % 2_000 == 0:
            counts.append(engine.report.total_bitflips)
    engine.finish()

    assert counts == sorted(counts)
    assert counts[-1] <= 50
    assert len({(f.row, f.column) for f in engine.bitflips}) == engine.report.total_bitflips
    # 1999 double-sided evaluations after 1000 pairs: 50 * (1 - 0.999^1999) ~ 43.2, sigma ~ 2.4.
    assert 35 <= counts[0] <= 50
    # Ten times as many pairs leave each cell unflipped with probability e^-20.
    assert counts[9] >= 49
    assert engine.report.double_sided == engine.report.total_bitflips


def test_bernoulli_fidelity():
    p, evaluations, cells = 1e-3, 1_000, 100
    flips = 0
    for seed in range(20):
        config = small_config(rowhammer_threshold=0, single_sided_prob=p, columns_per_row=128, rng_seed=seed)
        device_map = DeviceMap(config.geometry, {(0, 0, 5): range(cells)})
        engine = Engine(config, device_map)
        # Every ACT of row 4 evaluates row 5 once, single-sided.
        engine.run([Command.act(10 * (k + 1), 0, 0, 4) for k in range(evaluations)])
        flips += engine.report.single_sided

    trials = 20 * cells
    expected = 1 - (1 - p) ** evaluations
    sigma = math.sqrt(trials * expected * (1 - expected))
    assert expected == pytest.approx(0.632, abs=1e-3)
    assert abs(flips - trials * expected) <= 3 * sigma


def _hazard(engine, evaluations, cells, skipped=0):
    """
    Flips per evaluation at risk on row 5, whose k-th evaluation runs at tick 10k.
    Evaluations before `skipped` + 1 do not count.
    """
    at_risk = [f.tick // 10 - skipped for f in engine.bitflips]
    unflipped = cells - len(at_risk)
    return len(at_risk) / (sum(at_risk) + unflipped * (evaluations - skipped))


def test_double_sided_amplification():
    # The double-sided probability is 2500 times the single-sided one.
    p_single, p_double = 1e-4, 0.25
    evaluations, cells = 5_000, 2_048
    overrides = {"columns_per_row": cells, "bytes_per_row": cells // 8, "rowhammer_threshold": 0}

    config = small_config(single_sided_prob=p_single, **overrides)
    device_map = DeviceMap(config.geometry, {(0, 0, 5): range(cells)})
    single = Engine(config, device_map)
    single.run([Command.act(10 * (k + 1), 0, 0, 4) for k in range(evaluations)])
    assert single.report.total_bitflips == single.report.single_sided > 0

    config = small_config(double_sided_prob=p_double, **overrides)
    double = Engine(config, device_map)
    double.run([Command.act(10 * (k + 1), 0, 0, 4 if k % 2 == 0 else 6) for k in range(evaluations)])
    assert double.report.total_bitflips == double.report.double_sided == cells

    # About 10^7 single-sided cell evaluations and 800 flips.
    assert cells * evaluations >= 10**7
    single_hazard = _hazard(single, evaluations, cells)
    # The first ACT of row 4 is single-sided, row 6 not being open yet.
    double_hazard = _hazard(double, evaluations, cells, skipped=1)
    assert single_hazard == pytest.approx(p_single, rel=0.15)
    assert double_hazard / single_hazard == pytest.approx(2.5e3, rel=0.2)


@pytest.mark.slow
@pytest.mark.parametrize("exposure, expected", [(44_999, 0), (45_000, 1)])
def test_threshold_gate_at_scale(exposure, expected):
    config = small_config(
        rowhammer_threshold=45_000,
        single_sided_prob=1.0,
        double_sided_prob=1.0,
        t_refw=100_000,
    )
    engine = Engine(config, DeviceMap(config.geometry, {(0, 0, 5): [7]}))
    # Each ACT of row 4 adds one evaluation of row 5, the window clears them.
    commands = []
    for window in range(3):
        commands.extend(Command.act(window * 100_000 + 10 + i, 0, 0, 4) for i in range(exposure))
    report = engine.run(commands)

    assert len(report.windows) == 3
    assert report.total_bitflips == expected
    assert report.windows[0].bitflips == expected
    if expected:
        assert engine.bitflips[0].tick == 10 + 44_999


@pytest.mark.slow
def test_counter_trr_protects_at_scale(monkeypatch):
    def build(variant):
        return small_config(
            rowhammer_threshold=10_000,
            single_sided_prob=1.0,
            double_sided_prob=1.0,
            t_refw=128_000,
            trr_variant=variant,
            trr_threshold=1_000,
        )

    commands = []
    for window in range(2):
        commands.extend(_alternate([4, 6], 100_000, start=window * 128_000 + 10))
    device_map = DeviceMap(build("none").geometry, {(0, 0, 5): [7]})

    engines = []
    refreshed = []
    original = engine_module.on_trr_refresh

    def instrumented(state, victim):
        assert engines[-1].in_refresh
        refreshed.append(victim)
        original(state, victim)

    monkeypatch.setattr(engine_module, "on_trr_refresh", instrumented)

    engines.append(Engine(build("counter"), device_map))
    report = engines[-1].run(commands)
    assert report.total_bitflips == 0
    assert report.trr_refreshes == len(refreshed) > 0
    assert set(refreshed) == {3, 5, 7}

    engines.append(Engine(build("none"), device_map))
    report = engines[-1].run(commands)
    # The 10000th evaluation of row 5 flips its cell, which stays flipped.
    assert report.total_bitflips == 1
    assert report.trr_refreshes == 0

import math

import numpy as np
import pytest

from rowhammer_sim.devicemap import VariationParams, dump_device_map, generate_statistical_map
from rowhammer_sim.devicemap.generator import _normals, _row_field
from rowhammer_sim.model import ConfigError, DeviceGeometry
from rowhammer_sim.simulator.rng import CounterRng

_GEOMETRY = DeviceGeometry(banks_per_rank=2, rows_per_bank=1024, columns_per_row=64, bytes_per_row=64)


def test_exact_counts():
    device_map = generate_statistical_map(_GEOMETRY, VariationParams(density=0.01, fraction_strong=0.9, seed=1))
    # round(0.1 * 1024) weak rows per bank, round(0.01 * 1024 * 64) cells per bank.
    assert device_map.weak_row_count() == 2 * 102
    assert device_map.weak_cell_count() == 2 * 655
    assert device_map.coverage() == pytest.approx(204 / 2048)
    for _, columns in device_map.items():
        assert len(columns) in (6, 7)
        assert all(0 <= c < 64 for c in columns)


def test_deterministic():
    params = VariationParams(density=0.005, seed=42)
    first = generate_statistical_map(_GEOMETRY, params)
    second = generate_statistical_map(_GEOMETRY, params)
    assert dump_device_map(first) == dump_device_map(second)

    other = generate_statistical_map(_GEOMETRY, VariationParams(density=0.005, seed=43))
    assert dump_device_map(other) != dump_device_map(first)


@pytest.mark.parametrize(
    "name, params",
    [
        ("no density", VariationParams(density=0.0)),
        ("all strong", VariationParams(fraction_strong=1.0)),
    ],
)
def test_empty(name, params):
    assert len(generate_statistical_map(_GEOMETRY, params)) == 0, f"case {name}"


def test_uncorrelated_uniform():
    params = VariationParams(density=0.02, correlation_length=0, cluster_spread=0, seed=3)
    device_map = generate_statistical_map(_GEOMETRY, params)
    assert device_map.weak_cell_count() == 2 * round(0.02 * 1024 * 64)


def test_capped_density():
    # 10 weak rows cannot hold half the bank.
    geometry = DeviceGeometry(banks_per_rank=1, rows_per_bank=100, columns_per_row=8, bytes_per_row=8)
    device_map = generate_statistical_map(geometry, VariationParams(density=0.5, fraction_strong=0.9))
    assert device_map.weak_row_count() == 10
    assert device_map.weak_cell_count() == 80


def test_invalid_params():
    with pytest.raises(ConfigError):
        generate_statistical_map(_GEOMETRY, VariationParams(cluster_size=0))


def test_normals_moments():
    values = _normals(CounterRng(9, "devicemap.rows"), (0, 0), 100_000)
    assert abs(values.mean()) < 0.02
    assert values.std() == pytest.approx(1.0, abs=0.02)


@pytest.mark.parametrize("correlation_length", [0.5, 2.0, 16.0, 5000.0])
def test_row_field_recurrence(correlation_length):
    rng = CounterRng(4, "devicemap.rows")
    rows = 3000
    field = _row_field(rng, 0, 1, rows, correlation_length)

    noise = _normals(rng, (0, 1), rows)
    a = math.exp(-1.0 / correlation_length)
    b = math.sqrt(1.0 - a * a)
    expected = [noise[0]]
    for r in range(1, rows):
        expected.append(a * expected[-1] + b * noise[r])
    np.testing.assert_allclose(field, expected, rtol=1e-9, atol=1e-9)


def _adjacent_weak_rows(device_map):
    rows = {(rank, bank, row) for (rank, bank, row), _ in device_map.items()}
    return sum((rank, bank, row + 1) in rows for rank, bank, row in rows)


def test_correlated_rows_localize():
    correlated = generate_statistical_map(_GEOMETRY, VariationParams(density=0.01, correlation_length=64, seed=5))
    uncorrelated = generate_statistical_map(_GEOMETRY, VariationParams(density=0.01, correlation_length=0, seed=5))
    assert correlated.weak_row_count() == uncorrelated.weak_row_count() == 2 * 102
    # Chance adjacency among 102 of 1024 rows is about 10 pairs per bank.
    assert _adjacent_weak_rows(uncorrelated) < 60
    assert _adjacent_weak_rows(correlated) > 120


def test_cells_concentrate_in_clusters():
    def median_span(cluster_spread):
        spans = []
        for seed in range(5):
            params = VariationParams(density=0.01, cluster_size=8, cluster_spread=cluster_spread, seed=seed)
            device_map = generate_statistical_map(_GEOMETRY, params)
            assert device_map.weak_cell_count() == 2 * 655
            spans.extend(max(columns) - min(columns) for _, columns in device_map.items())
        return float(np.median(spans))

    # 6 or 7 uniform columns out of 64 span about 47 on average.
    assert median_span(2.0) < 20
    assert median_span(0) > 35


def test_density_over_seeds():
    geometry = DeviceGeometry(banks_per_rank=1, rows_per_bank=4096, columns_per_row=1024, bytes_per_row=128)
    wanted = 0.01 * 4096 * 1024
    rows = set()
    for seed in range(7, 17):
        device_map = generate_statistical_map(geometry, VariationParams(density=0.01, seed=seed))
        assert 0.8 * wanted <= device_map.weak_cell_count() <= 1.2 * wanted
        assert device_map.weak_cell_count() == 41_943
        assert device_map.weak_row_count() == 410
        rows.add(tuple(key for key, _ in device_map.items()))
    assert len(rows) == 10

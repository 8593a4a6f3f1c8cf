import numpy as np

from rowhammer_sim.simulator import CounterRng, stream_tag


def test_pure_function_of_key():
    a = CounterRng(7, "faults")
    b = CounterRng(7, "faults")
    assert a.bits(1, 2, 3) == b.bits(1, 2, 3)
    assert a.random(1, 2, 3) == b.random(1, 2, 3)
    # Order of evaluation does not matter.
    first = [a.random(i) for i in range(10)]
    second = [b.random(i) for i in reversed(range(10))][::-1]
    assert first == second


def test_streams_and_seeds_differ():
    assert CounterRng(7, "faults").bits(0) != CounterRng(8, "faults").bits(0)
    assert CounterRng(7, "faults").bits(0) != CounterRng(7, "trr").bits(0)
    assert CounterRng(7, "faults").bits(0, 1) != CounterRng(7, "faults").bits(1, 0)
    assert stream_tag("faults") == stream_tag("faults")
    assert stream_tag("faults") != stream_tag("trr")


def test_uniforms_scalar_matches_vector():
    rng = CounterRng(3, "lanes")
    short = rng.uniforms((1, 2), list(range(8)))
    long = rng.uniforms((1, 2), np.arange(64))
    np.testing.assert_array_equal(short, long[:8])
    assert long.dtype == np.float64
    assert np.all((long >= 0) & (long < 1))


def test_open_uniforms():
    rng = CounterRng(0, "open")
    draws = rng.open_uniforms((0,), np.arange(1000))
    assert np.all((draws > 0) & (draws < 1))
    assert 0 < rng.open_random(5) < 1


def test_uniform_mean():
    draws = CounterRng(11, "mean").uniforms((0,), np.arange(100_000))
    # Standard error of the mean is about 0.0009.
    assert abs(draws.mean() - 0.5) < 0.005

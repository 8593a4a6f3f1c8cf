from __future__ import annotations as __future_annotations__

import dataclasses
import logging
import math
from typing import TYPE_CHECKING

import numpy as np
from tqdm import tqdm

from .. import envs
from ..devicemap import resolve_device_map
from ..model import TrrVariantEnum
from ..simulator import Engine
from ..simulator.__types__ import PatternProbabilities
from .__types__ import ConsistencyReport
from .offline import expected_bitflips, windowize

if TYPE_CHECKING:
    from collections.abc import Iterable

    from ..devicemap import DeviceMap
    from ..model import SimConfig
    from ..simulator.__types__ import Command

logger = logging.getLogger(__name__)


def online_offline_consistency(
    commands: Iterable[Command],
    config: SimConfig,
    n_seeds: int = 30,
    device_map: DeviceMap | None = None,
    tolerance: float = 3.0,
) -> ConsistencyReport:
    """
    Compare the online Monte-Carlo bitflips of a command stream,
    over `n_seeds` consecutive seeds from `config.rng_seed`,
    with the offline analytic expectation.

    The offline side replays TRR whenever a variant is configured.
    A probabilistic variant is replayed with the base seed only,
    the comparison is then exact only in expectation over its sampling.

    Args:
        commands:
            Command stream, materialized once.
        config:
            Configuration of the online runs.
        n_seeds:
            Online runs to average.
        device_map:
            Weak-cell map, resolved from the configuration when None.
        tolerance:
            Accepted deviation of the online mean, in sigmas.

    Returns:
        The report, see `ConsistencyReport.check()` to enforce it.

    """
    commands = list(commands)
    if device_map is None:
        device_map = resolve_device_map(config)
    base = dataclasses.replace(config, rh_stat_file=None, trr_stats_dump=None)

    windows = windowize(commands, base, trr_replay=base.trr_variant != TrrVariantEnum.NONE)
    expected, variance = expected_bitflips(
        windows,
        PatternProbabilities.from_config(base),
        device_map,
        base.rowhammer_threshold,
    )

    online: list[int] = []
    for seed in tqdm(
        range(n_seeds),
        desc="Seeds",
        unit="run",
        disable=not envs.ROWHAMMER_SIM_PROGRESS,
    ):
        run = dataclasses.replace(base, rng_seed=base.rng_seed + seed)
        report = Engine(run, device_map).run(commands)
        online.append(report.total_bitflips)

    values = np.asarray(online, dtype=np.float64)
    report = ConsistencyReport(
        seeds=n_seeds,
        online=online,
        online_mean=float(values.mean()) if n_seeds else 0.0,
        online_std=float(values.std()) if n_seeds else 0.0,
        offline_expected=expected,
        sigma=math.sqrt(variance / n_seeds) if n_seeds else 0.0,
        tolerance=tolerance,
    )
    logger.info(
        "Online mean %.6g over %d seed(s), offline expectation %.6g (z=%.3g)",
        report.online_mean,
        n_seeds,
        report.offline_expected,
        report.z,
    )
    return report

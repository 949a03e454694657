from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd

from feedback_loop.core.types.feedback import FeedbackEvent, Observation
from feedback_loop.engine.agent import AdaptiveEngine
from feedback_loop.engine.gate import GateConfig
from feedback_loop.metrics import linear_fit_r2
from feedback_loop.tools.logging import setup_logger
from feedback_loop.tools.serialization import write_csv
from feedback_loop.tools.timers import LatencyMeter

logger = setup_logger()

BENCH_ACTIONS = (4, 16, 64, 256)
BENCH_CTX_DIMS = (4, 16, 64, 128)
COMPLEXITY_COLUMNS = ("num_actions", "ctx_dim", "work", "median_update_us", "mean_update_us")


@dataclass
class ComplexityResult:
    table: pd.DataFrame
    slope: float
    """Microseconds per unit of |A| * d
    """
    intercept: float
    r2: float


def time_updates(num_actions: int, ctx_dim: int, num_updates: int = 200, seed: int = 0) -> LatencyMeter:
    """Time `num_updates` engine updates with random contexts and feedback."""
    rng = np.random.default_rng(seed)
    engine = AdaptiveEngine(num_actions, ctx_dim, rng, gate=GateConfig(mode="off"))
    meter = LatencyMeter()
    for t in range(num_updates):
        ctx = rng.uniform(-1.0, 1.0, size=ctx_dim)
        engine.select(Observation(ctx=ctx, engagement=1.0))
        event = FeedbackEvent(step=t, implicit=float(rng.random()))
        with meter.measure():
            engine.ingest(event)
    return meter


def run_complexity_bench(
    out_dir: Path,
    actions: Sequence[int] = BENCH_ACTIONS,
    ctx_dims: Sequence[int] = BENCH_CTX_DIMS,
    num_updates: int = 200,
    seed: int = 0,
) -> ComplexityResult:
    """Measure the per-update time of the engine over the `actions` x `ctx_dims` grid, regress it
    on |A| * d and write `complexity.csv`. Timings vary between machines, so the CSV is not
    reproducible byte for byte.
    """
    rows = []
    for num_actions in actions:
        for ctx_dim in ctx_dims:
            meter = time_updates(num_actions, ctx_dim, num_updates, seed)
            rows.append((num_actions, ctx_dim, num_actions * ctx_dim, meter.median_s * 1e6, meter.mean_ms * 1e3))
    table = pd.DataFrame(rows, columns=list(COMPLEXITY_COLUMNS))

    slope, intercept, r2 = linear_fit_r2(table["work"], table["median_update_us"])
    logger.info(f"Update time ~ {slope:.4g}us x |A|d + {intercept:.4g}us, R^2 = {r2:.3f}.")
    write_csv(table, out_dir / "complexity.csv")
    return ComplexityResult(table=table, slope=slope, intercept=intercept, r2=r2)

"""Seeded randomized search for a zero skip-cost arrangement of a covering
design's own blocks, i.e. at expansion factor 1.

Sufficiently large designs always admit such an arrangement, but no efficient
recipe is known, so this module searches: draw independent uniform
permutations per column and test the exact zero-skip checker.  Every random
draw comes from a dedicated substream (SHA-256 of seed, trial and column
index feeding a Mersenne Twister), so outcomes are reproducible across runs,
platforms, and any evaluation order.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from enum import Enum

from .designs import CoveringDesign
from .skipcost import CfrArray, RepairPlan, is_zero_skip, zero_cost_plan

__all__ = [
    "Strategy",
    "SearchConfig",
    "SearchOutcome",
    "random_ordering",
    "search_zero_skip",
    "greedy_partition",
]


class Strategy(Enum):
    GLOBAL_RESHUFFLE = "global"  # fresh full array every trial
    LOCAL_REPAIR = "local"  # reshuffle only the currently failing columns


@dataclass(frozen=True)
class SearchConfig:
    seed: int
    max_trials: int
    locality: int
    strategy: Strategy = Strategy.GLOBAL_RESHUFFLE

    def __post_init__(self):
        if self.max_trials < 1:
            raise ValueError("max_trials must be >= 1")
        if self.locality < 1:
            raise ValueError("locality must be >= 1")


@dataclass(frozen=True)
class SearchOutcome:
    success: bool
    array: CfrArray | None
    trials_used: int
    failing_columns: tuple[int, ...]
    # one (trial index, failing-column count) entry per trial, for logging
    trial_log: tuple[tuple[int, int], ...] = field(default=())


def _substream(seed: int, trial: int, column: int) -> random.Random:
    digest = hashlib.sha256(f"cfr:{seed}:{trial}:{column}".encode("ascii")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def _shuffled(block: tuple[int, ...], rng: random.Random) -> tuple[int, ...]:
    items = list(block)
    for i in range(len(items) - 1, 0, -1):  # Fisher-Yates
        j = rng.randrange(i + 1)
        items[i], items[j] = items[j], items[i]
    return tuple(items)


def _require_distinct(design: CoveringDesign) -> None:
    if design.has_duplicate_blocks():
        raise ValueError(
            "randomized search requires distinct blocks; remove duplicates first "
            "(a duplicated column is already repairable from its twin)"
        )


def random_ordering(design: CoveringDesign, seed: int, trial: int = 1) -> CfrArray:
    """Arrange each block in an independent uniform random order.  Column j's
    permutation depends only on (seed, trial, j), so repeated calls agree."""
    _require_distinct(design)
    columns = [
        _shuffled(block, _substream(seed, trial, j))
        for j, block in enumerate(design.blocks, start=1)
    ]
    return CfrArray.from_columns(columns, design.params.v)


def _failing_columns(array: CfrArray, locality: int) -> list[int]:
    return [
        j
        for j in range(1, array.n + 1)
        if zero_cost_plan(array, j, locality) is None
    ]


def search_zero_skip(design: CoveringDesign, config: SearchConfig) -> SearchOutcome:
    """Search for an arrangement with zero skip cost at the configured
    locality; failure after max_trials is an outcome, not an error.

    GLOBAL_RESHUFFLE redraws the whole array each trial.  LOCAL_REPAIR starts
    from trial 1 and then reshuffles only the failing columns each round,
    rechecking the reshuffled columns and every column whose recorded plan
    read from a reshuffled helper (reshuffling can break bystanders' plans).
    """
    _require_distinct(design)
    if config.strategy is Strategy.GLOBAL_RESHUFFLE:
        return _search_global(design, config)
    return _search_local(design, config)


def _finish_success(array: CfrArray, config: SearchConfig, trials: int, log) -> SearchOutcome:
    check = is_zero_skip(array, config.locality)
    if not check.ok:  # guards the incremental bookkeeping of LOCAL_REPAIR
        raise RuntimeError(f"internal error: column {check.failing_column} not zero-cost")
    return SearchOutcome(
        success=True,
        array=array,
        trials_used=trials,
        failing_columns=(),
        trial_log=tuple(log),
    )


def _search_global(design: CoveringDesign, config: SearchConfig) -> SearchOutcome:
    log: list[tuple[int, int]] = []
    last_failing: list[int] = []
    for trial in range(1, config.max_trials + 1):
        array = random_ordering(design, config.seed, trial)
        last_failing = _failing_columns(array, config.locality)
        log.append((trial, len(last_failing)))
        if not last_failing:
            return _finish_success(array, config, trial, log)
    return SearchOutcome(
        success=False,
        array=None,
        trials_used=config.max_trials,
        failing_columns=tuple(last_failing),
        trial_log=tuple(log),
    )


def _search_local(design: CoveringDesign, config: SearchConfig) -> SearchOutcome:
    columns = list(random_ordering(design, config.seed, 1).columns)
    v = design.params.v
    array = CfrArray.from_columns(columns, v)
    plans: dict[int, RepairPlan | None] = {
        j: zero_cost_plan(array, j, config.locality) for j in range(1, array.n + 1)
    }
    log: list[tuple[int, int]] = []
    failing = sorted(j for j, plan in plans.items() if plan is None)
    log.append((1, len(failing)))
    trial = 1
    while failing and trial < config.max_trials:
        trial += 1
        for j in failing:
            columns[j - 1] = _shuffled(design.blocks[j - 1], _substream(config.seed, trial, j))
        array = CfrArray.from_columns(columns, v)
        touched = set(failing)
        recheck = set(failing)
        for j, plan in plans.items():
            if plan is not None and any(t.helper in touched for t in plan.transmissions):
                recheck.add(j)
        for j in sorted(recheck):
            plans[j] = zero_cost_plan(array, j, config.locality)
        failing = sorted(j for j, plan in plans.items() if plan is None)
        log.append((trial, len(failing)))
    if failing:
        return SearchOutcome(
            success=False,
            array=None,
            trials_used=trial,
            failing_columns=tuple(failing),
            trial_log=tuple(log),
        )
    return _finish_success(array, config, trial, log)


def greedy_partition(block: tuple[int, ...], t: int) -> list[tuple[int, ...]]:
    """Chunk the ascending block into consecutive pieces of size t-1 (the last
    piece keeps the remainder, of size len mod-bar (t-1)).  This is the
    partition a greedy helper-selection repair uses."""
    if t < 2:
        raise ValueError("greedy partition needs t >= 2")
    items = sorted(block)
    step = t - 1
    return [tuple(items[i : i + step]) for i in range(0, len(items), step)]

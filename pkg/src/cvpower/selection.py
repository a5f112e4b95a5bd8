"""Greedy wrapper-forward feature selection over an arbitrary cost function."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Protocol, Sequence

from .errors import SelectionError


class CostEstimate(Protocol):
    mean_acc: float


@dataclass(frozen=True)
class SelectionConfig:
    """Stopping rule for forward selection.

    fixed_size adds exactly ``l_target`` features; auto_stop keeps adding
    while the best candidate improves the cost by more than
    ``improvement_epsilon``.
    """

    mode: str
    l_target: int | None = None
    improvement_epsilon: float = 0.0

    def __post_init__(self):
        if self.mode not in ("fixed_size", "auto_stop"):
            raise ValueError(f"unknown selection mode: {self.mode!r}")
        if self.mode == "fixed_size":
            if self.l_target is None or self.l_target < 1:
                raise ValueError("fixed_size requires l_target >= 1")
        if self.improvement_epsilon < 0:
            raise ValueError("improvement_epsilon must be >= 0")

    @classmethod
    def fixed(cls, l_target: int) -> "SelectionConfig":
        return cls(mode="fixed_size", l_target=l_target)

    @classmethod
    def auto(cls, improvement_epsilon: float = 0.0) -> "SelectionConfig":
        return cls(mode="auto_stop", improvement_epsilon=improvement_epsilon)


@dataclass(frozen=True)
class SelectionResult:
    selected: tuple[int, ...]
    cost_trace: tuple[float, ...]


def forward_select(
    dataset,
    cost_fn: Callable[[Sequence[int]], CostEstimate],
    cfg: SelectionConfig,
) -> SelectionResult:
    """Greedily grow a feature set, one best candidate per step.

    At every step each remaining feature is scored by
    ``cost_fn(selected + [candidate]).mean_acc`` and the maximizer is
    added; equal scores break toward the lowest feature index.  The cost
    function is expected to be deterministic for a given subset (the
    pipelines achieve this by fixing their split plan up front).
    """
    m = dataset.n_features
    if m < 1:
        raise ValueError("dataset has no features")
    if cfg.mode == "fixed_size" and cfg.l_target > m:
        raise ValueError(f"l_target={cfg.l_target} exceeds feature count {m}")

    selected: list[int] = []
    trace: list[float] = []
    best_so_far = -float("inf")
    remaining = list(range(m))
    limit = cfg.l_target if cfg.mode == "fixed_size" else m
    for step in range(limit):
        best_feature = -1
        best_cost = -float("inf")
        for f in remaining:
            try:
                est = cost_fn(selected + [f])
            except Exception as exc:
                raise SelectionError(
                    f"cost evaluation failed at step {step + 1} for candidate "
                    f"feature {f} (selected so far: {selected})"
                ) from exc
            # Strict > with ascending candidate order = lowest-index ties.
            if est.mean_acc > best_cost:
                best_cost = est.mean_acc
                best_feature = f
        if cfg.mode == "auto_stop" and best_cost - best_so_far <= cfg.improvement_epsilon:
            break
        selected.append(best_feature)
        remaining.remove(best_feature)
        trace.append(best_cost)
        best_so_far = best_cost
    return SelectionResult(selected=tuple(selected), cost_trace=tuple(trace))

"""Deterministic operation and storage accounting for solver runs.

Multiply-add counts are incremented analytically from the sizes of the
array blocks each step touches, so two runs with the same configuration
report identical counts no matter what function values flow through.
Storage tracks the number of persistent float64 slots alive at once; every
tracked allocation must be released, and the largest single allocation is
recorded so callers can assert that no quadratic-size buffer ever existed.
"""

from __future__ import annotations

__all__ = ["Tally"]


class Tally:
    __slots__ = ("multiply_adds", "current_reals", "peak_reals", "largest_single_alloc")

    def __init__(self):
        self.multiply_adds = 0
        self.current_reals = 0
        self.peak_reals = 0
        self.largest_single_alloc = 0

    def add_ops(self, count: int) -> None:
        self.multiply_adds += int(count)

    def alloc(self, reals: int) -> int:
        """Register a persistent allocation of `reals` float64 slots."""
        reals = int(reals)
        self.current_reals += reals
        if self.current_reals > self.peak_reals:
            self.peak_reals = self.current_reals
        if reals > self.largest_single_alloc:
            self.largest_single_alloc = reals
        return reals

    def free(self, reals: int) -> None:
        reals = int(reals)
        if reals > self.current_reals:
            raise ValueError(
                f"releasing {reals} reals but only {self.current_reals} are live"
            )
        self.current_reals -= reals

    def report(self) -> dict:
        return {
            "multiply_adds": self.multiply_adds,
            "peak_reals_stored": self.peak_reals,
            "largest_single_alloc": self.largest_single_alloc,
        }

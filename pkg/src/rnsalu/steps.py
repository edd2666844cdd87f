"""Digit-step instrumentation.

A digit-step is one digit-parallel operation: every residue digit is
updated at once, so the step costs the same regardless of how many digits
the system has.  Operations never touch global state; callers that want
counts pass a :class:`StepCounter` explicitly.
"""

from __future__ import annotations

from collections import defaultdict
from contextlib import contextmanager, nullcontext
from dataclasses import dataclass, field


@dataclass
class StepCounter:
    """Accumulates digit-steps and per-operation samples.

    ``samples[op]`` holds one entry per call of ``op`` made under
    :meth:`measure`, equal to the steps consumed by that call (including
    nested operations).
    """

    steps: int = 0
    normalizations: int = 0
    samples: dict[str, list[int]] = field(default_factory=lambda: defaultdict(list))

    def tick(self, n: int = 1) -> None:
        self.steps += n

    @contextmanager
    def measure(self, op: str):
        start = self.steps
        try:
            yield self
        finally:
            self.samples[op].append(self.steps - start)

    def last(self, op: str) -> int:
        """Step count of the most recent ``op`` call."""
        return self.samples[op][-1]

    def snapshot(self) -> dict:
        return {
            "steps": self.steps,
            "normalizations": self.normalizations,
            "samples": {k: list(v) for k, v in self.samples.items()},
        }


def tick(counter: StepCounter | None, n: int = 1) -> None:
    if counter is not None and n:
        counter.tick(n)


def measure(counter: StepCounter | None, op: str):
    if counter is None:
        return nullcontext()
    return counter.measure(op)

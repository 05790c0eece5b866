"""Pass/fail reports with recomputable witnesses, shared by all verifiers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class Violation:
    """One failed sample: the pair and both sides of the violated inequality."""

    x: np.ndarray
    y: np.ndarray
    lhs: float
    rhs: float

    def describe(self) -> str:
        return (
            f"x={np.array2string(self.x, precision=6)} "
            f"y={np.array2string(self.y, precision=6)} lhs={self.lhs!r} rhs={self.rhs!r}"
        )


@dataclass
class PropertyReport:
    """Outcome of a sampled property check; fails iff violations were found."""

    name: str
    samples: int
    violations: list[Violation] = field(default_factory=list)
    alpha: float | None = None

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def summary(self) -> str:
        head = f"{self.name}: {self.verdict} ({self.samples} samples"
        if self.alpha is not None:
            head += f", alpha={self.alpha}"
        head += f", {len(self.violations)} violations)"
        if self.violations:
            head += "\n  first witness: " + self.violations[0].describe()
        return head

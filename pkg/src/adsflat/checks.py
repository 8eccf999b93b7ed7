from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Check:
    """Outcome of one numerical invariant check."""

    invariant: str
    max_residual: float
    tolerance: float
    passed: bool | None = None

    def __post_init__(self):
        r = float(self.max_residual)
        object.__setattr__(self, "max_residual", r)
        object.__setattr__(self, "tolerance", float(self.tolerance))
        if self.passed is None:
            object.__setattr__(self, "passed", bool(r <= self.tolerance))

    def as_dict(self):
        return {
            "invariant": self.invariant,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "pass": bool(self.passed),
        }


def all_pass(checks) -> bool:
    return all(c.passed for c in checks)

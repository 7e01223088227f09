"""Result types shared by the inequality verifiers."""

from __future__ import annotations

from typing import NamedTuple


class UnsupportedRangeError(ValueError):
    """alpha outside the range where the inequality is established."""


class CheckResult(NamedTuple):
    lhs: float
    rhs: float
    holds: bool

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    def to_json_obj(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "holds": bool(self.holds), "slack": self.slack}

"""Generic hypothesis-test result value type shared by all test modules."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .distributions import LEVELS, DistRef
from .errors import DomainError


@dataclass(frozen=True)
class Statistic:
    """One form of a test statistic (a test may carry several: F, LM, t, LR)."""

    name: str
    value: float
    dist: DistRef | None = None
    df: tuple[float, ...] = ()
    p_value: float | None = None

    def __post_init__(self):
        if math.isnan(self.value):
            raise DomainError(f"statistic {self.name!r} is NaN")
        if self.p_value is not None and not (0.0 <= self.p_value <= 1.0):
            raise DomainError(f"statistic {self.name!r}: p-value {self.p_value} outside [0,1]")


@dataclass(frozen=True)
class TestResult:
    """Outcome of one hypothesis test.

    ``decision_at`` maps a significance level to "reject" or
    "fail-to-reject"; for p-value based tests it derives from the primary
    (first) statistic, for table-based tests from critical-value
    comparisons. ``critical_values`` and ``p_bracket`` are populated by
    tests whose reference distribution is handled through embedded tables.
    """

    test_name: str
    null_hypothesis: str
    statistics: tuple[Statistic, ...]
    decision_at: dict[float, str]
    critical_values: dict[float, float] = field(default_factory=dict)
    p_bracket: str | None = None

    def __post_init__(self):
        if not self.statistics:
            raise DomainError(f"test {self.test_name!r} carries no statistics")
        for level, decision in self.decision_at.items():
            if decision not in ("reject", "fail-to-reject"):
                raise DomainError(f"bad decision {decision!r} at level {level}")

    @property
    def statistic(self) -> Statistic:
        return self.statistics[0]

    def stat(self, name: str) -> Statistic:
        for s in self.statistics:
            if s.name == name:
                return s
        raise DomainError(f"test {self.test_name!r} has no statistic {name!r}")

    def rejects(self, level: float = 0.05) -> bool:
        if level not in self.decision_at:
            raise DomainError(f"no decision recorded at level {level}")
        return self.decision_at[level] == "reject"


def decisions_from_p(p: float, levels: tuple[float, ...] = LEVELS) -> dict[float, str]:
    """Standard decision map: reject when p <= level."""
    return {lv: ("reject" if p <= lv else "fail-to-reject") for lv in levels}


def decisions_from_lower_tail(stat: float, critical_values: dict[float, float]) -> dict[float, str]:
    """Reject when the statistic falls below the critical value (ADF-style)."""
    return {lv: ("reject" if stat < cv else "fail-to-reject") for lv, cv in critical_values.items()}


def decisions_from_upper_tail(stat: float, critical_values: dict[float, float]) -> dict[float, str]:
    """Reject when the statistic exceeds the critical value (KPSS-style)."""
    return {lv: ("reject" if stat > cv else "fail-to-reject") for lv, cv in critical_values.items()}

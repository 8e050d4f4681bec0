"""Budgets and tri-state verdicts shared by every bounded search."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Any


@dataclass(frozen=True)
class Budget:
    max_word_length: int = 24
    max_words: int = 20000
    max_cells: int = 8
    max_depth: int = 64

    def __post_init__(self):
        for name in ("max_word_length", "max_words", "max_cells", "max_depth"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    def scaled(self, **changes) -> "Budget":
        return replace(self, **changes)


@dataclass(frozen=True)
class BudgetUsed(Budget):
    """Resources actually consumed by a search; zero is allowed."""

    def __post_init__(self):
        pass


DEFAULT_BUDGET = Budget()


class Status(str, enum.Enum):
    PROVED = "Proved"
    REFUTED = "Refuted"
    UNKNOWN = "Unknown"


@dataclass
class Verdict:
    status: Status
    certificate: Any = None
    budget_used: Budget | None = None
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status is not Status.UNKNOWN and self.certificate is None:
            raise ValueError("decided verdicts need a certificate")

    @property
    def proved(self) -> bool:
        return self.status is Status.PROVED

    @property
    def refuted(self) -> bool:
        return self.status is Status.REFUTED

    @property
    def unknown(self) -> bool:
        return self.status is Status.UNKNOWN

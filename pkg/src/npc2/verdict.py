"""Three-valued verdicts and the search budgets that bound them."""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field, fields, replace
from typing import Any


class Verdict(str, enum.Enum):
    YES = "YES"
    NO = "NO"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class Budget:
    """Limits for the semi-decision procedures.

    ``tietze_moves`` caps presentation simplification, ``max_cosets`` caps
    coset tables, ``word_length`` caps kernel-witness words and
    ``search_nodes`` caps the number of complexes visited by the
    collapsibility search.
    """

    tietze_moves: int = 10**4
    max_cosets: int = 10**5
    word_length: int = 12
    search_nodes: int = 10**6

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) < 1:
                raise ValueError(f"budget {f.name} must be positive")

    @classmethod
    def from_env(cls, environ=None, **overrides) -> "Budget":
        """Read ``NPC2_BUDGET_<FIELD>`` variables; explicit overrides win."""
        environ = os.environ if environ is None else environ
        values = {}
        for f in fields(cls):
            raw = environ.get(f"NPC2_BUDGET_{f.name.upper()}")
            if raw is not None:
                values[f.name] = int(raw)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def scaled(self, factor: int) -> "Budget":
        return replace(self, **{f.name: getattr(self, f.name) * factor for f in fields(self)})


@dataclass
class TriVerdict:
    """YES/NO carry a certificate; UNKNOWN carries what ran out."""

    value: Verdict
    witness: Any = None
    certificate: dict = field(default_factory=dict)
    budget_spent: dict = field(default_factory=dict)

    def __bool__(self):
        raise TypeError("TriVerdict is three-valued; compare .value instead")

    @property
    def yes(self) -> bool:
        return self.value is Verdict.YES

    @property
    def no(self) -> bool:
        return self.value is Verdict.NO

    @property
    def unknown(self) -> bool:
        return self.value is Verdict.UNKNOWN

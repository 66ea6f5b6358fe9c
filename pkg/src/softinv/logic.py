"""Kleene's 3-valued logic.

Values are encoded as small integers so that whole interpretations can be
held in numpy arrays: ``0`` is false, ``1`` is unknown (1/2) and ``2`` is
true.  Under this encoding conjunction is ``min``, disjunction is ``max``
and negation is ``2 - x``.
"""
from __future__ import annotations

import enum

import numpy as np

FALSE = 0
HALF = 1
TRUE = 2

DTYPE = np.int8


class LogicValue(enum.Enum):
    FALSE = FALSE
    HALF = HALF
    TRUE = TRUE

    @classmethod
    def of(cls, value) -> "LogicValue":
        """Coerce a bool, 0 / 1 / 0.5, LogicValue or text ("0", "1", "1/2").

        Integers are read as truth values, not as internal codes: ``of(1)``
        is true.  Use ``LogicValue(code)`` to decode array entries.
        """
        if isinstance(value, LogicValue):
            return value
        if isinstance(value, (bool, np.bool_)):
            return cls.TRUE if value else cls.FALSE
        if isinstance(value, str):
            try:
                return _TEXT[value.strip()]
            except KeyError:
                raise ValueError(f"not a logic value: {value!r}") from None
        if value == 0.5:
            return cls.HALF
        if value in (0, 1):
            return cls.TRUE if value else cls.FALSE
        raise ValueError(f"not a logic value: {value!r}")

    def __and__(self, other: "LogicValue") -> "LogicValue":
        return LogicValue(min(self.value, LogicValue.of(other).value))

    def __or__(self, other: "LogicValue") -> "LogicValue":
        return LogicValue(max(self.value, LogicValue.of(other).value))

    def __invert__(self) -> "LogicValue":
        return LogicValue(TRUE - self.value)

    def implies(self, other: "LogicValue") -> "LogicValue":
        return ~self | other

    def iff(self, other: "LogicValue") -> "LogicValue":
        return self.implies(other) & LogicValue.of(other).implies(self)

    def join(self, other: "LogicValue") -> "LogicValue":
        """Least upper bound in the information order."""
        other = LogicValue.of(other)
        return self if self is other else LogicValue.HALF

    def leq(self, other: "LogicValue") -> bool:
        """Information order: ``self`` is at least as precise as ``other``."""
        other = LogicValue.of(other)
        return self is other or other is LogicValue.HALF

    @property
    def definite(self) -> bool:
        return self is not LogicValue.HALF

    def __str__(self) -> str:
        return ("0", "1/2", "1")[self.value]


_TEXT = {"0": LogicValue.FALSE, "1": LogicValue.TRUE, "1/2": LogicValue.HALF,
         "½": LogicValue.HALF, "false": LogicValue.FALSE, "true": LogicValue.TRUE}


def join_arrays(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.where(a == b, a, HALF).astype(DTYPE)


def leq_arrays(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a == b) | (b == HALF)


def value_text(code: int) -> str:
    return ("0", "1/2", "1")[int(code)]

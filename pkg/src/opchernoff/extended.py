"""Extended reals with an explicit finite / infinite / not-computed state."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass


class ExtState(str, enum.Enum):
    FINITE = "finite"
    INFINITE = "infinite"
    NOT_COMPUTED = "not_computed"


@dataclass(frozen=True)
class Extended:
    """A real number, ``+inf``, or a marker that nothing was computed.

    ``float(x)`` maps the infinite state to ``math.inf`` and the
    not-computed state to ``nan`` for arithmetic convenience, but the state
    field is the source of truth.
    """

    state: ExtState
    value: float = math.nan

    @classmethod
    def finite(cls, value: float) -> "Extended":
        value = float(value)
        if not math.isfinite(value):
            raise ValueError(f"finite Extended got {value!r}")
        return cls(ExtState.FINITE, value)

    @classmethod
    def from_float(cls, value: float) -> "Extended":
        """``+inf`` becomes the infinite state; nan and ``-inf`` are rejected."""
        value = float(value)
        if value == math.inf:
            return INFINITY
        return cls.finite(value)

    @property
    def is_finite(self) -> bool:
        return self.state is ExtState.FINITE

    @property
    def is_infinite(self) -> bool:
        return self.state is ExtState.INFINITE

    def __float__(self) -> float:
        if self.state is ExtState.FINITE:
            return self.value
        if self.state is ExtState.INFINITE:
            return math.inf
        return math.nan

    def to_json(self):
        if self.state is ExtState.FINITE:
            return self.value
        if self.state is ExtState.INFINITE:
            return "inf"
        return None

    def __str__(self) -> str:
        if self.state is ExtState.FINITE:
            return repr(self.value)
        return "inf" if self.is_infinite else "n/a"


INFINITY = Extended(ExtState.INFINITE, math.inf)
NOT_COMPUTED = Extended(ExtState.NOT_COMPUTED)


def ext_le(a: Extended, b: Extended, slack: float = 0.0) -> bool:
    """``a <= b + slack`` in the extended order; not-computed compares False."""
    if a.state is ExtState.NOT_COMPUTED or b.state is ExtState.NOT_COMPUTED:
        return False
    if b.is_infinite:
        return True
    if a.is_infinite:
        return False
    return a.value <= b.value + slack


def ext_close(a: Extended, b: Extended, tol: float) -> bool:
    """Equal states and, when finite, ``|a - b| <= tol * max(1, |a|, |b|)``."""
    if a.state is not b.state:
        return False
    if not a.is_finite:
        return True
    return abs(a.value - b.value) <= tol * max(1.0, abs(a.value), abs(b.value))

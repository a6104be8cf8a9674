"""Exception types and validation-violation records shared across the package."""

from __future__ import annotations

from dataclasses import dataclass


class ChannelValidationError(ValueError):
    """Raised when a channel description violates its structural invariants.

    Carries the full list of violation records in ``violations``.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


@dataclass(frozen=True)
class NonInjective:
    """A combiner/receiver table failed the injective-in-each-argument test."""

    function: str        # e.g. "h2" or "f1"
    fixed_slot: int      # which argument was held fixed (0 or 1)
    fixed_value: int
    colliding_pair: tuple[int, int]
    value: int           # the shared output

    def __str__(self):
        return (f"{self.function}: fixing argument {self.fixed_slot}={self.fixed_value}, "
                f"inputs {self.colliding_pair} both map to {self.value}")


@dataclass(frozen=True)
class NonStochastic:
    """A noise-kernel row does not sum to one."""

    receiver: int
    row: int
    total: object  # Fraction or float

    def __str__(self):
        return f"noise kernel {self.receiver}: row {self.row} sums to {self.total}"


@dataclass(frozen=True)
class TableShape:
    """A lookup table is not total over its declared domain/codomain."""

    table: str
    detail: str

    def __str__(self):
        return f"{self.table}: {self.detail}"


class UnknownVariable(KeyError):
    pass


class OverlappingSets(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


class NotDegenerate(ValueError):
    pass


class InvalidSelection(ValueError):
    pass


class InputError(ValueError):
    """Malformed input file or config (CLI exit code 2)."""

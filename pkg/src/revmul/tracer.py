"""Execution-side resource metering.

A ResourceLog rides along with the in-place arithmetic and records what the
run actually cost: a toffoli tally, the number of live tracked bits, the
high-water mark of that number, and an optional per-phase breakdown.
"""

from contextlib import contextmanager
from dataclasses import dataclass


class AccountingError(RuntimeError):
    """Raised when more bits are freed than are currently tracked as live."""


@dataclass(frozen=True)
class ResourceReport:
    toffoli: int
    high_water_bits: int
    breakdown: dict


class ResourceLog:
    __slots__ = ("toffoli", "allocated_bits", "high_water_bits", "events", "_phase")

    def __init__(self):
        self.toffoli = 0
        self.allocated_bits = 0
        self.high_water_bits = 0
        self.events = {}
        self._phase = None

    def __repr__(self):
        return (
            f"ResourceLog(toffoli={self.toffoli}, allocated_bits={self.allocated_bits},"
            f" high_water_bits={self.high_water_bits})"
        )

    def record_toffoli(self, count):
        if not isinstance(count, int) or count < 0:
            raise ValueError(f"toffoli count must be a nonnegative int, got {count!r}")
        self.toffoli += count
        if self._phase is not None:
            self.events[self._phase] = self.events.get(self._phase, 0) + count

    def track_alloc(self, bits):
        if not isinstance(bits, int) or bits < 0:
            raise ValueError(f"allocation must be a nonnegative int, got {bits!r}")
        self.allocated_bits += bits
        if self.allocated_bits > self.high_water_bits:
            self.high_water_bits = self.allocated_bits

    def track_free(self, bits):
        if not isinstance(bits, int) or bits < 0:
            raise ValueError(f"free must be a nonnegative int, got {bits!r}")
        if bits > self.allocated_bits:
            raise AccountingError(
                f"freeing {bits} bits but only {self.allocated_bits} are live"
            )
        self.allocated_bits -= bits

    @contextmanager
    def phase(self, name):
        """Attribute toffoli recorded inside the block to ``name``."""
        previous = self._phase
        self._phase = name
        try:
            yield self
        finally:
            self._phase = previous

    def report(self):
        return ResourceReport(self.toffoli, self.high_water_bits, dict(self.events))

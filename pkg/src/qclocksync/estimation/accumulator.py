"""Running outcome-product statistics per (label, quadrature) cell.

For the GHZ protocol the label is the distribution-sequence index; for the pairs and
Dicke protocols it is the index of the non-central party.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import CoverageError, RecordFormatError
from ..protocol.kinds import ProtocolKind, Quadrature
from ..protocol.rounds import RoundBatch

CellKey = tuple[int, Quadrature]


@dataclass(frozen=True)
class FringeCell:
    count: int = 0
    total: int = 0

    def __post_init__(self) -> None:
        if self.count < 0 or abs(self.total) > self.count:
            raise RecordFormatError(f"inconsistent cell: count={self.count}, sum={self.total}")
        if (self.count - self.total) % 2:
            raise RecordFormatError(f"sum {self.total} of +/-1 products cannot come from {self.count} rounds")

    def __add__(self, other: FringeCell) -> FringeCell:
        return FringeCell(self.count + other.count, self.total + other.total)


@dataclass
class FringeAccumulator:
    protocol: ProtocolKind
    n: int
    cells: dict[CellKey, FringeCell] = field(default_factory=dict)

    def add(self, key: CellKey, product: int) -> None:
        if product not in (1, -1):
            raise RecordFormatError(f"product must be +1 or -1, got {product}")
        self.add_many(key, 1, product)

    def add_many(self, key: CellKey, count: int, total: int) -> None:
        if count == 0:
            return
        self.cells[key] = self.cells.get(key, FringeCell()) + FringeCell(count, total)

    def cell(self, key: CellKey) -> FringeCell:
        found = self.cells.get(key)
        if found is None or found.count == 0:
            label, quad = key
            raise CoverageError(
                f"no {quad.value} rounds recorded for {'sequence' if self.protocol is ProtocolKind.GHZ else 'party'} {label}"
            )
        return found

    def total_rounds(self) -> int:
        counts = sum(c.count for c in self.cells.values())
        # pairs and Dicke cells count one product per non-central party per round
        return counts if self.protocol is ProtocolKind.GHZ else counts // max(self.n - 1, 1)

    def merge(self, other: FringeAccumulator) -> FringeAccumulator:
        if (other.protocol, other.n) != (self.protocol, self.n):
            raise RecordFormatError(
                f"cannot merge {other.protocol.value}/N={other.n} into {self.protocol.value}/N={self.n}"
            )
        merged = FringeAccumulator(self.protocol, self.n, dict(self.cells))
        for key, cell in other.cells.items():
            merged.add_many(key, cell.count, cell.total)
        return merged

    def record_batch(self, batch: RoundBatch) -> None:
        if (batch.protocol, batch.n) != (self.protocol, self.n):
            raise RecordFormatError("batch does not belong to this accumulator")
        sine = batch.schedule.sine
        products = batch.products()
        if batch.protocol is ProtocolKind.GHZ:
            columns = [(batch.schedule.labels, products)]
        else:
            columns = [
                (np.full(len(batch), i, dtype=np.int64), products[:, i - 1])
                for i in range(1, batch.n)
            ]
        for labels, values in columns:
            codes = 2 * labels + sine.astype(np.int64)
            counts = np.bincount(codes)
            totals = np.bincount(codes, weights=values).round().astype(np.int64)
            for code in np.flatnonzero(counts):
                quad = Quadrature.SINE if code % 2 else Quadrature.COSINE
                self.add_many((int(code // 2), quad), int(counts[code]), int(totals[code]))

    @classmethod
    def from_batch(cls, batch: RoundBatch) -> FringeAccumulator:
        acc = cls(batch.protocol, batch.n)
        acc.record_batch(batch)
        return acc

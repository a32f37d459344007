"""Classical broadcast of measurement outcomes and its line-based audit format.

One record per line, fields separated by single spaces::

    protocol round_index label quadrature nominal_time outcomes

``label`` is the sequence index (GHZ), the party index (PAIRS) or 0 (DICKE).
``outcomes`` is a comma-separated list of ``+1``/``-1``; PAIRS records carry
``x_party,x_central``. Lines starting with ``#`` are comments; the header comment
``# qclocksync-log protocol=<P> N=<n>`` pins the ensemble size.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from pathlib import Path
from typing import TYPE_CHECKING

from ..errors import RecordFormatError
from ..quantum import OutcomeString
from .kinds import ProtocolKind, Quadrature
from .rounds import MeasurementRecord, PairRecord, RoundBatch
from .schedule import ScheduledRound
from .sequences import sequence_count

if TYPE_CHECKING:
    from ..estimation.accumulator import FringeAccumulator

Record = MeasurementRecord | PairRecord


class BroadcastLog:
    """Append-only list of the outcomes every party has announced."""

    def __init__(self, protocol: ProtocolKind, n: int, records: Iterable[Record] = ()):
        self.protocol = protocol
        self.n = n
        self._records: list[Record] = []
        for record in records:
            self.append(record)

    def append(self, record: Record) -> None:
        expects_pair = self.protocol is ProtocolKind.PAIRS
        if isinstance(record, PairRecord) != expects_pair:
            raise RecordFormatError(
                f"{type(record).__name__} cannot be appended to a {self.protocol.value} log"
            )
        if isinstance(record, MeasurementRecord) and len(record.outcomes) != self.n:
            raise RecordFormatError(
                f"round {record.round_index}: {len(record.outcomes)} outcomes for {self.n} parties"
            )
        if isinstance(record, PairRecord) and not 1 <= record.party_index < self.n:
            raise RecordFormatError(f"round {record.round_index}: unknown party {record.party_index}")
        self._records.append(record)

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self) -> Iterator[Record]:
        return iter(self._records)

    def __add__(self, other: BroadcastLog) -> BroadcastLog:
        if (other.protocol, other.n) != (self.protocol, self.n):
            raise RecordFormatError("cannot concatenate logs of different protocols or sizes")
        return BroadcastLog(self.protocol, self.n, [*self._records, *other._records])

    @classmethod
    def from_batch(cls, batch: RoundBatch) -> BroadcastLog:
        return cls(batch.protocol, batch.n, batch.records())

    def to_lines(self) -> list[str]:
        lines = [f"# qclocksync-log protocol={self.protocol.value} N={self.n}"]
        for record in self._records:
            if isinstance(record, PairRecord):
                label = record.party_index
                outcomes: tuple[int, ...] = (record.x_party, record.x_central)
            else:
                label = record.round.sequence_index if self.protocol is ProtocolKind.GHZ else 0
                outcomes = record.outcomes.outcomes
            lines.append(
                " ".join(
                    [
                        self.protocol.value,
                        str(record.round_index),
                        str(label),
                        record.round.quadrature.value,
                        repr(float(record.round.nominal_time)),
                        ",".join(f"{x:+d}" for x in outcomes),
                    ]
                )
            )
        return lines

    def write(self, path: Path) -> None:
        path.write_text("\n".join(self.to_lines()) + "\n", encoding="utf-8")

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> BroadcastLog:
        protocol: ProtocolKind | None = None
        n: int | None = None
        parsed: list[tuple[int, list[str]]] = []
        for lineno, raw in enumerate(lines, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                for token in line[1:].split():
                    if token.startswith("protocol="):
                        protocol = _parse_protocol(token.split("=", 1)[1], lineno)
                    elif token.startswith("N="):
                        n = _parse_int(token[2:], lineno, "N")
                continue
            fields = line.split(" ")
            if len(fields) != 6:
                raise RecordFormatError(f"line {lineno}: expected 6 fields, got {len(fields)}")
            parsed.append((lineno, fields))

        if parsed and protocol is None:
            protocol = _parse_protocol(parsed[0][1][0], parsed[0][0])
        if protocol is None:
            raise RecordFormatError("empty log without a header cannot be replayed")
        if n is None:
            n = _infer_n(protocol, parsed)

        log = cls(protocol, n)
        for lineno, fields in parsed:
            log.append(_parse_record(protocol, n, lineno, fields))
        return log

    @classmethod
    def read(cls, path: Path) -> BroadcastLog:
        return cls.from_lines(path.read_text(encoding="utf-8").splitlines())


def _parse_protocol(text: str, lineno: int) -> ProtocolKind:
    try:
        return ProtocolKind(text)
    except ValueError:
        raise RecordFormatError(f"line {lineno}: unknown protocol {text!r}") from None


def _parse_int(text: str, lineno: int, name: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise RecordFormatError(f"line {lineno}: {name} must be an integer, got {text!r}") from None


def _parse_outcomes(text: str, lineno: int) -> tuple[int, ...]:
    values = []
    for token in text.split(","):
        if token not in ("+1", "-1"):
            raise RecordFormatError(f"line {lineno}: outcome {token!r} is not +1 or -1")
        values.append(int(token))
    return tuple(values)


def _infer_n(protocol: ProtocolKind, parsed: list[tuple[int, list[str]]]) -> int:
    if not parsed:
        raise RecordFormatError("cannot infer N from an empty log")
    if protocol is ProtocolKind.PAIRS:
        return max(_parse_int(f[2], lineno, "label") for lineno, f in parsed) + 1
    return len(parsed[0][1][5].split(","))


def _parse_record(protocol: ProtocolKind, n: int, lineno: int, fields: list[str]) -> Record:
    if _parse_protocol(fields[0], lineno) is not protocol:
        raise RecordFormatError(f"line {lineno}: protocol {fields[0]} in a {protocol.value} log")
    round_index = _parse_int(fields[1], lineno, "round_index")
    label = _parse_int(fields[2], lineno, "label")
    try:
        quad = Quadrature(fields[3])
        nominal = float(fields[4])
    except ValueError:
        raise RecordFormatError(f"line {lineno}: bad quadrature or nominal time") from None
    outcomes = _parse_outcomes(fields[5], lineno)

    if protocol is ProtocolKind.PAIRS:
        if len(outcomes) != 2:
            raise RecordFormatError(f"line {lineno}: pair records carry exactly two outcomes")
        return PairRecord(ScheduledRound(0, quad, nominal), label, outcomes[0], outcomes[1], round_index)
    if protocol is ProtocolKind.GHZ and not 0 <= label < sequence_count(n):
        raise RecordFormatError(f"line {lineno}: sequence index {label} out of range for N={n}")
    outcome_string = OutcomeString(outcomes)
    return MeasurementRecord.from_outcomes(
        ScheduledRound(label if protocol is ProtocolKind.GHZ else 0, quad, nominal),
        outcome_string,
        round_index,
    )


def replay(log: BroadcastLog) -> FringeAccumulator:
    """Rebuild the fringe statistics every party derives from the shared outcomes."""
    # Import here to avoid circular imports
    from ..estimation.accumulator import FringeAccumulator

    acc = FringeAccumulator(log.protocol, log.n)
    for record in log:
        quad = record.round.quadrature
        if isinstance(record, PairRecord):
            acc.add((record.party_index, quad), record.product)
        elif log.protocol is ProtocolKind.GHZ:
            if not 0 <= record.round.sequence_index < sequence_count(log.n):
                raise RecordFormatError(
                    f"round {record.round_index}: sequence index {record.round.sequence_index} out of range"
                )
            acc.add((record.round.sequence_index, quad), record.product)
        else:
            for party, product in enumerate(record.pair_products(), start=1):
                acc.add((party, quad), product)
    return acc

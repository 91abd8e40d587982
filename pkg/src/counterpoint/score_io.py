"""Score ingestion: two-voice CSV passages to contrapuntal step sequences.

Input formats (bit-exact headers, UTF-8, LF):

  * TWO_VOICE: ``measure,beat,cantus,discant`` — one event per row with both
    voices as MIDI pitches;
  * DRONE: ``measure,beat,pitch`` — upper voice only, the cantus being fixed
    and supplied separately as a pitch class.

Events map to dual intervals x + ek (cantus pc x, interval k mod 12);
consecutive intervals form steps, optionally deduplicated when a step
repeats its immediate predecessor.  Step lists render one step per line in
the grammar ``x+ek>y+el`` and re-parse exactly.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence

from .residue_algebra import DualNumber, Modulus, ModulusMismatch


class ParseError(ValueError):
    """Malformed score input; ``line`` is the 1-based offending line."""

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


class OrderError(ValueError):
    """Events are not strictly increasing in (measure, beat)."""


class TooFewEvents(ValueError):
    """Transition extraction needs at least two events."""


class ScoreFormat(Enum):
    TWO_VOICE = "TWO_VOICE"
    DRONE = "DRONE"


class Dedup(Enum):
    NONE = "NONE"
    CONSECUTIVE = "CONSECUTIVE"


_HEADERS = {
    ScoreFormat.TWO_VOICE: ["measure", "beat", "cantus", "discant"],
    ScoreFormat.DRONE: ["measure", "beat", "pitch"],
}


@dataclass(frozen=True)
class ScoreEvent:
    """One first-species event: an upper-voice pitch over an optional cantus."""

    measure: int
    beat: Fraction
    cantus_pitch: Optional[int]
    pitch: int


@dataclass(frozen=True)
class FixedCantus:
    """Interpret every event against a fixed cantus pitch class."""

    pc: int


@dataclass(frozen=True)
class ColumnCantus:
    """Read the cantus for each event from its own cantus column."""


COLUMN_CANTUS = ColumnCantus()


@dataclass(frozen=True)
class TransitionSequence:
    steps: tuple  # ((DualNumber, DualNumber), ...)
    dedup_applied: bool

    def render(self) -> str:
        return "\n".join(
            f"{a.render()}>{b.render()}" for a, b in self.steps
        ) + ("\n" if self.steps else "")

    @classmethod
    def parse(cls, text: str, modulus: Modulus = Modulus()) -> "TransitionSequence":
        steps = []
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line:
                continue
            parts = line.split(">")
            if len(parts) != 2:
                raise ParseError(number, f"expected one step `x+ek>y+el`, got {raw!r}")
            try:
                steps.append(
                    (
                        DualNumber.parse(parts[0], modulus),
                        DualNumber.parse(parts[1], modulus),
                    )
                )
            except ValueError as exc:
                raise ParseError(number, str(exc)) from exc
        return cls(tuple(steps), dedup_applied=False)


def _parse_int(field: str, value: str, line: int, low: int, high: int) -> int:
    try:
        number = int(value)
    except ValueError as exc:
        raise ParseError(line, f"{field} must be an integer, got {value!r}") from exc
    if not low <= number <= high:
        raise ParseError(line, f"{field} {number} outside [{low}, {high}]")
    return number


def parse_score(text: str, fmt: ScoreFormat) -> List[ScoreEvent]:
    """Parse a score CSV; events must strictly increase in (measure, beat)."""
    header = _HEADERS[fmt]
    reader = csv.reader(io.StringIO(text))
    rows = list(reader)
    if not rows:
        raise ParseError(1, "empty input")
    if rows[0] != header:
        raise ParseError(1, f"header must be {','.join(header)!r}, got {','.join(rows[0])!r}")
    events: List[ScoreEvent] = []
    previous = None
    for index, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise ParseError(index, f"expected {len(header)} fields, got {len(row)}")
        measure = _parse_int("measure", row[0], index, -(10 ** 9), 10 ** 9)
        try:
            beat = Fraction(row[1])
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(index, f"beat must be a decimal rational, got {row[1]!r}") from exc
        if fmt is ScoreFormat.TWO_VOICE:
            cantus: Optional[int] = _parse_int("cantus", row[2], index, 0, 127)
            pitch = _parse_int("discant", row[3], index, 0, 127)
        else:
            cantus = None
            pitch = _parse_int("pitch", row[2], index, 0, 127)
        stamp = (measure, beat)
        if previous is not None and stamp <= previous:
            raise OrderError(
                f"line {index}: event at measure {measure} beat {beat} does not "
                "advance (measure, beat)"
            )
        previous = stamp
        events.append(ScoreEvent(measure, beat, cantus, pitch))
    return events


def extract_transitions(
    events: Sequence[ScoreEvent],
    policy,
    dedup: Dedup = Dedup.CONSECUTIVE,
    modulus: Modulus = Modulus(),
) -> TransitionSequence:
    """Map events to dual intervals and pair them into steps.

    COLUMN_CANTUS: xi = (cantus mod n) + e((pitch - cantus) mod n);
    FixedCantus(pc): xi = pc + e((pitch mod n - pc) mod n).
    """
    if len(events) < 2:
        raise TooFewEvents(f"need at least 2 events, got {len(events)}")
    n = modulus.n
    intervals = []
    for event in events:
        if isinstance(policy, FixedCantus):
            pc = policy.pc % n
            interval = (event.pitch % n - pc) % n
        elif isinstance(policy, ColumnCantus):
            if event.cantus_pitch is None:
                raise ValueError(
                    "COLUMN_CANTUS policy requires a cantus on every event; "
                    "use FixedCantus for DRONE input"
                )
            pc = event.cantus_pitch % n
            interval = (event.pitch - event.cantus_pitch) % n
        else:
            raise ValueError(f"unknown cantus policy {policy!r}")
        intervals.append(DualNumber(pc, interval, modulus))
    steps = list(zip(intervals, intervals[1:]))
    if dedup is Dedup.CONSECUTIVE:
        kept = []
        for step in steps:
            if not kept or step != kept[-1]:
                kept.append(step)
        steps = kept
    return TransitionSequence(tuple(steps), dedup_applied=dedup is Dedup.CONSECUTIVE)


def score_against_world(seq: TransitionSequence, world) -> List[int]:
    """Per-step symmetry counts, in order, read from the world matrix."""
    counts = []
    for a, b in seq.steps:
        if a.modulus != world.modulus:
            raise ModulusMismatch("step and world moduli differ")
        counts.append(world.count(a, b))
    return counts

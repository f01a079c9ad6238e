"""Identification-experiment harness: trial generation, simulated
responders, and confusion / information-transmission analysis.

Stimuli are points of a :class:`~tactons.core.TactonSpace`; a trial shows
one stimulus and records one response from the same space. Analysis is the
classic maximum-likelihood estimate of transmitted information over the
confusion matrix, reported per dimension and for the full space.
"""

from __future__ import annotations

import csv
import io
import random
import statistics
from dataclasses import dataclass, field

import numpy as np

from .core import TactonSpace

Point = tuple[str, ...]


def format_stimulus(space: TactonSpace, point: Point) -> str:
    """Canonical wire form of a space point: "dir=N;size=large;speed=slow"."""
    names = space.dimension_names
    if len(point) != len(names):
        raise ValueError(f"point has {len(point)} values, space has {len(names)} dimensions")
    return ";".join(f"{n}={v}" for n, v in zip(names, point))


def parse_stimulus(space: TactonSpace, text: str) -> Point:
    names = space.dimension_names
    values: dict[str, str] = {}
    for part in text.split(";"):
        key, sep, value = part.partition("=")
        if not sep:
            raise ValueError(f"malformed stimulus field {part!r}")
        values[key] = value
    if set(values) != set(names):
        raise ValueError(f"stimulus {text!r} does not match dimensions {names}")
    point = tuple(values[n] for n in names)
    space.validate(point)
    return point


@dataclass(frozen=True)
class TrialRecord:
    participant: int
    block: int
    trial: int
    stimulus: Point
    response: Point
    response_time_ms: int
    exposure_ms: int


CSV_HEADER = ["participant", "block", "trial", "stimulus", "response", "response_time_ms", "exposure_ms"]


def records_to_csv(space: TactonSpace, records: list[TrialRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow(
            [
                r.participant,
                r.block,
                r.trial,
                format_stimulus(space, r.stimulus),
                format_stimulus(space, r.response),
                r.response_time_ms,
                r.exposure_ms,
            ]
        )
    return buf.getvalue()


def records_from_csv(space: TactonSpace, text: str) -> list[TrialRecord]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != CSV_HEADER:
        raise ValueError(f"unexpected header {header!r}")
    out = []
    for row in reader:
        if not row:
            continue
        if len(row) != len(CSV_HEADER):
            raise ValueError(f"row has {len(row)} fields: {row!r}")
        out.append(
            TrialRecord(
                participant=int(row[0]),
                block=int(row[1]),
                trial=int(row[2]),
                stimulus=parse_stimulus(space, row[3]),
                response=parse_stimulus(space, row[4]),
                response_time_ms=int(row[5]),
                exposure_ms=int(row[6]),
            )
        )
    return out


# --- trial plans ---------------------------------------------------------


def generate_trials(
    space: TactonSpace,
    n_trials: int,
    rng: random.Random,
    mode: str = "balanced",
) -> list[Point]:
    """Stimulus sequence for one participant.

    "balanced" shuffles whole passes over the space (requires n_trials to be
    a multiple of the cardinality), so every stimulus appears equally often;
    "uniform" samples independently.
    """
    points = list(space.tuples())
    if mode == "uniform":
        return [rng.choice(points) for _ in range(n_trials)]
    if mode == "balanced":
        if n_trials % len(points) != 0:
            raise ValueError(
                f"{n_trials} trials cannot balance a space of {len(points)} tactons"
            )
        out: list[Point] = []
        for _ in range(n_trials // len(points)):
            block = list(points)
            rng.shuffle(block)
            out.extend(block)
        return out
    raise ValueError(f"unknown mode {mode!r}")


def counterbalance(n_conditions: int, n_participants: int) -> list[list[int]]:
    """Condition order per participant.

    Uses a balanced Latin square when the participant count is a multiple of
    the condition count, otherwise cyclic rotation.
    """
    if n_conditions < 1 or n_participants < 1:
        raise ValueError("need at least one condition and one participant")
    if n_participants % n_conditions == 0:
        square = _balanced_latin_square(n_conditions)
        return [square[i % n_conditions] for i in range(n_participants)]
    return [
        [(j + i) % n_conditions for j in range(n_conditions)]
        for i in range(n_participants)
    ]


def _balanced_latin_square(n: int) -> list[list[int]]:
    # First row 0, 1, n-1, 2, n-2, ...; each later row adds i mod n.
    first = []
    lo, hi = 1, n - 1
    first.append(0)
    toggle = True
    while len(first) < n:
        if toggle:
            first.append(lo)
            lo += 1
        else:
            first.append(hi)
            hi -= 1
        toggle = not toggle
    return [[(v + i) % n for v in first] for i in range(n)]


# --- simulated responders ------------------------------------------------

COMPASS_RING = ("N", "NE", "E", "SE", "S", "SW", "W", "NW")


def _neighbours(values: tuple[str, ...], value: str) -> list[str]:
    """Adjacent levels: the compass ring wraps, ordinal chains do not."""
    if set(values) == set(COMPASS_RING):
        i = COMPASS_RING.index(value)
        return [COMPASS_RING[(i - 1) % 8], COMPASS_RING[(i + 1) % 8]]
    i = values.index(value)
    if len(values) == 1:
        return [value]
    out = []
    if i > 0:
        out.append(values[i - 1])
    if i < len(values) - 1:
        out.append(values[i + 1])
    return out


@dataclass
class ResponderModel:
    """Per-dimension adjacent-confusion responder.

    Each dimension independently slips to an adjacent level with its own
    probability: the direction dimension is a compass ring, every other
    dimension an ordered chain. confusion maps dimension name to slip
    probability; dimensions absent from it are answered perfectly.
    """

    space: TactonSpace
    confusion: dict[str, float] = field(default_factory=dict)
    response_time_ms: tuple[int, int] = (900, 2600)
    exposure_ms: tuple[int, int] = (600, 4000)

    def __post_init__(self):
        names = set(self.space.dimension_names)
        for name, p in self.confusion.items():
            if name not in names:
                raise ValueError(f"unknown dimension {name!r}")
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"confusion for {name!r} outside [0, 1]")

    def respond(self, stimulus: Point, rng: random.Random) -> Point:
        out = []
        for dim, value in zip(self.space.dimensions, stimulus):
            p = self.confusion.get(dim.name, 0.0)
            if p > 0.0 and rng.random() < p:
                value = rng.choice(_neighbours(tuple(dim.values), value))
            out.append(value)
        return tuple(out)

    def timings(self, rng: random.Random) -> tuple[int, int]:
        rt = rng.randint(*self.response_time_ms)
        exp = rng.randint(*self.exposure_ms)
        return rt, exp


def perfect_responder(space: TactonSpace) -> ResponderModel:
    return ResponderModel(space=space, confusion={})


def simulate_responder(
    space: TactonSpace,
    model: ResponderModel,
    n_participants: int,
    n_trials: int,
    seed: int,
    mode: str = "balanced",
) -> list[TrialRecord]:
    """Deterministic synthetic dataset: same seed, same records."""
    records = []
    for participant in range(1, n_participants + 1):
        # Per-participant stream: reordering participants never shifts anyone
        # else's draws.
        rng = random.Random(seed * 1_000_003 + participant)
        stimuli = generate_trials(space, n_trials, rng, mode=mode)
        for i, stimulus in enumerate(stimuli):
            response = model.respond(stimulus, rng)
            rt, exp = model.timings(rng)
            records.append(
                TrialRecord(
                    participant=participant,
                    block=1,
                    trial=i + 1,
                    stimulus=stimulus,
                    response=response,
                    response_time_ms=rt,
                    exposure_ms=exp,
                )
            )
    return records


# --- analysis -------------------------------------------------------------


@dataclass(frozen=True)
class ConfusionMatrix:
    """Stimulus-by-response count matrix over a fixed label list."""

    labels: tuple[str, ...]
    counts: np.ndarray  # shape (k, k), counts[i, j] = stimulus i answered j

    @classmethod
    def from_pairs(cls, labels: list[str] | tuple[str, ...], pairs: list[tuple[str, str]]) -> "ConfusionMatrix":
        labels = tuple(labels)
        index = {v: i for i, v in enumerate(labels)}
        counts = np.zeros((len(labels), len(labels)), dtype=np.int64)
        for stimulus, response in pairs:
            counts[index[stimulus], index[response]] += 1
        return cls(labels=labels, counts=counts)

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    def error_rate(self) -> float:
        n = self.n
        if n == 0:
            raise ValueError("empty confusion matrix")
        return 1.0 - float(np.trace(self.counts)) / n


def information_transmission(counts: np.ndarray) -> float:
    """Maximum-likelihood transmitted information of a count matrix, in bits.

    T = sum_ij p_ij * log2(p_ij / (p_i+ * p+j)); empty cells contribute 0.
    """
    counts = np.asarray(counts, dtype=np.float64)
    if counts.ndim != 2:
        raise ValueError("expected a 2-d count matrix")
    if (counts < 0).any():
        raise ValueError("negative counts")
    n = counts.sum()
    if n == 0:
        raise ValueError("empty count matrix")
    p = counts / n
    pi = p.sum(axis=1, keepdims=True)
    pj = p.sum(axis=0, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = p * np.log2(p / (pi * pj))
    return float(np.nansum(terms))


def dimension_pairs(space: TactonSpace, records: list[TrialRecord], dim_name: str) -> list[tuple[str, str]]:
    names = space.dimension_names
    try:
        k = names.index(dim_name)
    except ValueError:
        raise ValueError(f"unknown dimension {dim_name!r}") from None
    return [(r.stimulus[k], r.response[k]) for r in records]


@dataclass(frozen=True)
class DimensionReport:
    name: str
    transmitted_bits: float
    error_rate: float
    matrix: ConfusionMatrix


@dataclass(frozen=True)
class ParticipantStats:
    participant: int
    bits: float
    error_rate: float


@dataclass(frozen=True)
class SessionReport:
    n_trials: int
    n_participants: int
    overall_bits: float
    overall_error_rate: float
    dimensions: tuple[DimensionReport, ...]
    participants: tuple[ParticipantStats, ...]
    mean_response_time_ms: float
    mean_exposure_ms: float

    @property
    def median_bits(self) -> float:
        """Median per-participant transmitted information, as papers report it."""
        return statistics.median(p.bits for p in self.participants)

    @property
    def median_error_rate(self) -> float:
        return statistics.median(p.error_rate for p in self.participants)

    def to_dict(self) -> dict:
        return {
            "n_trials": self.n_trials,
            "n_participants": self.n_participants,
            "overall_bits": self.overall_bits,
            "overall_error_rate": self.overall_error_rate,
            "median_bits": self.median_bits,
            "median_error_rate": self.median_error_rate,
            "mean_response_time_ms": self.mean_response_time_ms,
            "mean_exposure_ms": self.mean_exposure_ms,
            "dimensions": [
                {
                    "name": d.name,
                    "transmitted_bits": d.transmitted_bits,
                    "error_rate": d.error_rate,
                }
                for d in self.dimensions
            ],
            "participants": [
                {
                    "participant": p.participant,
                    "bits": p.bits,
                    "error_rate": p.error_rate,
                }
                for p in self.participants
            ],
        }


def _full_matrix(space: TactonSpace, records: list[TrialRecord]) -> ConfusionMatrix:
    labels = [format_stimulus(space, p) for p in space.tuples()]
    pairs = [
        (format_stimulus(space, r.stimulus), format_stimulus(space, r.response))
        for r in records
    ]
    return ConfusionMatrix.from_pairs(labels, pairs)


def analyze(space: TactonSpace, records: list[TrialRecord]) -> SessionReport:
    """Confusion analysis of a trial set against its stimulus space.

    Pooled numbers use all trials at once; the per-participant list feeds
    the median summaries.
    """
    if not records:
        raise ValueError("no trials to analyze")
    full = _full_matrix(space, records)
    dims = []
    for dim in space.dimensions:
        m = ConfusionMatrix.from_pairs(list(dim.values), dimension_pairs(space, records, dim.name))
        dims.append(
            DimensionReport(
                name=dim.name,
                transmitted_bits=information_transmission(m.counts),
                error_rate=m.error_rate(),
                matrix=m,
            )
        )
    per_participant = []
    for participant in sorted({r.participant for r in records}):
        own = _full_matrix(space, [r for r in records if r.participant == participant])
        per_participant.append(
            ParticipantStats(
                participant=participant,
                bits=information_transmission(own.counts),
                error_rate=own.error_rate(),
            )
        )
    return SessionReport(
        n_trials=len(records),
        n_participants=len(per_participant),
        overall_bits=information_transmission(full.counts),
        overall_error_rate=full.error_rate(),
        dimensions=tuple(dims),
        participants=tuple(per_participant),
        mean_response_time_ms=float(np.mean([r.response_time_ms for r in records])),
        mean_exposure_ms=float(np.mean([r.exposure_ms for r in records])),
    )

"""Per-frame tracking loop: predict, associate, update, manage lifecycles.

Every live track is predicted one frame ahead, a Euclidean cost matrix is
built between predicted positions and the frame's detections, the matrix is
solved exactly and hard-gated, matched tracks are corrected with their
measurement, unmatched tracks coast on the prediction, and unmatched
detections give birth to new tracks.

Lifecycle: tracks are born Tentative, become Confirmed after `confirm_hits`
consecutive hits, and die after `max_misses` consecutive misses; a Tentative
track dies on its first miss. Track ids increase strictly at birth and are
never reused, so identity is conserved for as long as a track lives.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from . import kfilter
from .assignment import Assignment, CostMatrix, solve
from .errors import EmptyError, OrderError, ParamError


class TrackStatus(enum.Enum):
    TENTATIVE = "T"
    CONFIRMED = "C"
    DEAD = "D"


class RecordSource(enum.Enum):
    MEASURED = "M"
    COASTED = "P"


@dataclass(frozen=True)
class Detection:
    """One measured head position in one frame (frame >= 1, finite coords)."""

    frame: int
    x: float
    y: float
    confidence: float = 1.0


class TrackRecord(NamedTuple):
    """One track's state as reported for one frame."""

    track_id: int
    x: float
    y: float
    vx: float
    vy: float
    status: TrackStatus
    source: RecordSource


@dataclass
class FrameResult:
    """Everything the tracker emitted for one frame."""

    frame: int
    records: list[TrackRecord]
    born: list[int]
    died: list[int]


@dataclass(frozen=True)
class TrackerConfig:
    """Tunable tracker behaviour; defaults follow common online-tracking practice."""

    gate_px: float = 50.0
    confirm_hits: int = 3
    max_misses: int = 5
    sigma_a: float = 1.0
    sigma_z: float = 2.0
    p0_pos: float = 10.0
    p0_vel: float = 100.0
    min_confidence: float = 0.0

    def __post_init__(self):
        if self.gate_px <= 0:
            raise ParamError("gate_px must be positive")
        if self.confirm_hits < 1:
            raise ParamError("confirm_hits must be at least 1")
        if self.max_misses < 0:
            raise ParamError("max_misses must be nonnegative")


@dataclass
class Track:
    """Internal per-target bookkeeping around the Kalman belief."""

    id: int
    state: kfilter.KalmanState
    status: TrackStatus = TrackStatus.TENTATIVE
    hit_streak: int = 0
    miss_streak: int = 0
    age: int = 0
    history: list[tuple[int, float, float, RecordSource]] = field(default_factory=list)


def build_cost_matrix(
    predicted: Sequence[tuple[int, float, float]],
    detections: Sequence[Detection],
) -> CostMatrix:
    """Euclidean distances between predicted track positions and detections.

    Rows are ordered by ascending track id (so assignment tie-breaking is
    deterministic end to end), columns follow the detection input order.

    Raises:
        EmptyError: if either side is empty; callers branch to the pure
            birth / pure miss paths instead.
    """
    if not predicted or not detections:
        raise EmptyError("cost matrix needs at least one track and one detection")
    ordered = sorted(predicted)
    track_xy = np.array([[px, py] for _, px, py in ordered])
    det_xy = np.array([[d.x, d.y] for d in detections])
    deltas = track_xy[:, None, :] - det_xy[None, :, :]
    return CostMatrix(np.sqrt((deltas**2).sum(axis=2)))


def gate(assignment: Assignment, cost: CostMatrix, gate_px: float) -> Assignment:
    """Drop every matched pair whose cost exceeds the gate distance.

    Removed pairs move their row and column back to the unmatched sets and
    the total cost is recomputed over the survivors.
    """
    kept = [(r, c) for r, c in assignment.pairs if cost.values[r, c] <= gate_px]
    dropped = assignment.pairs - set(kept)
    return Assignment(
        pairs=frozenset(kept),
        unmatched_rows=assignment.unmatched_rows | {r for r, _ in dropped},
        unmatched_cols=assignment.unmatched_cols | {c for _, c in dropped},
        total_cost=float(sum(cost.values[r, c] for r, c in kept)),
    )


class Tracker:
    """Sequential multi-target tracker; feed frames in strictly increasing order.

    A Tracker instance is a state machine and must not be shared between
    threads; independent instances are free to run concurrently.
    """

    def __init__(self, config: TrackerConfig | None = None):
        self.config = config or TrackerConfig()
        self.model = kfilter.make_cv_model(self.config.sigma_a, self.config.sigma_z)
        self.tracks: list[Track] = []
        self._next_id = 1
        self._last_frame = 0

    def step(self, frame: int, detections: Sequence[Detection]) -> FrameResult:
        """Process one frame worth of detections; see the module docstring.

        Raises:
            OrderError: when the frame index does not increase, or a
                detection is stamped with a different frame.
        """
        cfg = self.config
        if frame <= self._last_frame:
            raise OrderError(
                f"frame {frame} is not after last processed frame {self._last_frame}"
            )
        for det in detections:
            if det.frame != frame:
                raise OrderError(
                    f"detection stamped frame {det.frame} fed to step({frame})"
                )
        usable = [d for d in detections if d.confidence >= cfg.min_confidence]

        # 1. Predict every live track.
        for track in self.tracks:
            track.state = kfilter.predict(track.state, self.model)
            track.age += 1
        by_id = {t.id: t for t in self.tracks}
        ordered_ids = sorted(by_id)

        # 2. Associate predictions with detections, then gate.
        matched: list[tuple[Track, Detection]] = []
        unmatched_tracks = list(self.tracks)
        unmatched_dets = list(usable)
        if self.tracks and usable:
            predicted = [
                (tid, float(by_id[tid].state.x[0]), float(by_id[tid].state.x[1]))
                for tid in ordered_ids
            ]
            cost = build_cost_matrix(predicted, usable)
            assignment = gate(solve(cost), cost, cfg.gate_px)
            matched = [
                (by_id[ordered_ids[r]], usable[c])
                for r, c in sorted(assignment.pairs)
            ]
            unmatched_tracks = [by_id[ordered_ids[r]] for r in sorted(assignment.unmatched_rows)]
            unmatched_dets = [usable[c] for c in sorted(assignment.unmatched_cols)]

        born: list[int] = []
        died: list[int] = []

        # 3. Correct matched tracks and run the confirmation counter.
        for track, det in matched:
            track.state, _ = kfilter.update(track.state, (det.x, det.y), self.model)
            track.hit_streak += 1
            track.miss_streak = 0
            if track.status is TrackStatus.TENTATIVE and track.hit_streak >= cfg.confirm_hits:
                track.status = TrackStatus.CONFIRMED
            track.history.append(
                (frame, float(track.state.x[0]), float(track.state.x[1]), RecordSource.MEASURED)
            )

        # 4. Coast or kill unmatched tracks.
        for track in unmatched_tracks:
            track.miss_streak += 1
            track.hit_streak = 0
            if track.status is TrackStatus.TENTATIVE or track.miss_streak > cfg.max_misses:
                track.status = TrackStatus.DEAD
                died.append(track.id)
            else:
                track.history.append(
                    (frame, float(track.state.x[0]), float(track.state.x[1]), RecordSource.COASTED)
                )

        # 5. Every leftover detection births a Tentative track.
        for det in unmatched_dets:
            track = Track(
                id=self._next_id,
                state=kfilter.init_state(det.x, det.y, cfg.p0_pos, cfg.p0_vel),
                hit_streak=1,
            )
            self._next_id += 1
            if track.hit_streak >= cfg.confirm_hits:
                track.status = TrackStatus.CONFIRMED
            track.history.append((frame, det.x, det.y, RecordSource.MEASURED))
            self.tracks.append(track)
            born.append(track.id)

        # 6. Report all surviving tracks, drop the dead.
        self.tracks = [t for t in self.tracks if t.status is not TrackStatus.DEAD]
        records = [
            TrackRecord(
                track_id=t.id,
                x=float(t.state.x[0]),
                y=float(t.state.x[1]),
                vx=float(t.state.x[2]),
                vy=float(t.state.x[3]),
                status=t.status,
                source=t.history[-1][3],
            )
            for t in sorted(self.tracks, key=lambda t: t.id)
        ]
        self._last_frame = frame
        return FrameResult(frame=frame, records=records, born=born, died=died)


def run(
    detections_by_frame: Mapping[int, Sequence[Detection]],
    config: TrackerConfig | None = None,
    frame_range: tuple[int, int] | None = None,
) -> list[FrameResult]:
    """Track a whole frame-indexed detection stream.

    Steps every frame in `frame_range` (inclusive on both ends), including
    frames with no detections. When the range is omitted it is inferred
    from the stream's smallest and largest frame; an empty stream with no
    explicit range yields no results.
    """
    if frame_range is None:
        if not detections_by_frame:
            return []
        frame_range = (min(detections_by_frame), max(detections_by_frame))
    first, last = frame_range
    if first > last:
        raise OrderError(f"invalid frame range {first}..{last}")
    tracker = Tracker(config)
    return [tracker.step(f, detections_by_frame.get(f, [])) for f in range(first, last + 1)]


def group_by_frame(detections: Iterable[Detection]) -> dict[int, list[Detection]]:
    """Bucket a flat detection list by frame, frames ascending."""
    grouped: dict[int, list[Detection]] = {}
    for det in detections:
        grouped.setdefault(det.frame, []).append(det)
    return dict(sorted(grouped.items()))

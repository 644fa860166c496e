"""Synthetic scenarios and association-quality scoring.

`generate` turns a declarative scenario into exact linear ground-truth
trajectories plus a noisy detection stream (isotropic Gaussian position
noise, Bernoulli missed detections, Poisson-count uniform clutter), fully
determined by the seed through the pinned stream in `rng`.

`evaluate` scores tracker output against ground truth with CLEAR-style
accounting: per frame, hypotheses are matched to ground-truth points by the
same exact assignment solver used for tracking, hard-gated at a match
radius; misses, false positives, identity switches and fragmentations are
accumulated and folded into MOTA.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .assignment import CostMatrix, solve
from .errors import AlignmentError, SpecError
from .rng import SplitMix64
from .tracker import Detection, FrameResult, TrackRecord, TrackStatus, gate


class TargetPath(NamedTuple):
    """One target's linear trajectory, alive on frames [birth, death]."""

    birth_frame: int
    death_frame: int
    start_x: float
    start_y: float
    vx: float
    vy: float


@dataclass(frozen=True)
class ScenarioSpec:
    """Declarative description of a synthetic scene.

    Draw order is fixed so outputs are reproducible from the seed alone:
    frames ascending; within a frame, each alive target in declaration
    order draws one miss uniform and, if detected, two noise gaussians;
    then one Poisson count and two uniforms per clutter point.
    """

    n_frames: int
    targets: tuple[TargetPath, ...] = ()
    noise_sigma: float = 0.0
    miss_prob: float = 0.0
    clutter_rate: float = 0.0
    bounds: tuple[float, float] = (640.0, 480.0)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(
            self, "targets", tuple(TargetPath(*t) for t in self.targets)
        )
        object.__setattr__(self, "bounds", (float(self.bounds[0]), float(self.bounds[1])))
        if self.n_frames < 1:
            raise SpecError("n_frames must be at least 1")
        for i, t in enumerate(self.targets):
            if not t.birth_frame >= 1:
                raise SpecError(f"target {i}: birth_frame must be >= 1")
            if not t.birth_frame < t.death_frame <= self.n_frames:
                raise SpecError(
                    f"target {i}: need birth < death <= n_frames, "
                    f"got {t.birth_frame}, {t.death_frame}, {self.n_frames}"
                )
        if self.noise_sigma < 0:
            raise SpecError("noise_sigma must be nonnegative")
        if not 0.0 <= self.miss_prob <= 1.0:
            raise SpecError("miss_prob must lie in [0, 1]")
        if self.clutter_rate < 0:
            raise SpecError("clutter_rate must be nonnegative")
        if self.bounds[0] <= 0 or self.bounds[1] <= 0:
            raise SpecError("bounds must be positive")


@dataclass(frozen=True)
class GroundTruth:
    """Exact target positions per frame: lists of (gt_id, x, y)."""

    n_frames: int
    frames: dict[int, list[tuple[int, float, float]]]

    def at(self, frame: int) -> list[tuple[int, float, float]]:
        return self.frames.get(frame, [])

    def total_points(self) -> int:
        return sum(len(points) for points in self.frames.values())


@dataclass(frozen=True)
class Metrics:
    """CLEAR-style association scores.

    mota = 1 - (misses + false_positives + id_switches) / total ground-truth
    points; matches + misses always equals the ground-truth point count.
    """

    id_switches: int
    misses: int
    false_positives: int
    matches: int
    mota: float
    fragmentation: int


def generate(spec: ScenarioSpec) -> tuple[GroundTruth, list[Detection]]:
    """Expand a scenario into ground truth and a seeded detection stream.

    Ground-truth ids are the 1-based indices of the targets in declaration
    order. Detections carry confidence 1.0; clutter points are uniform over
    the bounds and appended after the target detections of their frame.
    """
    stream = SplitMix64(spec.seed)
    width, height = spec.bounds
    truth: dict[int, list[tuple[int, float, float]]] = {}
    detections: list[Detection] = []

    for frame in range(1, spec.n_frames + 1):
        points: list[tuple[int, float, float]] = []
        for gt_id, target in enumerate(spec.targets, start=1):
            if not target.birth_frame <= frame <= target.death_frame:
                continue
            age = frame - target.birth_frame
            x = target.start_x + age * target.vx
            y = target.start_y + age * target.vy
            points.append((gt_id, x, y))
            if stream.uniform() < spec.miss_prob:
                continue
            nx = spec.noise_sigma * stream.gauss()
            ny = spec.noise_sigma * stream.gauss()
            detections.append(Detection(frame=frame, x=x + nx, y=y + ny))
        for _ in range(stream.poisson(spec.clutter_rate)):
            detections.append(
                Detection(
                    frame=frame,
                    x=stream.uniform() * width,
                    y=stream.uniform() * height,
                )
            )
        truth[frame] = points
    return GroundTruth(n_frames=spec.n_frames, frames=truth), detections


def _records_by_frame(
    results: Iterable[FrameResult], include_tentative: bool
) -> dict[int, list[TrackRecord]]:
    wanted = {TrackStatus.CONFIRMED}
    if include_tentative:
        wanted.add(TrackStatus.TENTATIVE)
    by_frame: dict[int, list[TrackRecord]] = {}
    for result in results:
        if result.frame in by_frame:
            raise AlignmentError(f"duplicate results for frame {result.frame}")
        if result.frame < 1:
            raise AlignmentError(f"result frame {result.frame} is not a valid frame index")
        by_frame[result.frame] = sorted(
            (r for r in result.records if r.status in wanted),
            key=lambda r: r.track_id,
        )
    return by_frame


def evaluate(
    results: Sequence[FrameResult],
    gt: GroundTruth,
    match_radius: float = 10.0,
    include_tentative: bool = False,
) -> Metrics:
    """Score tracker output against ground truth.

    Only Confirmed records participate unless `include_tentative` is set.
    An identity switch is counted when the track id matched to a ground
    truth target differs from the id it was matched to the previous time it
    was matched; a fragmentation is counted each time a target is
    re-acquired after unmatched frames. Result frames past the ground-truth
    horizon are legal (a tracker may coast past the last live target);
    records there count as false positives.

    Raises:
        AlignmentError: on duplicate or non-positive result frames.
    """
    by_frame = _records_by_frame(results, include_tentative)
    horizon = max(gt.n_frames, max(by_frame, default=0))

    matches = misses = false_positives = id_switches = fragmentation = 0
    last_track: dict[int, int] = {}
    in_gap: set[int] = set()

    for frame in range(1, horizon + 1):
        gt_points = gt.at(frame)
        records = by_frame.get(frame, [])
        pairs: list[tuple[int, int]] = []
        if gt_points and records:
            deltas = np.array([[x, y] for _, x, y in gt_points])[:, None, :] - np.array(
                [[r.x, r.y] for r in records]
            )[None, :, :]
            cost = CostMatrix(np.sqrt((deltas**2).sum(axis=2)))
            assignment = gate(solve(cost), cost, match_radius)
            pairs = sorted(assignment.pairs)

        matches += len(pairs)
        misses += len(gt_points) - len(pairs)
        false_positives += len(records) - len(pairs)

        matched_ids = set()
        for gt_index, rec_index in pairs:
            gt_id = gt_points[gt_index][0]
            track_id = records[rec_index].track_id
            matched_ids.add(gt_id)
            if gt_id in last_track and last_track[gt_id] != track_id:
                id_switches += 1
            if gt_id in in_gap:
                fragmentation += 1
                in_gap.discard(gt_id)
            last_track[gt_id] = track_id
        for gt_id, _, _ in gt_points:
            if gt_id not in matched_ids and gt_id in last_track:
                in_gap.add(gt_id)

    total_gt = gt.total_points()
    if total_gt > 0:
        mota = 1.0 - (misses + false_positives + id_switches) / total_gt
    else:
        mota = 1.0
    return Metrics(
        id_switches=id_switches,
        misses=misses,
        false_positives=false_positives,
        matches=matches,
        mota=mota,
        fragmentation=fragmentation,
    )

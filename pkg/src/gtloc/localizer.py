"""Pose estimation of a query image against a texture map, with or without a position prior."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from gtloc.errors import LocalizationError, NoConsensus, NoFeatures, NoVotes
from gtloc.features import FeatureSet, extract_features
from gtloc.geometry import CorrespondenceSet, Pose2D, RansacConfig, origin_to_center, ransac_pose
from gtloc.image import Image
from gtloc.mapstore import MapSnapshot, TextureMap
from gtloc.matching import group_by_descriptor, identity_match_indices
from gtloc.voting import VotingMap, cast_votes, make_voting_map, winning_cell

DEFAULT_PX_PER_MM = 6.25


@dataclass(frozen=True)
class Prior:
    """Estimated camera (image-center) position in global pixels and its expected error in mm."""

    position: tuple[float, float]
    expected_error: float

    def __post_init__(self):
        if not self.expected_error >= 0:
            raise ValueError("expected_error must be >= 0")
        object.__setattr__(self, "position", (float(self.position[0]), float(self.position[1])))


@dataclass(frozen=True)
class PriorSchedule:
    """(max prior error in mm, number of reference images to consider), ascending."""

    entries: tuple[tuple[float, int], ...]

    def __post_init__(self):
        entries = tuple((float(e), int(c)) for e, c in self.entries)
        for (e0, c0), (e1, c1) in zip(entries, entries[1:]):
            if not (e1 > e0 and c1 > c0):
                raise ValueError("schedule must be strictly increasing in error and count")
        if any(c < 1 for _, c in entries) or any(e < 0 for e, _ in entries):
            raise ValueError("schedule entries must be non-negative with counts >= 1")
        object.__setattr__(self, "entries", entries)


DEFAULT_SCHEDULE = PriorSchedule((
    (0, 5), (50, 10), (100, 20), (200, 50), (350, 100),
    (500, 250), (750, 500), (1000, 750), (1500, 1000),
))


def schedule_lookup(schedule: PriorSchedule, expected_error: float) -> int | None:
    """Images to consider for a prior error; None means every image in the map."""
    for max_err, count in schedule.entries:
        if max_err >= expected_error:
            return count
    return None


@dataclass
class LocalizationResult:
    pose: Pose2D
    inlier_count: int
    votes_in_winning_cell: int
    considered_images: int
    total_matches: int
    timings: dict[str, float]
    winning_cell: tuple[int, int] = (0, 0)
    voting_map: VotingMap | None = field(default=None, repr=False, compare=False)

    def center_pose(self, width: int, height: int) -> Pose2D:
        return origin_to_center(self.pose, width, height)


def _fail(exc: LocalizationError, considered: int, timings: dict[str, float],
          matches: int = 0, voting_map: VotingMap | None = None) -> LocalizationError:
    exc.considered_images = considered
    exc.timings = timings
    exc.total_matches = matches
    exc.voting_map = voting_map
    return exc


def candidate_ids(snap: MapSnapshot, prior: Prior | None,
                  schedule: PriorSchedule = DEFAULT_SCHEDULE) -> list[int]:
    """Reference images to match against, in id order."""
    if prior is None:
        return [int(i) for i in snap.ids]
    k = schedule_lookup(schedule, prior.expected_error)
    if k is None or k >= len(snap):
        return [int(i) for i in snap.ids]
    return sorted(snap.select_near(prior.position, k))


def match_candidates(snap: MapSnapshot, features: FeatureSet, ids) -> CorrespondenceSet:
    """Identity-match the query against each candidate table and lift matches to the global frame."""
    groups = group_by_descriptor(features)
    parts = []
    for rid in ids:
        rec = snap.records[rid]
        q, r = identity_match_indices(groups, rec.table)
        if len(q) == 0:
            continue
        gxy, gang = rec.global_features(r)
        src = np.stack([q, np.full(len(q), rid, dtype=np.int64), r], axis=1)
        parts.append(CorrespondenceSet(features.xy[q], gxy, features.orientation[q], gang, src))
    return CorrespondenceSet.concatenate(parts)


def localize_features(
    texture_map: TextureMap | MapSnapshot,
    features: FeatureSet,
    width: int,
    height: int,
    prior: Prior | None = None,
    schedule: PriorSchedule = DEFAULT_SCHEDULE,
    ransac_cfg: RansacConfig = RansacConfig(),
    cell_size: float = 75.0,
    keep_votes: bool = False,
) -> LocalizationResult:
    """Localize already extracted query features (see :func:`localize`)."""
    snap = texture_map.snapshot() if isinstance(texture_map, TextureMap) else texture_map
    if len(snap) == 0:
        raise ValueError("cannot localize against an empty map")
    timings = {"matching": 0.0, "voting": 0.0, "ransac": 0.0}
    t0 = time.perf_counter()
    ids = candidate_ids(snap, prior, schedule)
    if len(features) == 0:
        raise _fail(NoFeatures("query image has no usable features"), len(ids), timings)
    cs = match_candidates(snap, features, ids)
    t1 = time.perf_counter()
    timings["matching"] = t1 - t0
    if len(cs) == 0:
        raise _fail(NoVotes("identity matching found no matches"), len(ids), timings)

    extent = snap.extent if len(ids) == len(snap) else snap.extent_of(ids)
    vm = make_voting_map(extent, cell_size, margin=math.hypot(width, height))
    cast_votes(vm, cs)
    if vm.total_votes == 0:
        timings["voting"] = time.perf_counter() - t1
        raise _fail(NoVotes("every vote fell outside the voting map"), len(ids), timings, len(cs),
                    vm if keep_votes else None)
    cell, registry = winning_cell(vm)
    t2 = time.perf_counter()
    timings["voting"] = t2 - t1
    try:
        pose, inliers = ransac_pose(registry, ransac_cfg)
    except NoConsensus as exc:
        timings["ransac"] = time.perf_counter() - t2
        raise _fail(exc, len(ids), timings, len(cs), vm if keep_votes else None)
    timings["ransac"] = time.perf_counter() - t2
    return LocalizationResult(
        pose=pose,
        inlier_count=len(inliers),
        votes_in_winning_cell=len(registry),
        considered_images=len(ids),
        total_matches=len(cs),
        timings=timings,
        winning_cell=cell,
        voting_map=vm if keep_votes else None,
    )


def localize(
    texture_map: TextureMap | MapSnapshot,
    query: Image,
    prior: Prior | None = None,
    schedule: PriorSchedule = DEFAULT_SCHEDULE,
    ransac_cfg: RansacConfig = RansacConfig(),
    cell_size: float = 75.0,
    keep_votes: bool = False,
) -> LocalizationResult:
    """Estimate the global pose of the query image's upper-left corner.

    Without a prior every reference image is matched; with one, only the
    images nearest to the prior position, as many as the schedule allows for
    its expected error. Raises :class:`NoFeatures`, :class:`NoVotes` or
    :class:`NoConsensus`; timings exclude feature extraction.
    """
    snap = texture_map.snapshot() if isinstance(texture_map, TextureMap) else texture_map
    features = extract_features(query, snap.detector_config, snap.triplet_layout)
    return localize_features(snap, features, query.width, query.height, prior, schedule,
                             ransac_cfg, cell_size, keep_votes)

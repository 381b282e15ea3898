"""Planar rigid poses, rigid registration and RANSAC.

All positions are in pixels of the reference texture plane, with x pointing
right and y pointing down (image convention). A pose maps image-frame points
into the global frame: ``p_global = R(theta) @ p_image + (x, y)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from gtloc.errors import DegenerateInput, NoConsensus

TWO_PI = 2.0 * math.pi


def wrap_angle(a: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    r = math.remainder(a, TWO_PI)
    if r <= -math.pi:
        r += TWO_PI
    return r


def wrap_angles(a: np.ndarray) -> np.ndarray:
    """Vectorized :func:`wrap_angle`."""
    r = np.remainder(np.asarray(a, dtype=np.float64) + math.pi, TWO_PI) - math.pi
    return np.where(r <= -math.pi, r + TWO_PI, r)


def rotation_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class Pose2D:
    x: float = 0.0
    y: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "theta", wrap_angle(float(self.theta)))

    @classmethod
    def identity(cls) -> "Pose2D":
        return cls(0.0, 0.0, 0.0)

    @property
    def translation(self) -> np.ndarray:
        return np.array([self.x, self.y])

    def matrix(self) -> np.ndarray:
        """3x3 homogeneous matrix."""
        c, s = math.cos(self.theta), math.sin(self.theta)
        return np.array([[c, -s, self.x], [s, c, self.y], [0.0, 0.0, 1.0]])

    def apply(self, pts) -> np.ndarray:
        """Map image-frame points of shape (..., 2) into the global frame."""
        pts = np.asarray(pts, dtype=np.float64)
        c, s = math.cos(self.theta), math.sin(self.theta)
        gx = c * pts[..., 0] - s * pts[..., 1] + self.x
        gy = s * pts[..., 0] + c * pts[..., 1] + self.y
        return np.stack([gx, gy], axis=-1)

    def compose(self, other: "Pose2D") -> "Pose2D":
        return compose(self, other)

    def inverse(self) -> "Pose2D":
        return inverse(self)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.theta)


def compose(a: Pose2D, b: Pose2D) -> Pose2D:
    """Transform that applies ``b`` first, then ``a``."""
    c, s = math.cos(a.theta), math.sin(a.theta)
    return Pose2D(
        a.x + c * b.x - s * b.y,
        a.y + s * b.x + c * b.y,
        a.theta + b.theta,
    )


def inverse(p: Pose2D) -> Pose2D:
    c, s = math.cos(p.theta), math.sin(p.theta)
    return Pose2D(-(c * p.x + s * p.y), s * p.x - c * p.y, -p.theta)


def origin_to_center(origin: Pose2D, width: float, height: float) -> Pose2D:
    """Pose of the image center given the pose of its upper-left corner."""
    cx, cy = origin.apply(((width - 1) / 2.0, (height - 1) / 2.0))
    return Pose2D(cx, cy, origin.theta)


def center_to_origin(center: Pose2D, width: float, height: float) -> Pose2D:
    c, s = math.cos(center.theta), math.sin(center.theta)
    hx, hy = (width - 1) / 2.0, (height - 1) / 2.0
    return Pose2D(center.x - (c * hx - s * hy), center.y - (s * hx + c * hy), center.theta)


@dataclass(frozen=True)
class SuccessCriteria:
    dist_threshold: float = 30.0
    angle_threshold: float = math.radians(1.5)
    px_per_mm: float = 6.25

    def __post_init__(self):
        for name in ("dist_threshold", "angle_threshold", "px_per_mm"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")

    def mm_to_px(self, mm: float) -> float:
        return mm * self.px_per_mm


def pose_errors(estimate: Pose2D, truth: Pose2D) -> tuple[float, float]:
    """Euclidean position error and absolute wrapped angle error."""
    d = math.hypot(estimate.x - truth.x, estimate.y - truth.y)
    return d, abs(wrap_angle(estimate.theta - truth.theta))


def is_success(estimate: Pose2D, truth: Pose2D, crit: SuccessCriteria = SuccessCriteria()) -> bool:
    d, a = pose_errors(estimate, truth)
    return d < crit.dist_threshold and a < crit.angle_threshold


@dataclass(frozen=True)
class Correspondence:
    """A proposed match: a query-image point and the global point it maps to."""

    query_pt: tuple[float, float]
    ref_pt: tuple[float, float]
    query_angle: float
    ref_angle: float

    def __post_init__(self):
        object.__setattr__(self, "query_pt", (float(self.query_pt[0]), float(self.query_pt[1])))
        object.__setattr__(self, "ref_pt", (float(self.ref_pt[0]), float(self.ref_pt[1])))
        object.__setattr__(self, "query_angle", wrap_angle(float(self.query_angle)))
        object.__setattr__(self, "ref_angle", wrap_angle(float(self.ref_angle)))


@dataclass
class CorrespondenceSet:
    """Column storage for many correspondences.

    ``source`` optionally tags every row with the (query index, ref image id,
    ref index) it came from.
    """

    query_pts: np.ndarray
    ref_pts: np.ndarray
    query_angles: np.ndarray
    ref_angles: np.ndarray
    source: np.ndarray | None = field(default=None)

    def __post_init__(self):
        self.query_pts = np.asarray(self.query_pts, dtype=np.float64).reshape(-1, 2)
        self.ref_pts = np.asarray(self.ref_pts, dtype=np.float64).reshape(-1, 2)
        self.query_angles = wrap_angles(np.asarray(self.query_angles, dtype=np.float64).reshape(-1))
        self.ref_angles = wrap_angles(np.asarray(self.ref_angles, dtype=np.float64).reshape(-1))
        n = len(self.query_pts)
        if not (len(self.ref_pts) == len(self.query_angles) == len(self.ref_angles) == n):
            raise ValueError("correspondence columns differ in length")
        if self.source is not None:
            self.source = np.asarray(self.source, dtype=np.int64).reshape(n, -1)

    @classmethod
    def empty(cls) -> "CorrespondenceSet":
        return cls(np.zeros((0, 2)), np.zeros((0, 2)), np.zeros(0), np.zeros(0))

    @classmethod
    def from_list(cls, items: Iterable[Correspondence]) -> "CorrespondenceSet":
        items = list(items)
        if not items:
            return cls.empty()
        return cls(
            [c.query_pt for c in items],
            [c.ref_pt for c in items],
            [c.query_angle for c in items],
            [c.ref_angle for c in items],
        )

    @classmethod
    def concatenate(cls, parts: Sequence["CorrespondenceSet"]) -> "CorrespondenceSet":
        if not parts:
            return cls.empty()
        src = None
        if all(p.source is not None for p in parts):
            src = np.concatenate([p.source for p in parts])
        return cls(
            np.concatenate([p.query_pts for p in parts]),
            np.concatenate([p.ref_pts for p in parts]),
            np.concatenate([p.query_angles for p in parts]),
            np.concatenate([p.ref_angles for p in parts]),
            src,
        )

    def __len__(self) -> int:
        return len(self.query_pts)

    def __getitem__(self, i: int) -> Correspondence:
        return Correspondence(
            tuple(self.query_pts[i]), tuple(self.ref_pts[i]),
            self.query_angles[i], self.ref_angles[i],
        )

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def subset(self, idx) -> "CorrespondenceSet":
        idx = np.asarray(idx, dtype=np.int64)
        return CorrespondenceSet(
            self.query_pts[idx], self.ref_pts[idx],
            self.query_angles[idx], self.ref_angles[idx],
            None if self.source is None else self.source[idx],
        )

    def implied_origins(self) -> tuple[np.ndarray, np.ndarray]:
        """Implied query-origin positions (N, 2) and angles (N,) for every row."""
        theta = wrap_angles(self.ref_angles - self.query_angles)
        c, s = np.cos(theta), np.sin(theta)
        qx, qy = self.query_pts[:, 0], self.query_pts[:, 1]
        ox = self.ref_pts[:, 0] - (c * qx - s * qy)
        oy = self.ref_pts[:, 1] - (s * qx + c * qy)
        return np.stack([ox, oy], axis=1), theta


CorrespondenceLike = Union[CorrespondenceSet, Sequence[Correspondence]]


def as_correspondence_set(corr: CorrespondenceLike) -> CorrespondenceSet:
    if isinstance(corr, CorrespondenceSet):
        return corr
    return CorrespondenceSet.from_list(corr)


def implied_origin(c: Correspondence) -> Pose2D:
    """Pose of the query-image origin if ``c`` were a true correspondence."""
    theta = wrap_angle(c.ref_angle - c.query_angle)
    co, si = math.cos(theta), math.sin(theta)
    qx, qy = c.query_pt
    return Pose2D(c.ref_pt[0] - (co * qx - si * qy), c.ref_pt[1] - (si * qx + co * qy), theta)


def _rigid_fit(q: np.ndarray, r: np.ndarray) -> Pose2D:
    qc = q.mean(axis=0)
    rc = r.mean(axis=0)
    dq = q - qc
    dr = r - rc
    if not np.any(dq):
        raise DegenerateInput("all query points coincide")
    dot = float(np.sum(dq[:, 0] * dr[:, 0] + dq[:, 1] * dr[:, 1]))
    cross = float(np.sum(dq[:, 0] * dr[:, 1] - dq[:, 1] * dr[:, 0]))
    theta = math.atan2(cross, dot)
    c, s = math.cos(theta), math.sin(theta)
    tx = rc[0] - (c * qc[0] - s * qc[1])
    ty = rc[1] - (s * qc[0] + c * qc[1])
    return Pose2D(tx, ty, theta)


def estimate_rigid(correspondences: CorrespondenceLike) -> Pose2D:
    """Least-squares rotation + translation (no scale) from query to ref points."""
    cs = as_correspondence_set(correspondences)
    if len(cs) < 2:
        raise DegenerateInput("need at least two correspondences")
    return _rigid_fit(cs.query_pts, cs.ref_pts)


@dataclass(frozen=True)
class RansacConfig:
    inlier_px: float = 5.0
    inlier_rad: float = 0.05
    iterations: int = 1000
    min_inliers: int = 3
    seed: int = 0
    refine_rounds: int = 3


def _inlier_mask(cs: CorrespondenceSet, thetas, txs, tys, cfg: RansacConfig) -> np.ndarray:
    """Inlier mask of shape (H, N) for H hypotheses."""
    thetas = np.asarray(thetas, dtype=np.float64)[:, None]
    c, s = np.cos(thetas), np.sin(thetas)
    qx, qy = cs.query_pts[:, 0][None, :], cs.query_pts[:, 1][None, :]
    ex = c * qx - s * qy + np.asarray(txs)[:, None] - cs.ref_pts[:, 0][None, :]
    ey = s * qx + c * qy + np.asarray(tys)[:, None] - cs.ref_pts[:, 1][None, :]
    dang = np.abs(wrap_angles((cs.ref_angles - cs.query_angles)[None, :] - thetas))
    return (ex * ex + ey * ey <= cfg.inlier_px**2) & (dang <= cfg.inlier_rad)


def _pose_inliers(cs: CorrespondenceSet, pose: Pose2D, cfg: RansacConfig) -> np.ndarray:
    return np.flatnonzero(_inlier_mask(cs, [pose.theta], [pose.x], [pose.y], cfg)[0])


def ransac_pose(correspondences: CorrespondenceLike, config: RansacConfig = RansacConfig()):
    """Robust SE(2) estimate from single-correspondence hypotheses.

    Every hypothesis is the implied origin of one sampled correspondence.
    Returns ``(pose, inlier_indices)``; raises :class:`NoConsensus` when the
    best hypothesis has fewer than ``config.min_inliers`` inliers.
    """
    cs = as_correspondence_set(correspondences)
    n = len(cs)
    if n == 0:
        raise NoConsensus("no correspondences")
    rng = np.random.default_rng(config.seed)
    n_hyp = min(n, config.iterations)
    order = rng.permutation(n)[:n_hyp]
    origins, thetas = cs.subset(order).implied_origins()

    # chunked to keep the (H, N) masks bounded
    chunk = max(1, 4_000_000 // n)
    counts = np.empty(n_hyp, dtype=np.int64)
    for lo in range(0, n_hyp, chunk):
        hi = min(n_hyp, lo + chunk)
        m = _inlier_mask(cs, thetas[lo:hi], origins[lo:hi, 0], origins[lo:hi, 1], config)
        counts[lo:hi] = m.sum(axis=1)
    best = int(np.argmax(counts))
    if counts[best] < config.min_inliers:
        raise NoConsensus(f"best hypothesis has {counts[best]} inliers, need {config.min_inliers}")

    pose = Pose2D(origins[best, 0], origins[best, 1], thetas[best])
    inliers = _pose_inliers(cs, pose, config)
    for round_ in range(max(1, config.refine_rounds)):
        if len(inliers) < 2:
            break
        try:
            refined = _rigid_fit(cs.query_pts[inliers], cs.ref_pts[inliers])
        except DegenerateInput:
            break
        new_inliers = _pose_inliers(cs, refined, config)
        # the first refit is always taken; later rounds only while support does not shrink
        limit = config.min_inliers if round_ == 0 else len(inliers)
        if len(new_inliers) < limit:
            break
        pose, previous, inliers = refined, inliers, new_inliers
        if np.array_equal(inliers, previous):
            break
    return pose, inliers

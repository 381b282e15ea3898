"""Success-rate and prior sweeps over a synthetic texture world, with a JSON Lines report.

A report is one header line, one line per (query, prior level) and a closing
summary line. Record order is canonical (query id, then prior level in config
order), so the bytes do not depend on how many worker processes ran the sweep.
"""

from __future__ import annotations

import json
import math
import os
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from gtloc.errors import FormatError, LocalizationError
from gtloc.features import DetectorConfig, FeatureSet, TripletLayout, extract_features
from gtloc.geometry import Pose2D, RansacConfig, SuccessCriteria, center_to_origin, is_success, pose_errors
from gtloc.localizer import DEFAULT_SCHEDULE, Prior, localize_features
from gtloc.mapstore import TextureMap

from .texture import SyntheticTexture, render_view

REPORT_SCHEMA = "gtloc.bench.report"
REPORT_VERSION = 1

# The synthetic camera sees the same physical patch as a full-resolution
# 1288 px wide ground camera at 6.25 px/mm, but with 320 px; distances in mm
# therefore shrink by 320/1288 when converted to bench pixels.
BENCH_PX_PER_MM = 6.25 * 320 / 1288
BENCH_CRITERIA = SuccessCriteria(px_per_mm=BENCH_PX_PER_MM)

TABLE_LEVELS = (0.0, 50.0, 100.0, 200.0, 350.0, 500.0, 750.0, 1000.0, 1500.0, None)


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything that determines a report's content.

    ``prior_levels`` holds expected prior errors in mm; ``None`` stands for
    global localization without a prior. Reference views form a
    ``grid_cols`` x ``grid_rows`` grid whose neighbours overlap by
    ``overlap`` of the image size; ``border`` px of texture surround the grid.
    """

    profile: str = "rich"
    texture_seed: int = 0
    octaves: int = 4
    persistence: float = 0.6
    grid_cols: int = 10
    grid_rows: int = 10
    image_width: int = 320
    image_height: int = 240
    overlap: float = 0.5
    border: int = 100
    queries: int = 100
    query_seed: int = 1
    prior_levels: tuple = (None,)
    criteria: SuccessCriteria = BENCH_CRITERIA
    cell_size: float = 75.0
    descriptor_bits: int = 15
    max_keypoints: int = 850
    layout_seed: int = 0
    ransac_seed: int = 0

    def __post_init__(self):
        if not 0 <= self.overlap < 1:
            raise ValueError("overlap must be in [0, 1)")
        if self.grid_cols < 1 or self.grid_rows < 1 or self.queries < 0:
            raise ValueError("grid needs at least one image and queries must be >= 0")
        if self.image_width < 16 or self.image_height < 16 or self.border < 0:
            raise ValueError("images must be at least 16x16 and border >= 0")
        levels = tuple(None if lv is None else float(lv) for lv in self.prior_levels)
        if not levels:
            raise ValueError("at least one prior level is required")
        if any(lv is not None and lv < 0 for lv in levels) or len(set(levels)) != len(levels):
            raise ValueError("prior levels must be distinct and >= 0")
        object.__setattr__(self, "prior_levels", levels)
        if isinstance(self.criteria, dict):
            object.__setattr__(self, "criteria", SuccessCriteria(**self.criteria))

    @property
    def spacing(self) -> tuple[float, float]:
        return self.image_width * (1 - self.overlap), self.image_height * (1 - self.overlap)

    def texture(self) -> SyntheticTexture:
        sx, sy = self.spacing
        w = 2 * self.border + (self.grid_cols - 1) * sx + self.image_width
        h = 2 * self.border + (self.grid_rows - 1) * sy + self.image_height
        return SyntheticTexture(
            seed=self.texture_seed, width=int(math.ceil(w)), height=int(math.ceil(h)),
            octaves=self.octaves, persistence=self.persistence, profile=self.profile,
        )

    def reference_poses(self) -> list[Pose2D]:
        sx, sy = self.spacing
        return [
            Pose2D(self.border + c * sx, self.border + r * sy, 0.0)
            for r in range(self.grid_rows) for c in range(self.grid_cols)
        ]

    def mapped_extent(self) -> tuple[float, float, float, float]:
        sx, sy = self.spacing
        x0, y0 = float(self.border), float(self.border)
        return (x0, y0, x0 + (self.grid_cols - 1) * sx + self.image_width - 1,
                y0 + (self.grid_rows - 1) * sy + self.image_height - 1)

    def query(self, query_id: int) -> tuple[Pose2D, float]:
        """Ground-truth origin pose of a query and the direction its priors are shifted in.

        The view center is drawn so that the whole view, at any rotation, lies
        inside the mapped extent; when the extent is too small for that the
        center of the extent is used.
        """
        rng = np.random.default_rng([self.query_seed, query_id])
        x0, y0, x1, y1 = self.mapped_extent()
        r = 0.5 * math.hypot(self.image_width - 1, self.image_height - 1)
        u, v, theta, direction = rng.random(4)
        cx = x0 + r + u * (x1 - x0 - 2 * r) if x1 - x0 > 2 * r else 0.5 * (x0 + x1)
        cy = y0 + r + v * (y1 - y0 - 2 * r) if y1 - y0 > 2 * r else 0.5 * (y0 + y1)
        center = Pose2D(cx, cy, (2 * theta - 1) * math.pi)
        return center_to_origin(center, self.image_width, self.image_height), 2 * math.pi * direction

    def to_dict(self) -> dict:
        d = asdict(self)
        d["prior_levels"] = list(self.prior_levels)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise FormatError(f"unknown config fields: {sorted(unknown)}")
        d = dict(d)
        if "prior_levels" in d:
            d["prior_levels"] = tuple(d["prior_levels"])
        return cls(**d)


@dataclass(frozen=True)
class QueryRecord:
    query_id: int
    prior_mm: float | None
    considered: int
    success: bool
    inliers: int
    t_match_us: int | None
    t_vote_us: int | None
    t_ransac_us: int | None
    failure: str | None = None
    pos_err_px: float | None = None
    angle_err_rad: float | None = None

    @property
    def t_total_us(self) -> int | None:
        if self.t_match_us is None:
            return None
        return self.t_match_us + self.t_vote_us + self.t_ransac_us


@dataclass(frozen=True)
class LevelSummary:
    prior_mm: float | None
    queries: int
    successes: int
    success_rate: float
    mean_inliers: float
    median_considered: float
    median_t_match_us: float | None
    median_t_total_us: float | None


@dataclass
class Report:
    config: ExperimentConfig
    records: list[QueryRecord] = field(default_factory=list)
    timing: bool = True

    def level(self, prior_mm) -> list[QueryRecord]:
        key = None if prior_mm is None else float(prior_mm)
        return [r for r in self.records if r.prior_mm == key]

    def success_rate(self, prior_mm=None) -> float:
        recs = self.level(prior_mm)
        return sum(r.success for r in recs) / len(recs) if recs else 0.0

    def summary(self) -> list[LevelSummary]:
        out = []
        for lv in self.config.prior_levels:
            recs = self.level(lv)
            n = len(recs)
            wins = sum(r.success for r in recs)
            match_t = [r.t_match_us for r in recs if r.t_match_us is not None]
            total_t = [r.t_total_us for r in recs if r.t_total_us is not None]
            out.append(LevelSummary(
                prior_mm=lv,
                queries=n,
                successes=wins,
                success_rate=wins / n if n else 0.0,
                mean_inliers=sum(r.inliers for r in recs) / n if n else 0.0,
                median_considered=float(statistics.median(r.considered for r in recs)) if n else 0.0,
                median_t_match_us=float(statistics.median(match_t)) if match_t else None,
                median_t_total_us=float(statistics.median(total_t)) if total_t else None,
            ))
        return out

    # -- serialization

    def to_jsonl(self) -> str:
        lines = [_dumps({"kind": "header", "schema": REPORT_SCHEMA, "version": REPORT_VERSION,
                         "timing": self.timing, "config": self.config.to_dict()})]
        lines += [_dumps({"kind": "query", **asdict(r)}) for r in self.records]
        lines.append(_dumps({"kind": "summary", "levels": [asdict(s) for s in self.summary()]}))
        return "\n".join(lines) + "\n"

    def write(self, path: str | os.PathLike) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_jsonl())

    @classmethod
    def from_jsonl(cls, text: str) -> "Report":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if len(lines) < 2:
            raise FormatError("report needs a header and a summary line")
        try:
            objs = [json.loads(ln) for ln in lines]
        except json.JSONDecodeError as exc:
            raise FormatError(f"report line is not JSON: {exc}") from exc
        head, body, tail = objs[0], objs[1:-1], objs[-1]
        _expect_keys(head, {"kind", "schema", "version", "timing", "config"}, "header")
        if head["kind"] != "header" or head["schema"] != REPORT_SCHEMA:
            raise FormatError("not a gtloc bench report")
        if head["version"] != REPORT_VERSION:
            raise FormatError(f"unsupported report version {head['version']}")
        try:
            config = ExperimentConfig.from_dict(head["config"])
        except (TypeError, ValueError) as exc:
            raise FormatError(f"bad config in report header: {exc}") from exc
        rec_keys = {"kind"} | {f.name for f in fields(QueryRecord)}
        records = []
        for obj in body:
            _expect_keys(obj, rec_keys, "query record", required=rec_keys)
            if obj.pop("kind") != "query":
                raise FormatError("expected a query record")
            records.append(QueryRecord(**obj))
        _expect_keys(tail, {"kind", "levels"}, "summary")
        if tail["kind"] != "summary":
            raise FormatError("last line must be the summary")
        sum_keys = {f.name for f in fields(LevelSummary)}
        for lv in tail["levels"]:
            _expect_keys(lv, sum_keys, "summary level", required=sum_keys)
        report = cls(config, records, bool(head["timing"]))
        if [asdict(s) for s in report.summary()] != tail["levels"]:
            raise FormatError("summary does not match the records")
        return report

    @classmethod
    def read(cls, path: str | os.PathLike) -> "Report":
        with open(path, encoding="utf-8") as fh:
            return cls.from_jsonl(fh.read())


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), allow_nan=False)


def _expect_keys(obj, allowed: set, what: str, required: set | None = None) -> None:
    if not isinstance(obj, dict):
        raise FormatError(f"{what} must be a JSON object")
    unknown = set(obj) - allowed
    if unknown:
        raise FormatError(f"unknown {what} fields: {sorted(unknown)}")
    missing = (required if required is not None else allowed) - set(obj)
    if missing:
        raise FormatError(f"missing {what} fields: {sorted(missing)}")


# ---------------------------------------------------------------------------
# running


def build_map(cfg: ExperimentConfig, workers: int = 1) -> TextureMap:
    """Render every reference view of the grid and insert it in grid order."""
    m = TextureMap(DetectorConfig(max_keypoints=cfg.max_keypoints),
                   descriptor_bits=cfg.descriptor_bits, layout_seed=cfg.layout_seed)
    tex = cfg.texture()
    poses = cfg.reference_poses()
    jobs = [(tex, p, cfg.image_width, cfg.image_height, m.detector_config, m.triplet_layout) for p in poses]
    for feats, pose in zip(_pmap(_extract_view, jobs, workers), poses):
        m.add_features(feats, pose, cfg.image_width, cfg.image_height)
    return m


def _extract_view(job) -> FeatureSet:
    tex, pose, w, h, det, layout = job
    return extract_features(render_view(tex, pose, w, h), det, layout)


def _us(seconds: float) -> int:
    return int(round(seconds * 1e6))


def run_query(cfg: ExperimentConfig, texture_map: TextureMap, query_id: int,
              timing: bool = True, pose: Pose2D | None = None) -> list[QueryRecord]:
    """Localize one query at every prior level; failures become records, never exceptions."""
    truth, direction = cfg.query(query_id)
    if pose is not None:
        truth = pose
    w, h = cfg.image_width, cfg.image_height
    snap = texture_map.snapshot()
    feats = extract_features(render_view(cfg.texture(), truth, w, h), snap.detector_config, snap.triplet_layout)
    ransac = RansacConfig(seed=cfg.ransac_seed)
    center = np.array([(w - 1) / 2.0, (h - 1) / 2.0])
    cx, cy = truth.apply(center)
    out = []
    for level in cfg.prior_levels:
        prior = None
        if level is not None:
            shift = cfg.criteria.mm_to_px(level)
            prior = Prior((cx + shift * math.cos(direction), cy + shift * math.sin(direction)), level)
        try:
            res = localize_features(snap, feats, w, h, prior, DEFAULT_SCHEDULE, ransac, cfg.cell_size)
        except LocalizationError as exc:
            t = exc.timings
            out.append(QueryRecord(
                query_id, level, exc.considered_images, False, 0,
                _us(t["matching"]) if timing else None,
                _us(t["voting"]) if timing else None,
                _us(t["ransac"]) if timing else None,
                failure=exc.reason,
            ))
            continue
        d, a = pose_errors(res.pose, truth)
        t = res.timings
        out.append(QueryRecord(
            query_id, level, res.considered_images, is_success(res.pose, truth, cfg.criteria),
            res.inlier_count,
            _us(t["matching"]) if timing else None,
            _us(t["voting"]) if timing else None,
            _us(t["ransac"]) if timing else None,
            pos_err_px=d, angle_err_rad=a,
        ))
    return out


_WORKER_STATE: dict = {}


def _init_worker(cfg: ExperimentConfig, map_bytes: bytes, timing: bool) -> None:
    _WORKER_STATE.update(cfg=cfg, map=TextureMap.from_bytes(map_bytes), timing=timing)


def _worker_query(job) -> list[QueryRecord]:
    query_id, pose = job
    s = _WORKER_STATE
    return run_query(s["cfg"], s["map"], query_id, s["timing"], pose)


def _pmap(fn, jobs, workers: int, initializer=None, initargs=()):
    if workers <= 1 or len(jobs) <= 1:
        if initializer is not None:
            initializer(*initargs)
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers, initializer=initializer, initargs=initargs) as ex:
        return list(ex.map(fn, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def run_experiment(cfg: ExperimentConfig, workers: int = 1, timing: bool = True,
                   texture_map: TextureMap | None = None,
                   query_poses: list[Pose2D] | None = None) -> Report:
    """Build the map (unless given), localize every query at every prior level, return the report.

    ``query_poses`` replaces the sampled ground-truth poses (prior directions
    stay seeded per query id). With ``timing=False`` all per-phase times are
    null, which makes the report a pure function of the config.
    """
    if texture_map is None:
        texture_map = build_map(cfg, workers)
    if query_poses is not None:
        jobs = list(enumerate(query_poses))
    else:
        jobs = [(q, None) for q in range(cfg.queries)]
    if query_poses is not None and len(query_poses) != cfg.queries:
        raise ValueError("query_poses must hold exactly cfg.queries poses")
    results = _pmap(_worker_query, jobs, workers, _init_worker, (cfg, texture_map.to_bytes(), timing))
    _WORKER_STATE.clear()
    records = sorted((r for rs in results for r in rs),
                     key=lambda r: (r.query_id, cfg.prior_levels.index(r.prior_mm)))
    return Report(cfg, records, timing)

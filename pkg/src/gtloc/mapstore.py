"""Persistent texture map: reference images, their features, identity tables and a spatial index.

The map is mutable online. Every mutation swaps in a new immutable state
object, so a localization that captured a :meth:`TextureMap.snapshot` keeps
working on the map as it was when it started.

File layout (little-endian)::

    "GTXM" | version u16 | bits u8
    detector: layers u16, contrast f64, edge f64, sigma f64, max_kp u32, max_octaves u16 (0 = auto)
    layout:   triplets u8, half_size u16, sigma f64, triplets x 4 f64 offsets
    next_id u64 | record count u32
    per record: id u64, pose 3 x f64, width u32, height u32, feature count u16,
                per feature x f32, y f32, orientation f32, descriptor u16

Identity tables and the k-d tree are rebuilt on load.
"""

from __future__ import annotations

import csv
import io
import math
import os
import struct
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO, Iterable

import numpy as np
from scipy.spatial import cKDTree

from gtloc.errors import BitWidthMismatch, CorruptRecord, FormatError, UnknownId
from gtloc.features import (
    MAX_COMPACT_BITS,
    DetectorConfig,
    FeatureSet,
    TripletLayout,
    extract_features,
    make_triplet_layout,
)
from gtloc.geometry import Pose2D
from gtloc.image import Image, read_pgm
from gtloc.matching import IdentityTable, build_table

MAGIC = b"GTXM"
FORMAT_VERSION = 1

_HEADER = struct.Struct("<4sHB")
_DETECTOR = struct.Struct("<HdddIH")
_LAYOUT = struct.Struct("<BHd")
_COUNTS = struct.Struct("<QI")
_RECORD = struct.Struct("<QdddIIH")
FEATURE_DTYPE = np.dtype([("x", "<f4"), ("y", "<f4"), ("orientation", "<f4"), ("descriptor", "<u2")])


def feature_payload_bits(num_features: int, descriptor_bits: int = 15, index_bits: int = 16) -> int:
    """Memory estimate per reference image: keypoints as 3 x 32 bit plus (descriptor, index) pairs."""
    return num_features * 3 * 32 + num_features * (descriptor_bits + index_bits)


def record_file_bits(num_features: int) -> int:
    """Bits one record occupies in the map file."""
    return 8 * (_RECORD.size + num_features * FEATURE_DTYPE.itemsize)


@dataclass(frozen=True, eq=False)
class ReferenceImageRecord:
    id: int
    pose: Pose2D
    features: FeatureSet
    width: int
    height: int
    table: IdentityTable

    @property
    def position(self) -> tuple[float, float]:
        """Global position of the image center, the point indexed by the k-d tree."""
        cx, cy = self.pose.apply(((self.width - 1) / 2.0, (self.height - 1) / 2.0))
        return float(cx), float(cy)

    def footprint(self) -> np.ndarray:
        w, h = self.width - 1, self.height - 1
        return self.pose.apply(np.array([[0, 0], [w, 0], [w, h], [0, h]], dtype=np.float64))

    def global_features(self, idx=None) -> tuple[np.ndarray, np.ndarray]:
        """Global positions (k, 2) and orientations (k,) of the selected features."""
        xy = self.features.xy if idx is None else self.features.xy[idx]
        ori = self.features.orientation if idx is None else self.features.orientation[idx]
        return self.pose.apply(xy.astype(np.float64)), ori.astype(np.float64) + self.pose.theta

    def __eq__(self, other):
        if not isinstance(other, ReferenceImageRecord):
            return NotImplemented
        return (
            self.id == other.id
            and self.pose == other.pose
            and self.width == other.width
            and self.height == other.height
            and self.features == other.features
            and self.table == other.table
        )


class MapSnapshot:
    """Immutable view of a map at one point in time."""

    __slots__ = ("records", "ids", "positions", "extent", "_tree", "descriptor_bits",
                 "detector_config", "triplet_layout")

    def __init__(self, records: dict[int, ReferenceImageRecord], descriptor_bits: int,
                 detector_config: DetectorConfig, triplet_layout: TripletLayout):
        self.records = dict(sorted(records.items()))
        self.ids = np.fromiter(self.records.keys(), dtype=np.int64, count=len(self.records))
        self.positions = np.array([r.position for r in self.records.values()], dtype=np.float64).reshape(-1, 2)
        self._tree = cKDTree(self.positions) if len(self.positions) else None
        self.extent = _extent(self.records.values())
        self.descriptor_bits = descriptor_bits
        self.detector_config = detector_config
        self.triplet_layout = triplet_layout

    def __len__(self) -> int:
        return len(self.records)

    def select_near(self, position, k: int) -> list[int]:
        """Ids of the ``k`` records nearest to ``position``, ascending distance, ties by id."""
        if k < 1:
            raise ValueError("k must be >= 1")
        n = len(self.ids)
        if n == 0:
            return []
        px, py = float(position[0]), float(position[1])
        if k >= n:
            cand = np.arange(n)
        else:
            d, _ = self._tree.query((px, py), k=k)
            kth = float(np.max(d))
            # widen the ball so every record tied with the k-th distance is a candidate
            cand = np.asarray(self._tree.query_ball_point((px, py), kth * (1 + 1e-9) + 1e-9), dtype=np.int64)
        dx = self.positions[cand, 0] - px
        dy = self.positions[cand, 1] - py
        d2 = dx * dx + dy * dy
        order = np.lexsort((self.ids[cand], d2))[:k]
        return [int(i) for i in self.ids[cand][order]]

    def extent_of(self, ids: Iterable[int]):
        return _extent(self.records[i] for i in ids)


def _extent(records: Iterable[ReferenceImageRecord]):
    corners = [r.footprint() for r in records]
    if not corners:
        return None
    c = np.concatenate(corners)
    return (float(c[:, 0].min()), float(c[:, 1].min()), float(c[:, 0].max()), float(c[:, 1].max()))


class TextureMap:
    """The map: all reference records plus the settings that produced their features.

    Single writer, many readers: mutations are serialized by a lock and
    publish a fresh :class:`MapSnapshot`.
    """

    def __init__(self, detector_config: DetectorConfig | None = None,
                 triplet_layout: TripletLayout | None = None,
                 descriptor_bits: int | None = None, layout_seed: int = 0):
        self.detector_config = detector_config or DetectorConfig()
        if triplet_layout is None:
            triplet_layout = make_triplet_layout(15 if descriptor_bits is None else descriptor_bits, layout_seed)
        if descriptor_bits is None:
            descriptor_bits = triplet_layout.n
        if triplet_layout.n != descriptor_bits:
            raise BitWidthMismatch(f"layout has {triplet_layout.n} triplets but map uses {descriptor_bits} bits")
        if not 1 <= descriptor_bits <= MAX_COMPACT_BITS:
            raise BitWidthMismatch(f"map descriptors must have 1..{MAX_COMPACT_BITS} bits")
        self.triplet_layout = triplet_layout
        self.descriptor_bits = descriptor_bits
        self.next_id = 0
        self._lock = threading.Lock()
        self._snapshot = MapSnapshot({}, descriptor_bits, self.detector_config, triplet_layout)

    # -- read side

    def snapshot(self) -> MapSnapshot:
        return self._snapshot

    @property
    def records(self) -> dict[int, ReferenceImageRecord]:
        return self._snapshot.records

    @property
    def extent(self):
        return self._snapshot.extent

    def __len__(self) -> int:
        return len(self._snapshot)

    def __contains__(self, record_id) -> bool:
        return record_id in self._snapshot.records

    def __getitem__(self, record_id: int) -> ReferenceImageRecord:
        try:
            return self._snapshot.records[record_id]
        except KeyError:
            raise UnknownId(record_id) from None

    def ids(self) -> list[int]:
        return list(self._snapshot.records)

    def select_near(self, position, k: int) -> list[int]:
        return self._snapshot.select_near(position, k)

    def __eq__(self, other):
        if not isinstance(other, TextureMap):
            return NotImplemented
        return (
            self.detector_config == other.detector_config
            and self.triplet_layout == other.triplet_layout
            and self.descriptor_bits == other.descriptor_bits
            and self.next_id == other.next_id
            and self.records == other.records
        )

    # -- write side

    def extract(self, img: Image) -> FeatureSet:
        return extract_features(img, self.detector_config, self.triplet_layout)

    def _make_record(self, record_id: int, features: FeatureSet, pose: Pose2D,
                     width: int, height: int) -> ReferenceImageRecord:
        features = features.persisted()
        if len(features) and features.n != self.descriptor_bits:
            raise BitWidthMismatch(f"features have {features.n} bits, map uses {self.descriptor_bits}")
        if len(features) > 0xFFFF:
            raise ValueError("a record holds at most 65535 features")
        if len(features) == 0:
            features = FeatureSet.empty(self.descriptor_bits)
        return ReferenceImageRecord(
            int(record_id), pose, features, int(width), int(height),
            build_table(features, self.descriptor_bits),
        )

    def _publish(self, records: dict[int, ReferenceImageRecord]) -> None:
        self._snapshot = MapSnapshot(records, self.descriptor_bits, self.detector_config, self.triplet_layout)

    def add_features(self, features: FeatureSet, pose: Pose2D, width: int, height: int) -> int:
        """Insert a record from already extracted features (same detector and layout as the map)."""
        with self._lock:
            rid = self.next_id
            rec = self._make_record(rid, features, pose, width, height)
            records = dict(self._snapshot.records)
            records[rid] = rec
            self.next_id += 1
            self._publish(records)
            return rid

    def add_reference(self, img: Image, pose: Pose2D) -> int:
        return self.add_features(self.extract(img), pose, img.width, img.height)

    def remove_reference(self, record_id: int) -> None:
        with self._lock:
            if record_id not in self._snapshot.records:
                raise UnknownId(record_id)
            records = dict(self._snapshot.records)
            del records[record_id]
            self._publish(records)

    def update_reference(self, record_id: int, img: Image, pose: Pose2D) -> None:
        feats = self.extract(img)
        with self._lock:
            if record_id not in self._snapshot.records:
                raise UnknownId(record_id)
            records = dict(self._snapshot.records)
            records[record_id] = self._make_record(record_id, feats, pose, img.width, img.height)
            self._publish(records)

    # -- integrity

    def rebuilt(self) -> "TextureMap":
        """Fresh map whose derived structures are recomputed from features and poses only."""
        m = TextureMap(self.detector_config, self.triplet_layout, self.descriptor_bits)
        records = {
            rid: m._make_record(rid, r.features, r.pose, r.width, r.height)
            for rid, r in self.records.items()
        }
        m.next_id = self.next_id
        m._publish(records)
        return m

    def check_invariants(self) -> None:
        """Raise :class:`CorruptRecord` if any map invariant is violated."""
        snap = self._snapshot
        if len(snap.ids) != len(snap.records) or len(snap.positions) != len(snap.records):
            raise CorruptRecord("spatial index size differs from record count")
        if len(set(snap.ids.tolist())) != len(snap.ids):
            raise CorruptRecord("duplicate record ids")
        for rid, rec in snap.records.items():
            if rec.id != rid:
                raise CorruptRecord(f"record {rid} carries id {rec.id}")
            if rid >= self.next_id:
                raise CorruptRecord(f"record id {rid} not below next id {self.next_id}")
            if len(rec.features) and rec.features.n != self.descriptor_bits:
                raise CorruptRecord(f"record {rid} has {rec.features.n}-bit descriptors")
            if rec.table.n != self.descriptor_bits or rec.table != build_table(rec.features, self.descriptor_bits):
                raise CorruptRecord(f"identity table of record {rid} does not index its features")
            xy = rec.features.xy
            if len(xy) and (
                np.any(xy[:, 0] < 0) or np.any(xy[:, 0] > rec.width - 1)
                or np.any(xy[:, 1] < 0) or np.any(xy[:, 1] > rec.height - 1)
            ):
                raise CorruptRecord(f"record {rid} has keypoints outside its image")
            if not all(map(math.isfinite, rec.pose.as_tuple())):
                raise CorruptRecord(f"record {rid} has a non-finite pose")
        if snap.extent != _extent(snap.records.values()):
            raise CorruptRecord("cached extent is stale")
        if snap._tree is not None and not np.array_equal(snap._tree.data, snap.positions):
            raise CorruptRecord("spatial index does not match record positions")

    # -- persistence

    def __reduce__(self):
        return (TextureMap.from_bytes, (self.to_bytes(),))

    def to_bytes(self) -> bytes:
        out = io.BytesIO()
        self.save(out)
        return out.getvalue()

    def save(self, sink: str | os.PathLike | BinaryIO) -> None:
        if isinstance(sink, (str, os.PathLike)):
            data = self.to_bytes()
            tmp = Path(str(sink) + ".tmp")
            tmp.write_bytes(data)
            os.replace(tmp, sink)
            return
        snap = self._snapshot
        cfg = self.detector_config
        lay = self.triplet_layout
        sink.write(_HEADER.pack(MAGIC, FORMAT_VERSION, self.descriptor_bits))
        sink.write(_DETECTOR.pack(
            cfg.layers_per_octave, cfg.contrast_threshold, cfg.edge_threshold,
            cfg.base_sigma, cfg.max_keypoints, cfg.max_octaves or 0,
        ))
        sink.write(_LAYOUT.pack(lay.n, lay.half_size, lay.sigma))
        sink.write(np.ascontiguousarray(lay.offsets, dtype="<f8").tobytes())
        sink.write(_COUNTS.pack(self.next_id, len(snap.records)))
        for rid, rec in snap.records.items():
            sink.write(_RECORD.pack(rid, rec.pose.x, rec.pose.y, rec.pose.theta,
                                    rec.width, rec.height, len(rec.features)))
            arr = np.empty(len(rec.features), dtype=FEATURE_DTYPE)
            arr["x"] = rec.features.xy[:, 0]
            arr["y"] = rec.features.xy[:, 1]
            arr["orientation"] = rec.features.orientation
            arr["descriptor"] = rec.features.descriptors.astype(np.uint16)
            sink.write(arr.tobytes())

    @classmethod
    def from_bytes(cls, data: bytes) -> "TextureMap":
        return cls.load(io.BytesIO(data))

    @classmethod
    def load(cls, source: str | os.PathLike | BinaryIO) -> "TextureMap":
        if isinstance(source, (str, os.PathLike)):
            with open(source, "rb") as fh:
                return cls.load(fh)
        reader = _Reader(source.read())
        magic, version, bits = reader.unpack(_HEADER)
        if magic != MAGIC:
            raise FormatError(f"bad magic {magic!r}")
        if version != FORMAT_VERSION:
            raise FormatError(f"unsupported map format version {version}")
        layers, contrast, edge, sigma, max_kp, max_oct = reader.unpack(_DETECTOR)
        n_trip, half, lsigma = reader.unpack(_LAYOUT)
        offsets = np.frombuffer(reader.take(n_trip * 4 * 8), dtype="<f8").reshape(n_trip, 2, 2)
        next_id, count = reader.unpack(_COUNTS)
        try:
            cfg = DetectorConfig(layers, contrast, edge, sigma, max_kp, max_oct or None)
            layout = TripletLayout(offsets, half, lsigma)
            m = cls(cfg, layout, bits)
        except (ValueError, BitWidthMismatch) as exc:
            raise CorruptRecord(f"invalid map header: {exc}") from exc
        records: dict[int, ReferenceImageRecord] = {}
        for _ in range(count):
            rid, x, y, theta, w, h, nf = reader.unpack(_RECORD)
            arr = np.frombuffer(reader.take(nf * FEATURE_DTYPE.itemsize), dtype=FEATURE_DTYPE)
            if rid in records:
                raise CorruptRecord(f"duplicate record id {rid}")
            if not (-math.pi < theta <= math.pi):
                raise CorruptRecord(f"record {rid} pose angle not normalized")
            if nf and int(arr["descriptor"].max()) >> bits:
                raise CorruptRecord(f"record {rid} descriptor exceeds {bits} bits")
            try:
                fs = FeatureSet(np.stack([arr["x"], arr["y"]], axis=1), arr["orientation"],
                                arr["descriptor"].astype(np.uint64), bits)
                records[rid] = m._make_record(rid, fs, Pose2D(x, y, theta), w, h)
            except ValueError as exc:
                raise CorruptRecord(f"record {rid}: {exc}") from exc
        if not reader.at_end():
            raise FormatError("trailing bytes after last record")
        m.next_id = next_id
        m._publish(records)
        m.check_invariants()
        return m


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise FormatError("truncated map file")
        chunk = self.data[self.pos:self.pos + n]
        self.pos += n
        return chunk

    def unpack(self, st: struct.Struct):
        return st.unpack(self.take(st.size))

    def at_end(self) -> bool:
        return self.pos == len(self.data)


# ---------------------------------------------------------------------------
# ingestion


def read_poses_csv(path: str | os.PathLike) -> list[tuple[str, Pose2D]]:
    """Rows of ``filename,x,y,theta`` (header required, theta in radians)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip().lower() for h in next(reader)]
        except StopIteration:
            raise FormatError(f"{path}: empty poses file") from None
        if header != ["filename", "x", "y", "theta"]:
            raise FormatError(f"{path}: expected header filename,x,y,theta, got {header}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 4:
                raise FormatError(f"{path}:{lineno}: expected 4 columns")
            try:
                rows.append((row[0].strip(), Pose2D(float(row[1]), float(row[2]), float(row[3]))))
            except ValueError as exc:
                raise FormatError(f"{path}:{lineno}: {exc}") from exc
    return rows


def build_from_csv(poses_csv: str | os.PathLike, texture_map: TextureMap | None = None,
                   image_dir: str | os.PathLike | None = None) -> TextureMap:
    """Add every image listed in a poses CSV; image paths are relative to ``image_dir`` or the CSV."""
    texture_map = TextureMap() if texture_map is None else texture_map
    base = Path(image_dir) if image_dir is not None else Path(poses_csv).parent
    for name, pose in read_poses_csv(poses_csv):
        texture_map.add_reference(read_pgm(base / name), pose)
    return texture_map

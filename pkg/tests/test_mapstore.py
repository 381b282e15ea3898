import io
import pickle

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gtloc.bench.texture import render_view
from gtloc.errors import BitWidthMismatch, CorruptRecord, FormatError, UnknownId
from gtloc.features import FeatureSet
from gtloc.geometry import Pose2D
from gtloc.image import write_pgm
from gtloc.mapstore import (
    FEATURE_DTYPE,
    MapSnapshot,
    TextureMap,
    build_from_csv,
    feature_payload_bits,
    read_poses_csv,
    record_file_bits,
)
from gtloc.matching import build_table

W, H = 160, 120


def random_features(rng, k, n=15, w=W, h=H):
    return FeatureSet(np.c_[rng.uniform(0, w - 1, k), rng.uniform(0, h - 1, k)],
                      rng.uniform(-3, 3, k), rng.integers(0, 2**n, k), n)


def brute_near(m: TextureMap, position, k):
    items = sorted(((r.position[0] - position[0]) ** 2 + (r.position[1] - position[1]) ** 2, rid)
                   for rid, r in m.records.items())
    return [rid for _, rid in items[:k]]


def test_add_to_empty_map(rich_texture):
    m = TextureMap()
    assert m.extent is None and len(m) == 0
    p = Pose2D(30, 40, 0.0)
    rid = m.add_reference(render_view(rich_texture, p, W, H), p)
    assert len(m) == 1 and rid == 0
    assert m.extent == (30.0, 40.0, 30.0 + W - 1, 40.0 + H - 1)


def test_remove_only_record(rich_texture):
    m = TextureMap()
    rid = m.add_features(random_features(np.random.default_rng(0), 10), Pose2D(0, 0, 0), W, H)
    m.remove_reference(rid)
    assert len(m) == 0 and m.extent is None
    assert m.select_near((0, 0), 3) == []
    with pytest.raises(UnknownId):
        m.remove_reference(rid)
    with pytest.raises(UnknownId):
        m[rid]


def test_remove_middle_record_matches_brute_force():
    rng = np.random.default_rng(1)
    m = TextureMap()
    for _ in range(30):
        m.add_features(random_features(rng, 5), Pose2D(*rng.uniform(0, 2000, 2), rng.uniform(-3, 3)), W, H)
    m.remove_reference(15)
    for _ in range(20):
        q = rng.uniform(-100, 2100, 2)
        for k in (1, 4, 29, 40):
            got = m.select_near(q, k)
            assert 15 not in got
            assert got == brute_near(m, q, k)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 20), st.integers(0, 20)), min_size=1, max_size=60),
       st.tuples(st.integers(-5, 25), st.integers(-5, 25)), st.integers(1, 70))
def test_select_near_equals_brute_force_with_ties(grid_pts, q, k):
    """Integer lattice positions create many exact distance ties."""
    m = TextureMap()
    for gx, gy in grid_pts:
        m.add_features(FeatureSet.empty(), Pose2D(gx * 10.0, gy * 10.0, 0.0), 1, 1)
    q = (q[0] * 10.0, q[1] * 10.0)
    assert m.select_near(q, k) == brute_near(m, q, k)


def test_select_near_examples():
    m = TextureMap()
    for i in range(5):
        m.add_features(FeatureSet.empty(), Pose2D(100.0 * i, 0, 0), 1, 1)
    assert m.select_near((300, 0), 1) == [3]
    assert m.select_near((0, 0), 10) == [0, 1, 2, 3, 4]


def test_update_reference(small_world):
    tex, base, poses = small_world
    m = TextureMap.from_bytes(base.to_bytes())
    img = render_view(tex, poses[4], W, H)
    before = m[4]
    m.update_reference(4, img, poses[4])
    assert m[4] == before
    moved = Pose2D(poses[4].x + 500, poses[4].y, 0.0)
    m.update_reference(4, img, moved)
    assert np.array_equal(m[4].features.xy, before.features.xy)
    assert m.select_near(m[4].position, 1) == [4]
    other = render_view(tex, poses[0], W, H)
    m.update_reference(4, other, poses[0])
    assert m[4].table == build_table(m[4].features, 15)
    with pytest.raises(UnknownId):
        m.update_reference(99, img, moved)
    m.check_invariants()


def test_add_remove_readd_is_byte_identical_modulo_id(small_world):
    tex, base, poses = small_world
    m = TextureMap.from_bytes(base.to_bytes())
    img = render_view(tex, poses[2], W, H)
    first = m.to_bytes()
    m.remove_reference(2)
    rid = m.add_reference(img, poses[2])
    assert rid == 9
    # same content under a new id
    assert m[rid].features == base[2].features and m[rid].pose == base[2].pose
    m2 = TextureMap.from_bytes(first)
    m2.remove_reference(2)
    m2.add_reference(img, poses[2])
    assert m2.to_bytes() == m.to_bytes()


def test_snapshot_isolation():
    rng = np.random.default_rng(2)
    m = TextureMap()
    m.add_features(random_features(rng, 4), Pose2D(0, 0, 0), W, H)
    snap = m.snapshot()
    m.add_features(random_features(rng, 4), Pose2D(500, 0, 0), W, H)
    assert isinstance(snap, MapSnapshot)
    assert len(snap) == 1 and len(m) == 2


def test_roundtrip_and_byte_stability(small_world):
    _, m, _ = small_world
    data = m.to_bytes()
    back = TextureMap.from_bytes(data)
    assert back == m
    assert back.to_bytes() == data
    assert TextureMap.from_bytes(TextureMap().to_bytes()) == TextureMap()
    assert pickle.loads(pickle.dumps(m)) == m


def test_save_load_path(tmp_path, small_world):
    _, m, _ = small_world
    path = tmp_path / "m.gtxm"
    m.save(path)
    assert TextureMap.load(path) == m
    assert not (tmp_path / "m.gtxm.tmp").exists()


def test_hundred_record_roundtrip_and_payload():
    rng = np.random.default_rng(3)
    m = TextureMap()
    for i in range(100):
        m.add_features(random_features(rng, 850, w=1288, h=964), Pose2D(i * 300.0, 0, 0), 1288, 964)
    data = m.to_bytes()
    assert TextureMap.from_bytes(data) == m
    payload = feature_payload_bits(850)
    assert payload == 107950
    per_record = (len(data) - len(TextureMap().to_bytes())) * 8 / 100
    assert per_record == record_file_bits(850)
    assert per_record <= 1.2 * payload


def test_truncated_and_corrupt_files_fail_closed(small_world):
    _, m, _ = small_world
    data = m.to_bytes()
    for cut in (0, 3, 10, 60, len(data) // 2, len(data) - 1):
        with pytest.raises(FormatError):
            TextureMap.from_bytes(data[:cut])
    with pytest.raises(FormatError):
        TextureMap.from_bytes(data + b"\0")
    with pytest.raises(FormatError):
        TextureMap.from_bytes(b"XXXX" + data[4:])
    bad_version = bytearray(data)
    bad_version[4] = 9
    with pytest.raises(FormatError):
        TextureMap.from_bytes(bytes(bad_version))


def test_corrupt_descriptor_detected():
    m = TextureMap()
    m.add_features(FeatureSet([[1, 1]], [0], [5], 15), Pose2D(0, 0, 0), W, H)
    data = bytearray(m.to_bytes())
    # the last two bytes are the only descriptor; set bit 15
    data[-1] = 0x80
    with pytest.raises(CorruptRecord):
        TextureMap.from_bytes(bytes(data))


def test_bit_width_rules():
    with pytest.raises(BitWidthMismatch):
        TextureMap(descriptor_bits=17)
    m = TextureMap(descriptor_bits=12)
    with pytest.raises(BitWidthMismatch):
        m.add_features(random_features(np.random.default_rng(0), 3, n=15), Pose2D(0, 0, 0), W, H)


def test_feature_record_layout():
    assert FEATURE_DTYPE.itemsize == 14
    assert record_file_bits(0) == 8 * 42


def test_build_from_csv(tmp_path, rich_texture):
    lines = ["filename,x,y,theta"]
    for i, p in enumerate([Pose2D(10, 10, 0), Pose2D(90, 10, 0.2)]):
        write_pgm(tmp_path / f"r{i}.pgm", render_view(rich_texture, p, W, H))
        lines.append(f"r{i}.pgm,{p.x},{p.y},{p.theta}")
    (tmp_path / "poses.csv").write_text("\n".join(lines) + "\n")
    m = build_from_csv(tmp_path / "poses.csv")
    assert len(m) == 2 and m[1].pose == Pose2D(90, 10, 0.2)
    assert read_poses_csv(tmp_path / "poses.csv")[0][0] == "r0.pgm"
    (tmp_path / "bad.csv").write_text("name,x,y\n")
    with pytest.raises(FormatError):
        read_poses_csv(tmp_path / "bad.csv")


def test_rebuilt_equals_incremental(small_world):
    _, m, _ = small_world
    r = m.rebuilt()
    assert r == m
    assert np.array_equal(r.snapshot().positions, m.snapshot().positions)
    m.check_invariants()


def test_save_to_stream_equals_bytes(small_world):
    _, m, _ = small_world
    buf = io.BytesIO()
    m.save(buf)
    assert buf.getvalue() == m.to_bytes()

import math
import statistics

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gtloc.bench.experiment import BENCH_CRITERIA
from gtloc.bench.texture import SyntheticTexture, render_view
from gtloc.errors import LocalizationError, NoConsensus, NoFeatures, NoVotes
from gtloc.features import FeatureSet, extract_features
from gtloc.geometry import Pose2D, center_to_origin, is_success
from gtloc.image import Image
from gtloc.localizer import (
    DEFAULT_SCHEDULE,
    Prior,
    PriorSchedule,
    candidate_ids,
    localize,
    localize_features,
    schedule_lookup,
)
from gtloc.mapstore import TextureMap

W, H = 160, 120


@pytest.fixture(scope="module")
def grid_world():
    """8x8 grid of 160x120 views with 50% overlap on a rich texture."""
    tex = SyntheticTexture(seed=31, width=900, height=700)
    m = TextureMap()
    for r in range(8):
        for c in range(8):
            p = Pose2D(50 + 80 * c, 50 + 60 * r, 0.0)
            m.add_reference(render_view(tex, p, W, H), p)
    return tex, m


@pytest.mark.parametrize("err, count", [(0, 5), (50, 10), (60, 20), (1500, 1000), (2000, None)])
def test_schedule_lookup(err, count):
    assert schedule_lookup(DEFAULT_SCHEDULE, err) == count


def test_schedule_validation():
    with pytest.raises(ValueError):
        PriorSchedule(((0, 5), (50, 5)))
    with pytest.raises(ValueError):
        PriorSchedule(((10, 5), (5, 10)))
    with pytest.raises(ValueError):
        Prior((0, 0), -1)


def test_self_localization(small_world):
    tex, m, poses = small_world
    truth = poses[4]
    res = localize(m, render_view(tex, truth, W, H))
    assert is_success(res.pose, truth)
    assert res.considered_images == len(m)
    assert res.inlier_count <= res.votes_in_winning_cell <= res.total_matches
    assert set(res.timings) == {"matching", "voting", "ransac"}


def test_zero_error_prior_considers_five(small_world):
    tex, m, poses = small_world
    img = render_view(tex, poses[4], W, H)
    res = localize(m, img, Prior(m[4].position, 0))
    assert res.considered_images == 5
    assert is_success(res.pose, poses[4])


def test_displaced_prior_same_verdict_and_faster(grid_world):
    tex, m = grid_world
    rng = np.random.default_rng(0)
    snap = m.snapshot()
    for _ in range(3):
        c = rng.uniform(250, 500, 2)
        truth = center_to_origin(Pose2D(c[0], c[1], rng.uniform(-math.pi, math.pi)), W, H)
        feats = extract_features(render_view(tex, truth, W, H))
        shift = BENCH_CRITERIA.mm_to_px(100)
        a = rng.uniform(0, 2 * math.pi)
        prior = Prior((c[0] + shift * math.cos(a), c[1] + shift * math.sin(a)), 100)
        glob = [localize_features(snap, feats, W, H) for _ in range(5)]
        local = [localize_features(snap, feats, W, H, prior) for _ in range(5)]
        assert local[0].considered_images == 20 < glob[0].considered_images
        assert is_success(glob[0].pose, truth) == is_success(local[0].pose, truth)
        assert (statistics.median(r.timings["matching"] for r in local)
                < statistics.median(r.timings["matching"] for r in glob))


def test_failure_taxonomy(small_world):
    tex, m, poses = small_world
    with pytest.raises(NoFeatures) as exc:
        localize(m, Image(np.full((H, W), 90, dtype=np.uint8)))
    assert exc.value.reason == "no_features"
    used = {int(d) for r in m.records.values() for d in r.features.descriptors}
    unused = next(v for v in range(2**15) if v not in used)
    lonely = FeatureSet([[80, 60]], [0.0], [unused], 15)
    with pytest.raises(NoVotes) as exc:
        localize_features(m, lonely, W, H)
    assert exc.value.reason == "no_votes" and exc.value.considered_images == len(m)
    # two genuine matches cannot reach three inliers
    rec = m[0]
    two = FeatureSet(rec.features.xy[:2], rec.features.orientation[:2], rec.features.descriptors[:2], 15)
    with pytest.raises(NoConsensus):
        localize_features(m, two, W, H)
    with pytest.raises(ValueError):
        localize(TextureMap(), render_view(tex, poses[0], W, H))


def test_every_call_yields_result_or_one_failure(small_world):
    tex, m, _ = small_world
    rng = np.random.default_rng(4)
    other = SyntheticTexture(seed=99, width=400, height=400)
    for i in range(6):
        src = tex if i % 2 else other
        p = center_to_origin(Pose2D(*rng.uniform(120, 260, 2), rng.uniform(-3, 3)), W, H)
        try:
            res = localize(m, render_view(src, p, W, H))
            assert res.inlier_count >= 3
        except LocalizationError as exc:
            assert type(exc) in (NoFeatures, NoVotes, NoConsensus)


def test_insertion_order_invariance(small_world):
    tex, m, poses = small_world
    rev = TextureMap()
    for rid in reversed(m.ids()):
        r = m[rid]
        rev.add_features(r.features, r.pose, r.width, r.height)
    truth = center_to_origin(Pose2D(200, 150, 1.0), W, H)
    img = render_view(tex, truth, W, H)
    a, b = localize(m, img), localize(rev, img)
    assert a.pose == b.pose and a.inlier_count == b.inlier_count


def test_deterministic(small_world):
    tex, m, _ = small_world
    img = render_view(tex, center_to_origin(Pose2D(210, 140, -2.0), W, H), W, H)
    a, b = localize(m, img), localize(TextureMap.from_bytes(m.to_bytes()), img)
    assert a.pose == b.pose and a.inlier_count == b.inlier_count and a.winning_cell == b.winning_cell


@settings(max_examples=30, deadline=None)
@given(st.floats(-200, 1000), st.floats(-200, 800), st.floats(0, 2000), st.floats(0, 2000))
def test_candidate_sets_nest(grid_world, x, y, e1, e2):
    _, m = grid_world
    lo, hi = sorted((e1, e2))
    small = set(candidate_ids(m.snapshot(), Prior((x, y), lo)))
    large = set(candidate_ids(m.snapshot(), Prior((x, y), hi)))
    assert small <= large

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from gtloc.errors import BitWidthMismatch
from gtloc.features import CompactDescriptor, Feature, FeatureSet, Keypoint
from gtloc.matching import (
    IdentityTable,
    Match,
    build_table,
    hamming_matrix,
    identity_match,
    nn_match_crosscheck,
    nn_match_ratio,
    sample_features,
    sample_indices,
)


def fs_from(values, n=15):
    values = np.asarray(values, dtype=np.uint64)
    k = len(values)
    return FeatureSet(np.zeros((k, 2)), np.zeros(k), values, n)


def brute_identity(q, r):
    return sorted((i, j) for i, a in enumerate(q) for j, b in enumerate(r) if a == b)


def brute_crosscheck(q, r):
    d = [[bin(a ^ b).count("1") for b in r] for a in q]
    out = []
    for i, row in enumerate(d):
        j = min(range(len(r)), key=lambda c: (row[c], c))
        col = [d[k][j] for k in range(len(q))]
        if min(range(len(q)), key=lambda k: (col[k], k)) == i:
            out.append((i, j))
    return out


def brute_ratio(q, r, ratio):
    out = []
    for i, a in enumerate(q):
        d = sorted((bin(a ^ b).count("1"), j) for j, b in enumerate(r))
        if d[0][0] < ratio * d[1][0]:
            out.append((i, d[0][1]))
    return out


def pairs(matches):
    return [(m.query_index, m.ref_index) for m in matches]


def test_build_table_examples():
    assert len(build_table([]).buckets) == 0
    t = build_table(fs_from([5, 5, 9]))
    assert t.buckets == {5: [0, 1], 9: [2]}
    assert t.lookup(7) == []


def test_build_table_load_statistics():
    rng = np.random.default_rng(0)
    t = build_table(fs_from(rng.integers(0, 2**15, 850)))
    # 850 balls in 32768 bins: expected number of occupied bins is 32768 * (1 - (1 - 1/32768)^850)
    expected = 32768 * (1 - (1 - 1 / 32768) ** 850)
    assert abs(len(t.buckets) - expected) < 8
    assert max(len(b) for b in t.buckets.values()) <= 3


def test_build_table_rejects_wide_descriptors():
    with pytest.raises(BitWidthMismatch):
        build_table(fs_from([1, 2], n=15), n=16)
    with pytest.raises(BitWidthMismatch):
        build_table(fs_from([1, 2], n=32), n=32)


@given(st.lists(st.integers(0, 63), max_size=40))
def test_table_indices_roundtrip(values):
    assert build_table(fs_from(values, n=6), n=6).indices() == list(range(len(values)))


def test_identity_match_examples():
    table = IdentityTable(15, {42: [3, 7]})
    assert identity_match(fs_from([1]), table) == []
    assert identity_match(fs_from([42]), table, ref_image_id=4) == [Match(0, 4, 3), Match(0, 4, 7)]


def test_identity_match_accepts_feature_lists():
    feats = [Feature(Keypoint(0, 0, 0), CompactDescriptor(v)) for v in (3, 8, 3)]
    assert pairs(identity_match(feats, build_table(feats))) == [(0, 0), (0, 2), (1, 1), (2, 0), (2, 2)]


@given(st.lists(st.integers(0, 31), max_size=60), st.lists(st.integers(0, 31), max_size=60))
def test_identity_match_equals_brute_force(q, r):
    assert pairs(identity_match(fs_from(q, 5), build_table(fs_from(r, 5), 5))) == brute_identity(q, r)


@given(st.lists(st.integers(0, 15), max_size=30), st.lists(st.integers(0, 15), max_size=30))
def test_identity_match_symmetric(q, r):
    fwd = pairs(identity_match(fs_from(q, 4), build_table(fs_from(r, 4), 4)))
    back = pairs(identity_match(fs_from(r, 4), build_table(fs_from(q, 4), 4)))
    assert sorted(fwd) == sorted((b, a) for a, b in back)


def test_identity_match_width_mismatch():
    with pytest.raises(BitWidthMismatch):
        identity_match(fs_from([1], n=8), build_table(fs_from([1]), 15))


def test_hamming_matrix():
    assert hamming_matrix([0b1011], [0, 0b1000, 0b1111]).tolist() == [[3, 2, 1]]


def test_crosscheck_examples():
    vals = [3, 200, 77, 1024]
    assert pairs(nn_match_crosscheck(fs_from(vals), fs_from(vals))) == [(0, 0), (1, 1), (2, 2), (3, 3)]
    # two references at distance 1: lowest index wins
    assert pairs(nn_match_crosscheck(fs_from([0]), fs_from([1, 2]))) == [(0, 0)]


@given(st.lists(st.integers(0, 255), min_size=1, max_size=25), st.lists(st.integers(0, 255), min_size=1, max_size=25))
def test_crosscheck_equals_oracle_and_is_injective(q, r):
    got = pairs(nn_match_crosscheck(fs_from(q, 8), fs_from(r, 8)))
    assert got == brute_crosscheck(q, r)
    assert len({a for a, _ in got}) == len(got) == len({b for _, b in got})


def test_ratio_examples():
    # distances 0 and 5: 0 < 4.5, kept
    assert pairs(nn_match_ratio(fs_from([0]), fs_from([0, 0b11111]))) == [(0, 0)]
    # equal distances are rejected
    assert nn_match_ratio(fs_from([0]), fs_from([1, 2])) == []
    with pytest.raises(ValueError):
        nn_match_ratio(fs_from([0]), fs_from([1]))


@given(st.lists(st.integers(0, 255), max_size=25), st.lists(st.integers(0, 255), min_size=2, max_size=25),
       st.sampled_from([0.5, 0.8, 0.9, 1.0]))
def test_ratio_equals_oracle(q, r, ratio):
    assert pairs(nn_match_ratio(fs_from(q, 8), fs_from(r, 8), ratio)) == brute_ratio(q, r, ratio)


def test_sample_features_examples():
    small = fs_from(range(30))
    assert sample_features(small, 50) == small
    big = fs_from(range(850))
    a = sample_features(big, 50, seed=3)
    assert a == sample_features(big, 50, seed=3)
    assert len(set(a.descriptors.tolist())) == 50
    assert isinstance(sample_features(list(range(10)), 4), list)


def test_sample_indices_uniform():
    counts = np.zeros(850)
    for seed in range(400):
        counts[sample_indices(850, 50, seed)] += 1
    # chi-square against the uniform expectation 400 * 50 / 850 per index
    p = stats.chisquare(counts).pvalue
    assert p > 1e-3

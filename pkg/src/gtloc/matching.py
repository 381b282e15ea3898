"""Identity matching over compact descriptors, plus nearest-neighbour baselines.

An identity table maps every descriptor value present in a reference image
to the indices of the features that carry it. A query feature is matched to
exactly the reference features with an identical descriptor, so matching one
query feature costs a single dictionary lookup.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from gtloc.errors import BitWidthMismatch
from gtloc.features import MAX_COMPACT_BITS, Feature, FeatureSet, as_feature_set


@dataclass(frozen=True)
class Match:
    query_index: int
    ref_image_id: int
    ref_index: int


class IdentityTable:
    """Sparse descriptor-value -> feature-index table for one reference image."""

    __slots__ = ("n", "buckets", "_size")

    def __init__(self, n: int, buckets: dict[int, list[int]] | None = None):
        self.n = int(n)
        self.buckets: dict[int, list[int]] = {} if buckets is None else buckets
        self._size = sum(len(b) for b in self.buckets.values())

    def __len__(self) -> int:
        """Number of indexed features."""
        return self._size

    def __eq__(self, other):
        if not isinstance(other, IdentityTable):
            return NotImplemented
        return self.n == other.n and self.buckets == other.buckets

    def __repr__(self):
        return f"IdentityTable(n={self.n}, buckets={len(self.buckets)}, features={self._size})"

    def lookup(self, value: int) -> list[int]:
        return self.buckets.get(int(value), [])

    def indices(self) -> list[int]:
        return sorted(i for b in self.buckets.values() for i in b)


def build_table(features: FeatureSet | Sequence[Feature], n: int = 15) -> IdentityTable:
    if not 1 <= n <= MAX_COMPACT_BITS:
        raise BitWidthMismatch(f"identity tables support 1..{MAX_COMPACT_BITS} bits, got {n}")
    if not isinstance(features, FeatureSet) and len(features) == 0:
        return IdentityTable(n)
    fs = as_feature_set(features)
    if len(fs) and fs.n != n:
        raise BitWidthMismatch(f"features carry {fs.n}-bit descriptors, table expects {n}")
    buckets: dict[int, list[int]] = {}
    for i, v in enumerate(fs.descriptors.tolist()):
        buckets.setdefault(v, []).append(i)
    return IdentityTable(n, buckets)


def group_by_descriptor(features: FeatureSet) -> dict[int, np.ndarray]:
    """Descriptor value -> ascending query indices; built once per query image."""
    groups: dict[int, list[int]] = {}
    for i, v in enumerate(features.descriptors.tolist()):
        groups.setdefault(v, []).append(i)
    return {k: np.asarray(v, dtype=np.int64) for k, v in groups.items()}


def identity_match_indices(query_groups: dict[int, np.ndarray], table: IdentityTable):
    """(query indices, ref indices) of all identical-descriptor pairs, sorted by query then ref."""
    common = query_groups.keys() & table.buckets.keys()
    if not common:
        e = np.zeros(0, dtype=np.int64)
        return e, e
    qs, rs = [], []
    for v in common:
        q = query_groups[v]
        r = np.asarray(table.buckets[v], dtype=np.int64)
        qs.append(np.repeat(q, len(r)))
        rs.append(np.tile(r, len(q)))
    q = np.concatenate(qs)
    r = np.concatenate(rs)
    order = np.lexsort((r, q))
    return q[order], r[order]


def identity_match(query: FeatureSet | Sequence[Feature], table: IdentityTable,
                   ref_image_id: int = 0) -> list[Match]:
    fs = as_feature_set(query, table.n)
    if len(fs) and fs.n != table.n:
        raise BitWidthMismatch(f"query has {fs.n}-bit descriptors, table has {table.n}")
    q, r = identity_match_indices(group_by_descriptor(fs), table)
    return [Match(int(a), ref_image_id, int(b)) for a, b in zip(q.tolist(), r.tolist())]


def hamming_matrix(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    return np.bitwise_count(a[:, None] ^ b[None, :]).astype(np.int64)


def nn_match_crosscheck(query, reference, ref_image_id: int = 0) -> list[Match]:
    """Mutual Hamming nearest neighbours; ties go to the lowest index."""
    qf = as_feature_set(query)
    rf = as_feature_set(reference)
    if len(rf) == 0:
        raise ValueError("reference feature list is empty")
    if len(qf) == 0:
        return []
    d = hamming_matrix(qf.descriptors, rf.descriptors)
    nn_q = np.argmin(d, axis=1)
    nn_r = np.argmin(d, axis=0)
    keep = np.flatnonzero(nn_r[nn_q] == np.arange(len(qf)))
    return [Match(int(q), ref_image_id, int(nn_q[q])) for q in keep]


def nn_match_ratio(query, reference, ratio: float = 0.9, ref_image_id: int = 0) -> list[Match]:
    """Nearest neighbour kept when strictly closer than ``ratio`` times the second nearest."""
    qf = as_feature_set(query)
    rf = as_feature_set(reference)
    if len(rf) < 2:
        raise ValueError("ratio test needs at least two reference features")
    if len(qf) == 0:
        return []
    d = hamming_matrix(qf.descriptors, rf.descriptors)
    nn = np.argmin(d, axis=1)
    two = np.partition(d, 1, axis=1)[:, :2]
    keep = np.flatnonzero(two[:, 0] < ratio * two[:, 1])
    return [Match(int(q), ref_image_id, int(nn[q])) for q in keep]


def sample_indices(count: int, k: int = 50, seed: int = 0) -> np.ndarray:
    if count <= k:
        return np.arange(count)
    rng = np.random.default_rng(seed)
    return np.sort(rng.choice(count, size=k, replace=False))


def sample_features(features, k: int = 50, seed: int = 0):
    """Uniform sample without replacement, returned in original order and container type."""
    idx = sample_indices(len(features), k, seed)
    if isinstance(features, FeatureSet):
        return features.select(idx)
    return [features[i] for i in idx]

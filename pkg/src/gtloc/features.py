"""Keypoint detection and compact binary description.

Keypoints are extrema of a difference-of-Gaussians scale space with a
dominant-gradient orientation. Descriptors are triplet comparisons in the
style of LATCH: for every triplet an anchor patch at the keypoint is compared
with two surrounding patches, and the bit is set when the anchor is closer
(in sum of squared differences) to the first one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy import ndimage

from gtloc.errors import OutOfBounds
from gtloc.geometry import wrap_angle, wrap_angles
from gtloc.image import Image

MAX_COMPACT_BITS = 16
MAX_DESCRIPTOR_BITS = 64

_ORI_BINS = 36
_ORI_RADIUS_FACTOR = 3.0
_ORI_SIGMA_FACTOR = 1.5
_IMG_BORDER = 5
_INITIAL_BLUR = 0.5
_SMOOTH_TRUNCATE = 4.0
# base_sigma is expressed for an image upsampled 2x before the pyramid, the
# convention of the common SIFT implementation; the pyramid itself is built
# at native resolution with the equivalent scale.
_SIGMA_UNIT = 2.0


@dataclass(frozen=True)
class DetectorConfig:
    layers_per_octave: int = 11
    contrast_threshold: float = 0.005
    edge_threshold: float = 13.0
    base_sigma: float = 8.5
    max_keypoints: int = 850
    max_octaves: int | None = None

    def __post_init__(self):
        if self.layers_per_octave < 1 or self.max_keypoints < 1:
            raise ValueError("layers_per_octave and max_keypoints must be >= 1")
        if not (self.contrast_threshold > 0 and self.edge_threshold > 0 and self.base_sigma > 0):
            raise ValueError("detector thresholds and sigma must be positive")
        if self.max_octaves is not None and self.max_octaves < 1:
            raise ValueError("max_octaves must be >= 1")


@dataclass(frozen=True)
class Keypoint:
    """Keypoint in image coordinates; response and scale are absent after persistence."""

    x: float
    y: float
    orientation: float
    response: float | None = None
    scale: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "orientation", wrap_angle(float(self.orientation)))


@dataclass(frozen=True)
class CompactDescriptor:
    bits: int
    n: int = 15

    def __post_init__(self):
        if not 1 <= self.n <= MAX_DESCRIPTOR_BITS:
            raise ValueError(f"descriptor width {self.n} out of range")
        if not 0 <= self.bits < (1 << self.n):
            raise ValueError(f"descriptor value {self.bits} does not fit in {self.n} bits")


@dataclass(frozen=True)
class Feature:
    keypoint: Keypoint
    descriptor: CompactDescriptor


@dataclass(frozen=True, eq=False)
class TripletLayout:
    """Ordered triplets of patch-center offsets relative to the keypoint.

    ``offsets[i, 0]`` and ``offsets[i, 1]`` are the (dx, dy) centers of the two
    comparison patches of triplet ``i``; the anchor sits at the keypoint.
    """

    offsets: np.ndarray
    half_size: int = 8
    sigma: float = 2.2

    def __post_init__(self):
        off = np.array(self.offsets, dtype=np.float64).reshape(-1, 2, 2)
        if not 1 <= len(off) <= MAX_DESCRIPTOR_BITS:
            raise ValueError(f"layout must have 1..{MAX_DESCRIPTOR_BITS} triplets")
        if self.half_size < 0 or self.sigma < 0:
            raise ValueError("half_size and sigma must be non-negative")
        off.setflags(write=False)
        object.__setattr__(self, "offsets", off)
        object.__setattr__(self, "half_size", int(self.half_size))
        object.__setattr__(self, "sigma", float(self.sigma))

    @property
    def n(self) -> int:
        return len(self.offsets)

    @property
    def sample_radius(self) -> float:
        """Radius around the keypoint that contains every sampled location, for any rotation."""
        reach = float(np.max(np.hypot(self.offsets[..., 0], self.offsets[..., 1])))
        return reach + self.half_size * math.sqrt(2.0)

    @property
    def support_radius(self) -> float:
        """Radius outside which image content cannot influence the descriptor."""
        return self.sample_radius + 1.0 + _smoothing_radius(self.sigma) * math.sqrt(2.0)

    def prefix(self, n: int) -> "TripletLayout":
        return TripletLayout(self.offsets[:n], self.half_size, self.sigma)

    def __eq__(self, other):
        if not isinstance(other, TripletLayout):
            return NotImplemented
        return (
            self.half_size == other.half_size
            and self.sigma == other.sigma
            and np.array_equal(self.offsets, other.offsets)
        )

    def __hash__(self):
        return hash((self.half_size, self.sigma, self.offsets.tobytes()))


def _smoothing_radius(sigma: float) -> int:
    # matches scipy.ndimage.gaussian_filter's kernel radius
    return int(_SMOOTH_TRUNCATE * sigma + 0.5) if sigma > 0 else 0


def make_triplet_layout(
    n: int = 15,
    seed: int = 0,
    half_size: int = 8,
    sigma: float = 2.2,
    radius: int | None = None,
) -> TripletLayout:
    """Seeded triplet layout with integer offsets.

    Patch centers are drawn inside a ring around the keypoint; both comparison
    patches of a triplet lie at nearly the same distance from the anchor, so
    the bit is not biased towards the nearer patch. Triplets are drawn one
    after another, so a wider layout starts with the narrower one for the same
    seed. Only integer draws are used, which keeps layouts identical across
    platforms.
    """
    if not 1 <= n <= MAX_DESCRIPTOR_BITS:
        raise ValueError(f"n must be in 1..{MAX_DESCRIPTOR_BITS}")
    radius = 2 * half_size if radius is None else int(radius)
    r_min = max(2, half_size // 2)
    if radius <= r_min:
        raise ValueError("radius too small for the patch size")
    rng = np.random.default_rng(seed)
    seen: set[frozenset] = set()
    triplets: list[tuple[tuple[int, int], tuple[int, int]]] = []

    def draw_point() -> tuple[int, int]:
        while True:
            dx, dy = (int(v) for v in rng.integers(-radius, radius + 1, size=2))
            if r_min * r_min <= dx * dx + dy * dy <= radius * radius:
                return dx, dy

    while len(triplets) < n:
        p1 = draw_point()
        p2 = draw_point()
        d1 = p1[0] ** 2 + p1[1] ** 2
        d2 = p2[0] ** 2 + p2[1] ** 2
        # roughly |r1 - r2| <= 2, integer arithmetic only
        if abs(d1 - d2) > 4 * (1 + int(math.isqrt(max(d1, d2)))):
            continue
        if (p1[0] - p2[0]) ** 2 + (p1[1] - p2[1]) ** 2 < r_min * r_min:
            continue
        key = frozenset((p1, p2))
        if key in seen:
            continue
        seen.add(key)
        triplets.append((p1, p2))
    return TripletLayout(np.array(triplets, dtype=np.float64), half_size, sigma)


class FeatureSet:
    """Column storage for the features of one image.

    Behaves like a read-only sequence of :class:`Feature`. Positions and
    orientations are float32 because that is their persisted precision.
    """

    __slots__ = ("xy", "orientation", "descriptors", "n", "response", "scale")

    def __init__(self, xy, orientation, descriptors, n: int, response=None, scale=None):
        self.xy = np.ascontiguousarray(np.asarray(xy, dtype=np.float32).reshape(-1, 2))
        self.orientation = _wrap_float32(orientation).reshape(-1)
        self.descriptors = np.asarray(descriptors, dtype=np.uint64).reshape(-1)
        self.n = int(n)
        k = len(self.xy)
        self.response = None if response is None else np.asarray(response, dtype=np.float32).reshape(k)
        self.scale = None if scale is None else np.asarray(scale, dtype=np.float32).reshape(k)
        if not (len(self.orientation) == len(self.descriptors) == k):
            raise ValueError("feature columns differ in length")
        if not 1 <= self.n <= MAX_DESCRIPTOR_BITS:
            raise ValueError(f"descriptor width {self.n} out of range")
        if self.n < 64 and k and int(self.descriptors.max()) >> self.n:
            raise ValueError(f"descriptor values exceed {self.n} bits")
        for arr in (self.xy, self.orientation, self.descriptors, self.response, self.scale):
            if arr is not None:
                arr.setflags(write=False)

    @classmethod
    def empty(cls, n: int = 15) -> "FeatureSet":
        return cls(np.zeros((0, 2)), np.zeros(0), np.zeros(0, dtype=np.uint64), n)

    @classmethod
    def from_features(cls, features: Iterable[Feature], n: int | None = None) -> "FeatureSet":
        features = list(features)
        if not features:
            return cls.empty(15 if n is None else n)
        widths = {f.descriptor.n for f in features}
        if len(widths) != 1:
            from gtloc.errors import BitWidthMismatch

            raise BitWidthMismatch(f"mixed descriptor widths {sorted(widths)}")
        width = widths.pop()
        kps = [f.keypoint for f in features]
        has_resp = all(k.response is not None for k in kps)
        has_scale = all(k.scale is not None for k in kps)
        return cls(
            [(k.x, k.y) for k in kps],
            [k.orientation for k in kps],
            np.array([f.descriptor.bits for f in features], dtype=np.uint64),
            width,
            [k.response for k in kps] if has_resp else None,
            [k.scale for k in kps] if has_scale else None,
        )

    def __len__(self) -> int:
        return len(self.xy)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return self.select(np.arange(len(self))[i])
        if i < 0:
            i += len(self)
        kp = Keypoint(
            float(self.xy[i, 0]),
            float(self.xy[i, 1]),
            float(self.orientation[i]),
            None if self.response is None else float(self.response[i]),
            None if self.scale is None else float(self.scale[i]),
        )
        return Feature(kp, CompactDescriptor(int(self.descriptors[i]), self.n))

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def __eq__(self, other):
        if not isinstance(other, FeatureSet):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.xy, other.xy)
            and np.array_equal(self.orientation, other.orientation)
            and np.array_equal(self.descriptors, other.descriptors)
            and _opt_equal(self.response, other.response)
            and _opt_equal(self.scale, other.scale)
        )

    def __repr__(self):
        return f"FeatureSet(len={len(self)}, n={self.n})"

    def select(self, idx) -> "FeatureSet":
        idx = np.asarray(idx, dtype=np.int64)
        return FeatureSet(
            self.xy[idx], self.orientation[idx], self.descriptors[idx], self.n,
            None if self.response is None else self.response[idx],
            None if self.scale is None else self.scale[idx],
        )

    def persisted(self) -> "FeatureSet":
        """Copy holding only what the map file stores (position, orientation, descriptor)."""
        return FeatureSet(self.xy, self.orientation, self.descriptors, self.n)


def _opt_equal(a, b) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return np.array_equal(a, b)


_F32_PI = np.float32(np.pi)
_F32_BELOW_PI = np.nextafter(_F32_PI, np.float32(0))


def _wrap_float32(a) -> np.ndarray:
    w = wrap_angles(np.asarray(a, dtype=np.float64)).astype(np.float32)
    # float32(pi) is slightly above pi; keep values strictly inside the interval
    w = np.where(w.astype(np.float64) > np.pi, _F32_BELOW_PI, w)
    w = np.where(w.astype(np.float64) <= -np.pi, -_F32_BELOW_PI, w)
    return w.astype(np.float32)


def as_feature_set(features, n: int | None = None) -> FeatureSet:
    if isinstance(features, FeatureSet):
        return features
    return FeatureSet.from_features(features, n)


# ---------------------------------------------------------------------------
# detection


@dataclass
class _Candidates:
    x: np.ndarray
    y: np.ndarray
    orientation: np.ndarray
    response: np.ndarray
    scale: np.ndarray


def _num_octaves(h: int, w: int, cfg: DetectorConfig) -> int:
    count = 0
    size = min(h, w)
    limit = max(16.0, 4.0 * cfg.base_sigma / _SIGMA_UNIT)
    while size >= limit:
        count += 1
        size //= 2
        if cfg.max_octaves is not None and count >= cfg.max_octaves:
            break
    return max(count, 1)


def _downsample(img: np.ndarray) -> np.ndarray:
    h, w = (img.shape[0] // 2) * 2, (img.shape[1] // 2) * 2
    img = img[:h, :w]
    return 0.25 * (img[0::2, 0::2] + img[1::2, 0::2] + img[0::2, 1::2] + img[1::2, 1::2])


def _extrema_mask(dog: np.ndarray, threshold: float) -> np.ndarray:
    """Points that are >= (or <=) all 26 neighbours in scale space, with |value| > threshold.

    The first and last scale and the outermost pixel ring are never extrema.
    """
    def neighbourhood(reduce):
        a = reduce(reduce(dog[:-2], dog[1:-1]), dog[2:])
        a = reduce(reduce(a[:, :-2], a[:, 1:-1]), a[:, 2:])
        return reduce(reduce(a[:, :, :-2], a[:, :, 1:-1]), a[:, :, 2:])

    core = dog[1:-1, 1:-1, 1:-1]
    inner = ((core >= neighbourhood(np.maximum)) | (core <= neighbourhood(np.minimum))) & (np.abs(core) > threshold)
    mask = np.zeros(dog.shape, dtype=bool)
    mask[1:-1, 1:-1, 1:-1] = inner
    return mask


def _orientation_histogram(mag, ang, x: int, y: int, sigma_oct: float) -> float:
    h, w = mag.shape
    radius = int(round(_ORI_RADIUS_FACTOR * _ORI_SIGMA_FACTOR * sigma_oct))
    y0, y1 = max(1, y - radius), min(h - 1, y + radius + 1)
    x0, x1 = max(1, x - radius), min(w - 1, x + radius + 1)
    m = mag[y0:y1, x0:x1]
    a = ang[y0:y1, x0:x1]
    yy, xx = np.mgrid[y0 - y:y1 - y, x0 - x:x1 - x]
    r2 = xx * xx + yy * yy
    wsig = _ORI_SIGMA_FACTOR * sigma_oct
    weight = np.exp(-r2 / (2.0 * wsig * wsig)) * m * (r2 <= radius * radius)
    bins = np.floor((a + np.pi) * (_ORI_BINS / (2 * np.pi))).astype(np.int64) % _ORI_BINS
    hist = np.bincount(bins.ravel(), weights=weight.ravel(), minlength=_ORI_BINS)
    # circular [1 4 6 4 1] / 16 smoothing
    hist = (
        6 * hist
        + 4 * (np.roll(hist, 1) + np.roll(hist, -1))
        + (np.roll(hist, 2) + np.roll(hist, -2))
    ) / 16.0
    k = int(np.argmax(hist))
    left, right = hist[(k - 1) % _ORI_BINS], hist[(k + 1) % _ORI_BINS]
    denom = left - 2 * hist[k] + right
    offset = 0.5 * (left - right) / denom if denom != 0 else 0.0
    return (k + 0.5 + offset) * (2 * np.pi / _ORI_BINS) - np.pi


def _detect_all(img: Image, cfg: DetectorConfig) -> _Candidates:
    """Every keypoint passing the detector tests, unsorted and untruncated."""
    base = img.pixels.astype(np.float32) / 255.0
    S = cfg.layers_per_octave
    n_oct = _num_octaves(img.height, img.width, cfg)
    sigmas = cfg.base_sigma / _SIGMA_UNIT * 2.0 ** (np.arange(S + 3) / S)
    prelim = 0.5 * cfg.contrast_threshold / S

    out_x, out_y, out_o, out_r, out_s = [], [], [], [], []
    g0 = ndimage.gaussian_filter(
        base, math.sqrt(max(sigmas[0] ** 2 - _INITIAL_BLUR**2, 0.01)), mode="mirror"
    )
    for o in range(n_oct):
        if o > 0:
            g0 = _downsample(gauss[S])
        gauss = [g0]
        for s in range(1, S + 3):
            inc = math.sqrt(sigmas[s] ** 2 - sigmas[s - 1] ** 2)
            gauss.append(ndimage.gaussian_filter(gauss[-1], inc, mode="mirror"))
        dog = np.stack([gauss[s + 1] - gauss[s] for s in range(S + 2)])
        oh, ow = dog.shape[1:]
        if oh <= 2 * _IMG_BORDER + 2 or ow <= 2 * _IMG_BORDER + 2:
            break

        ext = _extrema_mask(dog, prelim)
        ext[:, :_IMG_BORDER] = ext[:, -_IMG_BORDER:] = False
        ext[:, :, :_IMG_BORDER] = ext[:, :, -_IMG_BORDER:] = False
        ss, yy, xx = np.nonzero(ext)
        if len(ss) == 0:
            continue

        D = dog
        v = D[ss, yy, xx]
        dx = 0.5 * (D[ss, yy, xx + 1] - D[ss, yy, xx - 1])
        dy = 0.5 * (D[ss, yy + 1, xx] - D[ss, yy - 1, xx])
        dxx = D[ss, yy, xx + 1] + D[ss, yy, xx - 1] - 2 * v
        dyy = D[ss, yy + 1, xx] + D[ss, yy - 1, xx] - 2 * v
        dxy = 0.25 * (
            D[ss, yy + 1, xx + 1] - D[ss, yy + 1, xx - 1] - D[ss, yy - 1, xx + 1] + D[ss, yy - 1, xx - 1]
        )
        det = dxx * dyy - dxy * dxy
        tr = dxx + dyy
        with np.errstate(divide="ignore", invalid="ignore"):
            ox = -(dyy * dx - dxy * dy) / det
            oy = -(dxx * dy - dxy * dx) / det
        contrast = v + 0.5 * (dx * ox + dy * oy)
        keep = (
            (det > 0)
            & (tr * tr * cfg.edge_threshold < (cfg.edge_threshold + 1) ** 2 * det)
            & (np.abs(ox) <= 1.0)
            & (np.abs(oy) <= 1.0)
            & (np.abs(contrast) * S >= cfg.contrast_threshold)
        )
        if not np.any(keep):
            continue
        ss, yy, xx = ss[keep], yy[keep], xx[keep]
        ox, oy, contrast = ox[keep], oy[keep], contrast[keep]

        step = 2.0**o
        shift = (step - 1.0) / 2.0
        oris = np.empty(len(ss))
        grads: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        for i, (s, y, x) in enumerate(zip(ss, yy, xx)):
            if s not in grads:
                g = gauss[s].astype(np.float64)
                gx = np.zeros_like(g)
                gy = np.zeros_like(g)
                gx[:, 1:-1] = g[:, 2:] - g[:, :-2]
                gy[1:-1, :] = g[2:, :] - g[:-2, :]
                grads[s] = (np.hypot(gx, gy), np.arctan2(gy, gx))
            mag, ang = grads[s]
            oris[i] = _orientation_histogram(mag, ang, int(x), int(y), sigmas[s])

        out_x.append((xx + ox) * step + shift)
        out_y.append((yy + oy) * step + shift)
        out_o.append(oris)
        out_r.append(np.abs(contrast))
        out_s.append(sigmas[ss] * step)

    if not out_x:
        e = np.zeros(0)
        return _Candidates(e, e, e, e, e)
    cand = _Candidates(*(np.concatenate(a).astype(np.float64) for a in (out_x, out_y, out_o, out_r, out_s)))
    inside = (cand.x >= 0) & (cand.x <= img.width - 1) & (cand.y >= 0) & (cand.y <= img.height - 1)
    if not np.all(inside):
        cand = _Candidates(*(a[inside] for a in (cand.x, cand.y, cand.orientation, cand.response, cand.scale)))
    return cand


def _sorted_order(c: _Candidates) -> np.ndarray:
    # response descending, then position for a total order
    return np.lexsort((c.x, c.y, c.scale, -c.response))


def detect_keypoints(img: Image, cfg: DetectorConfig = DetectorConfig()) -> list[Keypoint]:
    """DoG keypoints sorted by response (descending), at most ``cfg.max_keypoints``."""
    c = _detect_all(img, cfg)
    order = _sorted_order(c)[: cfg.max_keypoints]
    ori = _wrap_float32(c.orientation[order]) if len(order) else np.zeros(0)
    return [
        Keypoint(float(c.x[i]), float(c.y[i]), float(o), float(c.response[i]), float(c.scale[i]))
        for i, o in zip(order, ori)
    ]


# ---------------------------------------------------------------------------
# description


def smooth_for_description(img: Image, layout: TripletLayout) -> np.ndarray:
    px = img.pixels.astype(np.float64)
    if layout.sigma <= 0:
        return px
    return ndimage.gaussian_filter(px, layout.sigma, mode="mirror", truncate=_SMOOTH_TRUNCATE)


def window_fits(width: int, height: int, x, y, layout: TripletLayout) -> np.ndarray:
    r = layout.sample_radius
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    return (x - r >= 0) & (x + r <= width - 1) & (y - r >= 0) & (y + r <= height - 1)


def describe_batch(smoothed: np.ndarray, x, y, orientation, layout: TripletLayout,
                   chunk: int = 128) -> np.ndarray:
    """Descriptor values (uint64) for many keypoints on a pre-smoothed image."""
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    ori = np.asarray(orientation, dtype=np.float64).reshape(-1)
    n = layout.n
    hs = layout.half_size
    g = np.arange(-hs, hs + 1, dtype=np.float64)
    gy, gx = np.meshgrid(g, g, indexing="ij")
    grid = np.stack([gx.ravel(), gy.ravel()], axis=1)  # (P, 2)
    centers = np.concatenate([np.zeros((1, 2)), layout.offsets[:, 0], layout.offsets[:, 1]])  # (1+2n, 2)
    local = centers[:, None, :] + grid[None, :, :]  # (C, P, 2)
    weights = np.left_shift(np.uint64(1), np.arange(n, dtype=np.uint64))

    out = np.zeros(len(x), dtype=np.uint64)
    for lo in range(0, len(x), chunk):
        hi = min(len(x), lo + chunk)
        c = np.cos(ori[lo:hi])[:, None, None]
        s = np.sin(ori[lo:hi])[:, None, None]
        lx, ly = local[None, ..., 0], local[None, ..., 1]
        wx = x[lo:hi, None, None] + c * lx - s * ly
        wy = y[lo:hi, None, None] + s * lx + c * ly
        vals = ndimage.map_coordinates(smoothed, [wy.ravel(), wx.ravel()], order=1, mode="nearest")
        vals = vals.reshape(hi - lo, 1 + 2 * n, -1)
        anchor = vals[:, :1]
        ssd1 = np.sum((vals[:, 1:n + 1] - anchor) ** 2, axis=2)
        ssd2 = np.sum((vals[:, n + 1:] - anchor) ** 2, axis=2)
        bits = (ssd1 < ssd2).astype(np.uint64)
        out[lo:hi] = np.sum(bits * weights[None, :], axis=1, dtype=np.uint64)
    return out


def describe(img: Image, kp: Keypoint, layout: TripletLayout) -> CompactDescriptor:
    """Descriptor of one keypoint; raises :class:`OutOfBounds` if its rotated window leaves the image."""
    if not window_fits(img.width, img.height, kp.x, kp.y, layout):
        raise OutOfBounds(f"descriptor window at ({kp.x:.1f}, {kp.y:.1f}) exits the image")
    smoothed = smooth_for_description(img, layout)
    bits = describe_batch(smoothed, [kp.x], [kp.y], [kp.orientation], layout)
    return CompactDescriptor(int(bits[0]), layout.n)


def extract_features(
    img: Image,
    cfg: DetectorConfig = DetectorConfig(),
    layout: TripletLayout | None = None,
) -> FeatureSet:
    """Detect, drop keypoints whose windows overflow the border, keep the strongest, describe."""
    layout = make_triplet_layout() if layout is None else layout
    c = _detect_all(img, cfg)
    order = _sorted_order(c)
    order = order[window_fits(img.width, img.height, c.x[order], c.y[order], layout)]
    order = order[: cfg.max_keypoints]
    if len(order) == 0:
        return FeatureSet.empty(layout.n)
    x32 = c.x[order].astype(np.float32)
    y32 = c.y[order].astype(np.float32)
    o32 = _wrap_float32(c.orientation[order])
    # describe at the stored (float32) pose so a re-description of loaded features agrees
    desc = describe_batch(smooth_for_description(img, layout), x32, y32, o32, layout)
    return FeatureSet(
        np.stack([x32, y32], axis=1), o32, desc, layout.n,
        c.response[order], c.scale[order],
    )

"""Seeded value-noise ground textures and camera-view rendering."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from gtloc.errors import OutOfBounds
from gtloc.geometry import Pose2D
from gtloc.image import Image

PROFILES = ("rich", "smooth")

# (x stretch of the noise lattice, extra blur sigma, contrast) per profile
_PROFILE_SHAPE = {
    "rich": (1.0, 0.0, 1.0),
    "smooth": (8.0, 2.0, 0.12),
}


@dataclass(frozen=True)
class SyntheticTexture:
    """Procedural texture description; pixel values are generated on demand and cached.

    ``rich`` mixes isotropic noise octaves with strong contrast (asphalt-like).
    ``smooth`` stretches the noise along x and damps fine detail, giving
    grain-like structure with poor keypoint repeatability (wood-like).
    """

    seed: int = 0
    width: int = 2048
    height: int = 2048
    octaves: int = 4
    persistence: float = 0.6
    profile: str = "rich"
    base_cell: float = 24.0

    def __post_init__(self):
        if self.profile not in PROFILES:
            raise ValueError(f"profile must be one of {PROFILES}")
        if not 0 < self.persistence < 1:
            raise ValueError("persistence must be in (0, 1)")
        if self.width < 2 or self.height < 2 or self.octaves < 1:
            raise ValueError("texture must be at least 2x2 with one octave")

    @property
    def values(self) -> np.ndarray:
        """uint8 array of shape (height, width)."""
        return _generate(self)


def _fade(t):
    return t * t * t * (t * (t * 6 - 15) + 10)


def _value_noise(rng, height: int, width: int, cell_x: float, cell_y: float) -> np.ndarray:
    gh = int(math.ceil(height / cell_y)) + 2
    gw = int(math.ceil(width / cell_x)) + 2
    lattice = rng.random((gh, gw))
    ys = np.arange(height) / cell_y
    xs = np.arange(width) / cell_x
    yi = np.floor(ys).astype(np.int64)
    xi = np.floor(xs).astype(np.int64)
    fy = _fade(ys - yi)[:, None]
    fx = _fade(xs - xi)[None, :]
    v00 = lattice[yi][:, xi]
    v01 = lattice[yi][:, xi + 1]
    v10 = lattice[yi + 1][:, xi]
    v11 = lattice[yi + 1][:, xi + 1]
    top = v00 + (v01 - v00) * fx
    bot = v10 + (v11 - v10) * fx
    return top + (bot - top) * fy


@functools.lru_cache(maxsize=8)
def _generate(tex: SyntheticTexture) -> np.ndarray:
    rng = np.random.default_rng(tex.seed)
    acc = np.zeros((tex.height, tex.width))
    amp, total = 1.0, 0.0
    stretch, blur, contrast = _PROFILE_SHAPE[tex.profile]
    for k in range(tex.octaves):
        cell = tex.base_cell / 2.0**k
        acc += amp * _value_noise(rng, tex.height, tex.width, max(cell * stretch, 1.0), max(cell, 1.0))
        total += amp
        amp *= tex.persistence
    acc /= total
    if blur > 0:
        acc = ndimage.gaussian_filter(acc, blur)
    # stretch to the full 8-bit range using robust percentiles
    lo, hi = np.percentile(acc, [0.5, 99.5])
    out = 127.5 + (acc - 0.5 * (lo + hi)) / max(hi - lo, 1e-9) * 255.0 * contrast
    out = np.clip(np.rint(out), 0, 255).astype(np.uint8)
    out.setflags(write=False)
    return out


def footprint(pose: Pose2D, width: int, height: int) -> np.ndarray:
    """Global-frame corners (4, 2) of a width x height view at ``pose``."""
    corners = np.array([[0, 0], [width - 1, 0], [width - 1, height - 1], [0, height - 1]], dtype=np.float64)
    return pose.apply(corners)


def view_fits(tex: SyntheticTexture, pose: Pose2D, width: int, height: int) -> bool:
    c = footprint(pose, width, height)
    return bool(
        np.all(c[:, 0] >= 0) and np.all(c[:, 0] <= tex.width - 1)
        and np.all(c[:, 1] >= 0) and np.all(c[:, 1] <= tex.height - 1)
    )


def render_view(tex: SyntheticTexture, pose: Pose2D, width: int, height: int) -> Image:
    """Image seen by a camera whose upper-left pixel sits at ``pose``; bilinear sampling."""
    if not view_fits(tex, pose, width, height):
        raise OutOfBounds(f"view at {pose} leaves the {tex.width}x{tex.height} texture")
    ys, xs = np.mgrid[0:height, 0:width].astype(np.float64)
    g = pose.apply(np.stack([xs, ys], axis=-1))
    vals = ndimage.map_coordinates(
        tex.values.astype(np.float64), [g[..., 1].ravel(), g[..., 0].ravel()], order=1, mode="nearest"
    )
    return Image(np.clip(np.rint(vals), 0, 255).astype(np.uint8).reshape(height, width))

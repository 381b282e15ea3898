"""8-bit grayscale images and binary PGM (P5) I/O."""

from __future__ import annotations

import io
import os
from dataclasses import dataclass

import numpy as np

from gtloc.errors import FormatError


@dataclass(frozen=True, eq=False)
class Image:
    """Row-major 8-bit grayscale image. ``pixels`` has shape (height, width)."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2 or px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError(f"expected a non-empty 2D array, got shape {px.shape}")
        if px.dtype != np.uint8:
            px = np.clip(np.rint(px), 0, 255).astype(np.uint8)
        px = np.ascontiguousarray(px)
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def data(self) -> bytes:
        return self.pixels.tobytes()

    @classmethod
    def from_bytes(cls, width: int, height: int, data: bytes) -> "Image":
        if len(data) != width * height:
            raise ValueError("data length must equal width * height")
        return cls(np.frombuffer(data, dtype=np.uint8).reshape(height, width))

    def __eq__(self, other):
        if not isinstance(other, Image):
            return NotImplemented
        return np.array_equal(self.pixels, other.pixels)

    def __hash__(self):
        return hash((self.width, self.height, self.data))


def encode_pgm(img: Image) -> bytes:
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + img.data


def decode_pgm(buf: bytes) -> Image:
    stream = io.BytesIO(buf)
    tokens: list[bytes] = []
    while len(tokens) < 4:
        ch = stream.read(1)
        if not ch:
            raise FormatError("truncated PGM header")
        if ch == b"#":
            stream.readline()
            continue
        if ch.isspace():
            continue
        tok = ch
        while True:
            ch = stream.read(1)
            if not ch or ch.isspace():
                break
            tok += ch
        tokens.append(tok)
    if tokens[0] != b"P5":
        raise FormatError(f"not a binary PGM (magic {tokens[0]!r})")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError as exc:
        raise FormatError("malformed PGM header") from exc
    if width < 1 or height < 1:
        raise FormatError("PGM dimensions must be positive")
    if maxval != 255:
        raise FormatError(f"only 8-bit PGM (maxval 255) is supported, got {maxval}")
    data = stream.read(width * height)
    if len(data) != width * height:
        raise FormatError("truncated PGM pixel data")
    return Image.from_bytes(width, height, data)


def read_pgm(path: str | os.PathLike) -> Image:
    with open(path, "rb") as fh:
        return decode_pgm(fh.read())


def write_pgm(path: str | os.PathLike, img: Image) -> None:
    with open(path, "wb") as fh:
        fh.write(encode_pgm(img))

"""Image container, file I/O and luma/chroma conversion.

Planes are plain 2-D ``float64`` numpy arrays indexed ``[row, col]`` with
values in [0, 1]. A :class:`ColorImage` bundles one or three planes with a
colour-space tag.
"""
from __future__ import annotations

import enum
import os
from dataclasses import dataclass

import cv2
import numpy as np

MIN_SIDE = 3


class ImageError(ValueError):
    """Raised for unreadable, unsupported or malformed images."""


class ColorSpace(str, enum.Enum):
    GRAY = "gray"
    RGB = "rgb"
    YCBCR = "ycbcr"


# BT.601 full range, chroma centred on 0.5
_RGB2YCC = np.array(
    [
        [0.299, 0.587, 0.114],
        [-0.168735892, -0.331264108, 0.5],
        [0.5, -0.418687589, -0.081312411],
    ]
)
_YCC2RGB = np.linalg.inv(_RGB2YCC)


def check_plane(p: np.ndarray, name: str = "plane") -> np.ndarray:
    p = np.asarray(p, dtype=np.float64)
    if p.ndim != 2:
        raise ImageError(f"{name} must be 2-D, got shape {p.shape}")
    if p.shape[0] < MIN_SIDE or p.shape[1] < MIN_SIDE:
        raise ImageError(f"{name} dimensions below minimum {MIN_SIDE}x{MIN_SIDE}: {p.shape}")
    return p


@dataclass(frozen=True)
class ColorImage:
    """H x W x C array (C = 1 or 3) plus colour-space tag."""

    data: np.ndarray
    space: ColorSpace = ColorSpace.GRAY

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim == 2:
            data = data[:, :, None]
        if data.ndim != 3:
            raise ImageError(f"image data must be HxWxC, got shape {data.shape}")
        space = ColorSpace(self.space)
        nch = 1 if space is ColorSpace.GRAY else 3
        if data.shape[2] != nch:
            raise ImageError(f"{space.value} image needs {nch} channel(s), got {data.shape[2]}")
        if data.shape[0] < MIN_SIDE or data.shape[1] < MIN_SIDE:
            raise ImageError(f"dimensions below minimum {MIN_SIDE}x{MIN_SIDE}: {data.shape[:2]}")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "space", space)

    @classmethod
    def gray(cls, plane: np.ndarray) -> "ColorImage":
        return cls(np.asarray(plane, dtype=np.float64)[:, :, None], ColorSpace.GRAY)

    @classmethod
    def rgb(cls, data: np.ndarray) -> "ColorImage":
        return cls(data, ColorSpace.RGB)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape[0], self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def planes(self) -> list[np.ndarray]:
        return [self.data[:, :, c] for c in range(self.data.shape[2])]

    def clamped(self) -> "ColorImage":
        return ColorImage(np.clip(self.data, 0.0, 1.0), self.space)


def rgb_to_ycbcr(img: ColorImage) -> ColorImage:
    if img.space is not ColorSpace.RGB:
        raise ImageError(f"rgb_to_ycbcr expects an RGB image, got {img.space.value}")
    ycc = img.data @ _RGB2YCC.T
    ycc[:, :, 1:] += 0.5
    return ColorImage(ycc, ColorSpace.YCBCR)


def ycbcr_to_rgb(img: ColorImage) -> ColorImage:
    if img.space is not ColorSpace.YCBCR:
        raise ImageError(f"ycbcr_to_rgb expects a YCbCr image, got {img.space.value}")
    ycc = img.data.copy()
    ycc[:, :, 1:] -= 0.5
    return ColorImage(ycc @ _YCC2RGB.T, ColorSpace.RGB)


def luma(img: ColorImage) -> np.ndarray:
    """Luminance plane; gray images pass through unchanged."""
    if img.space is ColorSpace.GRAY:
        return np.array(img.data[:, :, 0])
    if img.space is ColorSpace.YCBCR:
        return np.array(img.data[:, :, 0])
    return img.data @ _RGB2YCC[0]


def load_image(path: str | os.PathLike) -> ColorImage:
    """Read a PNG/PGM/PPM file (8 or 16 bit) into [0, 1] floats."""
    path = os.fspath(path)
    if not os.path.isfile(path):
        raise ImageError(f"cannot read {path!r}: no such file")
    ext = os.path.splitext(path)[1].lower()
    if ext not in (".png", ".pgm", ".ppm", ".pnm"):
        raise ImageError(f"unsupported format {ext!r} (expected PNG, PGM or PPM)")
    raw = cv2.imread(path, cv2.IMREAD_UNCHANGED)
    if raw is None:
        raise ImageError(f"cannot decode {path!r}")
    if raw.dtype == np.uint8:
        scale = 255.0
    elif raw.dtype == np.uint16:
        scale = 65535.0
    else:
        raise ImageError(f"unsupported sample type {raw.dtype} in {path!r}")

    if raw.ndim == 3 and raw.shape[2] == 4:
        raw = raw[:, :, :3]  # alpha ignored
    if raw.ndim == 3 and raw.shape[2] == 1:
        raw = raw[:, :, 0]
    if raw.ndim == 2:
        data, space = raw[:, :, None], ColorSpace.GRAY
    elif raw.ndim == 3 and raw.shape[2] == 3:
        data, space = raw[:, :, ::-1], ColorSpace.RGB
    else:
        raise ImageError(f"unsupported channel layout {raw.shape} in {path!r}")
    if data.shape[0] < MIN_SIDE or data.shape[1] < MIN_SIDE:
        raise ImageError(f"{path!r}: dimensions below minimum {MIN_SIDE}x{MIN_SIDE}")
    return ColorImage(data.astype(np.float64) / scale, space)


def to_uint8(data: np.ndarray) -> np.ndarray:
    return np.floor(np.clip(data, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)


def save_image(img: ColorImage | np.ndarray, path: str | os.PathLike) -> None:
    """Write an 8-bit PNG. Values are clamped to [0, 1] and rounded."""
    if not isinstance(img, ColorImage):
        img = ColorImage.gray(img)
    if img.space is ColorSpace.YCBCR:
        img = ycbcr_to_rgb(img)
    out = to_uint8(img.data)
    out = out[:, :, 0] if img.space is ColorSpace.GRAY else out[:, :, ::-1]
    path = os.fspath(path)
    parent = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(parent):
        raise ImageError(f"cannot write {path!r}: directory does not exist")
    ok = cv2.imwrite(path, np.ascontiguousarray(out))
    if not ok:
        raise ImageError(f"cannot write {path!r}")

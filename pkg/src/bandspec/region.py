"""Rasterised classification of a rectangular window of the complex plane."""

from __future__ import annotations

import io
import json
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from . import __version__
from .operator import OperatorParams, as_space
from .spectrum import DEFAULT_TOL, membership_ratio_array


class Code(IntEnum):
    RESOLVENT = 0
    RESIDUAL = 1
    CONTINUOUS_BOUNDARY = 2
    UNRESOLVED_R1R2 = 3


PGM_LEVEL = {
    Code.RESOLVENT: 255,
    Code.CONTINUOUS_BOUNDARY: 128,
    Code.RESIDUAL: 64,
    Code.UNRESOLVED_R1R2: 0,
}

MAX_CELLS = 10 ** 8


@dataclass(frozen=True)
class Window:
    re_min: float
    re_max: float
    im_min: float
    im_max: float
    nx: int
    ny: int

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("window must satisfy re_min < re_max and im_min < im_max")
        if self.nx < 1 or self.ny < 1:
            raise ValueError("grid resolution must be positive")
        if self.nx * self.ny > MAX_CELLS:
            raise ValueError(f"grid has more than {MAX_CELLS} cells")

    def centers(self) -> np.ndarray:
        """Cell-center lambdas, shape (ny, nx); row 0 is the top (im_max) row."""
        dx = (self.re_max - self.re_min) / self.nx
        dy = (self.im_max - self.im_min) / self.ny
        re = self.re_min + (np.arange(self.nx) + 0.5) * dx
        im = self.im_max - (np.arange(self.ny) + 0.5) * dy
        return re[None, :] + 1j * im[:, None]


@dataclass(frozen=True)
class RegionGrid:
    window: Window
    codes: np.ndarray   # (ny, nx) uint8 of Code values
    ratios: np.ndarray  # (ny, nx) float
    params: OperatorParams
    p: float
    tol: float

    @property
    def meta(self) -> dict:
        return {
            "params": self.params.as_dict(original=True),
            "p": self.p,
            "tol": self.tol,
            "version": __version__,
        }

    def membership(self) -> np.ndarray:
        return self.codes != Code.RESOLVENT


def classify_codes(params: OperatorParams, space, lam: np.ndarray, tol: float = DEFAULT_TOL
                   ) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised cell codes and membership ratios for an array of lambdas."""
    space = as_space(space)
    lam = np.asarray(lam, dtype=complex)
    ratio = membership_ratio_array(params, lam)
    codes = np.full(lam.shape, Code.RESIDUAL, dtype=np.uint8)
    if not space.is_l1:
        codes[np.abs(ratio - 1.0) <= tol] = Code.CONTINUOUS_BOUNDARY
    codes[ratio > 1.0 + tol] = Code.RESOLVENT
    codes[(lam == params.r1) | (lam == params.r2)] = Code.UNRESOLVED_R1R2
    return codes, ratio


def scan_region(params: OperatorParams, space, window: Window, tol: float = DEFAULT_TOL) -> RegionGrid:
    space = as_space(space)
    codes, ratio = classify_codes(params, space, window.centers(), tol)
    return RegionGrid(window, codes, ratio, params, space.p, tol)


def _csv(grid: RegionGrid) -> bytes:
    buf = io.StringIO()
    buf.write("re,im,code,ratio\n")
    lam = grid.window.centers()
    for j in range(grid.window.ny):
        for i in range(grid.window.nx):
            z = complex(lam[j, i])
            code = Code(grid.codes[j, i]).name
            buf.write(f"{z.real!r},{z.imag!r},{code},{float(grid.ratios[j, i])!r}\n")
    return buf.getvalue().encode("ascii")


def _json(grid: RegionGrid) -> bytes:
    w = grid.window
    doc = {
        "meta": grid.meta,
        "window": {"re_min": w.re_min, "re_max": w.re_max, "im_min": w.im_min,
                   "im_max": w.im_max, "nx": w.nx, "ny": w.ny},
        "codes": [Code(c).name for c in grid.codes.reshape(-1)],
    }
    return (json.dumps(doc, sort_keys=True) + "\n").encode("ascii")


def _pgm(grid: RegionGrid) -> bytes:
    lut = np.zeros(len(Code), dtype=np.uint8)
    for code, level in PGM_LEVEL.items():
        lut[code] = level
    header = f"P5\n{grid.window.nx} {grid.window.ny}\n255\n".encode("ascii")
    return header + lut[grid.codes].tobytes()


_EMITTERS = {"csv": _csv, "json": _json, "pgm": _pgm}
FORMATS = tuple(_EMITTERS)


def emit(grid: RegionGrid, fmt: str) -> bytes:
    """Serialise a grid as csv, json or binary pgm (rows top to bottom, im_max first)."""
    try:
        return _EMITTERS[fmt](grid)
    except KeyError:
        raise ValueError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}") from None

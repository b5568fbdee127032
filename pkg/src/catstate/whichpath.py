"""Double-slit screen pattern with a which-path detector of adjustable resolution.

The detector tags slit ``j`` with apparatus state ``|d_j>``; only the overlap
``c = <d1|d2>`` enters the screen pattern. ``c = 1`` leaves the fringes intact,
``c = 0`` (orthogonal tags) removes them.

Slit waves are equal-amplitude paraxial (Fresnel) spherical waves from slits
at ``y = +-d/2``: ``psi_j(x) = exp(i k (D + (x - y_j)^2 / (2D))) / sqrt(2)``.
The phase difference is then exactly linear in ``x`` with fringe period
``lambda * D / d``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

NEGATIVE_TOL = 1e-12


@dataclass(frozen=True)
class SlitGeometry:
    slit_separation: float
    wavelength: float
    screen_distance: float
    x_points: np.ndarray

    def __post_init__(self):
        for name in ("slit_separation", "wavelength", "screen_distance"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive, got {v!r}")
        x = np.array(self.x_points, dtype=float).reshape(-1)
        if x.size == 0:
            raise ValueError("x_points must be nonempty")
        if not np.all(np.isfinite(x)) or np.any(np.diff(x) <= 0):
            raise ValueError("x_points must be finite and strictly increasing")
        x.flags.writeable = False
        object.__setattr__(self, "x_points", x)

    @property
    def fringe_period(self) -> float:
        return self.wavelength * self.screen_distance / self.slit_separation

    @classmethod
    def central_fringes(
        cls,
        slit_separation: float = 1e-4,
        wavelength: float = 5e-7,
        screen_distance: float = 1.0,
        periods: int = 3,
        samples_per_period: int = 4096,
    ) -> "SlitGeometry":
        """Screen sampled over ``periods`` whole fringes centred on ``x = 0``.

        The right endpoint is excluded so every period carries the same
        number of samples.
        """
        period = wavelength * screen_distance / slit_separation
        n = periods * samples_per_period
        x = (np.arange(n) - n / 2) * (period / samples_per_period)
        return cls(slit_separation, wavelength, screen_distance, x)


@dataclass(frozen=True)
class WhichPathOverlap:
    c: complex

    def __post_init__(self):
        c = complex(self.c)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise ValueError("overlap must be finite")
        if abs(c) > 1 + 1e-12:
            raise ValueError(f"|c| must not exceed 1, got {abs(c):.15g}")
        object.__setattr__(self, "c", c)


def slit_waves(g: SlitGeometry) -> tuple[np.ndarray, np.ndarray]:
    k = 2 * math.pi / g.wavelength
    x, D = g.x_points, g.screen_distance
    waves = []
    for y in (g.slit_separation / 2, -g.slit_separation / 2):
        # global phase k*D omitted; at optical k it would eat ~9 digits of phase
        excess = (x - y) ** 2 / (2 * D)
        waves.append(np.exp(1j * k * excess) / math.sqrt(2))
    return waves[0], waves[1]


def _as_overlap(w) -> WhichPathOverlap:
    return w if isinstance(w, WhichPathOverlap) else WhichPathOverlap(w)


def screen_intensity(g: SlitGeometry, w: WhichPathOverlap, normalize: bool = True) -> np.ndarray:
    """Screen pattern ``|psi1|^2 + |psi2|^2 + 2 Re(psi1 conj(psi2) conj(c))``.

    Normalized to unit mean over ``g.x_points`` unless ``normalize`` is False.
    """
    c = _as_overlap(w).c
    psi1, psi2 = slit_waves(g)
    intensity = np.abs(psi1) ** 2 + np.abs(psi2) ** 2 + 2 * np.real(psi1 * np.conj(psi2) * np.conj(c))
    if np.min(intensity) < -NEGATIVE_TOL:
        raise ArithmeticError("negative intensity")
    if normalize:
        intensity = intensity / intensity.mean()
    return intensity


def single_slit_intensity(g: SlitGeometry, slit: int, normalize: bool = True) -> np.ndarray:
    """Pattern with only slit ``slit`` (1 or 2) open."""
    if slit not in (1, 2):
        raise ValueError("slit must be 1 or 2")
    intensity = np.abs(slit_waves(g)[slit - 1]) ** 2
    return intensity / intensity.mean() if normalize else intensity


def visibility(intensities: Sequence[float]) -> float:
    i = np.asarray(intensities, dtype=float)
    if i.size == 0:
        raise ValueError("intensity sequence is empty")
    hi, lo = float(i.max()), float(i.min())
    if hi + lo <= 0.0:
        raise ValueError("intensity is identically zero")
    return (hi - lo) / (hi + lo)

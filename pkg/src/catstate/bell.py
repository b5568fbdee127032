"""CHSH correlations with dichotomic spin-like observables on each qubit.

``max_chsh`` searches the full Bloch sphere for all four settings: a coarse
grid pass, then coordinate descent with step halving.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import qlinalg as ql
from .qlinalg import DensityOperator

PAULI_X = ql.as_matrix([[0, 1], [1, 0]])
PAULI_Y = ql.as_matrix([[0, -1j], [1j, 0]])
PAULI_Z = ql.as_matrix([[1, 0], [0, -1]])

TWO_PI = 2 * math.pi
TSIRELSON = 2 * math.sqrt(2)

COARSE_STEP = math.pi / 12
REFINE_ITERS = 200
MIN_STEP = 1e-6


@dataclass(frozen=True)
class MeasurementSetting:
    theta: float
    az: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.theta) and 0.0 <= self.theta <= math.pi):
            raise ValueError(f"theta must lie in [0, pi], got {self.theta!r}")
        if not (math.isfinite(self.az) and 0.0 <= self.az < TWO_PI):
            raise ValueError(f"az must lie in [0, 2pi), got {self.az!r}")

    @classmethod
    def wrapped(cls, theta: float, az: float) -> "MeasurementSetting":
        """Canonical setting for any (theta, az) pair naming the same direction."""
        theta = math.remainder(theta, TWO_PI)
        if theta < 0:
            theta, az = -theta, az + math.pi
        az = az % TWO_PI
        if az >= TWO_PI:  # x % 2pi can round up to 2pi for tiny negative x
            az = 0.0
        return cls(min(theta, math.pi), az)

    @property
    def bloch_vector(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.az), st * math.sin(self.az), math.cos(self.theta)])


@dataclass(frozen=True)
class CHSHSettings:
    a1: MeasurementSetting
    a2: MeasurementSetting
    b1: MeasurementSetting
    b2: MeasurementSetting

    def as_tuple(self) -> tuple[MeasurementSetting, ...]:
        return (self.a1, self.a2, self.b1, self.b2)


def bloch_observable(m: MeasurementSetting) -> np.ndarray:
    x, y, z = m.bloch_vector
    return ql.as_matrix(x * PAULI_X + y * PAULI_Y + z * PAULI_Z)


def correlator(rho: DensityOperator, s: MeasurementSetting, a: MeasurementSetting) -> float:
    if rho.dim != 4:
        raise ValueError("correlator needs a two-qubit density operator")
    return ql.expectation(rho, ql.kron(bloch_observable(s), bloch_observable(a)))


def chsh(rho: DensityOperator, s: CHSHSettings) -> float:
    return (
        correlator(rho, s.a1, s.b1)
        + correlator(rho, s.a1, s.b2)
        + correlator(rho, s.a2, s.b1)
        - correlator(rho, s.a2, s.b2)
    )


@dataclass(frozen=True)
class CHSHResult:
    value: float  # |S| at the best settings
    signed: float
    settings: CHSHSettings


def _grid_directions(step: float) -> list[MeasurementSetting]:
    thetas = np.arange(0.0, math.pi + 1e-9, step)
    azs = np.arange(0.0, TWO_PI - 1e-9, step)
    return [MeasurementSetting(min(float(t), math.pi), float(a)) for t in thetas for a in azs]


def _correlation_tensor(rho: DensityOperator) -> np.ndarray:
    axes = [MeasurementSetting(math.pi / 2, 0.0), MeasurementSetting(math.pi / 2, math.pi / 2), MeasurementSetting(0.0)]
    return np.array([[correlator(rho, u, w) for w in axes] for u in axes])


def _coarse_search(rho: DensityOperator, step: float) -> CHSHSettings:
    """Exhaustive grid search over all four settings.

    ``E(a, b) = a . T b`` for Bloch observables, so the table of correlators
    between grid directions is ``G T G^T``. For fixed (b1, b2) the best a1 and
    a2 decouple, which keeps the exhaustive search cheap.
    """
    dirs = _grid_directions(step)
    g = np.array([d.bloch_vector for d in dirs])
    table = g @ _correlation_tensor(rho) @ g.T  # table[a, b] = E(a, b)
    best = (-np.inf, None)
    for b1 in range(len(dirs)):
        plus = table[:, b1, None] + table  # [a, b2] -> E(a,b1) + E(a,b2)
        minus = table[:, b1, None] - table
        for sign in (1.0, -1.0):
            p, m = sign * plus, sign * minus
            a1 = np.argmax(p, axis=0)
            a2 = np.argmax(m, axis=0)
            cols = np.arange(len(dirs))
            totals = p[a1, cols] + m[a2, cols]
            b2 = int(np.argmax(totals))
            if totals[b2] > best[0] + 1e-15:
                best = (totals[b2], (int(a1[b2]), int(a2[b2]), b1, b2))
    i1, i2, j1, j2 = best[1]
    return CHSHSettings(dirs[i1], dirs[i2], dirs[j1], dirs[j2])


def _angles(s: CHSHSettings) -> list[float]:
    return [x for m in s.as_tuple() for x in (m.theta, m.az)]


def _from_angles(v: list[float]) -> CHSHSettings:
    return CHSHSettings(*(MeasurementSetting.wrapped(v[2 * k], v[2 * k + 1]) for k in range(4)))


def refine(rho: DensityOperator, start: CHSHSettings, iters: int, step: float = COARSE_STEP) -> CHSHSettings:
    """Coordinate descent on ``|S|`` over the eight angles.

    Each pass tries ``+-step`` on every angle in order and keeps strict
    improvements; a pass with no improvement halves the step. Stops after
    ``iters`` passes or once the step drops below ``MIN_STEP``.
    """
    current = start
    best = abs(chsh(rho, current))
    for _ in range(iters):
        if step < MIN_STEP:
            break
        improved = False
        for k in range(8):
            for delta in (step, -step):
                v = _angles(current)
                v[k] += delta
                trial = _from_angles(v)
                val = abs(chsh(rho, trial))
                if val > best:
                    best, current, improved = val, trial, True
                    break
        if not improved:
            step /= 2
    return current


def optimize_chsh(
    rho: DensityOperator,
    grid_step: float = COARSE_STEP,
    refine_iters: int = REFINE_ITERS,
) -> CHSHResult:
    if not grid_step > 0:
        raise ValueError("grid_step must be positive")
    if refine_iters < 0:
        raise ValueError("refine_iters must be nonnegative")
    settings = refine(rho, _coarse_search(rho, grid_step), refine_iters, step=grid_step)
    signed = chsh(rho, settings)
    return CHSHResult(abs(signed), signed, settings)


def max_chsh(rho: DensityOperator, grid_step: float = COARSE_STEP, refine_iters: int = REFINE_ITERS) -> float:
    """Best ``|S|`` found by grid search plus coordinate-descent refinement."""
    return optimize_chsh(rho, grid_step, refine_iters).value


def standard_settings() -> CHSHSettings:
    """Textbook optimum for ``(|s1 a1> + |s2 a2>)/sqrt2`` in the x-z plane."""
    return CHSHSettings(
        MeasurementSetting(0.0),
        MeasurementSetting(math.pi / 2),
        MeasurementSetting(math.pi / 4),
        MeasurementSetting(math.pi / 4, math.pi),
    )


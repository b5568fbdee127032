"""Two-photon interferometer: entangled source, phase shifters, beam splitters.

Photon S and photon A each travel two beams (``1``, ``2``). Beam 2 of S is
delayed by ``+phi_S`` and beam 2 of A by ``-phi_A``, so the pair enters the
splitters in the measurement state with relative phase ``phi_S - phi_A``.
Each side's beams recombine on a symmetric 50/50 splitter.

Port wiring: A's two detectors are cross-connected to the splitter outputs.
With this wiring, matched detector indices ("coincidences") have total
probability ``(1 + cos phi) / 2`` at ``alpha = pi/4``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import qlinalg as ql
from .mstate import build_ms, SuperpositionParams
from .qlinalg import StateVector
from .sampling import normalize_seed, uniforms

_SQRT_HALF = 1.0 / math.sqrt(2.0)
_PORT_SWAP = ql.as_matrix([[0, 1], [1, 0]])


@dataclass(frozen=True)
class RTMConfig:
    phi_S: float = 0.0
    phi_A: float = 0.0
    alpha: float = math.pi / 4

    def __post_init__(self):
        for name in ("phi_S", "phi_A", "alpha"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if not 0.0 <= self.alpha <= math.pi / 2:
            raise ValueError(f"alpha must lie in [0, pi/2], got {self.alpha!r}")

    @property
    def phi(self) -> float:
        return self.phi_S - self.phi_A


@dataclass(frozen=True)
class JointDistribution:
    """``p[i][j]``: S fires detector ``i+1`` and A fires detector ``j+1``."""

    p: np.ndarray

    def __post_init__(self):
        p = np.array(self.p, dtype=float).reshape(2, 2)
        if np.any(p < -ql.EXACT_TOL) or np.any(p > 1 + ql.EXACT_TOL):
            raise ValueError("probabilities must lie in [0, 1]")
        if abs(p.sum() - 1.0) > ql.EXACT_TOL:
            raise ValueError(f"probabilities sum to {p.sum():.15g}, expected 1")
        p.flags.writeable = False
        object.__setattr__(self, "p", p)

    @property
    def coincidence(self) -> float:
        return float(self.p[0, 0] + self.p[1, 1])

    def marginal(self, side: str) -> tuple[float, float]:
        if side == "S":
            m = self.p.sum(axis=1)
        elif side == "A":
            m = self.p.sum(axis=0)
        else:
            raise ValueError(f"side must be 'S' or 'A', got {side!r}")
        return float(m[0]), float(m[1])


@dataclass(frozen=True)
class FringeMap:
    L: float
    delta: float

    def __post_init__(self):
        if not (math.isfinite(self.L) and self.L > 0):
            raise ValueError(f"fringe separation L must be positive, got {self.L!r}")
        if not math.isfinite(self.delta):
            raise ValueError("delta must be finite")


@dataclass(frozen=True)
class CoincidenceCounts:
    n_trials: int
    n_coincidence: int
    n_anticoincidence: int
    seed: int

    def __post_init__(self):
        if self.n_coincidence + self.n_anticoincidence != self.n_trials:
            raise ValueError("coincidence counts must sum to n_trials")

    @property
    def coincidence_fraction(self) -> float:
        return self.n_coincidence / self.n_trials


def beam_splitter() -> np.ndarray:
    return ql.as_matrix(_SQRT_HALF * np.array([[1, 1j], [1j, 1]]))


def phase_shifter(phi: float) -> np.ndarray:
    if not math.isfinite(phi):
        raise ValueError("phase must be finite")
    return ql.as_matrix(np.diag([1.0, np.exp(1j * phi)]))


def pre_splitter_state(cfg: RTMConfig) -> StateVector:
    """Source state after both phase shifters, before the beam splitters."""
    source = build_ms(SuperpositionParams(cfg.alpha, 0.0))
    shifters = ql.kron(phase_shifter(cfg.phi_S), phase_shifter(-cfg.phi_A))
    return ql.apply(shifters, source)


def rtm_state(cfg: RTMConfig) -> StateVector:
    """Two-photon state at the detectors, in the (S detector, A detector) basis."""
    bs = beam_splitter()
    optics = ql.kron(bs, _PORT_SWAP @ bs)
    return ql.apply(optics, pre_splitter_state(cfg))


def joint_probs(v: StateVector) -> JointDistribution:
    v.require_normalized()
    return JointDistribution((np.abs(v.amplitudes) ** 2).reshape(2, 2))


def coincidence_prob(phi: float) -> float:
    return joint_probs(rtm_state(RTMConfig(phi_S=phi, phi_A=0.0))).coincidence


def marginals(v: StateVector, side: str) -> tuple[float, float]:
    return joint_probs(v).marginal(side)


def no_signaling_scan(
    phi_grid: Sequence[float],
    phi_fixed: float,
    varying: str = "S",
    alpha: float = math.pi / 4,
) -> float:
    """Largest spread of the far side's marginals while one side sweeps its phase.

    With ``varying="S"`` the grid sets ``phi_S`` and A's marginals are
    compared; ``varying="A"`` swaps the roles.
    """
    if len(phi_grid) == 0:
        raise ValueError("phi grid must be nonempty")
    if varying == "S":
        cfgs = [RTMConfig(phi_S=x, phi_A=phi_fixed, alpha=alpha) for x in phi_grid]
        observer = "A"
    elif varying == "A":
        cfgs = [RTMConfig(phi_S=phi_fixed, phi_A=x, alpha=alpha) for x in phi_grid]
        observer = "S"
    else:
        raise ValueError(f"varying must be 'S' or 'A', got {varying!r}")
    m = np.array([marginals(rtm_state(c), observer) for c in cfgs])
    # max |m_i - m_j| over pairs equals the per-component range
    return float(np.max(m.max(axis=0) - m.min(axis=0)))


def fringe_to_phase(f: FringeMap) -> float:
    return 2.0 * math.pi * f.delta / f.L


def simulate_counts(cfg: RTMConfig, n: int, seed: int) -> CoincidenceCounts:
    """Sample ``n`` detector pairs from the joint distribution.

    Cells are ordered (1,1), (1,2), (2,1), (2,2); each trial uses one uniform
    and picks the first cell whose cumulative probability exceeds it.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    cells = joint_probs(rtm_state(cfg)).p.ravel()
    cum = np.cumsum(cells)
    cum[-1] = 1.0
    idx = np.searchsorted(cum, uniforms(seed, n), side="right")
    n_coinc = int(np.count_nonzero((idx == 0) | (idx == 3)))
    return CoincidenceCounts(n, n_coinc, n - n_coinc, normalize_seed(seed))

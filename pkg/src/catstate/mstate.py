"""Measurement state of a qubit S and an ideal two-state apparatus A.

The apparatus starts in its ready state ``a1`` and the interaction copies the
S basis index into A (a controlled-NOT), so ``cos(a)|s1> + e^{i phi} sin(a)|s2>``
becomes ``cos(a)|s1 a1> + e^{i phi} sin(a)|s2 a2>``. Outcome 1 is ``s1``
(undecayed / alive), outcome 2 is ``s2`` (decayed / dead).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import qlinalg as ql
from .qlinalg import DensityOperator, StateVector
from .sampling import normalize_seed, uniforms

Q_S = ql.as_matrix([[0, 1], [1, 0]])
P_S = ql.as_matrix([[0, 1j], [-1j, 0]])

APPARATUS_READY = StateVector([1, 0], ("a1", "a2"))

# alpha in {0, pi/36, ..., pi/2}, phi in {0, pi/8, ..., 15pi/8}
ALPHA_GRID = tuple(k * math.pi / 36 for k in range(19))
PHI_GRID = tuple(k * math.pi / 8 for k in range(16))


@dataclass(frozen=True)
class SuperpositionParams:
    alpha: float
    phi: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and 0.0 <= self.alpha <= math.pi / 2):
            raise ValueError(f"alpha must lie in [0, pi/2], got {self.alpha!r}")
        if not (math.isfinite(self.phi) and 0.0 <= self.phi < 2 * math.pi):
            raise ValueError(f"phi must lie in [0, 2pi), got {self.phi!r}")

    @property
    def born_probabilities(self) -> tuple[float, float]:
        return math.cos(self.alpha) ** 2, math.sin(self.alpha) ** 2


@dataclass(frozen=True)
class CoherenceWitness:
    q: float
    p: float


@dataclass(frozen=True)
class EnsembleCounts:
    n_trials: int
    n_outcome1: int
    n_outcome2: int
    seed: int

    def __post_init__(self):
        if self.n_outcome1 + self.n_outcome2 != self.n_trials:
            raise ValueError("outcome counts must sum to n_trials")

    @property
    def fraction_outcome1(self) -> float:
        return self.n_outcome1 / self.n_trials


def _params(p) -> SuperpositionParams:
    if isinstance(p, SuperpositionParams):
        return p
    return SuperpositionParams(*p)


def superposition(p: SuperpositionParams) -> StateVector:
    p = _params(p)
    return StateVector([math.cos(p.alpha), np.exp(1j * p.phi) * math.sin(p.alpha)], ("s1", "s2"))


def measurement_unitary() -> np.ndarray:
    """CNOT with S as control: |s1 a_j> -> |s1 a_j>, |s2 a_j> -> |s2 a_{3-j}>."""
    return ql.as_matrix(
        [
            [1, 0, 0, 0],
            [0, 1, 0, 0],
            [0, 0, 0, 1],
            [0, 0, 1, 0],
        ]
    )


def build_ms(p: SuperpositionParams) -> StateVector:
    p = _params(p)
    c, s = math.cos(p.alpha), math.sin(p.alpha)
    return StateVector([c, 0, 0, np.exp(1j * p.phi) * s], ("s1⊗a1", "s1⊗a2", "s2⊗a1", "s2⊗a2"))


def density(v: StateVector) -> DensityOperator:
    v.require_normalized()
    return DensityOperator(ql.outer(v))


def reduced_pair(p: SuperpositionParams) -> tuple[DensityOperator, DensityOperator]:
    """Reduced operators ``(rho_S, rho_A)`` of the measurement state."""
    rho = density(build_ms(p))
    return ql.partial_trace(rho, "S"), ql.partial_trace(rho, "A")


def coherence_witness(rho: DensityOperator) -> CoherenceWitness:
    return CoherenceWitness(ql.expectation(rho, Q_S), ql.expectation(rho, P_S))


def collapsed_mixture(p: SuperpositionParams) -> DensityOperator:
    """Fully collapsed mixture ``cos^2 a |s1 a1><s1 a1| + sin^2 a |s2 a2><s2 a2|``."""
    p1, p2 = _params(p).born_probabilities
    return DensityOperator(np.diag([p1, 0.0, 0.0, p2]))


def degeneracy_flag(rho: DensityOperator, tol: float = 1e-9) -> bool:
    """True when the two eigenvalues of a qubit density operator coincide."""
    lam = ql.eig_hermitian(rho.matrix).eigenvalues
    return bool(abs(lam[0] - lam[1]) < tol)


def binary_entropy(p: float) -> float:
    return -sum(x * math.log(x) for x in (p, 1.0 - p) if x > 0.0)


def sample_outcomes(p: SuperpositionParams, n: int, seed: int) -> EnsembleCounts:
    """Draw ``n`` Born-rule outcomes; outcome 1 when ``u < cos^2(alpha)``."""
    p = _params(p)
    if n < 1:
        raise ValueError("n must be at least 1")
    p1, _ = p.born_probabilities
    n1 = int(np.count_nonzero(uniforms(seed, n) < p1))
    return EnsembleCounts(n_trials=n, n_outcome1=n1, n_outcome2=n - n1, seed=normalize_seed(seed))

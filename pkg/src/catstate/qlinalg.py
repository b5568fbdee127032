"""Dense complex linear algebra for one and two qubits.

Matrices are plain ``numpy`` complex arrays of shape (dim, dim). States carry
basis labels so that tensor products stay readable in diagnostics. The
bipartite basis order is ``s1⊗a1, s1⊗a2, s2⊗a1, s2⊗a2``, i.e. index
``k = 2*i_S + i_A`` with zero-based subsystem indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Tolerances: exact constructions vs. results of iterative methods.
EXACT_TOL = 1e-12
ITER_TOL = 1e-10
PSD_TOL = 1e-10
ZERO_EIG_TOL = 1e-12
MAX_JACOBI_SWEEPS = 100


class NotHermitianError(ValueError):
    pass


class InvalidDensityError(ValueError):
    pass


class ConvergenceError(ArithmeticError):
    pass


def as_matrix(m, dim: int | None = None) -> np.ndarray:
    """Coerce ``m`` to a read-only square complex matrix, checking finiteness."""
    if isinstance(m, DensityOperator):
        m = m.matrix
    arr = np.array(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise ValueError(f"expected dimension {dim}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    arr.flags.writeable = False
    return arr


def _default_labels(dim: int) -> tuple[str, ...]:
    if dim == 2:
        return ("s1", "s2")
    if dim == 4:
        return ("s1⊗a1", "s1⊗a2", "s2⊗a1", "s2⊗a2")
    return tuple(f"e{k}" for k in range(dim))


@dataclass(frozen=True)
class StateVector:
    """Amplitudes over a labeled basis.

    Constructors in this package return normalized vectors; :func:`apply`
    may return an unnormalized one, and consumers that need a physical state
    call :meth:`require_normalized`.
    """

    amplitudes: np.ndarray
    basis_labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if not np.all(np.isfinite(amps)):
            raise ValueError("state has non-finite amplitudes")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)
        labels = tuple(self.basis_labels) or _default_labels(amps.size)
        if len(labels) != amps.size:
            raise ValueError("basis_labels length must equal dim")
        if len(set(labels)) != len(labels):
            raise ValueError("basis labels must be distinct")
        object.__setattr__(self, "basis_labels", labels)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def is_normalized(self, tol: float = EXACT_TOL) -> bool:
        return abs(self.norm_squared() - 1.0) <= tol

    def require_normalized(self, tol: float = EXACT_TOL) -> "StateVector":
        if not self.is_normalized(tol):
            raise ValueError(f"state is not normalized (|v|^2 = {self.norm_squared():.15g})")
        return self

    def __getitem__(self, k):
        return self.amplitudes[k]


class DensityOperator:
    """Hermitian, unit-trace, positive semidefinite matrix."""

    __slots__ = ("matrix",)

    def __init__(self, matrix, *, check: bool = True):
        m = as_matrix(matrix)
        if check:
            _check_density(m)
        self.matrix = m

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def __repr__(self):
        return f"DensityOperator(\n{format_matrix(self.matrix)})"


def _check_density(m: np.ndarray) -> None:
    if not is_hermitian(m):
        raise InvalidDensityError("density operator is not Hermitian")
    tr = np.trace(m)
    if abs(tr - 1.0) > EXACT_TOL:
        raise InvalidDensityError(f"density operator has trace {tr:.15g}, expected 1")
    lowest = eig_hermitian(m).eigenvalues[-1]
    if lowest < -PSD_TOL:
        raise InvalidDensityError(f"density operator has negative eigenvalue {lowest:.3e}")


def is_hermitian(m, tol: float = EXACT_TOL) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol)


def kron(a, b):
    """Tensor product of two matrices or of two state vectors (first factor major)."""
    a_vec, b_vec = isinstance(a, StateVector), isinstance(b, StateVector)
    if a_vec != b_vec:
        raise TypeError("kron needs two state vectors or two matrices, not a mix")
    if a_vec:
        labels = tuple(f"{la}⊗{lb}" for la in a.basis_labels for lb in b.basis_labels)
        return StateVector(np.kron(a.amplitudes, b.amplitudes), labels)
    return as_matrix(np.kron(as_matrix(a), as_matrix(b)))


def dagger(m) -> np.ndarray:
    return as_matrix(as_matrix(m).conj().T)


def apply(m, v: StateVector) -> StateVector:
    """Matrix-vector product. The result is not renormalized."""
    m = as_matrix(m)
    if m.shape[0] != v.dim:
        raise ValueError(f"dimension mismatch: matrix {m.shape[0]} vs vector {v.dim}")
    return StateVector(m @ v.amplitudes, v.basis_labels)


def trace(m) -> complex:
    return complex(np.trace(as_matrix(m)))


def outer(v: StateVector) -> np.ndarray:
    return as_matrix(np.outer(v.amplitudes, v.amplitudes.conj()))


def partial_trace(rho: DensityOperator, keep: str) -> DensityOperator:
    """Reduce a two-qubit density operator to subsystem ``"S"`` or ``"A"``."""
    if not isinstance(rho, DensityOperator):
        rho = DensityOperator(rho)
    if rho.dim != 4:
        raise ValueError("partial_trace expects a 4x4 (two-qubit) density operator")
    # t[i_S, i_A, j_S, j_A] = <s_i a_k| rho |s_j a_l>
    t = rho.matrix.reshape(2, 2, 2, 2)
    if keep == "S":
        reduced = np.einsum("ikjk->ij", t)
    elif keep == "A":
        reduced = np.einsum("kikj->ij", t)
    else:
        raise ValueError(f"keep must be 'S' or 'A', got {keep!r}")
    return DensityOperator(reduced)


def expectation(rho: DensityOperator, obs) -> float:
    """``Tr(rho @ obs)`` for a Hermitian observable."""
    obs = as_matrix(obs)
    rho_m = rho.matrix if isinstance(rho, DensityOperator) else as_matrix(rho)
    if obs.shape != rho_m.shape:
        raise ValueError(f"dimension mismatch: rho {rho_m.shape} vs observable {obs.shape}")
    if not is_hermitian(obs):
        raise NotHermitianError("observable is not Hermitian")
    value = np.trace(rho_m @ obs)
    assert abs(value.imag) < ITER_TOL, f"expectation has imaginary part {value.imag:.3e}"
    return float(value.real)


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray  # descending
    eigenvectors: np.ndarray  # columns, orthonormal

    @property
    def vectors(self) -> list[StateVector]:
        return [StateVector(self.eigenvectors[:, k]) for k in range(self.eigenvalues.size)]

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def eig_hermitian(m) -> Spectrum:
    """Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Each rotation first removes the phase of the pivot ``a_pq`` with a diagonal
    unitary, then zeroes the now-real pivot with a real Givens rotation.
    Raises :class:`ConvergenceError` after ``MAX_JACOBI_SWEEPS`` sweeps.
    """
    a = np.array(as_matrix(m), dtype=complex)
    if not is_hermitian(a):
        raise NotHermitianError("eig_hermitian needs a Hermitian matrix")
    n = a.shape[0]
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)
    scale = max(np.max(np.abs(a), initial=0.0), 1.0)
    threshold = 1e-15 * scale

    def off_diag(x):
        return np.max(np.abs(x - np.diag(np.diag(x))), initial=0.0)

    for _ in range(MAX_JACOBI_SWEEPS):
        if off_diag(a) <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= threshold * 1e-3:
                    continue
                app, aqq = a[p, p].real, a[q, q].real
                theta = (aqq - app) / (2.0 * r)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                phase = apq / r
                # u = diag(1, conj(phase)) on (p, q), then the real rotation [[c, s], [-s, c]]
                u = np.eye(n, dtype=complex)
                u[p, p] = c
                u[p, q] = s
                u[q, p] = -s * np.conj(phase)
                u[q, q] = c * np.conj(phase)
                a = u.conj().T @ a @ u
                a[p, q] = a[q, p] = 0.0
                v = v @ u
    else:
        if off_diag(a) > threshold:
            raise ConvergenceError(f"Jacobi did not converge in {MAX_JACOBI_SWEEPS} sweeps")

    evals = np.diag(a).real.copy()
    order = np.argsort(-evals, kind="stable")
    evals = evals[order]
    vecs = v[:, order]
    evals.flags.writeable = False
    vecs.flags.writeable = False
    return Spectrum(evals, vecs)


def vn_entropy(rho: DensityOperator) -> float:
    """Von Neumann entropy ``-Tr(rho ln rho)`` in nats."""
    lam = eig_hermitian(rho.matrix if isinstance(rho, DensityOperator) else rho).eigenvalues
    lam = np.where(lam <= ZERO_EIG_TOL, 0.0, lam)
    nz = lam[lam > 0.0]
    # eigenvalues a hair above 1 give -1e-16 dust on pure states
    return max(float(-np.sum(nz * np.log(nz))), 0.0)


def identity(dim: int) -> np.ndarray:
    return as_matrix(np.eye(dim))


def _fmt_complex(z: complex) -> str:
    re, im = z.real + 0.0, z.imag + 0.0
    sign = "-" if im < 0 else "+"
    return f"{re:.6g}{sign}{abs(im):.6g}i"


def format_matrix(m) -> str:
    """Fixed-width ``a+bi`` rendering with 6 significant digits, for test messages."""
    m = np.asarray(m)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    cells = [[_fmt_complex(z) for z in row] for row in m]
    width = max(len(c) for row in cells for c in row)
    return "\n".join("  ".join(c.rjust(width) for c in row) for row in cells)


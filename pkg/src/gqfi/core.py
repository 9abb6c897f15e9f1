"""Phase-space types and generator assembly.

Quadratures are ordered ``(x_1, ..., x_M, p_1, ..., p_M)`` with
``hbar = 1`` and ``b_j = (x_j + i p_j) / sqrt(2)``. A model is fully
described by a quadratic Hamiltonian matrix ``H`` (so that the Hamiltonian
operator is ``xi^T H xi / 2 + theta a^T xi``), a linear drive ``a`` and a
jump matrix ``L`` whose rows hold the quadrature coefficients of the jump
operators.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from .errors import NonPsdM, UncertaintyViolation

PSD_RTOL = 1e-12
UNCERTAINTY_RTOL = 1e-9


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


def symplectic_form(M: int) -> np.ndarray:
    """Return ``sigma = [[0, 1], [-1, 0]]`` in M-mode block form.

    Parameters
    ----------
    M : int
        Number of bosonic modes.

    Returns
    -------
    ndarray
        Real antisymmetric ``2M x 2M`` matrix with ``sigma @ sigma = -1``.
    """
    eye = np.eye(M)
    zero = np.zeros((M, M))
    return np.block([[zero, eye], [-eye, zero]])


@dataclass(frozen=True)
class ModelSpec:
    """Immutable description of one sensor setup.

    Parameters
    ----------
    hamiltonian : array_like
        Real ``2M x 2M`` matrix; symmetrized on construction.
    drive : array_like
        Real length-``2M`` vector multiplying the estimated parameter.
    jump_matrix : array_like
        Complex ``n_jump x 2M`` matrix. Zero rows means closed dynamics.
    theta : float
        Value of the estimated parameter.
    label : str
        Free-form name used in reports.
    meta : mapping
        Builder parameters, carried along for reports and for structured
        models (e.g. the trap frequency ``omega`` of a trapped array).
    """

    hamiltonian: np.ndarray
    drive: np.ndarray
    jump_matrix: np.ndarray
    theta: float = 0.0
    label: str = ""
    meta: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        H = np.asarray(self.hamiltonian, dtype=float)
        if H.ndim != 2 or H.shape[0] != H.shape[1] or H.shape[0] % 2:
            raise ValueError(f"hamiltonian must be 2M x 2M, got {H.shape}")
        n = H.shape[0]
        a = np.asarray(self.drive, dtype=float).reshape(-1)
        if a.shape != (n,):
            raise ValueError(f"drive must have length {n}, got {a.shape}")
        L = np.asarray(self.jump_matrix, dtype=complex)
        if L.size == 0:
            L = np.zeros((0, n), dtype=complex)
        if L.ndim != 2 or L.shape[1] != n:
            raise ValueError(f"jump_matrix must be n_jump x {n}, got {L.shape}")
        for name, arr in (("hamiltonian", H), ("drive", a), ("jump_matrix", L)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} has non-finite entries")
        object.__setattr__(self, "hamiltonian", _frozen((H + H.T) / 2))
        object.__setattr__(self, "drive", _frozen(a))
        object.__setattr__(self, "jump_matrix", _frozen(L))
        object.__setattr__(self, "theta", float(self.theta))
        object.__setattr__(self, "meta", dict(self.meta))

    @property
    def mode_count(self) -> int:
        return self.hamiltonian.shape[0] // 2

    @property
    def n_jump(self) -> int:
        return self.jump_matrix.shape[0]

    def with_theta(self, theta: float) -> "ModelSpec":
        """Copy of the model with a different parameter value."""
        return ModelSpec(self.hamiltonian, self.drive, self.jump_matrix,
                         theta, self.label, self.meta)


@dataclass(frozen=True)
class Generators:
    """Matrices derived from a :class:`ModelSpec`.

    Attributes
    ----------
    M_mat : ndarray
        Hermitian ``L^dagger L``.
    M_R, M_I : ndarray
        Real and imaginary parts of ``M_mat``.
    H_eff : ndarray
        ``H + M_I``.
    X : ndarray
        Drift ``sigma @ H_eff``.
    Y : ndarray
        Diffusion ``-sigma @ M_R @ sigma``.
    sigma : ndarray
        Symplectic form.
    """

    M_mat: np.ndarray
    M_R: np.ndarray
    M_I: np.ndarray
    H_eff: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    sigma: np.ndarray

    @property
    def mode_count(self) -> int:
        return self.X.shape[0] // 2


def assemble_generators(model: ModelSpec, psd_rtol: float = PSD_RTOL) -> Generators:
    """Build drift and diffusion matrices for a model.

    Parameters
    ----------
    model : ModelSpec
    psd_rtol : float
        Relative tolerance for the positivity check of ``L^dagger L``.

    Returns
    -------
    Generators

    Raises
    ------
    NonPsdM
        If ``L^dagger L`` has an eigenvalue below ``-psd_rtol * ||M||``.
    """
    M = model.mode_count
    L = model.jump_matrix
    sigma = symplectic_form(M)
    Mm = L.conj().T @ L
    Mm = (Mm + Mm.conj().T) / 2
    norm = np.linalg.norm(Mm, 2) if Mm.size else 0.0
    if norm > 0:
        lo = np.linalg.eigvalsh(Mm)[0]
        if lo < -psd_rtol * norm:
            raise NonPsdM(f"min eigenvalue {lo:.3e} of L^dagger L is negative")
    M_R = Mm.real.copy()
    M_I = Mm.imag.copy()
    M_R = (M_R + M_R.T) / 2
    M_I = (M_I - M_I.T) / 2
    H_eff = model.hamiltonian + M_I
    X = sigma @ H_eff
    Y = -sigma @ M_R @ sigma
    Y = (Y + Y.T) / 2
    return Generators(*(_frozen(m) for m in (Mm, M_R, M_I, H_eff, X, Y, sigma)))


class DynamicsTag(enum.Enum):
    DISSIPATIVE = "Dissipative"
    ZERO_DAMPING = "ZeroDamping"
    UNSTABLE = "Unstable"


@dataclass(frozen=True)
class DynamicsClass:
    """Stability class of the drift matrix.

    Attributes
    ----------
    tag : DynamicsTag
    spectral_margin : float
        Largest real part among the eigenvalues of ``X``.
    """

    tag: DynamicsTag
    spectral_margin: float


def classify_dynamics(gen: Generators, tol: float | None = None) -> DynamicsClass:
    """Classify the drift as dissipative, zero-damping or unstable.

    Parameters
    ----------
    gen : Generators
    tol : float, optional
        Absolute tolerance on real parts; defaults to ``1e-9 * ||X||``.

    Returns
    -------
    DynamicsClass
    """
    X = gen.X
    if tol is None:
        tol = 1e-9 * max(np.linalg.norm(X, 2), 1.0)
    re = np.linalg.eigvals(X).real
    margin = float(re.max())
    if np.all(re < -tol):
        tag = DynamicsTag.DISSIPATIVE
    elif np.all(np.abs(re) <= tol):
        tag = DynamicsTag.ZERO_DAMPING
    else:
        tag = DynamicsTag.UNSTABLE
    return DynamicsClass(tag, margin)


def uncertainty_margin(gamma: np.ndarray) -> float:
    """Smallest eigenvalue of the Hermitian matrix ``Gamma + i sigma / 2``."""
    M = gamma.shape[0] // 2
    return float(np.linalg.eigvalsh(gamma + 0.5j * symplectic_form(M))[0])


def check_uncertainty(gamma: np.ndarray, rtol: float = UNCERTAINTY_RTOL) -> None:
    """Raise :class:`UncertaintyViolation` if ``Gamma`` is unphysical."""
    lo = uncertainty_margin(gamma)
    if lo < -rtol * max(np.linalg.norm(gamma, 2), 1.0):
        raise UncertaintyViolation(f"min eigenvalue of Gamma + i sigma/2 is {lo:.3e}")


@dataclass(frozen=True)
class GaussianState:
    """Mean vector and covariance matrix of a Gaussian state.

    The covariance is symmetrized and checked against the uncertainty
    relation on construction.
    """

    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.covariance, dtype=float)
        g = (g + g.T) / 2
        check_uncertainty(g)
        object.__setattr__(self, "covariance", _frozen(g))
        object.__setattr__(self, "mean", _frozen(np.asarray(self.mean, dtype=float)))

    @classmethod
    def vacuum(cls, M: int) -> "GaussianState":
        return cls(np.zeros(2 * M), np.eye(2 * M) / 2)

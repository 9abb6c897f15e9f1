"""Brute-force QFI oracle in a truncated Fock basis.

The pseudo-density matrix ``mu`` of two copies of the dynamics at parameter
values ``theta_1`` and ``theta_2`` obeys a Lindblad-like equation in which
``H(theta_1)`` acts from the left and ``H(theta_2)`` from the right. Its
trace is the overlap of the two global (system plus environment) states and
its trace norm is the fidelity of the two environment states, so both QFIs
follow from a symmetric finite difference in ``theta``. Nothing here assumes
Gaussian states; it exists to validate :mod:`gqfi.dynamics`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .core import ModelSpec
from .errors import CutoffExceeded, IllConditioned

MAX_MODES = 2
LEAK_TOL = 1e-6


@dataclass(frozen=True)
class TruncatedOperatorSet:
    """Quadrature, Hamiltonian and jump operators on ``cutoff**M`` levels.

    Attributes
    ----------
    cutoff : int
    quadratures : ndarray
        Shape ``(2M, D, D)``, ordered ``x_1..x_M, p_1..p_M``.
    h0 : ndarray
        Quadratic part ``xi^T H xi / 2`` (Hermitian-ordered).
    h1 : ndarray
        Linear part ``a^T xi``; ``H(theta) = h0 + theta * h1``.
    jumps : ndarray
        Shape ``(n_jump, D, D)``.
    top : ndarray
        Boolean mask of basis states with any mode in its top two levels.
    """

    cutoff: int
    quadratures: np.ndarray
    h0: np.ndarray
    h1: np.ndarray
    jumps: np.ndarray
    top: np.ndarray

    @property
    def dim(self) -> int:
        return self.h0.shape[0]


def build_operators(model: ModelSpec, cutoff: int) -> TruncatedOperatorSet:
    """Represent a model on the truncated Fock space.

    Raises
    ------
    ValueError
        For more than two modes or a cutoff below 8.
    """
    M = model.mode_count
    if M > MAX_MODES:
        raise ValueError(f"Fock oracle supports at most {MAX_MODES} modes")
    if cutoff < 8:
        raise ValueError("cutoff must be >= 8")
    ann = np.diag(np.sqrt(np.arange(1, cutoff)), k=1).astype(complex)
    eye = np.eye(cutoff)

    def embed(op, j):
        return reduce(np.kron, [op if k == j else eye for k in range(M)])

    x = (ann + ann.conj().T) / math.sqrt(2)
    p = -1j * (ann - ann.conj().T) / math.sqrt(2)
    xi = np.array([embed(x, j) for j in range(M)] + [embed(p, j) for j in range(M)])
    H = model.hamiltonian
    h0 = 0.5 * np.einsum("ij,iab,jbc->ac", H, xi, xi)
    h0 = (h0 + h0.conj().T) / 2
    h1 = np.einsum("i,iab->ab", model.drive, xi)
    jumps = np.einsum("ni,iab->nab", model.jump_matrix, xi)
    levels = np.array(np.unravel_index(np.arange(cutoff ** M), (cutoff,) * M))
    top = np.any(levels >= cutoff - 2, axis=0)
    return TruncatedOperatorSet(cutoff, xi, h0, h1, jumps, top)


def _leak(mu: np.ndarray, top: np.ndarray) -> float:
    return float(np.abs(np.diag(mu)[top]).sum())


def integrate_pseudo_density(model: ModelSpec, theta1: float, theta2: float, t: float,
                             cutoff: int = 20, dt: float = 1e-3,
                             leak_tol: float = LEAK_TOL,
                             ops: TruncatedOperatorSet | None = None) -> np.ndarray:
    """RK4 integration of the two-parameter Lindblad equation from vacuum.

    Parameters
    ----------
    model : ModelSpec
        At most two modes.
    theta1, theta2 : float
        Parameter values on the left and right of ``mu``.
    t : float
        Final time.
    cutoff : int
        Fock levels per mode.
    dt : float
        Step; shrunk slightly so it divides ``t``.
    leak_tol : float
        Largest allowed population in the top two levels of any mode.

    Raises
    ------
    CutoffExceeded
        If the truncation is too small for this evolution.
    """
    ops = build_operators(model, cutoff) if ops is None else ops
    D = ops.dim
    LdL = np.einsum("nba,nbc->ac", ops.jumps.conj(), ops.jumps)
    left = -1j * (ops.h0 + theta1 * ops.h1) - 0.5 * LdL
    right = 1j * (ops.h0 + theta2 * ops.h1) - 0.5 * LdL
    Ls = ops.jumps
    Lh = np.conj(np.transpose(Ls, (0, 2, 1)))

    def f(mu):
        out = left @ mu + mu @ right
        for L, Ld in zip(Ls, Lh):
            out += L @ mu @ Ld
        return out

    mu = np.zeros((D, D), dtype=complex)
    mu[0, 0] = 1.0
    n = max(int(round(t / dt)), 1) if t > 0 else 0
    h = t / n if n else 0.0
    check = max(n // 50, 1)
    for k in range(1, n + 1):
        k1 = f(mu)
        k2 = f(mu + h / 2 * k1)
        k3 = f(mu + h / 2 * k2)
        k4 = f(mu + h * k3)
        mu = mu + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if k % check == 0 or k == n:
            leak = _leak(mu, ops.top)
            if leak > leak_tol:
                raise CutoffExceeded(f"t={k * h:.4g}: top-level population {leak:.3e}")
    return mu


def fidelities(mu: np.ndarray) -> tuple[float, float]:
    """Global fidelity ``|Tr mu|`` and environmental fidelity ``||mu||_1``."""
    return abs(np.trace(mu)), float(np.linalg.svd(mu, compute_uv=False).sum())


@dataclass(frozen=True)
class FockQfi:
    I_G: float
    I_E: float
    F_G: float
    F_E: float


def fidelity_qfis(model: ModelSpec, theta: float | None = None, eps: float = 1e-3,
                  t: float = 10.0, cutoff: int = 20, dt: float = 1e-3,
                  leak_tol: float = LEAK_TOL) -> FockQfi:
    """Finite-difference QFIs ``8 (1 - F) / eps^2`` at ``theta +/- eps/2``.

    Raises
    ------
    IllConditioned
        If ``1 - F`` is at round-off level or ``F < 0.5``.
    CutoffExceeded
    """
    theta = model.theta if theta is None else theta
    ops = build_operators(model, cutoff)
    mu = integrate_pseudo_density(model, theta + eps / 2, theta - eps / 2, t, cutoff, dt,
                                  leak_tol, ops)
    FG, FE = fidelities(mu)
    for F in (FG, FE):
        if F < 0.5:
            raise IllConditioned(f"fidelity {F:.3g} too small; reduce eps")
    if not np.any(model.drive):
        return FockQfi(0.0, 0.0, FG, FE)
    gaps = (1 - FG, 1 - FE)
    if min(abs(g) for g in gaps) < 10 * np.finfo(float).eps:
        raise IllConditioned(f"1 - F = {min(gaps):.3e} at round-off level; increase eps")
    return FockQfi(8 * gaps[0] / eps ** 2, 8 * gaps[1] / eps ** 2, FG, FE)


def fock_moments(model: ModelSpec, t: float, cutoff: int = 20, dt: float = 1e-3,
                 theta: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Mean vector and symmetrized covariance of the evolved density matrix."""
    theta = model.theta if theta is None else theta
    ops = build_operators(model, cutoff)
    rho = integrate_pseudo_density(model, theta, theta, t, cutoff, dt, ops=ops)
    xi = ops.quadratures
    phi = np.einsum("iab,ba->i", xi, rho).real
    second = np.einsum("iab,jbc,ca->ij", xi, xi, rho)
    G = ((second + second.T) / 2).real - np.outer(phi, phi)
    return phi, G

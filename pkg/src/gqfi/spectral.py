"""Spectral decompositions, closed-form covariance solutions and asymptotic rates.

Two regimes are covered. For dissipative drift (all eigenvalues in the open
left half-plane) the covariance relaxes to the solution of a Lyapunov
equation and both QFIs grow at the same rate. For zero-damping drift
(purely imaginary spectrum) the covariance grows linearly after the
oscillatory terms dephase, and the rates follow from the eigen-decomposition
of the position block ``h_eff = h + m_I``.

Closed forms are evaluated in the eigenbasis ``X = V diag(lam) V^{-1}``. With
``C = V^{-1} A V^{-T}`` for a matrix ``A``, every term of the form
``P_k A P_l^T`` is ``V[:, k] C[k, l] V[:, l]^T``, so sums over pairs of
eigenmodes become elementwise products sandwiched by ``V``. Summing over all
``2M`` eigenvalues is the same as folding conjugate partners into
``2 Re`` over representatives with ``Im lam >= 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg as sla

from .core import (
    DynamicsClass,
    DynamicsTag,
    Generators,
    ModelSpec,
    assemble_generators,
    classify_dynamics,
)
from .errors import (
    AllGapsDegenerate,
    DefectiveDrift,
    DegenerateGap,
    InvalidHopping,
    WrongBlockStructure,
    WrongClass,
)

COND_CAP = 1e8
RESIDUAL_TOL = 1e-8


# --------------------------------------------------------------------------
# decompositions


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigen-decomposition of the drift matrix.

    Attributes
    ----------
    values : ndarray
        All ``2M`` eigenvalues, sorted by imaginary part.
    right : ndarray
        Columns are right eigenvectors.
    left : ndarray
        Rows of ``right^{-1}``; ``P_k = outer(right[:, k], left[k])``.
    condition_number : float
        2-norm condition number of ``right``.
    residual : float
        ``max |X - V diag(lam) V^{-1}|``.
    degenerate : ndarray
        Per eigenvalue, whether another eigenvalue lies within ``gap_tol``.
    """

    values: np.ndarray
    right: np.ndarray
    left: np.ndarray
    condition_number: float
    residual: float
    degenerate: np.ndarray

    @property
    def representatives(self) -> np.ndarray:
        """Indices of the eigenvalues with ``Im lam > 0`` (one per conjugate pair)."""
        return np.flatnonzero(self.values.imag > 0)

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.values[self.representatives]

    def projector(self, k: int) -> np.ndarray:
        return np.outer(self.right[:, k], self.left[k])

    @property
    def projectors(self) -> list[np.ndarray]:
        """Projectors of the representative eigenvalues."""
        return [self.projector(k) for k in self.representatives]

    def to_basis(self, A: np.ndarray) -> np.ndarray:
        """``C = V^{-1} A V^{-T}``, so ``P_k A P_l^T = V[:,k] C[k,l] V[:,l]^T``."""
        return self.left @ A @ self.left.T

    def from_basis(self, C: np.ndarray) -> np.ndarray:
        return self.right @ C @ self.right.T


def decompose_drift(gen: Generators, cond_cap: float = COND_CAP,
                    gap_tol: Optional[float] = None) -> SpectralDecomposition:
    """Diagonalize ``X`` with bi-orthogonal left vectors.

    Parameters
    ----------
    gen : Generators
    cond_cap : float
        Largest accepted eigenvector condition number.
    gap_tol : float, optional
        Degeneracy threshold, ``1e-8 * ||X||`` by default.

    Raises
    ------
    DefectiveDrift
        At or near an exceptional point.
    """
    X = gen.X
    xnorm = max(np.linalg.norm(X, 2), 1e-300)
    if gap_tol is None:
        gap_tol = 1e-8 * xnorm
    lam, V = np.linalg.eig(X)
    order = np.lexsort((lam.real, lam.imag))
    lam, V = lam[order], V[:, order]
    cond = np.linalg.cond(V)
    if not np.isfinite(cond) or cond > cond_cap:
        raise DefectiveDrift(f"eigenvector condition number {cond:.3e} exceeds {cond_cap:.1e}")
    W = np.linalg.inv(V)
    res = float(np.max(np.abs(V @ np.diag(lam) @ W - X)))
    if res > RESIDUAL_TOL * xnorm:
        raise DefectiveDrift(f"reconstruction residual {res:.3e}")
    dist = np.abs(lam[:, None] - lam[None, :]) + np.diag(np.full(lam.size, np.inf))
    return SpectralDecomposition(lam, V, W, float(cond), res, dist.min(axis=1) < gap_tol)


@dataclass(frozen=True)
class PositionBlockDecomposition:
    """Eigen-decomposition of ``h_eff = h + m_I`` for block-structured models.

    Models of this kind have ``H = diag(h, omega * 1)`` and a measurement
    matrix supported on positions only. Left vectors are normalized to unit
    length and right vectors rescaled so that ``l_a^T r_b = delta_ab``; the
    projectors ``P_a = r_a l_a^T`` do not depend on this choice.

    Attributes
    ----------
    eigenvalues : ndarray
        Real ``lam~_a``, ascending.
    right : ndarray
        Columns ``r_a``.
    left : ndarray
        Rows ``l_a``.
    h, m_R, m_I : ndarray
        Position blocks.
    omega : float
        Momentum-block frequency.
    b : ndarray
        Position part of the drive.
    """

    eigenvalues: np.ndarray
    right: np.ndarray
    left: np.ndarray
    h: np.ndarray
    m_R: np.ndarray
    m_I: np.ndarray
    omega: float
    b: np.ndarray

    @property
    def h_eff(self) -> np.ndarray:
        return self.h + self.m_I

    @property
    def projectors(self) -> np.ndarray:
        """Stack of ``P_a = r_a l_a^T`` with shape ``(M, M, M)``."""
        return np.einsum("ia,aj->aij", self.right, self.left)

    @property
    def frequencies(self) -> np.ndarray:
        """Oscillation frequencies ``sqrt(omega * lam~)`` of the full drift."""
        return np.sqrt(self.omega * self.eigenvalues)

    def sandwich(self, weights: np.ndarray) -> np.ndarray:
        """``sum_a weights[a] P_a m_R P_a^T``."""
        d = np.einsum("ai,ij,aj->a", self.left, self.m_R, self.left)
        return (self.right * (weights * d)) @ self.right.T

    def full_projectors(self) -> list[np.ndarray]:
        """Phase-space projectors ``P_a`` paired with eigenvalue ``i lam_a`` of ``X``."""
        out = []
        for lt, Pt in zip(self.eigenvalues, self.projectors):
            s = math.sqrt(self.omega / lt)
            out.append(0.5 * np.kron(np.array([[1, -1j * s], [1j / s, 1]]), Pt))
        return out


def decompose_position_block(model: ModelSpec, gen: Optional[Generators] = None,
                             tol: float = 1e-12,
                             cond_cap: float = COND_CAP) -> PositionBlockDecomposition:
    """Check the block structure of a model and diagonalize ``h_eff``.

    Raises
    ------
    WrongBlockStructure
        If the Hamiltonian, measurement matrix or drive have momentum
        components or the momentum block is not ``omega * 1``.
    DefectiveDrift
        If ``h_eff`` has complex or non-positive eigenvalues or is too close
        to an exceptional point.
    """
    gen = assemble_generators(model) if gen is None else gen
    M = model.mode_count
    H = model.hamiltonian
    scale = max(np.linalg.norm(H, 2), np.linalg.norm(gen.M_mat, 2), 1.0)
    g = H[M:, M:]
    omega = float(np.mean(np.diag(g)))
    off = max(np.abs(H[:M, M:]).max(initial=0.0),
              np.abs(g - omega * np.eye(M)).max(initial=0.0),
              np.abs(gen.M_mat[M:, :]).max(initial=0.0),
              np.abs(gen.M_mat[:, M:]).max(initial=0.0))
    if off > tol * scale:
        raise WrongBlockStructure(f"off-block magnitude {off:.3e}")
    a = model.drive
    if np.abs(a[M:]).max(initial=0.0) > tol * max(np.abs(a).max(initial=0.0), 1.0):
        raise WrongBlockStructure("drive has momentum components")
    if omega <= 0:
        raise WrongBlockStructure("momentum block must be positive")

    h = H[:M, :M].copy()
    m_R = gen.M_R[:M, :M].copy()
    m_I = gen.M_I[:M, :M].copy()
    lam, R = np.linalg.eig(h + m_I)
    if np.abs(lam.imag).max() > 1e-9 * max(np.abs(lam).max(), 1.0):
        raise DefectiveDrift("h_eff has complex eigenvalues")
    lam = lam.real
    if lam.min() <= 0:
        raise DefectiveDrift("h_eff has non-positive eigenvalues")
    R = R.real
    order = np.argsort(lam)
    lam, R = lam[order], R[:, order]
    cond = np.linalg.cond(R)
    if not np.isfinite(cond) or cond > cond_cap:
        raise DefectiveDrift(f"h_eff eigenvector condition number {cond:.3e}")
    Lm = np.linalg.inv(R)
    nrm = np.linalg.norm(Lm, axis=1)
    Lm = Lm / nrm[:, None]
    R = R * nrm[None, :]
    return PositionBlockDecomposition(lam, R, Lm, h, m_R, m_I, omega, a[:M].copy())


# --------------------------------------------------------------------------
# covariance solutions


def _phi1(s: np.ndarray, t: float) -> np.ndarray:
    """``(exp(s t) - 1) / s`` with the ``s -> 0`` limit ``t``."""
    st = s * t
    out = np.empty_like(st)
    small = np.abs(st) < 1e-8
    out[~small] = np.expm1(st[~small]) / s[~small]
    out[small] = t * (1 + st[small] / 2)
    return out


def _require(gen: Generators, tag: DynamicsTag, cls: Optional[DynamicsClass] = None) -> DynamicsClass:
    cls = classify_dynamics(gen) if cls is None else cls
    if cls.tag is not tag:
        raise WrongClass(f"expected {tag.value}, got {cls.tag.value}")
    return cls


def steady_covariance(gen: Generators, spec: Optional[SpectralDecomposition] = None) -> np.ndarray:
    """Steady covariance ``-2 Re sum P Y P^dag / (lam + lam'*) + P Y P^T / (lam + lam')``.

    Raises
    ------
    WrongClass
        Unless the drift is dissipative.
    DefectiveDrift
        If the Lyapunov residual exceeds ``1e-8 ||Y||``.
    """
    _require(gen, DynamicsTag.DISSIPATIVE)
    spec = decompose_drift(gen) if spec is None else spec
    lam = spec.values
    C = spec.to_basis(gen.Y)
    G = spec.from_basis(-C / (lam[:, None] + lam[None, :]))
    G = G.real
    G = (G + G.T) / 2
    res = np.linalg.norm(gen.X @ G + G @ gen.X.T + gen.Y)
    if res > RESIDUAL_TOL * max(np.linalg.norm(gen.Y), 1e-300) and np.any(gen.Y):
        raise DefectiveDrift(f"Lyapunov residual {res:.3e}")
    return G


def lyapunov_dense(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Solve ``X G + G X^T = -Y`` as a Kronecker-product linear system."""
    n = X.shape[0]
    K = np.kron(np.eye(n), X) + np.kron(X, np.eye(n))
    g = np.linalg.solve(K, -Y.reshape(-1, order="F"))
    G = g.reshape(n, n, order="F")
    return (G + G.T) / 2


def _solution(gen: Generators, spec: SpectralDecomposition, gamma0: np.ndarray,
              t: float) -> np.ndarray:
    lam = spec.values
    S = lam[:, None] + lam[None, :]
    C = spec.to_basis(gamma0) * np.exp(S * t) + spec.to_basis(gen.Y) * _phi1(S, t)
    G = spec.from_basis(C).real
    return (G + G.T) / 2


def dissipative_solution(gen: Generators, spec: Optional[SpectralDecomposition],
                         gamma0: np.ndarray, t: float) -> np.ndarray:
    """Closed-form covariance at time ``t`` for dissipative drift.

    Raises
    ------
    WrongClass
    """
    _require(gen, DynamicsTag.DISSIPATIVE)
    spec = decompose_drift(gen) if spec is None else spec
    return _solution(gen, spec, np.asarray(gamma0, float), float(t))


def zero_damping_solution(gen: Generators, spec: Optional[SpectralDecomposition],
                          gamma0: np.ndarray, t: float) -> np.ndarray:
    """Closed-form covariance at time ``t`` for zero-damping drift.

    Oscillatory terms carry ``exp(i (lam_a -/+ lam_b) t)``; the pairing of
    each mode with its own conjugate produces the secular term
    ``t * 2 Re sum_a P_a Y P_a^dag``. Eigenvalue sums closer to zero than the
    degeneracy threshold are merged into the secular term through the
    smooth limit of ``(exp(s t) - 1) / s``.

    Raises
    ------
    WrongClass
    """
    _require(gen, DynamicsTag.ZERO_DAMPING)
    spec = decompose_drift(gen) if spec is None else spec
    return _solution(gen, spec, np.asarray(gamma0, float), float(t))


def diffusion_rate(gen: Generators, spec: Optional[SpectralDecomposition] = None) -> np.ndarray:
    """Asymptotic covariance growth ``2 Re sum_a P_a Y P_a^dag``."""
    _require(gen, DynamicsTag.ZERO_DAMPING)
    spec = decompose_drift(gen) if spec is None else spec
    rep = spec.representatives
    C = spec.left[rep] @ gen.Y @ spec.left[rep].conj().T
    U = spec.right[:, rep]
    G = 2 * (U @ np.diag(np.diag(C)) @ U.conj().T).real
    return (G + G.T) / 2


# --------------------------------------------------------------------------
# rates


@dataclass(frozen=True)
class DissipativeRates:
    rate_IG: float
    rate_IE: float
    rate_dI: float
    rate_IG_projector: float
    gamma_st: np.ndarray
    nbar_st: float


def dissipative_rates(gen: Generators, spec: Optional[SpectralDecomposition],
                      a: np.ndarray) -> DissipativeRates:
    """Asymptotic QFI rates for dissipative drift.

    ``I_G`` grows at ``8 a^T (-X^{-1} Gamma_st) a`` and ``I_E`` at the same
    rate, since the information difference saturates. The projector form
    ``16 a^T Re sum (1/lam) (...) a`` is evaluated alongside as a check.

    Returns
    -------
    DissipativeRates
        ``nbar_st`` is ``Tr Gamma_st / (2M)``, i.e. it includes the
        zero-point contribution of one half per mode.
    """
    _require(gen, DynamicsTag.DISSIPATIVE)
    spec = decompose_drift(gen) if spec is None else spec
    a = np.asarray(a, float)
    G = steady_covariance(gen, spec)
    R = -np.linalg.solve(gen.X, G)
    rate = float(8 * a @ R @ a)
    lam = spec.values
    C = spec.to_basis(gen.Y)
    Rp = spec.right @ ((C / (lam[:, None] + lam[None, :])) / lam[:, None]) @ spec.right.T
    rate_p = float(8 * (a @ Rp @ a).real)
    M = gen.mode_count
    return DissipativeRates(rate, rate, 0.0, rate_p, G, float(np.trace(G)) / (2 * M))


@dataclass(frozen=True)
class ZeroDampingRates:
    nbar_rate: float
    rate_IG: float
    rate_IE: float
    rate_dI: float
    A: np.ndarray
    B: np.ndarray


def dephased_matrices(pbd: PositionBlockDecomposition) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(m~, m~', A)`` built from ``P_a m_R P_a^T``.

    ``m~ = sum P m_R P^T``, ``m~' = sum P m_R P^T / (sqrt(2) lam~)`` and
    ``A = sum P m_R P^T / (2 lam~^2)``.
    """
    lt = pbd.eigenvalues
    mt = pbd.sandwich(np.ones_like(lt))
    mtp = pbd.sandwich(1 / (math.sqrt(2) * lt))
    A = pbd.sandwich(1 / (2 * lt ** 2))
    return _sym(mt), _sym(mtp), _sym(A)


def _sym(A: np.ndarray) -> np.ndarray:
    return (A + A.T) / 2


def _sandwich_inverse(mtp: np.ndarray, mt: np.ndarray, rcond: float = 1e-10) -> np.ndarray:
    """``m~' m~^{-1} m~'``, through a pseudo-inverse if ``m~`` is singular."""
    s = np.linalg.eigvalsh(mt)
    if s.size and s[0] > rcond * s[-1]:
        return _sym(mtp @ np.linalg.solve(mt, mtp))
    return _sym(mtp @ np.linalg.pinv(mt, rcond=rcond, hermitian=True) @ mtp)


def zero_damping_rates(pbd: PositionBlockDecomposition,
                       b: Optional[np.ndarray] = None) -> ZeroDampingRates:
    """Asymptotic rates for zero-damping drift with position-block structure.

    Parameters
    ----------
    pbd : PositionBlockDecomposition
    b : ndarray, optional
        Position-block drive; defaults to the model's drive.

    Returns
    -------
    ZeroDampingRates
        Excitation rate per mode
        ``(1/4M) sum Tr[(omega/lam~ + 1) P m_R P^T]``, environmental rate
        ``4 b^T h_eff^{-1} m_R h_eff^{-T} b``, global rate with the extra
        ``4 b^T A b`` term, and the information-difference rate
        ``4 b^T m~' m~^{-1} m~' b``.
    """
    b = pbd.b if b is None else np.asarray(b, float)
    M = pbd.eigenvalues.size
    lt = pbd.eigenvalues
    d = np.einsum("ai,ij,aj->a", pbd.left, pbd.m_R, pbd.left)
    rr = np.einsum("ia,ia->a", pbd.right, pbd.right)
    nbar_rate = float(np.sum((pbd.omega / lt + 1) * d * rr)) / (4 * M)
    mt, mtp, A = dephased_matrices(pbd)
    B = _sandwich_inverse(mtp, mt)
    z = np.linalg.solve(pbd.h_eff, b)
    rate_IE = float(4 * z @ pbd.m_R @ z)
    rate_dI = float(4 * b @ B @ b)
    rate_IG = rate_IE + float(4 * b @ A @ b)
    return ZeroDampingRates(nbar_rate, rate_IG, rate_IE, rate_dI, A, B)


@dataclass(frozen=True)
class OptimizedRates:
    rate_IG: float
    rate_IE: float
    drive_IG: np.ndarray
    drive_IE: np.ndarray


def _top(S: np.ndarray, M: int) -> tuple[float, np.ndarray]:
    w, v = np.linalg.eigh(_sym(S))
    vec = v[:, -1]
    vec = vec * np.sign(vec[np.argmax(np.abs(vec))])
    return float(w[-1]), vec * math.sqrt(M)


def optimized_rates_dissipative(gen: Generators, gamma_st: np.ndarray) -> OptimizedRates:
    """Maximize ``8 a^T (-X^{-1} Gamma_st) a`` over ``|a|^2 = M``."""
    M = gen.mode_count
    val, vec = _top(-np.linalg.solve(gen.X, gamma_st), M)
    return OptimizedRates(8 * M * val, 8 * M * val, vec, vec.copy())


def optimized_rates_zero_damping(pbd: PositionBlockDecomposition) -> OptimizedRates:
    """Maximize the zero-damping rates over position drives with ``|b|^2 = M``.

    Returns full phase-space drive vectors with zero momentum part.
    """
    M = pbd.eigenvalues.size
    hi = np.linalg.inv(pbd.h_eff)
    first = hi @ pbd.m_R @ hi.T
    _, _, A = dephased_matrices(pbd)
    vg, bg = _top(first + A, M)
    ve, be = _top(first, M)
    z = np.zeros(M)
    return OptimizedRates(4 * M * vg, 4 * M * ve, np.concatenate([bg, z]), np.concatenate([be, z]))


# --------------------------------------------------------------------------
# dephasing


@dataclass(frozen=True)
class DephasingResult:
    t_star: float
    sigma_gap: float
    mean_gap: float
    weights: np.ndarray
    gaps: np.ndarray


def dephasing_time(gen: Generators, spec: Optional[SpectralDecomposition] = None,
                   weight_tol: float = 1e-10) -> DephasingResult:
    """Estimate the time after which oscillatory covariance terms dephase.

    Each ordered pair of distinct modes ``(a, b)`` contributes the gap
    ``lam_a - lam_b`` with weight proportional to the squared
    Hilbert-Schmidt norm of ``P_a Y P_b^dag / (i (lam_a - lam_b))``. The
    estimate is ``pi / sigma_gap`` with ``sigma_gap`` the weighted standard
    deviation of the gaps. The weighted mean vanishes by antisymmetry; it is
    reported but not subtracted.

    Raises
    ------
    WrongClass
    DegenerateGap
        If two distinct modes share a frequency.
    AllGapsDegenerate
        If every weight vanishes.
    """
    _require(gen, DynamicsTag.ZERO_DAMPING)
    spec = decompose_drift(gen) if spec is None else spec
    rep = spec.representatives
    if rep.size < 2:
        raise AllGapsDegenerate("need at least two eigenmodes")
    freq = spec.values[rep].imag
    gaps = freq[:, None] - freq[None, :]
    off = ~np.eye(rep.size, dtype=bool)
    gap_tol = 1e-8 * max(np.linalg.norm(gen.X, 2), 1.0)
    if np.any(np.abs(gaps[off]) < gap_tol):
        raise DegenerateGap("two eigenmodes share a frequency")
    U = spec.right[:, rep]
    Wl = spec.left[rep]
    un = np.linalg.norm(U, axis=0)
    C = np.abs(Wl @ gen.Y @ Wl.conj().T) * un[:, None] * un[None, :]
    # couplings at round-off relative to the largest one carry no weight
    C[C < weight_tol * C.max()] = 0.0
    V2 = np.zeros_like(gaps)
    V2[off] = (C[off] / np.abs(gaps[off])) ** 2
    total = V2.sum()
    if total == 0:
        raise AllGapsDegenerate("all expansion factors vanish")
    q = V2 / total
    mean = float(np.sum(q * gaps))
    sigma = math.sqrt(float(np.sum(q * gaps ** 2)))
    return DephasingResult(math.pi / sigma, sigma, mean, q[off], gaps[off])


# --------------------------------------------------------------------------
# skin effect


@dataclass(frozen=True)
class SkinSpectrum:
    """Spectrum of a uniform nonreciprocal chain.

    Attributes
    ----------
    eigenvalues : ndarray
        ``w + 2 sqrt(t_R t_L) cos(n pi / (L + 1))``, ascending.
    localization_length : float
        ``1 / |log sqrt(t_R / t_L)|``; ``inf`` when reciprocal.
    profile_exponent : float
        ``log sqrt(t_R / t_L)``, the slope of ``log|psi_j|`` in ``j`` for
        right eigenvectors.
    max_abs_error : float
        Deviation from a dense eigensolve of the chain matrix.
    """

    eigenvalues: np.ndarray
    localization_length: float
    profile_exponent: float
    max_abs_error: float


def chain_matrix(t_R: float, t_L: float, w: float, L: int) -> np.ndarray:
    """Tridiagonal chain with ``T[j+1, j] = t_R`` and ``T[j, j+1] = t_L``."""
    return w * np.eye(L) + t_R * np.eye(L, k=-1) + t_L * np.eye(L, k=1)


def skin_spectrum(t_R: float, t_L: float, w: float, L: int) -> SkinSpectrum:
    """Analytic spectrum and localization length of a nonreciprocal chain.

    Raises
    ------
    InvalidHopping
        If ``t_R * t_L <= 0``.
    """
    if not t_R * t_L > 0:
        raise InvalidHopping(f"t_R * t_L = {t_R * t_L} must be positive")
    n = np.arange(1, L + 1)
    E = np.sort(w + 2 * math.copysign(math.sqrt(t_R * t_L), t_R) * np.cos(n * np.pi / (L + 1)))
    num = np.sort(np.linalg.eigvals(chain_matrix(t_R, t_L, w, L)).real)
    kappa = 0.5 * math.log(t_R / t_L)
    xi = math.inf if kappa == 0 else 1 / abs(kappa)
    return SkinSpectrum(E, xi, kappa, float(np.max(np.abs(E - num))))


def fit_profile_exponent(T: np.ndarray) -> float:
    """Slope of the mode-averaged ``log|psi_j|`` over right eigenvectors of ``T``.

    Averaging over all modes removes the standing-wave factor exactly when
    ``L + 1`` is prime, since every site then sees the same multiset of
    sines.
    """
    _, R = np.linalg.eig(T)
    logs = np.log(np.abs(R))
    logs -= logs.mean(axis=0, keepdims=True)
    prof = logs.mean(axis=1)
    j = np.arange(T.shape[0])
    return float(np.polyfit(j, prof, 1)[0])


# --------------------------------------------------------------------------
# report


@dataclass(frozen=True)
class AsymptoticReport:
    """Closed-form long-time behavior of one model.

    For dissipative models ``nbar`` is the steady value ``Tr Gamma_st / 2M``
    and ``gamma_matrix`` is ``Gamma_st``; for zero-damping models ``nbar``
    is the excitation rate and ``gamma_matrix`` the covariance growth rate.
    """

    dynamics: DynamicsClass
    rate_IG: float
    rate_IE: float
    rate_dI: float
    nbar: float
    gamma_matrix: np.ndarray
    t_star: Optional[float]
    opt_IG: float
    opt_IE: float
    opt_drive_IG: np.ndarray
    opt_drive_IE: np.ndarray

    @property
    def zero_damping(self) -> bool:
        return self.dynamics.tag is DynamicsTag.ZERO_DAMPING


def asymptotic_report(model: ModelSpec, with_dephasing: bool = True) -> AsymptoticReport:
    """Dispatch on the dynamics class and collect all closed-form rates.

    Raises
    ------
    WrongClass
        For unstable models.
    """
    gen = assemble_generators(model)
    cls = classify_dynamics(gen)
    if cls.tag is DynamicsTag.DISSIPATIVE:
        spec = decompose_drift(gen)
        r = dissipative_rates(gen, spec, model.drive)
        o = optimized_rates_dissipative(gen, r.gamma_st)
        return AsymptoticReport(cls, r.rate_IG, r.rate_IE, r.rate_dI, r.nbar_st, r.gamma_st,
                                None, o.rate_IG, o.rate_IE, o.drive_IG, o.drive_IE)
    if cls.tag is DynamicsTag.ZERO_DAMPING:
        pbd = decompose_position_block(model, gen)
        r = zero_damping_rates(pbd)
        o = optimized_rates_zero_damping(pbd)
        t_star = None
        spec = decompose_drift(gen)
        G = diffusion_rate(gen, spec)
        if with_dephasing and model.mode_count > 1:
            try:
                t_star = dephasing_time(gen, spec).t_star
            except AllGapsDegenerate:
                pass
        return AsymptoticReport(cls, r.rate_IG, r.rate_IE, r.rate_dI, r.nbar_rate, G,
                                t_star, o.rate_IG, o.rate_IE, o.drive_IG, o.drive_IE)
    raise WrongClass("unstable dynamics has no asymptotic report")

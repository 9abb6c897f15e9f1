"""Time integration of moments, sensitivity vector and QFI accumulators.

The state vector is ``(phi, Gamma, w, I_G)`` with

    dphi/dt   = X phi + theta sigma a
    dGamma/dt = X Gamma + Gamma X^T + Y
    dw/dt     = X w + Gamma a
    dI_G/dt   = 8 a^T w

``w`` is the parameter derivative of the imaginary mean shift between the
two branches of the pseudo-density matrix, so the information difference
between global and environmental QFI is ``4 w^T Gamma^{-1} w``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np
import scipy.linalg as sla

from .core import Generators, ModelSpec, assemble_generators, check_uncertainty
from .errors import SingularCovariance, UncertaintyViolation


@dataclass(frozen=True)
class TrajectoryState:
    """Snapshot of one trajectory at time ``t``.

    ``delta_I``, ``I_E`` and ``nbar`` are derived from the other fields and
    filled in by :func:`observe`.
    """

    t: float
    phi: np.ndarray
    gamma: np.ndarray
    w: np.ndarray
    I_G: float
    delta_I: float = 0.0
    I_E: float = 0.0
    nbar: float = 0.0

    @property
    def mode_count(self) -> int:
        return self.phi.shape[0] // 2


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step integrator settings.

    Parameters
    ----------
    dt : float
        Step size. ``dt * ||X|| <= 0.1`` is recommended.
    t_max : float
        Final time. The step is shrunk slightly so that it divides ``t_max``.
    scheme : {"rk4", "midpoint"}
    record_stride : int
        Keep every ``record_stride``-th step (the final step is always kept).
    check_uncertainty : bool
        Verify ``Gamma + i sigma / 2 >= 0`` at every recorded step.
    """

    dt: float = 0.01
    t_max: float = 10.0
    scheme: str = "rk4"
    record_stride: int = 100
    check_uncertainty: bool = True

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ValueError("dt must be positive")
        if not (self.t_max >= 0 and math.isfinite(self.t_max)):
            raise ValueError("t_max must be non-negative")
        if self.scheme not in ("rk4", "midpoint"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if int(self.record_stride) < 1:
            raise ValueError("record_stride must be >= 1")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_max / self.dt)) if self.t_max > 0 else 0


def info_difference(state: TrajectoryState) -> float:
    """Return ``delta I = 4 w^T Gamma^{-1} w`` using a linear solve.

    Raises
    ------
    SingularCovariance
        If ``Gamma`` cannot be factorized.
    """
    if not np.any(state.w):
        return 0.0
    try:
        z = sla.solve(state.gamma, state.w, assume_a="pos")
    except (sla.LinAlgError, ValueError) as exc:
        raise SingularCovariance(str(exc)) from exc
    return float(4.0 * state.w @ z)


def excitation_number(gamma: np.ndarray, phi: np.ndarray | None = None) -> float:
    """Mean number of excitations per mode.

    Parameters
    ----------
    gamma : ndarray
        Covariance matrix.
    phi : ndarray, optional
        Mean vector; omitted means only fluctuations are counted.

    Returns
    -------
    float
        ``(Tr Gamma - M + |phi|^2) / (2M)``.
    """
    M = gamma.shape[0] // 2
    mean2 = 0.0 if phi is None else float(phi @ phi)
    return (float(np.trace(gamma)) - M + mean2) / (2 * M)


def observe(state: TrajectoryState) -> TrajectoryState:
    """Fill in ``delta_I``, ``I_E`` and ``nbar``."""
    dI = info_difference(state)
    return replace(state, delta_I=dI, I_E=state.I_G - dI,
                   nbar=excitation_number(state.gamma, state.phi))


def _rhs(gen: Generators, a: np.ndarray, drive: np.ndarray):
    X, Y = gen.X, gen.Y

    def f(phi, G, w):
        XG = X @ G
        return X @ phi + drive, XG + XG.T + Y, X @ w + G @ a, 8.0 * (a @ w)

    return f


def _stepper(f: Callable, scheme: str):
    if scheme == "rk4":
        def step(phi, G, w, I, h):
            k1 = f(phi, G, w)
            k2 = f(phi + h / 2 * k1[0], G + h / 2 * k1[1], w + h / 2 * k1[2])
            k3 = f(phi + h / 2 * k2[0], G + h / 2 * k2[1], w + h / 2 * k2[2])
            k4 = f(phi + h * k3[0], G + h * k3[1], w + h * k3[2])
            c = h / 6
            phi = phi + c * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
            G = G + c * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
            w = w + c * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
            I = I + c * (k1[3] + 2 * k2[3] + 2 * k3[3] + k4[3])
            return phi, (G + G.T) / 2, w, I
    else:
        def step(phi, G, w, I, h):
            k1 = f(phi, G, w)
            k2 = f(phi + h / 2 * k1[0], G + h / 2 * k1[1], w + h / 2 * k1[2])
            return (phi + h * k2[0], (G + h * k2[1] + (G + h * k2[1]).T) / 2,
                    w + h * k2[2], I + h * k2[3])
    return step


def _advance(model: ModelSpec, gen: Generators, state: TrajectoryState,
             h: float, scheme: str) -> TrajectoryState:
    drive = model.theta * (gen.sigma @ model.drive)
    step = _stepper(_rhs(gen, model.drive, drive), scheme)
    phi, G, w, I = step(state.phi, state.gamma, state.w, state.I_G, h)
    return TrajectoryState(state.t + h, phi, G, w, float(I))


def step_moments(state: TrajectoryState, gen: Generators, model: ModelSpec,
                 dt: float, scheme: str = "rk4") -> TrajectoryState:
    """Advance the mean and covariance by one step.

    The sensitivity vector and ``I_G`` are co-integrated because they are
    coupled to ``Gamma``; :func:`step_sensitivity` is the same step.

    Raises
    ------
    UncertaintyViolation
        If the new covariance matrix is unphysical.
    """
    new = _advance(model, gen, state, dt, scheme)
    check_uncertainty(new.gamma)
    return new


step_sensitivity = step_moments


def initial_state(M: int, gamma0: np.ndarray | None = None,
                  phi0: np.ndarray | None = None) -> TrajectoryState:
    """Vacuum unless ``gamma0`` / ``phi0`` are given; ``w = 0``, ``I_G = 0``."""
    G = np.eye(2 * M) / 2 if gamma0 is None else np.array(gamma0, dtype=float)
    phi = np.zeros(2 * M) if phi0 is None else np.array(phi0, dtype=float)
    return observe(TrajectoryState(0.0, phi, (G + G.T) / 2, np.zeros(2 * M), 0.0))


def run_trajectory(model: ModelSpec, config: IntegratorConfig,
                   gamma0: np.ndarray | None = None,
                   phi0: np.ndarray | None = None) -> list[TrajectoryState]:
    """Integrate a model and return the recorded states.

    Parameters
    ----------
    model : ModelSpec
    config : IntegratorConfig
    gamma0, phi0 : ndarray, optional
        Initial covariance and mean; vacuum by default.

    Returns
    -------
    list of TrajectoryState
        States at ``t = 0`` and every ``record_stride`` steps, always
        including the final time.

    Raises
    ------
    UncertaintyViolation
        With the failing time in the message.
    """
    gen = assemble_generators(model)
    M = model.mode_count
    n = config.n_steps
    h = config.t_max / n if n else config.dt
    xnorm = np.linalg.norm(gen.X, 2)
    if h * xnorm > 0.1:
        warnings.warn(f"dt * ||X|| = {h * xnorm:.3g} exceeds 0.1", RuntimeWarning,
                      stacklevel=2)
    drive = model.theta * (gen.sigma @ model.drive)
    step = _stepper(_rhs(gen, model.drive, drive), config.scheme)
    s0 = initial_state(M, gamma0, phi0)
    out = [s0]
    phi, G, w, I = s0.phi, s0.gamma, s0.w, 0.0
    stride = int(config.record_stride)
    for k in range(1, n + 1):
        phi, G, w, I = step(phi, G, w, I, h)
        if k % stride == 0 or k == n:
            st = TrajectoryState(k * h, phi, G, w, float(I))
            if config.check_uncertainty:
                try:
                    check_uncertainty(G)
                except UncertaintyViolation as exc:
                    raise UncertaintyViolation(f"t={k * h:.6g}: {exc}") from exc
            out.append(observe(st))
    return out


def trajectory_arrays(states: list[TrajectoryState]) -> dict[str, np.ndarray]:
    """Stack scalar series and covariance diagonals into arrays."""
    return {
        "t": np.array([s.t for s in states]),
        "nbar": np.array([s.nbar for s in states]),
        "I_G": np.array([s.I_G for s in states]),
        "I_E": np.array([s.I_E for s in states]),
        "delta_I": np.array([s.delta_I for s in states]),
        "gamma_diag": np.array([np.diag(s.gamma) for s in states]),
    }

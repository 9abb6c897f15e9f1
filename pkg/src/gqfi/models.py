"""Builders for cavity arrays and trapped-particle arrays.

All builders return a :class:`~gqfi.core.ModelSpec` in quadrature ordering
with drive ``a = (-1, ..., -1, 0, ..., 0)`` (a Hamiltonian term
``-E sum_j x_j`` with ``theta = E``) and a vacuum-compatible jump matrix.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .core import DynamicsTag, ModelSpec, assemble_generators, classify_dynamics
from .errors import PtBroken, UnstableModel

CAVITY_COUPLINGS = ("spring", "literal")
TRAPPED_VARIANTS = ("local", "global", "nonreciprocal", "nonreciprocal_uniformdiag")


def chain_laplacian(M: int) -> np.ndarray:
    """Open-boundary Laplacian of ``sum_j (x_j - x_{j+1})^2 / 2``.

    Diagonal entries are 1 at the two ends and 2 in the bulk; off-diagonals
    are -1. A single site gives the 1x1 zero matrix.
    """
    L = 2.0 * np.eye(M) - np.eye(M, k=1) - np.eye(M, k=-1)
    L[0, 0] -= 1.0
    L[-1, -1] -= 1.0
    return L


def _drive(M: int) -> np.ndarray:
    return np.concatenate([-np.ones(M), np.zeros(M)])


def _require_stable(model: ModelSpec, allowed: DynamicsTag) -> ModelSpec:
    cls = classify_dynamics(assemble_generators(model))
    if cls.tag is not allowed:
        raise UnstableModel(
            f"{model.label}: classified {cls.tag.value}, margin {cls.spectral_margin:.3e}")
    return model


@dataclass(frozen=True)
class CavityArrayParams:
    """Driven array of lossy cavities with nearest-neighbor coupling.

    Parameters
    ----------
    M : int
        Number of cavities.
    omega0 : float
        On-site frequency.
    delta : float
        Nearest-neighbor coupling strength. Hopping ``-(delta/2)`` and
        squeezing ``-(delta/4)`` combine to a ``-delta x_j x_{j+1}``
        position coupling.
    zeta : float
        Local photon loss rate of every cavity.
    gamma : float
        Rate of the collective ``sum_j x_j`` measurement, 0 to disable.
    E : float
        Drive amplitude, the estimated parameter.
    coupling : {"spring", "literal"}
        ``"spring"`` completes the position coupling into the harmonic
        potential ``(delta/2) (x_j - x_{j+1})^2``, i.e. it adds on-site
        ``delta`` (``delta/2`` at the ends) to the position block.
        ``"literal"`` keeps only the cross terms, which puts the uniform
        mode at ``omega0 - 2 delta`` and makes the array marginally stable
        at ``delta = omega0 / 2``.
    """

    M: int
    omega0: float = 1.0
    delta: float = 0.5
    zeta: float = 0.3
    gamma: float = 0.0
    E: float = 0.1
    coupling: str = "spring"

    def __post_init__(self):
        if int(self.M) < 1:
            raise ValueError("M must be >= 1")
        if self.coupling not in CAVITY_COUPLINGS:
            raise ValueError(f"coupling must be one of {CAVITY_COUPLINGS}")
        if self.zeta < 0 or self.gamma < 0:
            raise ValueError("rates must be non-negative")


def build_cavity_array(params: CavityArrayParams) -> ModelSpec:
    """Quadrature-basis model of a driven, lossy cavity array.

    Raises
    ------
    UnstableModel
        If the assembled drift is not dissipative.
    """
    M = int(params.M)
    adj = np.eye(M, k=1) + np.eye(M, k=-1)
    eye = np.eye(M)
    # hopping: -(d/2)(xx + pp); squeezing: -(d/2)(xx - pp)
    h = params.omega0 * eye - params.delta * adj
    if params.coupling == "spring":
        h = params.omega0 * eye + params.delta * chain_laplacian(M)
    g = params.omega0 * eye
    zero = np.zeros((M, M))
    H = np.block([[h, zero], [zero, g]])

    rows = []
    amp = math.sqrt(params.zeta / 2)
    for n in range(M):
        r = np.zeros(2 * M, dtype=complex)
        r[n] = amp
        r[M + n] = 1j * amp
        rows.append(r)
    if params.gamma > 0:
        r = np.zeros(2 * M, dtype=complex)
        r[:M] = math.sqrt(params.gamma)
        rows.append(r)
    label = "cavity_hybrid" if params.gamma > 0 else "cavity_local"
    model = ModelSpec(H, _drive(M), np.array(rows), theta=params.E, label=label,
                      meta={"family": "cavity", **asdict(params)})
    return _require_stable(model, DynamicsTag.DISSIPATIVE)


@dataclass(frozen=True)
class TrappedArrayParams:
    """Chain of harmonically trapped particles under position measurement.

    Parameters
    ----------
    M : int
    omega : float
        Trap frequency.
    K : float
        Spring constant between neighbors.
    gamma : float
        Measurement rate.
    E : float
        Drive amplitude, the estimated parameter.
    dphi : float
        Phase difference between neighboring trapping lasers, used by the
        nonreciprocal variants.
    variant : str
        One of ``local``, ``global``, ``nonreciprocal``,
        ``nonreciprocal_uniformdiag``. The last one sets both end diagonals
        of the position block to ``omega + 2K`` so the chain is uniform.
    """

    M: int
    omega: float = 1.0
    K: float = 1.0
    gamma: float = 0.1
    E: float = 0.1
    dphi: float = 0.0
    variant: str = "local"

    def __post_init__(self):
        if int(self.M) < 1:
            raise ValueError("M must be >= 1")
        if self.variant not in TRAPPED_VARIANTS:
            raise ValueError(f"variant must be one of {TRAPPED_VARIANTS}")
        if self.omega <= 0 or self.gamma < 0:
            raise ValueError("need omega > 0 and gamma >= 0")
        if not -math.pi / 2 <= self.dphi <= math.pi / 2:
            raise ValueError("dphi must lie in [-pi/2, pi/2]")


def nonreciprocal_jumps(M: int, gamma: float, dphi: float) -> np.ndarray:
    """Position-block rows of the pair jumps on every bond.

    ``L_j^+ = sqrt(g) (x_j + x_{j+1})`` and
    ``L_j^- = sqrt(g) (e^{i dphi/2} x_j - e^{-i dphi/2} x_{j+1})``.
    """
    s = math.sqrt(gamma)
    rows = []
    for j in range(M - 1):
        plus = np.zeros(M, dtype=complex)
        plus[j] = plus[j + 1] = s
        minus = np.zeros(M, dtype=complex)
        minus[j] = s * np.exp(0.5j * dphi)
        minus[j + 1] = -s * np.exp(-0.5j * dphi)
        rows += [minus, plus]
    return np.array(rows).reshape(-1, M)


def build_trapped_array(params: TrappedArrayParams) -> ModelSpec:
    """Quadrature-basis model of a trapped-particle array.

    Raises
    ------
    PtBroken
        For nonreciprocal variants with ``K <= gamma |sin dphi|``.
    UnstableModel
        If the drift is not zero-damping.
    """
    M = int(params.M)
    v = params.variant
    if v.startswith("nonreciprocal") and params.K <= params.gamma * abs(math.sin(params.dphi)):
        raise PtBroken(f"K={params.K} <= gamma |sin dphi| = "
                       f"{params.gamma * abs(math.sin(params.dphi))}")
    h = params.omega * np.eye(M) + params.K * chain_laplacian(M)
    if v == "nonreciprocal_uniformdiag":
        h[0, 0] = h[-1, -1] = params.omega + 2 * params.K
    zero = np.zeros((M, M))
    H = np.block([[h, zero], [zero, params.omega * np.eye(M)]])

    if v == "local":
        pos = math.sqrt(params.gamma) * np.eye(M, dtype=complex)
    elif v == "global":
        pos = math.sqrt(params.gamma) * np.ones((1, M), dtype=complex)
    else:
        pos = nonreciprocal_jumps(M, params.gamma, params.dphi)
    L = np.hstack([pos, np.zeros_like(pos)])
    model = ModelSpec(H, _drive(M), L, theta=params.E, label=f"trapped_{v}",
                      meta={"family": "trapped", **asdict(params)})
    return _require_stable(model, DynamicsTag.ZERO_DAMPING)


def trapped_hoppings(K: float, gamma: float, dphi: float) -> tuple[float, float]:
    """Right and left hopping of the chain ``-h_eff``.

    ``t_R`` multiplies ``x_j`` in the equation of ``x_{j+1}`` and ``t_L``
    multiplies ``x_{j+1}`` in that of ``x_j``.
    """
    s = gamma * math.sin(dphi)
    return K + s, K - s


_CAVITY_KEYS = {"M", "omega0", "delta", "zeta", "gamma", "E", "coupling"}
_TRAPPED_KEYS = {"M", "omega", "K", "gamma", "E", "dphi"}


def _cavity(hybrid: bool) -> Callable[..., ModelSpec]:
    def build(**kw) -> ModelSpec:
        kw = dict(kw)
        if hybrid:
            kw.setdefault("zeta", 0.1)
            kw.setdefault("gamma", 0.3)
        else:
            kw.setdefault("gamma", 0.0)
            if kw["gamma"]:
                raise ValueError("cavity_local has no global coupling")
        return build_cavity_array(CavityArrayParams(**kw))
    build.keys = _CAVITY_KEYS
    return build


def _trapped(variant: str) -> Callable[..., ModelSpec]:
    def build(**kw) -> ModelSpec:
        return build_trapped_array(TrappedArrayParams(variant=variant, **kw))
    build.keys = _TRAPPED_KEYS
    return build


MODEL_REGISTRY: dict[str, Callable[..., ModelSpec]] = {
    "cavity_local": _cavity(False),
    "cavity_hybrid": _cavity(True),
    "trapped_local": _trapped("local"),
    "trapped_global": _trapped("global"),
    "trapped_nonreciprocal": _trapped("nonreciprocal"),
    "trapped_nonreciprocal_uniformdiag": _trapped("nonreciprocal_uniformdiag"),
}


def build_model(name: str, **params) -> ModelSpec:
    """Build a registered model by name.

    Examples
    --------
    >>> build_model("trapped_local", M=4).label
    'trapped_local'
    """
    try:
        builder = MODEL_REGISTRY[name]
    except KeyError:
        raise ValueError(f"unknown model {name!r}; known: {sorted(MODEL_REGISTRY)}") from None
    unknown = set(params) - builder.keys
    if unknown:
        raise ValueError(f"unknown parameters for {name}: {sorted(unknown)}")
    return builder(**params)

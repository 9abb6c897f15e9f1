import numpy as np
import pytest

from gqfi.core import ModelSpec
from gqfi.dynamics import IntegratorConfig, run_trajectory
from gqfi.errors import CutoffExceeded, IllConditioned
from gqfi.fock import build_operators, fidelities, fidelity_qfis, fock_moments, integrate_pseudo_density
from gqfi.models import build_model


def gaussian_final(model, t, dt=0.005):
    return run_trajectory(model, IntegratorConfig(dt=dt, t_max=t, record_stride=10**9))[-1]


@pytest.fixture(scope="module")
def lossy():
    return build_model("cavity_local", M=1, delta=0.0)


@pytest.fixture(scope="module")
def lossy_qfi(lossy):
    return fidelity_qfis(lossy, t=10.0, cutoff=15, dt=2e-3)


def test_operators_commutator():
    ops = build_operators(build_model("cavity_local", M=2), cutoff=10)
    x, p = ops.quadratures[0], ops.quadratures[2]
    c = x @ p - p @ x
    # canonical commutator holds away from the truncation edge
    np.testing.assert_allclose(c[:8, :8], 1j * np.eye(8), atol=1e-12)
    assert ops.dim == 100 and ops.top.sum() == 100 - 64


def test_limits():
    m = build_model("cavity_local", M=3)
    with pytest.raises(ValueError):
        build_operators(m, 10)
    with pytest.raises(ValueError):
        build_operators(build_model("cavity_local", M=1), 5)


def test_equal_parameters_give_density_matrix(lossy):
    mu = integrate_pseudo_density(lossy, 0.1, 0.1, 3.0, cutoff=12, dt=2e-3)
    np.testing.assert_allclose(mu, mu.conj().T, atol=1e-12)
    assert np.trace(mu).real == pytest.approx(1.0, abs=1e-9)
    assert np.linalg.eigvalsh(mu).min() > -1e-9


def test_closed_undriven_vacuum_stays():
    m = build_model("cavity_local", M=1, delta=0.0)
    closed = ModelSpec(m.hamiltonian, np.zeros(2), np.zeros((0, 2)))
    mu = integrate_pseudo_density(closed, 0.0, 0.0, 5.0, cutoff=8, dt=5e-3)
    assert abs(mu[0, 0] - 1) < 1e-12
    assert np.abs(mu).sum() - abs(mu[0, 0]) < 1e-12


@pytest.mark.parametrize("name,M,kw", [("cavity_local", 1, {}), ("cavity_hybrid", 2, {}),
                                       ("trapped_local", 1, {})])
def test_moments_match_gaussian(name, M, kw):
    m = build_model(name, M=M, **kw)
    cutoff, t = (30, 2.0) if M == 1 else (14, 0.5)
    phi, G = fock_moments(m, t, cutoff=cutoff, dt=2e-3)
    s = gaussian_final(m, t, dt=2e-3)
    np.testing.assert_allclose(phi, s.phi, atol=1e-5)
    np.testing.assert_allclose(G, s.gamma, atol=1e-5)


def test_fidelity_ordering(lossy_qfi):
    assert lossy_qfi.F_G <= lossy_qfi.F_E + 1e-12 <= 1 + 1e-12


def test_undriven_gives_zero(lossy):
    m = ModelSpec(lossy.hamiltonian, np.zeros(2), lossy.jump_matrix)
    r = fidelity_qfis(m, t=1.0, cutoff=8, dt=1e-2)
    assert r.I_G == 0.0 and r.I_E == 0.0


def test_lossy_qfis_match_gaussian(lossy, lossy_qfi):
    s = gaussian_final(lossy, 10.0)
    assert lossy_qfi.I_G == pytest.approx(s.I_G, rel=0.01)
    assert lossy_qfi.I_E == pytest.approx(s.I_E, rel=0.01)
    assert lossy_qfi.I_G - lossy_qfi.I_E == pytest.approx(s.delta_I, abs=0.01 * s.I_G)


@pytest.mark.slow
def test_zero_damping_info_difference():
    m = build_model("trapped_local", M=1)
    f = fidelity_qfis(m, t=5.0, cutoff=20, dt=2e-3)
    s = gaussian_final(m, 5.0)
    assert f.I_G - f.I_E == pytest.approx(s.delta_I, rel=0.02)


def test_eps_halving_stable(lossy, lossy_qfi):
    half = fidelity_qfis(lossy, eps=5e-4, t=10.0, cutoff=15, dt=2e-3)
    assert half.I_G == pytest.approx(lossy_qfi.I_G, rel=0.005)


def test_cutoff_converged(lossy, lossy_qfi):
    more = fidelity_qfis(lossy, t=10.0, cutoff=20, dt=2e-3)
    assert more.I_G == pytest.approx(lossy_qfi.I_G, rel=0.002)
    assert more.I_E == pytest.approx(lossy_qfi.I_E, rel=0.002)


def test_cutoff_exceeded():
    m = build_model("cavity_local", M=1, delta=0.0, E=3.0)
    with pytest.raises(CutoffExceeded):
        integrate_pseudo_density(m, 3.0, 3.0, 10.0, cutoff=8, dt=5e-3)


def test_ill_conditioned(lossy):
    with pytest.raises(IllConditioned):
        fidelity_qfis(lossy, eps=1e-9, t=1.0, cutoff=10, dt=1e-2)
    with pytest.raises(IllConditioned):
        fidelity_qfis(lossy, eps=20.0, t=10.0, cutoff=10, dt=1e-2, leak_tol=1.0)


def test_fidelities_pure_states():
    a = np.array([1.0, 0.0])
    b = np.array([np.cos(0.3), np.sin(0.3)])
    mu = np.outer(a, b.conj())
    FG, FE = fidelities(mu)
    assert FG == pytest.approx(np.cos(0.3))
    assert FE == pytest.approx(1.0)

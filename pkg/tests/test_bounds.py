import numpy as np
import pytest
from hypothesis import given, strategies as st

from gqfi.bounds import check_bounds, flatness
from gqfi.models import build_model
from gqfi.spectral import asymptotic_report


def test_flatness_constant_is_zero():
    assert flatness([2.0, 2.0, 2.0]) == 0.0


def test_flatness_value():
    assert flatness([1.0, 1.5, 1.1]) == pytest.approx(0.5)


@given(st.lists(st.floats(0.1, 10), min_size=1, max_size=20), st.floats(0.1, 10))
def test_flatness_scale_invariant(vals, c):
    assert flatness(np.array(vals) * c) == pytest.approx(flatness(vals), abs=1e-12)


def test_linear_family_saturates_lower():
    Ms = np.arange(5, 50, 5)
    r = check_bounds(Ms, 3.0 * 2.0 * Ms, 2.0)
    assert r.lower_saturated and not r.upper_saturated
    assert r.r_lower == pytest.approx(3.0)
    assert r.valid


def test_quadratic_family_saturates_upper():
    Ms = np.arange(5, 50, 5)
    r = check_bounds(Ms, 0.7 * Ms ** 2, 1.0)
    assert r.upper_saturated and not r.lower_saturated
    assert r.r_upper == pytest.approx(0.7)


def test_per_m_resource():
    Ms = [4, 8, 16]
    res = [0.5, 0.6, 0.7]
    r = check_bounds(Ms, [2 * m * q for m, q in zip(Ms, res)], res)
    np.testing.assert_allclose(r.lower_ratio, 2.0)


def test_drift_flagged():
    Ms = np.arange(10, 60, 10)
    r = check_bounds(Ms, Ms ** 1.5, 1.0, tolerance=0.1)
    assert not r.lower_saturated and not r.upper_saturated


@pytest.mark.parametrize("name,end", [("cavity_local", "lower"), ("cavity_hybrid", "upper"),
                                      ("trapped_local", "lower"), ("trapped_global", "upper")])
def test_family_saturation(name, end):
    Ms = list(range(8, 33, 4))
    reps = [asymptotic_report(build_model(name, M=M), with_dephasing=False) for M in Ms]
    r = check_bounds(Ms, [x.opt_IG for x in reps], [x.nbar for x in reps])
    assert r.valid
    assert (r.lower_saturated if end == "lower" else r.upper_saturated)

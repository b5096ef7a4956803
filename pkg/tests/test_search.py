import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ppsur.errors import PPSError, UnknownObjectiveError
from ppsur.relations import otoc_pps_bound
from ppsur.search import SearchConfig, make_objective, optimize_postselection, params_to_state
from ppsur.states import SX, SY, SZ, PureState, make_qubit_state, random_pure_state

from conftest import KET0, same_ray, seeds

FIG2_W = np.array([[1, 1], [-1j, 1j]]) / np.sqrt(2)
SMALL = SearchConfig(restarts=4, max_iters=200)


def test_intelligent_residual_example():
    obj = make_objective("intelligent-residual-min", A=SX, B=SY, psi=KET0)
    res = optimize_postselection(obj, 2)
    assert res.best_objective <= 1e-6
    assert same_ray(res.best_phi.vec, KET0, tol=1e-3)


def test_otoc_example_beats_hand_picked():
    rho = make_qubit_state(1.0, np.pi / 11).projector()
    obj = make_objective("otoc-pps-bound-min", V=SZ, W_t=FIG2_W, rho=rho)
    res = optimize_postselection(obj, 2)
    hand = [otoc_pps_bound(SZ, FIG2_W, rho, np.array(p))
            for p in ([0, 1j], np.array([1, 1j]) / np.sqrt(2))]
    assert res.best_objective <= min(hand) + 1e-12


def test_stronger_rhs_example():
    obj = make_objective("stronger-ur-rhs-max", A=SZ, B=SX, psi=KET0)
    res = optimize_postselection(obj, 2, SMALL)
    assert res.best_objective > 1e-3


def test_result_contract():
    obj = make_objective("stronger-ur-rhs-max", A=SX, B=SY, psi=make_qubit_state(0.4, 0.1))
    res = optimize_postselection(obj, 2, SMALL)
    assert res.best_objective == pytest.approx(obj.fn(res.best_phi), abs=1e-10)
    assert len(res.trace) == SMALL.restarts
    assert res.best_objective == pytest.approx(max(res.trace), abs=1e-10)
    assert res.best_phi.vec[0].imag == 0 and res.best_phi.vec[0].real >= 0


def test_monotone_histories():
    rng = np.random.default_rng(3)
    psi = random_pure_state(3, rng)
    a, b = np.diag([1.0, 0, -1]), np.roll(np.eye(3), 1, 0) + np.roll(np.eye(3), -1, 0)
    for name, sign in (("stronger-ur-rhs-max", 1), ("intelligent-residual-min", -1)):
        res = optimize_postselection(make_objective(name, A=a, B=b, psi=psi), 3, SMALL)
        for h in res.history:
            assert all(sign * (y - x) >= 0 for x, y in zip(h, h[1:]))


def test_reproducible():
    obj = make_objective("otoc-pps-bound-min", V=SZ, W_t=FIG2_W, rho=np.eye(2) / 2)
    r1 = optimize_postselection(obj, 2, SMALL)
    r2 = optimize_postselection(obj, 2, SMALL)
    assert r1.best_objective == r2.best_objective and r1.trace == r2.trace
    assert np.array_equal(r1.best_phi.vec, r2.best_phi.vec)


@settings(max_examples=30)
@given(seeds, st.floats(0, 2 * np.pi))
def test_gauge_invariance(seed, alpha):
    rng = np.random.default_rng(seed)
    psi, phi = random_pure_state(3, rng), random_pure_state(3, rng)
    a, b = np.diag([1.0, 2, 3]), np.roll(np.eye(3), 1, 0) + np.roll(np.eye(3), -1, 0)
    rotated = PureState(np.exp(1j * alpha) * phi.vec)
    for obj in (make_objective("stronger-ur-rhs-max", A=a, B=b, psi=psi),
                make_objective("intelligent-residual-min", A=a, B=b, psi=psi),
                make_objective("otoc-pps-bound-min", V=a / 3, W_t=np.eye(3), rho=psi.to_density())):
        assert obj.fn(rotated) == pytest.approx(obj.fn(phi), abs=1e-12)


@given(st.lists(st.floats(-10, 10), min_size=4, max_size=4))
def test_params_map_to_unit_vectors(x):
    v = params_to_state(x, 3)
    assert np.linalg.norm(v) == pytest.approx(1)
    assert v[0].imag == 0


def test_errors():
    with pytest.raises(UnknownObjectiveError):
        make_objective("not-an-objective")
    with pytest.raises(UnknownObjectiveError):
        optimize_postselection("stronger-ur-rhs-max", 2)
    obj = make_objective("stronger-ur-rhs-max", A=SX, B=SY, psi=KET0)
    with pytest.raises(PPSError):
        optimize_postselection(obj, 3)
    with pytest.raises(PPSError):
        SearchConfig(restarts=0)
    with pytest.raises(PPSError):
        SearchConfig(step_init=1e-7, step_min=1e-6)

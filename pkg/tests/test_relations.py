import numpy as np
import pytest
from hypothesis import given

from ppsur.core import gram_schmidt_complete
from ppsur.errors import DimensionMismatchError, InvalidStateError, NoPostSelectionError, ResidualUndefinedError
from ppsur.relations import (combined_stronger, common_zero_postselection, equality_product,
                             equality_sum, inject_im_w_bug, intelligent_residual, mpur_bounds,
                             otoc_bounds, otoc_commutator_norm, otoc_value, pps_ur, pps_ur_mixed,
                             rhur, stronger_ur, tight_saturating_postselection, tighter_sum_ur,
                             unitary_pps_ur, w_ab)
from ppsur.states import (I2, SX, SY, SZ, ensemble_to_density, make_qubit_state,
                          random_density_matrix, random_observable, random_pure_state,
                          random_unitary)
from ppsur.stats import std_pps, std_standard, zero_uncertainty_postselection
from ppsur.verify import intelligent_witness

from conftest import KET0, KET1, PLUS, dims, same_ray, seeds

A_OBS2 = (I2 + SX) / np.sqrt(2)
B_OBS2 = (SZ + SX) / np.sqrt(2)
FIG2_W = np.array([[1, 1], [-1j, 1j]]) / np.sqrt(2)


def _inst(seed, d):
    rng = np.random.default_rng(seed)
    a, b, psi = random_observable(d, rng), random_observable(d, rng), random_pure_state(d, rng)
    phi = random_pure_state(d, rng)
    while abs(np.vdot(phi.vec, psi.vec)) <= 1e-6:
        phi = random_pure_state(d, rng)
    return rng, a, b, psi, phi


def _same_report(r1, r2, tol=1e-10):
    assert r1.lhs == pytest.approx(r2.lhs, abs=tol)
    assert r1.rhs_total == pytest.approx(r2.rhs_total, abs=tol)
    for k in r1.rhs_terms:
        assert r1.rhs_terms[k] == pytest.approx(r2.rhs_terms[k], abs=tol)


# -- examples -----------------------------------------------------------------

def test_rhur_examples():
    r = rhur(SX, SY, KET0)
    assert r.lhs == pytest.approx(1) and r.rhs_total == pytest.approx(1) and r.saturated
    r = rhur(SZ, SX, KET0)
    assert r.lhs == pytest.approx(0) and r.rhs_total == pytest.approx(0)
    with pytest.raises(DimensionMismatchError):
        rhur(SX, np.eye(3), KET0)


def test_pps_ur_obs2_and_reduction():
    r = pps_ur(A_OBS2, B_OBS2, KET0, PLUS)
    assert abs(r.lhs) <= 1e-12 and abs(r.rhs_total) <= 1e-12
    _same_report(pps_ur(SX, SY, PLUS, PLUS, True), rhur(SX, SY, PLUS, True))


def test_commuting_witness():
    a, b = np.diag([1.0, 2.0]), np.diag([3.0, 1.0])
    assert np.allclose(a @ b, b @ a)
    r = pps_ur(a, b, KET0, PLUS, include_schrodinger=True)
    # oracle: dA^2 = 1/2, dB^2 = 9/2, W_AB = 3/2 (real), <AB> = 3
    assert r.metadata["W_AB"] == pytest.approx(1.5)
    assert r.lhs == pytest.approx(2.25)
    assert r.rhs_terms["schrodinger"] == pytest.approx(2.25)
    assert r.rhs_total > 1e-3
    assert rhur(a, b, KET0, True).rhs_total == pytest.approx(0)


def test_common_zero_postselection_examples():
    phi = common_zero_postselection(A_OBS2, B_OBS2, KET0)
    assert np.allclose(phi.vec, PLUS)
    assert common_zero_postselection(SX, SZ, KET0) is None
    a = random_observable(3, np.random.default_rng(1))
    psi = random_pure_state(3, np.random.default_rng(2))
    assert np.allclose(common_zero_postselection(a, a, psi).vec,
                       zero_uncertainty_postselection(a, psi).vec)
    # |1>: A|1> ∝ |+>, B|1> ∝ |->; not parallel
    assert common_zero_postselection(A_OBS2, B_OBS2, KET1) is None
    with pytest.raises(NoPostSelectionError):
        common_zero_postselection(np.diag([0.0, 1.0]), SX, KET0)


def test_intelligent_residual_examples():
    res = [intelligent_residual(SX, SY, KET0, KET0, s) for s in (1, -1)]
    assert min(res) <= 1e-12 and max(res) > 1
    _, a, b, psi, phi = _inst(5, 3)
    assert min(intelligent_residual(a, b, psi, phi, s) for s in (1, -1)) > 1e-3
    assert pps_ur(a, b, psi, phi).gap > 1e-6
    with pytest.raises(ResidualUndefinedError):
        intelligent_residual(SZ, SX, KET0, KET0, 1)


def test_equality_examples():
    _, a, b, psi, phi = _inst(3, 2)
    assert abs(equality_product(a, b, psi, phi).residual) <= 1e-8
    assert abs(equality_sum(a, b, psi, phi).residual) <= 1e-8
    _, a, b, psi, phi = _inst(4, 3)
    for s in range(5):
        assert abs(equality_product(a, b, psi, phi, rng_seed=s).residual) <= 1e-8
    with pytest.raises(ResidualUndefinedError):
        equality_product(A_OBS2, B_OBS2, KET0, PLUS)
    # A = B: lhs = 2 dA^2
    r = equality_sum(a, a, psi, phi)
    assert r.lhs == pytest.approx(2 * std_pps(a, psi, phi) ** 2)
    assert abs(r.residual) <= 1e-8


def test_equality_sum_drop_sum_gives_inequality():
    _, a, b, psi, phi = _inst(8, 3)
    r = equality_sum(a, b, psi, phi)
    x = np.vdot(psi.vec, a.mat @ b.mat @ psi.vec).imag - w_ab(a, b, psi, phi).imag
    first = -2 * r.sign_chosen * x
    assert first >= 0 and r.lhs >= first - 1e-12


def test_pps_ur_mixed_examples(rng):
    a, b, psi, phi = (random_observable(2, rng), random_observable(2, rng),
                      random_pure_state(2, rng), random_pure_state(2, rng))
    for schro in (False, True):
        _same_report(pps_ur_mixed(a, b, psi.to_density(), phi, schro), pps_ur(a, b, psi, phi, schro))
    # ensemble members reproduce the rho-level left-side factors
    w = [0.2, 0.5, 0.3]
    states = [random_pure_state(2, rng) for _ in w]
    rho = ensemble_to_density(w, states)
    rep = pps_ur_mixed(a, b, rho, phi)
    per = [sum(p * std_pps(x, s, phi) ** 2 for p, s in zip(w, states)) for x in (a, b)]
    assert rep.lhs == pytest.approx(per[0] * per[1], abs=1e-9)


def test_stronger_ur_examples():
    phi = make_qubit_state(np.pi / 3, np.pi / 5)
    r = stronger_ur(SZ, SX, KET0, phi)
    assert r.metadata["eps_A"] == pytest.approx(1 - abs(np.vdot(phi.vec, SZ @ KET0)) ** 2)
    # first factor is eps_A alone (zero variance); rhs = [Im W_AB]^2 since <[Z,X]> = 0 at |0>
    assert r.rhs_total == pytest.approx(w_ab(SZ, SX, KET0, phi).imag ** 2)
    psi = make_qubit_state(np.pi / 2, 0)
    assert rhur(SX, SY, psi).rhs_total <= 1e-12
    # oracle (30-digit evaluation): 1/16
    assert stronger_ur(SX, SY, psi, phi).rhs_total == pytest.approx(0.0625, abs=1e-12)
    assert stronger_ur(SX, SY, psi, phi, True).rhs_total == pytest.approx(0.127279656777348679,
                                                                         abs=1e-12)
    _same_report(stronger_ur(SX, SY, psi, psi), rhur(SX, SY, psi))


def test_combined_examples():
    phi = make_qubit_state(np.pi / 3, np.pi / 5)
    psi = make_qubit_state(np.pi / 2, 0)
    r = combined_stronger(SX, SY, psi, phi)
    assert r.metadata["R_RH"] <= 1e-12 and r.rhs_total > 1e-6
    r = combined_stronger(SX, SY, psi, psi)
    assert r.lhs == pytest.approx(rhur(SX, SY, psi).lhs)
    assert r.rhs_total == pytest.approx(rhur(SX, SY, psi).rhs_total)


def test_mpur_examples(rng):
    r = mpur_bounds(SZ, SX, KET0, KET1)
    assert r.metadata["mpur1"] == pytest.approx(std_standard(SX, KET0) ** 2)
    for d in (2, 3, 4):
        a = np.diag(np.arange(1.0, d + 1))
        b = random_observable(d, rng).mat
        v = np.eye(d, dtype=complex)[0]
        perp = gram_schmidt_complete([v], d, 1)[1]
        r = mpur_bounds(a, b, v, perp)
        assert r.metadata["mpur2"] == pytest.approx(std_standard(b, v) ** 2 / 2)
    with pytest.raises(Exception):
        mpur_bounds(SZ, SX, KET0, PLUS)


def test_tighter_sum_examples():
    r = tighter_sum_ur(SX, SY, np.outer(KET0, KET0), KET0)
    assert r.lhs == pytest.approx(2) and r.gap >= -1e-9
    # direct arithmetic: auto sign -1, C = 2|1><0|, <0|C^dag rho C|0> = 0
    assert r.metadata["sign"] == -1 and r.rhs_total == pytest.approx(2)


def test_tight_saturating_examples():
    phi = tight_saturating_postselection(SX, SY, KET0, -1)
    assert same_ray(phi.vec, KET1)
    r = tighter_sum_ur(SX, SY, np.outer(KET0, KET0), phi, sign=1)
    assert abs(r.gap) <= 1e-8
    with pytest.raises(NoPostSelectionError):
        tight_saturating_postselection(SZ, SZ, KET0, 1)


def test_unitary_examples(rng):
    u = random_unitary(3, rng)
    rho, phi = random_density_matrix(3, rng), random_pure_state(3, rng)
    r = unitary_pps_ur(u, u, rho, phi)
    p = np.vdot(phi.vec, u.mat.conj().T @ rho.mat @ u.mat @ phi.vec).real
    assert r.rhs_total == pytest.approx(1 - p) and r.lhs == pytest.approx(1 - p)
    r = unitary_pps_ur(np.eye(3), np.eye(3), rho, phi)
    assert r.saturated
    with pytest.raises(InvalidStateError):
        unitary_pps_ur(2 * np.eye(3), np.eye(3), rho, phi)


def test_otoc_examples():
    rho0 = np.outer(KET0, KET0)
    assert otoc_value(SZ, I2, rho0) == pytest.approx(1)
    assert otoc_value(SZ, SZ, np.eye(2) / 2) == pytest.approx(1)
    # direct 2x2 evaluation: F = 0, so 2(1 - Re F) = 2
    assert otoc_value(SZ, FIG2_W, rho0) == pytest.approx(0, abs=1e-15)
    assert otoc_commutator_norm(SZ, FIG2_W, rho0) == pytest.approx(2)
    r = otoc_bounds(SZ, I2, rho0, [PLUS, KET1])
    assert r.rhs_total == pytest.approx(1) and r.metadata["bong"] == pytest.approx(1)
    assert np.allclose(r.metadata["pps"], 1)
    assert otoc_bounds(SZ, FIG2_W, rho0).metadata["pps"] == []


def test_otoc_fig2_oracle():
    rho = make_qubit_state(1.0, np.pi / 11).projector()
    phi1 = np.array([0, 1j])
    phi2 = np.array([1, 1j]) / np.sqrt(2)
    r = otoc_bounds(SZ, FIG2_W, rho, [phi1, phi2])
    # 30-digit oracle values
    assert r.rhs_total == pytest.approx(0.237069772057804528, abs=1e-12)
    assert r.metadata["bong"] == pytest.approx(0.814193827188755831, abs=1e-12)
    assert r.metadata["pps"][0] == pytest.approx(0.590024286406897155, abs=1e-12)
    assert r.metadata["pps"][1] == pytest.approx(0.841470984807896507, abs=1e-12)


# -- properties ----------------------------------------------------------------

@given(seeds, dims)
def test_soundness_pure(seed, d):
    rng, a, b, psi, phi = _inst(seed, d)
    reps = [rhur(a, b, psi), rhur(a, b, psi, True), pps_ur(a, b, psi, phi),
            pps_ur(a, b, psi, phi, True), stronger_ur(a, b, psi, phi),
            stronger_ur(a, b, psi, phi, True), combined_stronger(a, b, psi, phi),
            mpur_bounds(a, b, psi, gram_schmidt_complete([psi.vec], d, seed)[1])]
    assert min(r.gap for r in reps) >= -1e-9


@given(seeds, dims)
def test_soundness_mixed(seed, d):
    rng = np.random.default_rng(seed)
    a, b = random_observable(d, rng), random_observable(d, rng)
    rho, phi = random_density_matrix(d, rng), random_pure_state(d, rng)
    reps = [pps_ur_mixed(a, b, rho, phi, s, w) for s in (False, True) for w in (False, True)]
    reps += [tighter_sum_ur(a, b, rho, phi, s) for s in (None, 1, -1)]
    u, v = random_unitary(d, rng), random_unitary(d, rng)
    reps += [unitary_pps_ur(u, v, rho, phi), otoc_bounds(u, v, rho, [phi, random_pure_state(d, rng)])]
    assert min(r.gap for r in reps) >= -1e-9


@given(seeds, dims)
def test_reduction_chain(seed, d):
    _, a, b, psi, phi = _inst(seed, d)
    for s in (False, True):
        _same_report(pps_ur(a, b, psi, psi, s), rhur(a, b, psi, s))
        _same_report(pps_ur_mixed(a, b, psi.to_density(), phi, s), pps_ur(a, b, psi, phi, s))
    assert stronger_ur(a, b, psi, phi).lhs == pytest.approx(pps_ur(a, b, psi, phi).lhs, abs=1e-9)


@given(seeds, dims)
def test_w_ab_rank1_convention(seed, d):
    _, a, b, psi, phi = _inst(seed, d)
    assert pps_ur_mixed(a, b, psi.to_density(), phi).metadata["W_AB"] == pytest.approx(
        w_ab(a, b, psi, phi), abs=1e-12)


@given(seeds, dims)
def test_equalities_seed_independent(seed, d):
    _, a, b, psi, phi = _inst(seed, d)
    for s in range(5):
        assert abs(equality_sum(a, b, psi, phi, rng_seed=s).residual) <= 1e-8
        try:
            assert abs(equality_product(a, b, psi, phi, rng_seed=s).residual) <= 1e-8
        except ResidualUndefinedError:
            pass


@given(seeds, dims)
def test_intelligent_certificate(seed, d):
    rng, a, _, psi, phi = _inst(seed, d)
    b = intelligent_witness(a.mat, psi.vec, phi.vec, rng)
    assert np.allclose(b, b.conj().T)
    assert min(intelligent_residual(a, b, psi, phi, s) for s in (1, -1)) <= 1e-8
    assert pps_ur(a, b, psi, phi).gap <= 1e-8


@given(seeds, dims)
def test_tight_saturation(seed, d):
    rng = np.random.default_rng(seed)
    a, b, psi = random_observable(d, rng), random_observable(d, rng), random_pure_state(d, rng)
    for s in (1, -1):
        phi = tight_saturating_postselection(a, b, psi, -s)
        assert abs(tighter_sum_ur(a, b, psi.to_density(), phi, sign=s).gap) <= 1e-8


@given(seeds, dims)
def test_otoc_identity(seed, d):
    rng = np.random.default_rng(seed)
    v, w, rho = random_unitary(d, rng), random_unitary(d, rng), random_density_matrix(d, rng)
    f = otoc_value(v, w, rho)
    assert abs(f) <= 1 + 1e-9
    assert 2 * (1 - f.real) == pytest.approx(otoc_commutator_norm(v, w, rho), abs=1e-9)


def test_injected_bug_breaks_soundness():
    worst = 0.0
    with inject_im_w_bug():
        for seed in range(50):
            _, a, b, psi, phi = _inst(seed, 2)
            worst = min(worst, pps_ur(a, b, psi, phi).gap)
    assert worst < -1e-3
    _, a, b, psi, phi = _inst(0, 2)
    assert pps_ur(a, b, psi, phi).gap >= -1e-9

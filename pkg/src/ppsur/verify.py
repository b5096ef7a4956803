"""Seeded randomized property suites for every module.

Each property draws its own instances from ``default_rng([seed, index])`` so
results do not depend on which other properties run. A property reports how
many instances passed or failed, the worst value of its checked quantity and
that value minus the tolerance (``max_violation``, positive means failure).
"""
from dataclasses import asdict, dataclass, field

import numpy as np

from .core import (commutator, eig_hermitian, frobenius_norm,
                   gram_schmidt_complete, sqrt_psd)
from .errors import EqualityIndeterminateError, ResidualUndefinedError
from .figures import fig1_rows, fig2_rows, obs2_report
from .purity import (CERTIFIED_PURE_THRESHOLD, INDETERMINATE, MIXED, MIXED_FLAG_THRESHOLD, PURE,
                     detect_qubit, detect_qubit_qubit, detect_qubit_qutrit, detect_qutrit,
                     qutrit_basis)
from .relations import (combined_stronger, equality_product, equality_sum,
                        inject_im_w_bug, intelligent_residual, mpur_bounds,
                        otoc_bounds, otoc_commutator_norm, otoc_value, pps_ur,
                        pps_ur_mixed, rhur, stronger_ur, tight_saturating_postselection,
                        tighter_sum_ur, unitary_pps_ur)
from .states import (DensityMatrix, PureState, UnitaryOp, collapse_subsystem,
                     ensemble_to_density, partial_trace_b, purity,
                     random_density_matrix, random_observable, random_pure_state,
                     random_unitary, tensor_product)
from .stats import (metrology_report, std_pps, std_pps_infotheoretic, std_pps_mixed,
                    std_pps_mixed_weak, std_standard, zero_uncertainty_postselection)

GAP_TOL = 1e-9
EQUALITY_TOL = 1e-8
OVERLAP_FLOOR = 1e-6
SENSITIVITY_RATE = 0.99
MIXED_PURITY_MAX = 0.95


@dataclass
class PropertyResult:
    name: str
    tolerance: float
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    max_violation: float = -np.inf
    required_rate: float = 1.0
    notes: list = field(default_factory=list)

    def record(self, violation):
        """Record one instance; ``violation <= 0`` means it held."""
        violation = float(violation)
        if violation > 0 or not np.isfinite(violation):
            self.failed += 1
        else:
            self.passed += 1
        self.max_violation = max(self.max_violation, violation if np.isfinite(violation) else np.inf)

    @property
    def ok(self):
        n = self.passed + self.failed
        if n == 0:
            return False
        return self.passed / n >= self.required_rate

    def to_dict(self):
        d = asdict(self)
        d["ok"] = self.ok
        d["worst_value"] = _finite(self.max_violation + self.tolerance)
        d["max_violation"] = _finite(self.max_violation)
        return d


def _finite(x):
    """JSON-safe float: ``None`` when nothing was recorded, ``"inf"`` on overflow."""
    if x == -np.inf:
        return None
    return float(x) if np.isfinite(x) else "inf"


def _dim(dims, i):
    return dims[i % len(dims)]


def _post(rng, psi, d):
    """Random post-selection with ``|<phi|psi>| > 1e-6``."""
    while True:
        phi = random_pure_state(d, rng)
        if abs(np.vdot(phi.vec, psi)) > OVERLAP_FLOOR:
            return phi


def _mixed(rng, d, max_purity=1.0):
    while True:
        rho = random_density_matrix(d, rng)
        if purity(rho) <= max_purity:
            return rho


# -- core ---------------------------------------------------------------------

def p_core_eig(rng, samples, dims):
    r = PropertyResult("core.eig_reconstruction", 1e-8)
    for i in range(samples):
        m = random_observable(1 + i % 6, rng).mat
        w, vecs = eig_hermitian(m)
        rec = sum(l * np.outer(v, v.conj()) for l, v in zip(w, vecs))
        r.record(frobenius_norm(rec - m) - r.tolerance)
    return r


def p_core_gram_schmidt(rng, samples, dims):
    r = PropertyResult("core.gram_schmidt_orthonormal", 1e-10)
    for i in range(samples):
        d = 1 + i % 6
        k = int(rng.integers(0, d + 1))
        seeds = [rng.normal(size=d) + 1j * rng.normal(size=d) for _ in range(k)]
        B = np.column_stack(gram_schmidt_complete(seeds, d, int(rng.integers(2 ** 31))))
        r.record(np.max(np.abs(B.conj().T @ B - np.eye(d))) - r.tolerance)
    return r


def p_core_sqrt(rng, samples, dims):
    r = PropertyResult("core.sqrt_psd_idempotent", 1e-8)
    for i in range(samples):
        d = 1 + i % 6
        g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        m = g @ g.conj().T
        s = sqrt_psd(m)
        s2 = sqrt_psd(s @ s)
        r.record(max(frobenius_norm(s2 - s), frobenius_norm(s @ s - m) / max(1.0, frobenius_norm(m)))
                 - r.tolerance)
    return r


def p_core_commutator(rng, samples, dims):
    r = PropertyResult("core.commutator_traceless", 1e-10)
    for i in range(samples):
        d = _dim(dims, i)
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        b = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        r.record(abs(np.trace(commutator(a, b))) - r.tolerance)
    return r


# -- states -------------------------------------------------------------------

def p_states_ensemble(rng, samples, dims):
    r = PropertyResult("states.ensemble_valid", 0.0)
    for i in range(samples):
        d = _dim(dims, i)
        k = int(rng.integers(1, 5))
        w = rng.dirichlet(np.ones(k))
        try:
            ensemble_to_density(w, [random_pure_state(d, rng) for _ in range(k)])
            r.record(0)
        except Exception as exc:  # any validation failure is a property failure
            r.notes.append(repr(exc))
            r.record(1)
    return r


def p_states_collapse(rng, samples, dims):
    r = PropertyResult("states.collapse_sums_to_reduced_state", 1e-9)
    for i in range(samples):
        da, db = _dim(dims, i), _dim(dims, i + 1)
        rho = random_density_matrix(da * db, rng, rank=int(rng.integers(1, da * db + 1)))
        basis = gram_schmidt_complete([], db, int(rng.integers(2 ** 31)))
        total = sum(collapse_subsystem(rho, b, da, db) for b in basis)
        r.record(np.max(np.abs(total - partial_trace_b(rho, da, db))) - r.tolerance)
    return r


def p_states_tensor_unitary(rng, samples, dims):
    r = PropertyResult("states.tensor_of_unitaries", 0.0)
    for i in range(samples):
        try:
            tensor_product(random_unitary(_dim(dims, i), rng), random_unitary(_dim(dims, i + 1), rng))
            r.record(0)
        except Exception as exc:
            r.notes.append(repr(exc))
            r.record(1)
    return r


# -- pps-stats ----------------------------------------------------------------

def p_reduction(rng, samples, dims):
    r = PropertyResult("stats.pps_reduces_to_standard", 1e-10)
    for i in range(samples):
        d = _dim(dims, i)
        a, psi = random_observable(d, rng), random_pure_state(d, rng)
        r.record(abs(std_pps(a, psi, psi) - std_standard(a, psi)) - r.tolerance)
    return r


def p_infotheoretic(rng, samples, dims):
    r = PropertyResult("stats.identity_expansion", 1e-9)
    for i in range(samples):
        d = _dim(dims, i)
        a, psi, phi = random_observable(d, rng), random_pure_state(d, rng), random_pure_state(d, rng)
        ref = std_pps(a, psi, phi)
        worst = max(abs(std_pps_infotheoretic(a, psi, phi, int(rng.integers(2 ** 31))) - ref)
                    for _ in range(5))
        r.record(worst - r.tolerance)
    return r


def p_zero_uncertainty(rng, samples, dims):
    r = PropertyResult("stats.zero_uncertainty", 1e-9)
    for i in range(samples):
        d = _dim(dims, i)
        a, psi = random_observable(d, rng), random_pure_state(d, rng)
        r.record(std_pps(a, psi, zero_uncertainty_postselection(a, psi)) - r.tolerance)
    return r


def p_range(rng, samples, dims):
    r = PropertyResult("stats.pps_range", 1e-9)
    for i in range(samples):
        d = _dim(dims, i)
        a, psi, phi = random_observable(d, rng), random_pure_state(d, rng), random_pure_state(d, rng)
        top = np.sqrt(np.vdot(psi.vec, a.mat @ a.mat @ psi.vec).real)
        v = std_pps(a, psi, phi)
        r.record(max(-v, v - top) - r.tolerance)
    return r


def _ensemble(rng, d):
    k = int(rng.integers(2, 5))
    w = rng.dirichlet(np.ones(k))
    states = [random_pure_state(d, rng) for _ in range(k)]
    return w, states, ensemble_to_density(w, states)


def p_mixing_linearity(rng, samples, dims):
    r = PropertyResult("stats.mixing_linearity", 1e-9)
    for i in range(samples):
        d = _dim(dims, i)
        a, phi = random_observable(d, rng), random_pure_state(d, rng)
        w, states, rho = _ensemble(rng, d)
        lhs = std_pps_mixed(a, rho, phi) ** 2
        rhs = sum(p * std_pps(a, s, phi) ** 2 for p, s in zip(w, states))
        r.record(abs(lhs - rhs) - r.tolerance)
    return r


def p_hybrid_ge_quantum(rng, samples, dims):
    r = PropertyResult("stats.weak_deviation_dominates", 1e-10)
    for i in range(samples):
        d = _dim(dims, i)
        a, phi, rho = random_observable(d, rng), random_pure_state(d, rng), random_density_matrix(d, rng)
        r.record(std_pps_mixed(a, rho, phi) - std_pps_mixed_weak(a, rho, phi) - r.tolerance)
    return r


def p_rank1_weak(rng, samples, dims):
    r = PropertyResult("stats.rank1_deviations_agree", 1e-10)
    for i in range(samples):
        d = _dim(dims, i)
        a, psi = random_observable(d, rng), random_pure_state(d, rng)
        phi = _post(rng, psi.vec, d)
        rho = psi.to_density()
        r.record(abs(std_pps_mixed_weak(a, rho, phi) - std_pps_mixed(a, rho, phi)) - r.tolerance)
    return r


def p_metrology(rng, samples, dims):
    r = PropertyResult("stats.metrology_identities", 1e-9)
    for i in range(samples):
        d = _dim(dims, i)
        a, psi = random_observable(d, rng), random_pure_state(d, rng)
        phi_z = zero_uncertainty_postselection(a, psi)
        rep = metrology_report(a, psi, phi_z)
        rep_rand = metrology_report(a, psi, random_pure_state(d, rng))
        viol = max(abs(rep.fisher_phi - rep.fisher_max), abs(rep.p_z_identity_residual),
                   abs(rep_rand.fisher_identity_residual),
                   rep_rand.fisher_phi - rep_rand.fisher_max)
        r.record(viol - r.tolerance)
    return r


# -- relations: soundness ------------------------------------------------------

def _soundness(name, make):
    def prop(rng, samples, dims):
        r = PropertyResult(f"soundness.{name}", GAP_TOL)
        for i in range(samples):
            try:
                reps = make(rng, _dim(dims, i))
            except ResidualUndefinedError:
                r.skipped += 1
                continue
            r.record(max(-rep.gap for rep in reps) - r.tolerance)
        return r
    prop.__name__ = f"p_soundness_{name}"
    return prop


def _inst(rng, d):
    a, b, psi = random_observable(d, rng), random_observable(d, rng), random_pure_state(d, rng)
    return a, b, psi, _post(rng, psi.vec, d)


def _s_rhur(rng, d):
    a, b, psi, _ = _inst(rng, d)
    return [rhur(a, b, psi), rhur(a, b, psi, include_schrodinger=True)]


def _s_pps_ur(rng, d):
    a, b, psi, phi = _inst(rng, d)
    return [pps_ur(a, b, psi, phi), pps_ur(a, b, psi, phi, include_schrodinger=True)]


def _s_pps_ur_mixed(rng, d):
    a, b = random_observable(d, rng), random_observable(d, rng)
    rho, phi = random_density_matrix(d, rng), random_pure_state(d, rng)
    return [pps_ur_mixed(a, b, rho, phi, s, w) for s in (False, True) for w in (False, True)]


def _s_stronger(rng, d):
    a, b, psi, phi = _inst(rng, d)
    return [stronger_ur(a, b, psi, phi), stronger_ur(a, b, psi, phi, include_schrodinger=True)]


def _s_combined(rng, d):
    a, b, psi, phi = _inst(rng, d)
    return [combined_stronger(a, b, psi, phi)]


def _s_mpur(rng, d):
    a, b, psi, _ = _inst(rng, d)
    perp = gram_schmidt_complete([psi.vec], d, int(rng.integers(2 ** 31)))[1]
    return [mpur_bounds(a, b, psi, perp)]


def _s_tighter(rng, d):
    a, b = random_observable(d, rng), random_observable(d, rng)
    rho, phi = random_density_matrix(d, rng), random_pure_state(d, rng)
    return [tighter_sum_ur(a, b, rho, phi, s) for s in (None, 1, -1)]


def _s_unitary(rng, d):
    u, v = random_unitary(d, rng), random_unitary(d, rng)
    return [unitary_pps_ur(u, v, random_density_matrix(d, rng), random_pure_state(d, rng))]


def _s_otoc(rng, d):
    v, w = random_unitary(d, rng), random_unitary(d, rng)
    rho = random_density_matrix(d, rng, rank=int(rng.integers(1, d + 1)))
    return [otoc_bounds(v, w, rho, [random_pure_state(d, rng) for _ in range(3)])]


SOUNDNESS = {
    "rhur": _s_rhur, "pps_ur": _s_pps_ur, "pps_ur_mixed": _s_pps_ur_mixed,
    "stronger_ur": _s_stronger, "combined_stronger": _s_combined, "mpur_bounds": _s_mpur,
    "tighter_sum_ur": _s_tighter, "unitary_pps_ur": _s_unitary, "otoc_bounds": _s_otoc,
}


# -- relations: reductions, equalities, saturation ------------------------------

def _report_diff(r1, r2):
    diffs = [abs(r1.lhs - r2.lhs), abs(r1.rhs_total - r2.rhs_total)]
    diffs += [abs(r1.rhs_terms[k] - r2.rhs_terms[k]) for k in r1.rhs_terms]
    return max(diffs)


def p_reduction_chain(rng, samples, dims):
    r = PropertyResult("relations.reduction_chain", 1e-10)
    for i in range(samples):
        d = _dim(dims, i)
        a, b, psi, phi = _inst(rng, d)
        viol = 0.0
        for schro in (False, True):
            viol = max(viol, _report_diff(pps_ur(a, b, psi, psi, schro), rhur(a, b, psi, schro)))
            viol = max(viol, _report_diff(pps_ur_mixed(a, b, psi.to_density(), phi, schro),
                                          pps_ur(a, b, psi, phi, schro)))
        # the stronger-relation left side is the PPS product by a different route
        viol = max(viol, abs(stronger_ur(a, b, psi, phi).lhs - pps_ur(a, b, psi, phi).lhs) / 10)
        r.record(viol - r.tolerance)
    return r


def _equality(name, fn):
    def prop(rng, samples, dims):
        r = PropertyResult(f"relations.{name}", EQUALITY_TOL)
        for i in range(samples):
            d = _dim(dims, i)
            a, b, psi, phi = _inst(rng, d)
            try:
                worst = max(abs(fn(a, b, psi, phi, int(rng.integers(2 ** 31))).residual)
                            for _ in range(5))
            except (ResidualUndefinedError, EqualityIndeterminateError):
                r.skipped += 1
                continue
            r.record(worst - r.tolerance)
        return r
    prop.__name__ = f"p_{name}"
    return prop


def intelligent_witness(A, psi, phi, rng):
    """Hermitian ``B`` making ``(psi, phi)`` an intelligent pair for ``(A, B)``.

    ``B|psi>`` is chosen so its component orthogonal to ``phi`` equals
    ``i`` times that of ``A|psi>``; a random Hermitian block annihilating
    ``psi`` is added so ``B`` is generic elsewhere.
    """
    a, v, f = np.asarray(A, dtype=complex), np.asarray(psi, dtype=complex), np.asarray(phi, dtype=complex)
    d = v.shape[0]
    ra = a @ v - np.vdot(f, a @ v) * f
    u = 1j * ra
    u = u - (np.vdot(v, u) / np.vdot(v, f)) * f
    k = np.outer(u, v.conj()) + np.outer(v, u.conj())
    q = np.eye(d) - np.outer(v, v.conj())
    h = random_observable(d, rng).mat
    return k + q @ h @ q


def p_intelligent(rng, samples, dims):
    r = PropertyResult("relations.intelligent_certificate", 1e-8)
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]])
    zero = PureState.basis(2, 0)
    cases = [(sx, sy, zero, zero)]
    for i in range(samples):
        d = _dim(dims, i)
        a, psi = random_observable(d, rng), random_pure_state(d, rng)
        phi = _post(rng, psi.vec, d)
        cases.append((a.mat, intelligent_witness(a.mat, psi.vec, phi.vec, rng), psi, phi))
    for a, b, psi, phi in cases:
        res = min(intelligent_residual(a, b, psi, phi, s) for s in (1, -1))
        gap = max(pps_ur(a, b, psi, phi).gap, pps_ur(a, b, psi, phi, True).gap)
        # certificate: small residual must imply saturation
        r.record(max(res, gap) - r.tolerance)
    return r


def p_tight_saturation(rng, samples, dims):
    r = PropertyResult("relations.tight_saturation", 1e-8)
    for i in range(samples):
        d = _dim(dims, i)
        a, b, psi = random_observable(d, rng), random_observable(d, rng), random_pure_state(d, rng)
        rho = psi.to_density()
        s = tighter_sum_ur(a, b, rho, psi).metadata["sign"]
        phi = tight_saturating_postselection(a, b, psi, -s)
        r.record(abs(tighter_sum_ur(a, b, rho, phi, sign=s).gap) - r.tolerance)
    return r


def p_otoc_identity(rng, samples, dims):
    r = PropertyResult("relations.otoc_commutator_identity", 1e-9)
    for i in range(samples):
        d = _dim(dims, i)
        v, w, rho = random_unitary(d, rng), random_unitary(d, rng), random_density_matrix(d, rng)
        f = otoc_value(v, w, rho)
        r.record(max(abs(2 * (1 - f.real) - otoc_commutator_norm(v, w, rho)), abs(f) - 1) - r.tolerance)
    return r


def p_commuting_witness(rng, samples, dims):
    r = PropertyResult("relations.commuting_witness", 0.0)
    a, b = np.diag([1.0, 2.0]), np.diag([3.0, 1.0])
    psi = PureState.basis(2, 0)
    phi = PureState(np.array([1, 1]) / np.sqrt(2))
    rep = pps_ur(a, b, psi, phi, include_schrodinger=True)
    r.record(1e-3 - rep.rhs_total)
    return r


# -- figures ------------------------------------------------------------------

def p_fig1(rng, samples, dims):
    r = PropertyResult("figures.fig1", GAP_TOL)
    rows = fig1_rows()
    for t, rh_l, rh_r, s1, s3l, s3r in rows:
        r.record(max(s3r - s3l, rh_r - rh_l) - r.tolerance)
    for t, _, rh_r, s1, _, _ in fig1_rows([-np.pi / 2, np.pi / 2]):
        r.record(max(rh_r - 1e-12, 1e-6 - s1))
    return r


def p_fig2(rng, samples, dims):
    r = PropertyResult("figures.fig2", GAP_TOL)
    rows = np.array(fig2_rows())
    for t, f, bong, p1, p2, comb in rows:
        r.record(max(f - bong, f - p1, f - p2, f - comb, comb - bong) - r.tolerance)
    for col in (3, 4):
        r.record(1e-3 - np.max(rows[:, 2] - rows[:, col]))
    return r


def p_obs2(rng, samples, dims):
    r = PropertyResult("figures.obs2", 1e-12)
    rep = obs2_report()
    ur = rep["pps_ur"]
    r.record(max(rep["std_pps_A"], rep["std_pps_B"], abs(ur.lhs), abs(ur.rhs_total)) - r.tolerance)
    return r


# -- purity detection -----------------------------------------------------------

def _scenario_instance(kind, rng, mixed):
    """Random state and valid detector inputs for one purity scenario."""
    if kind == "qubit":
        rho = _mixed(rng, 2, MIXED_PURITY_MAX) if mixed else random_pure_state(2, rng).to_density()
        return rho, lambda th: detect_qubit(rho, random_observable(2, rng), random_pure_state(2, rng), th)
    if kind == "qutrit":
        rho = _mixed(rng, 3, MIXED_PURITY_MAX) if mixed else random_pure_state(3, rng).to_density()
        a = random_observable(3, rng)
        return rho, lambda th: detect_qutrit(rho, a, qutrit_basis(a, rng), th)
    if kind == "qubit_qubit":
        rho = _mixed(rng, 4, MIXED_PURITY_MAX) if mixed else random_pure_state(4, rng).to_density()
        return rho, lambda th: detect_qubit_qubit(
            rho, random_observable(2, rng), random_pure_state(2, rng),
            random_pure_state(2, rng), random_pure_state(2, rng), th)
    if kind == "qubit_qutrit":
        rho = _mixed(rng, 6, MIXED_PURITY_MAX) if mixed else random_pure_state(6, rng).to_density()
        a = random_observable(3, rng)
        return rho, lambda th: detect_qubit_qutrit(
            rho, a, qutrit_basis(a, rng), random_pure_state(2, rng), random_pure_state(2, rng), th)
    raise ValueError(kind)


PURITY_SCENARIOS = ("qubit", "qutrit", "qubit_qubit", "qubit_qutrit")


def _purity_props():
    props = []
    for kind in PURITY_SCENARIOS:
        def soundness(rng, samples, dims, kind=kind):
            r = PropertyResult(f"purity.{kind}.no_false_mixed", CERTIFIED_PURE_THRESHOLD)
            for _ in range(samples):
                rho, run = _scenario_instance(kind, rng, mixed=False)
                v = run(CERTIFIED_PURE_THRESHOLD)
                if v.verdict == INDETERMINATE:
                    r.skipped += 1
                    continue
                r.record(0 if v.verdict == PURE else max(v.gap_values))
            return r

        def sensitivity(rng, samples, dims, kind=kind):
            r = PropertyResult(f"purity.{kind}.detects_mixed", MIXED_FLAG_THRESHOLD,
                               required_rate=SENSITIVITY_RATE)
            for _ in range(samples):
                rho, run = _scenario_instance(kind, rng, mixed=True)
                v = run(MIXED_FLAG_THRESHOLD)
                if v.verdict == INDETERMINATE:
                    r.skipped += 1
                    continue
                r.record(0 if v.verdict == MIXED else 1)
                if v.verdict == MIXED and purity(rho) >= 1 - 1e-9:
                    r.notes.append("mixed verdict on a pure state")
            return r

        def consistency(rng, samples, dims, kind=kind):
            r = PropertyResult(f"purity.{kind}.consistency", 1e-9)
            for i in range(samples):
                rho, run = _scenario_instance(kind, rng, mixed=bool(i % 2))
                for th in (CERTIFIED_PURE_THRESHOLD, MIXED_FLAG_THRESHOLD):
                    v = run(th)
                    bad = v.verdict == MIXED and purity(rho) >= 1 - 1e-9
                    r.record(1 if bad else 0)
            return r
        props += [soundness, sensitivity, consistency]
    return props


def p_counterexample_family(rng, samples, dims):
    """Counterexample family: only the second post-selection reveals mixedness."""
    r = PropertyResult("purity.counterexample_family", MIXED_FLAG_THRESHOLD)
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    for i in range(max(1, samples // 10)):
        pb = random_pure_state(2, rng).vec
        pb_perp = gram_schmidt_complete([pb], 2, i)[1]
        pb2 = random_pure_state(2, rng).vec
        p = rng.uniform(0.2, 0.8)
        k0, k1 = np.array([1, 0], complex), np.array([0, 1], complex)
        rho = (p * np.kron(np.outer(k0, k0), np.outer(pb, pb.conj()))
               + (1 - p) * np.kron(np.outer(k1, k1), np.outer(pb_perp, pb_perp.conj())))
        v = detect_qubit_qubit(DensityMatrix(rho), sx, k0, pb, pb2, MIXED_FLAG_THRESHOLD)
        ok = (v.verdict == MIXED and v.gap_values[0] <= CERTIFIED_PURE_THRESHOLD
              and v.gap_values[1] > MIXED_FLAG_THRESHOLD)
        r.record(0 if ok else 1)
    return r


def all_properties():
    props = [p_core_eig, p_core_gram_schmidt, p_core_sqrt, p_core_commutator,
             p_states_ensemble, p_states_collapse, p_states_tensor_unitary,
             p_reduction, p_infotheoretic, p_zero_uncertainty, p_range, p_mixing_linearity,
             p_hybrid_ge_quantum, p_rank1_weak, p_metrology]
    props += [_soundness(name, make) for name, make in SOUNDNESS.items()]
    props += [p_reduction_chain, _equality("equality_product", equality_product),
              _equality("equality_sum", equality_sum), p_intelligent, p_tight_saturation,
              p_otoc_identity, p_commuting_witness, p_fig1, p_fig2, p_obs2]
    props += _purity_props() + [p_counterexample_family]
    return props


def run_property(prop, seed, samples, dims, index):
    rng = np.random.default_rng([seed, index])
    return prop(rng, samples, list(dims))


def run_verify(seed=0, samples=1000, dims=(2, 3, 4), inject_bug=False):
    """Run every property suite and summarise as a JSON-ready dict.

    With ``inject_bug`` the sign of ``Im W_AB`` is flipped inside the PPS
    product relations, which must make the suite fail.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    props = all_properties()
    if inject_bug:
        with inject_im_w_bug():
            results = [run_property(p, seed, samples, dims, k) for k, p in enumerate(props)]
    else:
        results = [run_property(p, seed, samples, dims, k) for k, p in enumerate(props)]

    soundness = [r for r in results if r.name.startswith("soundness.")]
    equalities = [r for r in results if r.name.startswith("relations.equality")]
    return {
        "seed": seed, "samples": samples, "dims": list(dims), "inject_bug": bool(inject_bug),
        "all_passed": all(r.ok for r in results),
        # largest negative gap seen (0 when every gap was non-negative)
        "max_gap_violation": _finite(max([0.0] + [r.max_violation + r.tolerance for r in soundness])),
        "max_equality_residual": _finite(max([0.0] + [r.max_violation + r.tolerance
                                                      for r in equalities])),
        "properties": {r.name: r.to_dict() for r in results},
    }

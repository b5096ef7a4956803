"""Uncertainty relations, equalities and OTOC bounds.

Every inequality returns a :class:`BoundReport` whose ``gap`` is
non-negative whenever the relation holds. For lower bounds on variances
``lhs`` is the variance side; for the OTOC upper bounds ``lhs`` is the bound
and ``rhs_total`` is ``|F|``, so ``gap >= 0`` keeps the same meaning.

``W_AB`` is ``<psi|A|phi><phi|B|psi>`` for a pure pre-selection and
``<phi|B rho A|phi>`` for a mixed one; the two coincide for rank-1 ``rho``.
"""
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, field

import numpy as np

from .core import anticommutator, commutator, fix_phase, gram_schmidt_complete, sqrt_psd
from .errors import (DimensionMismatchError, EqualityIndeterminateError,
                     NoPostSelectionError, PPSError, ResidualUndefinedError)
from .states import PureState, UnitaryOp, _mat, _vec
from .stats import _sqrt_clamped, std_pps, std_pps_mixed, std_pps_mixed_weak, zero_uncertainty_postselection

SATURATION_TOL = 1e-8

# Flipped only by the verify suite's mutation check.
_IM_W_SIGN = ContextVar("_IM_W_SIGN", default=1.0)


@contextmanager
def inject_im_w_bug():
    """Negate ``Im W_AB`` in the PPS product relations for the duration of the block."""
    token = _IM_W_SIGN.set(-1.0)
    try:
        yield
    finally:
        _IM_W_SIGN.reset(token)


def _cx(z):
    return [float(np.real(z)), float(np.imag(z))]


@dataclass(frozen=True)
class BoundReport:
    relation: str
    lhs: float
    rhs_terms: dict
    rhs_total: float
    gap: float
    saturated: bool
    metadata: dict = field(default_factory=dict)

    def to_dict(self):
        meta = {}
        for k, v in self.metadata.items():
            if isinstance(v, complex):
                meta[k] = _cx(v)
            elif isinstance(v, (list, tuple)):
                meta[k] = [_cx(x) if isinstance(x, complex) else x for x in v]
            else:
                meta[k] = v
        return {"relation": self.relation, "lhs": self.lhs, "rhs_terms": dict(self.rhs_terms),
                "rhs_total": self.rhs_total, "gap": self.gap, "saturated": self.saturated,
                "metadata": meta}


@dataclass(frozen=True)
class EqualityReport:
    relation: str
    lhs: float
    rhs: float
    residual: float
    sign_chosen: int

    def to_dict(self):
        return {"relation": self.relation, "lhs": self.lhs, "rhs": self.rhs,
                "residual": self.residual, "sign_chosen": self.sign_chosen}


def _report(name, lhs, terms, metadata=None, tol=SATURATION_TOL):
    total = float(sum(terms.values()))
    gap = float(lhs) - total
    return BoundReport(name, float(lhs), {k: float(v) for k, v in terms.items()},
                       total, gap, bool(gap <= tol), metadata or {})


def _same_dim(*xs):
    dims = {x.shape[0] for x in xs}
    if len(dims) != 1:
        raise DimensionMismatchError(f"operand dimensions differ: {sorted(dims)}")


def _pps_terms(ab_mean, w, include_schrodinger):
    """Commutator and Schrodinger terms shared by the pure and mixed PPS relations.

    ``ab_mean`` is ``<AB>`` (so ``<[A,B]>/2i = Im <AB>`` and
    ``<{A,B}>/2 = Re <AB>``).
    """
    terms = {"commutator": (ab_mean.imag - _IM_W_SIGN.get() * w.imag) ** 2}
    if include_schrodinger:
        terms["schrodinger"] = (ab_mean.real - w.real) ** 2
    return terms


def rhur(A, B, psi, include_schrodinger=False, saturation_tol=SATURATION_TOL):
    """Robertson(-Schrodinger) relation ``dA^2 dB^2 >= [<[A,B]>/2i]^2 (+ ...)``."""
    a, b, v = _mat(A), _mat(B), _vec(psi)
    _same_dim(a, b, v)
    ma, mb = np.vdot(v, a @ v).real, np.vdot(v, b @ v).real
    var_a = np.vdot(v, a @ a @ v).real - ma ** 2
    var_b = np.vdot(v, b @ b @ v).real - mb ** 2
    terms = {"commutator": (np.vdot(v, commutator(a, b) @ v) / 2j).real ** 2}
    if include_schrodinger:
        terms["schrodinger"] = (np.vdot(v, anticommutator(a, b) @ v).real / 2 - ma * mb) ** 2
    return _report("rhur", var_a * var_b, terms, {"mean_A": ma, "mean_B": mb}, saturation_tol)


def w_ab(A, B, psi, phi):
    """``<psi|A|phi><phi|B|psi>``."""
    a, b, v, f = _mat(A), _mat(B), _vec(psi), _vec(phi)
    return complex(np.vdot(v, a @ f) * np.vdot(f, b @ v))


def pps_ur(A, B, pre, post, include_schrodinger=False, saturation_tol=SATURATION_TOL):
    """Product relation for PPS deviations of a pure pre-selection."""
    a, b, psi, phi = _mat(A), _mat(B), _vec(pre), _vec(post)
    _same_dim(a, b, psi, phi)
    lhs = std_pps(a, psi, phi) ** 2 * std_pps(b, psi, phi) ** 2
    w = w_ab(a, b, psi, phi)
    terms = _pps_terms(complex(np.vdot(psi, a @ b @ psi)), w, include_schrodinger)
    return _report("pps_ur", lhs, terms, {"W_AB": w}, saturation_tol)


def common_zero_postselection(A, B, psi, tol=1e-9):
    """Common post-selection zeroing both PPS deviations, or ``None``.

    Exists iff ``A|psi>`` and ``B|psi>`` are parallel.
    """
    a, b, v = _mat(A), _mat(B), _vec(psi)
    av, bv = a @ v, b @ v
    na, nb = np.linalg.norm(av), np.linalg.norm(bv)
    if na <= 1e-10 or nb <= 1e-10:
        raise NoPostSelectionError("A|psi> or B|psi> vanishes")
    if abs(np.vdot(av / na, bv / nb)) > 1 - tol:
        return zero_uncertainty_postselection(a, v)
    return None


def _pps_residuals(a, b, psi, phi):
    ra = a @ psi - np.vdot(phi, a @ psi) * phi
    rb = b @ psi - np.vdot(phi, b @ psi) * phi
    return ra, rb, np.linalg.norm(ra), np.linalg.norm(rb)


def intelligent_residual(A, B, pre, post, sign):
    """Distance from the saturation condition of the PPS product relation.

    ``|| (A - <phi|A|psi>)|psi> - sign*i*(dA/dB)(B - <phi|B|psi>)|psi> ||``
    with the projections taken along ``phi``.
    """
    if sign not in (1, -1):
        raise PPSError("sign must be +1 or -1")
    a, b, psi, phi = _mat(A), _mat(B), _vec(pre), _vec(post)
    _same_dim(a, b, psi, phi)
    ra, rb, da, db = _pps_residuals(a, b, psi, phi)
    if da <= 1e-10 or db <= 1e-10:
        raise ResidualUndefinedError("a PPS deviation vanishes")
    return float(np.linalg.norm(ra - sign * 1j * (da / db) * rb))


def _im_ab_minus_w(a, b, psi, phi):
    return np.vdot(psi, a @ b @ psi).imag - w_ab(a, b, psi, phi).imag


def equality_product(A, B, pre, post, rng_seed=0, sign=None, denom_tol=1e-10):
    """Product of PPS deviations as an exact quotient over an orthogonal basis.

    The sign is chosen so the numerator ``-sign * (Im<AB> - Im W_AB)`` is
    non-negative unless ``sign`` is given.
    """
    a, b, psi, phi = _mat(A), _mat(B), _vec(pre), _vec(post)
    _same_dim(a, b, psi, phi)
    da, db = std_pps(a, psi, phi), std_pps(b, psi, phi)
    if da <= 1e-8 or db <= 1e-8:
        raise ResidualUndefinedError("a PPS deviation vanishes")
    x = _im_ab_minus_w(a, b, psi, phi)
    if sign is None:
        sign = -1 if x >= 0 else 1
    perp = gram_schmidt_complete([phi], phi.shape[0], rng_seed)[1:]
    op = a / da + sign * 1j * b / db
    s = sum(abs(np.vdot(psi, op @ k)) ** 2 for k in perp)
    denom = 1 - s / 2
    if abs(denom) <= denom_tol:
        raise EqualityIndeterminateError(f"denominator {denom:.3e} vanishes")
    lhs, rhs = da * db, -sign * x / denom
    return EqualityReport("equality_product", float(lhs), float(rhs), float(lhs - rhs), int(sign))


def equality_sum(A, B, pre, post, rng_seed=0, sign=None):
    """Sum of PPS variances as an exact identity over an orthogonal basis.

    ``dA^2 + dB^2 = -2*sign*(Im<AB> - Im W_AB) + sum_k |<phi_k|(A - sign*iB)|psi>|^2``
    with the sign making the first term non-negative.
    """
    a, b, psi, phi = _mat(A), _mat(B), _vec(pre), _vec(post)
    _same_dim(a, b, psi, phi)
    x = _im_ab_minus_w(a, b, psi, phi)
    if sign is None:
        sign = -1 if x >= 0 else 1
    perp = gram_schmidt_complete([phi], phi.shape[0], rng_seed)[1:]
    mv = (a - sign * 1j * b) @ psi
    rhs = -2 * sign * x + sum(abs(np.vdot(k, mv)) ** 2 for k in perp)
    lhs = std_pps(a, psi, phi) ** 2 + std_pps(b, psi, phi) ** 2
    return EqualityReport("equality_sum", float(lhs), float(rhs), float(lhs - rhs), int(sign))


def pps_ur_mixed(A, B, rho, phi, include_schrodinger=False, weak_deviations=False,
                 saturation_tol=SATURATION_TOL):
    """Product relation for a mixed pre-selection.

    With ``weak_deviations`` the left side uses the weak-value based
    deviations, which are never smaller.
    """
    a, b, r, f = _mat(A), _mat(B), _mat(rho), _vec(phi)
    _same_dim(a, b, r, f)
    dev = std_pps_mixed_weak if weak_deviations else std_pps_mixed
    lhs = dev(a, r, f) ** 2 * dev(b, r, f) ** 2
    w = complex(np.vdot(f, b @ r @ a @ f))
    terms = _pps_terms(complex(np.trace(a @ b @ r)), w, include_schrodinger)
    return _report("pps_ur_mixed", lhs, terms, {"W_AB": w}, saturation_tol)


def stronger_ur(A, B, psi, phi, include_schrodinger=False, saturation_tol=SATURATION_TOL):
    """Standard-system relation with post-selection corrections.

    ``(dA^2 + eps_A)(dB^2 + eps_B) >= [...]`` where
    ``eps_X = <X>^2 - |<phi|X|psi>|^2``. Non-trivial even when ``psi`` is an
    eigenstate of ``A``, as long as ``phi != psi``.
    """
    a, b, v, f = _mat(A), _mat(B), _vec(psi), _vec(phi)
    _same_dim(a, b, v, f)

    def parts(x):
        m = np.vdot(v, x @ v).real
        var = np.vdot(v, x @ x @ v).real - m ** 2
        return var, m ** 2 - abs(np.vdot(f, x @ v)) ** 2

    var_a, eps_a = parts(a)
    var_b, eps_b = parts(b)
    w = w_ab(a, b, v, f)
    terms = _pps_terms(complex(np.vdot(v, a @ b @ v)), w, include_schrodinger)
    meta = {"W_AB": w, "eps_A": float(eps_a), "eps_B": float(eps_b)}
    return _report("stronger_ur", (var_a + eps_a) * (var_b + eps_b), terms, meta, saturation_tol)


def combined_stronger(A, B, psi, phi, saturation_tol=SATURATION_TOL):
    """``max{L_RH, L_PPS} >= max{R_RH, R_PPS}``."""
    rh = rhur(A, B, psi)
    st = stronger_ur(A, B, psi, phi)
    lhs = max(rh.lhs, st.lhs)
    r_rh, r_pps = rh.rhs_total, st.rhs_total
    rep = _report("combined_stronger", lhs, {"bound": max(r_rh, r_pps)},
                  {"L_RH": rh.lhs, "L_PPS": st.lhs, "R_RH": r_rh, "R_PPS": r_pps,
                   "eps_A": st.metadata["eps_A"], "eps_B": st.metadata["eps_B"]},
                  saturation_tol)
    return rep


def mpur_bounds(A, B, psi, psi_perp, saturation_tol=SATURATION_TOL):
    """Both Maccone-Pati lower bounds on ``dA^2 + dB^2`` (comparison baseline).

    ``mpur1 = max_sign [sign*i<[A,B]> + |<psi|(A + sign*iB)|psi_perp>|^2]``,
    ``mpur2 = |<psi_perp_{A+B}|(A+B)|psi>|^2 / 2``.
    """
    a, b, v, vp = _mat(A), _mat(B), _vec(psi), _vec(psi_perp)
    _same_dim(a, b, v, vp)
    if abs(np.vdot(vp, v)) > 1e-9:
        raise PPSError("psi_perp is not orthogonal to psi")
    ma, mb = np.vdot(v, a @ v).real, np.vdot(v, b @ v).real
    lhs = (np.vdot(v, a @ a @ v).real - ma ** 2) + (np.vdot(v, b @ b @ v).real - mb ** 2)
    ic = (1j * np.vdot(v, commutator(a, b) @ v)).real
    first = max(s * ic + abs(np.vdot(v, (a + s * 1j * b) @ vp)) ** 2 for s in (1, -1))
    s_ab = a + b
    tilde = s_ab @ v - np.vdot(v, s_ab @ v) * v
    d_ab = np.linalg.norm(tilde)
    if d_ab <= 1e-10:
        raise ResidualUndefinedError("psi is an eigenstate of A+B")
    second = abs(np.vdot(tilde / d_ab, s_ab @ v)) ** 2 / 2
    rep = _report("mpur_bounds", lhs, {"bound": max(first, second)},
                  {"mpur1": float(first), "mpur2": float(second)}, saturation_tol)
    return rep


def _c_op(a, b, r, sign):
    m = a + sign * 1j * b
    return m - np.trace(m @ r) * np.eye(a.shape[0])


def tighter_sum_ur(A, B, rho, phi, sign=None, saturation_tol=SATURATION_TOL):
    """Post-selection dependent lower bound on ``dA^2 + dB^2`` in state ``rho``.

    ``rhs = sign*i*Tr([A,B] rho) + <phi|C^dag rho C|phi>`` with
    ``C = A + sign*iB - <A + sign*iB> I``. The bound is valid for both signs;
    by default the sign making the first term non-negative is used.
    """
    a, b, r, f = _mat(A), _mat(B), _mat(rho), _vec(phi)
    _same_dim(a, b, r, f)
    ic = (1j * np.trace(commutator(a, b) @ r)).real
    if sign is None:
        sign = 1 if ic >= 0 else -1
    c = _c_op(a, b, r, sign)
    ma, mb = np.trace(a @ r).real, np.trace(b @ r).real
    lhs = (np.trace(a @ a @ r).real - ma ** 2) + (np.trace(b @ b @ r).real - mb ** 2)
    terms = {"commutator": sign * ic, "postselection": np.vdot(f, c.conj().T @ r @ c @ f).real}
    return _report("tighter_sum_ur", lhs, terms, {"sign": int(sign)}, saturation_tol)


def tight_saturating_postselection(A, B, psi, sign):
    """Normalised ``(A + sign*iB - <A + sign*iB>)|psi>``.

    Since ``C_sign = C_{-sign}^dag``, this post-selection makes the
    ``-sign`` branch of :func:`tighter_sum_ur` an equality for pure ``psi``.
    """
    if sign not in (1, -1):
        raise PPSError("sign must be +1 or -1")
    a, b, v = _mat(A), _mat(B), _vec(psi)
    _same_dim(a, b, v)
    m = a + sign * 1j * b
    cv = m @ v - np.vdot(v, m @ v) * v
    if np.linalg.norm(cv) <= 1e-10:
        raise NoPostSelectionError("C|psi> vanishes; no saturating post-selection")
    return PureState(fix_phase(cv / np.linalg.norm(cv)))


def unitary_pps_ur(U, V, rho, phi, saturation_tol=SATURATION_TOL):
    """``dU dV >= |Tr(V U^dag rho) - <phi|U^dag rho V|phi>|`` for unitaries."""
    u = UnitaryOp(_mat(U)).mat
    w = UnitaryOp(_mat(V)).mat
    r, f = _mat(rho), _vec(phi)
    _same_dim(u, w, r, f)
    du = _sqrt_clamped(1 - np.vdot(f, u.conj().T @ r @ u @ f).real)
    dv = _sqrt_clamped(1 - np.vdot(f, w.conj().T @ r @ w @ f).real)
    rhs = abs(np.trace(w @ u.conj().T @ r) - np.vdot(f, u.conj().T @ r @ w @ f))
    return _report("unitary_pps_ur", du * dv, {"overlap": rhs}, {"dU": du, "dV": dv}, saturation_tol)


def otoc_value(V, W_t, rho):
    """``F = Tr(W_t^dag V^dag W_t V rho)``."""
    v, w, r = _mat(V), _mat(W_t), _mat(rho)
    _same_dim(v, w, r)
    return complex(np.trace(w.conj().T @ v.conj().T @ w @ v @ r))


def otoc_commutator_norm(V, W_t, rho):
    """``Tr(|[W_t, V]|^2 rho)``, which equals ``2(1 - Re F)`` for unitaries."""
    c = commutator(_mat(W_t), _mat(V))
    return float(np.trace(c.conj().T @ c @ _mat(rho)).real)


def _angle(x, what):
    if x > 1 + 1e-9:
        raise PPSError(f"{what} = {x:.12g} exceeds 1")
    return np.arccos(min(max(x, 0.0), 1.0))


def otoc_bong_bound(V, W_t, rho):
    v, w, r = _mat(V), _mat(W_t), _mat(rho)
    t1 = _angle(abs(np.trace(r @ v @ w)), "|Tr(rho V W)|")
    t2 = _angle(abs(np.trace(r @ w @ v)), "|Tr(rho W V)|")
    return float(np.cos(t1 - t2))


def otoc_pps_bound(V, W_t, rho, phi, sqrt_rho=None):
    v, w, r, f = _mat(V), _mat(W_t), _mat(rho), _vec(phi)
    s = sqrt_psd(r) if sqrt_rho is None else sqrt_rho
    t1 = _angle(np.linalg.norm(s @ (v @ w).conj().T @ f), "||sqrt(rho)(V W)^dag phi||")
    t2 = _angle(np.linalg.norm(s @ (w @ v).conj().T @ f), "||sqrt(rho)(W V)^dag phi||")
    return float(np.cos(t1 - t2))


def otoc_bounds(V, W_t, rho, phis=(), saturation_tol=SATURATION_TOL):
    """Bong and post-selected upper bounds on ``|F|`` and their minimum."""
    v, w, r = _mat(V), _mat(W_t), _mat(rho)
    _same_dim(v, w, r)
    f_abs = abs(otoc_value(v, w, r))
    bong = otoc_bong_bound(v, w, r)
    s = sqrt_psd(r)
    pps = [otoc_pps_bound(v, w, r, p, s) for p in phis]
    combined = min([bong] + pps)
    gap = combined - f_abs
    return BoundReport("otoc_bounds", float(combined), {"abs_F": float(f_abs)}, float(f_abs),
                       float(gap), bool(gap <= saturation_tol),
                       {"bong": bong, "pps": pps, "combined": float(combined)})

"""Weak values and standard deviations in standard and pre-/post-selected systems.

Notation used in docstrings: ``psi`` is the pre-selection, ``phi`` the
post-selection and ``rho`` a mixed pre-selection. "PPS deviation" refers to

    dA(psi, phi) = sqrt(<psi|A^2|psi> - |<phi|A|psi>|^2),

which reduces to the ordinary standard deviation when ``phi == psi``.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import gram_schmidt_complete, sqrt_psd
from .errors import (NoPostSelectionError, NumericalInconsistencyError, PPSError,
                     ResidualUndefinedError, WeakValueUndefinedError)
from .states import ADMISSIBILITY_TOL, PureState, _mat, _vec

RADICAND_CLAMP = 1e-12
RESIDUAL_TOL = 1e-10


def _sqrt_clamped(x, what="variance"):
    if x < -RADICAND_CLAMP:
        raise NumericalInconsistencyError(f"{what} radicand {x:.3e} is negative")
    return float(np.sqrt(max(x, 0.0)))


@dataclass(frozen=True, eq=False)
class AVDecomposition:
    """``A|psi> = mean |ref> + deviation |residual>`` with residual orthogonal to ref."""

    mean: complex
    deviation: float
    residual_state: PureState
    reference: PureState


@dataclass(frozen=True)
class MetrologyReport:
    fisher_phi: float
    fisher_max: float
    p_z: Optional[float]
    weak_value_at_phi_z: Optional[complex]
    fisher_identity_residual: float
    p_z_identity_residual: Optional[float]


def weak_value(A, pre, post, tol=ADMISSIBILITY_TOL):
    """``<phi|A|psi> / <phi|psi>``; may be complex and outside the spectrum of A."""
    a, psi, phi = _mat(A), _vec(pre), _vec(post)
    ov = np.vdot(phi, psi)
    if abs(ov) <= tol:
        raise WeakValueUndefinedError(f"|<phi|psi>| = {abs(ov):.3e} is below {tol:g}")
    return complex(np.vdot(phi, a @ psi) / ov)


def weak_value_mixed(A, rho, post, tol=ADMISSIBILITY_TOL):
    a, r, phi = _mat(A), _mat(rho), _vec(post)
    p = np.vdot(phi, r @ phi).real
    if p <= tol:
        raise WeakValueUndefinedError(f"<phi|rho|phi> = {p:.3e} is below {tol:g}")
    return complex(np.vdot(phi, a @ r @ phi) / p)


def std_standard(A, psi):
    a, v = _mat(A), _vec(psi)
    av = a @ v
    return float(np.linalg.norm(av - np.vdot(v, av) * v))


def std_pps(A, pre, post):
    a, psi, phi = _mat(A), _vec(pre), _vec(post)
    # norm of the part of A|psi> orthogonal to phi; avoids cancellation near zero
    apsi = a @ psi
    return float(np.linalg.norm(apsi - np.vdot(phi, apsi) * phi))


def _decompose(a, psi, ref):
    mean = complex(np.vdot(ref, a @ psi))
    tilde = a @ psi - mean * ref
    dev = float(np.linalg.norm(tilde))
    return mean, tilde, dev


def av_decompose(A, psi):
    """Split ``A|psi>`` along ``|psi>`` and its orthogonal residual."""
    v = _vec(psi)
    mean, tilde, dev = _decompose(_mat(A), v, v)
    if dev <= RESIDUAL_TOL:
        raise ResidualUndefinedError("psi is an eigenstate of A; the residual direction is undefined")
    ref = psi if isinstance(psi, PureState) else PureState(v)
    return AVDecomposition(mean, dev, PureState(tilde / dev), ref)


def pps_decompose(A, pre, post):
    """Split ``A|psi>`` along the post-selection ``|phi>`` and its orthogonal residual."""
    psi, phi = _vec(pre), _vec(post)
    mean, tilde, dev = _decompose(_mat(A), psi, phi)
    if dev <= RESIDUAL_TOL:
        raise ResidualUndefinedError("A|psi> is parallel to phi; the PPS deviation vanishes")
    ref = post if isinstance(post, PureState) else PureState(phi)
    return AVDecomposition(mean, dev, PureState(tilde / dev), ref)


def std_pps_infotheoretic(A, pre, post, rng_seed=0):
    """PPS deviation from the amplitudes along a basis orthogonal to ``phi``.

    Uses ``|<phi_k|A|psi>|`` directly, so basis vectors orthogonal to
    ``psi`` contribute well-defined terms.
    """
    a, psi, phi = _mat(A), _vec(pre), _vec(post)
    basis = gram_schmidt_complete([phi], phi.shape[0], rng_seed)
    apsi = a @ psi
    return float(np.sqrt(sum(abs(np.vdot(b, apsi)) ** 2 for b in basis[1:])))


def zero_uncertainty_postselection(A, psi):
    """Post-selection ``A|psi>/||A|psi>||`` at which the PPS deviation vanishes."""
    v = _mat(A) @ _vec(psi)
    n = np.linalg.norm(v)
    if n <= RESIDUAL_TOL:
        raise NoPostSelectionError("A|psi> = 0, no zero-uncertainty post-selection exists")
    return PureState.from_vector(v, fix_global_phase=True)


def max_uncertainty_postselection(A, psi, rng_seed=0):
    """A post-selection orthogonal to ``A|psi>`` and the maximal PPS deviation."""
    a, v = _mat(A), _vec(psi)
    d = v.shape[0]
    if d < 2:
        raise PPSError("maximum-uncertainty post-selection needs dim >= 2")
    apsi = a @ v
    value = float(np.sqrt(max(np.vdot(apsi, apsi).real, 0.0)))
    if value <= RESIDUAL_TOL:
        phi = gram_schmidt_complete([], d, rng_seed)[0]
    else:
        phi = gram_schmidt_complete([apsi], d, rng_seed)[1]
    return PureState.from_vector(phi, fix_global_phase=True), value


def metrology_report(A, psi, phi, sigma_pointer=1.0):
    """Fisher information of a post-selected weak measurement of ``A``.

    ``fisher_phi = 4 s^2 |<phi|A|psi>|^2`` and its ceiling
    ``fisher_max = 4 s^2 <psi|A^2|psi>``, reached at the zero-uncertainty
    post-selection. ``p_z`` is the probability of that post-selection; it and
    the weak value there are ``None`` when ``A|psi> = 0`` (or the weak value is
    undefined because ``<A> = 0``).
    """
    if sigma_pointer <= 0:
        raise PPSError("sigma_pointer must be positive")
    a, v, f = _mat(A), _vec(psi), _vec(phi)
    s4 = 4 * sigma_pointer ** 2
    second = np.vdot(v, a @ a @ v).real
    fisher_phi = s4 * abs(np.vdot(f, a @ v)) ** 2
    fisher_max = s4 * second
    fisher_res = fisher_phi - s4 * (second - std_pps(a, v, f) ** 2)

    p_z = wv = pz_res = None
    try:
        phi_z = zero_uncertainty_postselection(a, v)
    except NoPostSelectionError:
        phi_z = None
    if phi_z is not None:
        p_z = float(abs(np.vdot(phi_z.vec, v)) ** 2)
        try:
            wv = weak_value(a, v, phi_z)
        except WeakValueUndefinedError:
            wv = None
        if wv is not None:
            pz_res = float(std_standard(a, v) ** 2 - (1 - p_z) * p_z * abs(wv) ** 2)
    return MetrologyReport(float(fisher_phi), float(fisher_max), p_z, wv,
                           float(fisher_res), pz_res)


def std_pps_mixed(A, rho, phi):
    """``sqrt(Tr(A^2 rho) - <phi|A rho A|phi>)``; linear in rho under mixing.

    Evaluated as the Frobenius norm of ``(1 - |phi><phi|) A sqrt(rho)``.
    """
    a, r, f = _mat(A), _mat(rho), _vec(phi)
    m = a @ sqrt_psd(r)
    return float(np.linalg.norm(m - np.outer(f, f.conj() @ m)))


def std_pps_mixed_weak(A, rho, phi, tol=ADMISSIBILITY_TOL):
    """Weak-value based deviation ``sqrt(Tr(A^2 rho) - |A_w|^2 <phi|rho|phi>)``."""
    a, r, f = _mat(A), _mat(rho), _vec(phi)
    weak_value_mixed(a, r, f, tol)  # admissibility check
    return float(np.sqrt(std_pps_mixed(a, r, f) ** 2 + classical_uncertainty(r, a, f, tol)))


def classical_uncertainty(rho, A, phi, tol=ADMISSIBILITY_TOL):
    """Gap between the weak-value based and the quantum PPS variances.

    Equals ``<phi|A rho A|phi> - |<phi|A rho|phi>|^2 / <phi|rho|phi>``, the
    difference of the two squared deviations without the common
    ``Tr(A^2 rho)`` term. With ``u = sqrt(rho)|phi>`` and
    ``w = sqrt(rho) A|phi>`` this is the squared norm of the part of ``w``
    orthogonal to ``u``, which is how it is evaluated. Vanishes for pure ``rho``.
    """
    a, r, f = _mat(A), _mat(rho), _vec(phi)
    p = np.vdot(f, r @ f).real
    if p <= tol:
        raise WeakValueUndefinedError(f"<phi|rho|phi> = {p:.3e} is below {tol:g}")
    s = sqrt_psd(r)
    u, w = s @ f, s @ a @ f
    res = w - (np.vdot(u, w) / np.vdot(u, u)) * u
    return float(np.vdot(res, res).real)

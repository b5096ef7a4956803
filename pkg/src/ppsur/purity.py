"""Purity detection of an unknown pre-selection from the classical-uncertainty gap.

For a pure pre-selection the weak-value based PPS variance equals the
quantum PPS variance, so the gap ``C(rho, A, phi)`` vanishes. The detectors
below evaluate that gap for suitable post-selections and report ``mixed`` as
soon as one gap exceeds the threshold. The exact equality is replaced by an
absolute band: ``1e-8`` certifies purity, ``1e-6`` is the usual level for
flagging mixedness.
"""
from dataclasses import dataclass, field

import numpy as np

from .core import gram_schmidt_complete
from .errors import PPSError
from .states import _mat, _vec, collapse_subsystem
from .stats import classical_uncertainty

CERTIFIED_PURE_THRESHOLD = 1e-8
MIXED_FLAG_THRESHOLD = 1e-6
PROBABILITY_TOL = 1e-8
EIGENSTATE_TOL = 1e-6

PURE, MIXED, INDETERMINATE = "pure", "mixed", "indeterminate"


@dataclass(frozen=True)
class PurityVerdict:
    verdict: str
    gap_values: list
    threshold: float
    precondition_report: list
    metadata: dict = field(default_factory=dict)

    def to_dict(self):
        return {"verdict": self.verdict, "gap_values": list(self.gap_values),
                "threshold": self.threshold,
                "precondition_report": [dict(c) for c in self.precondition_report],
                "metadata": dict(self.metadata)}


def _check(name, passed, value=None):
    out = {"condition": name, "passed": bool(passed)}
    if value is not None:
        out["value"] = float(value)
    return out


def _verdict(gaps, threshold, checks, **meta):
    if not all(c["passed"] for c in checks):
        return PurityVerdict(INDETERMINATE, gaps, threshold, checks, meta)
    v = MIXED if any(g > threshold for g in gaps) else PURE
    return PurityVerdict(v, gaps, threshold, checks, meta)


def _eigen_defect(a, phi):
    """``||(A - <phi|A|phi>)|phi>||``; zero iff phi is an eigenvector of A."""
    return float(np.linalg.norm(a @ phi - np.vdot(phi, a @ phi) * phi))


def _dim_check(m, d, what):
    if m.shape[0] != d:
        raise PPSError(f"{what} must have dimension {d}, got {m.shape[0]}")


def _qubit_checks(r, a, f):
    defect = _eigen_defect(a, f)
    p = np.vdot(f, r @ f).real
    return [_check("phi is not an eigenstate of A", defect > EIGENSTATE_TOL, defect),
            _check("post-selection probability > 1e-8", p > PROBABILITY_TOL, p)]


def detect_qubit(rho, A, phi, threshold=CERTIFIED_PURE_THRESHOLD):
    """Single post-selection detector for a qubit.

    Requires ``phi`` not to be an eigenstate of ``A``; otherwise the gap
    vanishes for every ``rho`` and the verdict is ``indeterminate``.
    """
    r, a, f = _mat(rho), _mat(A), _vec(phi)
    for m, what in ((r, "rho"), (a, "A"), (f, "phi")):
        _dim_check(m, 2, what)
    checks = _qubit_checks(r, a, f)
    gaps = [classical_uncertainty(r, a, f)] if all(c["passed"] for c in checks) else []
    return _verdict(gaps, threshold, checks)


def _qutrit_checks(a, basis):
    B = np.column_stack(basis)
    ortho = float(np.max(np.abs(B.conj().T @ B - np.eye(3))))
    elem = abs(np.vdot(basis[0], a @ basis[1]))
    defects = [_eigen_defect(a, b) for b in basis]
    return [_check("basis orthonormal within 1e-9", ortho <= 1e-9, ortho),
            _check("|<phi_1|A|phi_2>| <= 1e-9", elem <= 1e-9, elem),
            # an eigenbasis of A makes every gap vanish identically
            _check("some basis state is not an eigenstate of A",
                   max(defects) > EIGENSTATE_TOL, max(defects))]


def _qutrit_gaps(r, a, basis):
    gaps, probs = [], []
    for b in basis:
        p = np.vdot(b, r @ b).real
        probs.append(float(p))
        if p > PROBABILITY_TOL:
            gaps.append(classical_uncertainty(r, a, b))
    return gaps, probs


def detect_qutrit(rho, A, basis, threshold=CERTIFIED_PURE_THRESHOLD):
    """Three post-selections forming a basis with ``<phi_1|A|phi_2> = 0``."""
    r, a = _mat(rho), _mat(A)
    _dim_check(r, 3, "rho")
    _dim_check(a, 3, "A")
    basis = [_vec(b) for b in basis]
    if len(basis) != 3:
        raise PPSError("qutrit detection needs exactly three basis states")
    checks = _qutrit_checks(a, basis)
    gaps, probs = _qutrit_gaps(r, a, basis)
    checks.append(_check("some post-selection probability > 1e-8", bool(gaps)))
    if not all(c["passed"] for c in checks):
        gaps = []
    return _verdict(gaps, threshold, checks, probabilities=probs)


def _collapsed(r, pb, dim_a, dim_b):
    m = collapse_subsystem(r, pb, dim_a, dim_b)
    p = float(np.trace(m).real)
    return (m / p if p > PROBABILITY_TOL else None), p


def detect_qubit_qubit(rho, A, phi_a, phi_b, phi_b_prime, threshold=CERTIFIED_PURE_THRESHOLD):
    """Two-qubit detector with post-selections ``phi_a (x) phi_b`` and ``phi_a (x) phi_b'``.

    The gap for ``A (x) I`` at a product post-selection is evaluated on the
    normalised collapsed state of subsystem A. Both gaps must vanish for a
    ``pure`` verdict.
    """
    r, a = _mat(rho), _mat(A)
    fa, fb, fb2 = _vec(phi_a), _vec(phi_b), _vec(phi_b_prime)
    _dim_check(r, 4, "rho")
    for m, what in ((a, "A"), (fa, "phi_a"), (fb, "phi_b"), (fb2, "phi_b_prime")):
        _dim_check(m, 2, what)
    ov = abs(np.vdot(fb, fb2))
    checks = [_check("|<phi_B|phi_B'>| > 1e-6", ov > 1e-6, ov)]
    defect = _eigen_defect(a, fa)
    checks.append(_check("phi_A is not an eigenstate of A", defect > EIGENSTATE_TOL, defect))
    gaps, probs = [], []
    for pb in (fb, fb2):
        ra, p = _collapsed(r, pb, 2, 2)
        probs.append(p)
        ok = ra is not None and np.vdot(fa, ra @ fa).real > PROBABILITY_TOL
        checks.append(_check("collapse probability > 1e-8", ok, p))
        if ok:
            gaps.append(classical_uncertainty(ra, a, fa))
    if not all(c["passed"] for c in checks):
        gaps = []
    return _verdict(gaps, threshold, checks, success_probabilities=probs)


def detect_qubit_qutrit(rho, A, basis_a, phi_b, phi_b_prime, threshold=CERTIFIED_PURE_THRESHOLD):
    """Qutrit (A) x qubit (B) detector: the qutrit criterion on both collapsed states."""
    r, a = _mat(rho), _mat(A)
    fb, fb2 = _vec(phi_b), _vec(phi_b_prime)
    _dim_check(r, 6, "rho")
    _dim_check(a, 3, "A")
    basis = [_vec(b) for b in basis_a]
    if len(basis) != 3:
        raise PPSError("basis_a needs exactly three states")
    ov = abs(np.vdot(fb, fb2))
    checks = _qutrit_checks(a, basis)
    checks.append(_check("|<phi_B|phi_B'>| > 1e-6", ov > 1e-6, ov))
    gaps, probs = [], []
    for pb in (fb, fb2):
        ra, p = _collapsed(r, pb, 3, 2)
        probs.append(p)
        sub = []
        if ra is not None:
            sub, _ = _qutrit_gaps(ra, a, basis)
        checks.append(_check("collapse probability > 1e-8", bool(sub), p))
        gaps.extend(sub)
    if not all(c["passed"] for c in checks):
        gaps = []
    return _verdict(gaps, threshold, checks, success_probabilities=probs)


def qutrit_basis(A, rng):
    """Random qutrit basis with ``<phi_1|A|phi_2> = 0``.

    ``phi_1`` is random, ``phi_2`` is orthogonal to both ``phi_1`` and
    ``A|phi_1>``, and ``phi_3`` completes the basis.
    """
    a = _mat(A)
    _dim_check(a, 3, "A")
    v = rng.normal(size=3) + 1j * rng.normal(size=3)
    v = v / np.linalg.norm(v)
    seed = int(rng.integers(2 ** 31))
    b = gram_schmidt_complete([v, a @ v], 3, seed)
    return [b[0], b[2], b[1]]

"""Dense complex linear-algebra kernel for small Hilbert spaces.

Everything here works on plain ``numpy`` arrays (``complex128``). Vectors are
1-D, operators are square 2-D arrays. Dimensions of interest are tiny
(d <= ~16) so clarity wins over speed.
"""
import numpy as np

from .errors import (DegenerateInputError, DimensionMismatchError,
                     NotHermitianError, NotPSDError)

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10
PHASE_TOL = 1e-10

__all__ = [
    "as_vector", "as_matrix", "mat_alg", "commutator", "anticommutator",
    "gram_schmidt_complete", "eig_hermitian", "sqrt_psd", "frobenius_norm",
    "fix_phase", "is_hermitian", "expect",
]


def as_vector(v):
    v = np.asarray(v, dtype=complex)
    if v.ndim != 1 or v.size == 0:
        raise DimensionMismatchError(f"expected a non-empty 1-D vector, got shape {v.shape}")
    return v


def as_matrix(m):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionMismatchError(f"expected a non-empty square matrix, got shape {m.shape}")
    return m


def _check_same_dim(*arrays):
    dims = {a.shape[0] for a in arrays}
    if len(dims) != 1:
        raise DimensionMismatchError(f"operand dimensions differ: {sorted(dims)}")


def mat_alg(op, *operands):
    """Apply a named elementary operation.

    Parameters
    ----------
    op : {'multiply', 'adjoint', 'trace', 'add', 'scale'}
    operands :
        ``multiply(X, Y)`` with X a matrix and Y a matrix or vector,
        ``adjoint(X)``, ``trace(X)``, ``add(X, Y)`` and ``scale(c, X)``.
    """
    if op == "multiply":
        x, y = operands
        x = as_matrix(x)
        y = np.asarray(y, dtype=complex)
        if y.ndim not in (1, 2) or y.shape[0] != x.shape[1]:
            raise DimensionMismatchError(f"cannot multiply {x.shape} by {y.shape}")
        if y.ndim == 2:
            as_matrix(y)
        return x @ y
    if op == "adjoint":
        (x,) = operands
        x = np.asarray(x, dtype=complex)
        if x.ndim == 1:
            return x.conj()
        return as_matrix(x).conj().T
    if op == "trace":
        (x,) = operands
        return complex(np.trace(as_matrix(x)))
    if op == "add":
        x, y = operands
        x, y = np.asarray(x, dtype=complex), np.asarray(y, dtype=complex)
        if x.shape != y.shape:
            raise DimensionMismatchError(f"cannot add {x.shape} and {y.shape}")
        return x + y
    if op == "scale":
        c, x = operands
        return complex(c) * np.asarray(x, dtype=complex)
    raise ValueError(f"unknown operation {op!r}")


def commutator(a, b):
    a, b = as_matrix(a), as_matrix(b)
    _check_same_dim(a, b)
    return a @ b - b @ a


def anticommutator(a, b):
    a, b = as_matrix(a), as_matrix(b)
    _check_same_dim(a, b)
    return a @ b + b @ a


def expect(op, psi):
    """``<psi|op|psi>`` as a complex number."""
    return complex(np.vdot(psi, op @ psi))


def fix_phase(v, tol=PHASE_TOL):
    """Rotate ``v`` so its first entry with modulus above ``tol`` is real positive."""
    v = as_vector(v)
    idx = np.flatnonzero(np.abs(v) > tol)
    if idx.size == 0:
        return v.copy()
    first = v[idx[0]]
    return v * (abs(first) / first)


def gram_schmidt_complete(seed_vectors, dim, rng_seed=0, tol=1e-10):
    """Orthonormalise ``seed_vectors`` and complete them to a basis of C^dim.

    The first ``len(seed_vectors)`` output vectors span the same space as the
    seeds (in order). Completion vectors come from complex Gaussian draws of
    ``numpy.random.default_rng(rng_seed)``, so the output is reproducible.

    Raises
    ------
    DegenerateInputError
        If the seed Gram matrix is rank deficient within ``tol``.
    """
    seeds = [as_vector(s) for s in seed_vectors]
    if len(seeds) > dim:
        raise DegenerateInputError(f"{len(seeds)} seeds cannot be independent in dimension {dim}")
    for s in seeds:
        if s.shape[0] != dim:
            raise DimensionMismatchError(f"seed of length {s.shape[0]} in dimension {dim}")

    if seeds:
        S = np.column_stack(seeds)
        norms = np.linalg.norm(S, axis=0)
        if np.any(norms <= tol):
            raise DegenerateInputError("zero seed vector")
        S = S / norms
        gram_eigs = np.linalg.eigvalsh(S.conj().T @ S)
        if gram_eigs[0] <= tol * max(gram_eigs[-1], 1.0):
            raise DegenerateInputError("seed vectors are linearly dependent")

    basis = []

    def _push(v):
        # two passes of modified Gram-Schmidt for stability
        for _ in range(2):
            for b in basis:
                v = v - np.vdot(b, v) * b
        n = np.linalg.norm(v)
        if n <= tol:
            return False
        basis.append(v / n)
        return True

    for s in seeds:
        if not _push(s.copy()):
            raise DegenerateInputError("seed vectors are linearly dependent")

    rng = np.random.default_rng(rng_seed)
    while len(basis) < dim:
        _push(rng.normal(size=dim) + 1j * rng.normal(size=dim))
    return basis


def is_hermitian(m, tol=HERMITIAN_TOL):
    m = as_matrix(m)
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def eig_hermitian(m, tol=HERMITIAN_TOL):
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.

    Returns ``(w, vecs)`` with ``vecs`` a list of 1-D arrays, ``vecs[k]``
    belonging to ``w[k]``.
    """
    m = as_matrix(m)
    if not is_hermitian(m, tol):
        raise NotHermitianError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    return w, [v[:, k].copy() for k in range(v.shape[1])]


def sqrt_psd(m, tol=PSD_TOL):
    """Hermitian PSD square root; eigenvalues in ``[-tol, 0)`` are clamped to zero."""
    w, vecs = eig_hermitian(m, tol=max(tol, HERMITIAN_TOL))
    if w[0] < -tol:
        raise NotPSDError(f"smallest eigenvalue {w[0]:.3e} is below -{tol:g}")
    V = np.column_stack(vecs)
    s = np.sqrt(np.clip(w, 0.0, None))
    return (V * s) @ V.conj().T


def frobenius_norm(m):
    m = np.asarray(m, dtype=complex)
    return float(np.sqrt(np.sum(np.abs(m) ** 2)))

"""State, observable and unitary value types plus basic state constructions."""
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
from scipy.stats import unitary_group

from .core import (HERMITIAN_TOL, PSD_TOL, as_matrix, as_vector, eig_hermitian,
                   fix_phase, frobenius_norm, is_hermitian)
from .errors import (DimensionMismatchError, InvalidStateError,
                     NotHermitianError, NotPSDError, PPSError)

NORM_TOL = 1e-10
UNITARY_TOL = 1e-9
ADMISSIBILITY_TOL = 1e-8

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit-norm ket. Construction fails if the norm is off by more than 1e-10."""

    vec: np.ndarray

    def __post_init__(self):
        v = as_vector(self.vec)
        n = np.vdot(v, v).real
        if abs(n - 1.0) > NORM_TOL:
            raise InvalidStateError(f"state norm^2 is {n:.12g}, expected 1")
        object.__setattr__(self, "vec", _frozen(v))

    @classmethod
    def from_vector(cls, v, fix_global_phase=False):
        """Normalise an arbitrary non-zero vector into a state."""
        v = as_vector(v)
        n = np.linalg.norm(v)
        if n <= NORM_TOL:
            raise InvalidStateError("cannot normalise a zero vector")
        v = v / n
        if fix_global_phase:
            v = fix_phase(v)
        return cls(v)

    @classmethod
    def basis(cls, dim, index):
        v = np.zeros(dim, dtype=complex)
        v[index] = 1.0
        return cls(v)

    @property
    def dim(self):
        return self.vec.shape[0]

    def projector(self):
        return np.outer(self.vec, self.vec.conj())

    def to_density(self):
        return DensityMatrix(self.projector())

    def overlap(self, other):
        """``<self|other>``."""
        return complex(np.vdot(self.vec, _vec(other)))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.vec, dtype=dtype)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace operator."""

    mat: np.ndarray
    tol: float = PSD_TOL

    def __post_init__(self):
        m = as_matrix(self.mat)
        if not is_hermitian(m, self.tol):
            raise NotHermitianError("density matrix is not Hermitian")
        m = (m + m.conj().T) / 2
        w = np.linalg.eigvalsh(m)
        if w[0] < -self.tol:
            raise NotPSDError(f"density matrix has eigenvalue {w[0]:.3e}")
        tr = np.trace(m).real
        if abs(tr - 1.0) > self.tol:
            raise InvalidStateError(f"density matrix trace is {tr:.12g}")
        object.__setattr__(self, "mat", _frozen(m))

    @property
    def dim(self):
        return self.mat.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.mat, dtype=dtype)


@dataclass(frozen=True, eq=False)
class Observable:
    """Hermitian operator with its spectral decomposition computed once."""

    mat: np.ndarray
    eigvals: np.ndarray = field(init=False, repr=False)
    eigvecs: tuple = field(init=False, repr=False)

    def __post_init__(self):
        m = as_matrix(self.mat)
        w, vecs = eig_hermitian(m, HERMITIAN_TOL)
        object.__setattr__(self, "mat", _frozen((m + m.conj().T) / 2))
        object.__setattr__(self, "eigvals", np.asarray(w, dtype=float))
        object.__setattr__(self, "eigvecs", tuple(_frozen(v) for v in vecs))

    @property
    def dim(self):
        return self.mat.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.mat, dtype=dtype)


@dataclass(frozen=True, eq=False)
class UnitaryOp:
    mat: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.mat)
        err = frobenius_norm(m.conj().T @ m - np.eye(m.shape[0]))
        if err > UNITARY_TOL:
            raise InvalidStateError(f"operator is not unitary (||U^dag U - I||_F = {err:.3e})")
        object.__setattr__(self, "mat", _frozen(m))

    @property
    def dim(self):
        return self.mat.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.mat, dtype=dtype)


PreSelection = Union[PureState, DensityMatrix]


@dataclass(frozen=True, eq=False)
class PPSContext:
    """A pre-/post-selection pair.

    ``overlap`` is ``<phi|psi>`` for a pure pre-selection and the success
    probability ``<phi|rho|phi>`` for a mixed one.
    """

    pre: PreSelection
    post: PureState
    overlap: complex
    weak_value_admissible: bool

    @classmethod
    def build(cls, pre, post, tol=ADMISSIBILITY_TOL):
        if pre.dim != post.dim:
            raise DimensionMismatchError("pre- and post-selection dimensions differ")
        if isinstance(pre, PureState):
            ov = complex(np.vdot(post.vec, pre.vec))
            ok = abs(ov) > tol
        elif isinstance(pre, DensityMatrix):
            ov = complex(np.vdot(post.vec, pre.mat @ post.vec).real)
            ok = ov.real > tol
        else:
            raise PPSError(f"unsupported pre-selection type {type(pre).__name__}")
        return cls(pre, post, ov, bool(ok))


def _vec(x):
    if isinstance(x, PureState):
        return x.vec
    return as_vector(x)


def _mat(x):
    if isinstance(x, (Observable, DensityMatrix, UnitaryOp)):
        return x.mat
    return as_matrix(x)


def make_qubit_state(theta, phase):
    """``cos(theta/2)|0> + exp(i*phase) sin(theta/2)|1>``."""
    return PureState(np.array([np.cos(theta / 2), np.exp(1j * phase) * np.sin(theta / 2)]))


def ensemble_to_density(weights, states):
    w = np.asarray(weights, dtype=float)
    if len(w) != len(states) or len(w) == 0:
        raise PPSError("weights and states must be non-empty and of equal length")
    if np.any(w < 0):
        raise InvalidStateError("negative ensemble weight")
    if abs(w.sum() - 1.0) > 1e-10:
        raise InvalidStateError(f"ensemble weights sum to {w.sum():.12g}")
    vecs = [_vec(s) for s in states]
    if len({v.shape[0] for v in vecs}) != 1:
        raise DimensionMismatchError("ensemble members have different dimensions")
    rho = sum(p * np.outer(v, v.conj()) for p, v in zip(w, vecs))
    return DensityMatrix(rho)


def purity(rho):
    m = _mat(rho)
    return float(np.real(np.trace(m @ m)))


def tensor_product(x, y):
    """Kronecker product; index ``(i_a, i_b)`` maps to ``i_a * dim_b + i_b``.

    Value types are preserved (state with state, density with density,
    observable with observable, unitary with unitary). Raw arrays must be of
    equal rank.
    """
    kinds = (PureState, DensityMatrix, Observable, UnitaryOp)
    for kind in kinds:
        if isinstance(x, kind) or isinstance(y, kind):
            if not (isinstance(x, kind) and isinstance(y, kind)):
                raise PPSError(f"cannot tensor {type(x).__name__} with {type(y).__name__}")
            if kind is PureState:
                return PureState(np.kron(x.vec, y.vec))
            return kind(np.kron(x.mat, y.mat))
    xa, ya = np.asarray(x, dtype=complex), np.asarray(y, dtype=complex)
    if xa.ndim != ya.ndim or xa.ndim not in (1, 2):
        raise PPSError("tensor_product needs two vectors or two square matrices")
    return np.kron(xa, ya)


def collapse_subsystem(rho_ab, phi_b, dim_a, dim_b):
    """Unnormalised ``<phi_B| rho_AB |phi_B>`` acting on subsystem A.

    Its trace is the probability of the post-selection ``phi_B`` on B.
    """
    m = _mat(rho_ab)
    pb = _vec(phi_b)
    if m.shape[0] != dim_a * dim_b or pb.shape[0] != dim_b:
        raise DimensionMismatchError(
            f"rho of dim {m.shape[0]} and phi_B of dim {pb.shape[0]} do not factor as {dim_a}x{dim_b}")
    r = m.reshape(dim_a, dim_b, dim_a, dim_b)
    return np.einsum("j,ajbk,k->ab", pb.conj(), r, pb)


def partial_trace_b(rho_ab, dim_a, dim_b):
    r = _mat(rho_ab).reshape(dim_a, dim_b, dim_a, dim_b)
    return np.einsum("ajbj->ab", r)


# -- seeded random instances -------------------------------------------------

def random_pure_state(dim, rng):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return PureState.from_vector(v)


def random_density_matrix(dim, rng, rank: Optional[int] = None):
    """Random density matrix of the given rank (full rank by default)."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return DensityMatrix(rho / np.trace(rho).real)


def random_observable(dim, rng, scale=1.0):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return Observable(scale * (g + g.conj().T) / 2)


def random_unitary(dim, rng):
    return UnitaryOp(unitary_group.rvs(dim, random_state=rng))

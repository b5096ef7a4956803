"""Derivative-free search over post-selected pure states.

A unit vector in C^d, modulo global phase, is parameterised by ``d-1``
hyperspherical angles and ``d-1`` relative phases (the first amplitude is
kept real and non-negative). Each restart runs a coordinate pattern search
whose step halves whenever a full sweep fails to improve, until it drops
below ``step_min``.
"""
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import sqrt_psd
from .errors import PPSError, ResidualUndefinedError, UnknownObjectiveError
from .relations import intelligent_residual, otoc_pps_bound, stronger_ur
from .states import PureState, _mat, _vec

BARRIER_TOL = 1e-6

OBJECTIVES = ("stronger-ur-rhs-max", "otoc-pps-bound-min", "intelligent-residual-min")


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 16
    max_iters: int = 400
    step_init: float = 0.5
    step_min: float = 1e-6
    rng_seed: int = 0

    def __post_init__(self):
        if self.restarts < 1 or self.max_iters < 1:
            raise PPSError("restarts and max_iters must be >= 1")
        if not (0 < self.step_min < self.step_init):
            raise PPSError("need 0 < step_min < step_init")


@dataclass(frozen=True)
class Objective:
    name: str
    fn: Callable
    maximize: bool
    dim: int


@dataclass(frozen=True, eq=False)
class SearchResult:
    best_phi: PureState
    best_objective: float
    trace: list
    converged: bool
    history: list = field(default_factory=list, repr=False)


def params_to_state(x, dim):
    """Map ``2(dim-1)`` real coordinates to a unit vector with real first entry."""
    x = np.asarray(x, dtype=float)
    angles, phases = x[:dim - 1], x[dim - 1:]
    amps = np.ones(dim)
    for k, t in enumerate(angles):
        amps[k] *= np.cos(t)
        amps[k + 1:] *= np.sin(t)
    return amps * np.exp(1j * np.concatenate(([0.0], phases)))


def make_objective(name, **operands):
    """Build a named objective over post-selections.

    ``stronger-ur-rhs-max`` needs ``A, B, psi`` (optional
    ``include_schrodinger``); ``intelligent-residual-min`` needs ``A, B, psi``;
    ``otoc-pps-bound-min`` needs ``V, W_t, rho``.
    """
    if name == "stronger-ur-rhs-max":
        a, b, psi = _mat(operands["A"]), _mat(operands["B"]), _vec(operands["psi"])
        schro = bool(operands.get("include_schrodinger", False))

        def fn(phi):
            if abs(np.vdot(phi.vec, psi)) <= BARRIER_TOL:
                return -np.inf
            return stronger_ur(a, b, psi, phi, include_schrodinger=schro).rhs_total
        return Objective(name, fn, True, psi.shape[0])

    if name == "intelligent-residual-min":
        a, b, psi = _mat(operands["A"]), _mat(operands["B"]), _vec(operands["psi"])

        def fn(phi):
            if abs(np.vdot(phi.vec, psi)) <= BARRIER_TOL:
                return np.inf
            try:
                return min(intelligent_residual(a, b, psi, phi, s) for s in (1, -1))
            except ResidualUndefinedError:
                return np.inf
        return Objective(name, fn, False, psi.shape[0])

    if name == "otoc-pps-bound-min":
        v, w, r = _mat(operands["V"]), _mat(operands["W_t"]), _mat(operands["rho"])
        s = sqrt_psd(r)

        def fn(phi):
            return otoc_pps_bound(v, w, r, phi, sqrt_rho=s)
        return Objective(name, fn, False, r.shape[0])

    raise UnknownObjectiveError(f"unknown objective {name!r}; expected one of {OBJECTIVES}")


def _pattern_search(f, x, step, step_min, max_iters):
    fx = f(x)
    history = [fx]
    converged = False
    for _ in range(max_iters):
        improved = False
        for i in range(x.size):
            for delta in (step, -step):
                y = x.copy()
                y[i] += delta
                fy = f(y)
                if fy < fx:
                    x, fx, improved = y, fy, True
                    break
        history.append(fx)
        if not improved:
            step *= 0.5
            if step < step_min:
                converged = True
                break
    return x, fx, history, converged


def optimize_postselection(objective, dim, config=SearchConfig()):
    """Multi-restart pattern search; returns the best restart (lowest index on ties)."""
    if isinstance(objective, str):
        raise UnknownObjectiveError("pass an Objective built with make_objective()")
    if dim < 2 or dim != objective.dim:
        raise PPSError(f"dimension {dim} does not match the objective (dim {objective.dim})")
    sgn = -1.0 if objective.maximize else 1.0

    def f(x):
        return sgn * objective.fn(PureState(params_to_state(x, dim)))

    rng = np.random.default_rng(config.rng_seed)
    best = None
    trace, histories = [], []
    for _ in range(config.restarts):
        x0 = np.concatenate((rng.uniform(0, np.pi, dim - 1), rng.uniform(0, 2 * np.pi, dim - 1)))
        x, fx, hist, conv = _pattern_search(f, x0, config.step_init, config.step_min, config.max_iters)
        trace.append(float(sgn * fx))
        histories.append([float(sgn * h) for h in hist])
        if best is None or fx < best[1]:
            best = (x, fx, conv)
    x, fx, conv = best
    phi = PureState.from_vector(params_to_state(x, dim), fix_global_phase=True)
    return SearchResult(phi, float(objective.fn(phi)), trace, bool(conv), histories)

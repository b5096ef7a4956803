"""Detecting a mixed pre-selection and tuning a post-selection numerically."""
import numpy as np

from ppsur import (SearchConfig, detect_qubit, detect_qubit_qubit, make_objective,
                   optimize_postselection)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]])
SZ = np.diag([1.0, -1.0]).astype(complex)
ket0, ket1 = np.eye(2, dtype=complex)
plus = (ket0 + ket1) / np.sqrt(2)

# %% Single qubit: the gap C(rho, A, phi) vanishes only for pure rho
for label, rho in (("|+><+|", np.outer(plus, plus)), ("I/2", np.eye(2) / 2)):
    v = detect_qubit(rho, SX, ket0)
    print(f"{label:7s} -> {v.verdict:13s} gaps {np.round(v.gap_values, 12)}")

# An eigenstate post-selection gives no information.
print("phi eigenstate of A ->", detect_qubit(np.eye(2) / 2, SZ, ket0).verdict)

# %% Two qubits: a correlated mixture only shows up under the second B outcome
rho = 0.5 * np.kron(np.outer(ket0, ket0), np.outer(ket0, ket0)) \
    + 0.5 * np.kron(np.outer(ket1, ket1), np.outer(ket1, ket1))
v = detect_qubit_qubit(rho, SX, ket0, ket0, plus, threshold=1e-6)
print("two-qubit verdict:", v.verdict, "gaps:", v.gap_values)

# %% Post-selection search
obj = make_objective("stronger-ur-rhs-max", A=SZ, B=SX, psi=ket0)
res = optimize_postselection(obj, 2, SearchConfig(restarts=8))
print("largest stronger-UR bound found:", res.best_objective)
print("at phi =", np.round(res.best_phi.vec, 6))

obj = make_objective("intelligent-residual-min", A=SX, B=SY, psi=ket0)
res = optimize_postselection(obj, 2)
print("smallest saturation residual:", res.best_objective, "converged:", res.converged)

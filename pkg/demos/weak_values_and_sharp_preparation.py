"""Weak values, post-selected deviations and a jointly sharp preparation.

A walk through the basic quantities on a single qubit. Run with
``python3 demos/weak_values_and_sharp_preparation.py``.
"""
import numpy as np

from ppsur import (PureState, common_zero_postselection, pps_ur, rhur, std_pps,
                   std_standard, weak_value)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]])
SZ = np.diag([1.0, -1.0]).astype(complex)
I2 = np.eye(2, dtype=complex)

# %% Anomalous weak values
# With nearly orthogonal pre- and post-selections the weak value of sigma_z
# leaves the spectrum [-1, 1] by a wide margin.
eps = 0.05
psi = PureState(np.array([np.cos(np.pi / 4 - eps), np.sin(np.pi / 4 - eps)]))
phi = PureState(np.array([np.cos(np.pi / 4), -np.sin(np.pi / 4)]))
print("weak value of sigma_z:", weak_value(SZ, psi, phi))

# %% Standard versus post-selected deviation
# Post-selecting on the pre-selection gives back the usual deviation.
psi = PureState(np.array([1, 1j]) / np.sqrt(2))
print("std_standard(sigma_x):", std_standard(SX, psi))
print("std_pps(sigma_x), phi = psi:", std_pps(SX, psi, psi))
print("std_pps(sigma_x), phi = |0>:", std_pps(SX, psi, np.array([1, 0])))

# %% Robertson bound versus the post-selected relation
ket0 = np.array([1, 0], dtype=complex)
print(rhur(SX, SY, ket0))

# %% Two non-commuting observables with zero post-selected spread
A = (I2 + SX) / np.sqrt(2)
B = (SZ + SX) / np.sqrt(2)
phi = common_zero_postselection(A, B, ket0)
print("common post-selection:", np.round(phi.vec, 12))
print("std_pps(A), std_pps(B):", std_pps(A, ket0, phi), std_pps(B, ket0, phi))
rep = pps_ur(A, B, ket0, phi)
print(f"pps_ur lhs {rep.lhs:.2e}  rhs {rep.rhs_total:.2e}")

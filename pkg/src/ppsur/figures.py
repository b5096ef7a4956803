"""Curve data for the two figure scenarios and the sharp-preparation example."""
import numpy as np

from .relations import common_zero_postselection, otoc_bounds, otoc_value, pps_ur, rhur, stronger_ur
from .states import I2, SX, SY, SZ, PureState, make_qubit_state
from .stats import std_pps

DEFAULT_GRID_POINTS = 721

FIG1_COLUMNS = ("theta", "rhur_lhs", "rhur_rhs", "strong1_rhs", "strong3_lhs", "strong3_rhs")
FIG2_COLUMNS = ("theta", "abs_F", "bong_bound", "pps_bound_phi1", "pps_bound_phi2", "combined_bound")

FIG2_V = SZ
FIG2_W = np.array([[1, 1], [-1j, 1j]], dtype=complex) / np.sqrt(2)

OBS2_A = (I2 + SX) / np.sqrt(2)
OBS2_B = (SZ + SX) / np.sqrt(2)


def theta_grid(n=DEFAULT_GRID_POINTS, lo=-np.pi, hi=np.pi):
    return np.linspace(lo, hi, n)


def amplitude_state(a, b):
    """``cos(a)|0> + exp(ib) sin(a)|1>`` (half-angle free form used for the OTOC post-selections)."""
    return PureState(np.array([np.cos(a), np.exp(1j * b) * np.sin(a)]))


def fig1_rows(grid=None, omega=np.pi / 3, eta=np.pi / 5, xi=0.0):
    """RHUR against the post-selected relations for sigma_x, sigma_y.

    ``psi = psi(theta, xi)`` sweeps the grid, ``phi = phi(omega, eta)`` is fixed;
    both use the half-angle Bloch parameterisation.
    """
    grid = theta_grid() if grid is None else np.asarray(grid, dtype=float)
    phi = make_qubit_state(omega, eta)
    rows = []
    for t in grid:
        psi = make_qubit_state(t, xi)
        rh = rhur(SX, SY, psi)
        s1 = stronger_ur(SX, SY, psi, phi)
        s3 = stronger_ur(SX, SY, psi, phi, include_schrodinger=True)
        rows.append((float(t), rh.lhs, rh.rhs_total, s1.rhs_total, s3.lhs, s3.rhs_total))
    return rows


def fig2_rows(grid=None, psi_phase=np.pi / 11, phi1=(np.pi / 2, np.pi / 2),
              phi2=(np.pi / 4, np.pi / 2), identity_w=False):
    """OTOC modulus with the Bong bound and two post-selected bounds.

    ``phi1``/``phi2`` are ``(a, b)`` pairs for ``cos(a)|0> + e^{ib} sin(a)|1>``.
    With ``identity_w`` the scrambling unitary is replaced by the identity.
    """
    grid = theta_grid() if grid is None else np.asarray(grid, dtype=float)
    w = np.eye(2, dtype=complex) if identity_w else FIG2_W
    phis = [amplitude_state(*phi1), amplitude_state(*phi2)]
    rows = []
    for t in grid:
        rho = make_qubit_state(t, psi_phase).projector()
        rep = otoc_bounds(FIG2_V, w, rho, phis)
        pb = rep.metadata["pps"]
        rows.append((float(t), abs(otoc_value(FIG2_V, w, rho)), rep.metadata["bong"],
                     pb[0], pb[1], rep.metadata["combined"]))
    return rows


def obs2_report(A=OBS2_A, B=OBS2_B, psi=None):
    """Sharp joint preparation of two non-commuting observables via a common post-selection."""
    psi = PureState.basis(2, 0) if psi is None else psi
    phi = common_zero_postselection(A, B, psi)
    out = {"A": A, "B": B, "psi": psi.vec, "common_post_selection": None}
    if phi is None:
        return out
    rep = pps_ur(A, B, psi, phi)
    out.update({
        "common_post_selection": phi.vec,
        "std_pps_A": std_pps(A, psi, phi),
        "std_pps_B": std_pps(B, psi, phi),
        "pps_ur": rep,
    })
    return out

"""Regenerate the two figure data sets and summarise them.

Writes ``fig1.csv`` and ``fig2.csv`` to the current directory through the
command-line front end, then reads them back with numpy. Plotting is left to
whatever tool the reader prefers.
"""
import numpy as np

from ppsur.cli import main

# %% Fig. 1: Robertson bound and two post-selected bounds against theta
main(["fig1", "--out", "fig1.csv"])
fig1 = np.genfromtxt("fig1.csv", delimiter=",", names=True)
poles = np.isclose(np.abs(fig1["theta"]), np.pi / 2)
print("rows:", fig1.size)
print("at theta = +-pi/2  rhur_rhs:", fig1["rhur_rhs"][poles], " strong1_rhs:", fig1["strong1_rhs"][poles])
print("strong3 slack (min):", np.min(fig1["strong3_lhs"] - fig1["strong3_rhs"]))

# %% Fig. 2: |F| and its upper bounds
main(["fig2", "--out", "fig2.csv"])
fig2 = np.genfromtxt("fig2.csv", delimiter=",", names=True)
for col in ("pps_bound_phi1", "pps_bound_phi2"):
    better = fig2[col] < fig2["bong_bound"] - 1e-3
    print(f"{col} beats the Bong bound by more than 1e-3 at {better.sum()} of {fig2.size} points")
print("max |F| - combined:", np.max(fig2["abs_F"] - fig2["combined_bound"]))

"""
Choosing the error probability
==============================

A smaller eps costs rate through Qinv(eps) but lowers the ceiling term;
psi is convex in eps, so golden-section search finds the best trade-off.
"""

import math

import numpy as np

from fblec.capacity import ec_at, grid_optimal_epsilon, optimal_epsilon

n, theta = 500, 0.01

for snr_db in (15, 20, 25, 30, 35):
    rho = 10 ** (snr_db / 10)
    r = optimal_epsilon(n, theta, rho)
    print(f"{snr_db} dB: eps* = {r.eps_star:.4e}, EC max = {r.ec_max:.5f} bpcu, "
          f"{r.iterations} iterations")

# compare with brute force on 10^4 log-spaced points
rho = 100.0
golden = optimal_epsilon(n, theta, rho)
eps_grid, ec_grid, grid, values = grid_optimal_epsilon(n, theta, rho)
print(f"\ngolden {golden.eps_star:.6e} vs grid {eps_grid:.6e}  "
      f"(rel diff {abs(golden.eps_star - eps_grid) / eps_grid:.2e})")

# the EC curve around the optimum
for e in golden.eps_star * np.array([0.01, 0.1, 0.5, 1, 2, 10, 100]):
    print(f"  eps = {e:.3e}  EC = {ec_at(n, e, theta, rho):.5f}")
print("psi at the grid minimum:", values.min(), " -> EC", -math.log(values.min()) / (n * theta))

"""
Power saving under a slope constraint
=====================================

Stop raising the SNR once the marginal EC gain per unit SNR falls to mu.
The saving eta (dB) and the EC given up, for two power caps.
"""

import math
import warnings

from fblec.errors import InfeasibleConstraint
from fblec.power import HighSnrValidityWarning, optimal_power

n, eps = 500, 1e-4
warnings.simplefilter("ignore", HighSnrValidityWarning)

for rho_max_db in (20, 30):
    print(f"\nrho_max = {rho_max_db} dB")
    print("  theta    mu      rho* dB  eta dB  EC*     EC max  loss")
    for theta in (0.005, 0.01, 0.02, 0.05, 0.1):
        for mu in (0.0, 1e-3, 1e-2):
            try:
                r = optimal_power(n, theta, eps, mu, 10 ** (rho_max_db / 10))
            except InfeasibleConstraint as exc:
                print("  ", exc)
                continue
            print(f"  {theta:<7} {mu:<7} {10 * math.log10(r.rho_star):7.2f} "
                  f"{r.eta_db:7.2f}  {r.ec_at_star:.4f}  {r.ec_at_max:.4f}  {r.ec_loss_rel:.3f}")

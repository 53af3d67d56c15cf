"""
Power-delay profile for a fixed EC
==================================

SNR needed to sustain an effective capacity ce as the delay exponent grows,
from the Lambert-W inversion, checked against bisection on the closed form.
Past theta = -ln(eps)/(n ce) no SNR is enough.
"""

import math

from fblec.capacity import ec_at, theta_upper_bound
from fblec.errors import InfeasibleEc
from fblec.power import required_snr

n, eps = 500, 1e-4


def invert(ce, theta, lo=1.0, hi=1e6):
    # EC is increasing in rho; bisect on a log scale
    while hi / lo > 1 + 1e-6:
        mid = math.sqrt(lo * hi)
        lo, hi = (mid, hi) if ec_at(n, eps, theta, mid) < ce else (lo, mid)
    return lo


for ce in (0.5, 1.0, 1.5):
    print(f"\nce = {ce} bpcu, theta bound = {theta_upper_bound(n, ce, eps):.5f}")
    for theta in (0.005, 0.0075, 0.01, 0.0125, 0.015, 0.02, 0.03):
        try:
            rho = required_snr(ce, n, theta, eps)
        except InfeasibleEc:
            print(f"  theta = {theta:<7} infeasible")
            continue
        print(f"  theta = {theta:<7} W-inversion {10 * math.log10(rho):6.2f} dB"
              f"   bisection {10 * math.log10(invert(ce, theta)):6.2f} dB")

"""
Special functions behind the closed forms
=========================================

Incomplete gamma at large negative order, the normal tail and its inverse,
and the principal Lambert W branch.
"""

import math

from fblec.specfun import (gaussian_q, gaussian_q_inv, gen_exp_integral, lambert_w0,
                           scaled_upper_inc_gamma, upper_inc_gamma)

# the error probability enters the rate only through Qinv
for eps in (1e-2, 1e-4, 1e-6, 1e-9):
    x = gaussian_q_inv(eps)
    print(f"Qinv({eps:g}) = {x:.12f}   Q(Qinv) = {gaussian_q(x):.6e}")

# Gamma(a, x) for the orders alpha +/- 1 that show up with n = 500
x = 1e-3
for theta in (0.001, 0.01, 0.1):
    alpha = -theta * 500 / math.log(2)
    for a in (alpha - 1, alpha + 1):
        g = upper_inc_gamma(a, x)
        s = scaled_upper_inc_gamma(a, x)
        print(f"a={a:9.4f}  Gamma(a, {x}) = {g:.6e}   scaled = {s:.12f}")

# the scaled form stays O(1) even where Gamma itself overflows
print("Gamma(-200, 1e-4) =", upper_inc_gamma(-200.0, 1e-4))
print("scaled            =", scaled_upper_inc_gamma(-200.0, 1e-4))

# E_nu(x) = x^(nu-1) Gamma(1-nu, x)
print("E_1(1)   =", gen_exp_integral(1.0, 1.0))
print("E_100(.1) =", gen_exp_integral(100.0, 0.1), " ~ e^-x/(x+nu-1) =", math.exp(-0.1) / 100.1)

# Lambert W, including the branch point
for v in (-math.exp(-1), -0.2, 0.0, 1.0, math.e, 1e6):
    w = lambert_w0(v)
    print(f"W({v: .6f}) = {w: .15f}")

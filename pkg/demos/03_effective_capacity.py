"""
Effective capacity versus SNR
=============================

Quadrature oracle against the incomplete-gamma closed form, with the
high-SNR ceiling -ln(eps)/(n theta) and the classical Shannon-rate EC.
"""

from fblec.capacity import Method, ec_upper_bound, effective_capacity, shannon_ec
from fblec.rate import SystemParams

n, eps = 500, 1e-4

for theta in (0.001, 0.01, 0.1):
    bound = ec_upper_bound(n, theta, eps)
    print(f"\ntheta = {theta}   ceiling = {bound:.4f} bpcu")
    print(" SNR dB   closed    oracle    rel err   shannon")
    for snr_db in range(0, 41, 5):
        p = SystemParams(n, eps, theta, 10 ** (snr_db / 10))
        closed = effective_capacity(p, Method.CLOSED_FORM).ec
        oracle = effective_capacity(p, Method.ORACLE).ec
        print(f"{snr_db:6d}  {closed:8.4f}  {oracle:8.4f}  {abs(closed - oracle) / oracle:9.2e}"
              f"  {shannon_ec(n, theta, p.rho):8.4f}")

# the closed form keeps the exp(beta*gamma) factor only to second order; with
# beta = 0 (eps = 0.5) nothing is truncated and both backends coincide
p = SystemParams(n, 0.5, 0.01, 316.0)
a = effective_capacity(p, Method.CLOSED_FORM).ec
b = effective_capacity(p, Method.ORACLE).ec
print(f"\neps = 0.5: closed {a:.12f}  oracle {b:.12f}")

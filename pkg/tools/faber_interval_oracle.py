"""Oracle for the Faber coefficients of exp on [-1, 1].

On the interval the Faber polynomials are F_0 = 1, F_m = 2 T_m, so the
Faber coefficients of f coincide with the Chebyshev coefficients
c_m = (1/pi) int_0^pi f(cos t) cos(m t) dt (with c_0 halved into F_0).
For f = exp these are the modified Bessel values I_m(1).  This script
computes them by raw 10^6-point trapezoidal quadrature -- independently of
the package's FFT-on-the-exterior-map route -- and prints values to freeze
into the tests, cross-checked against scipy.special.iv.
"""

import numpy as np
from scipy import special

N = 1_000_000
t = np.pi * (np.arange(N) + 0.5) / N  # midpoint rule on (0, pi)

for m in range(9):
    integrand = np.exp(np.cos(t)) * np.cos(m * t)
    c_m = integrand.sum() * (np.pi / N) / np.pi
    print(f"m={m}: quadrature={c_m:.16g}  scipy_iv={special.iv(m, 1.0):.16g}  "
          f"delta={abs(c_m - special.iv(m, 1.0)):.2e}")

"""Oscillatory moments W_n(omega) = int_{-1}^{1} T_n(y) exp(i omega y) dy.

Every Filon rule in the package is built from these numbers, so we start by
checking them against brute-force quadrature.
"""
import numpy as np

from fccs.filon_weights import moments, oracle_table, weights_osc

# Low-order moments have closed forms.
omega = 10.0
W = weights_osc(omega, 8).weights
print("W_0:", W[0], "closed form:", 2 * np.sin(omega) / omega)

# The recursion is forward for n < omega and closed by a Bessel series beyond,
# so high degrees stay accurate even when omega is large.
for omega in (2.5, 101.53, 1e4):
    diff = np.abs(weights_osc(omega, 512).weights - oracle_table(omega, 512)).max()
    print(f"omega={omega:>8}: max |W_n - oracle| over n <= 512 = {diff:.1e}")

# Below |omega| = 1 the package switches to Clenshaw-Curtis; moments() covers both.
print("omega=0.5:", moments(0.5, 3))

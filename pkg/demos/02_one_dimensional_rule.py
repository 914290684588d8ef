"""The 1D Filon-Clenshaw-Curtis rule on nested Chebyshev grids."""
import numpy as np

from fccs.cheb1d import cc_nodes
from fccs.fcc1d import build_rule, integrate_1d

# Level l has 2^(l-1) + 1 Clenshaw-Curtis points (a single midpoint at l = 1).
for level in range(1, 5):
    print(level, np.round(cc_nodes(level).nodes, 4))

# At omega = 0 the level-2 rule is Simpson's rule.
print("Simpson:", build_rule(0.0, 2).node_weights.real)

# For oscillatory integrals the error falls as omega grows at a fixed level.
g = lambda y: 1.0 / (2.0 + y)
for omega in (10.0, 100.0, 1000.0):
    exact = integrate_1d(g, omega, 12)
    approx = integrate_1d(g, omega, 3)
    print(f"omega={omega:>6}: |I - I_3| = {abs(exact - approx):.2e}, |I| = {abs(exact):.2e}")

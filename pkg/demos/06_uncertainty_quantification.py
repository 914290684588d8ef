"""Expected value of the wave field at x = 1 in a random medium.

n(x, y) = 1 + sum_j y_j exp(-j) sin(j pi x) with y uniform on [-1, 1]^d.  The
expectation splits into two oscillatory integrals and one smooth integral over
y; all three reuse the same HNA solves.
"""
from fccs.fields import builtin_model
from fccs.uq import Adaptive, HNACache, Standard, expectation_u1, reference_expectation

k = 32.0
model = builtin_model(2)
ref = reference_expectation(1.0, k, model, gauss_points_per_dim=20, fem_h=2.0**-12)
cache = HNACache(k, model, 1.0)
for r in (5, 7, 9):
    res = expectation_u1(1.0, k, model, Standard(r), cache=cache)
    print(f"standard r={r}: E[u1(1)] = {res.value:.8f}, |E - E_ref| = {abs(res.value - ref):.2e}")

# Adaptive quadrature in higher dimension: node counts grow slowly with d.
for d in (6, 8, 10):
    res = expectation_u1(1.0, 64.0, builtin_model(d), Adaptive(0.00125))
    print(f"d={d:2d}: nodes (mu, nu, F) = {res.nodes}, total {res.n_total}")

"""Sparse-grid (Smolyak) FCCS quadrature in several dimensions."""
import math

from fccs.integrands import get_integrand
from fccs.sparse import combination_coeffs, exact_node_count, fccs_integrate, make_plan

# The rule is a signed sum of small tensor rules.
print("combination terms for r=3, d=2:", combination_coeffs(3, 2))
print("distinct nodes r=6, d=4:", exact_node_count(6, 4))

# cos(2 y1 y2 y3) exp(i k (y1 + y2 + y3)) at k = 101.53
f = get_integrand("cosprod:2")
k, a = 101.53, (1.0, 1.0, 1.0)
ref = fccs_integrate(f, k, a, 10)
for r in range(3, 7):
    plan = make_plan(k, a, r)
    rel = abs(plan.integrate_values(f(plan.nodes)) - ref) / abs(ref)
    print(f"r={r}: {plan.num_nodes:5d} nodes, relative error {rel:.2e}")

# A plan can be reused for several integrands on the same grid.
squares = get_integrand("squares")
a4 = (1.0, 0.0, 1.0, 0.0)
print("exact for prod y_j^2 at r=5:", abs(fccs_integrate(squares, math.pi / 2, a4, 5) - squares.exact(math.pi / 2, a4)))

"""Dimension-adaptive refinement concentrates nodes on the important directions."""
from fccs.adaptive import adaptive_integrate
from fccs.integrands import get_integrand, nhalf_reference
from fccs.sparse import exact_node_count, fccs_integrate

# n(x, y)^(-1/2) exp(i k a(x).y) for a random medium with decaying modes
x, k = 0.5, 101.53
f = get_integrand(f"nhalf:{x}")
for d, tol in ((4, 1e-4), (8, 1e-6)):
    a = f.default_a(d)
    ref = nhalf_reference(x, k, d)
    res = adaptive_integrate(f, k, a, tol)
    print(f"d={d} adaptive: rel err {abs(res.value - ref) / abs(ref):.2e} with {res.evals} evaluations ({res.status})")
    for r in (4, 5, 6):
        err = abs(fccs_integrate(f, k, a, r) - ref) / abs(ref)
        print(f"      standard r={r}: rel err {err:.2e} with {exact_node_count(r, d)} evaluations")
    print("      refined indices:", res.indices[:8], "...")

"""
Irrationality exponents, Baker constants and Mahler measure
===========================================================

A unit-circle root exp(pi i t) that is not a root of unity has irrational t,
so its irrationality exponent is at least 2. Linear forms in logarithms give an
explicit upper bound C + 1. The true value is out of reach; the convergents
only give a heuristic view of it.
"""

# %%
from knotshrink.diophantine import (
    baker_wustholz_constant, convergents_of, empirical_irrationality, gouillon_constant, mahler_measure,
    mahler_measure_quadrature, torsion_order,
)
from knotshrink.polyring import parse_poly
from knotshrink.unitcircle import unit_circle_roots

root_poly = parse_poly("2z^2-3z+2")
print(gouillon_constant(root_poly).to_dict())
print(baker_wustholz_constant(root_poly).to_dict())

# %%
# Certified convergents of t = arccos(3/4)/pi, refined as needed.
(cluster,) = unit_circle_roots(root_poly)
convs = convergents_of(cluster, 10**9)
for c in convs:
    print(f"{str(c):>22}   |t - p/q| <= {float(c.error_bound):.3e}")
print("empirical exponent (max, mean):",
      round(empirical_irrationality(convs), 3), round(empirical_irrationality(convs, "mean"), 3))

# %%
# Mahler measure from the roots (Jensen) against quadrature of log|p| on the circle.
for text in ["z^2-3z+1", "z^10+z^9-z^7-z^6-z^5-z^4-z^3+z+1", "(z^2-z+1)^3(2z^2-3z+2)"]:
    p = parse_poly(text)
    print(f"{text:>36}: {mahler_measure(p).str(15)}   quadrature {mahler_measure_quadrature(p):.15f}")

# %%
# Torsion in the homology of the n-fold branched covers of the figure eight
# grows like M(Delta)^n.
import math

delta = parse_poly("z^2-3z+1")
for n in (10, 50, 100, 500):
    print(n, math.log(torsion_order(delta, n)) / n)
print("log M =", float(mahler_measure(delta).log().mid()))

"""
How fast the smallest singular value shrinks
============================================

sigma_hat_n is the smallest nonzero |Lambda| over the n-th roots of unity. The
exponent -log(sigma_hat_n)/log(n) tracks the shrinkage rate: bounded for type
I, settling near the multiplicity for type II, and oscillating for type III.
"""

# %%
import statistics

from knotshrink.polyring import parse_poly
from knotshrink.sigma import circle_minimum, exponent_scan, sigma_hat

figure_eight = parse_poly("z^2-3z+1")
trefoil_cubed = parse_poly("(z^2-z+1)^3")
five_two = parse_poly("2z^2-3z+2")

# %%
# Type I: |Lambda| never gets close to zero on the circle.
print("min |Lambda| on the circle:", circle_minimum(figure_eight).str(12))
scan = exponent_scan([figure_eight], range(2, 2001))
print("largest exponent up to n = 2000:", max(scan.exponents()))

# %%
# Type II: the roots exp(+-pi i/3) are hit exactly when 6 | n and are skipped;
# the nearest other root of unity is about 1/n away, so sigma_hat ~ n^-3.
# The approach to 3 is slow because the constant in front is small.
for n in (10, 100, 1000, 10000, 100000):
    p = sigma_hat([trefoil_cubed], n)
    print(f"n = {n:>6}: sigma_hat = {p.mid:.6e}, exponent {p.exponent:.4f}, exact zeros {p.zero_count}")

# %%
# Type III: the exponent jumps up whenever n = 2q for a convergent p/q of the
# root's angle t, because exp(pi i p/q) then sits unusually close to the root.
from knotshrink.diophantine import convergents_of
from knotshrink.sigma import spike_contrast, spike_probe
from knotshrink.unitcircle import unit_circle_roots

(cluster,) = unit_circle_roots(five_two)
convs = convergents_of(cluster, 5000)
probes = spike_probe(five_two, cluster, convs)
for c, p, (spike, generic) in zip(convs, probes, spike_contrast([five_two], probes)):
    print(f"{str(c):>10}  n = {p.n:>5}: exponent {spike:.3f} vs nearby generic median {generic:.3f}")

# %%
scan = exponent_scan([five_two], range(1000, 20001))
exps = scan.exponents()
print(f"n in [1e3, 2e4]: exponent from {min(exps):.3f} to {max(exps):.3f}, median {statistics.median(exps):.3f}")

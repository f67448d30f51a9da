"""
Shrinkage types of prime knots
==============================

Each knot K gets a type from the roots of its reduced Alexander polynomial
Lambda on the unit circle: none gives type I, only roots of unity give type
II, and a root that is not a root of unity pushes the upper rate above the
lower one, giving type III. Run with ``python3 notebooks/01_shrinkage_types.py``.
"""

# %%
# One polynomial at a time. The report carries the lower rate, bounds on the
# upper rate and the unit-circle roots behind them.
from knotshrink.polyring import parse_poly
from knotshrink.shrinkage import classify

for text in ["z^2-3z+1", "(z^2-z+1)^3", "2z^2-3z+2"]:
    r = classify(parse_poly(text))
    print(f"{text:>14}  {r.verdict.label:<6} lower rate {r.mu_lower}, "
          f"upper rate in [{r.mu_upper_lower_bound}, {r.mu_upper_upper_bound}]")

# %%
# The upper bound for 5_2 comes from a Baker-type constant for the root
# xi = (3 + i sqrt 7)/4 of 2z^2 - 3z + 2: the angle t of xi cannot be
# approximated by rationals faster than q^-(C+1).
cb = classify(parse_poly("2z^2-3z+2")).clusters[0]
print(f"t = {cb.cluster.t:.15f}, C = {cb.baker.C} ({cb.baker.method}), nu <= {cb.nu_upper}")

# %%
# The shipped table: 35 prime knots up to eight crossings plus four larger ones.
from knotshrink.knotdb import builtin_table

counts = {}
for rec in builtin_table():
    label = classify(rec.lam).verdict.label
    counts[label] = counts.get(label, 0) + 1
    flag = "" if rec.published_type == rec.expected_type else f"   (printed as {rec.published_type})"
    print(f"{rec.name:<8} {label:<12} {rec.lam}{flag}")
print(counts)

# %%
# 7_6 is the one row where the verified type differs from the printed one.
# Its polynomial is z^2 (w^2 - 5w + 5) in w = z + 1/z, and (5 - sqrt 5)/2
# lies in (-2, 2), so there is a unit-circle root that is not a root of unity.
from knotshrink.unitcircle import chebyshev_transform

seven_six = parse_poly("z^4-5z^3+7z^2-5z+1")
print("w-polynomial:", chebyshev_transform(seven_six))
print(classify(seven_six).to_dict()["clusters"][0]["t"])

# %%
# When the only root that is not a root of unity has too small a multiplicity,
# the verdict depends on its unknown irrationality exponent. Such knots stay
# undecided; the report states what would settle them.
r = classify(parse_poly("2z^6-7z^5+14z^4-17z^3+14z^2-7z+2"))  # 10_65 and 10_77
print(r.verdict.label, "|", r.flip_condition)

# %%
# Families: torus knots are type II_1, twist knots alternate between I and III_1.
from knotshrink.knotdb import torus_knot_lambda, twist_knot_lambda

print([classify(torus_knot_lambda(2, q)).verdict.label for q in (3, 5, 7, 9, 11)])
print([(m, classify(twist_knot_lambda(m)).verdict.label) for m in range(1, 11)])

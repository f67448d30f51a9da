"""
From presentation matrices to sigma_n
=====================================

A knot's second differential over Q[z, 1/z] is a Laurent matrix. Its Smith
form gives the reduced Alexander polynomials, and substituting the cyclic shift
for z gives the finite covers. Unimodular changes of basis distort sigma_n by
at most a fixed factor, so the matrix and the diagonal give the same rates.
"""

# %%
import json
from pathlib import Path

from knotshrink.sigma import dilatation_compare, dilatation_constant, sigma_hat, sigma_matrix
from knotshrink.smith import alexander_polynomials, load_matrix, matrix_from_document, smith_normal_form

fixture = Path(__file__).resolve().parents[1] / "fixtures" / "scrambled.mat"
A = load_matrix(fixture)
doc = json.loads(fixture.read_text())
print(A)

# %%
snf = smith_normal_form(A)
print("invariant factors:", [str(a) for a in snf.invariant_factors])
print("Alexander polynomials:", [str(d) for d in alexander_polynomials(A)])

# %%
U = matrix_from_document({"rows": 2, "cols": 2, "entries": doc["U"]})
V = matrix_from_document({"rows": 2, "cols": 2, "entries": doc["V"]})
C = dilatation_constant(U, V)
print("distortion constant C =", C)

# %%
for n in (5, 20, 64, 200):
    s, h = sigma_matrix(A, n), sigma_hat(list(snf.invariant_factors), n)
    print(f"n = {n:>3}: sigma_n = {s.mid:.6e}, sigma_hat_n = {h.mid:.6e}, ratio {s.mid / h.mid:.4f}")

res = dilatation_compare(A, range(2, 129))
print(f"ratio range over n <= 128: [{res.min_ratio:.4f}, {res.max_ratio:.4f}] inside [{1 / C:.4f}, {C:.4f}]")

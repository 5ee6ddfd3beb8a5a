"""The stability block B = [[0, A^T], [-A, -I]].

B is Hurwitz exactly when A is nonsingular.  Its eigenvalues are tied to the
singular values s of A through lam^2 + lam + s^2 = 0, so they are
(-1 +- sqrt(1 - 4 s^2)) / 2.  A zero singular value pins an eigenvalue at 0.
"""
import numpy as np

from polystab import RatMatrix, is_hurwitz
from polystab.gadgets import spectrum_relation_residual, stability_block
from polystab.matrix import eigs_numeric, svals_numeric

a = RatMatrix.from_rows([[1, 2], [0, "1/4"]])
b = stability_block(a)
print("B =")
print(b.to_numpy())
print("Hurwitz:", is_hurwitz(b))

s = svals_numeric(a)
predicted = np.concatenate([np.roots([1, 1, x * x]) for x in s])
print("eigenvalues of B:     ", np.sort_complex(eigs_numeric(b)).round(6))
print("roots of l^2+l+s^2=0: ", np.sort_complex(predicted).round(6))
print("residual:", spectrum_relation_residual(a))

singular = RatMatrix.from_rows([[1, 2], [2, 4]])
print("\nrank-one A, Hurwitz:", is_hurwitz(stability_block(singular)))
print(f"largest real part: {abs(eigs_numeric(stability_block(singular)).real.max()):.1e}")

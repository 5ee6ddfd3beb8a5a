"""Exact singular points of the nonsingularity polytope.

For K3 at tau = 1/2 the answer is 'yes', so some convex combination of the
gadget matrices X_i = [[M^{-1}, e_i], [e_i^T, 1]] is singular.  The point is
found in closed form on a segment and usually involves a square root; all
coordinates live in Q(sqrt c) and the kernel is checked exactly.
"""
from fractions import Fraction

from polystab import Graph, build_nonsingularity_gadget, build_qt_instance
from polystab.formats import write_certificate
from polystab.oracles import find_singular_combination, verify_singularity_certificate

q = build_qt_instance(Graph.complete(3), Fraction(1, 2))
gadget = build_nonsingularity_gadget(q)
print("M^{-1} =", [[str(x) for x in row] for row in q.minv.tolist()])

cert = find_singular_combination(q)
print("radicand:", cert.radicand)
for i, w in enumerate(cert.weights):
    print(f"  p_{i + 1} = {w}  (~{float(w):.6f})")
print("kernel:", [f"{float(v):.6f}" for v in cert.kernel])
print("verifies exactly:", verify_singularity_certificate(cert, gadget))
print()
print(write_certificate(cert))

"""Basis-diagonal surrogates of trace values.

For a convex function, summing f over the diagonal compressions of a
commuting tuple in any orthonormal basis under-estimates the trace of
f(tuple); the joint eigenbasis attains it exactly. Concave functions
reverse the inequality.
"""

import numpy as np

from tracelab import (
    BasisFrame,
    HermitianMatrix,
    MultivariateFunction,
    TraceFunctional,
    diagonal_surrogate,
    joint_diagonalize,
    random_commuting_tuple,
    random_unitary,
    surrogate_supremum_probe,
    trace_of_function,
)

tup = random_commuting_tuple(5, 2, [(-1.0, 1.0), (-1.0, 1.0)], seed=99)
tf = TraceFunctional("standard", 5)
f = MultivariateFunction(2, ((-1, 1), (-1, 1)), lambda a, b: np.exp(a + b), "exp(x+y)")

total = trace_of_function(tf, f, tup)
print(f"trace of exp(x1 + x2): {total:.6f}")

print("\nsurrogates over random frames (all below the trace):")
for k in range(5):
    frame = BasisFrame(random_unitary(5, seed=k))
    print(f"  frame {k}: {diagonal_surrogate(tf, f, tup, frame):.6f}")

at_joint = diagonal_surrogate(tf, f, tup, BasisFrame(tup.joint_basis))
print(f"  joint eigenbasis: {at_joint:.6f}  (gap {abs(at_joint - total):.2e})")

sup = surrogate_supremum_probe(tf, f, tup, basis_count=32, seed=7)
print(f"supremum probe over 32 frames + joint basis: {sup:.6f}")

# a concave function flips the story: random frames can exceed the trace
x = joint_diagonalize([HermitianMatrix([[0.0, 1.0], [1.0, 0.0]])])
neg_sq = MultivariateFunction(1, ((-2, 2),), lambda a: -(a**2), "-x^2")
tf2 = TraceFunctional("standard", 2)
print("\nconcave reversal on the 2x2 involution:")
print(f"  trace of -x^2: {trace_of_function(tf2, neg_sq, x):.1f}")
print(f"  standard-basis surrogate: {diagonal_surrogate(tf2, neg_sq, x, BasisFrame.standard(2)):.1f}  (larger)")

"""Operator means of positive matrices and the block-matrix picture.

Harmonic and geometric means, means generated by discrete probability
measures, the domination of traces of means by scalar means of traces, and
the three equivalent block characterizations of the harmonic-mean bound.
"""

import numpy as np

from tracelab import (
    DiscreteMeanMeasure,
    HermitianMatrix,
    TraceFunctional,
    geometric_mean,
    harmonic_mean,
    kubo_ando_mean,
    kubo_ando_mean_scalar,
    prop18_equivalence_check,
    random_hermitian,
    trace,
)

x = random_hermitian(3, (0.2, 2.0), seed=11)
y = random_hermitian(3, (0.2, 2.0), seed=12)
tf = TraceFunctional("normalized", 3)

print("scalar sanity: 2 ! 6 =", harmonic_mean(
    (HermitianMatrix([[2.0]]), HermitianMatrix([[6.0]]))).entries[0, 0].real)
print("scalar sanity: 4 # 9 =", geometric_mean(
    HermitianMatrix([[4.0]]), HermitianMatrix([[9.0]])).entries[0, 0].real)

h = harmonic_mean((x, y))
g = geometric_mean(x, y)
arith = 0.5 * (x + y)
print("\nmean ordering through the normalized trace:")
print(f"  tau(harmonic)  = {trace(tf, h):.6f}")
print(f"  tau(geometric) = {trace(tf, g):.6f}")
print(f"  tau(arithmetic)= {trace(tf, arith):.6f}")

# a mean from a three-atom measure, with its trace dominated by the scalar mean
mu = DiscreteMeanMeasure(((0.25, 0.3), (1.0, 0.4), (4.0, 0.3)))
m = kubo_ando_mean(mu, x, y)
lhs = trace(tf, m)
rhs = kubo_ando_mean_scalar(mu, trace(tf, x), trace(tf, y))
print(f"\nthree-atom mean: tau(x sigma y) = {lhs:.6f} <= sigma(tau x, tau y) = {rhs:.6f}")

# the harmonic mean of an n-tuple is the largest n*z admitting block domination
xs = [random_hermitian(2, (0.5, 2.0), seed=s) for s in (21, 22, 23)]
bound = (1.0 / 3.0) * harmonic_mean(xs)
print("\nblock characterization at the boundary y = harmonic/3:",
      prop18_equivalence_check(xs, bound))
print("slightly above the bound:",
      prop18_equivalence_check(xs, 1.01 * bound))

"""Enumerate the subset-sum distribution exactly and compare with the Bernoulli-mask model.

The subset model picks m of the N rotated roots of unity without replacement; the
Bernoulli model keeps each root independently with probability m/N. Both are
enumerated exhaustively here, so every probability is an exact integer ratio.
"""

from fractions import Fraction

from subgauss import moments
from subgauss.core import make_params
from subgauss.exact_dist import bernoulli_pmf, subset_pmf

p = make_params(N=8, l=3, m=3)
x = subset_pmf(p)
print(f"X_{p.l}({p.m},{p.N}): {len(x.atoms)} atoms over C(N,m) = {x.total} subsets")
for a in x.atoms[:6]:
    print(f"  {a.re:+.4f} {a.im:+.4f}j  P = {Fraction(a.count, x.total)}")
print("  ...")

b = bernoulli_pmf(p)
print(f"Bernoulli model: {len(b.atoms)} atoms, total weight N^N = {b.total}")

# second moments against their closed forms; the ratio is the finite-population correction
vs, vb = moments.second_abs_moment(x), moments.variance(b)
print(f"E|X|^2 = {vs:.12f}  closed form m(N-m)/(N-1) = {moments.subset_variance_closed(p):.12f}")
print(f"Var    = {vb:.12f}  closed form m(N-m)/N     = {moments.bernoulli_variance_closed(p):.12f}")
print(f"ratio  = {vs / vb:.12f}  N/(N-1) = {p.N / (p.N - 1):.12f}")

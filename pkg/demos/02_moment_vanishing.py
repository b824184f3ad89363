"""Higher moments vanish unless the period P = N/gcd(N,l) divides k.

Floating-point accumulation of k-th powers leaves residue that grows with k, so the
moments are computed exactly: subset counts are folded into integer polynomials
modulo x^P - 1 and tested against the P-th cyclotomic polynomial.
"""

from subgauss.core import make_params
from subgauss.exact_dist import subset_pmf
from subgauss.moments import exact_kth_moments, kth_moment

p = make_params(N=12, l=8, m=5)
print(f"N={p.N} l={p.l} m={p.m}: gcd={p.gcd}, period P={p.period}")
x = subset_pmf(p)
for e in exact_kth_moments(p, 12):
    flt = kth_moment(x, e.k)
    tag = "zero" if e.is_zero else "nonzero"
    print(f"k={e.k:2d}  {tag:7s} exact {complex(e.value).real:+.6e}  float {flt.real:+.3e}{flt.imag:+.1e}j")

"""psi_2 norms of |X|, U = Re X and V = Im X, next to the bounds that bracket them.

The norm is the root of K -> E exp(g^2/K^2) - 2, found with brentq on the exact
distribution. For gcd(N,l) = 1 the sine-formula bounds are much tighter than the
generic m/sqrt(ln 2) upper bound once m is a sizable fraction of N.
"""

from subgauss import norms
from subgauss.core import make_params
from subgauss.exact_dist import subset_pmf

N, l = 13, 5
print(f"{'m':>3} {'||X||':>8} {'lower':>8} {'generic':>8} {'sine':>8}")
for m in range(1, N + 1):
    p = make_params(N, l, m)
    x = subset_pmf(p)
    br = {b.check_id: b for b in norms.check_psi2_brackets(p, x)}
    a, r = br["prop23_i"], br["prop26"]
    print(f"{m:3d} {a.value:8.4f} {a.lower:8.4f} {a.upper:8.4f} {r.upper:8.4f}")

print()
print(f"upper coefficient 1/(pi sqrt ln2)  = {norms.remark_upper_coefficient():.6f}")
print(f"lower coefficient sqrt(1/(8 ln2))  = {norms.remark_lower_coefficient():.6f}")

"""Largest and smallest real/imaginary parts, closed form against enumeration.

The extreme subsets are arcs of consecutive roots; the closed form depends on the
parity of m and N (and N mod 4 for the imaginary part).
"""

from subgauss.core import make_params
from subgauss.exact_dist import subset_pmf
from subgauss.extremal import brute_force_extrema, u_extrema_closed_form, v_extrema_closed_form

for N, l, m in [(9, 2, 4), (10, 3, 3), (11, 4, 8), (12, 5, 6)]:
    p = make_params(N, l, m)
    x = subset_pmf(p)
    for fn, mode in ((u_extrema_closed_form, "real"), (v_extrema_closed_form, "imag")):
        c, b = fn(p), brute_force_extrema(x, mode)
        print(f"({N},{l},{m}) {mode:4s} closed [{c.m2:+.6f}, {c.m1:+.6f}]  brute [{b.m2:+.6f}, {b.m1:+.6f}]  {c.case_tag}")

"""Moments of exact PMFs and their closed-form counterparts.

Two routes are provided for the k-th moment. :func:`kth_moment` works on any
:class:`~subgauss.core.Pmf` in double precision. :func:`exact_kth_moments` works from
the parameters alone: it expands E[X^k] in integer arithmetic over Z[x]/(x^P - 1),
P = N / gcd(N, l), so vanishing and reality of a moment are decided exactly and the
numeric value is accurate far below 1e-9 even when |X|^k is of order 1e20.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .core import Params, Pmf


class DegenerateVariance(ZeroDivisionError):
    pass


class LengthError(ValueError):
    pass


VAR_CLAMP_TOL = 1e-12
MAX_VALIDATOR_K = 64


def mean(x: Pmf) -> complex:
    return complex(np.dot(x.probs, x.values))


def second_abs_moment(x: Pmf) -> float:
    v = x.values
    return float(np.dot(x.probs, v.real**2 + v.imag**2))


def part_second_moments(x: Pmf) -> tuple[float, float]:
    """(E[U^2], E[V^2]) for the real and imaginary parts."""
    v = x.values
    return float(np.dot(x.probs, v.real**2)), float(np.dot(x.probs, v.imag**2))


def variance(x: Pmf) -> float:
    var = second_abs_moment(x) - abs(mean(x)) ** 2
    if var < 0:
        if var < -VAR_CLAMP_TOL:
            raise ArithmeticError(f"negative variance {var}")
        var = 0.0
    return var


def kth_moment(x: Pmf, k: int) -> complex:
    """E[X^k], with powers built by repeated complex multiplication."""
    if k < 1:
        raise ValueError("k must be >= 1")
    v = x.values
    acc = v.copy()
    for _ in range(k - 1):
        acc = acc * v
    return complex(np.dot(x.probs, acc))


@dataclass(frozen=True)
class MomentReport:
    mean: complex
    var: float
    second_abs_moment: float
    u_second: float
    v_second: float
    kth: list = field(default_factory=list)


def moment_report(x: Pmf, k_max: int = 8) -> MomentReport:
    u2, v2 = part_second_moments(x)
    return MomentReport(
        mean=mean(x),
        var=variance(x),
        second_abs_moment=second_abs_moment(x),
        u_second=u2,
        v_second=v2,
        kth=[(k, kth_moment(x, k)) for k in range(1, k_max + 1)],
    )


# closed forms


def subset_variance_closed(p: Params) -> float:
    """m(N-m)/(N-1) for l >= 1; the l = 0 variable is the constant m."""
    if p.l == 0 or p.N == 1:
        return 0.0
    return p.m * (p.N - p.m) / (p.N - 1)


def subset_part_closed(p: Params) -> float:
    """Common value of E[U^2] and E[V^2] when N != 2l and l >= 1."""
    return subset_variance_closed(p) / 2


def bernoulli_variance_closed(p: Params) -> float:
    return p.m * (p.N - p.m) / p.N


def bernoulli_part_closed(p: Params) -> float:
    return bernoulli_variance_closed(p) / 2


def variance_ratio(p_subset: Pmf, p_bernoulli: Pmf) -> float:
    """Var[X] / Var[X~] for PMFs built from the same (N, l, m)."""
    den = variance(p_bernoulli)
    if den < 1e-15:
        raise DegenerateVariance("Bernoulli-model variance vanishes (m = N?)")
    return variance(p_subset) / den


def sample_variances(values) -> tuple[float, float]:
    """Biased (1/n) and Bessel-corrected (1/(n-1)) sample variances."""
    a = np.asarray(values, dtype=float)
    if a.size < 2:
        raise LengthError("need at least two values")
    return float(np.var(a)), float(np.var(a, ddof=1))


# exact route for E[X^k]


def _poly_rem(num: list[int], den: list[int]) -> list[int]:
    """Remainder of integer polynomials (coefficients low to high), ``den`` monic."""
    num = num[:]
    d = len(den) - 1
    for i in range(len(num) - 1, d - 1, -1):
        q = num[i]
        if q:
            for j in range(d + 1):
                num[i - d + j] -= q * den[j]
    return num[:d]


def _poly_div_exact(num: list[int], den: list[int]) -> list[int]:
    num = num[:]
    d = len(den) - 1
    quot = [0] * (len(num) - d)
    for i in range(len(num) - 1, d - 1, -1):
        q = num[i]
        quot[i - d] = q
        if q:
            for j in range(d + 1):
                num[i - d + j] -= q * den[j]
    if any(num[:d]):
        raise ArithmeticError("division is not exact")
    return quot


def cyclotomic(n: int) -> list[int]:
    """Integer coefficients (low to high) of the n-th cyclotomic polynomial."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_div_exact(poly, cyclotomic(d))
    return poly


def _count_vectors(P: int, g: int, m: int):
    """All (c_0..c_{P-1}) with 0 <= c_r <= g and sum m, with multiplicity prod C(g, c_r)."""
    out = []

    def rec(r, left, vec, mult):
        if r == P - 1:
            if left <= g:
                out.append((vec + [left], mult * math.comb(g, left)))
            return
        rest = (P - 1 - r) * g
        for c in range(max(0, left - rest), min(g, left) + 1):
            rec(r + 1, left - c, vec + [c], mult * math.comb(g, c))

    rec(0, m, [], 1)
    return out


@dataclass(frozen=True)
class ExactMoment:
    """E[X^k] as (1/C(N,m)) * sum_j coeffs[j] * zeta^j with zeta = exp(-2 pi i / P)."""

    k: int
    coeffs: tuple[int, ...]
    total: int
    value: complex

    @property
    def is_zero(self) -> bool:
        """Exact test: the coefficient polynomial is divisible by the P-th cyclotomic polynomial."""
        return not any(_poly_rem(list(self.coeffs), cyclotomic(len(self.coeffs))))

    @property
    def is_real(self) -> bool:
        c = self.coeffs
        P = len(c)
        return all(c[j] == c[(-j) % P] for j in range(P))


def exact_kth_moments(p: Params, k_max: int) -> list[ExactMoment]:
    """Exact E[X^k] for k = 1..k_max via Kronecker-packed integer polynomials."""
    P, g = p.period, p.gcd
    total = math.comb(p.N, p.m)
    vectors = _count_vectors(P, g, p.m)
    bits = (total * max(p.m, 1) ** k_max).bit_length() + 2
    width = P * bits
    low_mask = (1 << width) - 1

    def pack(vec):
        v = 0
        for r in reversed(range(P)):
            v = (v << bits) | vec[r]
        return v

    def fold(v):
        # x^P == 1: coefficients of degree P..2P-2 wrap onto 0..P-2
        while v >> width:
            v = (v & low_mask) + (v >> width)
        return v

    acc = [0] * k_max
    for vec, mult in vectors:
        base = pack(vec)
        cur = base
        acc[0] += mult * cur
        for k in range(1, k_max):
            cur = fold(cur * base)
            acc[k] += mult * cur

    digit = (1 << bits) - 1
    out = []
    with mpmath.workdps(60):
        zeta = [mpmath.expjpi(mpmath.mpf(-2 * j) / P) for j in range(P)]
        for k in range(k_max):
            v = acc[k]
            coeffs = tuple((v >> (j * bits)) & digit for j in range(P))
            s = mpmath.fsum(c * z for c, z in zip(coeffs, zeta)) / total
            out.append(ExactMoment(k + 1, coeffs, total, complex(s)))
    return out

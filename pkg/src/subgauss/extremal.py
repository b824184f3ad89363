"""Closed-form extremes of the real and imaginary parts, and the sine-formula norm bounds.

For gcd(N, l) = 1 the roots multiset is the full set of N-th roots of unity, so the
largest (smallest) value of U or V is attained by an arc of m consecutive roots. The
formulas below cover m <= floor(N/2); larger m are reflected through m -> N - m,
since the complementary subset has the negated sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Params, Pmf
from .norms import SQRT_LN2


class NotCoprime(ValueError):
    pass


@dataclass(frozen=True)
class ExtremaReport:
    m1: float
    m2: float
    case_tag: str

    @property
    def sup_norm(self) -> float:
        return max(self.m1, abs(self.m2), 0.0)


def _require_coprime(p: Params):
    if p.l == 0 or not p.coprime or p.N < 2:
        raise NotCoprime(f"gcd(N,l)={p.gcd}, need gcd 1 with 1 <= l <= N-1")


def _reflect(p: Params):
    """Return (m', flipped) with m' <= floor(N/2)."""
    if p.m <= p.N // 2:
        return p.m, False
    return p.N - p.m, True


def _u_small(N: int, m: int) -> tuple[float, float, str]:
    if m == 0:
        return 0.0, 0.0, "U-empty"
    s1 = math.sin(math.pi / N)
    sm = math.sin(m * math.pi / N)
    c1 = math.cos(math.pi / N)
    if m % 2:
        top = sm / s1
        if N % 2 == 0:
            return top, -top, "U-odd/N-even"
        return top, -sm * c1 / s1, "U-odd/N-odd"
    top = sm * c1 / s1
    if N % 2 == 0:
        return top, -top, "U-even/N-even"
    return top, -sm / s1, "U-even/N-odd"


def _v_small(N: int, m: int) -> tuple[float, float, str]:
    if m == 0:
        return 0.0, 0.0, "V-empty"
    s1 = math.sin(math.pi / N)
    sm = math.sin(m * math.pi / N)
    if m % 2 == 0:
        top = sm * math.sin((2 * (N // 4) + 1) * math.pi / N) / s1
        return top, -top, f"V-even/N%4={N % 4}"
    top = sm * math.sin(2 * ((N + 1) // 4) * math.pi / N) / s1
    return top, -top, f"V-odd/N%4={N % 4}"


def _closed(p: Params, small) -> ExtremaReport:
    _require_coprime(p)
    m_eff, flipped = _reflect(p)
    m1, m2, tag = small(p.N, m_eff)
    if flipped:
        m1, m2 = -m2, -m1
        tag += f"|reflect m->{m_eff}"
    return ExtremaReport(m1, m2, tag)


def u_extrema_closed_form(p: Params) -> ExtremaReport:
    return _closed(p, _u_small)


def v_extrema_closed_form(p: Params) -> ExtremaReport:
    return _closed(p, _v_small)


def brute_force_extrema(x: Pmf, mode: str = "real") -> ExtremaReport:
    """Largest and smallest atom of the chosen part (oracle for the closed forms)."""
    if mode not in ("real", "imag"):
        raise ValueError("mode must be 'real' or 'imag'")
    v = x.values.real if mode == "real" else x.values.imag
    return ExtremaReport(float(v.max()), float(v.min()), f"brute-{mode}")


def refined_psi2_upper(p: Params, target: str) -> float:
    """Sine-formula upper bound on the psi_2 norm of U, V or |X| (gcd(N, l) = 1)."""
    _require_coprime(p)
    N, m = p.N, p.m
    s1 = math.sin(math.pi / N)
    sm = abs(math.sin(m * math.pi / N))
    if m == N:
        sm = 0.0
    if target == "U":
        return sm / (SQRT_LN2 * s1)
    if target == "X":
        return math.sqrt(2) * sm / (SQRT_LN2 * s1)
    if target == "V":
        if m % 2 == 0:
            factor = math.sin((2 * (N // 4) + 1) * math.pi / N)
        else:
            factor = math.sin(2 * ((N + 1) // 4) * math.pi / N)
        return sm * factor / (SQRT_LN2 * s1)
    raise ValueError("target must be 'U', 'V' or 'X'")


def sine_sum(t: int, q: int, N: int) -> float:
    """Closed form of sum_{k=t}^{t+q} sin(2 k pi / N)."""
    if t < 1 or q < 0 or N < 2:
        raise ValueError("need t >= 1, q >= 0, N >= 2")
    return math.sin((q + 1) * math.pi / N) * math.sin((2 * t + q) * math.pi / N) / math.sin(math.pi / N)


def sine_sum_direct(t: int, q: int, N: int) -> float:
    k = np.arange(t, t + q + 1)
    return float(np.sin(2 * k * np.pi / N).sum())

"""Exponential moments, the two sub-Gaussian norms, and the bound brackets that surround them."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar
from scipy.special import logsumexp

from .core import Params, Pmf

LN2 = math.log(2.0)
SQRT_LN2 = math.sqrt(LN2)
BRACKET_TOL = 1e-9
MODES = ("abs", "real", "imag")


def _magnitudes(values: np.ndarray, mode: str) -> np.ndarray:
    if mode == "abs":
        return np.abs(values)
    if mode == "real":
        return np.abs(values.real)
    if mode == "imag":
        return np.abs(values.imag)
    raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def exp_moment(x: Pmf, scale: float, mode: str = "abs") -> float:
    """E[exp(g(X)^2 / scale)] with g selecting |X|, U or V."""
    if scale <= 0:
        raise ValueError("scale must be positive")
    g = _magnitudes(x.values, mode)
    return float(np.exp(logsumexp(g**2 / scale, b=x.probs)))


@dataclass(frozen=True)
class NormBracket:
    check_id: str
    value: float
    lower: float
    upper: float
    lower_ref: str
    upper_ref: str
    satisfied: bool
    skip: str | None = None

    @property
    def skipped(self) -> bool:
        return self.skip is not None


def _within(lower, value, upper, tol=BRACKET_TOL) -> bool:
    # tolerance scales with the bound so brackets like e^(m^2) compare meaningfully
    lo_tol = tol * max(1.0, abs(lower))
    hi_tol = tol * max(1.0, abs(upper))
    return lower - lo_tol <= value <= upper + hi_tol


def make_bracket(check_id, value, lower, upper, lower_ref, upper_ref) -> NormBracket:
    return NormBracket(
        check_id, float(value), float(lower), float(upper), lower_ref, upper_ref,
        _within(lower, value, upper),
    )


def skipped_bracket(check_id, reason, lower_ref="", upper_ref="") -> NormBracket:
    nan = float("nan")
    return NormBracket(check_id, nan, nan, nan, lower_ref, upper_ref, True, reason)


def check_exp_moment_bounds(p: Params, x: Pmf) -> list[NormBracket]:
    """Both families of exponential-moment brackets (scale m^2 and scale 1), three parts each.

    Lower bounds follow from the arithmetic-geometric mean inequality applied to the
    closed-form second moments; the V-part clause needs l >= 1, and its lower bound
    additionally needs N != 2l (there V is identically 0).
    """
    N, l, m = p.N, p.l, p.m
    out = []
    if N < 2:
        return [skipped_bracket(f"thm{t}_{c}", "N<2") for t in ("21", "22") for c in ("i", "ii", "iii")]
    q_abs = (N - m) / (N - 1)
    for fam, scale in (("21", float(m * m)), ("22", 1.0)):
        # lower exponents: E[g^2]/scale with g^2 replaced by its closed form
        lo_abs = m * q_abs / scale
        lo_part = lo_abs / 2
        up = math.exp(m * m / scale)
        tag = "Thm2.1" if fam == "21" else "Thm2.2"
        for clause, mode, lo in (("i", "abs", lo_abs), ("ii", "real", lo_part), ("iii", "imag", lo_part)):
            cid = f"thm{fam}_{clause}"
            if clause == "iii" and l == 0:
                out.append(skipped_bracket(cid, "l=0", f"{tag}({clause})L", f"{tag}({clause})U"))
                continue
            if clause == "iii" and p.halfN:
                out.append(skipped_bracket(cid, "N=2l", f"{tag}({clause})L", f"{tag}({clause})U"))
                continue
            val = exp_moment(x, scale, mode)
            out.append(make_bracket(cid, val, math.exp(lo), up, f"{tag}({clause})L", f"{tag}({clause})U"))
    return out


def _psi2_from_magnitudes(g: np.ndarray, w: np.ndarray, tol: float = 1e-10) -> float:
    """inf{K > 0 : sum w exp(g^2/K^2) <= 2} for nonnegative magnitudes ``g``."""
    keep = w > 0
    g, w = g[keep], w[keep]
    gmax = float(g.max()) if g.size else 0.0
    if gmax == 0.0:
        return 0.0
    if float(g.min()) == gmax:
        # constant magnitude: exp(g^2/K^2) = 2 solves in closed form
        return gmax / SQRT_LN2
    logw = np.log(w)
    g2 = g**2

    def excess(K):
        return logsumexp(g2 / (K * K) + logw) - LN2

    second = float(np.dot(w, g2))
    k_low = max(math.sqrt(second / LN2) * (1 - 1e-6), 1e-300)
    k_high = gmax / SQRT_LN2 * (1 + 1e-6)
    if excess(k_high) >= 0:
        return k_high
    return brentq(excess, k_low, k_high, xtol=tol * k_high * 1e-3, rtol=4 * np.finfo(float).eps, maxiter=500)


def psi2_norm(x: Pmf, mode: str = "abs", tol: float = 1e-10) -> float:
    """Orlicz norm inf{K > 0 : E[exp(g(X)^2 / K^2)] <= 2}; 0 for a point mass at the origin."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    return _psi2_from_magnitudes(_magnitudes(x.values, mode), x.probs, tol)


def psi2_residual(x: Pmf, K: float, mode: str = "abs") -> float:
    """E[exp(g^2/K^2)] - 2, the defining equation's residual at K."""
    return exp_moment(x, K * K, mode) - 2.0


def _abs_moment_root(g, w, p):
    gmax = g.max()
    return gmax * float(np.dot(w, (g / gmax) ** p)) ** (1.0 / p)


def psi2_prime_norm(x: Pmf, mode: str = "abs", p_max: int = 256) -> float:
    """sup over p in [1, p_max] of p^(-1/2) E[g^p]^(1/p).

    Evaluated on a log-spaced grid and refined by a bounded scalar search around the
    best grid point, so the result is a lower estimate of the true supremum.
    """
    if p_max < 1:
        raise ValueError("p_max must be >= 1")
    g = _magnitudes(x.values, mode)
    w = x.probs
    if g.max() == 0.0:
        return 0.0

    def obj(p):
        return _abs_moment_root(g, w, p) / math.sqrt(p)

    if p_max == 1:
        return obj(1.0)
    grid = np.geomspace(1.0, p_max, 200)
    vals = np.array([obj(p) for p in grid])
    i = int(np.argmax(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    best = float(vals[i])
    if hi > lo:
        res = minimize_scalar(lambda p: -obj(p), bounds=(lo, hi), method="bounded", options={"xatol": 1e-10})
        best = max(best, -float(res.fun))
    return best


def check_psi2_brackets(p: Params, x: Pmf, tol: float = 1e-10) -> list[NormBracket]:
    """Norm brackets for |X|, U and V; refined sine-formula uppers are attached for gcd(N, l) = 1."""
    from .extremal import NotCoprime, refined_psi2_upper

    N, l, m = p.N, p.l, p.m
    if N < 2:
        ids = ("prop23_i", "prop23_ii", "prop23_iii", "eq14", "eq15", "prop26")
        return [skipped_bracket(c, "N<2") for c in ids]
    out = []
    upper = m / SQRT_LN2
    lo_abs = math.sqrt(m * (N - m) / ((N - 1) * LN2))
    lo_part = math.sqrt(m * (N - m) / (2 * (N - 1) * LN2))
    norms = {mode: psi2_norm(x, mode, tol) for mode in MODES}
    out.append(make_bracket("prop23_i", norms["abs"], lo_abs, upper, "Prop2.3(i)L", "Prop2.3(i)U"))
    out.append(make_bracket("prop23_ii", norms["real"], lo_part, upper, "Prop2.3(ii)L", "Prop2.3(ii)U"))
    if l == 0:
        out.append(skipped_bracket("prop23_iii", "l=0", "Prop2.3(iii)L", "Prop2.3(iii)U"))
    elif p.halfN:
        out.append(skipped_bracket("prop23_iii", "N=2l", "Prop2.3(iii)L", "Prop2.3(iii)U"))
    else:
        out.append(make_bracket("prop23_iii", norms["imag"], lo_part, upper, "Prop2.3(iii)L", "Prop2.3(iii)U"))

    for cid, target, mode, ref in (
        ("eq14", "U", "real", "Eq14"),
        ("eq15", "V", "imag", "Eq15"),
        ("prop26", "X", "abs", "Prop2.6"),
    ):
        try:
            bound = refined_psi2_upper(p, target)
        except NotCoprime:
            out.append(skipped_bracket(cid, "l=0" if l == 0 else "gcd!=1", "", ref))
            continue
        out.append(make_bracket(cid, norms[mode], 0.0, bound, "", ref))
    return out


# limiting coefficients when m ~ N/2 and N is large
def remark_upper_coefficient() -> float:
    """Coefficient of N in the sine-formula upper bound: 1 / (pi sqrt(ln 2))."""
    return 1.0 / (math.pi * SQRT_LN2)


def remark_lower_coefficient() -> float:
    """Coefficient of sqrt(N) in the part-norm lower bound at c = 1/2: sqrt(1 / (8 ln 2))."""
    return math.sqrt(1.0 / (8.0 * LN2))

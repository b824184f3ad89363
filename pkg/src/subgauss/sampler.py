"""Monte-Carlo estimates for sizes beyond exhaustive enumeration.

Random numbers come from numpy's ``PCG64`` bit generator seeded through
``SeedSequence(seed)``; the same (Params, McConfig) always reproduces the same
estimate bit for bit. Samples are drawn in fixed-size batches and folded into a
streaming Welford accumulator with the pairwise (Chan et al.) merge rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from statistics import NormalDist

import numpy as np

from .core import Params, roots_table
from .norms import _magnitudes, _psi2_from_magnitudes

GENERATOR = "PCG64"
BATCH = 1 << 16
STAT_NAMES = ("mean_re", "mean_im", "second_abs", "u_second", "v_second")


@dataclass(frozen=True)
class McConfig:
    n_samples: int = 100_000
    seed: int = 0
    ci_level: float = 0.99

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        if not 0 < self.ci_level < 1:
            raise ValueError("ci_level must lie in (0, 1)")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def z(self) -> float:
        return NormalDist().inv_cdf(0.5 + self.ci_level / 2)

    def rng(self, stream: int = 0) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed)
        if stream:
            ss = ss.spawn(stream + 1)[stream]
        return np.random.Generator(np.random.PCG64(ss))


class Welford:
    """Running mean and sum of squared deviations for a fixed-length vector of statistics."""

    def __init__(self, dim: int):
        self.n = 0
        self.mean = np.zeros(dim)
        self.m2 = np.zeros(dim)

    def push_batch(self, x: np.ndarray):
        """Merge a (batch, dim) block of observations."""
        nb = x.shape[0]
        if nb == 0:
            return
        mb = x.mean(axis=0)
        m2b = ((x - mb) ** 2).sum(axis=0)
        self.merge(nb, mb, m2b)

    def merge(self, nb, mb, m2b):
        n = self.n + nb
        delta = mb - self.mean
        self.mean = self.mean + delta * (nb / n)
        self.m2 = self.m2 + m2b + delta**2 * (self.n * nb / n)
        self.n = n

    @property
    def var(self) -> np.ndarray:
        if self.n < 2:
            return np.zeros_like(self.mean)
        return self.m2 / (self.n - 1)

    @property
    def stderr(self) -> np.ndarray:
        return np.sqrt(self.var / max(self.n, 1))


@dataclass(frozen=True)
class McEstimate:
    mean: complex
    second_abs: float
    u_second: float
    v_second: float
    half_widths: dict
    stderr: dict
    n_samples: int
    generator: str = GENERATOR
    model: str = "subset"
    extra: dict = field(default_factory=dict)

    @property
    def variance(self) -> float:
        return self.second_abs - abs(self.mean) ** 2

    def within(self, name: str, target: float, n_sigma: float) -> bool:
        value = {"mean_re": self.mean.real, "mean_im": self.mean.imag}.get(name)
        if value is None:
            value = getattr(self, name)
        return abs(value - target) <= n_sigma * self.stderr[name]


def _subset_batch(rng, roots, m, size, buf, full_sum):
    """Sums over uniformly random m-subsets via a row-wise partial Fisher-Yates shuffle."""
    N = len(roots)
    k = min(m, N - m)
    idx = buf[:size]
    idx[:] = np.arange(N)
    rows = np.arange(size)
    for i in range(k):
        j = rng.integers(i, N, size=size)
        a = idx[rows, i].copy()
        idx[rows, i] = idx[rows, j]
        idx[rows, j] = a
    s = roots[idx[:, :k]].sum(axis=1) if k else np.zeros(size, dtype=complex)
    if k == m:
        return s
    # complement trick: the m-subset is the rest of the shuffled row
    return full_sum - s


def _bernoulli_batch(rng, roots, m, size):
    N = len(roots)
    mask = rng.random((size, N)) < (m / N)
    return mask @ roots


def _draw(p: Params, cfg: McConfig, model: str, stream: int = 0):
    """Yield batches of complex samples for the chosen model."""
    rng = cfg.rng(stream)
    roots = roots_table(p).n_roots
    # the N roots sum to exactly 0 for l >= 1 (and to N for l = 0)
    full_sum = complex(p.N) if p.l == 0 else 0j
    buf = np.empty((min(BATCH, cfg.n_samples), p.N), dtype=np.int32)
    left = cfg.n_samples
    while left > 0:
        size = min(BATCH, left)
        if model == "subset":
            yield _subset_batch(rng, roots, p.m, size, buf, full_sum)
        elif model == "bernoulli":
            yield _bernoulli_batch(rng, roots, p.m, size)
        else:
            raise ValueError(f"unknown model {model!r}")
        left -= size


def _estimate(p: Params, cfg: McConfig, model: str, stream: int = 0) -> McEstimate:
    acc = Welford(len(STAT_NAMES))
    for z in _draw(p, cfg, model, stream):
        u, v = z.real, z.imag
        acc.push_batch(np.column_stack([u, v, u * u + v * v, u * u, v * v]))
    mu = acc.mean
    se = dict(zip(STAT_NAMES, acc.stderr.tolist()))
    return McEstimate(
        mean=complex(mu[0], mu[1]),
        second_abs=float(mu[2]),
        u_second=float(mu[3]),
        v_second=float(mu[4]),
        half_widths={k: cfg.z * s for k, s in se.items()},
        stderr=se,
        n_samples=acc.n,
        model=model,
    )


def sample_subset_model(p: Params, cfg: McConfig) -> McEstimate:
    return _estimate(p, cfg, "subset")


def sample_bernoulli_model(p: Params, cfg: McConfig) -> McEstimate:
    # separate substream so the two models can be combined as independent runs
    return _estimate(p, cfg, "bernoulli", stream=1)


def variance_ratio_mc(p: Params, cfg: McConfig) -> tuple[float, float]:
    """Subset/Bernoulli variance ratio and its delta-method standard error."""
    a = sample_subset_model(p, cfg)
    b = sample_bernoulli_model(p, cfg)
    va, vb = a.variance, b.variance
    if vb <= 0:
        raise ZeroDivisionError("Bernoulli-model variance estimate is zero")
    r = va / vb
    if va <= 0:
        return r, 0.0
    rel_a = a.stderr["second_abs"] / va
    rel_b = b.stderr["second_abs"] / vb
    return r, abs(r) * math.hypot(rel_a, rel_b)


def psi2_norm_mc(p: Params, cfg: McConfig, mode: str = "abs", model: str = "subset") -> float:
    """psi_2 norm of the empirical distribution of one fixed sample (common random numbers).

    The same draws are reused at every K, so K -> mean exp(g^2/K^2) is strictly
    decreasing and the root search converges. The result is an estimate only.
    """
    samples = np.concatenate(list(_draw(p, cfg, model)))
    g = _magnitudes(samples, mode)
    w = np.full(g.shape, 1.0 / g.size)
    return _psi2_from_magnitudes(g, w)

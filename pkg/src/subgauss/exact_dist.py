"""Exact enumeration of X_l(m,N) over all m-subsets and of its Bernoulli analogue over all masks."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from itertools import combinations, islice

import numpy as np

from .core import (
    DEFAULT_EPS,
    ComplexAtom,
    Params,
    Pmf,
    grouping_keys,
    pmf_from_samples,
    roots_table,
)

_CHUNK = 1 << 18


class BudgetExceeded(RuntimeError):
    """The requested enumeration is larger than the configured budget; use the sampler."""


@dataclass(frozen=True)
class EnumerationBudget:
    max_subset_states: int = 10_000_000
    max_bernoulli_N: int = 24

    def __post_init__(self):
        if self.max_subset_states <= 0 or self.max_bernoulli_N <= 0:
            raise ValueError("budget limits must be strictly positive")

    @classmethod
    def from_env(cls) -> "EnumerationBudget":
        """Default budget, with ``SUBGAUSS_MAX_STATES`` overriding the subset-state cap."""
        raw = os.environ.get("SUBGAUSS_MAX_STATES")
        if raw is None:
            return cls()
        return cls(max_subset_states=int(raw))


DEFAULT_BUDGET = EnumerationBudget()


def _subset_sums_chunks(roots: np.ndarray, m: int):
    """Yield subset sums over lexicographic m-combinations of range(N), in chunks."""
    N = len(roots)
    it = combinations(range(N), m)
    while True:
        block = list(islice(it, _CHUNK))
        if not block:
            return
        idx = np.array(block, dtype=np.intp).reshape(len(block), m)
        yield roots[idx].sum(axis=1)


def subset_pmf(p: Params, eps: float = DEFAULT_EPS, budget: EnumerationBudget = DEFAULT_BUDGET) -> Pmf:
    """Exact distribution of X_l(m,N): every m-subset visited once, equal sums grouped.

    Atom counts are the multiplicities q(.) of each distinct sum; the total is C(N, m).
    """
    total = math.comb(p.N, p.m)
    if total > budget.max_subset_states:
        raise BudgetExceeded(
            f"C({p.N},{p.m}) = {total} subsets exceeds budget {budget.max_subset_states}"
        )
    roots = roots_table(p).n_roots
    acc = _Grouper(eps)
    for sums in _subset_sums_chunks(roots, p.m):
        acc.add(sums, np.zeros(len(sums), dtype=np.int64))
    return acc.to_pmf(total)


class _Grouper:
    """Chunked grouping of values under (key, tag); per-tag multiplicities stay int64."""

    def __init__(self, eps):
        self.eps = eps
        self.keys = np.empty((0, 3), dtype=np.int64)
        self.re = np.empty(0)
        self.im = np.empty(0)
        self.members = np.empty(0, dtype=np.int64)

    def add(self, values, tags):
        values = np.asarray(values, dtype=complex)
        keys = np.column_stack([grouping_keys(values, self.eps), tags])
        self.keys, inv = np.unique(np.concatenate([self.keys, keys]), axis=0, return_inverse=True)
        inv = inv.ravel()
        n = len(self.keys)
        self.re = np.bincount(inv, weights=np.concatenate([self.re, values.real]), minlength=n)
        self.im = np.bincount(inv, weights=np.concatenate([self.im, values.imag]), minlength=n)
        ones = np.ones(len(values), dtype=np.int64)
        members = np.zeros(n, dtype=np.int64)
        np.add.at(members, inv, np.concatenate([self.members, ones]))
        self.members = members

    def to_pmf(self, total: int, tag_weight=lambda t: 1) -> Pmf:
        uniq, inv = np.unique(self.keys[:, :2], axis=0, return_inverse=True)
        inv = inv.ravel()
        n = len(uniq)
        members = np.zeros(n, dtype=np.int64)
        np.add.at(members, inv, self.members)
        re = np.bincount(inv, weights=self.re, minlength=n) / members
        im = np.bincount(inv, weights=self.im, minlength=n) / members
        weights = [0] * n
        for g, t, c in zip(inv.tolist(), self.keys[:, 2].tolist(), self.members.tolist()):
            weights[g] += c * tag_weight(t)
        atoms = tuple(
            ComplexAtom(float(re[i]), float(im[i]), w) for i, w in enumerate(weights) if w > 0
        )
        return Pmf(atoms, total, self.eps)


def bernoulli_pmf(p: Params, eps: float = DEFAULT_EPS, budget: EnumerationBudget = DEFAULT_BUDGET) -> Pmf:
    """Exact distribution of the Bernoulli-model sum over all 2**N inclusion masks.

    A mask with k ones gets integer weight m**k * (N-m)**(N-k); the total is N**N.
    ``0**0`` is 1, so m = N degenerates to a point mass on the all-ones mask.
    """
    N, m = p.N, p.m
    if N > budget.max_bernoulli_N:
        raise BudgetExceeded(f"N = {N} exceeds Bernoulli enumeration cap {budget.max_bernoulli_N}")
    roots = roots_table(p).n_roots
    weight_of_k = [m**k * (N - m) ** (N - k) for k in range(N + 1)]

    # masks split into low bits (precomputed table) and high bits (outer loop)
    low = min(N, 18)
    high = N - low
    low_masks = np.arange(1 << low, dtype=np.int64)
    low_bits = ((low_masks[:, None] >> np.arange(low)) & 1).astype(np.int8)
    low_sums = low_bits @ roots[:low] if low else np.zeros(1, dtype=complex)
    low_pop = low_bits.sum(axis=1).astype(np.int64)

    acc = _Grouper(eps)
    for hm in range(1 << high):
        hbits = [(hm >> b) & 1 for b in range(high)]
        hsum = complex(sum(roots[low + b] for b in range(high) if hbits[b]))
        hpop = sum(hbits)
        # the mask weight depends only on its popcount, so popcount is the group tag
        acc.add(low_sums + hsum, low_pop + hpop)
    return acc.to_pmf(N**N, lambda k: weight_of_k[k])


def _project(x: Pmf, part: str) -> Pmf:
    vals = x.values.real if part == "re" else x.values.imag
    return pmf_from_samples(vals.astype(complex), x.counts, x.grouping_epsilon, x.total)


def real_part_pmf(x: Pmf) -> Pmf:
    """Distribution of the real part U, regrouped under the same epsilon."""
    return _project(x, "re")


def imag_part_pmf(x: Pmf) -> Pmf:
    """Distribution of the imaginary part V, stored on the real axis."""
    return _project(x, "im")


def negate_pmf(x: Pmf) -> Pmf:
    return pmf_from_samples(-x.values, x.counts, x.grouping_epsilon, x.total)


def naive_subset_pmf(p: Params, eps: float = DEFAULT_EPS) -> Pmf:
    """Reference enumeration: every subset sum recomputed from scratch in plain Python."""
    import cmath

    roots = [cmath.exp(-2j * cmath.pi * ((n * p.l) % p.N) / p.N) for n in range(1, p.N + 1)]
    sums = [sum(roots[i] for i in s) for s in combinations(range(p.N), p.m)]
    return pmf_from_samples(np.array(sums, dtype=complex), [1] * len(sums), eps)

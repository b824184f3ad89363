"""Domain types shared by every module: parameters, the roots multiset, exact-count PMFs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

DEFAULT_EPS = 1e-9


class RangeError(ValueError):
    """Raised when (N, l, m) fall outside 1 <= N, 0 <= l <= N-1, 1 <= m <= N."""


@dataclass(frozen=True)
class Params:
    N: int
    l: int
    m: int

    def __post_init__(self):
        for name in ("N", "l", "m"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise RangeError(f"{name} must be an integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        if self.N < 1:
            raise RangeError(f"N must be >= 1, got {self.N}")
        if not 0 <= self.l <= self.N - 1:
            raise RangeError(f"l must lie in [0, {self.N - 1}], got {self.l}")
        if not 1 <= self.m <= self.N:
            raise RangeError(f"m must lie in [1, {self.N}], got {self.m}")

    @property
    def gcd(self) -> int:
        return math.gcd(self.N, self.l)

    @property
    def coprime(self) -> bool:
        return self.gcd == 1

    @property
    def halfN(self) -> bool:
        return self.N == 2 * self.l

    @property
    def period(self) -> int:
        """Multiplicative order of the generating root, N / gcd(N, l)."""
        return self.N // self.gcd

    def as_dict(self) -> dict:
        return {"N": self.N, "l": self.l, "m": self.m}


def make_params(N: int, l: int, m: int) -> Params:
    return Params(N, l, m)


@dataclass(frozen=True)
class RootsTable:
    """The multiset exp(-j 2 pi n l / N), n = 1..N, as a complex128 array (entry n-1 <-> n)."""

    n_roots: np.ndarray

    def __len__(self):
        return len(self.n_roots)


def roots_table(p: Params) -> RootsTable:
    n = np.arange(1, p.N + 1)
    # reduce n*l mod N in integers first so the angle is exact for every entry
    k = (n * p.l) % p.N
    roots = np.exp(-2j * np.pi * k / p.N)
    roots.setflags(write=False)
    return RootsTable(roots)


@dataclass(frozen=True)
class ComplexAtom:
    re: float
    im: float
    count: int

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)


@dataclass(frozen=True)
class Pmf:
    """Probability mass function stored as exact integer counts over an exact integer total.

    Atoms are distinct under the grouping key ``(round(re/eps), round(im/eps))`` and
    kept in ascending key order.
    """

    atoms: tuple[ComplexAtom, ...]
    total: int
    grouping_epsilon: float = DEFAULT_EPS
    _values: np.ndarray = field(init=False, repr=False, compare=False)
    _probs: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        atoms = tuple(self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if self.total <= 0:
            raise ValueError("total must be positive")
        if any(a.count < 1 for a in atoms):
            raise ValueError("every atom needs count >= 1")
        if sum(a.count for a in atoms) != self.total:
            raise ValueError("atom counts must sum to total")
        vals = np.array([a.value for a in atoms], dtype=complex)
        # Fraction -> float per atom keeps precision for totals beyond 2**53
        probs = np.array([a.count / self.total for a in atoms], dtype=float)
        vals.setflags(write=False)
        probs.setflags(write=False)
        object.__setattr__(self, "_values", vals)
        object.__setattr__(self, "_probs", probs)

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def probs(self) -> np.ndarray:
        return self._probs

    @property
    def counts(self) -> list[int]:
        return [a.count for a in self.atoms]

    def __len__(self):
        return len(self.atoms)

    def same_as(self, other: "Pmf", tol: float = 1e-12) -> bool:
        """Atom-for-atom equality: identical counts and totals, values within ``tol``."""
        if self.total != other.total or len(self) != len(other):
            return False
        if self.counts != other.counts:
            return False
        return bool(np.all(np.abs(self.values - other.values) <= tol))


def grouping_keys(values: np.ndarray, eps: float) -> np.ndarray:
    """Integer grouping keys, shape (n, 2), for complex ``values``."""
    values = np.asarray(values, dtype=complex)
    return np.stack(
        [np.rint(values.real / eps), np.rint(values.imag / eps)], axis=1
    ).astype(np.int64)


def pmf_from_samples(values, counts, eps: float = DEFAULT_EPS, total: int | None = None) -> Pmf:
    """Group weighted complex values into a canonical Pmf.

    ``counts`` may be numpy integers or arbitrary-precision Python ints. Each atom's
    value is the plain mean of the members that fall into its group.
    """
    values = np.asarray(values, dtype=complex).ravel()
    counts = list(counts)
    if len(counts) != len(values):
        raise ValueError("values and counts must have equal length")
    keys = grouping_keys(values, eps)
    uniq, inverse = np.unique(keys, axis=0, return_inverse=True)
    inverse = inverse.ravel()
    n = len(uniq)
    members = np.bincount(inverse, minlength=n)
    re = np.bincount(inverse, weights=values.real, minlength=n) / members
    im = np.bincount(inverse, weights=values.imag, minlength=n) / members
    agg = [0] * n
    for g, c in zip(inverse.tolist(), counts):
        agg[g] += int(c)
    atoms = tuple(
        ComplexAtom(float(re[i]), float(im[i]), agg[i]) for i in range(n) if agg[i] > 0
    )
    if total is None:
        total = sum(a.count for a in atoms)
    return Pmf(atoms, int(total), eps)


def point_mass(value: complex, eps: float = DEFAULT_EPS) -> Pmf:
    v = complex(value)
    return Pmf((ComplexAtom(v.real, v.imag, 1),), 1, eps)

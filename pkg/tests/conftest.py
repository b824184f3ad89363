import cmath
import itertools
import math

import pytest


def brute_subset_sums(N, l, m):
    """Every m-subset sum computed independently of the package."""
    roots = [cmath.exp(-2j * math.pi * n * l / N) for n in range(1, N + 1)]
    return [sum(roots[i] for i in s) for s in itertools.combinations(range(N), m)]


def brute_bernoulli(N, l, m):
    """(sum, probability) over every inclusion mask, probabilities as floats."""
    roots = [cmath.exp(-2j * math.pi * n * l / N) for n in range(1, N + 1)]
    q = m / N
    out = []
    for mask in itertools.product((0, 1), repeat=N):
        k = sum(mask)
        out.append((sum(r for r, b in zip(roots, mask) if b), q**k * (1 - q) ** (N - k)))
    return out


@pytest.fixture
def brute():
    return brute_subset_sums

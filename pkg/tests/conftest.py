"""Shared fixtures: reference codes and random code generators."""

from __future__ import annotations

import numpy as np
import pytest

from mpdec.gf2 import BinaryMatrix, LinearCode, pack_bits

# (8,4) code with four weight-4 checks; girth 4, handy fractional behavior.
H84_ARRAY = [
    [1, 1, 1, 0, 1, 0, 0, 0],
    [1, 1, 0, 1, 0, 1, 0, 0],
    [1, 0, 1, 1, 0, 0, 1, 0],
    [0, 1, 1, 1, 0, 0, 0, 1],
]

# systematic-free (7,4) Hamming parity-check matrix
HAMMING_ARRAY = [
    [1, 0, 1, 0, 1, 0, 1],
    [0, 1, 1, 0, 0, 1, 1],
    [0, 0, 0, 1, 1, 1, 1],
]


@pytest.fixture(scope="session")
def code84() -> LinearCode:
    return LinearCode(BinaryMatrix.from_array(H84_ARRAY))


@pytest.fixture(scope="session")
def hamming() -> LinearCode:
    return LinearCode(BinaryMatrix.from_array(HAMMING_ARRAY))


def random_sparse_code(rng, n, m, w_min=2, w_max=4) -> LinearCode:
    """Random sparse parity-check matrix with row weights in [w_min, w_max]."""
    rows = []
    for _ in range(m):
        w = int(rng.integers(w_min, w_max + 1))
        support = rng.choice(n, size=min(w, n), replace=False)
        rows.append(pack_bits(1 if j in set(support.tolist()) else 0
                              for j in range(n)))
    return LinearCode(BinaryMatrix(n, tuple(rows)))


def random_forest_code(rng, n_lo=8, n_hi=16) -> LinearCode:
    """Random code whose Tanner graph is a forest: every check joins
    variables from previously disconnected components."""
    n = int(rng.integers(n_lo, n_hi + 1))
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    rows = []
    for _ in range(int(rng.integers(2, max(3, n // 3) + 1))):
        deg = int(rng.integers(2, 4))
        chosen, roots = [], set()
        for v in rng.permutation(n):
            r = find(int(v))
            if r not in roots:
                roots.add(r)
                chosen.append(int(v))
                if len(chosen) == deg:
                    break
        if len(chosen) < 2:
            break
        rows.append(sum(1 << j for j in chosen))
        base = find(chosen[0])
        for v in chosen[1:]:
            parent[find(v)] = base
    if not rows:
        rows = [0b11]
    return LinearCode(BinaryMatrix(n, tuple(rows)))


def fractional_instance(code, rng, decode, tries=2000):
    """Search for an objective whose bare LP optimum is fractional."""
    from mpdec.decoders import DecodeStatus
    for _ in range(tries):
        lam = rng.standard_normal(code.n)
        res = decode(code, lam)
        if res.status is DecodeStatus.FRACTIONAL_FAILURE:
            return lam, res
    raise AssertionError("no fractional instance found")

"""Shared fixtures and independent oracles for the test suite.

The oracles here deliberately re-derive everything from first principles
(exhaustive enumeration over all symbol assignments) so they share no code
path with the counting engine they check.
"""

from __future__ import annotations

import itertools
import random

import numpy as np
import pytest

from sft2d.core import Alphabet, LatticeBasis, Sft2d


def brute_count_rect(x: Sft2d, w: int, h: int) -> int:
    """Exhaustive count over all |S|^(w*h) assignments (numpy-vectorized)."""
    n = x.alphabet.size
    if n == 0:
        return 0
    total = w * h
    grids = np.array(list(itertools.product(range(n), repeat=total)), dtype=np.int16)
    hm = np.zeros((n, n), dtype=bool)
    vm = np.zeros((n, n), dtype=bool)
    for a, b in x.h_allowed:
        hm[a, b] = True
    for a, b in x.v_allowed:
        vm[a, b] = True
    ok = np.ones(len(grids), dtype=bool)
    for j in range(h):
        for i in range(w):
            c = j * w + i
            if i + 1 < w:
                ok &= hm[grids[:, c], grids[:, c + 1]]
            if j + 1 < h:
                ok &= vm[grids[:, c], grids[:, c + w]]
    return int(ok.sum())


def brute_periodic_points(x: Sft2d, lattice: LatticeBasis) -> int:
    """Exhaustive count of lattice-periodic configurations on a fundamental
    domain, with adjacency reduced through the lattice directly."""
    n = x.alphabet.size
    if n == 0:
        return 0
    w, twist, h = lattice.hnf()

    def reduce(i: int, j: int) -> tuple[int, int]:
        k, j2 = divmod(j, h)
        i2 = (i - k * twist) % w
        return (i2, j2)

    cells = [(i, j) for j in range(h) for i in range(w)]
    pos = {c: t for t, c in enumerate(cells)}
    count = 0
    for assign in itertools.product(range(n), repeat=len(cells)):
        ok = True
        for (i, j) in cells:
            a = assign[pos[(i, j)]]
            ri = assign[pos[reduce(i + 1, j)]]
            up = assign[pos[reduce(i, j + 1)]]
            if (a, ri) not in x.h_allowed or (a, up) not in x.v_allowed:
                ok = False
                break
        if ok:
            count += 1
    return count


def random_sft(rng: random.Random, max_symbols: int = 4) -> Sft2d:
    """Random small SFT with varied relation densities (possibly very sparse)."""
    n = rng.randint(1, max_symbols)
    dens_h = rng.choice([0.3, 0.5, 0.7, 0.9, 1.0])
    dens_v = rng.choice([0.3, 0.5, 0.7, 0.9, 1.0])
    h = frozenset(
        (a, b) for a in range(n) for b in range(n) if rng.random() < dens_h
    )
    v = frozenset(
        (a, b) for a in range(n) for b in range(n) if rng.random() < dens_v
    )
    return Sft2d(Alphabet.of_size(n), h, v)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240811)

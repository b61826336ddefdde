"""Encoding reals as densities of binary sequences, with streaming
verification of the approximation bounds.

A rational-valued function G(n, j) in [0,1] (monotone in j after
`monotonize`) is encoded as a bit function g(k, j): inside the block
t_n < k <= t_{n+1} (default schedule t_n = 2^(n^2)), bit k is 1 iff
k mod n lies in {1, ..., K} with K = floor(n * G(n+1, j)).  Prefix averages
are then rational numbers computable in closed form per block, no bit
materialization needed; `verify_block_bound` checks |avg(t_n) - target| < 1/n
under both the printed index convention (target G(n, j)) and the block
convention the construction actually aims at (target G(n+1, j)), and reports
both.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

__all__ = [
    "RationalFn",
    "BitFn",
    "default_schedule",
    "monotonize",
    "encode_density",
    "BlockBoundRecord",
    "verify_block_bound",
    "DensityEstimate",
    "density_estimates",
    "family_constant",
    "family_one_over_n",
    "family_alternating",
    "family_table",
]

MATERIALIZE_CAP = 1 << 24


def default_schedule(n: int) -> int:
    return 2 ** (n * n)


def _as_fraction(v) -> Fraction:
    if isinstance(v, float):
        raise ValueError("float values unsupported; use exact rationals")
    return Fraction(v)


class RationalFn:
    """Callback-style rational function (n, j) -> Q in [0, 1]."""

    def __init__(self, fn: Callable[[int, int], Fraction], monotone: bool = False):
        self._fn = fn
        self.monotone = monotone
        self._cache: dict[tuple[int, int], Fraction] = {}

    def __call__(self, n: int, j: int) -> Fraction:
        key = (n, j)
        got = self._cache.get(key)
        if got is None:
            got = _as_fraction(self._fn(n, j))
            if not 0 <= got <= 1:
                raise ValueError(f"G({n},{j}) = {got} outside [0,1]")
            self._cache[key] = got
        return got


def monotonize(G: RationalFn) -> RationalFn:
    """G'(n, j) = min over k <= j of G(n, k); idempotent, same inf over j."""

    minima: dict[int, list[Fraction]] = {}

    def fn(n: int, j: int) -> Fraction:
        row = minima.setdefault(n, [])
        while len(row) <= j:
            v = G(n, len(row))
            row.append(v if not row else min(row[-1], v))
        return row[j]

    return RationalFn(fn, monotone=True)


class BitFn:
    """Computable bit function (k, j) -> {0,1} with a block schedule t_n.

    When built by `encode_density` it also knows closed-form block one-counts,
    so prefix sums up to huge t_n stay cheap and exact.
    """

    def __init__(
        self,
        fn: Callable[[int, int], int],
        schedule: Callable[[int], int] = default_schedule,
        block_ones: Callable[[int, int], int] | None = None,
        block_ones_inf: Callable[[int, int], int] | None = None,
    ):
        self._fn = fn
        self.schedule = schedule
        self._block_ones = block_ones
        self._block_ones_inf = block_ones_inf
        ts = [schedule(i) for i in range(1, 8)]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("schedule must be strictly increasing")

    def __call__(self, k: int, j: int) -> int:
        b = self._fn(k, j)
        if b not in (0, 1):
            raise ValueError(f"g({k},{j}) = {b!r} is not a bit")
        return b

    def block_ones(self, n: int, j: int) -> int:
        """Ones in the block (t_n, t_{n+1}] at column j."""
        if self._block_ones is not None:
            return self._block_ones(n, j)
        a, b = self.schedule(n), self.schedule(n + 1)
        if b - a > MATERIALIZE_CAP:
            raise ValueError(
                f"block {n} has {b - a} bits and no closed form; "
                f"would need ~{(b - a) // 10**6}M bit evaluations"
            )
        return sum(self._fn(k, j) for k in range(a + 1, b + 1))

    def prefix_ones(self, n: int, j: int) -> int:
        """Ones among k = 1 .. t_n at column j (bits before t_1 are zero for
        encoded functions; generic functions are summed directly)."""
        t1 = self.schedule(1)
        if self._block_ones is not None:
            total = 0
            for i in range(1, n):
                total += self._block_ones(i, j)
            return total
        if self.schedule(n) > MATERIALIZE_CAP:
            raise ValueError(f"prefix t_{n} too large to materialize")
        return sum(self._fn(k, j) for k in range(1, self.schedule(n) + 1))

    def prefix_ones_inf(self, n: int, j_max: int) -> int:
        """Ones of k -> min_{j <= j_max} g(k, j) among k = 1 .. t_n."""
        if self._block_ones_inf is not None:
            return sum(self._block_ones_inf(i, j_max) for i in range(1, n))
        if self.schedule(n) > MATERIALIZE_CAP:
            raise ValueError(f"prefix t_{n} too large to materialize")
        return sum(
            min(self._fn(k, j) for j in range(j_max + 1))
            for k in range(1, self.schedule(n) + 1)
        )


def _ones_in_range(a: int, b: int, modulus: int, K: int) -> int:
    """Count of k in (a, b] with (k mod modulus) in {1, ..., K}."""
    if K <= 0:
        return 0
    total = 0
    for r in range(1, K + 1):
        c = r % modulus
        total += (b - c) // modulus - (a - c) // modulus
    return total


def encode_density(G: RationalFn, schedule: Callable[[int], int] = default_schedule) -> BitFn:
    """The block/residue encoding of G as a bit function.

    K = n means every residue class is hit (the set {1,...,n} covers all of
    Z/n), matching G == 1 giving the all-ones tail.  Bits at k <= t_1 are 0.
    """

    def K(n: int, j: int) -> int:
        return math.floor(n * G(n + 1, j))

    def K_inf(n: int, j_max: int) -> int:
        return min(K(n, j) for j in range(j_max + 1))

    def fn(k: int, j: int) -> int:
        if k <= schedule(1):
            return 0
        n = 1
        while k > schedule(n + 1):
            n += 1
        r = k % n
        kk = K(n, j)
        return 1 if (r != 0 and r <= kk) or (r == 0 and kk >= n) else 0

    def block_ones(n: int, j: int) -> int:
        return _ones_in_range(schedule(n), schedule(n + 1), n, K(n, j))

    def block_ones_inf(n: int, j_max: int) -> int:
        return _ones_in_range(schedule(n), schedule(n + 1), n, K_inf(n, j_max))

    return BitFn(fn, schedule, block_ones, block_ones_inf)


@dataclass(frozen=True)
class BlockBoundRecord:
    n: int
    j: int
    average: Fraction  # (1/t_n) sum_{k <= t_n} g(k, j)
    target: Fraction  # G(n, j), the printed index convention
    shifted_target: Fraction  # G(n+1, j), what the block construction aims at
    bound: Fraction  # 1/n
    passed: bool  # |average - target| < bound
    passed_shifted: bool  # |average - shifted_target| < bound


def verify_block_bound(g: BitFn, G: RationalFn, n: int, j: int) -> BlockBoundRecord:
    """Exact rational check of the prefix-average bound at t_n, column j."""
    if n < 1:
        raise ValueError("n must be >= 1")
    tn = g.schedule(n)
    avg = Fraction(g.prefix_ones(n, j), tn)
    target = G(n, j)
    shifted = G(n + 1, j)
    bound = Fraction(1, n)
    return BlockBoundRecord(
        n,
        j,
        avg,
        target,
        shifted,
        bound,
        abs(avg - target) < bound,
        abs(avg - shifted) < bound,
    )


@dataclass(frozen=True)
class DensityEstimate:
    n: int
    avg_then_inf: Fraction  # min over j <= j_max of the prefix average at t_n
    inf_then_avg: Fraction  # prefix average of k -> min_{j <= j_max} g(k, j)


def density_estimates(g: BitFn, n_max: int, j_max: int) -> list[DensityEstimate]:
    """Finite-stage approximants under both readings, reported side by side."""
    out = []
    for n in range(1, n_max + 1):
        tn = g.schedule(n)
        a = min(Fraction(g.prefix_ones(n, j), tn) for j in range(j_max + 1))
        b = Fraction(g.prefix_ones_inf(n, j_max), tn)
        out.append(DensityEstimate(n, a, b))
    return out


# ---------------------------------------------------------------------------
# built-in G families (used by the command line and the tests)


def family_constant(c) -> RationalFn:
    cf = _as_fraction(c)
    return RationalFn(lambda n, j: cf, monotone=True)


def family_one_over_n() -> RationalFn:
    return RationalFn(lambda n, j: Fraction(1, max(n, 1)), monotone=True)


def family_alternating(c, d) -> RationalFn:
    cf, df = _as_fraction(c), _as_fraction(d)

    def fn(n: int, j: int) -> Fraction:
        v = cf + (df if n % 2 == 0 else -df)
        return min(max(v, Fraction(0)), Fraction(1))

    return RationalFn(fn)


def family_table(rows: Sequence[Sequence]) -> RationalFn:
    """Row n-1 holds G(n, j) for j = 0, 1, ...; the last entry extends."""
    table = [[_as_fraction(v) for v in row] for row in rows]
    if not table or any(not row for row in table):
        raise ValueError("table must have nonempty rows")

    def fn(n: int, j: int) -> Fraction:
        row = table[min(n - 1, len(table) - 1)]
        return row[min(j, len(row) - 1)]

    return RationalFn(fn)

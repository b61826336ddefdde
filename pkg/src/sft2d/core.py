"""Core data model for two-dimensional nearest-neighbor shifts of finite type.

An :class:`Sft2d` is an alphabet of symbols together with two binary
relations on symbol indices: ``h_allowed`` holds the ordered pairs ``(a, b)``
where ``b`` may sit immediately to the right of ``a``, and ``v_allowed`` the
pairs where ``b`` may sit immediately above ``a``.  Patterns are finite
rectangular blocks; cell ``(i, j)`` means column ``i``, row ``j``, with the
origin at the bottom left.

Everything here is immutable after construction, so values can be shared
freely across threads; all operations are pure.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Callable, Iterable, Sequence

__all__ = [
    "Alphabet",
    "Sft2d",
    "Pattern",
    "LatticeBasis",
    "full_shift",
    "hard_square",
    "is_locally_admissible",
    "higher_block",
    "product",
    "restrict",
]


def _check_symbol_name(name: str) -> None:
    if not name:
        raise ValueError("empty symbol name")
    if any(ch.isspace() for ch in name) or "#" in name or name.startswith("["):
        raise ValueError(f"bad symbol name {name!r}: no whitespace/'#', must not start with '['")


@dataclass(frozen=True)
class Alphabet:
    """Symbol table with dense indices 0..n-1 and unique display names.

    An empty alphabet is representable (restriction pipelines can empty an
    alphabet mid-experiment); the rule-file parser refuses to produce one.
    """

    names: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate symbol names")
        for nm in self.names:
            _check_symbol_name(nm)

    @staticmethod
    def of_size(n: int, prefix: str = "s") -> "Alphabet":
        return Alphabet(tuple(f"{prefix}{i}" for i in range(n)))

    @property
    def size(self) -> int:
        return len(self.names)

    @cached_property
    def index(self) -> dict[str, int]:
        return {nm: i for i, nm in enumerate(self.names)}

    def __len__(self) -> int:
        return len(self.names)


@dataclass(frozen=True)
class Sft2d:
    """Nearest-neighbor SFT presentation: alphabet plus h/v pair relations."""

    alphabet: Alphabet
    h_allowed: frozenset
    v_allowed: frozenset
    metadata: str = ""

    def __post_init__(self):
        object.__setattr__(self, "h_allowed", frozenset(self.h_allowed))
        object.__setattr__(self, "v_allowed", frozenset(self.v_allowed))
        n = self.alphabet.size
        for a, b in itertools.chain(self.h_allowed, self.v_allowed):
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"relation references invalid symbol index ({a},{b})")

    @staticmethod
    def from_names(
        names: Sequence[str],
        h_pairs: Iterable[tuple[int, int]],
        v_pairs: Iterable[tuple[int, int]],
        metadata: str = "",
    ) -> "Sft2d":
        return Sft2d(Alphabet(tuple(names)), frozenset(h_pairs), frozenset(v_pairs), metadata)

    @property
    def size(self) -> int:
        return self.alphabet.size

    @property
    def is_empty(self) -> bool:
        """Empty-alphabet SFT flag; counting operations return 0 on these."""
        return self.alphabet.size == 0

    def same_rules(self, other: "Sft2d") -> bool:
        """Structural equality ignoring the free-form metadata string."""
        return (
            self.alphabet.names == other.alphabet.names
            and self.h_allowed == other.h_allowed
            and self.v_allowed == other.v_allowed
        )

    def with_metadata(self, metadata: str) -> "Sft2d":
        return replace(self, metadata=metadata)

    # ---- cached adjacency bitmasks (bit b of mask[a] = pair (a,b) allowed) --

    @cached_property
    def h_right_mask(self) -> tuple[int, ...]:
        return self._mask(self.h_allowed, flip=False)

    @cached_property
    def h_left_mask(self) -> tuple[int, ...]:
        return self._mask(self.h_allowed, flip=True)

    @cached_property
    def v_up_mask(self) -> tuple[int, ...]:
        return self._mask(self.v_allowed, flip=False)

    @cached_property
    def v_down_mask(self) -> tuple[int, ...]:
        return self._mask(self.v_allowed, flip=True)

    @property
    def full_mask(self) -> int:
        return (1 << self.alphabet.size) - 1

    def _mask(self, rel: frozenset, flip: bool) -> tuple[int, ...]:
        masks = [0] * self.alphabet.size
        for a, b in rel:
            if flip:
                masks[b] |= 1 << a
            else:
                masks[a] |= 1 << b
        return tuple(masks)

    def transpose(self) -> "Sft2d":
        """Swap the two axes (h and v relations); counts are mirrored."""
        return Sft2d(self.alphabet, self.v_allowed, self.h_allowed, self.metadata)


@dataclass(frozen=True)
class Pattern:
    """Finite rectangular block of symbol indices, row-major from the bottom.

    ``cells[j * width + i]`` is the symbol at column ``i``, row ``j``.
    """

    width: int
    height: int
    cells: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(self.cells))
        if self.width < 1 or self.height < 1:
            raise ValueError("pattern dimensions must be positive")
        if len(self.cells) != self.width * self.height:
            raise ValueError("cells length must equal width*height")

    def get(self, i: int, j: int) -> int:
        if not (0 <= i < self.width and 0 <= j < self.height):
            raise IndexError((i, j))
        return self.cells[j * self.width + i]

    def row(self, j: int) -> tuple[int, ...]:
        return self.cells[j * self.width : (j + 1) * self.width]

    def subpattern(self, i0: int, j0: int, w: int, h: int) -> "Pattern":
        cells = tuple(self.get(i0 + di, j0 + dj) for dj in range(h) for di in range(w))
        return Pattern(w, h, cells)

    @staticmethod
    def from_rows_top_down(rows: Sequence[Sequence[int]]) -> "Pattern":
        """Build from rows as visually written (first row = top of the block)."""
        h = len(rows)
        w = len(rows[0])
        if any(len(r) != w for r in rows):
            raise ValueError("ragged rows")
        cells = []
        for r in reversed(rows):
            cells.extend(r)
        return Pattern(w, h, tuple(cells))


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _ext_gcd(b, a % b)
    return (g, y, x - (a // b) * y)


@dataclass(frozen=True)
class LatticeBasis:
    """Sublattice of Z^2 generated by the two column vectors u and v."""

    u: tuple[int, int]
    v: tuple[int, int]

    def __post_init__(self):
        if self.det == 0:
            raise ValueError("lattice basis must have nonzero determinant")

    @staticmethod
    def square(k: int) -> "LatticeBasis":
        return LatticeBasis((k, 0), (0, k))

    @property
    def det(self) -> int:
        return self.u[0] * self.v[1] - self.u[1] * self.v[0]

    @property
    def index(self) -> int:
        """Fundamental-domain size |det|."""
        return abs(self.det)

    def hnf(self) -> tuple[int, int, int]:
        """Return (w, twist, h): the lattice equals <(w,0), (twist,h)>.

        w, h > 0 and 0 <= twist < w.  Periodic points live on a cyclic row of
        width w, stacked h high; moving up past row h-1 wraps to row 0 shifted
        left by twist.
        """
        (a, b), (c, d) = self.u, self.v
        g, alpha, beta = _ext_gcd(b, d)
        if g == 0:
            # both second components zero is impossible (det != 0)
            raise AssertionError
        h = abs(g)
        if g < 0:
            alpha, beta = -alpha, -beta
        w = abs(self.det) // h
        q0 = alpha * a + beta * c
        twist = q0 % w
        basis = LatticeBasis((w, 0), (twist, h))
        assert basis._contains(self.u) and basis._contains(self.v)
        assert self._contains((w, 0)) and self._contains((twist, h))
        return (w, twist, h)

    def _contains(self, p: tuple[int, int]) -> bool:
        x, y = p
        (a, b), (c, d) = self.u, self.v
        det = self.det
        # solve s*u + t*v = p over the rationals, check integrality
        sn = x * d - y * c
        tn = a * y - b * x
        return sn % det == 0 and tn % det == 0


# ---------------------------------------------------------------------------
# canonical small examples


def full_shift(n: int, prefix: str = "s") -> Sft2d:
    alpha = Alphabet.of_size(n, prefix)
    pairs = frozenset((a, b) for a in range(n) for b in range(n))
    return Sft2d(alpha, pairs, pairs, metadata=f"full shift on {n} symbols")


def hard_square() -> Sft2d:
    """Two symbols; adjacent 1s forbidden in both directions."""
    pairs = frozenset([(0, 0), (0, 1), (1, 0)])
    return Sft2d(Alphabet(("0", "1")), pairs, pairs, metadata="hard square")


# ---------------------------------------------------------------------------
# operations


def is_locally_admissible(x: Sft2d, p: Pattern) -> bool:
    """True iff no horizontally or vertically adjacent cell pair is forbidden."""
    n = x.alphabet.size
    for s in p.cells:
        if not (0 <= s < n):
            raise ValueError(f"pattern symbol {s} out of range for alphabet of size {n}")
    hs = x.h_allowed
    vs = x.v_allowed
    w, h = p.width, p.height
    cells = p.cells
    for j in range(h):
        base = j * w
        for i in range(w - 1):
            if (cells[base + i], cells[base + i + 1]) not in hs:
                return False
    for j in range(h - 1):
        base = j * w
        for i in range(w):
            if (cells[base + i], cells[base + w + i]) not in vs:
                return False
    return True


def _admissible_blocks(x: Sft2d, w: int, h: int):
    """Yield all locally admissible w x h cell tuples in lexicographic order."""
    n = x.alphabet.size
    if n == 0:
        return
    hmask = x.h_right_mask
    vmask = x.v_up_mask
    full = x.full_mask
    total = w * h
    cells: list[int] = []

    def options(pos: int) -> int:
        i, j = pos % w, pos // w
        m = full
        if i > 0:
            m &= hmask[cells[pos - 1]]
        if j > 0:
            m &= vmask[cells[pos - w]]
        return m

    def rec(pos: int):
        if pos == total:
            yield tuple(cells)
            return
        m = options(pos)
        while m:
            low = m & -m
            s = low.bit_length() - 1
            m ^= low
            cells.append(s)
            yield from rec(pos + 1)
            cells.pop()

    yield from rec(0)


def higher_block(x: Sft2d, m: int) -> Sft2d:
    """Recode to the SFT of locally admissible m x m windows with overlap rules.

    The result is topologically conjugate to x; its k x k locally admissible
    block count equals the (k+m-1) x (k+m-1) count of x.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if m == 1:
        return x
    blocks = list(_admissible_blocks(x, m, m))
    names = tuple("w" + "_".join(str(c) for c in b) for b in blocks)
    idx = {b: i for i, b in enumerate(blocks)}

    def col(b, i):
        return tuple(b[j * m + i] for j in range(m))

    def row(b, j):
        return tuple(b[j * m + i] for i in range(m))

    h_pairs = set()
    v_pairs = set()
    # group by overlap so adjacency is overlap consistency, not O(n^2) scans
    by_left = {}
    for b in blocks:
        key = tuple(col(b, i) for i in range(1, m))
        by_left.setdefault(key, []).append(b)
    for b in blocks:
        key = tuple(col(b, i) for i in range(0, m - 1))
        for b2 in by_left.get(key, ()):
            h_pairs.add((idx[b2], idx[b]))
    by_bottom = {}
    for b in blocks:
        key = tuple(row(b, j) for j in range(1, m))
        by_bottom.setdefault(key, []).append(b)
    for b in blocks:
        key = tuple(row(b, j) for j in range(0, m - 1))
        for b2 in by_bottom.get(key, ()):
            v_pairs.add((idx[b2], idx[b]))
    meta = f"higher-block m={m} of: {x.metadata}" if x.metadata else f"higher-block m={m}"
    return Sft2d(Alphabet(names), frozenset(h_pairs), frozenset(v_pairs), meta)


def product(x: Sft2d, y: Sft2d) -> Sft2d:
    """Direct product: pairs allowed iff allowed in both factors."""
    nx, ny = x.alphabet.size, y.alphabet.size
    names = tuple(f"{a}*{b}" for a in x.alphabet.names for b in y.alphabet.names)
    if len(set(names)) != len(names):
        names = tuple(f"p{ia}*{ib}" for ia in range(nx) for ib in range(ny))

    def code(ia, ib):
        return ia * ny + ib

    h_pairs = frozenset(
        (code(a1, b1), code(a2, b2))
        for (a1, a2) in x.h_allowed
        for (b1, b2) in y.h_allowed
    )
    v_pairs = frozenset(
        (code(a1, b1), code(a2, b2))
        for (a1, a2) in x.v_allowed
        for (b1, b2) in y.v_allowed
    )
    return Sft2d(Alphabet(names), h_pairs, v_pairs, metadata="product")


def restrict(
    x: Sft2d,
    keep: Callable[[int, str], bool] | Iterable[int] | None = None,
    forbid_h: Iterable[tuple[int, int]] = (),
    forbid_v: Iterable[tuple[int, int]] = (),
) -> Sft2d:
    """Sub-SFT: filter symbols and subtract extra forbidden pairs.

    ``keep`` is a predicate on (index, name) or a collection of indices;
    ``forbid_h``/``forbid_v`` are pairs in x's symbol indices.  Removing every
    symbol yields the flagged empty SFT rather than an error.
    """
    n = x.alphabet.size
    if keep is None:
        kept = list(range(n))
    elif callable(keep):
        kept = [i for i in range(n) if keep(i, x.alphabet.names[i])]
    else:
        ks = set(keep)
        kept = [i for i in range(n) if i in ks]
    remap = {old: new for new, old in enumerate(kept)}
    fh = set(map(tuple, forbid_h))
    fv = set(map(tuple, forbid_v))
    h_pairs = frozenset(
        (remap[a], remap[b])
        for (a, b) in x.h_allowed
        if a in remap and b in remap and (a, b) not in fh
    )
    v_pairs = frozenset(
        (remap[a], remap[b])
        for (a, b) in x.v_allowed
        if a in remap and b in remap and (a, b) not in fv
    )
    names = tuple(x.alphabet.names[i] for i in kept)
    return Sft2d(Alphabet(names), h_pairs, v_pairs, x.metadata)

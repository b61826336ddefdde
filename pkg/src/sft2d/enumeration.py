"""Exact counting engine: locally admissible blocks, k-in-j block counts,
periodic points on sublattice tori, and uniform pattern sampling.

All counts are plain Python integers (arbitrary precision) computed by
frontier dynamic programming (transfer-matrix style row sweeps).  Counting is
pure and bit-deterministic; resource caps raise :class:`ResourceLimitError`
with a work estimate instead of thrashing.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .core import LatticeBasis, Pattern, Sft2d, _admissible_blocks

__all__ = [
    "ResourceLimitError",
    "BlockCount",
    "count_rect",
    "count_blocks",
    "periodic_points",
    "sample_pattern",
]


class ResourceLimitError(RuntimeError):
    """A configured cap (frontier states, rows, candidates) was exceeded."""

    def __init__(self, message: str, estimate: str = ""):
        super().__init__(message + (f" ({estimate})" if estimate else ""))
        self.estimate = estimate


@dataclass(frozen=True)
class BlockCount:
    """Number of distinct k-blocks occurring centrally in admissible j-blocks."""

    k: int
    j: int
    value: int


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def count_rect(
    x: Sft2d,
    w: int,
    h: int,
    *,
    pins: dict | None = None,
    max_states: int | None = None,
) -> int:
    """Exact count of locally admissible w x h patterns.

    ``pins`` optionally fixes cells: a map (col, row) -> symbol index.  The
    result is independent of sweep direction and worker configuration.
    """
    if w < 1 or h < 1:
        raise ValueError("w and h must be >= 1")
    if x.is_empty:
        return 0
    n = x.alphabet.size
    if pins:
        for (i, j), s in pins.items():
            if not (0 <= i < w and 0 <= j < h):
                raise ValueError(f"pin {(i, j)} outside {w}x{h} block")
            if not (0 <= s < n):
                raise ValueError(f"pin symbol {s} out of range")
    hm = x.h_right_mask
    vm = x.v_up_mask
    full = x.full_mask
    states: dict[tuple, int] = {(): 1}
    for j in range(h):
        for i in range(w):
            pin = pins.get((i, j)) if pins else None
            new: dict[tuple, int] = {}
            for st, cnt in states.items():
                m = full
                if i > 0:
                    m &= hm[st[-1]]
                if j > 0:
                    m &= vm[st[0]]
                if pin is not None:
                    m &= 1 << pin
                for s in _bits(m):
                    nst = st + (s,) if len(st) < w else st[1:] + (s,)
                    if nst in new:
                        new[nst] += cnt
                    else:
                        new[nst] = cnt
            states = new
            if not states:
                return 0
            if max_states is not None and len(states) > max_states:
                raise ResourceLimitError(
                    f"frontier exceeded {max_states} states at cell ({i},{j})",
                    estimate=f"{len(states)} states and growing on a {w}x{h} sweep",
                )
    return sum(states.values())


# ---------------------------------------------------------------------------
# row machinery shared by count_blocks and periodic_points


class _RowEngine:
    """Enumerates width-w admissible rows and cached vertical successor rows."""

    def __init__(self, x: Sft2d, w: int, cyclic: bool = False, max_rows: int | None = None):
        self.x = x
        self.w = w
        self.cyclic = cyclic
        self.max_rows = max_rows
        self._succ_up: dict[tuple, tuple] = {}
        self._succ_down: dict[tuple, tuple] = {}

    def all_rows(self) -> list[tuple]:
        """All h-admissible rows (cyclically closed when cyclic=True)."""
        x, w = self.x, self.w
        hm = x.h_right_mask
        full = x.full_mask
        out: list[tuple] = []
        row: list[int] = []

        def rec(pos: int):
            if pos == w:
                if not self.cyclic or (hm[row[-1]] >> row[0]) & 1:
                    out.append(tuple(row))
                    if self.max_rows is not None and len(out) > self.max_rows:
                        raise ResourceLimitError(
                            f"row universe exceeded {self.max_rows} rows at width {w}",
                            estimate="widen caps or reduce the block size",
                        )
                return
            m = hm[row[-1]] if pos > 0 else full
            for s in _bits(m):
                row.append(s)
                rec(pos + 1)
                row.pop()

        rec(0)
        return out

    def _succ(self, u: tuple, up: bool) -> tuple:
        cache = self._succ_up if up else self._succ_down
        got = cache.get(u)
        if got is not None:
            return got
        x, w = self.x, self.w
        vm = x.v_up_mask if up else x.v_down_mask
        hm = x.h_right_mask
        out: list[tuple] = []
        row: list[int] = []

        def rec(pos: int):
            if pos == w:
                if not self.cyclic or (hm[row[-1]] >> row[0]) & 1:
                    out.append(tuple(row))
                return
            m = vm[u[pos]]
            if pos > 0:
                m &= hm[row[-1]]
            for s in _bits(m):
                row.append(s)
                rec(pos + 1)
                row.pop()

        rec(0)
        res = tuple(out)
        cache[u] = res
        return res

    def succ_up(self, u: tuple) -> tuple:
        return self._succ(u, True)

    def succ_down(self, u: tuple) -> tuple:
        return self._succ(u, False)


def _center_key(row: tuple, left: int, k: int) -> tuple:
    return row[left : left + k]


def count_blocks(
    x: Sft2d,
    k: int,
    j: int,
    *,
    max_states: int | None = None,
    max_candidates: int | None = None,
    project: dict | None = None,
) -> BlockCount:
    """Distinct k x k blocks appearing centrally in admissible j x j blocks.

    Central placement at offset ((j-k)//2, (j-k)//2); odd parities use floor
    offsets.  With ``project`` (symbol -> class map) the count is over
    projected blocks instead, which lets recoded presentations be compared
    against coarser symbol sets.
    """
    if k < 1 or j < k:
        raise ValueError("need j >= k >= 1")
    if x.is_empty:
        return BlockCount(k, j, 0)
    if j == k and project is None:
        return BlockCount(k, j, count_rect(x, k, k, max_states=max_states))

    left = (j - k) // 2
    bottom = left
    top = j - k - bottom

    if j == k:
        seen = set()
        for cand in _admissible_blocks(x, k, k):
            seen.add(tuple(project[c] for c in cand))
            if max_candidates is not None and len(seen) > max_candidates:
                raise ResourceLimitError(f"candidate cap {max_candidates} exceeded")
        return BlockCount(k, j, len(seen))

    eng = _RowEngine(x, j, cyclic=False, max_rows=max_states)
    universe = eng.all_rows()
    if not universe:
        return BlockCount(k, j, 0)

    def sweep_up(rows: set) -> set:
        out: set = set()
        for r in rows:
            out.update(eng.succ_up(r))
            if max_states is not None and len(out) > max_states:
                raise ResourceLimitError(f"band sweep exceeded {max_states} rows")
        return out

    def sweep_down(rows: set) -> set:
        out: set = set()
        for r in rows:
            out.update(eng.succ_down(r))
            if max_states is not None and len(out) > max_states:
                raise ResourceLimitError(f"band sweep exceeded {max_states} rows")
        return out

    # rows possible at the first middle level, given `bottom` free rows below
    start_rows = set(universe)
    for _ in range(bottom):
        start_rows = sweep_up(start_rows)
        if not start_rows:
            return BlockCount(k, j, 0)
    # rows that still admit `top` free rows above
    supports = set(universe)
    for _ in range(top):
        supports = sweep_down(supports)
        if not supports:
            return BlockCount(k, j, 0)

    by_center: dict[tuple, list] = {}
    for r in start_rows:
        by_center.setdefault(_center_key(r, left, k), []).append(r)

    # per-row successor lists indexed by their central content, filled lazily
    succ_by_center: dict[tuple, dict] = {}

    def succ_centered(r: tuple, center: tuple) -> tuple:
        d = succ_by_center.get(r)
        if d is None:
            d = {}
            for s in eng.succ_up(r):
                d.setdefault(_center_key(s, left, k), []).append(s)
            succ_by_center[r] = d
        return tuple(d.get(center, ()))

    seen: set = set()
    n_candidates = 0
    for cand in _admissible_blocks(x, k, k):
        n_candidates += 1
        if max_candidates is not None and n_candidates > max_candidates:
            raise ResourceLimitError(
                f"candidate cap {max_candidates} exceeded", estimate=f"k={k}, j={j}"
            )
        key = tuple(project[c] for c in cand) if project is not None else cand
        if key in seen:
            continue
        rows = [tuple(cand[t * k : (t + 1) * k]) for t in range(k)]
        states = set(by_center.get(rows[0], ()))
        ok = False
        if states:
            for t in range(1, k):
                nxt: set = set()
                for r in states:
                    nxt.update(succ_centered(r, rows[t]))
                states = nxt
                if not states:
                    break
            if states:
                ok = any(r in supports for r in states)
        if ok:
            seen.add(key)
    return BlockCount(k, j, len(seen))


def periodic_points(
    x: Sft2d,
    lattice: LatticeBasis | tuple,
    *,
    max_rows: int | None = None,
) -> int:
    """Exact number of configurations fixed by every translation in the lattice.

    Computed on the fundamental domain: cyclically admissible rows of width w
    stacked h high, the top wrapping to the bottom row shifted by the twist
    (w, twist, h from the basis' Hermite form).
    """
    if isinstance(lattice, tuple):
        lattice = LatticeBasis(*lattice)
    if x.is_empty:
        return 0
    w, twist, h = lattice.hnf()
    eng = _RowEngine(x, w, cyclic=True, max_rows=max_rows)
    rows = eng.all_rows()
    if not rows:
        return 0
    vm = x.v_up_mask
    total = 0
    for r0 in rows:
        vec = {r0: 1}
        for _ in range(h - 1):
            nxt: dict[tuple, int] = {}
            for r, c in vec.items():
                for r2 in eng.succ_up(r):
                    if r2 in nxt:
                        nxt[r2] += c
                    else:
                        nxt[r2] = c
            vec = nxt
            if not vec:
                break
        if not vec:
            continue
        target = tuple(r0[(i - twist) % w] for i in range(w))
        for r, c in vec.items():
            if all((vm[r[i]] >> target[i]) & 1 for i in range(w)):
                total += c
    return total


def sample_pattern(
    x: Sft2d,
    w: int,
    h: int,
    seed: int,
    *,
    max_states: int | None = None,
) -> Pattern | None:
    """Uniform random locally admissible w x h pattern, or None if none exist.

    Drawn by backward sampling from the same DP tables count_rect uses, so the
    distribution is exactly uniform; deterministic for a given seed.
    """
    if w < 1 or h < 1:
        raise ValueError("w and h must be >= 1")
    if x.is_empty:
        return None
    hm = x.h_right_mask
    vm = x.v_up_mask
    full = x.full_mask
    history: list[dict[tuple, int]] = []
    states: dict[tuple, int] = {(): 1}
    for j in range(h):
        for i in range(w):
            new: dict[tuple, int] = {}
            for st, cnt in states.items():
                m = full
                if i > 0:
                    m &= hm[st[-1]]
                if j > 0:
                    m &= vm[st[0]]
                for s in _bits(m):
                    nst = st + (s,) if len(st) < w else st[1:] + (s,)
                    if nst in new:
                        new[nst] += cnt
                    else:
                        new[nst] = cnt
            states = new
            if not states:
                return None
            if max_states is not None and len(states) > max_states:
                raise ResourceLimitError(f"frontier exceeded {max_states} states")
            history.append(states)

    total = sum(states.values())
    rng = random.Random(seed)

    def weighted_pick(items: list[tuple[tuple, int]]) -> tuple:
        tot = sum(c for _, c in items)
        r = rng.randrange(tot)
        for st, c in items:
            if r < c:
                return st
            r -= c
        raise AssertionError

    final = weighted_pick(sorted(history[-1].items()))
    chosen = [final[-1]]
    cur = final
    n = x.alphabet.size
    for t in range(len(history) - 1, 0, -1):
        prev = history[t - 1]
        i, j = t % w, t // w
        s = cur[-1]

        def valid(pst: tuple) -> bool:
            if i > 0 and not (hm[pst[-1]] >> s) & 1:
                return False
            if j > 0 and not (vm[pst[0]] >> s) & 1:
                return False
            return True

        cands: list[tuple[tuple, int]] = []
        if t < w:
            # still inside the first row: the predecessor is an exact prefix
            pst = cur[:-1]
            if pst in prev and valid(pst):
                cands.append((pst, prev[pst]))
        else:
            head = cur[:-1]
            for u in range(n):
                pst = (u,) + head
                c = prev.get(pst)
                if c is not None and valid(pst):
                    cands.append((pst, c))
        cur = weighted_pick(sorted(cands))
        chosen.append(cur[-1])
    chosen.reverse()
    assert len(chosen) == w * h and total > 0
    return Pattern(w, h, tuple(chosen))

"""Generators for the hierarchical (odometer-style) tile sets and the
Turing-machine space-time SFT, all emitted in nearest-neighbor form.

The p-adic tile family
----------------------

Configurations are built from four cell classes.  Write ``lbl`` for the label
set {0, 2, 3, ..., p-1} (``1`` is reserved: the 1-digit slots carry the next
level of structure).

* ``B.n{n}.m{m}`` - level-0 nodes tiling most of the plane; labels increment
  to the right and upward.
* ``W.n{n}.m{m}`` - nodes of level >= 1, sitting where a vertical and a
  horizontal structure line of equal level meet.
* ``V.n{n}.m{m}.r(B|A){r}`` - one cell of a vertical line: ``n`` is the
  line's horizontal digit, ``m`` the progress label between consecutive
  nodes (it passes through 1 exactly once per period, just above the line's
  crossing with a higher-level row).  The ``r...`` component is one cell of
  memory for the horizontal structure this cell interrupts: ``rB{r}`` when it
  sits in a B-row with label r, ``rA{r}`` when a lower-level arrow row with
  label r crosses here.
* ``H.n{n}.m{m}.c(B|A){c}`` - mirror image for horizontal lines.

Distance-2 constraints of the underlying rule system (a label must reappear
two cells past an interruption) are realized by that memory component, so the
output is a genuine nearest-neighbor SFT.  The adjacency tables below were
derived from the self-similar cluster geometry and are cross-checked by the
reference-pattern generator (`padic_reference_pattern`), which evaluates the
intended content of any window directly from digit arithmetic.

Extensions (parity layer, traffic-light marking, blue/license marking,
level-constant marking) decorate these symbols and thread their extra state
through the same memory cells.
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple, Sequence

from .core import Alphabet, Pattern, Sft2d
from .turing import LEFT, RIGHT, TuringMachine

__all__ = [
    "p_adic_xp",
    "robinson_x2",
    "layered_extension",
    "traffic_light_function",
    "traffic_light_F",
    "tsirelson_y",
    "poly_growth_x",
    "tm_spacetime_sft",
    "padic_reference_pattern",
    "cluster_pattern",
    "padic_projection",
]


class _PSym(NamedTuple):
    kind: str  # "B" | "W" | "V" | "H"
    n: int
    m: int
    ctx: tuple | None  # ("B", r) / ("A", r) for V and H, None otherwise

    @property
    def name(self) -> str:
        base = f"{self.kind}.n{self.n}.m{self.m}"
        if self.ctx is not None:
            tag = "r" if self.kind == "V" else "c"
            base += f".{tag}{self.ctx[0]}{self.ctx[1]}"
        return base


def _lbl(p: int) -> list[int]:
    return [v for v in range(p) if v != 1]


def _padic_base(p: int):
    """Symbols and adjacency pairs of the level hierarchy for modulus p >= 2."""
    lbl = _lbl(p)
    allv = list(range(p))
    two = 2 % p
    one = 1 % p
    B = lambda n, m: _PSym("B", n, m, None)
    W = lambda n, m: _PSym("W", n, m, None)
    V = lambda n, m, ctx: _PSym("V", n, m, ctx)
    H = lambda n, m, ctx: _PSym("H", n, m, ctx)

    syms: list[_PSym] = []
    syms += [B(n, m) for n in lbl for m in lbl]
    syms += [W(n, m) for n in lbl for m in lbl]
    syms += [V(n, m, (t, r)) for n in lbl for m in allv for t in "BA" for r in lbl]
    syms += [H(n, m, (t, c)) for n in allv for m in lbl for t in "BA" for c in lbl]

    hp: set = set()
    vp: set = set()

    # --- horizontal ---
    for m in lbl:
        for n in lbl:
            if n != 0:
                hp.add((B(n, m), B((n + 1) % p, m)))
        for n2 in lbl:  # B-row interrupted by a vertical line
            for m2 in allv:
                hp.add((B(0, m), V(n2, m2, ("B", m))))
                hp.add((V(n2, m2, ("B", m)), B(two, m)))
    for n in lbl:
        for m in lbl:
            hp.add((W(n, m), H(n, m, ("B", two))))
            hp.add((H((n - 1) % p, m, ("B", 0)), W(n, m)))
    for n in allv:
        for m in lbl:
            for c in lbl:
                if c != 0:
                    hp.add((H(n, m, ("B", c)), H(n, m, ("B", (c + 1) % p))))
            for c2 in lbl:  # line rides over a lower-level column
                hp.add((H(n, m, ("B", 0)), H(n, m, ("A", c2))))
                hp.add((H(n, m, ("A", c2)), H(n, m, ("B", two))))
    for m in lbl:  # line crossed by a higher-level column: n goes 0 -> 1
        for n2 in lbl:
            for m2 in allv:
                hp.add((H(0, m, ("B", 0)), V(n2, m2, ("A", m))))
                hp.add((V(n2, m2, ("A", m)), H(one, m, ("B", two))))

    # --- vertical (mirror image) ---
    for n in lbl:
        for m in lbl:
            if m != 0:
                vp.add((B(n, m), B(n, (m + 1) % p)))
        for n2 in allv:  # B-column interrupted by a horizontal line
            for m2 in lbl:
                vp.add((B(n, 0), H(n2, m2, ("B", n))))
                vp.add((H(n2, m2, ("B", n)), B(n, two)))
    for n in lbl:
        for m in lbl:
            vp.add((W(n, m), V(n, m, ("B", two))))
            vp.add((V(n, (m - 1) % p, ("B", 0)), W(n, m)))
    for n in lbl:
        for m in allv:
            for r in lbl:
                if r != 0:
                    vp.add((V(n, m, ("B", r)), V(n, m, ("B", (r + 1) % p))))
            for r2 in lbl:  # column rides over a lower-level row
                vp.add((V(n, m, ("B", 0)), V(n, m, ("A", r2))))
                vp.add((V(n, m, ("A", r2)), V(n, m, ("B", two))))
    for n in lbl:  # column crossed by a higher-level row: m goes 0 -> 1
        for n2 in allv:
            for m2 in lbl:
                vp.add((V(n, 0, ("B", 0)), H(n2, m2, ("A", n))))
                vp.add((H(n2, m2, ("A", n)), V(n, one, ("B", two))))

    return syms, hp, vp


def _build(named_syms: dict, h_pairs, v_pairs, metadata: str) -> Sft2d:
    """Assemble an Sft2d from name -> key maps and pair sets over keys."""
    names = sorted(named_syms)
    index = {named_syms[nm]: i for i, nm in enumerate(names)}
    h = frozenset((index[a], index[b]) for a, b in h_pairs)
    v = frozenset((index[a], index[b]) for a, b in v_pairs)
    return Sft2d(Alphabet(tuple(names)), h, v, metadata)


def _build_from_psym(syms, hp, vp, metadata: str) -> Sft2d:
    named = {s.name: s for s in syms}
    return _build(named, hp, vp, metadata)


def p_adic_xp(p: int) -> Sft2d:
    """The modulus-p hierarchical tile set, lowered to nearest-neighbor form.

    Every window of a valid configuration is determined by a pair of p-adic
    offsets; clusters (p^n x p^n blocks whose lower-left corner is a B.n0.m0
    node) recur self-similarly.  Full k x k block counts grow quadratically
    in k; see `cluster_pattern` for the canonical witnesses.
    """
    if p < 3:
        raise ValueError("p must be >= 3")
    syms, hp, vp = _padic_base(p)
    return _build_from_psym(syms, hp, vp, metadata=f"generator=padic p={p}")


# ---------------------------------------------------------------------------
# Robinson-style aperiodic set: the p=2 hierarchy plus a (Z/2)^2 parity layer


def robinson_x2() -> Sft2d:
    """Aperiodic tile set: 2-adic hierarchy with a (Z/2)^2 parity layer.

    Tiles are crosses and arms in the arrow-matching reading: cells where two
    structure lines meet (W nodes and the A-context arrow cells) are the
    crosses; B cells and B-context arrow cells are arms/fillers.  Parity
    increments by one in each direction and parity (0,0) is only emitted on
    crosses, which pins the cross lattice.  The set admits no periodic
    points; the symbol inventory (35) is a frozen fixture of this generator.
    """
    syms, hp, vp = _padic_base(2)
    cross = lambda s: s.kind == "W" or (s.ctx is not None and s.ctx[0] == "A")
    named: dict[str, tuple] = {}
    for s in syms:
        for pa in range(2):
            for pb in range(2):
                if (pa, pb) == (0, 0) and not cross(s):
                    continue
                named[f"{s.name}.P{pa}{pb}"] = (s, pa, pb)
    hp2 = set()
    vp2 = set()
    for a, b in hp:
        for pa in range(2):
            for pb in range(2):
                ka, kb = (a, pa, pb), (b, (pa + 1) % 2, pb)
                if ka[1:] != (0, 0) or cross(a):
                    if kb[1:] != (0, 0) or cross(b):
                        hp2.add((ka, kb))
    for a, b in vp:
        for pa in range(2):
            for pb in range(2):
                ka, kb = (a, pa, pb), (b, pa, (pb + 1) % 2)
                if ka[1:] != (0, 0) or cross(a):
                    if kb[1:] != (0, 0) or cross(b):
                        vp2.add((ka, kb))
    return _build(named, hp2, vp2, metadata="generator=robinson")


# ---------------------------------------------------------------------------
# analytic reference patterns (digit arithmetic), used for self-checks


def _digit(v: int, p: int, k: int) -> int:
    return (v // p**k) % p


def _level(v: int, p: int, depth: int) -> int:
    for k in range(depth):
        if _digit(v, p, k) != 1:
            return k
    raise ValueError("offset hits a degenerate all-ones line; shift the window")


def _psym_at(p: int, alpha: int, beta: int, depth: int) -> _PSym:
    lam = _level(alpha, p, depth)
    mu = _level(beta, p, depth)
    if lam == mu == 0:
        return _PSym("B", _digit(alpha, p, 0), _digit(beta, p, 0), None)
    if lam == mu:
        return _PSym("W", _digit(alpha, p, lam), _digit(beta, p, lam), None)
    if lam > mu:
        ones = (p**lam - 1) // (p - 1)
        g = beta - ((beta - ones) % p**lam)
        m = _digit(g, p, lam)
        ctx = ("B", _digit(beta, p, 0)) if mu == 0 else ("A", _digit(beta, p, mu))
        return _PSym("V", _digit(alpha, p, lam), m, ctx)
    ones = (p**mu - 1) // (p - 1)
    g = alpha - ((alpha - ones) % p**mu)
    n = _digit(g, p, mu)
    ctx = ("B", _digit(alpha, p, 0)) if lam == 0 else ("A", _digit(alpha, p, lam))
    return _PSym("H", n, _digit(beta, p, mu), ctx)


def padic_reference_pattern(
    x: Sft2d,
    p: int,
    w: int,
    h: int,
    *,
    x0: int = 0,
    y0: int = 0,
    r: int = 0,
    s: int = 0,
    parity: bool = False,
) -> Pattern:
    """The intended contents of the window [x0, x0+w) x [y0, y0+h) of the
    configuration with odometer offsets (r, s), as a pattern over x.

    Independent of the adjacency tables: cell contents come straight from
    digit arithmetic, so admissibility of these patterns is a real check of
    the generator.  Negative coordinates take their p-adic digit expansion.
    """
    span = max(abs(x0) + w, abs(y0) + h, abs(r), abs(s), p)
    depth = max(12, int(math.log(span + 1, p)) + 6)
    modulus = p ** (depth + 4)
    idx = x.alphabet.index
    cells = []
    for j in range(h):
        for i in range(w):
            alpha = (x0 + i + r) % modulus
            beta = (y0 + j + s) % modulus
            ps = _psym_at(p, alpha, beta, depth)
            nm = ps.name
            if parity:
                nm += f".P{(x0 + i + r + 1) % 2}{(y0 + j + s + 1) % 2}"
            if nm not in idx:
                raise ValueError(f"reference symbol {nm} missing from alphabet")
            cells.append(idx[nm])
    return Pattern(w, h, tuple(cells))


def cluster_pattern(x: Sft2d, p: int, n: int, *, parity: bool = False) -> Pattern:
    """The canonical level-n cluster (p^n x p^n window at offset 0)."""
    return padic_reference_pattern(x, p, p**n, p**n, parity=parity)


def padic_projection(x: Sft2d) -> dict:
    """Map symbol index -> dense class index of its base (kind, n, m) part.

    Collapses the memory and decoration components, so counts of recoded
    blocks can be compared with counts over the coarse node/arrow symbols.
    """
    classes: dict[str, int] = {}
    proj: dict[int, int] = {}
    for i, nm in enumerate(x.alphabet.names):
        parts = nm.split(".")
        base = ".".join(parts[:3])
        if base not in classes:
            classes[base] = len(classes)
        proj[i] = classes[base]
    return proj


# ---------------------------------------------------------------------------
# generic C-marking extension (labels drive a function of the parent marking)


def _parse_padic_symbols(x: Sft2d) -> tuple[int, list[_PSym]]:
    syms = []
    labels = set()
    for nm in x.alphabet.names:
        parts = nm.split(".")
        if len(parts) < 3 or parts[0] not in "BWVH":
            raise ValueError(f"symbol {nm!r} does not carry position labels")
        kind = parts[0]
        n = int(parts[1][1:])
        m = int(parts[2][1:])
        ctx = None
        if kind in "VH":
            tok = parts[3]
            ctx = (tok[1], int(tok[2:]))
        syms.append(_PSym(kind, n, m, ctx))
        labels.add(n)
        labels.add(m)
        if ctx:
            labels.add(ctx[1])
    p = max(labels) + 1
    return p, syms


def layered_extension(
    x: Sft2d,
    C: Sequence,
    A: Callable,
    *,
    p: int | None = None,
    cname: Callable = str,
) -> Sft2d:
    """Add a C-marking layer driven by A: (i, j, c_parent) -> c.

    Requires a tile set carrying position labels (the output of p_adic_xp).
    Marking discipline: a node shares its marking with the line segments it
    emits; segments carry one marking end to end; where a line is crossed by a
    higher-level line, the lower line's marking must equal A applied to its
    label pair and the upper line's marking; between consecutive nodes the
    markings must be consistent with a single parent value.
    """
    ip, syms = _parse_padic_symbols(x)
    p = p or ip
    C = list(C)
    if not C:
        raise ValueError("C must be nonempty")
    cset = set(C)
    for i in range(p):
        for j in range(p):
            for c in C:
                if A(i, j, c) not in cset:
                    raise ValueError(f"A is not total into C at ({i},{j},{c!r})")
    two = 2 % p

    def tok(c) -> str:
        t = cname(c)
        if not t or any(ch.isspace() for ch in t) or "#" in t:
            raise ValueError(f"bad C token {t!r}")
        return t

    named: dict[str, tuple] = {}
    for s in syms:
        for c in C:
            named[f"{s.name}.c{tok(c)}"] = (s, c)

    def key(s: _PSym, c) -> tuple:
        return (s, c)

    def line_mark(s: _PSym, c):
        # marking carried by the line this crossing cell interrupts
        if s.kind == "V":
            return A(0, s.ctx[1], c)
        return A(s.ctx[1], 0, c)

    def witness(i1, j1, c1, i2, j2, c2) -> bool:
        return any(A(i1, j1, c) == c1 and A(i2, j2, c) == c2 for c in C)

    hbase = {(a, b) for a, b in _pairs_of(x, syms, horizontal=True)}
    vbase = {(a, b) for a, b in _pairs_of(x, syms, horizontal=False)}

    hp: set = set()
    vp: set = set()
    for a, b in hbase:
        for ca in C:
            for cb in C:
                if _layer_ok_h(a, b, ca, cb, A, p, two, line_mark, witness):
                    hp.add((key(a, ca), key(b, cb)))
    for a, b in vbase:
        for ca in C:
            for cb in C:
                if _layer_ok_v(a, b, ca, cb, A, p, two, line_mark, witness):
                    vp.add((key(a, ca), key(b, cb)))
    meta = x.metadata + f" layered C={len(C)}"
    return _build(named, hp, vp, meta)


def _pairs_of(x: Sft2d, syms: list, horizontal: bool):
    rel = x.h_allowed if horizontal else x.v_allowed
    return [(syms[a], syms[b]) for a, b in rel]


def _layer_ok_h(a, b, ca, cb, A, p, two, line_mark, witness) -> bool:
    ka, kb = a.kind, b.kind
    if ka == "B" and kb == "B":
        if b.n == 0:  # cluster boundary: parents differ
            return True
        return witness(a.n, a.m, ca, b.n, b.m, cb)
    if ka == "B" and kb == "V":
        return ca == A(0, a.m, cb)
    if ka == "V" and kb == "B":
        return cb == A(two, b.m, ca)
    if ka == "W" and kb == "H":
        return cb == ca
    if ka == "H" and kb == "W":
        if b.n == 0:
            return True
        ne = 0 if a.n == 1 % p else a.n
        return witness(ne, a.m, ca, b.n, b.m, cb)
    if ka == "H" and kb == "H":
        return ca == cb
    if ka == "H" and kb == "V":  # crossing: incoming side of the lower line
        return ca == line_mark(b, cb)
    if ka == "V" and kb == "H":  # crossing: outgoing side
        return cb == line_mark(a, ca)
    return True


def _layer_ok_v(a, b, ca, cb, A, p, two, line_mark, witness) -> bool:
    ka, kb = a.kind, b.kind
    if ka == "B" and kb == "B":
        if b.m == 0:
            return True
        return witness(a.n, a.m, ca, b.n, b.m, cb)
    if ka == "B" and kb == "H":
        return ca == A(a.n, 0, cb)
    if ka == "H" and kb == "B":
        return cb == A(b.n, two, ca)
    if ka == "W" and kb == "V":
        return cb == ca
    if ka == "V" and kb == "W":
        if b.m == 0:
            return True
        me = 0 if a.m == 1 % p else a.m
        return witness(a.n, me, ca, b.n, b.m, cb)
    if ka == "V" and kb == "V":
        return ca == cb
    if ka == "V" and kb == "H":  # column crossed by a higher row
        return ca == line_mark(b, cb)
    if ka == "H" and kb == "V":
        return cb == line_mark(a, ca)
    return True


# ---------------------------------------------------------------------------
# traffic lights


def traffic_light_function(p: int) -> Callable:
    """The color map driving the board-marking extension.

    Specified values: F(p-1, c) = g for all c; F(0, g) = g; F(2, g) = y;
    F(2, y) = r; F(i, c) = r for i not in {0, 2, p-1}.  The pairs the rules
    leave open (F(0, y), F(0, r), F(2, r)) are totalized to r: red is inert,
    and unspecified transitions must not create free cells.
    """
    if p < 4:
        raise ValueError("p must be >= 4")

    def F(i: int, c: str) -> str:
        if i == p - 1:
            return "g"
        if i == 0:
            return "g" if c == "g" else "r"
        if i == 2:
            return {"g": "y", "y": "r", "r": "r"}[c]
        return "r"

    return F


def traffic_light_F(p: int) -> Sft2d:
    """Marking layer over p_adic_xp(p) with C = {r,g,y}^2 and componentwise
    color map; level-1 nodes marked green-green are the free board cells."""
    F = traffic_light_function(p)
    C = [a + b for a in "rgy" for b in "rgy"]

    def A(i: int, j: int, c: str) -> str:
        return F(i, c[0]) + F(j, c[1])

    out = layered_extension(p_adic_xp(p), C, A, p=p)
    return out.with_metadata(f"generator=traffic p={p}")


# ---------------------------------------------------------------------------
# blue/license marking with free head/tail bits (fractional entropy dimension)


def tsirelson_y(p: int, q: int, B_h: Sequence[int], B_v: Sequence[int]) -> Sft2d:
    """Blue-marking extension: a node may be blue only if its labels lie in
    B_h x B_v and the crossing below/left of it carries a blue parent line;
    blue nodes take a free head/tail bit.

    B_h and B_v are drawn from the even labels {0, 2, ..., p-1}, which is
    well-formed only for odd p; |B_h| + |B_v| must equal q.
    """
    if p < 3 or p % 2 == 0:
        raise ValueError("p must be odd and >= 3")
    B_h, B_v = sorted(set(B_h)), sorted(set(B_v))
    for val in list(B_h) + list(B_v):
        if val % 2 == 1 or not (0 <= val < p):
            raise ValueError(f"marking label {val} must be even and < p")
    if len(B_h) + len(B_v) != q:
        raise ValueError(f"|B_h|+|B_v| = {len(B_h) + len(B_v)} != q = {q}")
    base = p_adic_xp(p)
    meta = f"generator=tsirelson p={p} q={q} bh={','.join(map(str, B_h))} bv={','.join(map(str, B_v))}"
    if not B_h or not B_v:
        # no node can ever be blue: the extension is trivial
        return base.with_metadata(meta)
    _, syms = _parse_padic_symbols(base)
    two = 2 % p
    bh, bv = set(B_h), set(B_v)

    named: dict[str, tuple] = {}
    for s in syms:
        if s.kind == "B":
            named[s.name] = (s,)
        elif s.kind == "W":
            colors = ["w"]
            if s.n in bh and s.m in bv:
                colors += ["bh", "bt"]
            for col in colors:
                for lh in (0, 1):
                    for lv in (0, 1):
                        if col != "w":
                            if s.n != 0 and lh == 0:
                                continue
                            if s.m != 0 and lv == 0:
                                continue
                        named[f"{s.name}.{col}.h{lh}v{lv}"] = (s, col, lh, lv)
        elif s.kind == "V":
            for vb in (0, 1):
                for lv in (0, 1):
                    if s.ctx[0] == "B":
                        named[f"{s.name}.b{vb}l{lv}"] = (s, vb, lv)
                    else:
                        for rb in (0, 1):
                            if rb > vb:  # a blue head may only meet a blue line
                                continue
                            named[f"{s.name}.b{vb}l{lv}x{rb}"] = (s, vb, lv, rb)
        else:
            for hb in (0, 1):
                for lh in (0, 1):
                    if s.ctx[0] == "B":
                        named[f"{s.name}.b{hb}l{lh}"] = (s, hb, lh)
                    else:
                        for cb in (0, 1):
                            if cb > hb:
                                continue
                            named[f"{s.name}.b{hb}l{lh}x{cb}"] = (s, hb, lh, cb)

    def blue(col: str) -> int:
        return 0 if col == "w" else 1

    by_sym: dict[_PSym, list] = {}
    for k in named.values():
        by_sym.setdefault(k[0], []).append(k)
    for lst in by_sym.values():
        lst.sort()

    hp: set = set()
    vp: set = set()
    for a, b in _pairs_of(base, syms, horizontal=True):
        for kaa in by_sym[a]:
            for kbb in by_sym[b]:
                if _blue_ok(kaa, kbb, horizontal=True, blue=blue):
                    hp.add((kaa, kbb))
    for a, b in _pairs_of(base, syms, horizontal=False):
        for kaa in by_sym[a]:
            for kbb in by_sym[b]:
                if _blue_ok(kaa, kbb, horizontal=False, blue=blue):
                    vp.add((kaa, kbb))
    return _build(named, hp, vp, meta)


def _blue_ok(ka, kb, horizontal: bool, blue) -> bool:
    a, b = ka[0], kb[0]
    x, y = a.kind, b.kind
    if horizontal:
        if x == "W" and y == "H":
            _, col, lh, _ = ka
            _, hb, lh2 = kb[:3]
            return hb == blue(col) and lh2 == lh
        if x == "H" and y == "W":
            _, col, lh2, _ = kb
            lh = ka[2]
            return lh2 == lh
        if x == "H" and y == "H":
            return ka[1] == kb[1] and ka[2] == kb[2]
        if x == "H" and y == "V":  # crossing: thread the row's blue bit
            return kb[3] == ka[1]
        if x == "V" and y == "H":  # leave crossing: restore blue, hand license
            return kb[1] == ka[3] and kb[2] == ka[1]
        return True
    else:
        if x == "W" and y == "V":
            _, col, _, lv = ka
            _, vb, lv2 = kb[:3]
            return vb == blue(col) and lv2 == lv
        if x == "V" and y == "W":
            _, col, _, lv2 = kb
            lv = ka[2]
            return lv2 == lv
        if x == "V" and y == "V":
            return ka[1] == kb[1] and ka[2] == kb[2]
        if x == "V" and y == "H":  # column crossed by a higher row
            return kb[3] == ka[1]
        if x == "H" and y == "V":
            return kb[1] == ka[3] and kb[2] == ka[1]
        return True


# ---------------------------------------------------------------------------
# level-constant marking (polynomial growth boost)


def poly_growth_x(p: int, M: int) -> Sft2d:
    """Marking in Z/M that is constant on each structure level: nodes share
    their mark with every arrow pointing toward or away from them, marks ride
    through interruptions, and distinct levels are independent."""
    if M < 1:
        raise ValueError("M must be >= 1")
    base = p_adic_xp(p)
    meta = f"generator=polygrowth p={p} M={M}"
    if M == 1:
        return base.with_metadata(meta)
    _, syms = _parse_padic_symbols(base)

    named: dict[str, tuple] = {}
    for s in syms:
        if s.kind in "BW":
            for k in range(M):
                named[f"{s.name}.k{k}"] = (s, k)
        else:
            for k in range(M):
                for k2 in range(M):
                    named[f"{s.name}.k{k}q{k2}"] = (s, k, k2)

    by_sym: dict[_PSym, list] = {}
    for key in named.values():
        by_sym.setdefault(key[0], []).append(key)

    def ok(ka, kb, horizontal: bool) -> bool:
        a, b = ka[0], kb[0]
        x, y = a.kind, b.kind
        if horizontal:
            if x == "B" and y == "B":
                return ka[1] == kb[1]
            if x == "B" and y == "V":
                return kb[2] == ka[1]
            if x == "V" and y == "B":
                return kb[1] == ka[2]
            if x == "W" and y == "H":
                return kb[1] == ka[1]
            if x == "H" and y == "W":
                return kb[1] == ka[1]
            if x == "H" and y == "H":
                return ka[1] == kb[1]
            if x == "H" and y == "V":
                return kb[2] == ka[1]
            if x == "V" and y == "H":
                return kb[1] == ka[2]
        else:
            if x == "B" and y == "B":
                return ka[1] == kb[1]
            if x == "B" and y == "H":
                return kb[2] == ka[1]
            if x == "H" and y == "B":
                return kb[1] == ka[2]
            if x == "W" and y == "V":
                return kb[1] == ka[1]
            if x == "V" and y == "W":
                return kb[1] == ka[1]
            if x == "V" and y == "V":
                return ka[1] == kb[1]
            if x == "V" and y == "H":
                return kb[2] == ka[1]
            if x == "H" and y == "V":
                return kb[1] == ka[2]
        return True

    hp: set = set()
    vp: set = set()
    for a, b in _pairs_of(base, syms, horizontal=True):
        for kaa in by_sym[a]:
            for kbb in by_sym[b]:
                if ok(kaa, kbb, True):
                    hp.add((kaa, kbb))
    for a, b in _pairs_of(base, syms, horizontal=False):
        for kaa in by_sym[a]:
            for kbb in by_sym[b]:
                if ok(kaa, kbb, False):
                    vp.add((kaa, kbb))
    name_of = {k: nm for nm, k in named.items()}
    named_keys = {name_of[k]: k for k in named.values()}
    return _build(named_keys, hp, vp, meta)


# ---------------------------------------------------------------------------
# Turing machine space-time diagrams


def tm_spacetime_sft(tm: TuringMachine) -> Sft2d:
    """SFT of space-time diagrams: rows are tape configurations, one machine
    step per row (time runs upward).

    Each cell is a tape char plus head information: the head itself (with its
    state) or a direction-to-head flag.  Flags distinguish a head immediately
    adjacent (carrying its state) from one further away, which is exactly the
    locality needed to pin the arriving state after a move; rows with no head
    (the trivial diagrams) use a dedicated flag.  Halting heads have no
    successor row, so a diagram that runs into the halting state cannot be
    extended upward.
    """
    chars = tm.tape
    states = tm.states
    halt = tm.halt

    def nm(ch: str, part: tuple) -> str:
        if part[0] == "head":
            return f"{ch}.h.{part[1]}"
        if part[0] in ("la", "ra"):
            return f"{ch}.{part[0]}.{part[1]}"
        return f"{ch}.{part[0]}"

    parts = [("x",), ("lf",), ("rf",)]
    parts += [("head", s) for s in states]
    parts += [("la", s) for s in states]
    parts += [("ra", s) for s in states]
    named = {nm(ch, pt): (ch, pt) for ch in chars for pt in parts}

    hp: set = set()
    for c1 in chars:
        for c2 in chars:
            hp.add(((c1, ("x",)), (c2, ("x",))))
            hp.add(((c1, ("rf",)), (c2, ("rf",))))
            hp.add(((c1, ("lf",)), (c2, ("lf",))))
            for s in states:
                hp.add(((c1, ("rf",)), (c2, ("ra", s))))
                hp.add(((c1, ("ra", s)), (c2, ("head", s))))
                hp.add(((c1, ("head", s)), (c2, ("la", s))))
                hp.add(((c1, ("la", s)), (c2, ("lf",))))

    has_r = {s: any(d == RIGHT for (st, _), (_, _, d) in tm.delta.items() if st == s) for s in states}
    has_l = {s: any(d == LEFT for (st, _), (_, _, d) in tm.delta.items() if st == s) for s in states}
    l_targets = {s: sorted({t for (st, _), (t, _, d) in tm.delta.items() if st == s and d == LEFT}) for s in states}
    r_targets = {s: sorted({t for (st, _), (t, _, d) in tm.delta.items() if st == s and d == RIGHT}) for s in states}

    vp: set = set()
    for ch in chars:
        vp.add(((ch, ("x",)), (ch, ("x",))))
        vp.add(((ch, ("rf",)), (ch, ("rf",))))
        vp.add(((ch, ("lf",)), (ch, ("lf",))))
        for s in states:
            # a far head can step next to this cell in any state
            vp.add(((ch, ("rf",)), (ch, ("ra", s))))
            vp.add(((ch, ("lf",)), (ch, ("la", s))))
            if s == halt:
                continue
            # the head cell itself: written char and direction above are forced
            st2, ch2, d = tm.delta[(s, ch)]
            above = ("ra", st2) if d == RIGHT else ("la", st2)
            vp.add(((ch, ("head", s)), (ch2, above)))
            # cells adjacent to the head: it either arrives or moves away
            if has_r[s]:
                vp.add(((ch, ("ra", s)), (ch, ("rf",))))
            if has_l[s]:
                vp.add(((ch, ("la", s)), (ch, ("lf",))))
            for t in l_targets[s]:
                vp.add(((ch, ("ra", s)), (ch, ("head", t))))
            for t in r_targets[s]:
                vp.add(((ch, ("la", s)), (ch, ("head", t))))
    meta = f"generator=tm states={len(states)} tape={len(chars)}"
    return _build(named, hp, vp, meta)

"""Finite-stage estimators for growth-type invariants.

Everything here reports finite-stage data: block-count tables, per-row
estimators, and least-squares trend slopes.  Natural logarithms throughout.
No limit claims are made; the tables say which block sizes and ambient sizes
were actually used and whether the counts stabilized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .core import Sft2d
from .enumeration import count_blocks

__all__ = [
    "GrowthRow",
    "GrowthTable",
    "growth_table",
    "TrendReport",
    "trend_report",
    "RecurrenceRow",
    "recurrence_entdim",
    "density_bit",
    "density_prefix",
]

RECURRENCE_HARD_CAP = 64


@dataclass(frozen=True)
class GrowthRow:
    k: int
    j_used: int
    count: int
    stabilized: bool
    entropy_est: float | None  # ln N / k^2
    poly_est: float | None  # ln N / ln k
    entdim_est: float | None  # ln ln N / ln k, defined only for N >= 3, k >= 2


@dataclass(frozen=True)
class GrowthTable:
    rows: tuple[GrowthRow, ...]
    note: str = ""

    def to_csv(self) -> str:
        out = ["k,j,N,entropy_est,poly_est,entdim_est,stabilized"]
        for r in self.rows:
            out.append(
                f"{r.k},{r.j_used},{r.count},{_fmt(r.entropy_est)},"
                f"{_fmt(r.poly_est)},{_fmt(r.entdim_est)},{int(r.stabilized)}"
            )
        return "\n".join(out) + "\n"

    def to_text(self) -> str:
        head = f"{'k':>4} {'j':>4} {'N':>24} {'entropy':>12} {'poly':>12} {'entdim':>12} {'stab':>5}"
        lines = [head]
        for r in self.rows:
            ns = str(r.count) if r.count < 10**24 else f"~1e{len(str(r.count)) - 1}"
            lines.append(
                f"{r.k:>4} {r.j_used:>4} {ns:>24} {_fmt(r.entropy_est):>12}"
                f" {_fmt(r.poly_est):>12} {_fmt(r.entdim_est):>12} {str(r.stabilized):>5}"
            )
        if self.note:
            lines.append(f"note: {self.note}")
        return "\n".join(lines) + "\n"


def _fmt(v: float | None) -> str:
    return "" if v is None else f"{v:.6f}"


def _row_estimators(k: int, count: int) -> tuple[float | None, float | None, float | None]:
    if count < 1:
        return (None, None, None)
    ln = math.log(count)
    entropy = ln / (k * k)
    poly = ln / math.log(k) if k >= 2 else None
    entdim = math.log(ln) / math.log(k) if count >= 3 and k >= 2 else None
    return (entropy, poly, entdim)


def growth_table(
    x: Sft2d,
    k_list: Sequence[int],
    j_extra: int = 0,
    *,
    max_states: int | None = None,
    max_candidates: int | None = None,
) -> GrowthTable:
    """Count-and-estimate table: for each k, N_{k,j} for j = k, k+2, ..., k+j_extra.

    The reported count is the final (smallest) one; `stabilized` means the last
    two ambient sizes agreed.  Counts are of the SFT presentation as given;
    recoded presentations count recoded symbols.
    """
    if not k_list or list(k_list) != sorted(k_list):
        raise ValueError("k_list must be nonempty and ascending")
    rows = []
    for k in k_list:
        counts = []
        j_used = k
        for t in range(j_extra // 2 + 1):
            j = k + 2 * t
            counts.append(count_blocks(x, k, j, max_states=max_states,
                                       max_candidates=max_candidates).value)
            j_used = j
        stab = len(counts) >= 2 and counts[-1] == counts[-2]
        n = counts[-1]
        entropy, poly, entdim = _row_estimators(k, n)
        rows.append(GrowthRow(k, j_used, n, stab, entropy, poly, entdim))
    return GrowthTable(tuple(rows))


@dataclass(frozen=True)
class TrendReport:
    poly_slope: float  # slope of ln N vs ln k
    poly_residual: float
    entdim_slope: float  # slope of ln ln N vs ln k
    entdim_residual: float
    rows_used: int
    non_stabilized: tuple[int, ...]

    def to_text(self) -> str:
        return (
            f"poly slope (ln N vs ln k):     {self.poly_slope:.4f}  "
            f"(residual {self.poly_residual:.3g})\n"
            f"entdim slope (ln ln N vs ln k): {self.entdim_slope:.4f}  "
            f"(residual {self.entdim_residual:.3g})\n"
            f"rows used: {self.rows_used}; non-stabilized k: "
            f"{list(self.non_stabilized) or 'none'}\n"
        )


def trend_report(table: GrowthTable) -> TrendReport:
    """Least-squares read-outs of the growth exponents from a table."""
    usable = [r for r in table.rows if r.count >= 3 and r.k >= 2]
    if len(usable) < 3:
        raise ValueError("trend_report needs at least 3 rows with N >= 3 and k >= 2")
    lnk = np.array([math.log(r.k) for r in usable])
    lnN = np.array([math.log(r.count) for r in usable])
    lnlnN = np.log(lnN)
    pc, presid = _fit(lnk, lnN)
    ec, eresid = _fit(lnk, lnlnN)
    flags = tuple(r.k for r in table.rows if not r.stabilized)
    return TrendReport(pc, presid, ec, eresid, len(usable), flags)


def _fit(xs: np.ndarray, ys: np.ndarray) -> tuple[float, float]:
    coef, residuals, *_ = np.polyfit(xs, ys, 1, full=True)
    resid = float(residuals[0]) if len(residuals) else 0.0
    return float(coef[0]), resid


# ---------------------------------------------------------------------------
# doubly exponential marking recurrence


@dataclass(frozen=True)
class RecurrenceRow:
    n: int
    value: int | None  # exact integer while it fits under the bit cap
    log_value: float  # ln s_n (exact-regime values agree with math.log)
    ratio: float | None  # ln ln s_n / (n ln 2)


def recurrence_entdim(
    bits: Sequence[int],
    s1: int = 2,
    *,
    exact_bit_limit: int = 1 << 22,
) -> list[RecurrenceRow]:
    """Iterate s_{n+1} = s_n + 1 (bit 0) or 2*s_n^4 + 1 (bit 1) and report
    the marking-growth ratio ln ln s_n / (n ln 2).

    ``bits[i]`` drives the step from s_{i+1} to s_{i+2}.  The number of digits
    of s_n grows like 4^(#ones), so exact integers are kept only while they
    fit under ``exact_bit_limit`` bits; beyond that ln s_n is tracked in
    floating point (the step map is exact on logs to within 1 ulp per step).
    The index is hard-capped at 64 steps.
    """
    n_max = len(bits) + 1
    if n_max > RECURRENCE_HARD_CAP:
        raise ValueError(f"n_max {n_max} exceeds the hard cap {RECURRENCE_HARD_CAP}")
    if s1 < 1:
        raise ValueError("s1 must be >= 1")
    rows: list[RecurrenceRow] = []
    s: int | None = s1
    logs = math.log(s1)
    for n in range(1, n_max + 1):
        ratio = math.log(logs) / (n * math.log(2)) if logs > 1.0 else None
        rows.append(RecurrenceRow(n, s, logs, ratio))
        if n == n_max:
            break
        b = bits[n - 1]
        if b not in (0, 1):
            raise ValueError(f"bit at index {n - 1} is {b!r}, want 0/1")
        if s is not None:
            s = s + 1 if b == 0 else 2 * s**4 + 1
            if s.bit_length() > exact_bit_limit:
                logs = _log_of_big(s)
                s = None
            else:
                logs = math.log(s)
        else:
            if b == 0:
                logs = logs + math.exp(-min(logs, 700.0))
            else:
                logs = 4.0 * logs + math.log(2.0)
    return rows


def _log_of_big(v: int) -> float:
    bl = v.bit_length()
    top = v >> max(0, bl - 64)
    return math.log(top) + max(0, bl - 64) * math.log(2)


# ---------------------------------------------------------------------------
# density sequences (inputs for the recurrence and the encoder)


def _as_fraction(a) -> Fraction:
    if isinstance(a, float):
        raise ValueError("irrational/float densities unsupported; pass a rational")
    if isinstance(a, str):
        return Fraction(a)
    return Fraction(a)


def _beatty(n: int, alpha: Fraction) -> int:
    return math.floor((n + 1) * alpha) - math.floor(n * alpha)


def density_bit(kind: str, n: int, alpha, alpha2=None) -> int:
    """Bit n (n >= 0) of a density-controlled 0/1 sequence.

    kinds: ``constant`` (alpha must be 0 or 1), ``beatty`` (indicator of
    density alpha via floor((n+1)a) - floor(na)), ``two-density`` (block m
    holds indices (2^((m-1)^2), 2^(m^2)]; odd blocks emit beatty bits of
    density alpha, even blocks density alpha2, so prefix densities oscillate
    between the two).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    a = _as_fraction(alpha)
    if not 0 <= a <= 1:
        raise ValueError("density must be in [0,1]")
    if kind == "constant":
        if a not in (0, 1):
            raise ValueError("constant sequence needs alpha in {0,1}")
        return int(a)
    if kind == "beatty":
        return _beatty(n, a)
    if kind == "two-density":
        if alpha2 is None:
            raise ValueError("two-density needs alpha2")
        a2 = _as_fraction(alpha2)
        if not a <= a2 <= 1:
            raise ValueError("need alpha <= alpha2 <= 1")
        m = 1
        while n > 2 ** (m * m):
            m += 1
        lo = 2 ** ((m - 1) * (m - 1)) if m > 1 else 0
        local = n - lo
        return _beatty(local, a if m % 2 == 1 else a2)
    raise ValueError(f"unknown kind {kind!r}")


def density_prefix(kind: str, count: int, alpha, alpha2=None) -> list[int]:
    return [density_bit(kind, n, alpha, alpha2) for n in range(count)]

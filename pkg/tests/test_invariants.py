import math
from fractions import Fraction

import pytest

from sft2d.core import full_shift, hard_square, higher_block
from sft2d.invariants import (
    density_bit,
    density_prefix,
    growth_table,
    recurrence_entdim,
    trend_report,
)

from conftest import random_sft


def test_growth_table_full_shift_exact():
    t = growth_table(full_shift(2), [2, 3, 4])
    for row in t.rows:
        assert row.count == 2 ** (row.k**2)
        assert abs(row.entropy_est - math.log(2)) < 1e-12
    r4 = t.rows[-1]
    assert abs(r4.entdim_est - math.log(16 * math.log(2)) / math.log(4)) < 1e-9


def test_growth_table_stabilized_flag():
    t = growth_table(full_shift(2), [2], j_extra=4)
    assert t.rows[0].stabilized
    assert t.rows[0].j_used == 6


def test_growth_table_degenerate_rows():
    t = growth_table(full_shift(1), [2, 3])
    for row in t.rows:
        assert row.count == 1
        assert row.entdim_est is None
        assert row.poly_est == 0.0


def test_entdim_upper_bound_rowwise(rng):
    # ln ln N <= ln(k^2 ln|S|): entdim_est <= 2 + ln ln|S| / ln k
    for _ in range(10):
        x = random_sft(rng)
        if x.alphabet.size < 2:
            continue
        t = growth_table(x, [2, 3])
        for row in t.rows:
            if row.entdim_est is None:
                continue
            eps = math.log(max(math.log(x.alphabet.size), 1e-9)) / math.log(row.k)
            assert row.entdim_est <= 2 + eps + 1e-12


def test_trend_report_full_shift():
    t = growth_table(full_shift(2), [2, 3, 4, 5, 6])
    rep = trend_report(t)
    assert abs(rep.entdim_slope - 2.0) < 0.15
    assert abs(rep.poly_slope - (2 * 6 * math.log(2) / math.log(6) - 0) ) > 0  # slope is defined


def test_trend_report_needs_three_rows():
    t = growth_table(full_shift(2), [2, 3])
    with pytest.raises(ValueError):
        trend_report(t)


def test_trend_slopes_stable_under_recoding(rng):
    # the exact identity N_k(higher_block(x,2)) = N_{k+1}(x), row by row
    from sft2d.enumeration import count_rect

    for _ in range(6):
        x = random_sft(rng, max_symbols=3)
        hb = higher_block(x, 2)
        for k in (1, 2, 3):
            assert count_rect(hb, k, k) == count_rect(x, k + 1, k + 1)


def test_hard_square_entropy_decreasing():
    hs = hard_square()
    t = growth_table(hs, [1, 2, 3, 4, 5, 6])
    ests = [r.entropy_est for r in t.rows]
    assert all(a > b for a, b in zip(ests, ests[1:]))
    # bounded below by the known growth constant (external reference value)
    assert ests[-1] > 0.5831


def test_table_formats():
    t = growth_table(hard_square(), [2, 3])
    csv = t.to_csv()
    assert csv.splitlines()[0] == "k,j,N,entropy_est,poly_est,entdim_est,stabilized"
    assert "7" in csv and "63" in csv
    assert "63" in t.to_text()


# ---------------------------------------------------------------------------
# recurrence


def test_recurrence_all_ones_exact_prefix():
    rows = recurrence_entdim([1] * 5)
    vals = [r.value for r in rows]
    assert vals[0] == 2
    assert vals[1] == 2 * 2**4 + 1 == 33
    assert vals[2] == 2 * 33**4 + 1
    for a, b in zip(rows, rows[1:]):
        assert a.value**4 <= b.value <= 2 * a.value**4 + 1


def test_recurrence_all_ones_exact_inequalities_regime():
    rows = recurrence_entdim([1] * 10)
    for a, b in zip(rows, rows[1:]):
        assert a.value is not None and b.value is not None
        assert b.value == 2 * a.value**4 + 1


def test_recurrence_all_zeros_closed_form():
    rows = recurrence_entdim([0] * 30, s1=2)
    for r in rows:
        assert r.value == 2 + r.n - 1
    assert rows[-1].ratio < 0.12


def test_recurrence_all_ones_ratio_at_40():
    rows = recurrence_entdim([1] * 39)
    ratio = rows[-1].ratio
    assert rows[-1].n == 40
    assert 1.9 <= ratio <= 2.0


def test_recurrence_alternating_ratio_at_60():
    bits = [(n % 2) for n in range(1, 60)]  # a_1 = 1, a_2 = 0, ...
    rows = recurrence_entdim(bits)
    assert rows[-1].n == 60
    assert 0.85 <= rows[-1].ratio <= 1.15


def test_recurrence_hard_cap():
    with pytest.raises(ValueError):
        recurrence_entdim([1] * 70)


def test_recurrence_log_tracking_matches_exact():
    # with a tiny exact cap, the float log track must agree with exact logs
    exact = recurrence_entdim([1] * 8, exact_bit_limit=1 << 30)
    approx = recurrence_entdim([1] * 8, exact_bit_limit=64)
    for a, b in zip(exact, approx):
        assert abs(a.log_value - b.log_value) / max(a.log_value, 1) < 1e-9


# ---------------------------------------------------------------------------
# density sequences


def test_beatty_half_alternates():
    assert density_prefix("beatty", 8, Fraction(1, 2)) == [0, 1, 0, 1, 0, 1, 0, 1]


def test_beatty_one_all_ones():
    assert density_prefix("beatty", 6, 1) == [1] * 6


def test_beatty_third_first_nine():
    bits = density_prefix("beatty", 9, Fraction(1, 3))
    assert sum(bits) == 3


def test_beatty_density_bound_exact():
    for alpha in (Fraction(1, 3), Fraction(2, 5), Fraction(7, 9)):
        total = 0
        for n in range(1000):
            total += density_bit("beatty", n, alpha)
            assert abs(total - (n + 1) * alpha) <= 1


def test_constant_requires_bit():
    assert density_bit("constant", 5, 1) == 1
    with pytest.raises(ValueError):
        density_bit("constant", 5, Fraction(1, 2))


def test_two_density_blocks():
    a1, a2 = Fraction(0), Fraction(1)
    # block 1 covers n <= 2 (odd -> density a1 = 0), block 2 covers 3..16 (a2 = 1)
    assert density_bit("two-density", 1, a1, a2) == 0
    assert density_bit("two-density", 5, a1, a2) == 1
    assert density_bit("two-density", 16, a1, a2) == 1
    # block 3 (17..512) back to density 0
    assert density_bit("two-density", 100, a1, a2) == 0


def test_density_rejects_floats():
    with pytest.raises(ValueError):
        density_bit("beatty", 3, 0.5)

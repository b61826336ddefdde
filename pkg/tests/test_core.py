import random

import pytest

from sft2d.core import (
    Alphabet,
    LatticeBasis,
    Pattern,
    Sft2d,
    full_shift,
    hard_square,
    higher_block,
    is_locally_admissible,
    product,
    restrict,
)
from sft2d.enumeration import count_rect

from conftest import random_sft


def test_alphabet_rejects_duplicates_and_bad_names():
    with pytest.raises(ValueError):
        Alphabet(("a", "a"))
    with pytest.raises(ValueError):
        Alphabet(("a b",))
    with pytest.raises(ValueError):
        Alphabet(("[x",))


def test_relations_validate_indices():
    with pytest.raises(ValueError):
        Sft2d(Alphabet(("a",)), frozenset({(0, 1)}), frozenset())


def test_pattern_layout_bottom_left_origin():
    p = Pattern.from_rows_top_down([[1, 2], [3, 4]])
    assert p.get(0, 0) == 3 and p.get(1, 0) == 4
    assert p.get(0, 1) == 1 and p.get(1, 1) == 2
    assert p.row(0) == (3, 4)


def test_admissibility_full_shift_trivial():
    fs = full_shift(2)
    p = Pattern(3, 3, tuple([0, 1] * 4 + [0]))
    assert is_locally_admissible(fs, p)


def test_admissibility_hard_square():
    hs = hard_square()
    assert not is_locally_admissible(hs, Pattern(2, 1, (1, 1)))
    # 2x2 with 1s on one diagonal: all four adjacencies are 0-1 or 1-0
    diag = Pattern(2, 2, (1, 0, 0, 1))
    assert is_locally_admissible(hs, diag)


def test_admissibility_rejects_out_of_range():
    with pytest.raises(ValueError):
        is_locally_admissible(hard_square(), Pattern(1, 1, (7,)))


def test_subpattern_monotone(rng):
    # any sub-rectangle of a locally admissible pattern is locally admissible
    for _ in range(30):
        x = random_sft(rng)
        w, h = rng.randint(2, 4), rng.randint(2, 4)
        cells = tuple(rng.randrange(x.alphabet.size) for _ in range(w * h))
        p = Pattern(w, h, cells)
        if not is_locally_admissible(x, p):
            continue
        i0, j0 = rng.randrange(w), rng.randrange(h)
        sw, sh = rng.randint(1, w - i0), rng.randint(1, h - j0)
        assert is_locally_admissible(x, p.subpattern(i0, j0, sw, sh))


def test_higher_block_full_shift():
    hb = higher_block(full_shift(2), 2)
    assert hb.alphabet.size == 16


def test_higher_block_hard_square():
    hb = higher_block(hard_square(), 2)
    assert hb.alphabet.size == 7  # independent sets of the 2x2 grid graph


def test_higher_block_identity_at_m1():
    hs = hard_square()
    assert higher_block(hs, 1) is hs


def test_higher_block_margin_identity(rng):
    for _ in range(10):
        x = random_sft(rng, max_symbols=3)
        hb = higher_block(x, 2)
        for k in (1, 2, 3):
            assert count_rect(hb, k, k) == count_rect(x, k + 1, k + 1)


def test_higher_block_empty_is_flagged():
    # no admissible 2x2 at all: one symbol that cannot sit above itself
    x = Sft2d(Alphabet(("a",)), frozenset({(0, 0)}), frozenset())
    hb = higher_block(x, 2)
    assert hb.is_empty
    assert count_rect(hb, 1, 1) == 0


def test_product_full_shifts():
    z = product(full_shift(2), full_shift(3))
    assert z.alphabet.size == 6
    assert count_rect(z, 2, 2) == 6**4


def test_product_identity_element():
    hs = hard_square()
    z = product(hs, full_shift(1))
    for k in (1, 2, 3):
        assert count_rect(z, k, k) == count_rect(hs, k, k)


def test_product_multiplicativity():
    hs = hard_square()
    z = product(hs, hs)
    assert count_rect(z, 2, 2) == 49
    for w, h in ((1, 3), (3, 2)):
        assert count_rect(z, w, h) == count_rect(hs, w, h) ** 2


def test_restrict_builds_hard_square():
    fs = full_shift(2, prefix="")
    x = restrict(fs, forbid_h=[(1, 1)], forbid_v=[(1, 1)])
    assert x.same_rules(
        Sft2d(Alphabet(("0", "1")), hard_square().h_allowed, hard_square().v_allowed)
    )


def test_restrict_to_empty_is_flagged():
    x = restrict(full_shift(2), keep=lambda i, nm: False)
    assert x.is_empty
    assert count_rect(x, 1, 1) == 0


def test_lattice_hnf_roundtrip():
    rng = random.Random(3)
    for _ in range(50):
        u = (rng.randint(-4, 4), rng.randint(-4, 4))
        v = (rng.randint(-4, 4), rng.randint(-4, 4))
        if u[0] * v[1] - u[1] * v[0] == 0:
            continue
        lat = LatticeBasis(u, v)
        w, twist, h = lat.hnf()  # internal asserts verify lattice equality
        assert w > 0 and h > 0 and 0 <= twist < w
        assert w * h == lat.index


def test_lattice_rejects_singular():
    with pytest.raises(ValueError):
        LatticeBasis((2, 4), (1, 2))

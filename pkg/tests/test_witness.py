import math

import pytest

from idemnorm import (
    analyze_cosets,
    bs_norm,
    find_witness,
    make_abelian_group,
    make_witness,
    subset_mask,
    sup_norm_check,
    witness_integral,
    witness_norm_bound,
)


def test_find_witness_absent_for_cosets(z6, z8):
    for g in (z6, z8):
        for mask in range(1, 1 << g.order):
            if analyze_cosets(g, mask).kind == "coset":
                assert find_witness(g, mask) is None


def test_find_witness_absent_for_small_q_unions(z4, z6, z8):
    # q = 4: {0,1} in Z4 and {0,2} in Z8 ; q = 3: {0,2} in Z6
    assert find_witness(z4, subset_mask(z4, [0, 1])) is None
    assert find_witness(z8, subset_mask(z8, [0, 2])) is None
    assert find_witness(z6, subset_mask(z6, [0, 2])) is None


def test_find_witness_frozen_outputs(z6, z8):
    w = find_witness(z6, subset_mask(z6, [0, 1, 3]))
    assert (w.u, w.v, w.w) == (0, 1, 3)
    w8 = find_witness(z8, subset_mask(z8, [0, 1, 2, 4]))
    assert (w8.u, w8.v, w8.w) == (0, 1, 2)


def test_make_witness_validates(z6, z8):
    mask6 = subset_mask(z6, [0, 1, 3])
    make_witness(z6, mask6, 0, 3, 1)  # a valid triple
    with pytest.raises(ValueError):
        make_witness(z6, mask6, 0, 0, 1)
    mask8 = subset_mask(z8, [0, 1, 2, 4])
    make_witness(z8, mask8, 1, 4, 1)


def test_witness_integral_values(z6, z8):
    mask6 = subset_mask(z6, [0, 1, 3])
    # u - w = -1 = 5 lies outside S, so the integral is plainly 6
    t = make_witness(z6, mask6, 0, 3, 1)
    assert witness_integral(z6, mask6, t) == pytest.approx(6.0, abs=1e-12)
    # u - w = 0 lies inside S, which adds the extra 1/2
    mask8 = subset_mask(z8, [0, 1, 2, 4])
    t8 = make_witness(z8, mask8, 1, 4, 1)
    assert witness_integral(z8, mask8, t8) == pytest.approx(6.5, abs=1e-12)


def test_witness_integral_is_6_or_13_2_everywhere(z6, z8):
    for g in (z6, z8):
        for mask in range(1, 1 << g.order):
            w = find_witness(g, mask)
            if w is None:
                continue
            value = witness_integral(g, mask, w)
            assert min(abs(value - 6.0), abs(value - 6.5)) <= 1e-10


def test_witness_bound_values(z6, z8):
    mask6 = subset_mask(z6, [0, 1, 3])
    t = make_witness(z6, mask6, 0, 3, 1)
    assert witness_norm_bound(z6, mask6, t) == pytest.approx(4 / 3, abs=1e-12)
    mask8 = subset_mask(z8, [0, 1, 2, 4])
    t8 = make_witness(z8, mask8, 1, 4, 1)
    assert witness_norm_bound(z8, mask8, t8) == pytest.approx(13 / 9, abs=1e-12)


def test_witness_bound_is_sound(z6, z8):
    z7 = make_abelian_group([7])
    for g in (z6, z7, z8):
        for mask in range(1, 1 << g.order):
            w = find_witness(g, mask)
            if w is None:
                continue
            bound = witness_norm_bound(g, mask, w)
            assert bound >= 4 / 3 - 1e-12
            assert bs_norm(g, mask) >= bound - 1e-9


def test_witness_bound_rejects_invalid_triple(z6):
    mask = subset_mask(z6, [0, 1, 3])
    from idemnorm import WitnessTriple

    with pytest.raises(ValueError):
        witness_integral(z6, mask, WitnessTriple(u=0, v=0, w=0))


def test_sup_norm_check_small_grid():
    result = sup_norm_check(1000)
    assert result.max_f == pytest.approx(4.5, abs=1e-12)
    assert result.max_identity_error <= 1e-12


def test_sup_norm_pointwise_values():
    # theta = 0: |2 + 2 + 1/2| + |2 - 1 - 1| = 4.5 + 0
    # theta = pi: |2 - 2 - 1/2| + |2 + 1 + 1| = 0.5 + 4
    for theta, first, second in ((0.0, 4.5, 0.0), (math.pi, 0.5, 4.0)):
        z = complex(math.cos(theta), math.sin(theta))
        a = abs(2 + 2 * z + 0.5 * z.conjugate())
        b = abs(2 - z - z.conjugate())
        assert a == pytest.approx(first, abs=1e-12)
        assert b == pytest.approx(second, abs=1e-12)
        assert a + b == pytest.approx(4.5, abs=1e-12)


def test_sup_norm_check_rejects_tiny_grid():
    with pytest.raises(ValueError):
        sup_norm_check(2)


def test_find_witness_rejects_cayley(s3):
    with pytest.raises(ValueError):
        find_witness(s3, 0b111)

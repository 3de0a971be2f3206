import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bjpreserve import bj
from bjpreserve.core import (
    AlgebraElement,
    ShapeMismatch,
    as_shape,
    op_norm,
    perp_unit,
    random_element,
    random_unitary,
    rank_one,
)

from conftest import SHAPES, seeds

E1, E2 = np.eye(2)


def diag_el(*d):
    return AlgebraElement((len(d),), [np.diag(d)])


def grid_min(a, b, ticks):
    """Brute-force min over c with entries on a complex lattice (M_2 only)."""
    best = np.inf
    vals = [x + 1j * y for x in ticks for y in ticks]
    A, B = a.blocks[0], b.blocks[0]
    for c in itertools.product(vals, repeat=2):
        # only the second row of B c is nonzero for b = diag(0, 1)
        C = np.array([[0, 0], list(c)])
        best = min(best, np.linalg.norm(A + B @ C, 2))
    return best


def test_dist_diag_pair_against_grid():
    a, b = diag_el(1, 0), diag_el(0, 1)
    g = grid_min(a, b, np.linspace(-1, 1, 7))
    assert g == pytest.approx(1, abs=1e-15)
    assert bj.dist_to_right_ideal(a, b) == pytest.approx(1, abs=1e-15)


def test_dist_invertible_b_is_zero():
    a = random_element((2, 3), 1)
    b = random_element((2, 3), 2)
    assert bj.dist_to_right_ideal(a, b) == 0


def test_dist_zero_b_is_norm():
    a = random_element((2, 3), 1)
    assert bj.dist_to_right_ideal(a, AlgebraElement.zeros((2, 3))) == pytest.approx(op_norm(a), rel=1e-14)


def test_dist_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        bj.dist_to_right_ideal(AlgebraElement.zeros((2,)), AlgebraElement.zeros((1, 1)))


def test_strong_bj_examples():
    a = rank_one((2,), 0, E1, E1)
    b = rank_one((2,), 0, E2, E2)
    assert bj.strong_bj(a, b)
    c = random_element((3,), 3)
    assert not bj.strong_bj(c, c)
    assert not bj.strong_bj(c, random_unitary((3,), 1))
    assert bj.strong_bj(AlgebraElement.zeros((3,)), c)
    assert bj.strong_bj(c, AlgebraElement.zeros((3,)))


def test_witness_examples():
    w = bj.strong_bj_witness(diag_el(1, 0), rank_one((2,), 0, E2, E2))
    assert w is not None and w.block == 0
    assert abs(abs(w.x[0]) - 1) < 1e-15 and w.kernel_residual == 0
    I = AlgebraElement.identity((3,))
    assert bj.strong_bj_witness(I, I) is None
    with pytest.raises(ValueError, match="zero"):
        bj.strong_bj_witness(AlgebraElement.zeros((3,)), I)


@pytest.mark.parametrize("shape", [(2,), (3,), (2, 3), (1, 1, 1), (2, 2)])
def test_witness_for_generated_pairs(shape):
    for seed in range(30):
        a, b = bj.gen_mutual_pair(shape, seed)
        for x, y in ((a, b), (b, a)):
            if op_norm(x) == 0:
                continue
            w = bj.strong_bj_witness(x, y)
            assert w is not None
            na, nb = op_norm(x), op_norm(y)
            assert w.norm_residual <= 1e-8 * na
            assert w.kernel_residual <= 1e-8 * na * max(nb, 1e-300)


def test_gen_mutual_pair_trivial_case():
    # D1 = diag(1, 0), D2 = diag(0, 1), U = V = I
    a, b = diag_el(1, 0), diag_el(0, 1)
    assert bj.mutual_strong_bj(a, b)


def test_gen_mutual_pair_seed42():
    a, b = bj.gen_mutual_pair((2, 3), 42)
    assert bj.mutual_strong_bj(a, b) and bj.mutual_by_witness(a, b)
    assert bj.gen_mutual_pair((2, 3), 42)[0] == a


def test_zero_is_mutual_with_anything():
    x = random_element((2, 3), 9)
    assert bj.mutual_strong_bj(x, AlgebraElement.zeros((2, 3)))


CHAR_GRID = [0, 1, -1, 1j, -1j, 1 + 1j]


def test_c_plus_c_characterization():
    for l1, m1, l2, m2 in itertools.product(CHAR_GRID, repeat=4):
        a = AlgebraElement.from_scalars([l1, m1])
        b = AlgebraElement.from_scalars([l2, m2])
        if op_norm(a) == 0 or op_norm(b) == 0:
            continue
        expected = (l1 == 0 and m2 == 0) or (m1 == 0 and l2 == 0)
        assert bj.mutual_strong_bj(a, b) == expected, (l1, m1, l2, m2)
        assert bj.mutual_by_witness(a, b) == expected


@given(st.sampled_from([(2,), (3,), (4,), (2, 3)]), seeds)
def test_rank_one_mutual_iff_adjoint_product_vanishes(shape, seed):
    a, b = bj.gen_rank_one_pair(shape, seed)
    assert bj.mutual_strong_bj(a, b)
    assert op_norm(a.adjoint() @ b) < 1e-12 * op_norm(a) * op_norm(b)
    # generic rank-one partner: product nonzero and not orthogonal
    rng = np.random.default_rng(seed)
    i = next(i for i, blk in enumerate(a.blocks) if np.abs(blk).max() > 0)
    n = as_shape(shape).dims[i]
    c = rank_one(shape, i, rng.standard_normal(n) + 1j * rng.standard_normal(n), rng.standard_normal(n))
    assert op_norm(a.adjoint() @ c) > 1e-6
    assert not bj.mutual_strong_bj(a, c)


@given(st.integers(2, 4), seeds)
def test_sum_difference_rank_ones_are_mutual(n, seed):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    y = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    xp = perp_unit(x) * np.linalg.norm(x)
    a = rank_one((n,), 0, x + xp, y)
    b = rank_one((n,), 0, x - xp, y)
    assert bj.mutual_strong_bj(a, b)
    assert bj.mutual_by_witness(a, b)


@pytest.mark.parametrize("shape", SHAPES)
def test_oracle_equivalence_small(shape):
    """Both deciders agree on a mix of generic and orthogonal pairs."""
    gens = [lambda s: (random_element(shape, s), random_element(shape, s + 7919))]
    gens.append(lambda s: bj.gen_mutual_pair(shape, s))
    if as_shape(shape).N >= 2:
        gens.append(lambda s: bj.gen_peaked_pair(shape, s))
    for s in range(150):
        a, b = gens[s % len(gens)](s)
        for x, y in ((a, b), (b, a)):
            if op_norm(x) == 0:
                continue
            assert bj.strong_bj(x, y) == (bj.strong_bj_witness(x, y) is not None)


@given(st.sampled_from(SHAPES), seeds, st.complex_numbers(min_magnitude=1e-2, max_magnitude=1e2),
       st.complex_numbers(min_magnitude=1e-2, max_magnitude=1e2))
def test_homogeneity(shape, seed, lam, mu):
    for a, b in (bj.gen_mutual_pair(shape, seed), (random_element(shape, seed), random_element(shape, seed + 1))):
        assert bj.strong_bj(a, b) == bj.strong_bj(lam * a, mu * b)


@given(st.sampled_from(SHAPES), seeds)
def test_unitary_invariance(shape, seed):
    u, v = random_unitary(shape, seed), random_unitary(shape, seed + 1)
    for a, b in (bj.gen_mutual_pair(shape, seed), (random_element(shape, seed), random_element(shape, seed + 1))):
        assert bj.strong_bj(a, b) == bj.strong_bj(u @ a @ v, u @ b @ v)


@given(st.sampled_from(SHAPES), seeds)
def test_dist_bounded_by_norm(shape, seed):
    a, b = random_element(shape, seed), random_element(shape, seed + 1)
    b = AlgebraElement(shape, [B * (i % 2) for i, B in enumerate(b.blocks)])
    assert bj.dist_to_right_ideal(a, b) <= op_norm(a) * (1 + 1e-12)


@pytest.mark.parametrize("shape", [(2,), (3,), (1, 2), (2, 3)])
def test_dist_is_lower_bound_over_random_c(shape):
    for s in range(3):
        a, _ = bj.gen_peaked_pair(shape, s)
        b = random_element(shape, s)
        # rank-deficient b makes the bound nontrivial
        bs = []
        for B in b.blocks:
            U, sv, Vh = np.linalg.svd(B)
            sv[-1] = 0
            bs.append((U * sv) @ Vh)
        b = AlgebraElement(shape, bs)
        d = bj.dist_to_right_ideal(a, b)
        for t in range(1000):
            c = random_element(shape, 10_000 * s + t) * (0.3 ** (t % 5))
            assert d <= op_norm(a + b @ c) * (1 + 1e-12)
        # the minimiser -B^+ A attains it
        c = AlgebraElement(shape, [-np.linalg.pinv(B, rcond=1e-9) @ A for A, B in zip(a.blocks, b.blocks)])
        assert op_norm(a + b @ c) == pytest.approx(d, rel=1e-9)


def test_bj_numeric_upper_bound():
    a, b = diag_el(1, 0), diag_el(0, 1)
    val, lam = bj.bj_numeric(a, b)
    assert val == pytest.approx(1, abs=1e-9)
    a = AlgebraElement((2,), [np.eye(2)])
    val, lam = bj.bj_numeric(a, a)
    assert val < 1e-6 and abs(lam + 1) < 1e-4

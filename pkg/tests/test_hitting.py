"""Hitting-set families: sizes, spans, the exponent schedule, PIT, simulation."""

import itertools
import random

import pytest

from tensorhit import linalg
from tensorhit.errors import FieldTooSmall, NoNullspace, NotRank1, OrderTooSmall
from tensorhit.field import make_extension, make_prime_field
from tensorhit.hitting import (
    L,
    combine_simulated_syndromes,
    first_witness,
    generate_family,
    hard_tensor,
    hitting_set_B,
    hitting_set_B_prime,
    hitting_set_D,
    hitting_set_D_prime,
    hitting_set_tensor,
    naive_set,
    pit_test,
    rank_preserver,
    simulate_improper,
    simulate_proper,
)
from tensorhit.tensor import DenseTensor, matrix_rank

GF7 = make_prime_field(7)
GF13 = make_prime_field(13)


def _rand_low_rank(ctx, rng, dims, r):
    out = DenseTensor.zeros(ctx, dims)
    for _ in range(r):
        vecs = [[ctx.from_index(rng.randrange(ctx.size)) for _ in range(n)] for n in dims]
        term = [ctx.one]
        for v in vecs:
            term = [ctx.mul(e, c) for e in term for c in v]
        out.entries = [ctx.add(a, b) for a, b in zip(out.entries, term)]
    return out


# -- rank preserver ----------------------------------------------------------


def test_rank_preserver_alpha_zero():
    a = rank_preserver(GF7, 3, 2, 3, 0)
    assert a.rows() == [[1, 0, 0], [1, 0, 0]]


def test_rank_preserver_single_row():
    a = rank_preserver(GF7, 3, 1, 4, 2)
    assert a.rows() == [[1, 2, 4, 1]]


def test_rank_preserver_direct_formula():
    a = rank_preserver(GF7, 3, 2, 2, 2)
    assert a.rows() == [[1, 2], [1, 6]]


def test_rank_preserver_order_too_small():
    with pytest.raises(OrderTooSmall):
        rank_preserver(GF7, 1, 2, 3, 2)  # 1 has order 1 < 3


def test_rank_preserver_bad_alpha_count():
    # exhaustive sweep: number of rank-dropping alphas <= nr - r(r+1)/2
    ctx = make_prime_field(17)
    g = ctx.element_of_order(8)
    rng = random.Random(0)
    for _ in range(20):
        n, r = 5, 2
        while True:
            m_cols = [[rng.randrange(17) for _ in range(r)] for _ in range(n)]
            if linalg.rank(ctx, m_cols) == r:
                break
        bad = 0
        for alpha in range(17):
            a = rank_preserver(ctx, g, r, n, alpha)
            prod = [
                [
                    sum(a.rows()[i][t] * m_cols[t][j] for t in range(n)) % 17
                    for j in range(r)
                ]
                for i in range(r)
            ]
            if linalg.rank(ctx, prod) < r:
                bad += 1
        assert bad <= n * r - r * (r + 1) // 2


# -- family sizes and contents ----------------------------------------------


def test_B_sizes():
    gf5 = make_prime_field(5)
    assert len(hitting_set_B(gf5, 1, 2, 2)) == 3
    assert len(hitting_set_B(GF7, 2, 3, 3)) == 10


def test_B_measurements_are_rank_one():
    fam = hitting_set_B(GF13, 2, 3, 4)
    for m in fam.measurements:
        assert matrix_rank(m.to_dense(GF13, fam.dims)) == 1


def test_D_sizes_and_indicator():
    fam = hitting_set_D(GF7, 2, 3, 3)
    assert len(fam) == 10
    dp = hitting_set_D_prime(GF7, 2, 3, 3)
    assert len(dp) == 8
    # D_{k,0} is the 0/1 indicator of the k-diagonal
    for m in fam.measurements:
        if m.ls == (0,):
            dense = m.to_dense(GF7, (3, 3))
            for i in range(3):
                for j in range(3):
                    assert dense[i, j] == (1 if i + j == m.k else 0)


def test_D_measurements_are_n_sparse():
    fam = hitting_set_D(GF13, 3, 4, 6)
    for m in fam.measurements:
        dense = m.to_dense(GF13, (4, 6))
        assert sum(1 for e in dense.entries if e) <= 4


def test_span_equality_D_B_stacked_rank():
    b = hitting_set_B(GF7, 2, 3, 3)
    d = hitting_set_D(GF7, 2, 3, 3)
    rb, rd = b.dense_rows(), d.dense_rows()
    assert (
        linalg.rank(GF7, rb)
        == linalg.rank(GF7, rd)
        == linalg.rank(GF7, rb + rd)
        == 8
    )


def test_B_prime_size_and_independence():
    bp = hitting_set_B_prime(GF7, 2, 3, 3)
    assert len(bp) == 8
    assert linalg.rank(GF7, bp.dense_rows()) == 8


def test_B_prime_equals_B_at_r1():
    b = hitting_set_B(GF13, 1, 3, 4)
    bp = hitting_set_B_prime(GF13, 1, 3, 4)
    assert [m.factors for m in b.measurements] == [m.factors for m in bp.measurements]


def test_D_prime_independent_on_grid():
    for n in range(1, 6):
        for m in range(n, 6):
            for r in range(1, n + 1):
                dp = hitting_set_D_prime(GF13, r, n, m)
                assert len(dp) == (n + m - r) * r
                assert linalg.rank(GF13, dp.dense_rows()) == (n + m - r) * r


def test_field_too_small_signals():
    gf2 = make_prime_field(2)
    with pytest.raises(FieldTooSmall):
        hitting_set_B(gf2, 1, 3, 3)
    with pytest.raises(FieldTooSmall):
        hitting_set_D(gf2, 1, 3, 3)  # no element of order >= 3


# -- the exponent schedule ----------------------------------------------------


def test_L_examples():
    assert L(2, 2, 0, (1, 1)) == 0
    assert L(2, 2, 3, (1, 1)) == 8 + 1
    with pytest.raises(ValueError):
        L(2, 2, 4, (1, 1))


def test_L_recursion_property():
    rng = random.Random(1)
    for _ in range(100):
        d = rng.randint(1, 4)
        n = rng.randint(1, 5)
        b = rng.randint(0, 4)
        k = rng.randrange(1 << d)
        idx = tuple(rng.randint(0, 6) for _ in range(d))
        if k == 0:
            assert L(n, b, k, idx) == 0
        elif k % 2 == 1:
            assert L(n, b, k, idx) == idx[0] * (n << b) ** (k // 2) + L(
                n, b, k // 2, idx[1:]
            )
        else:
            assert L(n, b, k, idx) == L(n, b, k // 2, idx[1:])


def test_L_doubling_invariance():
    rng = random.Random(2)
    for _ in range(100):
        d = rng.randint(1, 4)
        n = rng.randint(1, 5)
        b = rng.randint(1, 4)
        k = rng.randrange(1 << d)
        idx = tuple(rng.randint(0, 6) for _ in range(d))
        assert L(2 * n, b - 1, k, idx) == L(n, b, k, idx)


def test_L_upper_bound():
    rng = random.Random(3)
    for _ in range(100):
        d = rng.randint(1, 4)
        n = rng.randint(1, 4)
        b = rng.randint(0, 3)
        k = rng.randrange(1, 1 << d)
        idx = tuple(rng.randint(0, 5) for _ in range(d))
        assert L(n, b, k, idx) <= (n << b) ** (k // 2) * sum(idx)


# -- tensor family -------------------------------------------------------------


def test_tensor_family_d2_coincides_with_B():
    ctx = make_prime_field(67)  # order >= (2*2*2)^2 = 64
    tb = hitting_set_tensor(ctx, 2, 2, 1)
    b = hitting_set_B(ctx, 1, 2, 2)
    assert len(tb) == 4 and len(b) == 3
    for i, m in enumerate(b.measurements):
        assert tb.measurements[i].factors == m.factors


def test_tensor_family_size_d4():
    ctx = make_extension(make_prime_field(13), 13)
    fam = hitting_set_tensor(ctx, 4, 2, 2)
    assert len(fam) == 4 * 2 * 2**2
    assert all(m.factors is not None for m in fam.measurements)
    for m in fam.measurements[:8]:
        z = ctx.zero
        for v in m.factors:
            assert any(c != z for c in v)


def test_tensor_family_too_small_field():
    with pytest.raises(FieldTooSmall):
        hitting_set_tensor(GF13, 2, 3, 1)  # needs order >= 12^2 = 144


# -- simulation ----------------------------------------------------------------


def test_simulate_identity_on_prime_field():
    fam = hitting_set_D(GF7, 1, 2, 2)
    assert simulate_improper(fam) is fam
    famb = hitting_set_B(GF7, 1, 2, 2)
    assert simulate_proper(famb) is famb


def test_simulate_improper_size():
    K = make_extension(make_prime_field(2), 2)
    fam = hitting_set_D(K, 1, 2, 2)
    sim = simulate_improper(fam)
    assert len(sim) == 2 * len(fam)
    assert sim.ctx.p == 2 and sim.ctx.k == 1
    # sparsity survives projection
    for m in sim.measurements:
        dense = m.to_dense(sim.ctx, (2, 2))
        assert sum(1 for e in dense.entries if e) <= 2


def test_simulate_proper_size_and_pin():
    K = make_extension(make_prime_field(2), 2)
    fam = hitting_set_B(K, 1, 2, 2)
    sim = simulate_proper(fam)
    assert len(sim) == 2**2 * len(fam)
    assert all(m.factors is not None for m in sim.measurements)


def test_simulate_proper_rejects_improper_input():
    K = make_extension(make_prime_field(2), 2)
    with pytest.raises(NotRank1):
        simulate_proper(hitting_set_D(K, 1, 2, 2))


def test_combine_simulated_syndromes_layout():
    K = make_extension(make_prime_field(3), 2)
    combined = combine_simulated_syndromes(K, [1, 2, 0, 1])
    assert combined == [(1, 2), (0, 1)]


# -- PIT ------------------------------------------------------------------------


def test_pit_zero_tensor_false_for_every_family():
    z = DenseTensor.zeros(GF13, (3, 3))
    for fam in (
        hitting_set_B(GF13, 2, 3, 3),
        hitting_set_D(GF13, 2, 3, 3),
        hitting_set_D_prime(GF13, 2, 3, 3),
        hitting_set_B_prime(GF13, 2, 3, 3),
        naive_set(GF13, (3, 3)),
    ):
        assert not pit_test(z, fam)


def test_pit_detects_unit_matrix():
    gf5 = make_prime_field(5)
    fam = hitting_set_B(gf5, 1, 2, 2)
    e00 = DenseTensor(gf5, (2, 2), [1, 0, 0, 0])
    # oracle: evaluate all three inner products densely
    inners = [m.inner(gf5, e00) for m in fam.measurements]
    assert any(v != 0 for v in inners)
    assert pit_test(e00, fam)
    assert first_witness(e00, fam) == next(
        i for i, v in enumerate(inners) if v != 0
    )


def test_pit_exhaustive_gf2_rank1_via_simulated_D():
    gf2 = make_prime_field(2)
    K = make_extension(gf2, 2)
    sim = simulate_improper(hitting_set_D(K, 1, 3, 3))
    for u in itertools.product(range(2), repeat=3):
        for v in itertools.product(range(2), repeat=3):
            m = DenseTensor(gf2, (3, 3), [a * b % 2 for a in u for b in v])
            assert pit_test(m, sim) == (not m.is_zero())


def test_pit_lifts_prime_tensor_into_extension_family():
    gf2 = make_prime_field(2)
    K = make_extension(gf2, 2)
    fam = hitting_set_D(K, 1, 3, 3)
    m = DenseTensor(gf2, (3, 3), [1, 0, 0, 0, 1, 0, 0, 0, 0])
    assert pit_test(m, fam)


def test_bivariate_reduction_oracle():
    # every nonzero rank<=r matrix has a nonzero f-hat(x, g^l x) for some l < r,
    # determined by interpolating from n+m-1 evaluations
    from tensorhit.linalg import poly_interpolate

    ctx = make_prime_field(13)
    n = m = 2
    g = ctx.element_of_order(m)
    alphas = ctx.first_elements(n + m - 1)
    from tensorhit.tensor import eval_fhat

    for entries in itertools.product(range(3), repeat=4):
        mat = DenseTensor(ctx, (2, 2), list(entries))
        r = matrix_rank(mat)
        if r == 0:
            continue
        found = False
        for l in range(r):
            gl = ctx.pow(g, l)
            evals = [eval_fhat(mat, [a, ctx.mul(gl, a)]) for a in alphas]
            coeffs = poly_interpolate(ctx, alphas, evals)
            if any(c != 0 for c in coeffs):
                found = True
                break
        assert found, entries


# -- naive family and hard tensors ----------------------------------------------


def test_naive_set_counts():
    fam = naive_set(GF7, (2, 2))
    assert len(fam) == 4
    total = DenseTensor(GF7, (2, 2), [1, 2, 3, 4])
    assert [m.inner(GF7, total) for m in fam.measurements] == [1, 2, 3, 4]


def test_hard_tensor_exceeds_rank_bound():
    h = hitting_set_B(GF7, 1, 3, 3)
    t = hard_tensor(h)
    assert not t.is_zero()
    assert all(m.inner(GF7, t) == 0 for m in h.measurements)
    assert matrix_rank(t) >= 2


def test_hard_tensor_full_rank_system():
    with pytest.raises(NoNullspace):
        hard_tensor(naive_set(GF7, (2, 2)))


def test_generate_family_dispatch():
    assert generate_family(GF13, "Dprime", (3, 3), 2).family == "Dprime"
    assert generate_family(GF13, "Naive", (2, 2), 0).family == "Naive"
    with pytest.raises(ValueError):
        generate_family(GF13, "Nope", (3, 3), 1)


def test_random_rank1_measurements_baseline():
    # non-product sanity baseline: a handful of random rank-1 probes already
    # catches random nonzero low-rank matrices (seeded; no failure observed)
    ctx = make_prime_field(101)
    rng = random.Random(42)
    n = m = r = 4
    probes = []
    for _ in range(4 * (n + m) * r):
        u = tuple(rng.randrange(1, 101) for _ in range(n))
        v = tuple(rng.randrange(1, 101) for _ in range(m))
        probes.append((u, v))
    for _ in range(200):
        mat = _rand_low_rank(ctx, rng, (n, m), r)
        if mat.is_zero():
            continue
        hit = False
        for u, v in probes:
            acc = ctx.zero
            for i in range(n):
                row_dot = ctx.zero
                for j in range(m):
                    row_dot = ctx.add(row_dot, ctx.mul(mat[i, j], v[j]))
                acc = ctx.add(acc, ctx.mul(u[i], row_dot))
            if acc != ctx.zero:
                hit = True
                break
        assert hit

import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from daisyturan.gf import (
    EchelonBasis,
    batched_rank,
    elem_add,
    elem_inv,
    elem_mul,
    field_new,
    field_of_order,
    is_irreducible,
    is_prime_power,
    label_vec,
    prime_power_decompose,
    rank_of,
    smallest_irreducible,
    vec_label,
)

ORDERS = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27]


def brute_rank(ctx, vectors):
    """Rank as log_q of the span size, by closing under addition and scaling."""
    span = {tuple([0] * len(vectors[0]))} if vectors else {()}
    for v in vectors:
        span = {
            tuple(ctx.add(a, ctx.mul(c, b)) for a, b in zip(w, v))
            for w in span
            for c in range(ctx.q)
        }
    size, r = len(span), 0
    while size > 1:
        size //= ctx.q
        r += 1
    return r


def test_prime_power_decompose():
    assert prime_power_decompose(8) == (2, 3)
    assert prime_power_decompose(9) == (3, 2)
    assert prime_power_decompose(7) == (7, 1)
    assert prime_power_decompose(12) is None
    assert prime_power_decompose(1) is None
    assert [q for q in range(2, 30) if is_prime_power(q)] == [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29]


def test_prime_field_modulus():
    assert field_new(2, 1).q == 2
    assert field_new(2, 1).modulus == (0, 1)


def test_gf4_modulus_is_unique_irreducible_quadratic():
    quads = [c + (1,) for c in itertools.product(range(2), repeat=2)]
    irreducible = [f for f in quads if is_irreducible(f, 2)]
    assert irreducible == [(1, 1, 1)]
    assert field_new(2, 2).modulus == (1, 1, 1)


def test_gf9_modulus_lex_choice():
    # monic quadratics over F_3 with no root; x^2 + 1 comes first in low-degree-first order
    roots_free = [
        c + (1,) for c in itertools.product(range(3), repeat=2)
        if all((c[0] + c[1] * x + x * x) % 3 for x in range(3))
    ]
    assert roots_free[0] == (1, 0, 1)
    assert field_new(3, 2).modulus == smallest_irreducible(3, 2) == (1, 0, 1)


def test_field_errors():
    with pytest.raises(ValueError):
        field_new(4, 1)
    with pytest.raises(ValueError):
        field_new(2, 0)
    with pytest.raises(OverflowError):
        field_new(2, 40)


def test_small_arithmetic():
    f2, f3, f4 = field_new(2), field_new(3), field_new(2, 2)
    assert elem_add(f2, 1, 1) == (0,)
    assert elem_mul(f3, 2, 2) == (1,)
    x = (0, 1)
    assert elem_mul(f4, x, x) == (1, 1)
    assert elem_inv(f4, x) == (1, 1)


@pytest.mark.parametrize("q", ORDERS)
def test_field_axioms_exhaustive(q):
    ctx = field_of_order(q)
    els = range(q)
    for a in els:
        assert ctx.add(a, 0) == a and ctx.mul(a, 1) == a
        assert ctx.add(a, ctx.neg(a)) == 0
        if a:
            assert ctx.mul(a, ctx.inv(a)) == 1
    rng = random.Random(q)
    for _ in range(300):
        a, b, c = (rng.randrange(q) for _ in range(3))
        assert ctx.mul(a, ctx.add(b, c)) == ctx.add(ctx.mul(a, b), ctx.mul(a, c))
        assert ctx.mul(ctx.mul(a, b), c) == ctx.mul(a, ctx.mul(b, c))
        assert ctx.add(a, b) == ctx.add(b, a)


@pytest.mark.parametrize("q", ORDERS)
def test_multiplicative_group_cyclic(q):
    ctx = field_of_order(q)
    orders = []
    for g in range(1, q):
        x, k = g, 1
        while x != 1:
            x, k = ctx.mul(x, g), k + 1
        orders.append(k)
    assert max(orders) == q - 1


def test_rank_examples():
    ctx = field_new(2)
    e1, e2, e3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    assert rank_of(ctx, [e1, e2, e3]) == 3
    assert rank_of(ctx, [e1, e2, (1, 1, 0)]) == 2
    assert rank_of(ctx, [label_vec(ctx, i, 3) for i in range(1, 8)]) == 3
    assert rank_of(ctx, []) == 0
    with pytest.raises(ValueError):
        rank_of(ctx, [(1, 0), (1, 0, 0)])


def test_labels():
    f2, f3 = field_new(2), field_new(3)
    assert vec_label(f2, (1, 0, 0)) == 1
    assert vec_label(f2, (1, 1, 0)) == 3
    assert vec_label(f3, (2, 1)) == 5
    for q, d in [(2, 4), (3, 3), (4, 2)]:
        ctx = field_of_order(q)
        assert [vec_label(ctx, label_vec(ctx, i, d)) for i in range(1, q**d)] == list(range(1, q**d))
    with pytest.raises(ValueError):
        vec_label(f2, (0, 0))


@settings(max_examples=150, deadline=None)
@given(q=st.sampled_from([2, 3, 4, 5, 9]), d=st.integers(1, 4), k=st.integers(0, 5), seed=st.integers(0, 10**6))
def test_rank_matches_span_size(q, d, k, seed):
    ctx = field_of_order(q)
    rng = random.Random(seed)
    vecs = [tuple(rng.randrange(q) for _ in range(d)) for _ in range(k)]
    if q**d > 729:
        return
    expected = brute_rank(ctx, vecs) if vecs else 0
    assert rank_of(ctx, vecs) == expected
    assert rank_of(ctx, list(reversed(vecs))) == expected


@settings(max_examples=100, deadline=None)
@given(q=st.sampled_from([2, 3, 4, 7]), d=st.integers(1, 5), seed=st.integers(0, 10**6))
def test_echelon_basis_matches_rank(q, d, seed):
    ctx = field_of_order(q)
    rng = random.Random(seed)
    basis = EchelonBasis(ctx)
    kept = []
    for _ in range(d + 2):
        v = tuple(rng.randrange(q) for _ in range(d))
        if not any(v):
            continue
        arg = vec_label(ctx, v) if q == 2 else v
        nxt = basis.extend(arg)
        if nxt is None:
            assert rank_of(ctx, kept + [v]) == len(kept)
        else:
            kept.append(v)
            basis = nxt
            assert rank_of(ctx, kept) == len(kept)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_batched_rank_agrees(q):
    ctx = field_of_order(q)
    rng = np.random.default_rng(q)
    M = rng.integers(0, q, size=(200, 4, 5))
    got = batched_rank(ctx, M)
    want = [rank_of(ctx, [tuple(int(x) for x in row) for row in m]) for m in M]
    assert list(got) == want

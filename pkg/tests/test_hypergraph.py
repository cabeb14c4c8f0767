import itertools
import random
from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from daisyturan.constructions import construct_independent_family, fano_complement
from daisyturan.gf import field_new, vec_label
from daisyturan.hypergraph import (
    DaisyShape,
    FamilyFormatError,
    UniformFamily,
    assert_daisy_free,
    blow_up,
    colex_table,
    density,
    find_daisy,
    find_daisy_sampled,
    format_family,
    link,
    max_daisy_free,
    parse_family,
    rank,
    read_family,
    unrank,
    write_family,
)


def brute_daisy(F, shape):
    """Every (stem, petal pool) pair, edges checked as frozensets."""
    members = {frozenset(e) for e in F.edges()}
    n = F.n
    for S in itertools.combinations(range(1, n + 1), shape.stem_size):
        rest = [v for v in range(1, n + 1) if v not in S]
        for T in itertools.combinations(rest, shape.t):
            if all(frozenset(S + X) in members for X in itertools.combinations(T, shape.s)):
                return S, T
    return None


def is_witness(F, shape, w):
    return (
        len(w.stem) == shape.stem_size
        and len(w.petals) == shape.t
        and not set(w.stem) & set(w.petals)
        and all(e in F for e in w.edges(shape.s))
    )


def random_family(rng, n, r, p):
    return UniformFamily(n, r, rng.random(comb(n, r)) < p)


# -- ranking -----------------------------------------------------------------------

def test_rank_endpoints():
    assert rank((1, 2, 3), 9, 3) == 0
    for n in range(3, 10):
        assert rank((n - 2, n - 1, n), n, 3) == comb(n, 3) - 1


@pytest.mark.parametrize("n", range(0, 13))
def test_rank_unrank_roundtrip(n):
    for r in range(0, n + 1):
        table = colex_table(n, r)
        assert len(table) == comb(n, r)
        for i, row in enumerate(table):
            e = tuple(int(v) for v in row)
            assert rank(e, n, r) == i
            assert unrank(i, n, r) == e


def test_colex_order_is_colex():
    edges = [tuple(int(v) for v in row) for row in colex_table(7, 3)]
    assert edges == sorted(itertools.combinations(range(1, 8), 3), key=lambda e: tuple(reversed(e)))


def test_rank_rejects_bad_edges():
    for bad in [(2, 1, 3), (1, 1, 2), (0, 1, 2), (1, 2, 9)]:
        with pytest.raises(ValueError):
            rank(bad, 8, 3)


# -- families and density ----------------------------------------------------------

def test_density_examples():
    assert density(UniformFamily.empty(7, 3)) == 0
    assert density(UniformFamily.full(7, 3)) == 1
    assert density(construct_independent_family(2, 3)) == Fraction(4, 5)


def test_family_set_operations():
    rng = np.random.default_rng(1)
    A, B = random_family(rng, 8, 3, 0.4), random_family(rng, 8, 3, 0.4)
    assert len(A.complement()) == comb(8, 3) - len(A)
    assert A.issubset(A.union(B)) and B.issubset(A.union(B))
    assert UniformFamily.from_edges(8, 3, A.edges()) == A
    assert UniformFamily.from_ranks(8, 3, A.ranks()) == A


# -- daisies -----------------------------------------------------------------------

def test_full_layer_witness():
    w = find_daisy(UniformFamily.full(5, 3), DaisyShape(3, 2, 4))
    assert w.stem == (1,) and w.petals == (2, 3, 4, 5)


def test_fano_families_are_daisy_free():
    shape = DaisyShape(3, 2, 4)
    for F in (construct_independent_family(2, 3), fano_complement()):
        assert find_daisy(F, shape) is None
        assert brute_daisy(F, shape) is None


def test_certificates():
    shape = DaisyShape(3, 2, 4)
    c = assert_daisy_free(UniformFamily.full(7, 3), shape)
    assert not c.passed and c.witness is not None
    d = c.to_dict()
    assert d["pass"] is False and d["mode"] == "exhaustive" and "tool_version" in d
    assert assert_daisy_free(UniformFamily.empty(7, 3), shape).passed
    s = assert_daisy_free(UniformFamily.full(9, 3), shape, mode="sampled", samples=5, seed=3)
    assert not s.passed and s.to_dict()["seed"] == 3


def test_shape_validation():
    with pytest.raises(ValueError):
        DaisyShape(3, 4, 5)
    with pytest.raises(ValueError):
        DaisyShape(3, 2, 1)
    with pytest.raises(ValueError):
        find_daisy(UniformFamily.full(6, 3), DaisyShape(4, 2, 4))


def test_daisy_does_not_fit():
    assert find_daisy(UniformFamily.full(4, 3), DaisyShape(3, 2, 4)) is None


CASES = [(n, r, s, t) for n in range(4, 10) for r in range(2, 5) for s in range(1, r + 1) for t in range(s, 6)
         if r <= n and r - s + t <= n]


FAMILIES_PER_CASE = 6


@pytest.mark.parametrize("n,r,s,t", CASES)
def test_find_daisy_matches_brute_force(n, r, s, t):
    rng = np.random.default_rng(hash((n, r, s, t)) % 2**32)
    shape = DaisyShape(r, s, t)
    for _ in range(FAMILIES_PER_CASE):
        F = random_family(rng, n, r, rng.uniform(0.3, 0.95))
        w = find_daisy(F, shape)
        expected = brute_daisy(F, shape)
        assert (w is None) == (expected is None)
        if w is not None:
            assert is_witness(F, shape, w)


def test_agreement_count():
    # the parametrized oracle comparison above covers at least 10^3 seeded families
    assert len(CASES) * FAMILIES_PER_CASE >= 1000


def test_workers_do_not_change_witness():
    rng = np.random.default_rng(5)
    F = random_family(rng, 12, 3, 0.55)
    shape = DaisyShape(3, 2, 5)
    assert find_daisy(F, shape, workers=1) == find_daisy(F, shape, workers=3)


def test_sampled_finds_only_real_daisies():
    rng = np.random.default_rng(9)
    shape = DaisyShape(3, 2, 4)
    for _ in range(20):
        F = random_family(rng, 8, 3, 0.6)
        w = find_daisy_sampled(F, shape, samples=30, seed=1)
        # sampling may miss a daisy, but never reports a false one
        if w is not None:
            assert is_witness(F, shape, w)


# -- links ---------------------------------------------------------------------------

def test_link_examples():
    ctx = field_new(2)
    F = construct_independent_family(2, 3)
    e1 = vec_label(ctx, (1, 0, 0))
    L = link(F, (e1,))
    assert L.family.r == 2 and L.family.n == 6
    assert len(L.family) == 12
    bad = {
        frozenset((u, v)) for u, v in itertools.combinations(range(2, 8), 2)
        if u ^ v in (0, e1)
    }
    got = {frozenset(L.labels[i - 1] for i in e) for e in L.family.edges()}
    assert got == {frozenset(p) for p in itertools.combinations(range(2, 8), 2)} - bad
    assert len(link(UniformFamily.full(7, 3), (1,)).family) == comb(6, 2)
    assert len(link(UniformFamily.empty(7, 3), (1,)).family) == 0


# -- blow-ups -------------------------------------------------------------------------

def test_blow_up_examples():
    F = fano_complement()
    assert blow_up(F, 1) == F
    B = blow_up(F, 2)
    assert B.n == 14 and len(B) == 28 * 8


@settings(max_examples=40, deadline=None)
@given(n=st.integers(3, 6), f=st.integers(1, 3), seed=st.integers(0, 10**6))
def test_blow_up_invariants(n, f, seed):
    rng = np.random.default_rng(seed)
    F = random_family(rng, n, 3, 0.5)
    B = blow_up(F, f)
    assert len(B) == len(F) * f**3
    cls = lambda v: (v - 1) // f + 1  # noqa: E731
    for e in B.edges():
        assert tuple(cls(v) for v in e) in F


@pytest.mark.parametrize("f", [2, 3])
def test_blow_up_keeps_daisy_free(f):
    B = blow_up(fano_complement(), f)
    assert assert_daisy_free(B, DaisyShape(3, 2, 4)).passed


# -- file format ---------------------------------------------------------------------

def test_family_file_roundtrip(tmp_path):
    F = construct_independent_family(2, 3)
    text = format_family(F)
    lines = text.splitlines()
    assert lines[0] == "daisy-family v1" and lines[1] == "n=7 r=3" and len(lines) == 30
    assert parse_family(text) == F
    write_family(F, tmp_path / "f.txt")
    assert read_family(tmp_path / "f.txt") == F


def test_family_file_r0():
    F = UniformFamily.full(3, 0)
    assert parse_family(format_family(F)) == F
    assert parse_family("daisy-family v1\nn=3 r=0\n") == UniformFamily.empty(3, 0)


@pytest.mark.parametrize("text", [
    "",
    "daisy-family v2\nn=3 r=2\n",
    "daisy-family v1\nn=3\n",
    "daisy-family v1\nn=3 r=2\n1 4\n",
    "daisy-family v1\nn=3 r=2\n2 1\n",
    "daisy-family v1\nn=3 r=2\n1 3\n1 2\n",
    "daisy-family v1\nn=3 r=2\n1 2\n1 2\n",
    "daisy-family v1\nn=3 r=2\n1  2\n",
    "daisy-family v1\nn=3 r=4\n",
])
def test_family_file_rejects(text):
    with pytest.raises(FamilyFormatError):
        parse_family(text)


@settings(max_examples=300, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_family_file_fuzz(seed):
    rng = random.Random(seed)
    text = list(format_family(construct_independent_family(2, 3)))
    for _ in range(rng.randint(1, 4)):
        i = rng.randrange(len(text))
        op = rng.randrange(3)
        if op == 0:
            del text[i]
        elif op == 1:
            text.insert(i, rng.choice("0123456789 \nxr=-"))
        else:
            text[i] = rng.choice("0123456789 \n")
    try:
        F = parse_family("".join(text))
    except FamilyFormatError:
        return
    assert isinstance(F, UniformFamily)


# -- exact search ---------------------------------------------------------------------

def enumerate_max(n, shape):
    """Largest daisy-free family by scanning every subset of the layer as a bitmask."""
    m = comb(n, shape.r)
    index = {tuple(int(v) for v in row): i for i, row in enumerate(colex_table(n, shape.r))}
    copies = set()
    for S in itertools.combinations(range(1, n + 1), shape.stem_size):
        rest = [v for v in range(1, n + 1) if v not in S]
        for T in itertools.combinations(rest, shape.t):
            copies.add(sum(1 << index[tuple(sorted(S + X))] for X in itertools.combinations(T, shape.s)))
    masks = np.arange(1 << m, dtype=np.int64)
    ok = np.ones(1 << m, dtype=bool)
    for c in copies:
        ok &= (masks & c) != c
    sizes = np.zeros(1 << m, dtype=np.int64)
    for i in range(m):
        sizes += (masks >> i) & 1
    return int(sizes[ok].max())


@pytest.mark.parametrize("n,shape,expected", [
    (5, DaisyShape(3, 2, 4), 8),
    (6, DaisyShape(3, 2, 4), 16),
    (4, DaisyShape(2, 2, 3), 4),
    (5, DaisyShape(2, 2, 3), 6),
    (6, DaisyShape(2, 2, 3), 9),
    (5, DaisyShape(3, 3, 4), 7),
])
def test_max_daisy_free_matches_enumeration(n, shape, expected):
    res = max_daisy_free(n, shape)
    assert res.proved_optimal
    assert res.best_size == expected == enumerate_max(n, shape)
    assert find_daisy(res.best_family, shape) is None


def test_max_daisy_free_n7():
    res = max_daisy_free(7, DaisyShape(3, 2, 4), time_budget=240)
    assert res.best_size >= 28
    assert find_daisy(res.best_family, DaisyShape(3, 2, 4)) is None


def test_max_daisy_free_heuristic_mode():
    res = max_daisy_free(9, DaisyShape(3, 2, 4))
    assert res.mode == "heuristic" and not res.proved_optimal
    assert find_daisy(res.best_family, DaisyShape(3, 2, 4)) is None
    assert res.to_dict()["best_size"] == res.best_size


def test_max_daisy_free_budget():
    res = max_daisy_free(7, DaisyShape(3, 2, 4), node_budget=1)
    assert res.best_size >= 28  # seeded by the Fano construction

"""Explicit daisy-free families built from linear independence over GF(q).

Vertex ``j`` of ``[q^(m+r) - 1]`` is the nonzero vector ``label_vec(j)`` of
``F_q^(m+r)``; an r-set is a member when its vectors are linearly
independent. With m = 0 these are the bases of ``F_q^r``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, prod

import gmpy2
import numpy as np

from .gf import EchelonBasis, batched_rank, field_of_order, is_prime_power, label_vec
from .hypergraph import DaisyShape, UniformFamily, colex_table, find_daisy

ENUMERATION_CAP = 5_000_000


@dataclass(frozen=True)
class IndependentFamilySpec:
    q: int
    r: int
    m: int = 0

    def __post_init__(self):
        if not is_prime_power(self.q):
            raise ValueError(f"q={self.q} is not a prime power")
        if self.r < 1 or self.m < 0:
            raise ValueError("need r >= 1 and m >= 0")

    @property
    def dim(self) -> int:
        return self.m + self.r

    @property
    def n(self) -> int:
        return self.q**self.dim - 1


def independent_family_count(q: int, r: int, m: int = 0) -> int:
    """Number of linearly independent r-sets in F_q^(m+r)."""
    N = q ** (m + r)
    ordered = prod(N - q**i for i in range(r))
    count, rem = divmod(ordered, factorial(r))
    assert rem == 0
    return count


def independent_density_lower(q: int, r: int, m: int = 0) -> Fraction:
    """The finite product prod_{k=1..r} (1 - q^-(m+k)), which the density exceeds."""
    return prod((1 - Fraction(1, q ** (m + k)) for k in range(1, r + 1)), start=Fraction(1))


def construct_independent_family(q: int, r: int, m: int = 0, cap: int = ENUMERATION_CAP) -> UniformFamily:
    """All linearly independent r-sets of nonzero vectors of F_q^(m+r).

    Enumerated by backtracking over labels in increasing order while
    extending a partial echelon basis, so dependent prefixes are cut early.
    """
    spec = IndependentFamilySpec(q, r, m)
    n, dim = spec.n, spec.dim
    if comb(n, r) > cap:
        raise ValueError(f"({n} choose {r}) exceeds the enumeration cap {cap}")
    ctx = field_of_order(q)
    vecs = [None] + [lbl if q == 2 else label_vec(ctx, lbl, dim) for lbl in range(1, n + 1)]
    members: list[tuple[int, ...]] = []

    def rec(start: int, chosen: tuple[int, ...], basis: EchelonBasis):
        if len(chosen) == r:
            members.append(chosen)
            return
        # leave room for the remaining picks
        for j in range(start, n + 1 - (r - len(chosen) - 1)):
            nxt = basis.extend(vecs[j])
            if nxt is not None:
                rec(j + 1, chosen + (j,), nxt)

    rec(1, (), EchelonBasis(ctx))
    return UniformFamily.from_edges(n, r, members)


def class_labels(n: int, classes: int) -> np.ndarray:
    """Vertex v of [n] goes to class floor((v-1) * classes / n) + 1."""
    v = np.arange(n, dtype=np.int64)
    return v * classes // n + 1


def vertex_labels(n: int, classes: int, seed: int = 0) -> np.ndarray:
    """Class of each vertex for the padded family.

    With at least as many vertices as classes these are contiguous nearly
    equal blocks. Otherwise every vertex gets its own class, drawn as a
    seeded random sample: evenly spaced labels share too much structure
    (for q=2 and large r almost no r of them are independent), while a
    random sample keeps close to the typical independence rate.
    """
    if classes <= n:
        return class_labels(n, classes)
    rng = np.random.default_rng(seed)
    return np.sort(rng.choice(classes, size=n, replace=False)) + 1


def padded_independent_family(q: int, r: int, m: int, n: int, seed: int = 0) -> UniformFamily:
    """Independent-set family transported to an arbitrary ground set [n].

    [n] is cut into ``q^(m+r) - 1`` nearly equal classes (see
    ``vertex_labels``; some are empty when n is smaller); an r-set is a
    member when its vertices sit in distinct classes whose vectors are
    independent. This is a subfamily of a genuine blow-up, so it inherits
    daisy-freeness. When the class count divides n it coincides with
    ``blow_up``.
    """
    spec = IndependentFamilySpec(q, r, m)
    if r > n:
        raise ValueError("uniformity exceeds ground set")
    ctx = field_of_order(q)
    N, dim = spec.n, spec.dim
    if q**dim > 2**62:
        raise ValueError("ambient space too large")
    cls = vertex_labels(n, N, seed)
    digits = np.empty((n, dim), dtype=np.int64)
    rest = cls.copy()
    for j in range(dim):
        rest, digits[:, j] = np.divmod(rest, q)
    table = colex_table(n, r).astype(np.int64) - 1
    bits = np.zeros(len(table), dtype=bool)
    step = max(1, 2_000_000 // max(1, r * dim))
    for lo in range(0, len(table), step):
        chunk = table[lo:lo + step]
        bits[lo:lo + step] = batched_rank(ctx, digits[chunk]) == r
    return UniformFamily(n, r, bits)


def fano_lines() -> list[tuple[int, int, int]]:
    """Lines {a, b, a xor b} of the Fano plane on labels 1..7."""
    return sorted({tuple(sorted((a, b, a ^ b))) for a in range(1, 8) for b in range(a + 1, 8)})


def fano_complement() -> UniformFamily:
    lines = UniformFamily.from_edges(7, 3, fano_lines())
    return lines.complement()


def special_daisy_params(s: int, q: int, m: int) -> int:
    """t = floor(s * q^(2m/s + 1)) + 1, in exact integer arithmetic.

    s * q^((2m+s)/s) is the real s-th root of s^s * q^(2m+s), so its floor
    is the integer s-th root of that integer.
    """
    if s <= 0 or s % 2:
        raise ValueError("s must be even and positive")
    if q < 2 or m < 0:
        raise ValueError("need q >= 2 and m >= 0")
    A = s**s * q ** (2 * m + s)
    root, _exact = gmpy2.iroot(A, s)
    return int(root) + 1


def daisy_free_transversal(F: UniformFamily, shape: DaisyShape | None = None) -> UniformFamily:
    """The layer complement of F: meets every daisy copy that F misses an edge of.

    If ``shape`` is given, F is checked first and a ValueError is raised
    when it contains the daisy (the complement would then miss that copy).
    """
    if shape is not None:
        w = find_daisy(F, shape)
        if w is not None:
            raise ValueError(f"family is not daisy-free: stem={w.stem} petals={w.petals}")
    return F.complement()

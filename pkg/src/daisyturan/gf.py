"""Arithmetic in GF(p^k) and linear algebra over it.

Elements have two interchangeable forms:

* a coefficient tuple ``(c_0, ..., c_{k-1})`` of residues mod p, meaning
  ``c_0 + c_1 x + ... + c_{k-1} x^{k-1}`` modulo the field's defining
  polynomial (this is the ``FieldElem`` form);
* an integer *code* ``c_0 + c_1 p + ... + c_{k-1} p^{k-1}`` in ``[0, q)``.

Vectors are tuples of codes. For prime fields the code of an element is
just its residue, so ``(1, 0, 2)`` is a vector of F_3^3.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

MAX_ORDER = 2**31
_TABLE_LIMIT = 256


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power_decompose(q: int) -> tuple[int, int] | None:
    """Return ``(p, k)`` with ``q == p**k`` and p prime, or None."""
    if q < 2:
        return None
    p = 2
    while p * p <= q:
        if q % p == 0:
            break
        p += 1
    else:
        return q, 1
    k = 0
    while q % p == 0:
        q //= p
        k += 1
    return (p, k) if q == 1 else None


def is_prime_power(q: int) -> bool:
    return prime_power_decompose(q) is not None


# -- polynomials over F_p, coefficient lists low degree first -------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    """Remainder of a modulo b over F_p (b nonzero)."""
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], -1, p)
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - db
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * bi) % p
        _trim(a)
    return a


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Exhaustive trial division by every monic polynomial of degree <= deg/2."""
    poly = _trim(list(poly))
    deg = len(poly) - 1
    if deg < 1:
        return False
    for dd in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=dd):
            if not poly_mod(poly, list(low) + [1], p):
                return False
    return True


def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree k (low-first order)."""
    for low in itertools.product(range(p), repeat=k):
        cand = list(low) + [1]
        if k == 1 or is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError(f"no irreducible polynomial of degree {k} over F_{p}")


@dataclass(frozen=True)
class FieldCtx:
    """The field GF(p^k) defined by ``modulus`` (monic, degree k, low first)."""

    p: int
    k: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.k

    def __repr__(self) -> str:
        return f"FieldCtx(GF({self.q}), modulus={list(self.modulus)})"

    # code <-> coefficient tuple
    def decode(self, code: int) -> tuple[int, ...]:
        if not 0 <= code < self.q:
            raise ValueError(f"element code {code} out of range for GF({self.q})")
        out = []
        for _ in range(self.k):
            code, c = divmod(code, self.p)
            out.append(c)
        return tuple(out)

    def encode(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) != self.k or any(not 0 <= c < self.p for c in coeffs):
            raise ValueError(f"{coeffs!r} is not a GF({self.q}) element")
        code = 0
        for c in reversed(coeffs):
            code = code * self.p + c
        return code

    def _poly_mul(self, a: int, b: int) -> int:
        p, k = self.p, self.k
        ca, cb = self.decode(a), self.decode(b)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] = (prod[i + j] + x * y) % p
        red = poly_mod(prod, self.modulus, p)
        return self.encode(tuple(red) + (0,) * (k - len(red)))

    def _poly_add(self, a: int, b: int) -> int:
        ca, cb = self.decode(a), self.decode(b)
        return self.encode(tuple((x + y) % self.p for x, y in zip(ca, cb)))

    @cached_property
    def tables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(add, mul, neg, inv) tables over codes; only for q <= 256."""
        q = self.q
        if q > _TABLE_LIMIT:
            raise ValueError(f"no tables for GF({q})")
        add = np.empty((q, q), dtype=np.int32)
        mul = np.empty((q, q), dtype=np.int32)
        for a in range(q):
            for b in range(q):
                add[a, b] = self._poly_add(a, b) if self.k > 1 else (a + b) % q
                mul[a, b] = self._poly_mul(a, b) if self.k > 1 else (a * b) % q
        neg = np.array([int(np.flatnonzero(add[a] == 0)[0]) for a in range(q)], dtype=np.int32)
        inv = np.zeros(q, dtype=np.int32)
        for a in range(1, q):
            inv[a] = int(np.flatnonzero(mul[a] == 1)[0])
        for t in (add, mul, neg, inv):
            t.setflags(write=False)
        return add, mul, neg, inv

    @cached_property
    def _small(self) -> tuple[list[list[int]], list[list[int]], list[int], list[int]] | None:
        if self.k == 1 or self.q > _TABLE_LIMIT:
            return None
        return tuple(t.tolist() for t in self.tables)

    # code-level arithmetic
    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self._small:
            return self._small[0][a][b]
        return self._poly_add(a, b)

    def neg(self, a: int) -> int:
        if self.k == 1:
            return -a % self.p
        if self._small:
            return self._small[2][a]
        return self.encode(tuple(-c % self.p for c in self.decode(a)))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if self._small:
            return self._small[1][a][b]
        return self._poly_mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.k == 1:
            return pow(a, -1, self.p)
        if self._small:
            return self._small[3][a]
        # a^(q-2) by square and multiply
        result, base, e = 1, a, self.q - 2
        while e:
            if e & 1:
                result = self._poly_mul(result, base)
            base = self._poly_mul(base, base)
            e >>= 1
        return result


@lru_cache(maxsize=None)
def field_new(p: int, k: int = 1) -> FieldCtx:
    """GF(p^k) with the lexicographically smallest monic irreducible modulus."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if k < 1:
        raise ValueError("extension degree must be >= 1")
    if p**k > MAX_ORDER:
        raise OverflowError(f"GF({p}^{k}) exceeds the supported order 2^31")
    return FieldCtx(p, k, smallest_irreducible(p, k))


def field_of_order(q: int) -> FieldCtx:
    pk = prime_power_decompose(q)
    if pk is None:
        raise ValueError(f"{q} is not a prime power")
    return field_new(*pk)


def _code(ctx: FieldCtx, x) -> int:
    if isinstance(x, (int, np.integer)):
        if not 0 <= x < ctx.q:
            raise ValueError(f"element code {x} out of range for GF({ctx.q})")
        return int(x)
    return ctx.encode(tuple(x))


def elem_add(ctx: FieldCtx, a, b) -> tuple[int, ...]:
    return ctx.decode(ctx.add(_code(ctx, a), _code(ctx, b)))


def elem_mul(ctx: FieldCtx, a, b) -> tuple[int, ...]:
    return ctx.decode(ctx.mul(_code(ctx, a), _code(ctx, b)))


def elem_inv(ctx: FieldCtx, a) -> tuple[int, ...]:
    return ctx.decode(ctx.inv(_code(ctx, a)))


def as_vector(ctx: FieldCtx, v) -> tuple[int, ...]:
    """Normalise a vector whose entries are codes or coefficient tuples."""
    return tuple(_code(ctx, x) for x in v)


def rank_of(ctx: FieldCtx, vectors) -> int:
    """Rank of a list of vectors by Gaussian elimination.

    Rows are taken in input order; in each column the first remaining row
    with a nonzero entry becomes the pivot.
    """
    rows = [list(as_vector(ctx, v)) for v in vectors]
    if not rows:
        return 0
    dim = len(rows[0])
    if any(len(r) != dim for r in rows):
        raise ValueError("vectors have mixed dimensions")
    rank = 0
    for col in range(dim):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        inv = ctx.inv(prow[col])
        prow[:] = [ctx.mul(inv, x) for x in prow]
        for i in range(rank + 1, len(rows)):
            f = rows[i][col]
            if f:
                nf = ctx.neg(f)
                rows[i] = [ctx.add(x, ctx.mul(nf, y)) for x, y in zip(rows[i], prow)]
        rank += 1
        if rank == len(rows):
            break
    return rank


def vec_label(ctx: FieldCtx, v) -> int:
    """Integer label sum(a_i * q^i) of a nonzero vector; in [1, q^d - 1]."""
    codes = as_vector(ctx, v)
    label = 0
    for c in reversed(codes):
        label = label * ctx.q + c
    if label == 0:
        raise ValueError("the zero vector has no label")
    return label


def label_vec(ctx: FieldCtx, label: int, dim: int) -> tuple[int, ...]:
    if not 1 <= label < ctx.q**dim:
        raise ValueError(f"label {label} out of range [1, {ctx.q**dim - 1}]")
    out = []
    for _ in range(dim):
        label, c = divmod(label, ctx.q)
        out.append(c)
    return tuple(out)


class EchelonBasis:
    """Immutable row-echelon basis that can be extended one vector at a time.

    Over GF(2) vectors are packed into ints and reduced with XOR.
    """

    __slots__ = ("ctx", "rows", "_binary")

    def __init__(self, ctx: FieldCtx, rows=()):
        self.ctx = ctx
        self.rows = rows
        self._binary = ctx.q == 2

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, v):
        ctx = self.ctx
        if self._binary:
            x = v if isinstance(v, int) else sum(b << i for i, b in enumerate(v))
            for piv, row in self.rows:
                if x >> piv & 1:
                    x ^= row
            return x
        x = list(v)
        for piv, row in self.rows:
            f = x[piv]
            if f:
                nf = ctx.neg(f)
                x = [ctx.add(a, ctx.mul(nf, b)) for a, b in zip(x, row)]
        return x

    def extend(self, v) -> EchelonBasis | None:
        """Basis with v appended, or None if v lies in the current span."""
        x = self.reduce(v)
        if self._binary:
            if not x:
                return None
            piv = x.bit_length() - 1
            # keep rows fully reduced in the new pivot column
            rows = tuple((p, r ^ x) if r >> piv & 1 else (p, r) for p, r in self.rows)
            return EchelonBasis(self.ctx, rows + ((piv, x),))
        piv = next((i for i, a in enumerate(x) if a), None)
        if piv is None:
            return None
        ctx = self.ctx
        inv = ctx.inv(x[piv])
        x = [ctx.mul(inv, a) for a in x]
        rows = []
        for p, r in self.rows:
            f = r[piv]
            if f:
                nf = ctx.neg(f)
                r = [ctx.add(a, ctx.mul(nf, b)) for a, b in zip(r, x)]
            rows.append((p, r))
        return EchelonBasis(ctx, tuple(rows) + ((piv, x),))


def batched_rank(ctx: FieldCtx, vecs: np.ndarray) -> np.ndarray:
    """Ranks of many small matrices at once.

    ``vecs`` has shape ``(M, rows, dim)`` holding element codes; returns an
    int array of length M. Requires q <= 256.
    """
    vecs = np.asarray(vecs)
    M, nrows, dim = vecs.shape
    if M == 0:
        return np.zeros(0, dtype=np.int64)
    if ctx.q == 2:
        packed = np.zeros((M, nrows), dtype=np.uint64)
        for j in range(dim):
            packed |= vecs[:, :, j].astype(np.uint64) << np.uint64(j)
        return _binary_rank(packed, dim)
    add, mul, neg, inv = ctx.tables
    A = vecs.astype(np.int32).copy()
    rank = np.zeros(M, dtype=np.int64)
    used = np.zeros((M, nrows), dtype=bool)
    items = np.arange(M)
    for col in range(dim):
        cand = (A[:, :, col] != 0) & ~used
        has = cand.any(axis=1)
        if not has.any():
            continue
        idx = items[has]
        piv = cand[has].argmax(axis=1)
        used[idx, piv] = True
        rank[idx] += 1
        prow = A[idx, piv]  # (h, dim)
        prow = mul[inv[prow[:, col]][:, None], prow]
        A[idx, piv] = prow
        sub = A[idx]  # (h, nrows, dim)
        factor = neg[sub[:, :, col]]  # (h, nrows)
        factor[np.arange(len(idx)), piv] = 0
        sub = add[sub, mul[factor[:, :, None], prow[:, None, :]]]
        A[idx] = sub
    return rank


def _binary_rank(packed: np.ndarray, dim: int) -> np.ndarray:
    M, nrows = packed.shape
    basis = np.zeros((M, dim), dtype=np.uint64)
    rank = np.zeros(M, dtype=np.int64)
    one = np.uint64(1)
    for j in range(nrows):
        v = packed[:, j].copy()
        live = np.ones(M, dtype=bool)
        for b in range(dim - 1, -1, -1):
            bit = ((v >> np.uint64(b)) & one).astype(bool) & live
            if not bit.any():
                continue
            have = basis[:, b] != 0
            red = bit & have
            v[red] ^= basis[red, b]
            new = bit & ~have
            basis[new, b] = v[new]
            rank[new] += 1
            live &= ~new
    return rank

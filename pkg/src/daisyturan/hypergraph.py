"""Uniform families on [n], daisy detection, links, blow-ups and the exact solver.

Edges are strictly increasing tuples of 1-based vertices. A family stores a
boolean membership array indexed by colexicographic rank, so edge
``(a_1 < ... < a_r)`` lives at position ``sum(comb(a_i - 1, i))``.
"""

from __future__ import annotations

import itertools
import logging
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Iterator, NamedTuple

import numpy as np

from .certificate import Certificate

log = logging.getLogger(__name__)

MAX_DENSE = 50_000_000
FAMILY_HEADER = "daisy-family v1"


class FamilyFormatError(ValueError):
    pass


# -- combinatorial number system -------------------------------------------

def _check_edge(edge, n: int, r: int) -> tuple[int, ...]:
    e = tuple(int(v) for v in edge)
    if len(e) != r:
        raise ValueError(f"edge {edge!r} does not have {r} vertices")
    if any(not 1 <= v <= n for v in e):
        raise ValueError(f"edge {edge!r} has a vertex outside [1, {n}]")
    if any(a >= b for a, b in zip(e, e[1:])):
        raise ValueError(f"edge {edge!r} is not strictly increasing")
    return e


def rank(edge, n: int, r: int) -> int:
    e = _check_edge(edge, n, r)
    return sum(comb(v - 1, i) for i, v in enumerate(e, start=1))


def unrank(idx: int, n: int, r: int) -> tuple[int, ...]:
    if not 0 <= idx < comb(n, r):
        raise ValueError(f"rank {idx} out of range for ({n} choose {r})")
    out = []
    c = n - 1
    for i in range(r, 0, -1):
        while comb(c, i) > idx:
            c -= 1
        out.append(c + 1)
        idx -= comb(c, i)
        c -= 1
    return tuple(reversed(out))


@lru_cache(maxsize=256)
def colex_table(n: int, r: int) -> np.ndarray:
    """All r-subsets of [n] as rows, in colex order (row index == rank)."""
    if r == 0:
        out = np.zeros((1, 0), dtype=np.int16)
    elif n < r:
        out = np.zeros((0, r), dtype=np.int16)
    else:
        blocks = []
        for top in range(r, n + 1):
            sub = colex_table(top - 1, r - 1)
            blocks.append(np.hstack([sub, np.full((len(sub), 1), top, dtype=np.int16)]))
        out = np.vstack(blocks)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def _binom_table(n: int, r: int) -> np.ndarray:
    return np.array([[comb(a, i) for i in range(r + 1)] for a in range(n + 1)], dtype=np.int64)


def rank_many(edges: np.ndarray, n: int, r: int) -> np.ndarray:
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, r)
    if r == 0:
        return np.zeros(len(edges), dtype=np.int64)
    B = _binom_table(n, r)
    return B[edges - 1, np.arange(1, r + 1)].sum(axis=1)


# -- families ---------------------------------------------------------------

class UniformFamily:
    """An r-uniform family on [n] with dense membership over colex ranks."""

    __slots__ = ("n", "r", "bits")

    def __init__(self, n: int, r: int, bits: np.ndarray | None = None):
        if not 0 <= r <= n:
            raise ValueError(f"need 0 <= r <= n, got n={n}, r={r}")
        size = comb(n, r)
        if size > MAX_DENSE:
            raise ValueError(f"({n} choose {r}) = {size} exceeds the dense cap")
        if bits is None:
            bits = np.zeros(size, dtype=bool)
        else:
            bits = np.asarray(bits, dtype=bool).copy()
            if bits.shape != (size,):
                raise ValueError(f"membership array must have length {size}")
        bits.setflags(write=False)
        self.n, self.r, self.bits = n, r, bits

    @classmethod
    def from_edges(cls, n: int, r: int, edges: Iterable) -> UniformFamily:
        bits = np.zeros(comb(n, r), dtype=bool)
        for e in edges:
            bits[rank(tuple(sorted(e)), n, r)] = True
        return cls(n, r, bits)

    @classmethod
    def from_ranks(cls, n: int, r: int, ranks) -> UniformFamily:
        bits = np.zeros(comb(n, r), dtype=bool)
        bits[np.asarray(list(ranks) if not isinstance(ranks, np.ndarray) else ranks, dtype=np.int64)] = True
        return cls(n, r, bits)

    @classmethod
    def full(cls, n: int, r: int) -> UniformFamily:
        return cls(n, r, np.ones(comb(n, r), dtype=bool))

    @classmethod
    def empty(cls, n: int, r: int) -> UniformFamily:
        return cls(n, r)

    def __len__(self) -> int:
        return int(self.bits.sum())

    def __contains__(self, edge) -> bool:
        e = tuple(sorted(edge))
        if len(e) != self.r or (e and (e[0] < 1 or e[-1] > self.n)) or len(set(e)) != len(e):
            return False
        return bool(self.bits[rank(e, self.n, self.r)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, UniformFamily):
            return NotImplemented
        return self.n == other.n and self.r == other.r and np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash((self.n, self.r, self.bits.tobytes()))

    def __repr__(self) -> str:
        return f"UniformFamily(n={self.n}, r={self.r}, size={len(self)})"

    def ranks(self) -> np.ndarray:
        return np.flatnonzero(self.bits)

    def edge_array(self) -> np.ndarray:
        return colex_table(self.n, self.r)[self.bits]

    def edges(self) -> Iterator[tuple[int, ...]]:
        for row in self.edge_array():
            yield tuple(int(v) for v in row)

    def complement(self) -> UniformFamily:
        return UniformFamily(self.n, self.r, ~self.bits)

    def union(self, other: UniformFamily) -> UniformFamily:
        if (self.n, self.r) != (other.n, other.r):
            raise ValueError("families live on different layers")
        return UniformFamily(self.n, self.r, self.bits | other.bits)

    def issubset(self, other: UniformFamily) -> bool:
        return (self.n, self.r) == (other.n, other.r) and not (self.bits & ~other.bits).any()


def density(F: UniformFamily) -> Fraction:
    return Fraction(len(F), comb(F.n, F.r))


# -- family file format -------------------------------------------------------

def format_family(F: UniformFamily) -> str:
    lines = [FAMILY_HEADER, f"n={F.n} r={F.r}"]
    lines += [" ".join(map(str, e)) for e in F.edges()]
    return "\n".join(lines) + "\n"


def parse_family(text: str) -> UniformFamily:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) < 2 or lines[0] != FAMILY_HEADER:
        raise FamilyFormatError(f"first line must be {FAMILY_HEADER!r}")
    m = re.fullmatch(r"n=(\d+) r=(\d+)", lines[1])
    if not m:
        raise FamilyFormatError("second line must read 'n=<n> r=<r>'")
    n, r = int(m[1]), int(m[2])
    if r > n or comb(n, r) > MAX_DENSE:
        raise FamilyFormatError(f"unsupported parameters n={n} r={r}")
    bits = np.zeros(comb(n, r), dtype=bool)
    last = -1
    for lineno, line in enumerate(lines[2:], start=3):
        if r == 0 and line == "":
            verts = []
        elif not re.fullmatch(r"\d+( \d+)*", line):
            raise FamilyFormatError(f"line {lineno}: malformed member {line!r}")
        else:
            verts = [int(v) for v in line.split(" ")]
        try:
            idx = rank(verts, n, r)
        except ValueError as exc:
            raise FamilyFormatError(f"line {lineno}: {exc}") from None
        if idx <= last:
            raise FamilyFormatError(f"line {lineno}: members not in strictly increasing colex order")
        bits[idx] = True
        last = idx
    return UniformFamily(n, r, bits)


def write_family(F: UniformFamily, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(format_family(F))


def read_family(path) -> UniformFamily:
    with open(path) as fh:
        return parse_family(fh.read())


# -- daisies ------------------------------------------------------------------

@dataclass(frozen=True)
class DaisyShape:
    """The (r, s, t)-daisy: stem of size r - s, petal pool of size t."""

    r: int
    s: int
    t: int

    def __post_init__(self):
        if not (1 <= self.s <= self.t and self.s <= self.r):
            raise ValueError(f"invalid daisy shape {self}: need 1 <= s <= t and s <= r")

    @property
    def stem_size(self) -> int:
        return self.r - self.s

    @property
    def n_edges(self) -> int:
        return comb(self.t, self.s)

    def fits(self, n: int) -> bool:
        return self.r - self.s + self.t <= n


@dataclass(frozen=True)
class DaisyWitness:
    stem: tuple[int, ...]
    petals: tuple[int, ...]

    def edges(self, s: int) -> list[tuple[int, ...]]:
        return [tuple(sorted(self.stem + X)) for X in itertools.combinations(self.petals, s)]

    def to_dict(self) -> dict:
        return {"stem": list(self.stem), "petals": list(self.petals)}


def _check_shape(F: UniformFamily, shape: DaisyShape) -> None:
    if shape.r != F.r:
        raise ValueError(f"shape uniformity {shape.r} does not match family uniformity {F.r}")


def _stem_links(F: UniformFamily, s: int) -> dict[tuple, set]:
    links: dict[tuple, set] = {}
    for e in F.edges():
        for X in itertools.combinations(e, s):
            S = tuple(v for v in e if v not in X)
            links.setdefault(S, set()).add(X)
    return links


def _clique_search(pairs: set, t: int) -> tuple[int, ...] | None:
    """Lexicographically first t-clique of a graph given by its edge set."""
    adj: dict[int, int] = {}
    for a, b in pairs:
        adj[a] = adj.get(a, 0) | (1 << b)
        adj[b] = adj.get(b, 0) | (1 << a)
    # peel vertices that cannot lie in a t-clique
    alive = 0
    for v in adj:
        alive |= 1 << v
    changed = True
    while changed:
        changed = False
        for v in list(adj):
            if alive >> v & 1 and (adj[v] & alive).bit_count() < t - 1:
                alive &= ~(1 << v)
                changed = True

    def rec(chosen: list[int], cand: int):
        if len(chosen) == t:
            return tuple(chosen)
        while cand:
            if len(chosen) + cand.bit_count() < t:
                return None
            low = cand & -cand
            cand ^= low
            v = low.bit_length() - 1
            hit = rec(chosen + [v], cand & adj[v] & alive)
            if hit:
                return hit
        return None

    return rec([], alive)


def _petal_search(xs: set, s: int, t: int) -> tuple[int, ...] | None:
    """First t-set (vertices increasing) all of whose s-subsets are in xs."""
    if s == 2:
        return _clique_search(xs, t)
    verts = sorted({v for X in xs for v in X})
    if s == 1:
        return tuple(verts[:t]) if len(verts) >= t else None

    def rec(chosen: list[int], cand: list[int]):
        if len(chosen) == t:
            return tuple(chosen)
        for i, v in enumerate(cand):
            if len(chosen) + len(cand) - i < t:
                return None
            # every s-set made of v, a later w and s-2 earlier vertices must be present
            zs = list(itertools.combinations(chosen, s - 2))
            rest = [w for w in cand[i + 1:] if all(Z + (v, w) in xs for Z in zs)]
            hit = rec(chosen + [v], rest)
            if hit:
                return hit
        return None

    return rec([], verts)


def _scan_stems(items: list, s: int, t: int):
    for S, xs in items:
        T = _petal_search(xs, s, t)
        if T is not None:
            return S, T
    return None


def _stem_key(S: tuple, n: int) -> int:
    return sum(comb(v - 1, i) for i, v in enumerate(S, start=1))


def find_daisy(F: UniformFamily, shape: DaisyShape, workers: int = 1) -> DaisyWitness | None:
    """Return a copy of the daisy inside F, or None.

    Stems are scanned in colex order and petals are grown from the smallest
    vertex, so the witness is the first one in that order. With several
    workers the stems are split into ordered chunks and the first chunk
    with a hit wins, which gives the same witness.
    """
    _check_shape(F, shape)
    if not shape.fits(F.n):
        return None
    links = _stem_links(F, shape.s)
    items = sorted(links.items(), key=lambda kv: _stem_key(kv[0], F.n))
    if workers > 1 and len(items) > 64:
        size = -(-len(items) // (4 * workers))
        chunks = [items[i:i + size] for i in range(0, len(items), size)]
        with ProcessPoolExecutor(workers) as ex:
            for hit in ex.map(_scan_stems, chunks, itertools.repeat(shape.s), itertools.repeat(shape.t)):
                if hit:
                    return DaisyWitness(*hit)
        return None
    hit = _scan_stems(items, shape.s, shape.t)
    return DaisyWitness(*hit) if hit else None


def find_daisy_sampled(F: UniformFamily, shape: DaisyShape, samples: int, seed: int = 0) -> DaisyWitness | None:
    """Search the links of randomly drawn stems only."""
    _check_shape(F, shape)
    if not shape.fits(F.n):
        return None
    rng = np.random.default_rng(seed)
    k = shape.stem_size
    for _ in range(samples):
        S = tuple(sorted(int(v) + 1 for v in rng.choice(F.n, size=k, replace=False)))
        rest = [v for v in range(1, F.n + 1) if v not in S]
        xs = {X for X in itertools.combinations(rest, shape.s) if tuple(sorted(S + X)) in F}
        T = _petal_search(xs, shape.s, shape.t)
        if T is not None:
            return DaisyWitness(S, T)
    return None


AUTO_EXHAUSTIVE_WORK = 20_000_000


def assert_daisy_free(
    F: UniformFamily,
    shape: DaisyShape,
    mode: str = "exhaustive",
    samples: int = 2000,
    seed: int = 0,
    workers: int = 1,
) -> Certificate:
    """Certify that F contains no copy of the daisy.

    ``mode`` is "exhaustive", "sampled" or "auto" (exhaustive when the
    link-building work ``|F| * C(r, s)`` is below a fixed cap).
    """
    if mode == "auto":
        mode = "exhaustive" if len(F) * comb(F.r, shape.s) <= AUTO_EXHAUSTIVE_WORK else "sampled"
    if mode == "exhaustive":
        w = find_daisy(F, shape, workers=workers)
    elif mode == "sampled":
        w = find_daisy_sampled(F, shape, samples, seed)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    cert = Certificate(
        kind="daisy-free",
        passed=w is None,
        fields={"n": F.n, "r": F.r, "s": shape.s, "t": shape.t, "size": len(F), "density": density(F)},
        mode=mode,
        seed=seed if mode == "sampled" else None,
        witness=w.to_dict() if w else None,
        meta={"workers": workers},
    )
    if w is not None:
        log.info("daisy found: stem=%s petals=%s", w.stem, w.petals)
    return cert


# -- links and blow-ups ----------------------------------------------------------

class Link(NamedTuple):
    family: UniformFamily
    labels: tuple[int, ...]  # labels[i - 1] is the original name of link vertex i


def link(F: UniformFamily, S) -> Link:
    S = tuple(sorted(S))
    if len(S) >= F.r:
        raise ValueError("the link set must be smaller than the uniformity")
    _check_edge(S, F.n, len(S))
    labels = tuple(v for v in range(1, F.n + 1) if v not in S)
    k = F.r - len(S)
    new = {v: i for i, v in enumerate(labels, start=1)}
    members = [
        tuple(new[v] for v in X)
        for X in itertools.combinations(labels, k)
        if tuple(sorted(S + X)) in F
    ]
    return Link(UniformFamily.from_edges(len(labels), k, members), labels)


def blow_up(F: UniformFamily, factor: int) -> UniformFamily:
    """Replace vertex j by the class ((j-1)f, j f] and edges by all transversals."""
    if factor < 1:
        raise ValueError("blow-up factor must be positive")
    n, r, f = F.n * factor, F.r, factor
    E = F.edge_array().astype(np.int64)
    if len(E) == 0 or r == 0:
        return UniformFamily(n, r, np.ones(comb(n, r), dtype=bool) if len(E) and r == 0 else None)
    offs = np.array(list(itertools.product(range(1, f + 1), repeat=r)), dtype=np.int64)
    lifted = ((E[:, None, :] - 1) * f + offs[None, :, :]).reshape(-1, r)
    return UniformFamily.from_ranks(n, r, rank_many(lifted, n, r))


# -- exact extremal search ----------------------------------------------------------

@dataclass
class SearchResult:
    best_size: int
    best_family: UniformFamily
    proved_optimal: bool
    nodes_explored: int
    mode: str = "exact"

    def to_dict(self) -> dict:
        return {
            "best_size": self.best_size,
            "proved_optimal": self.proved_optimal,
            "nodes_explored": self.nodes_explored,
            "mode": self.mode,
            "n": self.best_family.n,
            "r": self.best_family.r,
            "members": [list(e) for e in self.best_family.edges()],
        }


def _daisy_edge_sets(n: int, shape: DaisyShape, index: dict) -> Iterator[tuple[int, ...]]:
    """Edge indices of every daisy copy on [n], generated stem by stem."""
    for S in itertools.combinations(range(1, n + 1), shape.stem_size):
        rest = [v for v in range(1, n + 1) if v not in S]
        for T in itertools.combinations(rest, shape.t):
            yield tuple(index[tuple(sorted(S + X))] for X in itertools.combinations(T, shape.s))


def _completes_daisy(links: dict, edge: tuple, shape: DaisyShape, n: int) -> bool:
    """Would adding ``edge`` finish a daisy whose other edges are in the family?"""
    s, t = shape.s, shape.t
    for X in itertools.combinations(edge, s):
        S = tuple(v for v in edge if v not in X)
        xs = links.get(S, set()) | {X}
        cand = [v for v in range(1, n + 1) if v not in edge]

        def rec(chosen: tuple, start: int) -> bool:
            if len(chosen) == t:
                return True
            for i in range(start, len(cand)):
                if len(chosen) + len(cand) - i < t:
                    return False
                w = cand[i]
                ok = all(
                    tuple(sorted(Y + (w,))) in xs
                    for Y in itertools.combinations(chosen, s - 1)
                )
                if ok and rec(chosen + (w,), i + 1):
                    return True
            return False

        if rec(X, 0):
            return True
    return False


def greedy_daisy_free(n: int, shape: DaisyShape) -> UniformFamily:
    """Insert edges in colex order, skipping any that would complete a daisy."""
    r, s = shape.r, shape.s
    links: dict[tuple, set] = {}
    keep = []
    for idx, row in enumerate(colex_table(n, r)):
        e = tuple(int(v) for v in row)
        if shape.fits(n) and _completes_daisy(links, e, shape, n):
            continue
        keep.append(idx)
        for X in itertools.combinations(e, s):
            links.setdefault(tuple(v for v in e if v not in X), set()).add(X)
    return UniformFamily.from_ranks(n, r, keep)


def _seed_families(n: int, shape: DaisyShape) -> list[UniformFamily]:
    from .constructions import padded_independent_family
    from .gf import is_prime_power

    out = []
    for q in range(2, n + 2):
        if not is_prime_power(q):
            continue
        for m in range(0, 3):
            N = q ** (m + shape.r) - 1
            if N > 4 * n and m > 0:
                break
            try:
                F = padded_independent_family(q, shape.r, m, n)
            except ValueError:
                continue
            if len(F) and find_daisy(F, shape) is None:
                out.append(F)
    return out


class _BranchAndBound:
    def __init__(self, n, shape, best_bits, deadline, node_budget):
        self.n, self.shape = n, shape
        r = shape.r
        table = colex_table(n, r)
        self.m = m = len(table)
        index = {tuple(int(v) for v in row): i for i, row in enumerate(table)}
        self.k = shape.n_edges
        self.dmask: list[int] = []
        self.ed: list[list[int]] = [[] for _ in range(m)]
        if shape.fits(n):
            for d, es in enumerate(_daisy_edge_sets(n, shape, index)):
                mask = 0
                for e in es:
                    mask |= 1 << e
                    self.ed[e].append(d)
                self.dmask.append(mask)
        D = len(self.dmask)
        self.din = [0] * D
        self.dout = [0] * D
        self.status = [-1] * m
        self.und = (1 << m) - 1
        self.inmask = 0
        self.trail: list[int] = []
        self.best = int(best_bits.sum())
        self.best_mask = sum(1 << int(i) for i in np.flatnonzero(best_bits))
        self.nodes = 0
        self.deadline = deadline
        self.node_budget = node_budget
        self.exhausted = False

    def assign(self, e0: int, v0: int) -> bool:
        stack = [(e0, v0)]
        status, din, dout, ed = self.status, self.din, self.dout, self.ed
        k = self.k
        while stack:
            e, val = stack.pop()
            if status[e] != -1:
                if status[e] != val:
                    return False
                continue
            status[e] = val
            self.trail.append(e)
            self.und &= ~(1 << e)
            if val:
                self.inmask |= 1 << e
                for d in ed[e]:
                    din[d] += 1
                for d in ed[e]:
                    if dout[d] == 0:
                        if din[d] == k:
                            return False
                        if din[d] == k - 1:
                            rest = self.dmask[d] & self.und
                            stack.append((rest.bit_length() - 1, 0))
            else:
                for d in ed[e]:
                    dout[d] += 1
        return True

    def undo(self, mark: int) -> None:
        status, din, dout, ed = self.status, self.din, self.dout, self.ed
        while len(self.trail) > mark:
            e = self.trail.pop()
            if status[e]:
                for d in ed[e]:
                    din[d] -= 1
                self.inmask &= ~(1 << e)
            else:
                for d in ed[e]:
                    dout[d] -= 1
            status[e] = -1
            self.und |= 1 << e

    def upper_bound(self) -> int:
        und = self.und
        active = sorted(
            (u.bit_count(), u)
            for d, mask in enumerate(self.dmask)
            if self.dout[d] == 0 and (u := mask & und)
        )
        used = packed = 0
        for _, u in active:
            if not u & used:
                used |= u
                packed += 1
        return self.inmask.bit_count() + und.bit_count() - packed

    def search(self) -> None:
        self.nodes += 1
        if self.nodes % 512 == 0:
            if (self.deadline is not None and time.monotonic() > self.deadline) or (
                self.node_budget is not None and self.nodes > self.node_budget
            ):
                self.exhausted = True
        if self.exhausted:
            return
        if self.und == 0:
            size = self.inmask.bit_count()
            if size > self.best:
                self.best, self.best_mask = size, self.inmask
            return
        if self.upper_bound() <= self.best:
            return
        low = self.und & -self.und
        e = low.bit_length() - 1
        for val in (1, 0):
            mark = len(self.trail)
            if self.assign(e, val):
                self.search()
            self.undo(mark)
            if self.exhausted:
                return

    def run(self) -> bool:
        # daisies with a single edge force that edge out
        if self.k == 1:
            for mask in self.dmask:
                if not self.assign(mask.bit_length() - 1, 0):
                    return True
        self.search()
        return not self.exhausted


def max_daisy_free(
    n: int,
    shape: DaisyShape,
    time_budget: float | None = 60.0,
    node_budget: int | None = None,
    exact_cap: int = 40,
) -> SearchResult:
    """Largest daisy-free r-uniform family on [n].

    Exact branch and bound (edges in colex order, "in" tried first, unit
    propagation on daisies with one edge left, bound from a greedy packing
    of edge-disjoint live daisies) when C(n, r) <= ``exact_cap``; otherwise
    the greedy colex family. Seeds come from the greedy family and from the
    finite-field constructions that happen to be daisy-free for ``shape``.
    """
    r = shape.r
    m = comb(n, r)
    candidates = [greedy_daisy_free(n, shape)] + _seed_families(n, shape)
    seed = max(candidates, key=len)
    if m > exact_cap:
        return SearchResult(len(seed), seed, False, 0, mode="heuristic")
    deadline = None if time_budget is None else time.monotonic() + time_budget
    bb = _BranchAndBound(n, shape, seed.bits, deadline, node_budget)
    proved = bb.run()
    bits = np.array([bool(bb.best_mask >> i & 1) for i in range(m)], dtype=bool)
    best = UniformFamily(n, r, bits)
    return SearchResult(len(best), best, proved, bb.nodes, mode="exact")

"""Vertex sets of {0,1}^n that meet (or sparsely meet) every d-subcube.

A point is an integer code whose bit ``i - 1`` is coordinate ``i``. A
layered family takes an r-uniform family on [n] for some layers r and maps
each r-set to the point with exactly those coordinates equal to 1.

Subcube verification works on the membership array reshaped to ``(2,)*n``:
reducing over the free axes of one choice of fixed coordinates yields the
answer for all ``2^(n-d)`` subcubes with those fixed coordinates at once.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, comb, isqrt, sqrt
from typing import Any, Iterator

import numpy as np

from . import bounds
from .certificate import Certificate
from .constructions import padded_independent_family
from .hypergraph import UniformFamily, colex_table

log = logging.getLogger(__name__)

MAX_N = 24
EXHAUSTIVE_CAP = 10**7
DEFAULT_SAMPLES = 10**5
CUBE_HEADER = "cube-family v1"


class CubeFamily:
    """A subset of {0,1}^n as a boolean array of length 2^n."""

    __slots__ = ("n", "bits")

    def __init__(self, n: int, bits: np.ndarray | None = None):
        if not 0 <= n <= MAX_N:
            raise ValueError(f"cube dimension must lie in [0, {MAX_N}]")
        if bits is None:
            bits = np.zeros(1 << n, dtype=bool)
        else:
            bits = np.asarray(bits, dtype=bool).copy()
            if bits.shape != (1 << n,):
                raise ValueError("membership array must have length 2^n")
        bits.setflags(write=False)
        self.n, self.bits = n, bits

    @classmethod
    def from_points(cls, n: int, codes) -> CubeFamily:
        bits = np.zeros(1 << n, dtype=bool)
        bits[np.asarray(list(codes), dtype=np.int64)] = True
        return cls(n, bits)

    @classmethod
    def full(cls, n: int) -> CubeFamily:
        return cls(n, np.ones(1 << n, dtype=bool))

    def __len__(self) -> int:
        return int(self.bits.sum())

    def __contains__(self, code: int) -> bool:
        return 0 <= code < (1 << self.n) and bool(self.bits[code])

    def __eq__(self, other) -> bool:
        if not isinstance(other, CubeFamily):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash((self.n, self.bits.tobytes()))

    def __repr__(self) -> str:
        return f"CubeFamily(n={self.n}, size={len(self)})"

    def points(self) -> np.ndarray:
        return np.flatnonzero(self.bits)

    def density(self) -> Fraction:
        return Fraction(len(self), 1 << self.n)

    def union(self, other: CubeFamily) -> CubeFamily:
        return CubeFamily(self.n, self.bits | other.bits)

    def layer_counts(self) -> np.ndarray:
        w = weights(self.n)
        return np.bincount(w[self.bits], minlength=self.n + 1)


def weights(n: int) -> np.ndarray:
    w = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        w[1 << i:1 << (i + 1)] = w[:1 << i] + 1
    return w


def layer_family(F: UniformFamily) -> CubeFamily:
    """Embed an r-uniform family on [n] as points of weight r."""
    E = F.edge_array().astype(np.int64)
    codes = (np.left_shift(1, E - 1)).sum(axis=1) if F.r else np.zeros(len(E), dtype=np.int64)
    return CubeFamily.from_points(F.n, codes)


# -- file format ----------------------------------------------------------------

def format_cube_family(F: CubeFamily) -> str:
    lines = [CUBE_HEADER, f"n={F.n}"]
    lines += ["".join("1" if x >> i & 1 else "0" for i in range(F.n)) for x in F.points()]
    return "\n".join(lines) + "\n"


def parse_cube_family(text: str) -> CubeFamily:
    from .hypergraph import FamilyFormatError

    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) < 2 or lines[0] != CUBE_HEADER:
        raise FamilyFormatError(f"first line must be {CUBE_HEADER!r}")
    m = re.fullmatch(r"n=(\d+)", lines[1])
    if not m or int(m[1]) > MAX_N:
        raise FamilyFormatError("second line must read 'n=<n>' with n <= 24")
    n = int(m[1])
    bits = np.zeros(1 << n, dtype=bool)
    last = -1
    for lineno, line in enumerate(lines[2:], start=3):
        if len(line) != n or not re.fullmatch(r"[01]*", line):
            raise FamilyFormatError(f"line {lineno}: expected a 0/1 string of length {n}")
        code = sum(1 << i for i, ch in enumerate(line) if ch == "1")
        if code <= last:
            raise FamilyFormatError(f"line {lineno}: points must be strictly increasing")
        bits[code] = True
        last = code
    return CubeFamily(n, bits)


# -- subcubes ---------------------------------------------------------------------

@dataclass(frozen=True)
class Subcube:
    n: int
    fixed_coords: tuple[int, ...]  # 1-based, increasing
    fixed_values: tuple[int, ...]

    @property
    def dimension(self) -> int:
        return self.n - len(self.fixed_coords)

    @property
    def free_coords(self) -> tuple[int, ...]:
        return tuple(i for i in range(1, self.n + 1) if i not in self.fixed_coords)

    def base(self) -> int:
        return sum(1 << (i - 1) for i, c in zip(self.fixed_coords, self.fixed_values) if c)

    def points(self) -> np.ndarray:
        pts = np.array([self.base()], dtype=np.int64)
        for i in self.free_coords:
            pts = np.concatenate([pts, pts | (1 << (i - 1))])
        return np.sort(pts)

    def to_dict(self) -> dict:
        return {"fixed_coords": list(self.fixed_coords), "fixed_values": list(self.fixed_values)}


def subcube_count(n: int, d: int) -> int:
    return comb(n, d) * 2 ** (n - d) if 0 <= d <= n else 0


def _fixed_sets(n: int, d: int) -> Iterator[tuple[int, ...]]:
    if d > n:
        return
    for row in colex_table(n, n - d):
        yield tuple(int(v) for v in row)


def _values(j: int, k: int) -> tuple[int, ...]:
    return tuple(j >> i & 1 for i in range(k))


def enumerate_subcubes(
    n: int, d: int, cap: int = EXHAUSTIVE_CAP, sample: int | None = None, seed: int = 0
) -> Iterator[Subcube]:
    """Every d-subcube once: fixed coordinates in colex order, values as a
    binary counter with the smallest fixed coordinate least significant.

    With ``sample`` set, yields that many uniformly random subcubes instead.
    """
    if sample is not None:
        yield from _sample_subcubes(n, d, sample, seed)
        return
    total = subcube_count(n, d)
    if total > cap:
        raise ValueError(f"{total} subcubes exceed the cap {cap}; pass sample=")
    k = n - d
    for fixed in _fixed_sets(n, d):
        for j in range(1 << k):
            yield Subcube(n, fixed, _values(j, k))


def _sample_subcubes(n: int, d: int, count: int, seed: int) -> Iterator[Subcube]:
    rng = np.random.default_rng(seed)
    for _ in range(count):
        free = set(int(i) + 1 for i in rng.choice(n, size=d, replace=False))
        fixed = tuple(i for i in range(1, n + 1) if i not in free)
        vals = tuple(int(v) for v in rng.integers(0, 2, size=len(fixed)))
        yield Subcube(n, fixed, vals)


def _reduce(F: CubeFamily, fixed: tuple[int, ...], how: str) -> np.ndarray:
    n = F.n
    cube = F.bits.reshape((2,) * n) if n else F.bits.reshape(())
    fixed_set = set(fixed)
    axes = tuple(n - i for i in range(1, n + 1) if i not in fixed_set)
    if how == "any":
        red = cube.any(axis=axes) if axes else cube
    else:
        red = cube.sum(axis=axes, dtype=np.int64) if axes else cube.astype(np.int64)
    return np.asarray(red).reshape(-1)


def _choose_mode(n: int, d: int, mode: str) -> str:
    if mode == "auto":
        mode = "exhaustive" if subcube_count(n, d) <= EXHAUSTIVE_CAP else "sampled"
        log.info("mode auto -> %s", mode)
    if mode not in ("exhaustive", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    return mode


def _sampled_counts(F: CubeFamily, d: int, samples: int, seed: int):
    for sc in _sample_subcubes(F.n, d, samples, seed):
        yield sc, int(F.bits[sc.points()].sum())


def hits_every_subcube(
    F: CubeFamily, d: int, mode: str = "auto", samples: int = DEFAULT_SAMPLES, seed: int = 0
) -> Certificate:
    """Does every d-subcube contain a member? Reports the first miss otherwise."""
    n = F.n
    mode = _choose_mode(n, d, mode)
    missed: Subcube | None = None
    checked = 0
    if mode == "exhaustive":
        for fixed in _fixed_sets(n, d):
            hit = _reduce(F, fixed, "any")
            checked += len(hit)
            if not hit.all():
                j = int(np.argmin(hit))
                missed = Subcube(n, fixed, _values(j, len(fixed)))
                break
    else:
        for sc, c in _sampled_counts(F, d, samples, seed):
            checked += 1
            if c == 0:
                missed = sc
                break
    return Certificate(
        kind="hits",
        passed=missed is None,
        fields={"n": n, "d": d, "size": len(F), "density": F.density(), "subcubes_checked": checked},
        mode=mode,
        seed=seed if mode == "sampled" else None,
        witness=missed.to_dict() if missed else None,
    )


def max_count_per_subcube(
    F: CubeFamily, d: int, limit: int, mode: str = "auto", samples: int = DEFAULT_SAMPLES, seed: int = 0
) -> Certificate:
    """Pass iff every d-subcube holds at most ``limit`` members."""
    n = F.n
    mode = _choose_mode(n, d, mode)
    worst, worst_cube, checked = -1, None, 0
    if mode == "exhaustive":
        for fixed in _fixed_sets(n, d):
            counts = _reduce(F, fixed, "sum")
            checked += len(counts)
            j = int(np.argmax(counts))
            if counts[j] > worst:
                worst, worst_cube = int(counts[j]), Subcube(n, fixed, _values(j, len(fixed)))
    else:
        for sc, c in _sampled_counts(F, d, samples, seed):
            checked += 1
            if c > worst:
                worst, worst_cube = c, sc
    passed = worst <= limit
    return Certificate(
        kind="count",
        passed=passed,
        fields={"n": n, "d": d, "size": len(F), "density": F.density(), "limit": limit,
                "max_count": max(worst, 0), "subcubes_checked": checked},
        mode=mode,
        seed=seed if mode == "sampled" else None,
        witness=None if passed else worst_cube.to_dict(),
    )


# -- constructions ------------------------------------------------------------------

def layers_mod_construction(n: int, period: int, offset: int = 0) -> CubeFamily:
    """All points whose weight is congruent to ``offset`` mod ``period``."""
    if not 1 <= period <= n + 1:
        raise ValueError("need 1 <= period <= n + 1")
    return CubeFamily(n, weights(n) % period == offset % period)


def _daisy_free_layer(n: int, r: int, q: int) -> UniformFamily:
    """(r,2,q+2)-daisy-free family on layer r; the full layer when r < 2."""
    if r < 2:
        return UniformFamily.full(n, r)
    return padded_independent_family(q, r, 0, n)


def _assemble(n: int, layers: dict[int, UniformFamily]) -> CubeFamily:
    bits = np.zeros(1 << n, dtype=bool)
    for F in layers.values():
        bits |= layer_family(F).bits
    return CubeFamily(n, bits)


def layered_hitting_family(n: int, d: int) -> CubeFamily:
    """Hitting set for d-subcubes built from daisy transversals on spaced layers.

    Let t <= floor(d/2) + 1 be largest with q = t - 2 a prime power. On each
    layer r >= 2 that is a multiple of ceil(d/2) we place the complement of
    an (r,2,t)-daisy-free independent-set family; other layers stay empty.
    Any d-subcube has a layer among its second to (ceil(d/2)+1)-th whose
    points contain such a daisy, and one of those layers is used.
    """
    if d > n:
        return CubeFamily(n)
    q = bounds.q_of_d(d)
    if q is None:
        raise ValueError(
            f"d={d}: needs a prime power <= floor(d/2) - 1, i.e. d >= 6; "
            "use layers_mod_construction(n, d + 1) for small d"
        )
    step = ceil(d / 2)
    layers = {}
    for r in range(step, n + 1, step):
        if r >= 2:
            layers[r] = _daisy_free_layer(n, r, q).complement()
    return _assemble(n, layers)


def five_point_family(n: int) -> CubeFamily:
    """Layers r = 0 mod 3, each carrying an (r,2,4)-daisy-free family.

    A 4-subcube meets at most five points of such layers unless its middle
    layer is one of them, and those six middle points form a daisy.
    """
    return _assemble(n, {r: _daisy_free_layer(n, r, 2) for r in range(0, n + 1, 3)})


def sqrt_spacing(d: int, C: float) -> int:
    """ceil(C * sqrt(d)), exact when d is a perfect square."""
    if C <= 0:
        raise ValueError("C must be positive")
    root = isqrt(d)
    x = C * root if root * root == d else C * sqrt(d)
    return max(1, ceil(x))


def sqrt_spaced_family(n: int, d: int, C: float) -> CubeFamily:
    """Daisy-free layers at multiples of ceil(C sqrt(d))."""
    step = sqrt_spacing(d, C)
    return _assemble(n, {r: _daisy_free_layer(n, r, 2) for r in range(0, n + 1, step)})


def central_binomial_limit(d: int) -> int:
    """Largest allowed count per d-subcube: C(d, floor(d/2)) - 1."""
    return comb(d, d // 2) - 1


# -- edges --------------------------------------------------------------------------

def derive_edge_hitting_set(F: CubeFamily) -> set[tuple[int, int]]:
    """Cube edges with an endpoint in F, as (lower endpoint, flipped coordinate)."""
    n = F.n
    out = set()
    for x in F.points():
        x = int(x)
        for i in range(1, n + 1):
            out.add((x & ~(1 << (i - 1)), i))
    return out


def edge_hits_every_subcube(edges: set[tuple[int, int]], n: int, d: int) -> Certificate:
    """Check directly that every d-subcube has one of its own edges in ``edges``."""
    missed = None
    checked = 0
    for sc in enumerate_subcubes(n, d):
        checked += 1
        pts = sc.points()
        ok = any(
            (int(x), i) in edges
            for x in pts
            for i in sc.free_coords
            if not int(x) >> (i - 1) & 1
        )
        if not ok:
            missed = sc
            break
    return Certificate(
        kind="edge-hits",
        passed=missed is None,
        fields={"n": n, "d": d, "edges": len(edges), "subcubes_checked": checked},
        witness=missed.to_dict() if missed else None,
    )


# -- bound report -------------------------------------------------------------------

@dataclass
class CubeBoundReport:
    d: int
    gamma_upper: Any  # None when d < 6
    gamma_lower_aks: Any
    gamma_upper_aks: Fraction
    rho_upper: Any
    q_of_d: int | None
    beta_q: Any
    passes_suff: bool
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        def f(x):
            if x is None:
                return None
            if isinstance(x, Fraction):
                return f"{x.numerator}/{x.denominator}"
            return float(x)

        return {
            "d": self.d,
            "gamma_upper": f(self.gamma_upper),
            "gamma_lower_aks": f(self.gamma_lower_aks),
            "gamma_upper_aks": f(self.gamma_upper_aks),
            "rho_upper": f(self.rho_upper),
            "q_of_d": self.q_of_d,
            "beta_q": f(self.beta_q),
            "passes_suff": self.passes_suff,
            "notes": self.notes,
        }


def gamma_report(d: int) -> CubeBoundReport:
    if d < 2:
        raise ValueError("need d >= 2")
    lo, hi = bounds.aks_bounds(d)
    notes = []
    k = max((k for k in range(2, d + 1, 2) if 8 * k + 1 <= d), default=None)
    if k is not None:
        notes.append(f"exponential regime: (r,{k},{8 * k + 1})-daisy transversals give O(2^-{k}) = O(2^(-d/8))")
    q = bounds.q_of_d(d)
    if q is None:
        notes.append("d < 6: layered construction unavailable; (d+1)-periodic layers give 1/(d+1)")
        return CubeBoundReport(d, None, lo, hi, None, None, None, False, notes)
    b = bounds.beta(q)
    g = bounds.master_bound(d)
    notes.append("rho_upper: edges touching the hitting set, at most 2 * gamma_upper")
    return CubeBoundReport(d, g, lo, hi, 2 * g, q, b, bounds.passes_suff(d), notes)

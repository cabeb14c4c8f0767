"""s-wise independent vector families in F_q^d.

A set X is s-wise independent when every subset of at most s of its
vectors is linearly independent (so the empty set and single nonzero
vectors qualify, and sets smaller than s must themselves be independent).
"""

from __future__ import annotations

import itertools
import logging
import time
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import gmpy2
import mpmath

from .certificate import Certificate
from .gf import FieldCtx, as_vector, field_of_order, label_vec, rank_of

log = logging.getLogger(__name__)

_mp = mpmath.MPContext()
_mp.prec = 96

EXACT_ORDER_CAP = 2**12
INJECTIVITY_CAP = 10**6


def _check_s(s: int) -> None:
    if s < 2 or s % 2:
        raise ValueError("s must be even and at least 2")


def earnest_bound(q: int, s: int, d: int):
    """s * q^(2d/s - 1): a Fraction when s divides 2d, else a 96-bit mpf."""
    _check_s(s)
    if (2 * d) % s == 0:
        e = 2 * d // s - 1
        return s * (Fraction(q) ** e)
    return _mp.mpf(s) * _mp.power(q, _mp.mpf(2 * d) / s - 1)


def earnest_bound_floor(q: int, s: int, d: int) -> int:
    """floor of the bound, exactly: the integer s-th root of floor(s^s q^(2d-s))."""
    _check_s(s)
    num, den = s**s * q ** max(0, 2 * d - s), q ** max(0, s - 2 * d)
    root, _ = gmpy2.iroot(num // den, s)
    return int(root)


def is_swise_independent(ctx: FieldCtx, vectors, s: int) -> bool:
    vecs = [as_vector(ctx, v) for v in vectors]
    k = min(s, len(vecs))
    return all(rank_of(ctx, sub) == k for sub in itertools.combinations(vecs, k))


@dataclass
class SwiseInstance:
    q: int
    d: int
    s: int
    max_found: int
    witness: list[tuple[int, ...]]
    proved_optimal: bool = False
    nodes_explored: int = 0
    mode: str = "exact"

    def to_dict(self) -> dict:
        return {
            "q": self.q, "d": self.d, "s": self.s,
            "max_found": self.max_found,
            "witness": [list(v) for v in self.witness],
            "proved_optimal": self.proved_optimal,
            "nodes_explored": self.nodes_explored,
            "mode": self.mode,
        }


def projective_points(ctx: FieldCtx, d: int) -> list[tuple[int, ...]]:
    """Nonzero vectors whose first nonzero coordinate is 1, in label order."""
    out = []
    for lbl in range(1, ctx.q**d):
        v = label_vec(ctx, lbl, d)
        if next(c for c in v if c) == 1:
            out.append(v)
    return out


def _span_of_small_subsets(ctx: FieldCtx, chosen: list, new, s: int) -> set:
    """Projective points of all combinations c*new + (up to s-2 others from chosen)."""
    out = set()
    nz = range(1, ctx.q)
    for k in range(0, s - 1):
        for sub in itertools.combinations(chosen, k):
            for coeffs in itertools.product(nz, repeat=k):
                acc = list(new)
                for c, v in zip(coeffs, sub):
                    acc = [ctx.add(a, ctx.mul(c, b)) for a, b in zip(acc, v)]
                if any(acc):
                    out.add(_normalize(ctx, acc))
    return out


def _normalize(ctx: FieldCtx, v) -> tuple[int, ...]:
    lead = next(c for c in v if c)
    inv = ctx.inv(lead)
    return tuple(ctx.mul(inv, c) for c in v)


def max_swise_independent(
    q: int,
    d: int,
    s: int,
    time_budget: float | None = 60.0,
    node_budget: int | None = None,
) -> SwiseInstance:
    """Largest s-wise independent subset of F_q^d by branch and bound.

    Candidates are projective points in label order. A chosen set forbids
    every point spanned by at most s-1 of its members; the Earnest bound
    stops the search once it is met. Above q^d = 4096 a greedy pass is
    returned instead.

    The witness is normalised: it begins with the standard basis vectors.
    """
    _check_s(s)
    ctx = field_of_order(q)
    pts = projective_points(ctx, d)
    cap = min(earnest_bound_floor(q, s, d), d if s > d else len(pts))
    if q**d > EXACT_ORDER_CAP:
        chosen, forbidden = [], set()
        for v in pts:
            if v not in forbidden:
                forbidden |= _span_of_small_subsets(ctx, chosen, v, s)
                chosen.append(v)
        return SwiseInstance(q, d, s, len(chosen), chosen, False, len(pts), mode="heuristic")

    deadline = None if time_budget is None else time.monotonic() + time_budget
    best: list = []
    nodes = 0
    exhausted = False

    def rec(chosen: list, cand: list):
        nonlocal best, nodes, exhausted
        nodes += 1
        if (deadline and nodes % 256 == 0 and time.monotonic() > deadline) or (
            node_budget is not None and nodes > node_budget
        ):
            exhausted = True
        if exhausted:
            return
        if len(chosen) > len(best):
            best = list(chosen)
        if len(best) >= cap:
            return
        for i, v in enumerate(cand):
            if len(chosen) + len(cand) - i <= len(best):
                return
            bad = _span_of_small_subsets(ctx, chosen, v, s)
            rest = [w for w in cand[i + 1:] if w not in bad]
            rec(chosen + [v], rest)
            if exhausted or len(best) >= cap:
                return

    # Any optimum contains min(s, d) independent vectors, and GL(d, q) maps
    # them to e_1, ..., e_k, so the search may start from that basis.
    k = min(s, d)
    start: list = []
    cand = pts
    for i in range(k):
        e = tuple(int(j == i) for j in range(d))
        bad = _span_of_small_subsets(ctx, start, e, s)
        start.append(e)
        cand = [w for w in cand if w not in bad and w != e]
    rec(start, cand)
    return SwiseInstance(q, d, s, len(best), best, not exhausted, nodes)


def verify_counting_inequality(q: int, s: int, instance: SwiseInstance) -> Certificate:
    """Check (q-1)^(s/2) C(|X|, s/2) <= q^d, and that the underlying sums are distinct.

    The distinct-sums check enumerates c_1 v_1 + ... + c_l v_l over all
    l-subsets of X (l = s/2) and nonzero coefficients; it runs when there
    are at most 10^6 such sums.
    """
    _check_s(s)
    ctx = field_of_order(q)
    d = instance.d
    X = [as_vector(ctx, v) for v in instance.witness]
    l = s // 2
    n_sums = (q - 1) ** l * comb(len(X), l)
    rhs = q**d
    ok_ineq = n_sums <= rhs
    ok_indep = is_swise_independent(ctx, X, s)
    checked = n_sums <= INJECTIVITY_CAP
    ok_distinct = True
    if checked:
        seen = set()
        for sub in itertools.combinations(X, l):
            for coeffs in itertools.product(range(1, q), repeat=l):
                acc = (0,) * d
                for c, v in zip(coeffs, sub):
                    acc = tuple(ctx.add(a, ctx.mul(c, b)) for a, b in zip(acc, v))
                if acc in seen:
                    ok_distinct = False
                    break
                seen.add(acc)
            if not ok_distinct:
                break
    passed = ok_ineq and ok_indep and ok_distinct
    if ok_indep and not (ok_ineq and ok_distinct):
        log.error("counting inequality FAILED for an s-wise independent set (q=%d, d=%d, s=%d)", q, d, s)
    return Certificate(
        kind="swise",
        passed=passed,
        fields={
            "q": q, "d": d, "s": s, "size": len(X),
            "lhs": n_sums, "rhs": rhs,
            "swise_independent": ok_indep,
            "inequality": ok_ineq,
            "distinct_sums_checked": checked,
            "distinct_sums": ok_distinct if checked else None,
        },
    )

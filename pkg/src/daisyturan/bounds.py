"""Closed-form bounds: Euler products, Turán-type densities, hypercube brackets.

Rationals are exact ``Fraction``s. Irrational values are 96-bit mpmath
floats from a private context, and infinite products come with a rational
enclosure so that comparisons against thresholds are certified.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, prod
from typing import Any, Iterable

import mpmath

from .gf import is_prime_power

mp = mpmath.MPContext()
mp.prec = 96


def _mpf(x) -> Any:
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    return mp.mpf(x)


def euler_product_bounds(q: int, m: int = 0, tol: float = 1e-9) -> tuple[Fraction, Fraction]:
    """Rational enclosure [lo, hi] of prod_{k>=1} (1 - q^-(m+k)) with hi - lo < tol.

    After K factors the partial product P satisfies
    P * (1 - tail) <= product <= P with tail = sum_{j>K} q^-(m+j)
    = q^-(m+K) / (q - 1), since prod(1 - x_j) >= 1 - sum(x_j).
    """
    if q < 2 or m < 0 or tol <= 0:
        raise ValueError("need q >= 2, m >= 0, tol > 0")
    tol_q = Fraction(tol)
    P = Fraction(1)
    k = 0
    while True:
        k += 1
        P *= 1 - Fraction(1, q ** (m + k))
        tail = Fraction(1, (q - 1) * q ** (m + k))
        if P * tail < tol_q:
            return P * (1 - tail), P


def euler_product(q: int, m: int = 0, tol: float = 1e-9):
    """prod_{k>=1} (1 - q^-(m+k)) to within tol (midpoint of the enclosure)."""
    lo, hi = euler_product_bounds(q, m, tol)
    return _mpf((lo + hi) / 2)


def beta(q: int, tol: float = 1e-12):
    return euler_product(q, 0, tol)


def turan_upper(t: int) -> Fraction:
    """Averaging + Turán's theorem: every (r,2,t)-daisy density bound 1 - 1/(t-1)."""
    if t < 3:
        raise ValueError("need t >= 3")
    return 1 - Fraction(1, t - 1)


def decaen_upper(t: int) -> Fraction:
    """de Caen's bound 1 - 1/C(t-1, 2) for K_t^(3), carried over to (r,3,t)-daisies."""
    if t < 3:
        raise ValueError("need t >= 3")
    return 1 - Fraction(1, comb(t - 1, 2))


def aks_bounds(d: int) -> tuple[Any, Fraction]:
    """(log2(d+2) / 2^(d+2), 1/(d+1)), the classical bracket for the hitting density."""
    if d < 1:
        raise ValueError("need d >= 1")
    lower = mp.log(d + 2, 2) * mp.ldexp(1, -(d + 2))
    return lower, Fraction(1, d + 1)


def blowup_density_bound(q: int, r: int) -> Fraction:
    """(1 - C(r,2)/(q^r - 1)) * prod_{k=1..r} (1 - q^-k)."""
    if r < 2:
        raise ValueError("need r >= 2")
    head = 1 - Fraction(comb(r, 2), q**r - 1)
    return head * prod((1 - Fraction(1, q**k) for k in range(1, r + 1)), start=Fraction(1))


def largest_prime_power_leq(x: int) -> int:
    if x < 2:
        raise ValueError("need x >= 2")
    while not is_prime_power(x):
        x -= 1
    return x


def special_t(s: int, q: int, m: int) -> int:
    from .constructions import special_daisy_params

    return special_daisy_params(s, q, m)


# -- hypercube master bound ---------------------------------------------------

def q_of_d(d: int) -> int | None:
    """Largest prime power <= floor(d/2) - 1, or None when there is none."""
    x = d // 2 - 1
    return largest_prime_power_leq(x) if x >= 2 else None


def master_bound_bounds(d: int, tol: float = 1e-15) -> tuple[Fraction, Fraction] | None:
    """Enclosure of (1 - beta_q(d)) / ceil(d/2)."""
    q = q_of_d(d)
    if q is None:
        return None
    lo, hi = euler_product_bounds(q, 0, tol)
    c = -(-d // 2)
    return (1 - hi) / c, (1 - lo) / c


def master_bound(d: int):
    enc = master_bound_bounds(d)
    if enc is None:
        return None
    return _mpf((enc[0] + enc[1]) / 2)


def passes_suff(d: int) -> bool:
    """Certified check that the layered construction beats 1/(d+1)."""
    enc = master_bound_bounds(d)
    return enc is not None and enc[1] < Fraction(1, d + 1)


# -- tables -------------------------------------------------------------------

@dataclass
class BoundReport:
    name: str
    params: dict[str, Any]
    value: Any
    rational: Fraction | None = None
    citation: str = ""
    extra: dict[str, Any] = field(default_factory=dict)


def _fmt_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, Fraction):
        v = _mpf(v)
    if isinstance(v, (int,)):
        return str(v)
    return mpmath.nstr(v, 20, min_fixed=-30, max_fixed=30)


def _rows(kind: str, values: Iterable, tol: float) -> list[BoundReport]:
    out = []
    for v in values:
        if kind == "gamma-master":
            d = int(v)
            enc = master_bound_bounds(d)
            val = None if enc is None else _mpf((enc[0] + enc[1]) / 2)
            out.append(BoundReport(kind, {"d": d}, val, None, "layered daisy transversal",
                                   {"q": q_of_d(d), "passes": passes_suff(d)}))
        elif kind == "euler":
            q = int(v)
            out.append(BoundReport(kind, {"q": q}, euler_product(q, 0, tol), None, "Euler function (q^-1; q^-1)_inf"))
        elif kind == "turan":
            t = int(v)
            x = turan_upper(t)
            out.append(BoundReport(kind, {"t": t}, _mpf(x), x, "averaging over links + Turán"))
        elif kind == "decaen":
            t = int(v)
            x = decaen_upper(t)
            out.append(BoundReport(kind, {"t": t}, _mpf(x), x, "de Caen"))
        elif kind == "aks":
            d = int(v)
            lo, hi = aks_bounds(d)
            out.append(BoundReport(kind, {"d": d}, lo, None, "Alon-Krech-Szabó", {"upper": hi}))
        elif kind == "blowup":
            q, r = v
            x = blowup_density_bound(q, r)
            out.append(BoundReport(kind, {"q": q, "r": r}, _mpf(x), x, "blow-up union bound"))
        elif kind == "special-t":
            s, q, m = v
            t = special_t(s, q, m)
            out.append(BoundReport(kind, {"s": s, "q": q, "m": m}, t, Fraction(t), "s-wise independence"))
        elif kind == "independent-limit":
            q, m = v
            out.append(BoundReport(kind, {"q": q, "m": m}, euler_product(q, m, tol), None,
                                   "independent-set family density limit"))
        else:
            raise ValueError(f"unknown bound kind {kind!r}")
    return out


BOUND_KINDS = ("gamma-master", "euler", "turan", "decaen", "aks", "blowup", "special-t", "independent-limit")


def theorem_bound_table(kind: str, values: Iterable, tol: float = 1e-9) -> list[BoundReport]:
    """Evaluate one named bound over a parameter range.

    Scalar kinds take an iterable of ints; "blowup" takes (q, r) pairs,
    "special-t" takes (s, q, m) triples and "independent-limit" (q, m) pairs.
    """
    if kind not in BOUND_KINDS:
        raise ValueError(f"unknown bound kind {kind!r}; choose from {', '.join(BOUND_KINDS)}")
    return _rows(kind, values, tol)


def bound_table_csv(reports: list[BoundReport], kind: str | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    params = list(reports[0].params) if reports else []
    extras = list(reports[0].extra) if reports else []
    w.writerow(params + ["value", "rational"] + extras + ["citation"])
    for rep in reports:
        rat = "" if rep.rational is None else f"{rep.rational.numerator}/{rep.rational.denominator}"
        w.writerow([rep.params[p] for p in params] + [_fmt_value(rep.value), rat]
                   + [rep.extra[e] for e in extras] + [rep.citation])
    return buf.getvalue()

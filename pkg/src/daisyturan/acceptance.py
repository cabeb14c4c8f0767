"""End-to-end acceptance checks, shared by the test suite and ``daisyturan demo``.

Each check returns a ``CheckResult``; none of them raise on failure.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from fractions import Fraction
from math import comb, log2
from typing import Callable

import numpy as np

from . import bounds, cube
from .constructions import (
    construct_independent_family,
    fano_complement,
    independent_density_lower,
)
from .hypergraph import DaisyShape, assert_daisy_free, blow_up, colex_table, density, find_daisy, max_daisy_free
from .swise import earnest_bound, max_swise_independent, verify_counting_inequality


@dataclass
class CheckResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0
    limit: float | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:>2}. {self.title}: {self.detail} ({self.seconds:.2f}s)"


def fano_coincidence() -> tuple[bool, str]:
    F = construct_independent_family(2, 3, 0)
    cert = assert_daisy_free(F, DaisyShape(3, 2, 4), mode="exhaustive")
    ok = len(F) == 28 and F == fano_complement() and cert.passed
    return ok, f"{len(F)} members, equals Fano complement: {F == fano_complement()}, daisy-free: {cert.passed}"


def four_uniform_instance() -> tuple[bool, str]:
    F = construct_independent_family(2, 4, 0)
    cert = assert_daisy_free(F, DaisyShape(4, 2, 4), mode="exhaustive")
    dens, lower = density(F), independent_density_lower(2, 4, 0)
    ok = len(F) == 840 and dens == Fraction(840, 1365) and cert.passed and dens > lower == Fraction(315, 1024)
    return ok, f"{len(F)} members, density {dens} > {lower}, daisy-free: {cert.passed}"


def ternary_instance() -> tuple[bool, str]:
    F = construct_independent_family(3, 3, 0)
    cert = assert_daisy_free(F, DaisyShape(3, 2, 5), mode="exhaustive")
    return len(F) == 1872 and cert.passed, f"{len(F)} members on n={F.n}, (3,2,5)-daisy-free: {cert.passed}"


def blowup_preservation() -> tuple[bool, str]:
    B = blow_up(fano_complement(), 2)
    cert = assert_daisy_free(B, DaisyShape(3, 2, 4), mode="exhaustive")
    bound = bounds.blowup_density_bound(2, 3)
    ok = B.n == 14 and len(B) == 224 and cert.passed and density(B) >= bound == Fraction(3, 16)
    return ok, f"n={B.n}, {len(B)} members, density {density(B)} >= {bound}, daisy-free: {cert.passed}"


def swise_size_bound() -> tuple[bool, str]:
    rows = []
    ok = True
    for q, d, s in itertools.product((2, 3), (2, 3, 4), (2, 4)):
        if q**d > 256:
            continue
        inst = max_swise_independent(q, d, s, time_budget=120)
        cert = verify_counting_inequality(q, s, inst)
        good = (
            inst.proved_optimal
            and inst.max_found <= earnest_bound(q, s, d)
            and cert.passed
            and cert.fields["distinct_sums_checked"]
        )
        ok &= good
        rows.append(f"{q},{d},{s}->{inst.max_found}{'' if good else '!'}")
    return ok, "max sizes " + " ".join(rows)


def euler_products() -> tuple[bool, str]:
    b2, b3 = bounds.euler_product(2, 0, 1e-9), bounds.euler_product(3, 0, 1e-9)
    seq = [bounds.euler_product(q, 0, 1e-9) for q in (2, 3, 4, 5, 7, 8, 9)]
    increasing = all(a < b for a, b in zip(seq, seq[1:]))
    ok = 0.2887880 <= b2 <= 0.2887882 and 0.5601 <= b3 <= 0.5602 and increasing
    return ok, f"beta_2={float(b2):.10f}, beta_3={float(b3):.10f}, increasing over q<=9: {increasing}"


def master_inequality() -> tuple[bool, str]:
    fails = [d for d in range(8, 201) if not cube.gamma_report(d).passes_suff]
    lo, _ = bounds.euler_product_bounds(3, 0, 1e-15)
    exact = bounds.q_of_d(8) == 3 and bounds.q_of_d(9) == 3 and lo > Fraction(5, 9) and lo > Fraction(1, 2)
    return not fails and exact, f"failing d in [8,200]: {fails or 'none'}; q(8)=q(9)=3 and beta_3 > 5/9: {exact}"


def hypercube_desk_scale() -> tuple[bool, str]:
    layered = all(
        cube.hits_every_subcube(cube.layers_mod_construction(n, d + 1, c), d, mode="exhaustive").passed
        for n in range(0, 13)
        for d in range(0, min(n, 4) + 1)
        for c in range(d + 1)
    )
    fp = cube.max_count_per_subcube(cube.five_point_family(7), 4, 5, mode="exhaustive")
    hit = cube.hits_every_subcube(cube.layered_hitting_family(8, 6), 6, mode="exhaustive")
    ok = layered and fp.passed and fp.fields["subcubes_checked"] == 280 and hit.passed
    return ok, (
        f"periodic layers hit (n<=12, d<=4): {layered}; five-point max {fp.fields['max_count']} "
        f"over {fp.fields['subcubes_checked']} 4-subcubes; layered (8,6) hits: {hit.passed}"
    )


def brute_force_max_daisy_free(n: int, shape: DaisyShape) -> int:
    """Largest daisy-free family by scanning all 2^C(n,r) edge subsets."""
    m = comb(n, shape.r)
    index = {tuple(int(v) for v in row): i for i, row in enumerate(colex_table(n, shape.r))}
    copies = []
    for S in itertools.combinations(range(1, n + 1), shape.stem_size):
        rest = [v for v in range(1, n + 1) if v not in S]
        for T in itertools.combinations(rest, shape.t):
            copies.append(sum(1 << index[tuple(sorted(S + X))] for X in itertools.combinations(T, shape.s)))
    masks = np.arange(1 << m, dtype=np.int64)
    alive = np.ones(len(masks), dtype=bool)
    for c in copies:
        alive &= (masks & c) != c
    pop = np.zeros(len(masks), dtype=np.int64)
    for i in range(m):
        pop += (masks >> i) & 1
    return int(pop[alive].max())


def solver_oracle() -> tuple[bool, str]:
    shape = DaisyShape(3, 2, 4)
    parts = []
    ok = True
    for n in (5, 6):
        res = max_daisy_free(n, shape)
        brute = brute_force_max_daisy_free(n, shape)
        ok &= res.proved_optimal and res.best_size == brute and find_daisy(res.best_family, shape) is None
        parts.append(f"n={n}: solver {res.best_size}, brute force {brute}")
    r7 = max_daisy_free(7, shape, time_budget=240)
    ok &= r7.best_size >= 28 and find_daisy(r7.best_family, shape) is None
    parts.append(f"n=7: {r7.best_size}{' (optimal)' if r7.proved_optimal else ''}")
    return ok, "; ".join(parts)


def expected_blowup(q: int, r: int) -> Fraction:
    head = 1 - Fraction(comb(r, 2), q**r - 1)
    for k in range(1, r + 1):
        head *= Fraction(q**k - 1, q**k)
    return head


def bound_tables() -> tuple[bool, str]:
    """Emitted tables must reproduce the closed forms exactly."""
    checks = []
    t = bounds.theorem_bound_table("turan", range(3, 10))
    checks.append(all(r.rational == 1 - Fraction(1, r.params["t"] - 1) for r in t))
    t = bounds.theorem_bound_table("decaen", range(3, 10))
    checks.append(all(r.rational == 1 - Fraction(1, comb(r.params["t"] - 1, 2)) for r in t))
    t = bounds.theorem_bound_table("aks", range(2, 30))
    checks.append(all(
        r.extra["upper"] == Fraction(1, r.params["d"] + 1)
        and abs(float(r.value) / (log2(r.params["d"] + 2) * 2.0 ** -(r.params["d"] + 2)) - 1) < 1e-12
        for r in t
    ))
    t = bounds.theorem_bound_table("blowup", [(2, 2), (2, 3), (3, 3)])
    checks.append([r.rational for r in t] == [Fraction(1, 4), Fraction(3, 16), expected_blowup(3, 3)])
    t = bounds.theorem_bound_table("special-t", [(2, 2, 1), (4, 2, 4)])
    checks.append([r.value for r in t] == [9, 33])
    t = bounds.theorem_bound_table("gamma-master", range(8, 40))
    checks.append(all(r.extra["passes"] and r.value * (r.params["d"] + 1) < 1 for r in t))
    csv_text = bounds.bound_table_csv(bounds.theorem_bound_table("turan", [4]))
    checks.append(csv_text.splitlines()[1].startswith("4,0.66666666666666666667,2/3"))
    return all(checks), f"{sum(checks)}/{len(checks)} closed-form table checks match"


CHECKS: list[tuple[int, str, Callable[[], tuple[bool, str]], float]] = [
    (1, "Fano coincidence", fano_coincidence, 1.0),
    (2, "r=4 independent family", four_uniform_instance, 30.0),
    (3, "q=3 independent family", ternary_instance, 120.0),
    (4, "blow-up preservation", blowup_preservation, 60.0),
    (5, "s-wise independence bound", swise_size_bound, 600.0),
    (6, "Euler products", euler_products, 10.0),
    (7, "hypercube master inequality", master_inequality, 1.0),
    (8, "hypercube hitting, desk scale", hypercube_desk_scale, 60.0),
    (9, "exact solver vs brute force", solver_oracle, 300.0),
    (10, "bound tables", bound_tables, 60.0),
]


def run_check(number: int) -> CheckResult:
    num, title, fn, limit = CHECKS[number - 1]
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # reported as a failed row, not a crash
        ok, detail = False, f"error: {exc!r}"
    dt = time.perf_counter() - t0
    if ok and dt > limit:
        ok, detail = False, f"{detail}; exceeded {limit:g}s"
    return CheckResult(num, title, ok, detail, dt, limit)


def run_all() -> list[CheckResult]:
    return [run_check(i) for i in range(1, len(CHECKS) + 1)]

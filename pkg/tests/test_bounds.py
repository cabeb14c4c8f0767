import itertools
from fractions import Fraction
from math import log2

import mpmath
import pytest

from daisyturan import bounds
from daisyturan.constructions import construct_independent_family, fano_complement
from daisyturan.hypergraph import blow_up, density


def mpf(x):
    with mpmath.workdps(40):
        return mpmath.mpf(x.numerator) / x.denominator


def qp_oracle(q, m=0):
    """(q^-(m+1); q^-1)_inf computed by mpmath's q-Pochhammer symbol."""
    with mpmath.workdps(40):
        return mpmath.qp(mpmath.mpf(q) ** -(m + 1), mpmath.mpf(1) / q)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 16])
@pytest.mark.parametrize("m", [0, 1, 3])
def test_euler_product_against_qpochhammer(q, m):
    lo, hi = bounds.euler_product_bounds(q, m, 1e-12)
    ref = qp_oracle(q, m)
    with mpmath.workdps(40):
        assert mpf(lo) - mpmath.mpf(10) ** -35 <= ref <= mpf(hi) + mpmath.mpf(10) ** -35
    assert float(hi - lo) < 1e-12
    assert abs(bounds.euler_product(q, m, 1e-9) - ref) < 1e-9


def test_euler_examples():
    b2 = bounds.euler_product(2, 0, 1e-9)
    assert 0.2887880 <= b2 <= 0.2887882
    assert mpmath.nstr(b2, 9) == "0.288788095"
    assert 0.5601 <= bounds.euler_product(3, 0, 1e-9) <= 0.5602


def test_euler_series_at_q16():
    q = 16
    for m in (0, 1, 2):
        val = bounds.euler_product(q, m, 1e-15)
        approx = 1 - Fraction(1, q ** (m + 1)) - Fraction(1, q ** (m + 2))
        # the next terms are -q^-(m+3) and +q^-(2m+3)
        assert abs(val - bounds._mpf(approx)) <= 2 * mpmath.mpf(q) ** -(m + 3)


def test_euler_monotone_in_q():
    vals = [bounds.euler_product(q) for q in (2, 3, 4, 5, 7, 8, 9)]
    assert vals == sorted(vals) and len(set(vals)) == len(vals)


def test_turan_and_decaen():
    assert bounds.turan_upper(4) == Fraction(2, 3)
    assert bounds.turan_upper(5) == Fraction(3, 4)
    assert bounds.decaen_upper(4) == Fraction(2, 3)
    assert bounds.decaen_upper(5) == Fraction(5, 6)
    assert bounds.decaen_upper(3) == 0


def test_turan_graph_link_sanity():
    # the complete 3-partite graph on 12 vertices is K_4-free with density 8/11
    parts = [v % 3 for v in range(12)]
    edges = {(u, v) for u, v in itertools.combinations(range(12), 2) if parts[u] != parts[v]}
    assert not any(all(p in edges for p in itertools.combinations(Q, 2)) for Q in itertools.combinations(range(12), 4))
    dens = Fraction(len(edges), 66)
    assert dens == Fraction(8, 11)
    assert abs(dens - bounds.turan_upper(4)) <= Fraction(1, 11)


def test_aks():
    lo, hi = bounds.aks_bounds(2)
    assert lo == 0.125 and hi == Fraction(1, 3)
    lo, hi = bounds.aks_bounds(6)
    assert lo == 3 / 256 and hi == Fraction(1, 7)
    for d in list(range(1, 200)) + [1000, 5000, 10000]:
        lo, hi = bounds.aks_bounds(d)
        assert 0 < lo < mpf(hi)
    lo, _ = bounds.aks_bounds(30)
    assert abs(float(lo) - log2(32) / 2**32) < 1e-20


def test_blowup_bound():
    assert bounds.blowup_density_bound(2, 3) == Fraction(3, 16)
    assert bounds.blowup_density_bound(2, 2) == Fraction(1, 4)
    assert density(blow_up(fano_complement(), 2)) >= bounds.blowup_density_bound(2, 3)
    assert bounds.blowup_density_bound(2, 4) <= density(construct_independent_family(2, 4))


def test_prime_powers():
    assert bounds.largest_prime_power_leq(4) == 4
    assert bounds.largest_prime_power_leq(6) == 5
    assert bounds.largest_prime_power_leq(10) == 9
    assert bounds.q_of_d(8) == 3 and bounds.q_of_d(9) == 3 and bounds.q_of_d(7) == 2
    assert bounds.q_of_d(5) is None


def test_master_bound():
    assert all(bounds.passes_suff(d) for d in range(8, 201))
    assert not bounds.passes_suff(6) and not bounds.passes_suff(7)
    lo, hi = bounds.euler_product_bounds(3, 0, 1e-15)
    assert lo > Fraction(5, 9) > Fraction(1, 2)
    g9 = bounds.master_bound(9)
    assert abs(g9 - 0.0880) < 5e-4
    # constant q(d) plateaus: bound non-increasing in d
    for d in range(8, 150):
        if bounds.q_of_d(d) == bounds.q_of_d(d + 1):
            assert bounds.master_bound(d + 1) <= bounds.master_bound(d)


def test_tables():
    rows = bounds.theorem_bound_table("gamma-master", range(8, 21))
    assert len(rows) == 13 and all(r.extra["passes"] for r in rows)
    rows = bounds.theorem_bound_table("euler", [2, 3, 4, 5, 7, 8, 9])
    vals = [r.value for r in rows]
    assert vals == sorted(vals)
    assert bounds.theorem_bound_table("turan", []) == []
    assert bounds.bound_table_csv([]) == "value,rational,citation\n"
    with pytest.raises(ValueError):
        bounds.theorem_bound_table("nope", [1])


def test_csv_layout():
    text = bounds.bound_table_csv(bounds.theorem_bound_table("blowup", [(2, 3)]))
    header, row = text.strip().split("\n")
    assert header == "q,r,value,rational,citation"
    assert row.split(",")[:4] == ["2", "3", "0.1875", "3/16"]
    text = bounds.bound_table_csv(bounds.theorem_bound_table("special-t", [(2, 2, 1)]))
    assert text.split("\n")[1].startswith("2,2,1,9,9/1")


@pytest.mark.parametrize("kind", bounds.BOUND_KINDS)
def test_every_kind_emits(kind):
    values = {
        "blowup": [(2, 3)],
        "special-t": [(2, 2, 1)],
        "independent-limit": [(2, 1)],
    }.get(kind, [8, 9])
    rows = bounds.theorem_bound_table(kind, values)
    assert len(rows) == len(values)
    assert bounds.bound_table_csv(rows).count("\n") == len(values) + 1

"""Commuting counts over Z/p^n: closed forms against the brute oracle, the
valuation-class lifting structure, and the exact density comparisons.
"""

from fractions import Fraction

import pytest

from commucount.errors import BudgetExceeded, NotPrime
from commucount.oracle import (
    WorkBudget,
    brute_padic_solutions,
    brute_valuation_classes,
)
from commucount.padic import (
    PadicParams,
    PadicBreakdown,
    degenerate_padic_count,
    density_deviation,
    fast_padic_count,
    inclusion_exclusion_breakdown,
    s_n0_formula,
    sigma_p,
    theorem13_main,
    valuation,
    valuation_classes_fast,
)


def test_params_validation():
    with pytest.raises(NotPrime):
        PadicParams(4, 1)
    with pytest.raises(NotPrime):
        PadicParams(1, 1)
    with pytest.raises(ValueError):
        PadicParams(2, 0)
    with pytest.raises(ValueError):
        PadicParams(2, 64)
    assert PadicParams(3, 2).q == 9


def test_valuation():
    pp = PadicParams(3, 4)  # q = 81
    assert valuation(1, pp) == 0
    assert valuation(6, pp) == 1
    assert valuation(54, pp) == 3
    assert valuation(81, pp) == 4  # the zero residue caps at n
    assert valuation(81 + 9, pp) == 2


@pytest.mark.parametrize(
    "p, n, expected",
    [(2, 1, 21), (2, 2, 336), (3, 1, 104), (2, 3, 5376)],
)
def test_class0_closed_form(p, n, expected):
    assert s_n0_formula(PadicParams(p, n)) == expected


def test_class0_formula_is_the_product_form():
    # p^{4n} (1 + 1/p)(1 - 1/p^3), blown up to integers.
    for p in (2, 3, 5, 7):
        for n in (1, 2, 3):
            want = Fraction(p) ** (4 * n) * (1 + Fraction(1, p)) * (1 - Fraction(1, p**3))
            assert s_n0_formula(PadicParams(p, n)) == want


def test_inclusion_exclusion_breakdown():
    bd = inclusion_exclusion_breakdown(PadicParams(2, 1))
    assert bd == PadicBreakdown(12, 6, 3, 21)
    for p, n in ((2, 2), (3, 1), (5, 2), (7, 3)):
        bd = inclusion_exclusion_breakdown(PadicParams(p, n))
        assert 3 * bd.u0 - 3 * bd.u1 + bd.u2 == bd.s_n0 == s_n0_formula(PadicParams(p, n))
        # u_k = u_0 * ((p-1)/p)^k exactly
        assert bd.u1 * p == bd.u0 * (p - 1)
        assert bd.u2 * p == bd.u1 * (p - 1)


@pytest.mark.parametrize(
    "p, n, expected",
    [(2, 1, 88), (2, 2, 6400), (3, 1, 945)],
)
def test_fast_count_examples(p, n, expected):
    assert fast_padic_count(PadicParams(p, n)) == expected


@pytest.mark.parametrize(
    "p, n",
    [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1), (11, 1)],
)
def test_fast_count_equals_oracle(p, n):
    pp = PadicParams(p, n)
    assert fast_padic_count(pp) == p ** (2 * n) * brute_padic_solutions(p, n)


def test_class_counts_match_oracle_and_lift():
    for p, n in ((2, 2), (2, 3), (3, 2)):
        brute = brute_valuation_classes(p, n)
        fast = valuation_classes_fast(PadicParams(p, n))
        for h in range((n + 1) // 2):
            lifted = p ** (6 * h) * s_n0_formula(PadicParams(p, n - 2 * h))
            assert brute.classes[h] == lifted == fast.classes[h]
        deep = sum(v for h, v in brute.classes.items() if h >= (n + 1) // 2)
        assert deep == fast.residual == p ** (6 * (n // 2))
        assert brute.total() == fast.total()


def test_classes_at_2_3_by_value():
    brute = brute_valuation_classes(2, 3)
    assert brute.classes == {0: 5376, 1: 1344, 2: 63, 3: 1}
    fast = valuation_classes_fast(PadicParams(2, 3))
    assert fast.classes == {0: 5376, 1: 1344}
    assert fast.residual == 64


def test_sigma_p_values():
    assert sigma_p(2) == Fraction(7, 4)
    assert sigma_p(3) == Fraction(13, 9)
    assert sigma_p(13) == Fraction(183, 169)
    with pytest.raises(NotPrime):
        sigma_p(9)


def test_main_term_examples():
    assert theorem13_main(PadicParams(2, 1)) == Fraction(21, 16)
    assert theorem13_main(PadicParams(2, 2)) == Fraction(21, 16)
    # and it climbs to sigma_p as n grows
    assert theorem13_main(PadicParams(2, 9)) < sigma_p(2)
    gap = sigma_p(2) - theorem13_main(PadicParams(2, 9))
    assert gap == Fraction(7, 4) * Fraction(1, 2**10)


def test_density_deviation_exact_law():
    """The exact distance between density and main term: p^-n for even n,
    p^-(n+3) for odd n."""
    for p in (2, 3, 5, 7):
        for n in range(1, 7):
            dev = density_deviation(PadicParams(p, n))
            want = Fraction(1, p**n) if n % 2 == 0 else Fraction(1, p ** (n + 3))
            assert dev == want


def test_density_deviation_inside_stated_envelope():
    # dev <= 4 n^2 p^{-n/2}, squared to stay in integers.
    for p in (2, 3, 5, 11, 31):
        for n in range(1, 9):
            dev = density_deviation(PadicParams(p, n))
            assert dev * dev * p**n <= 16 * n**4


def test_degenerate_count_examples():
    assert degenerate_padic_count(PadicParams(2, 1)) == 20
    assert degenerate_padic_count(PadicParams(2, 2)) == 304
    assert degenerate_padic_count(PadicParams(3, 1)) == 81
    assert degenerate_padic_count(PadicParams(5, 1)) == 425


def test_degenerate_stays_under_bound():
    # count^2 <= 16 n^4 q^7, the integer form of count <= 4 n^2 q^{7/2}.
    for p, n in ((2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1)):
        c = degenerate_padic_count(PadicParams(p, n))
        q = p**n
        assert c * c <= 16 * n**4 * q**7


def test_degenerate_budget_passthrough():
    with pytest.raises(BudgetExceeded):
        degenerate_padic_count(PadicParams(2, 4), WorkBudget(10**5))


def test_densities_monotone_in_n():
    # fast_padic_count / p^{6n} increases with n towards sigma_p.
    for p in (2, 3):
        densities = [
            Fraction(fast_padic_count(PadicParams(p, n)), p ** (6 * n))
            for n in range(1, 10)
        ]
        assert all(a < b for a, b in zip(densities, densities[1:]))
        assert densities[-1] < sigma_p(p)

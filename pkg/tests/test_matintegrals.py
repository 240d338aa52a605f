import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from artifact.matintegrals import (
    EpsilonKind,
    D_closed,
    D_mc_oracle,
    D_mc_oracle_many,
    D_plus,
    constant_exact,
    constantine_ratio,
    selberg_normalization,
    spectral_constant,
)
from artifact.ratfun import RatFun
from artifact.selberg import f_closed
from artifact.special import gamma_pole_order

s = RatFun.s()


def test_epsilon_weights():
    assert [EpsilonKind("cos").weight(b) for b in range(5)] == [1, 0, -1, 0, 1]
    assert [EpsilonKind("sin").weight(b) for b in range(5)] == [0, 1, 0, -1, 0]
    assert [EpsilonKind("sgn").weight(b) for b in range(3)] == [1, -1, 1]
    with pytest.raises(ValueError):
        EpsilonKind("tan")


def test_spectral_constant_examples():
    assert spectral_constant(1).value(0) == pytest.approx(1.0, rel=1e-14)
    # c(2) = 2 pi^2 / (4 Gamma_2(2)) with Gamma_2(2) = sqrt(pi) Gamma(2) Gamma(3/2) = pi/2
    assert spectral_constant(2).value(0) == pytest.approx(math.pi, rel=1e-14)
    assert gamma_pole_order(spectral_constant(3), Fraction(5, 2)) == 0


@pytest.mark.parametrize("n", range(1, 7))
def test_constant_reduction_matches_gamma_value(n):
    assert constant_exact(n).value(0) == pytest.approx(spectral_constant(n).value(0), rel=1e-13)


def test_D_examples():
    d1 = D_closed(1, "abs")
    assert d1.exact * constant_exact(1).prefactor == 2 / (s + 1)
    assert D_closed(3, "sgn").identically_zero
    assert D_closed(2, "abs").value(0) == pytest.approx(math.pi * 4 / 3, rel=1e-14)


@pytest.mark.parametrize("n", range(1, 7))
@pytest.mark.parametrize("kind", ["abs", "sgn", "cos", "sin"])
def test_numerator_is_constant(n, kind):
    r = D_closed(n, kind)
    if not r.identically_zero:
        assert r.exact.num.degree == 0


@pytest.mark.parametrize("n", range(1, 9))
def test_cos_sin_parity(n):
    cos = D_closed(n, "cos")
    sin = D_closed(n, "sin")
    if n % 4 == 0:
        assert sin.identically_zero and not cos.identically_zero
    elif n % 4 == 2:
        assert cos.identically_zero and not sin.identically_zero
    else:
        assert not cos.identically_zero and not sin.identically_zero


@pytest.mark.parametrize("n", range(1, 5))
def test_consistency_with_f(n):
    sign = (-1) ** (n * (n - 1) // 2)
    c = constant_exact(n)
    for k in (0, 2, 4):
        e = tuple(k + j for j in range(1, n + 1))
        assert D_closed(n, "abs").exact(k) == sign * f_closed(e).re
        assert D_closed(n, "abs").constant == c
    if n % 2 == 0:
        for k in (1, 3):
            e = tuple(k + j for j in range(1, n + 1))
            assert D_closed(n, "sgn").exact(k) == sign * f_closed(e).re


def test_D_plus_one_dimensional():
    g = D_plus(1)
    for x in (0, 1, 2, Fraction(5, 2)):
        assert g.value(x) == pytest.approx(1 / (float(x) + 1), rel=1e-13)


def test_D_plus_is_positive_part_volume():
    mean, err = D_mc_oracle(2, "plus", 0.0, 200_000, seed=11)
    assert abs(mean - D_closed(2, "plus").value(0)) <= 4 * err


def test_mc_examples():
    mean, err = D_mc_oracle(1, "abs", 0.0, 100_000, seed=3)
    assert abs(mean - 2) <= 4 * err + 1e-12
    mean, err = D_mc_oracle(2, "cos", 1.0, 200_000, seed=3)
    assert abs(mean - D_closed(2, "cos").value(1)) <= 4 * err


def test_mc_is_independent_of_workers():
    a = D_mc_oracle_many(2, ["abs", "sgn"], [0, 1], 50_000, seed=5, workers=1)
    b = D_mc_oracle_many(2, ["abs", "sgn"], [0, 1], 50_000, seed=5, workers=4)
    assert a == b


def test_mc_refuses_large_n():
    with pytest.raises(ValueError):
        D_mc_oracle(5, "abs", 0.0, 10, seed=0)


def test_selberg_normalization_examples():
    assert selberg_normalization(1, 0, 0).value(0) == pytest.approx(1.0, rel=1e-14)
    assert selberg_normalization(1, 1, 0).value(0) == pytest.approx(0.5, rel=1e-14)
    # |x - y| is symmetric, so integrate x - y over the triangle y < x and double
    quad, _ = integrate.dblquad(lambda y, x: x - y, 0, 1, 0, lambda x: x, epsabs=1e-13)
    quad *= 2
    assert selberg_normalization(2, 0, 0).value(0) == pytest.approx(quad, rel=1e-8)
    assert selberg_normalization(2, 0, 0).value(0) == pytest.approx(1 / 3, rel=1e-14)


@given(st.fractions(min_value=-0.75, max_value=3, max_denominator=4),
       st.fractions(min_value=-0.75, max_value=3, max_denominator=4))
def test_selberg_normalization_one_dimensional_is_beta(a, b):
    expected = math.gamma(a + 1) * math.gamma(b + 1) / math.gamma(a + b + 2)
    assert selberg_normalization(1, a, b).value(0) == pytest.approx(expected, rel=1e-12)


def test_selberg_normalization_two_dimensional_quadrature():
    a, b = 1.5, 0.5
    quad, _ = integrate.dblquad(
        lambda y, x: (x - y) * (x * y) ** a * ((1 - x) * (1 - y)) ** b, 0, 1, 0, lambda x: x, epsabs=1e-13
    )
    quad *= 2
    assert selberg_normalization(2, Fraction(3, 2), Fraction(1, 2)).value(0) == pytest.approx(quad, rel=1e-8)


def test_constantine_examples():
    g = constantine_ratio(1, 0, [0])
    for x in (0, 1, Fraction(7, 2)):
        assert g.value(x) == pytest.approx(D_plus(1).value(x), rel=1e-13)
    g = constantine_ratio(3, Fraction(-1, 2), [0, 0, 0])
    assert g.numerator_pole_order(-4) == 2
    assert g.denominator_pole_order(-4) == 1
    assert gamma_pole_order(g, -4) == 1
    assert gamma_pole_order(constantine_ratio(3, Fraction(-1, 2), [1, 1, 1]), -4) <= 1


def test_constantine_kappa_zero_matches_positive_part():
    # kappa = 0 and alpha = 0 reduce to the multivariate Beta of the positive chamber
    for n in (1, 2, 3):
        g = constantine_ratio(n, 0, [0] * n)
        for x in (0, 1, Fraction(3, 2)):
            assert g.value(x) == pytest.approx(D_plus(n).value(x), rel=1e-12)


def test_D_plus_matches_mc_volume_three():
    rng_mean, err = D_mc_oracle(3, "plus", 1.0, 200_000, seed=2)
    assert abs(rng_mean - D_plus(3).value(1)) <= 4 * err
    assert np.isfinite(err) and err > 0

"""Coefficient arithmetic against pointwise evaluation on the circle."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isowave.trigpoly import TrigPoly, random_poly

RNG = np.random.default_rng(1234)
CIRCLE = np.exp(2j * np.pi * np.linspace(0.0, 1.0, 37)[:-1])


def coeff_lists(max_len=7):
    c = st.complex_numbers(min_magnitude=0, max_magnitude=5, allow_nan=False,
                           allow_infinity=False)
    return st.lists(c, min_size=1, max_size=max_len)


def test_canonical_form_trims_and_zero():
    p = TrigPoly(-3, [0.0, 0.0, 2.0, 1.0, 0.0])
    assert p.kmin == -1 and p.kmax == 0
    assert TrigPoly(5, [0.0, 1e-15]).is_zero
    assert TrigPoly.zero().is_zero and TrigPoly.zero().kmin == 0


def test_evaluation_matches_definition():
    p = TrigPoly(-2, [1.0, 2.0j, -0.5])
    z = CIRCLE
    direct = 1.0 * z ** -2 + 2.0j * z ** -1 - 0.5
    assert np.max(np.abs(p(z) - direct)) < 1e-13


@settings(max_examples=60, deadline=None)
@given(coeff_lists(), coeff_lists(), st.integers(-5, 5), st.integers(-5, 5))
def test_ring_ops_pointwise(ca, cb, ka, kb):
    p, q = TrigPoly(ka, ca), TrigPoly(kb, cb)
    scale = max(p.norm_inf(), q.norm_inf(), 1.0)
    assert np.max(np.abs((p + q)(CIRCLE) - (p(CIRCLE) + q(CIRCLE)))) < 1e-10 * scale
    assert np.max(np.abs((p * q)(CIRCLE) - p(CIRCLE) * q(CIRCLE))) < 1e-9 * scale ** 2


@settings(max_examples=60, deadline=None)
@given(coeff_lists(), st.integers(-5, 5))
def test_star_is_circle_conjugation(c, k):
    p = TrigPoly(k, c)
    assert np.max(np.abs(p.star()(CIRCLE) - np.conj(p(CIRCLE)))) < 1e-10


@settings(max_examples=40, deadline=None)
@given(coeff_lists(), st.integers(-4, 4), st.integers(2, 4))
def test_compose_power_pointwise(c, k, n):
    p = TrigPoly(k, c)
    assert np.max(np.abs(p.compose_power(n)(CIRCLE) - p(CIRCLE ** n))) < 1e-10


def test_star_involution_and_products():
    for _ in range(20):
        p = random_poly(RNG, int(RNG.integers(0, 8)))
        q = random_poly(RNG, int(RNG.integers(0, 8)))
        assert (p.star().star() - p).norm_inf() == 0.0
        assert ((p * q).star() - q.star() * p.star()).norm_inf() < 1e-12


def test_monomial_and_coeff_lookup():
    p = TrigPoly.monomial(-4, 3.0)
    assert p.coeff(-4) == 3.0 and p.coeff(0) == 0.0
    assert p.kmin == p.kmax == -4


def test_subtraction_cancels_exactly():
    p = random_poly(RNG, 6)
    assert (p - p).is_zero


def test_immutability():
    p = TrigPoly(0, [1.0, 2.0])
    with pytest.raises(AttributeError):
        p.kmin = 3
    with pytest.raises(ValueError):
        p.coeffs[0] = 9.0

"""Branch inner product, unit filters, banks, mirrors, and file round trips."""

import json

import numpy as np
import pytest

from isowave.errors import CheckError
from isowave.filterbank import (FilterBank, branch_inner, daubechies4_lowpass,
                                haar_bank, haar_highpass, haar_lowpass,
                                is_filter_bank, is_unit_filter, load_filter,
                                modulate_highpass, quadrature_mirror,
                                right_action, save_filter)
from isowave.trigpoly import TrigPoly, random_poly

from oracles import branch_inner_sampled

RNG = np.random.default_rng(7)
SAMPLES = np.exp(2j * np.pi * np.arange(64) / 64)


def oracle_check(xi, eta, branches, result):
    """Compare the coefficient result against preimage-averaged sampling."""
    want = branch_inner_sampled(xi, eta, branches)
    got = result(SAMPLES)
    assert np.max(np.abs(got - want)) < 1e-11 * max(1.0, xi.norm_inf() * eta.norm_inf())


# ------------------------------------------------------------ inner product

def test_inner_constant_identity():
    one = TrigPoly.one()
    assert branch_inner(one, one, 2) == TrigPoly.one()


def test_inner_haar_is_unit_vector():
    m = haar_lowpass()
    inner = branch_inner(m, m, 2)
    assert (inner - TrigPoly.one()).norm_inf() < 1e-15
    oracle_check(m, m, 2, inner)


def test_inner_haar_pair_orthogonal():
    m1, m2 = haar_lowpass(), haar_highpass()
    inner = branch_inner(m1, m2, 2)
    assert inner.is_zero
    oracle_check(m1, m2, 2, inner)


def test_inner_matches_sampling_oracle_random():
    for _ in range(15):
        n = int(RNG.integers(2, 5))
        xi = random_poly(RNG, int(RNG.integers(0, 12)))
        eta = random_poly(RNG, int(RNG.integers(0, 12)))
        oracle_check(xi, eta, n, branch_inner(xi, eta, n))


def test_inner_sesquilinear_and_positive():
    for _ in range(15):
        xi = random_poly(RNG, 20)
        eta = random_poly(RNG, 20)
        zeta = random_poly(RNG, 10)
        lam = complex(RNG.standard_normal(), RNG.standard_normal())
        lin = branch_inner(xi, lam * eta + zeta, 2) \
            - lam * branch_inner(xi, eta, 2) - branch_inner(xi, zeta, 2)
        assert lin.norm_inf() < 1e-12 * max(1.0, xi.norm_inf())
        conj = branch_inner(lam * xi, eta, 2) - np.conj(lam) * branch_inner(xi, eta, 2)
        assert conj.norm_inf() < 1e-12 * max(1.0, xi.norm_inf())
        vals = branch_inner(xi, xi, 2)(SAMPLES)
        assert np.min(vals.real) > -1e-12
        assert np.max(np.abs(vals.imag)) < 1e-12


def test_bimodule_identities_exact():
    for _ in range(15):
        n = int(RNG.integers(2, 4))
        xi = random_poly(RNG, 8)
        eta = random_poly(RNG, 8)
        a = random_poly(RNG, 5)
        lhs = branch_inner(xi, right_action(eta, a, n), n)
        rhs = branch_inner(xi, eta, n) * a
        assert (lhs - rhs).norm_inf() < 1e-12 * max(1.0, a.norm_inf())
        lhs2 = branch_inner(a * xi, eta, n)
        rhs2 = branch_inner(xi, a.star() * eta, n)
        assert (lhs2 - rhs2).norm_inf() == 0.0


# ------------------------------------------------------------- unit filters

def test_unit_filter_examples():
    assert is_unit_filter(TrigPoly.one(), 2).residual == 0.0
    assert is_unit_filter(haar_lowpass(), 2).residual < 1e-15
    bad = is_unit_filter(TrigPoly(0, [1.0, 1.0]), 2)
    assert not bad.passed
    assert abs(bad.residual - 1.0) < 1e-15    # <m, m> = 2


def test_unit_filter_daubechies():
    assert is_unit_filter(daubechies4_lowpass(), 2).residual < 1e-15


# ------------------------------------------------------------------- banks

def test_haar_bank_passes():
    rep = is_filter_bank(haar_bank())
    assert rep.passed
    assert rep.gram_residuals.max() < 1e-15
    assert rep.reconstruction_residual < 1e-15


def test_monomial_bank_passes():
    rep = is_filter_bank(FilterBank(2, [TrigPoly.one(), TrigPoly.monomial(1)]))
    assert rep.passed and rep.reconstruction_residual == 0.0


def test_sign_modulated_haar_bank():
    # (1-z)/sqrt2 is the theta = -1 modulation of the mirror high pass;
    # the sampling oracle confirms orthogonality, pinned here as regression.
    m1 = haar_lowpass()
    m2 = TrigPoly(0, [1, -1]) / np.sqrt(2)
    inner = branch_inner(m1, m2, 2)
    assert inner.is_zero
    assert np.max(np.abs(branch_inner_sampled(m1, m2, 2))) < 1e-12
    assert is_filter_bank(FilterBank(2, [m1, m2])).passed


def test_bank_count_mismatch():
    with pytest.raises(CheckError) as err:
        is_filter_bank(FilterBank(2, [haar_lowpass()]))
    assert err.value.code == "COUNT_MISMATCH"


def test_incomplete_orthonormal_family_fails():
    # a single unit vector is orthonormal but cannot reconstruct
    rep = is_filter_bank(FilterBank(2, [haar_lowpass(), TrigPoly.zero()]))
    assert not rep.passed


# ------------------------------------------------------------------ mirrors

def test_mirror_haar():
    assert (quadrature_mirror(haar_lowpass()) - haar_highpass()).norm_inf() == 0.0


def test_mirror_monomial():
    for k in range(-3, 4):
        m2 = quadrature_mirror(TrigPoly.monomial(k))
        assert (m2 - TrigPoly.monomial(1 - k, (-1.0) ** k)).norm_inf() == 0.0


def test_mirror_daubechies_bank():
    m1 = daubechies4_lowpass()
    rep = is_filter_bank(FilterBank(2, [m1, quadrature_mirror(m1)]))
    assert rep.passed
    assert max(rep.gram_residuals.max(), rep.reconstruction_residual) < 1e-12


def test_mirror_rejects_non_unit():
    with pytest.raises(CheckError) as err:
        quadrature_mirror(TrigPoly(0, [1.0, 1.0]))
    assert err.value.code == "NOT_UNIT"


def test_mirror_of_random_unit_filters():
    # unit filters generated inside the unit sphere: unimodular monomial
    # times Haar (modulations of the form theta(z^2) stay in this family)
    for _ in range(10):
        k = int(RNG.integers(-4, 5))
        phase = np.exp(2j * np.pi * RNG.random())
        m1 = TrigPoly.monomial(k, phase) * haar_lowpass()
        assert is_unit_filter(m1, 2).passed
        assert is_filter_bank(FilterBank(2, [m1, quadrature_mirror(m1)])).passed


# -------------------------------------------------------------- modulation

def test_modulate_identity_and_sign():
    m2 = haar_highpass()
    assert (modulate_highpass(m2, TrigPoly.one()) - m2).norm_inf() == 0.0
    assert (modulate_highpass(m2, TrigPoly(0, [-1.0])) + m2).norm_inf() == 0.0


def test_modulate_by_z():
    m2 = modulate_highpass(haar_highpass(), TrigPoly.monomial(1))
    want = TrigPoly(2, np.array([-1.0, 1.0]) / np.sqrt(2))   # (z^3 - z^2)/sqrt2
    assert (m2 - want).norm_inf() < 1e-15
    assert is_filter_bank(FilterBank(2, [haar_lowpass(), m2])).passed


def test_modulate_rejects_non_unimodular():
    with pytest.raises(CheckError) as err:
        modulate_highpass(haar_highpass(), TrigPoly(0, [1.0, 1.0]))
    assert err.value.code == "NOT_UNIMODULAR"


# ------------------------------------------------------------------- files

def test_filter_roundtrip(tmp_path):
    path = tmp_path / "f.json"
    save_filter(path, daubechies4_lowpass(), 2)
    loaded = load_filter(path)
    assert loaded.branch_count == 2
    assert (loaded.poly - daubechies4_lowpass()).norm_inf() < 1e-15


def test_filter_mallat_normalization_converted(tmp_path):
    path = tmp_path / "f.json"
    mallat = haar_lowpass() / np.sqrt(2)     # value 1 at z = 1
    path.write_text(json.dumps({
        "branch_count": 2, "kmin": 0, "normalization": "mallat",
        "coeffs": [[c.real, c.imag] for c in mallat.coeffs]}))
    loaded = load_filter(path)
    assert loaded.original_normalization == "mallat"
    assert (loaded.poly - haar_lowpass()).norm_inf() < 1e-15

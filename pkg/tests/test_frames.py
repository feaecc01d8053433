"""Tight frames from partitions of unity: quasi-basis identities."""

import numpy as np
import pytest

from isowave.errors import CheckError
from isowave.filterbank import partition_frame
from isowave.trigpoly import TrigPoly


def test_reconstructs_monomial_two_branches():
    frame = partition_frame(2, 0.1)
    assert frame.reconstruction_residual(TrigPoly.monomial(3)) <= 1e-3
    assert frame.report["partition_sup_error"] <= 1e-3


def test_zero_reconstructs_exactly():
    frame = partition_frame(2, 0.1)
    assert frame.reconstruct(TrigPoly.zero()).is_zero


def test_three_branches_constant():
    frame = partition_frame(3, 0.05)
    assert frame.reconstruction_residual(TrigPoly.one()) <= 1e-3


def test_quasi_basis_identities_on_monomials():
    frame = partition_frame(2, 0.2)
    for k in range(-8, 9):
        xi = TrigPoly.monomial(k)
        assert frame.reconstruction_residual(xi) <= 1e-3
        assert frame.frame_identity_residual(xi) <= 1e-3


def test_vector_count_exceeds_branches():
    frame = partition_frame(2, 0.1)
    assert len(frame.vectors) >= 3


def test_bad_overlap_rejected():
    # support (1 + overlap)/arcs must stay under 1/branches of the circle
    with pytest.raises(CheckError) as err:
        partition_frame(2, 0.9, arcs=3)
    assert err.value.code == "BAD_OVERLAP"
    with pytest.raises(CheckError) as err:
        partition_frame(2, 0.0)
    assert err.value.code == "BAD_OVERLAP"
    with pytest.raises(CheckError) as err:
        partition_frame(3, 0.1, arcs=3)
    assert err.value.code == "BAD_OVERLAP"


def test_explicit_degree_reports_larger_error():
    coarse = partition_frame(2, 0.1, degree=32)
    fine = partition_frame(2, 0.1)
    assert coarse.report["partition_sup_error"] > fine.report["partition_sup_error"]

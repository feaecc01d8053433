"""Scale isometries S xi = m(z) xi(z**N) on trigonometric polynomials.

All relations here are exact coefficient identities: the adjoint extracts
the N-divisible modes of conj(m)*eta, so S* S xi = <m, m> . xi and the
Cuntz relations for a filter bank hold to rounding error.  Degree
bookkeeping is asserted on every application.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CheckError
from .filterbank import FilterBank, branch_inner, right_action
from .trigpoly import TrigPoly, random_poly


@dataclass(frozen=True)
class ScaleIsometry:
    """Multiplication by a filter after the substitution z -> z**N."""

    filter: TrigPoly
    branch_count: int

    def apply(self, xi: TrigPoly) -> TrigPoly:
        """S xi = m(z) * xi(z**N), exact; modes land in [N a + c, N b + d]."""
        out = self.filter * xi.compose_power(self.branch_count)
        if not (xi.is_zero or self.filter.is_zero or out.is_zero):
            n, m = self.branch_count, self.filter
            assert out.kmin >= n * xi.kmin + m.kmin
            assert out.kmax <= n * xi.kmax + m.kmax
        return out

    def apply_adjoint(self, eta: TrigPoly) -> TrigPoly:
        """S* eta = N-divisible-mode part of conj(m) * eta, divided out.

        This is the L2(circle) adjoint: coefficient pairing makes
        <S xi, eta> = <xi, S* eta> an exact identity.
        """
        return branch_inner(self.filter, eta, self.branch_count)


def power_multiplier(m1: TrigPoly, k: int) -> TrigPoly:
    """Multiplier M_k(z) = prod_{j<k} m1(z**(2**j)) with S^k xi = M_k . xi(z**(2**k)).

    Only the 2-branch case composes like this; the unit-filter normalisation
    of ``m1`` keeps the powers isometric with no extra scale factor.
    """
    if k < 0:
        raise CheckError("BAD_POWER", "k must be nonnegative")
    acc = TrigPoly.one()
    for j in range(k):
        acc = acc * m1.compose_power(2 ** j)
    return acc


# ----------------------------------------------------------------- reports

@dataclass
class CuntzReport:
    passed: bool
    isometry_residual: float        # worst |S_i* S_j xi - delta_ij xi|
    completeness_residual: float    # worst |sum_i S_i S_i* xi - xi|
    tol: float
    trials: int
    max_degree: int
    seed: int

    def to_dict(self):
        return {
            "passed": self.passed,
            "isometry_residual": self.isometry_residual,
            "completeness_residual": self.completeness_residual,
            "tol": self.tol,
            "trials": self.trials,
            "max_degree": self.max_degree,
            "seed": self.seed,
        }


@dataclass
class CovarianceReport:
    passed: bool
    intertwine_residual: float      # worst |(a o T).(S_i xi) - S_i(a xi)|
    inner_residual: float           # |(a o T).xi - sum_i S_i(a . S_i* xi)|
    tol: float

    def to_dict(self):
        return {
            "passed": self.passed,
            "intertwine_residual": self.intertwine_residual,
            "inner_residual": self.inner_residual,
            "tol": self.tol,
        }


def _bank_isometries(bank: FilterBank) -> list[ScaleIsometry]:
    if len(bank.filters) != bank.branch_count:
        raise CheckError("NOT_A_BANK",
                         f"{len(bank.filters)} filters for {bank.branch_count} branches")
    return [ScaleIsometry(m, bank.branch_count) for m in bank.filters]


def cuntz_relations_report(bank: FilterBank, trials: int = 20,
                           max_degree: int = 10, tol: float = 1e-12,
                           seed: int = 0) -> CuntzReport:
    """Test S_i* S_j = delta_ij and sum_i S_i S_i* = 1 on random vectors.

    This op *is* the detector, so it reports residuals instead of requiring
    the bank to be valid up front; NOT_A_BANK fires only on a structural
    count mismatch.  Test vectors are unit-sup-normalised so the residuals
    of a failing family are meaningful.
    """
    ops = _bank_isometries(bank)
    rng = np.random.default_rng(seed)
    iso = comp = 0.0
    for _ in range(trials):
        xi = random_poly(rng, rng.integers(0, max_degree + 1))
        if xi.is_zero:
            continue
        xi = xi / xi.norm_inf()
        for i, si in enumerate(ops):
            for j, sj in enumerate(ops):
                got = si.apply_adjoint(sj.apply(xi))
                want = xi if i == j else TrigPoly.zero()
                iso = max(iso, (got - want).norm_inf())
        acc = TrigPoly.zero()
        for si in ops:
            acc = acc + si.apply(si.apply_adjoint(xi))
        comp = max(comp, (acc - xi).norm_inf())
    return CuntzReport(iso <= tol and comp <= tol, iso, comp, tol,
                       trials, max_degree, seed)


def covariance_report(a: TrigPoly, bank: FilterBank, xi: TrigPoly,
                      tol: float = 1e-12) -> CovarianceReport:
    """Check the covariance identities tying symbols to the isometries.

    (a o T) . (S_i xi) = S_i (a . xi) for each i, and
    (a o T) . xi = sum_i S_i (a . (S_i* xi)),
    with (a o T)(z) = a(z**N) computed exactly as mode dilation.
    """
    ops = _bank_isometries(bank)
    n = bank.branch_count
    a_t = a.compose_power(n)
    inter = 0.0
    for si in ops:
        inter = max(inter, (a_t * si.apply(xi) - si.apply(a * xi)).norm_inf())
    acc = TrigPoly.zero()
    for si in ops:
        acc = acc + si.apply(a * si.apply_adjoint(xi))
    inner = (a_t * xi - acc).norm_inf()
    return CovarianceReport(inter <= tol and inner <= tol, inter, inner, tol)

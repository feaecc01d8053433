"""Transfer operators on the circle as exact Fourier-mode matrices.

For a weight D and the covering T z = z**N,

    (L_D f)(x) = sum_{T y = x} D(y) f(y),

which on modes reads (L_D f)_m = N * d_{N m - j} f_j: summing z^k over the
N preimage roots keeps exactly the N-divisible modes.  The dual acts on
truncated moment sequences of measures; a probability measure is fixed by
the dual iff it is quasi-invariant with the modular cocycle built from D.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import CheckError
from .trigpoly import TrigPoly


@dataclass(frozen=True)
class TransferMatrix:
    """Dense matrix of L_D on modes -M..M; entry[m, j] = N d_{N m - j}."""

    weight: TrigPoly
    branch_count: int
    mode_cutoff: int
    entries: np.ndarray

    def apply(self, f: TrigPoly) -> TrigPoly:
        """L_D f for deg f <= M, exact (no leakage by construction)."""
        m = self.mode_cutoff
        if not f.is_zero and (f.kmin < -m or f.kmax > m):
            raise CheckError("CUTOFF_TOO_SMALL",
                             f"input modes [{f.kmin}, {f.kmax}] exceed cutoff {m}")
        vec = np.zeros(2 * m + 1, dtype=np.complex128)
        if not f.is_zero:
            vec[f.kmin + m:f.kmax + m + 1] = f.coeffs
        return TrigPoly(-m, self.entries @ vec)

    def apply_dual(self, moments: np.ndarray) -> np.ndarray:
        """Moment update of the dual: (L* mu)_k = sum_m entries[m, k] mu_m.

        The pairing of measures with functions is bilinear, so the dual is
        the plain transpose (for real weights this coincides with the
        conjugate transpose on real moment vectors).
        """
        return self.entries.T @ moments

    def to_csv(self, path) -> None:
        m = self.mode_cutoff
        with open(path, "w") as fh:
            fh.write("row_mode,col_mode,re,im\n")
            for r in range(-m, m + 1):
                for c in range(-m, m + 1):
                    v = self.entries[r + m, c + m]
                    fh.write(f"{r},{c},{v.real!r},{v.imag!r}\n")


def build_transfer_matrix(weight: TrigPoly, branches: int,
                          mode_cutoff: int) -> TransferMatrix:
    """Assemble the mode matrix, refusing cutoffs that would leak.

    Degree-M inputs stay inside modes [-M, M] iff M (N - 1) >= deg(D); a
    smaller cutoff silently truncates output modes, so it is an error.
    """
    if branches < 2:
        raise CheckError("BAD_BRANCH_COUNT", "need at least 2 branches")
    m = mode_cutoff
    span = 0 if weight.is_zero else max(abs(weight.kmin), abs(weight.kmax))
    if m * (branches - 1) < span or m < span:
        raise CheckError(
            "CUTOFF_TOO_SMALL",
            f"cutoff {m} leaks for weight degree {span} with {branches} branches")
    rows = np.arange(-m, m + 1)
    entries = np.zeros((2 * m + 1, 2 * m + 1), dtype=np.complex128)
    for jj, j in enumerate(rows):
        ks = branches * rows - j
        entries[:, jj] = branches * np.array([weight.coeff(int(k)) for k in ks])
    return TransferMatrix(weight, branches, m, entries)


# ---------------------------------------------------------------- measures

@dataclass
class TorusMeasure:
    """Truncated moment sequence mu_k = integral of z^k, |k| <= cutoff."""

    moments: np.ndarray     # index k + cutoff
    cutoff: int

    def __post_init__(self):
        m = self.cutoff
        if len(self.moments) != 2 * m + 1:
            raise ValueError("moment vector length must be 2*cutoff + 1")
        if abs(self.moments[m] - 1.0) > 1e-9:
            raise ValueError("mu_0 must equal 1 for a probability measure")
        herm = self.moments - np.conj(self.moments[::-1])
        if np.max(np.abs(herm)) > 1e-9:
            warnings.warn("moments are not Hermitian-symmetric; measure not real")

    def moment(self, k: int) -> complex:
        if abs(k) > self.cutoff:
            raise CheckError("CUTOFF_TOO_SMALL", f"moment {k} beyond cutoff")
        return complex(self.moments[k + self.cutoff])

    def fejer_min(self, samples: int = 512) -> float:
        """Minimum of the Fejer smoothing on a grid; < 0 flags non-positivity."""
        m = self.cutoff
        ks = np.arange(-m, m + 1)
        taper = 1.0 - np.abs(ks) / (m + 1.0)
        s = np.arange(samples) / samples
        vals = (np.exp(-2j * np.pi * np.outer(s, ks)) @ (taper * self.moments)).real
        return float(vals.min())

    def check_positivity(self, tol: float = 1e-8) -> float:
        worst = self.fejer_min()
        if worst < -tol:
            warnings.warn(f"Fejer smoothing dips to {worst:.3g}; "
                          "truncated measure not positive at this cutoff")
        return worst


def lebesgue_measure(cutoff: int) -> TorusMeasure:
    mus = np.zeros(2 * cutoff + 1, dtype=np.complex128)
    mus[cutoff] = 1.0
    return TorusMeasure(mus, cutoff)


@dataclass
class FixedMeasureResult:
    measure: TorusMeasure
    eigenvalue: float
    residual: float
    iterations: int
    converged: bool


def fixed_measure(weight: TrigPoly, branches: int, mode_cutoff: int,
                  max_iter: int = 10_000, tol: float = 1e-12) -> FixedMeasureResult:
    """Power iteration for a fixed probability measure of the dual operator.

    Each step applies the transpose matrix and renormalises mu_0 to 1; the
    dominant-eigenvalue estimate is the mass created in one step.  On
    stochastic weights (sum of D over each fibre equal to 1) the eigenvalue
    is 1 and the fixed measure is quasi-invariant for the covering.
    No convergence after ``max_iter`` returns the best iterate flagged
    ``converged=False`` rather than raising.
    """
    tm = build_transfer_matrix(weight, branches, mode_cutoff)
    m = mode_cutoff
    mu = np.zeros(2 * m + 1, dtype=np.complex128)
    mu[m] = 1.0
    eig = 1.0
    iterations = max_iter
    converged = False
    for it in range(1, max_iter + 1):
        nxt = tm.apply_dual(mu)
        eig = float(nxt[m].real)
        if abs(nxt[m]) < 1e-300:
            raise CheckError("NO_MASS", "dual iteration annihilated the mass")
        nxt = nxt / nxt[m]
        delta = float(np.max(np.abs(nxt - mu)))
        mu = nxt
        if delta <= tol:
            iterations = it
            converged = True
            break
    residual = float(np.max(np.abs(tm.apply_dual(mu) - mu)))
    measure = TorusMeasure(mu, m)
    measure.check_positivity()
    return FixedMeasureResult(measure, eig, residual, iterations, converged)


def quasi_invariance_residual(measure: TorusMeasure, weight: TrigPoly,
                              branches: int, test_degree: int) -> float:
    """max over |j| <= test_degree of |int L_D z^j dmu - int z^j dmu|.

    Both integrals are read off the moments; L_D z^j only touches modes
    |m'| <= (deg D + j)/N, which the cutoff covers whenever the matrix
    would build without leakage.
    """
    m = measure.cutoff
    if test_degree > m:
        raise CheckError("CUTOFF_TOO_SMALL",
                         "test degree needs moments beyond the cutoff")
    worst = 0.0
    for j in range(-test_degree, test_degree + 1):
        acc = 0.0 + 0.0j
        for mm in range(-m, m + 1):
            d = weight.coeff(branches * mm - j)
            if d != 0.0:
                acc += branches * d * measure.moments[mm + m]
        worst = max(worst, abs(acc - measure.moment(j)))
    return worst


# ---------------------------------------------------------- modular cocycle

@dataclass(frozen=True)
class OrbitQuery:
    """Groupoid element (x, m - n, y) with T^m x = T^n y, plus the weight."""

    x: complex
    y: complex
    m: int
    n: int
    weight: TrigPoly

    def __post_init__(self):
        if abs(abs(self.x) - 1.0) > 1e-12 or abs(abs(self.y) - 1.0) > 1e-12:
            raise CheckError("NOT_ON_CIRCLE", "x and y must have modulus 1")
        if self.m < 0 or self.n < 0:
            raise CheckError("BAD_ORBIT", "m and n must be nonnegative")


def modular_delta(q: OrbitQuery, branches: int) -> float:
    """Quotient of weight products along the two half-orbits.

    Delta(x, m - n, y) = prod_{j<m} D(T^j x) / prod_{j<n} D(T^j y) with
    T z = z**branches; INCOMPATIBLE unless T^m x = T^n y to 1e-9, and
    ZERO_WEIGHT if the weight vanishes anywhere along either orbit.
    """
    if abs(q.x ** (branches ** q.m) - q.y ** (branches ** q.n)) > 1e-9:
        raise CheckError("INCOMPATIBLE", "T^m x != T^n y")

    def orbit_product(z: complex, steps: int) -> complex:
        acc = 1.0 + 0.0j
        for _ in range(steps):
            val = q.weight(z)
            if abs(val) <= 1e-12:
                raise CheckError("ZERO_WEIGHT", f"weight vanishes at {z}")
            acc *= val
            z = z ** branches
        return acc

    num = orbit_product(q.x, q.m)
    den = orbit_product(q.y, q.n)
    out = num / den
    if abs(out.imag) > 1e-9 * max(1.0, abs(out)):
        warnings.warn("modular quotient has a nontrivial imaginary part; "
                      "weight is not positive on the orbit")
    return float(out.real)

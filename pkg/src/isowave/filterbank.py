"""Filter banks for the N-fold covering z -> z**N of the circle.

The bimodule inner product used throughout is the branch average

    <xi, eta>(x) = (1/N) sum_{y**N = x} conj(xi(y)) eta(y),

which on coefficients is exact: write conj(xi)*eta = sum a_k z^k, then
<xi, eta> = sum_m a_{N m} x^m (averaging over the N-th roots kills every
mode not divisible by N).  A filter bank is N unit vectors that are
orthonormal *and* complete for this inner product; completeness is what
makes the associated scale isometries a Cuntz family.

Right action of a symbol ``a``: (xi . a)(x) = xi(x) a(x**N).
Left action:                    (a . xi)(x) = a(x) xi(x).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import CheckError
from .trigpoly import TrigPoly

DEFAULT_TOL = 1e-12


# ----------------------------------------------------------- inner product

def branch_inner(xi: TrigPoly, eta: TrigPoly, branches: int) -> TrigPoly:
    """Branch-averaged inner product; conjugate-linear in ``xi``.

    Exact on coefficients: keeps the modes of conj(xi)*eta divisible by
    ``branches`` and divides them by ``branches``.
    """
    if branches < 2:
        raise CheckError("BAD_BRANCH_COUNT", "need at least 2 branches")
    q = xi.star() * eta
    if q.is_zero:
        return TrigPoly.zero()
    modes = q.modes()
    keep = modes % branches == 0
    return TrigPoly(0, np.zeros(0)) if not keep.any() else TrigPoly(
        int(modes[keep][0] // branches),
        _compress(q.coeffs[keep], modes[keep] // branches))


def _compress(vals: np.ndarray, modes: np.ndarray) -> np.ndarray:
    """Scatter (mode, value) pairs into a contiguous coefficient array."""
    lo, hi = int(modes[0]), int(modes[-1])
    out = np.zeros(hi - lo + 1, dtype=np.complex128)
    out[modes - lo] = vals
    return out


def right_action(xi: TrigPoly, a: TrigPoly, branches: int) -> TrigPoly:
    """(xi . a)(x) = xi(x) a(x**branches)."""
    return xi * a.compose_power(branches)


# ------------------------------------------------------------------ reports

@dataclass
class UnitFilterReport:
    passed: bool
    residual: float
    tol: float

    def to_dict(self):
        return {"passed": self.passed, "residual": self.residual, "tol": self.tol}


@dataclass
class BankReport:
    passed: bool
    gram_residuals: np.ndarray          # |<m_i, m_j> - delta_ij|, sup over modes
    reconstruction_residual: float      # worst monomial reconstruction error
    tol: float
    test_degree: int

    def to_dict(self):
        return {
            "passed": self.passed,
            "gram_residuals": self.gram_residuals.tolist(),
            "reconstruction_residual": self.reconstruction_residual,
            "tol": self.tol,
            "test_degree": self.test_degree,
        }


# ------------------------------------------------------------------- checks

def is_unit_filter(m: TrigPoly, branches: int, tol: float = DEFAULT_TOL) -> UnitFilterReport:
    """Check <m, m> = 1 as a polynomial identity (sup over coefficients)."""
    residual = (branch_inner(m, m, branches) - TrigPoly.one()).norm_inf()
    return UnitFilterReport(residual <= tol, residual, tol)


@dataclass
class FilterBank:
    """N filters; the first is the low pass, the rest high pass."""

    branch_count: int
    filters: Sequence[TrigPoly]
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        self.filters = list(self.filters)

    @property
    def lowpass(self) -> TrigPoly:
        return self.filters[0]


def is_filter_bank(bank: FilterBank, test_degree: int = 8) -> BankReport:
    """Orthonormality plus completeness on monomials up to ``test_degree``.

    Orthonormality alone does not make a module basis, so reconstruction
    xi = sum_i m_i . <m_i, xi> is verified on z^k, |k| <= test_degree.
    """
    n = bank.branch_count
    if len(bank.filters) != n:
        raise CheckError("COUNT_MISMATCH",
                         f"bank has {len(bank.filters)} filters, expected {n}")
    gram = np.zeros((n, n))
    for i, mi in enumerate(bank.filters):
        for j, mj in enumerate(bank.filters):
            target = TrigPoly.one() if i == j else TrigPoly.zero()
            gram[i, j] = (branch_inner(mi, mj, n) - target).norm_inf()
    recon = 0.0
    for k in range(-test_degree, test_degree + 1):
        xi = TrigPoly.monomial(k)
        recon = max(recon, (reconstruct(bank.filters, xi, n) - xi).norm_inf())
    passed = gram.max() <= bank.tol and recon <= bank.tol
    return BankReport(passed, gram, recon, bank.tol, test_degree)


def reconstruct(vectors: Sequence[TrigPoly], xi: TrigPoly, branches: int) -> TrigPoly:
    """sum_i v_i . <v_i, xi> for a candidate (frame or bank) family."""
    acc = TrigPoly.zero()
    for v in vectors:
        acc = acc + right_action(v, branch_inner(v, xi, branches), branches)
    return acc


# --------------------------------------------------------------- completion

def quadrature_mirror(m1: TrigPoly, tol: float = DEFAULT_TOL) -> TrigPoly:
    """High-pass partner m2(z) = z * conj(m1(-z)) for the 2-fold covering.

    On coefficients: m1 = sum c_k z^k gives m2 = sum conj(c_k)(-1)^k z^(1-k).
    The pair {m1, m2} is then a filter bank whenever m1 is a unit filter.
    """
    rep = is_unit_filter(m1, 2, tol)
    if not rep.passed:
        raise CheckError("NOT_UNIT",
                         f"<m1, m1> != 1 (residual {rep.residual:.3g})")
    ks = m1.modes()
    out_modes = 1 - ks
    signs = np.where(ks % 2 == 0, 1.0, -1.0)
    vals = np.conj(m1.coeffs) * signs
    order = np.argsort(out_modes)
    return TrigPoly(int(out_modes[order][0]), _compress(vals[order], out_modes[order]))


def modulate_highpass(m2: TrigPoly, theta: TrigPoly, tol: float = 1e-9) -> TrigPoly:
    """Replace m2 by m2(z) * theta(z**2) for unimodular theta.

    Unimodularity is checked by sampling |theta| on the circle; any such
    trig polynomial is necessarily c*z^k with |c| = 1.
    """
    s = np.linspace(0.0, 1.0, 257)[:-1]
    vals = np.abs(theta.eval_turns(s))
    if np.max(np.abs(vals - 1.0)) > tol:
        raise CheckError("NOT_UNIMODULAR",
                         f"|theta| deviates from 1 by {np.max(np.abs(vals - 1.0)):.3g}")
    return m2 * theta.compose_power(2)


# ----------------------------------------------------------- builtin filters

SQRT2 = math.sqrt(2.0)


def haar_lowpass() -> TrigPoly:
    """(1 + z)/sqrt(2); unit vector with value sqrt(2) at z = 1."""
    return TrigPoly(0, [1 / SQRT2, 1 / SQRT2])


def haar_highpass() -> TrigPoly:
    """(z - 1)/sqrt(2) = quadrature_mirror(haar_lowpass())."""
    return TrigPoly(0, [-1 / SQRT2, 1 / SQRT2])


def daubechies4_lowpass() -> TrigPoly:
    """4-tap Daubechies low pass, unit-filter normalisation (sum of squares 1)."""
    r3 = math.sqrt(3.0)
    c = np.array([1 + r3, 3 + r3, 3 - r3, 1 - r3]) / (4.0 * SQRT2)
    return TrigPoly(0, c)


def haar_bank() -> FilterBank:
    return FilterBank(2, [haar_lowpass(), haar_highpass()])


# ------------------------------------------------------------------ file I/O

@dataclass
class LoadedFilter:
    poly: TrigPoly              # always correspondence-normalised
    branch_count: int
    original_normalization: str


def load_filter(path) -> LoadedFilter:
    """Read a filter JSON file, converting to unit-filter normalisation.

    Schema: {"branch_count": N, "kmin": k, "coeffs": [[re, im], ...],
             "normalization": "correspondence" | "mallat"}.
    A "mallat" filter (value 1 at z = 1) is scaled by sqrt(N) on load.
    """
    with open(path) as fh:
        data = json.load(fh)
    coeffs = np.array([complex(re, im) for re, im in data["coeffs"]])
    norm = data.get("normalization", "correspondence")
    n = int(data["branch_count"])
    if norm == "mallat":
        coeffs = coeffs * math.sqrt(n)
    elif norm != "correspondence":
        raise CheckError("BAD_NORMALIZATION", f"unknown normalization {norm!r}")
    return LoadedFilter(TrigPoly(int(data["kmin"]), coeffs), n, norm)


def save_filter(path, poly: TrigPoly, branch_count: int) -> None:
    with open(path, "w") as fh:
        json.dump({
            "branch_count": branch_count,
            "kmin": int(poly.kmin),
            "coeffs": [[float(c.real), float(c.imag)] for c in poly.coeffs],
            "normalization": "correspondence",
        }, fh, indent=2)


# -------------------------------------------------------- partition frames

@dataclass
class TightFrame:
    """Vectors with xi = sum_i v_i . <v_i, xi> for every xi (a quasi-basis)."""

    branch_count: int
    vectors: list[TrigPoly]
    tol: float
    report: dict = field(default_factory=dict)

    def reconstruct(self, xi: TrigPoly) -> TrigPoly:
        return reconstruct(self.vectors, xi, self.branch_count)

    def reconstruction_residual(self, xi: TrigPoly) -> float:
        return (self.reconstruct(xi) - xi).norm_inf()

    def frame_identity_residual(self, xi: TrigPoly) -> float:
        """sup residual of <xi, xi> = sum_i <xi, v_i><v_i, xi>."""
        n = self.branch_count
        acc = TrigPoly.zero()
        for v in self.vectors:
            acc = acc + branch_inner(xi, v, n) * branch_inner(v, xi, n)
        return (acc - branch_inner(xi, xi, n)).norm_inf()


def _smoothstep(u: np.ndarray) -> np.ndarray:
    """C-infinity step: 0 for u <= 0, 1 for u >= 1, symmetric about 1/2."""
    def g(v):
        out = np.zeros_like(v)
        pos = v > 0
        out[pos] = np.exp(-1.0 / v[pos])
        return out
    gu = g(u)
    return gu / (gu + g(1.0 - u))


def _window_profile(dist: np.ndarray, flat_half: float, ramp: float) -> np.ndarray:
    """Window value at |t - center| = dist: flat top, cos(smoothstep) ramps.

    Adjacent windows spaced flat + ramp apart satisfy v^2 + v'^2 = 1 on the
    shared ramp exactly, so the windows' squares form a partition of unity.
    """
    out = np.zeros_like(dist)
    out[dist <= flat_half] = 1.0
    on_ramp = (dist > flat_half) & (dist < flat_half + ramp)
    s = (dist[on_ramp] - flat_half) / ramp
    out[on_ramp] = np.cos(0.5 * np.pi * _smoothstep(s))
    return out


def partition_frame(branches: int, overlap: float, arcs: int | None = None,
                    degree: int | None = None, tol: float = 1e-3) -> TightFrame:
    """Tight frame from square roots of a partition of unity on arcs.

    ``arcs`` windows (default branches + 1) of support (1 + overlap)/arcs
    are placed around the circle.  Each support must be shorter than 1/N of
    the circle so that no window sees two N-th-root preimages of one point;
    otherwise BAD_OVERLAP is raised.  The windows are truncated to trig
    polynomials; ``degree=None`` picks the degree automatically from the
    coefficient tail and the truncation error is reported.
    """
    if not 0.0 < overlap < 1.0:
        raise CheckError("BAD_OVERLAP", "overlap must lie in (0, 1)")
    m = arcs if arcs is not None else branches + 1
    if m < branches + 1:
        raise CheckError("BAD_OVERLAP", f"need at least {branches + 1} arcs")
    support = (1.0 + overlap) / m
    if support >= 1.0 / branches:
        raise CheckError(
            "BAD_OVERLAP",
            f"support {support:.4g} of a turn reaches two preimage branches "
            f"(limit {1.0 / branches:.4g})")
    ramp = overlap / m
    flat_half = 0.5 * (1.0 / m - ramp)

    # sample the base window over one period and take Fourier coefficients
    q = 1 << 14
    t = np.arange(q) / q
    dist = np.minimum(t, 1.0 - t)
    base = _window_profile(dist, flat_half, ramp)
    spectrum = np.fft.fft(base) / q          # c_k = spectrum[k mod q]

    if degree is None:
        mags = np.abs(spectrum)
        tail_target = tol / (10.0 * (2 * m + branches))
        degree = 32
        while degree < q // 4:
            tail = mags[degree + 1:q // 2].sum() + mags[q // 2:-degree].sum()
            if 2.0 * tail <= tail_target:
                break
            degree = 2 * degree

    ks = np.arange(-degree, degree + 1)
    base_coeffs = spectrum[ks % q]
    scale = math.sqrt(branches)
    vectors = []
    for i in range(m):
        phase = np.exp(-2j * np.pi * ks * (i / m))
        vectors.append(TrigPoly(-degree, scale * base_coeffs * phase))

    # measured truncation error: sup |sum_i |v_i|^2 - N| on the sample grid
    total = np.zeros(q)
    for v in vectors:
        total += np.abs(v.eval_turns(t)) ** 2
    truncation_sup = float(np.max(np.abs(total - branches)))

    frame = TightFrame(branches, vectors, tol, report={
        "arcs": m,
        "overlap": overlap,
        "degree": int(degree),
        "support_turns": support,
        "partition_sup_error": truncation_sup,
    })
    frame.report["monomial_residual_z3"] = frame.reconstruction_residual(
        TrigPoly.monomial(3))
    return frame

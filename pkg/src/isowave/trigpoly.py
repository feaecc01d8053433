"""Exact coefficient arithmetic for trigonometric polynomials on the circle.

A trigonometric polynomial is a finite Fourier series

    p(z) = sum_j coeffs[j] * z**(kmin + j),      |z| = 1,

stored as the lowest mode ``kmin`` plus a contiguous coefficient array.
Addition, multiplication, circle conjugation and the substitution
``z -> z**N`` are all exact on coefficients, which is what lets the rest
of the package assert operator identities to near machine precision.
"""

from __future__ import annotations

from typing import Iterable, Union

import numpy as np

from ._kernels import eval_poly

#: coefficients at or below this magnitude are trimmed in canonical form
CANON_TOL = 1e-14

Scalar = Union[int, float, complex]


class TrigPoly:
    """Finitely supported Fourier series on the unit circle.

    Parameters
    ----------
    kmin : int
        Mode of the first coefficient.
    coeffs : array_like of complex
        Coefficient of ``z**(kmin + j)`` at position ``j``.

    Instances are immutable; arithmetic returns new objects in canonical
    form (nonzero first/last coefficient, or the empty zero polynomial).
    """

    __slots__ = ("kmin", "coeffs")

    def __init__(self, kmin: int, coeffs: Iterable[Scalar]):
        arr = np.asarray(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs,
                         dtype=np.complex128)
        if arr.ndim != 1:
            raise ValueError("coeffs must be one-dimensional")
        # canonical form: strip leading/trailing near-zeros
        nz = np.nonzero(np.abs(arr) > CANON_TOL)[0]
        if nz.size == 0:
            object.__setattr__(self, "kmin", 0)
            arr = np.zeros(0, dtype=np.complex128)
        else:
            lo, hi = nz[0], nz[-1] + 1
            object.__setattr__(self, "kmin", int(kmin) + int(lo))
            arr = arr[lo:hi].copy()
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("TrigPoly is immutable")

    # ------------------------------------------------------------------ basics

    @classmethod
    def zero(cls) -> "TrigPoly":
        return cls(0, [])

    @classmethod
    def one(cls) -> "TrigPoly":
        return cls(0, [1.0])

    @classmethod
    def monomial(cls, k: int, c: Scalar = 1.0) -> "TrigPoly":
        return cls(k, [c])

    @property
    def kmax(self) -> int:
        return self.kmin + len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def modes(self) -> np.ndarray:
        return np.arange(self.kmin, self.kmin + len(self.coeffs))

    def coeff(self, k: int) -> complex:
        """Coefficient of ``z**k`` (zero outside the support)."""
        j = k - self.kmin
        if 0 <= j < len(self.coeffs):
            return complex(self.coeffs[j])
        return 0.0 + 0.0j

    def norm_inf(self) -> float:
        """Largest coefficient magnitude."""
        return float(np.max(np.abs(self.coeffs))) if len(self.coeffs) else 0.0

    def norm_l2(self) -> float:
        """L2 norm on the circle = Euclidean norm of the coefficients."""
        return float(np.linalg.norm(self.coeffs))

    # -------------------------------------------------------------- arithmetic

    def _aligned(self, other: "TrigPoly"):
        lo = min(self.kmin, other.kmin) if not (self.is_zero and other.is_zero) else 0
        hi = max(self.kmax, other.kmax) if not (self.is_zero and other.is_zero) else -1
        if self.is_zero:
            lo, hi = (other.kmin, other.kmax) if not other.is_zero else (0, -1)
        elif other.is_zero:
            lo, hi = self.kmin, self.kmax
        n = hi - lo + 1
        a = np.zeros(max(n, 0), dtype=np.complex128)
        b = np.zeros(max(n, 0), dtype=np.complex128)
        if not self.is_zero:
            a[self.kmin - lo:self.kmin - lo + len(self.coeffs)] = self.coeffs
        if not other.is_zero:
            b[other.kmin - lo:other.kmin - lo + len(other.coeffs)] = other.coeffs
        return lo, a, b

    def __add__(self, other) -> "TrigPoly":
        other = _as_poly(other)
        lo, a, b = self._aligned(other)
        return TrigPoly(lo, a + b)

    __radd__ = __add__

    def __sub__(self, other) -> "TrigPoly":
        other = _as_poly(other)
        lo, a, b = self._aligned(other)
        return TrigPoly(lo, a - b)

    def __rsub__(self, other) -> "TrigPoly":
        return _as_poly(other).__sub__(self)

    def __neg__(self) -> "TrigPoly":
        return TrigPoly(self.kmin, -self.coeffs)

    def __mul__(self, other) -> "TrigPoly":
        if isinstance(other, (int, float, complex)):
            return TrigPoly(self.kmin, self.coeffs * other)
        other = _as_poly(other)
        if self.is_zero or other.is_zero:
            return TrigPoly.zero()
        return TrigPoly(self.kmin + other.kmin,
                        np.convolve(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, c: Scalar) -> "TrigPoly":
        return TrigPoly(self.kmin, self.coeffs / c)

    def star(self) -> "TrigPoly":
        """Circle conjugate: p*(z) = conj(p(z)) for |z| = 1.

        On coefficients this is reversal + conjugation + mode negation.
        """
        if self.is_zero:
            return TrigPoly.zero()
        return TrigPoly(-self.kmax, np.conj(self.coeffs[::-1]))

    def compose_power(self, n: int) -> "TrigPoly":
        """Substitution z -> z**n, exact on coefficients (modes k -> n*k)."""
        if n < 1:
            raise ValueError("compose_power expects n >= 1")
        if self.is_zero or n == 1:
            return self
        out = np.zeros((len(self.coeffs) - 1) * n + 1, dtype=np.complex128)
        out[::n] = self.coeffs
        return TrigPoly(self.kmin * n, out)

    # -------------------------------------------------------------- evaluation

    def __call__(self, z) -> np.ndarray:
        """Evaluate at complex point(s) ``z`` (meant for |z| = 1)."""
        z = np.asarray(z, dtype=np.complex128)
        scalar = z.ndim == 0
        zf = np.atleast_1d(z).ravel()
        if self.is_zero:
            out = np.zeros_like(zf)
        else:
            out = eval_poly(self.coeffs, self.kmin, zf)
        out = out.reshape(np.atleast_1d(z).shape)
        return complex(out[()]) if scalar else out

    def eval_turns(self, s) -> np.ndarray:
        """Evaluate at e^(2*pi*i*s); ``s`` in turns (full circle = 1)."""
        s = np.asarray(s, dtype=np.float64)
        return self(np.exp(2j * np.pi * s))

    # ------------------------------------------------------------------- misc

    def approx_eq(self, other, tol: float = 1e-12) -> bool:
        return (self - _as_poly(other)).norm_inf() <= tol

    def __eq__(self, other) -> bool:
        try:
            other = _as_poly(other)
        except TypeError:
            return NotImplemented
        return (self.kmin == other.kmin
                and len(self.coeffs) == len(other.coeffs)
                and bool(np.all(self.coeffs == other.coeffs)))

    def __hash__(self):
        return hash((self.kmin, self.coeffs.tobytes()))

    def __repr__(self) -> str:
        if self.is_zero:
            return "TrigPoly(0)"
        parts = []
        for k, c in zip(self.modes(), self.coeffs):
            parts.append(f"({c:.6g})z^{k}")
        return "TrigPoly(" + " + ".join(parts) + ")"


def _as_poly(x) -> TrigPoly:
    if isinstance(x, TrigPoly):
        return x
    if isinstance(x, (int, float, complex)):
        return TrigPoly(0, [x])
    raise TypeError(f"cannot interpret {type(x).__name__} as TrigPoly")


def random_poly(rng: np.random.Generator, degree: int, kmin: int | None = None) -> TrigPoly:
    """Random polynomial with i.i.d. complex standard normal coefficients.

    Modes run over ``[kmin, kmin + degree]``; by default centred about 0.
    """
    n = degree + 1
    if kmin is None:
        kmin = -(degree // 2)
    c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return TrigPoly(kmin, c)

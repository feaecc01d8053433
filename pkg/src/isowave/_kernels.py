"""Hot numeric kernels: numba-compiled with a pure-numpy fallback.

Every kernel exists in two versions, ``*_numpy`` (vectorised numpy) and
``*_numba`` (``@njit``).  The module-level names (``eval_poly``, ...) are
bound to one of them at import time: numba when it imports cleanly, numpy
when it does not or when the environment variable ``ISOWAVE_NO_NUMBA`` is
set to a non-empty value.  ``benchmarks/bench_kernels.py`` times the two
paths against each other.
"""

from __future__ import annotations

import os

import numpy as np

try:  # pragma: no cover - exercised via env flag in tests
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not os.environ.get("ISOWAVE_NO_NUMBA", "")

TWO_PI = 2.0 * np.pi


# --------------------------------------------------------------------- numpy

def eval_poly_numpy(coeffs: np.ndarray, kmin: int, z: np.ndarray) -> np.ndarray:
    """Horner evaluation of sum_j coeffs[j] z^(kmin+j) at points z."""
    acc = np.full(z.shape, coeffs[-1], dtype=np.complex128)
    for j in range(len(coeffs) - 2, -1, -1):
        acc *= z
        acc += coeffs[j]
    if kmin != 0:
        acc *= z ** kmin
    return acc


def cascade_product_numpy(coeffs: np.ndarray, kmin: int, t: np.ndarray,
                          factors: int) -> np.ndarray:
    """prod_{k=1..factors} p(e^(2 pi i 2^-k t)) on the grid t."""
    acc = np.ones(t.shape, dtype=np.complex128)
    for k in range(1, factors + 1):
        z = np.exp(1j * (TWO_PI * 2.0 ** (-k)) * t)
        acc *= eval_poly_numpy(coeffs, kmin, z)
    return acc


def fourier_sum_numpy(t: np.ndarray, weighted: np.ndarray,
                      x: np.ndarray) -> np.ndarray:
    """out[m] = sum_j weighted[j] e^(2 pi i x[m] t[j]), chunked over x."""
    out = np.empty(x.shape, dtype=np.complex128)
    # keep the phase matrix below ~64 MB
    chunk = max(1, int(4_000_000 // max(len(t), 1)))
    for s in range(0, len(x), chunk):
        xs = x[s:s + chunk]
        out[s:s + chunk] = np.exp(2j * np.pi * np.outer(xs, t)) @ weighted
    return out


def directed_hausdorff_numpy(a: np.ndarray, b: np.ndarray) -> float:
    """max over a of min over b of the Euclidean distance (chunked)."""
    worst = 0.0
    chunk = max(1, int(2_000_000 // max(len(b), 1)))
    for s in range(0, len(a), chunk):
        d2 = np.sum((a[s:s + chunk, None, :] - b[None, :, :]) ** 2, axis=2)
        worst = max(worst, float(np.sqrt(d2.min(axis=1).max())))
    return worst


# --------------------------------------------------------------------- numba

if HAVE_NUMBA:

    @numba.njit(cache=True)
    def eval_poly_numba(coeffs, kmin, z):
        n = z.shape[0]
        m = coeffs.shape[0]
        out = np.empty(n, dtype=np.complex128)
        for i in range(n):
            zi = z[i]
            acc = coeffs[m - 1]
            for j in range(m - 2, -1, -1):
                acc = acc * zi + coeffs[j]
            if kmin != 0:
                acc *= zi ** kmin
            out[i] = acc
        return out

    @numba.njit(cache=True)
    def cascade_product_numba(coeffs, kmin, t, factors):
        n = t.shape[0]
        m = coeffs.shape[0]
        out = np.empty(n, dtype=np.complex128)
        for i in range(n):
            acc = 1.0 + 0.0j
            for k in range(1, factors + 1):
                theta = TWO_PI * (2.0 ** (-k)) * t[i]
                zi = complex(np.cos(theta), np.sin(theta))
                val = coeffs[m - 1]
                for j in range(m - 2, -1, -1):
                    val = val * zi + coeffs[j]
                if kmin != 0:
                    val *= zi ** kmin
                acc *= val
            out[i] = acc
        return out

    @numba.njit(cache=True, parallel=True)
    def fourier_sum_numba(t, weighted, x):
        nx = x.shape[0]
        nt = t.shape[0]
        out = np.empty(nx, dtype=np.complex128)
        for m in numba.prange(nx):
            acc = 0.0 + 0.0j
            w = TWO_PI * x[m]
            for j in range(nt):
                phase = w * t[j]
                acc += weighted[j] * complex(np.cos(phase), np.sin(phase))
            out[m] = acc
        return out

    @numba.njit(cache=True, parallel=True)
    def directed_hausdorff_numba(a, b):
        na = a.shape[0]
        nb = b.shape[0]
        dim = a.shape[1]
        worst = np.zeros(na, dtype=np.float64)
        for i in numba.prange(na):
            best = np.inf
            for j in range(nb):
                d = 0.0
                for k in range(dim):
                    diff = a[i, k] - b[j, k]
                    d += diff * diff
                if d < best:
                    best = d
            worst[i] = best
        return np.sqrt(np.max(worst))

else:  # pragma: no cover
    eval_poly_numba = None
    cascade_product_numba = None
    fourier_sum_numba = None
    directed_hausdorff_numba = None


if USE_NUMBA:
    eval_poly = eval_poly_numba
    cascade_product = cascade_product_numba
    fourier_sum = fourier_sum_numba
    directed_hausdorff_brute = directed_hausdorff_numba
else:
    eval_poly = eval_poly_numpy
    cascade_product = cascade_product_numpy
    fourier_sum = fourier_sum_numpy
    directed_hausdorff_brute = directed_hausdorff_numpy

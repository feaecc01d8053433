"""Symbolic *-algebra of the full one-sided shift on n symbols.

Elements are finite sums  sum c_{a,b} s_a s_b*  over finite words a, b in
{1..n}; the generators satisfy s_i* s_j = delta_ij and sum_i s_i s_i* = 1,
so products reduce by the prefix calculus

    (s_a s_b*)(s_c s_d*) = s_{a c'} s_d*   if c = b c',
                         = s_a s_{d b'}*   if b = c b',
                         = 0               otherwise.

The basis {s_a s_b*} is *not* independent across levels -- refining
s_a s_b* = sum_i s_{a i} s_{b i}* is an identity -- so equality is decided
through a normal form that pushes every term of a given gauge degree
(|a| - |b|) to a common level min(|a|, |b|); at fixed lengths the terms
are linearly independent.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import CheckError

Word = tuple[int, ...]

PURGE_TOL = 1e-14
EQ_TOL = 1e-12


@dataclass(frozen=True)
class WordOp:
    """Finite complex combination of s_alpha s_beta* terms."""

    n: int
    terms: dict

    @classmethod
    def build(cls, n: int, terms: dict) -> "WordOp":
        clean = {}
        for (a, b), c in terms.items():
            a, b = tuple(a), tuple(b)
            if any(not 1 <= l <= n for l in a + b):
                raise CheckError("BAD_LETTER", f"letters must lie in 1..{n}")
            if abs(c) > PURGE_TOL:
                clean[(a, b)] = clean.get((a, b), 0.0) + complex(c)
        return cls(n, {k: v for k, v in clean.items() if abs(v) > PURGE_TOL})

    # ------------------------------------------------------------- algebra

    def __add__(self, other: "WordOp") -> "WordOp":
        self._same_alphabet(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0.0) + c
        return WordOp.build(self.n, out)

    def __sub__(self, other: "WordOp") -> "WordOp":
        return self + (other * (-1.0))

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return WordOp.build(self.n, {k: c * other for k, c in self.terms.items()})
        return multiply(self, other)

    __rmul__ = __mul__

    def _same_alphabet(self, other: "WordOp") -> None:
        if self.n != other.n:
            raise CheckError("ALPHABET_MISMATCH",
                             f"alphabet sizes {self.n} and {other.n} differ")

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self) -> str:
        if not self.terms:
            return "WordOp(0)"
        def wtxt(w):
            return "".join(map(str, w)) or "e"
        bits = [f"({c:.4g})s[{wtxt(a)}]s[{wtxt(b)}]*"
                for (a, b), c in sorted(self.terms.items())]
        return " + ".join(bits)


def unit(n: int) -> WordOp:
    return WordOp.build(n, {((), ()): 1.0})


def generator(n: int, i: int) -> WordOp:
    """The isometry s_i as the term s_(i) s_()*."""
    return WordOp.build(n, {((i,), ()): 1.0})


def term(n: int, alpha, beta, coeff=1.0) -> WordOp:
    return WordOp.build(n, {(tuple(alpha), tuple(beta)): coeff})


def multiply(a: WordOp, b: WordOp) -> WordOp:
    """Bilinear extension of the prefix calculus on terms."""
    a._same_alphabet(b)
    out: dict = {}
    for (al, be), ca in a.terms.items():
        lb = len(be)
        for (ga, de), cb in b.terms.items():
            lg = len(ga)
            if lg >= lb and ga[:lb] == be:            # ga = be + tail
                key = (al + ga[lb:], de)
            elif lb > lg and be[:lg] == ga:           # be = ga + tail
                key = (al, de + be[lg:])
            else:
                continue
            out[key] = out.get(key, 0.0) + ca * cb
    return WordOp.build(a.n, out)


def adjoint(a: WordOp) -> WordOp:
    """(s_a s_b*)* = s_b s_a* with conjugated coefficient."""
    return WordOp.build(a.n, {(b, al): np.conj(c) for (al, b), c in a.terms.items()})


# ------------------------------------------------------------- normal form

def needed_level(a: WordOp) -> int:
    """Smallest level whose normal form exists: max over terms of min lengths."""
    return max((min(len(al), len(be)) for al, be in a.terms), default=0)


def normal_form(a: WordOp, level: int) -> WordOp:
    """Refine every term so min(|alpha|, |beta|) == level.

    Uses s_a s_b* = sum_{|w| = d} s_{a w} s_{b w}* (the completeness
    relation applied d times); below ``needed_level`` terms cannot be
    coarsened, hence LEVEL_TOO_SMALL.
    """
    need = needed_level(a)
    if level < need:
        raise CheckError("LEVEL_TOO_SMALL",
                         f"terms need level >= {need}, got {level}")
    out: dict = {}
    for (al, be), c in a.terms.items():
        d = level - min(len(al), len(be))
        if d == 0:
            out[(al, be)] = out.get((al, be), 0.0) + c
        else:
            for w in itertools.product(range(1, a.n + 1), repeat=d):
                key = (al + w, be + w)
                out[key] = out.get(key, 0.0) + c
    return WordOp.build(a.n, out)


def equal_ops(a: WordOp, b: WordOp, tol: float = EQ_TOL) -> bool:
    return op_distance(a, b) <= tol


def op_distance(a: WordOp, b: WordOp) -> float:
    """Sup coefficient distance after refining both to a common level."""
    a._same_alphabet(b)
    level = max(needed_level(a), needed_level(b))
    na, nb = normal_form(a, level), normal_form(b, level)
    keys = set(na.terms) | set(nb.terms)
    return max((abs(na.terms.get(k, 0.0) - nb.terms.get(k, 0.0)) for k in keys),
               default=0.0)


# ------------------------------------------------------------ gauge action

def gauge(a: WordOp, t: float) -> WordOp:
    """Scale each term by e^(2 pi i t deg) with deg = |alpha| - |beta|."""
    return WordOp.build(a.n, {
        (al, be): c * np.exp(2j * np.pi * t * (len(al) - len(be)))
        for (al, be), c in a.terms.items()})


def core_part(a: WordOp) -> WordOp:
    """Gauge-degree-zero part; the conditional expectation onto the core."""
    return WordOp.build(a.n, {(al, be): c for (al, be), c in a.terms.items()
                              if len(al) == len(be)})


def degree_split(a: WordOp) -> dict:
    out: dict = {}
    for (al, be), c in a.terms.items():
        out.setdefault(len(al) - len(be), {})[(al, be)] = c
    return {d: WordOp.build(a.n, t) for d, t in out.items()}


def is_core(a: WordOp, tol: float = EQ_TOL) -> bool:
    """True when every nonzero gauge degree cancels identically."""
    zero = WordOp.build(a.n, {})
    for d, part in degree_split(a).items():
        if d != 0 and not equal_ops(part, zero, tol):
            return False
    return True


def level_pairs(a: WordOp) -> set:
    """The (|alpha|, |beta|) support levels of the nonzero terms."""
    return {(len(al), len(be)) for al, be in a.terms}


# -------------------------------------------------- the canonical isometry

def shift_isometry(n: int) -> WordOp:
    """S = (1/sqrt(n)) sum_i s_i s_()*; S* S = 1 and S S* = (1/n) sum s_i s_j*.

    This is the one isometry every representation of the algebra carries:
    it implements the shift endomorphism on the core.
    """
    if n < 2:
        raise CheckError("BAD_ALPHABET", "need at least 2 symbols")
    c = 1.0 / math.sqrt(n)
    return WordOp.build(n, {((i,), ()): c for i in range(1, n + 1)})


def _require_core(f: WordOp) -> None:
    if not is_core(f):
        raise CheckError("NOT_CORE", "operand has a nonzero gauge degree")


def shift_endomorphism(f: WordOp) -> WordOp:
    """alpha(f) = S f S* on core elements."""
    _require_core(f)
    s = shift_isometry(f.n)
    return multiply(multiply(s, f), adjoint(s))


def transfer_expectation(f: WordOp) -> WordOp:
    """L(f) = S* f S on core elements; satisfies L(f alpha(g)) = L(f) g."""
    _require_core(f)
    s = shift_isometry(f.n)
    return multiply(multiply(adjoint(s), f), s)


def shift_endomorphism_pointwise(f: WordOp) -> WordOp:
    """Independent groupoid-function formula for alpha on core elements:

    alpha(f)(x, 0, y) = (1/n) f(shift x, 0, shift y), which on a cylinder
    term s_a s_b* (|a| = |b|) gives (1/n) sum_{i,j} s_{i a} s_{j b}*.
    """
    _require_core(f)
    n = f.n
    out: dict = {}
    for (al, be), c in core_part(f).terms.items():
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                key = ((i,) + al, (j,) + be)
                out[key] = out.get(key, 0.0) + c / n
    return WordOp.build(n, out)


def transfer_expectation_pointwise(f: WordOp) -> WordOp:
    """Independent fibre-sum formula for L on core elements:

    L(f)(x, 0, y) = (1/n) sum over preimage pairs, which on a refined
    cylinder term s_a s_b* (|a| = |b| >= 1) drops the leading letters:
    (1/n) s_{a'} s_{b'}*.
    """
    _require_core(f)
    n = f.n
    g = normal_form(core_part(f), max(1, needed_level(f)))
    out: dict = {}
    for (al, be), c in g.terms.items():
        key = (al[1:], be[1:])
        out[key] = out.get(key, 0.0) + c / n
    return WordOp.build(n, out)


# ------------------------------------------------------------ CP relations

@dataclass
class ExpectationRelationsReport:
    passed: bool
    intertwine_residual: float      # |S f - alpha(f) S|
    transfer_residual: float        # |S* f S - pointwise L(f)|
    tol: float
    cp3_note: str = ("compact-ideal covariance (CP3) concerns the completed "
                     "correspondence and is out of scope for the finite model")

    def to_dict(self):
        return {
            "passed": self.passed,
            "intertwine_residual": self.intertwine_residual,
            "transfer_residual": self.transfer_residual,
            "tol": self.tol,
            "cp3": self.cp3_note,
        }


def expectation_relations_report(f: WordOp, tol: float = EQ_TOL) -> ExpectationRelationsReport:
    """Verify S f = alpha(f) S and S* f S = L(f) symbolically.

    The transfer side is compared against the independent fibre-sum
    formula, not against its own definition.
    """
    _require_core(f)
    s = shift_isometry(f.n)
    lhs = multiply(s, f)
    rhs = multiply(shift_endomorphism(f), s)
    r1 = op_distance(lhs, rhs)
    r2 = op_distance(transfer_expectation(f), transfer_expectation_pointwise(f))
    return ExpectationRelationsReport(r1 <= tol and r2 <= tol, r1, r2, tol)


# ------------------------------------------------- Fock numerical companion

def word_basis(n: int, max_len: int) -> list:
    out = [()]
    for l in range(1, max_len + 1):
        out.extend(itertools.product(range(1, n + 1), repeat=l))
    return out


def fock_matrix(a: WordOp, max_len: int) -> np.ndarray:
    """Matrix of ``a`` on l2(words of length <= max_len).

    s_i sends e_w to e_{i w}, dropping anything beyond ``max_len`` -- a
    Toeplitz-style truncation, so sum_i s_i s_i* = 1 holds only off the
    vacuum and products are reproduced only on vectors short enough that
    the truncation is never hit.
    """
    basis = word_basis(a.n, max_len)
    index = {w: i for i, w in enumerate(basis)}
    mat = np.zeros((len(basis), len(basis)), dtype=np.complex128)
    for (al, be), c in a.terms.items():
        lb = len(be)
        for w, iw in index.items():
            if len(w) >= lb and w[:lb] == be:
                target = al + w[lb:]
                if len(target) <= max_len:
                    mat[index[target], iw] += c
    return mat


def random_wordop(rng: np.random.Generator, n: int, max_terms: int = 6,
                  max_word: int = 4, core_only: bool = False) -> WordOp:
    """Random element for property tests (seeded, reproducible)."""
    terms: dict = {}
    for _ in range(int(rng.integers(1, max_terms + 1))):
        la = int(rng.integers(0, max_word + 1))
        lb = la if core_only else int(rng.integers(0, max_word + 1))
        al = tuple(int(x) for x in rng.integers(1, n + 1, size=la))
        be = tuple(int(x) for x in rng.integers(1, n + 1, size=lb))
        c = complex(rng.standard_normal(), rng.standard_normal())
        terms[(al, be)] = terms.get((al, be), 0.0) + c
    return WordOp.build(n, terms)

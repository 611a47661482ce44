"""Banded operators on l2(N) with eventually constant diagonals plus finite rank.

The representable class consists of operators whose matrix is a finite set of
diagonals, each eventually constant, plus finitely many rank-one terms.  This
class is closed under addition, scaling, composition and adjoints, and every
member is a Toeplitz operator plus a finite-rank perturbation.  Diagonals that
converge to their limit without reaching it (genuinely compact, non-banded
parts) are outside the class and are not encoded.

Conventions: the band offset is k = row - column (the right shift sits at
offset +1), and the position along a diagonal is m = min(row, column), which
is invariant under transposition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


def _coerce(value):
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite scalar {value!r} in operator data")
    return z


def _coerce_vector(seq):
    vec = tuple(_coerce(v) for v in seq)
    while vec and vec[-1] == 0:
        vec = vec[:-1]
    return vec


@dataclass(frozen=True)
class DiagonalDescriptor:
    """One diagonal: an explicit finite prefix followed by a constant tail.

    Canonical form never stores trailing prefix entries equal to the tail.
    """

    prefix: tuple = ()
    tail: complex = 0j

    def __post_init__(self):
        tail = _coerce(self.tail)
        prefix = tuple(_coerce(v) for v in self.prefix)
        while prefix and prefix[-1] == tail:
            prefix = prefix[:-1]
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "tail", tail)

    def value_at(self, m: int) -> complex:
        if m < len(self.prefix):
            return self.prefix[m]
        return self.tail

    def is_zero(self) -> bool:
        return not self.prefix and self.tail == 0

    def conjugated(self) -> "DiagonalDescriptor":
        return DiagonalDescriptor(tuple(v.conjugate() for v in self.prefix),
                                  self.tail.conjugate())

    def scaled(self, c: complex) -> "DiagonalDescriptor":
        return DiagonalDescriptor(tuple(c * v for v in self.prefix), c * self.tail)


@dataclass(frozen=True)
class FiniteRankTerm:
    """Rank-one map x -> <x, right> * left, stored as two finite vectors."""

    left: tuple = ()
    right: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "left", _coerce_vector(self.left))
        object.__setattr__(self, "right", _coerce_vector(self.right))

    def is_zero(self) -> bool:
        return not self.left or not self.right

    def swapped(self) -> "FiniteRankTerm":
        return FiniteRankTerm(self.right, self.left)

    def support(self) -> int:
        return max(len(self.left), len(self.right))


@dataclass(frozen=True)
class StructuredOperator:
    """A banded-plus-finite-rank operator in canonical form.

    Matrix entry (i, j) is ``bands[i-j].value_at(min(i, j))`` plus the sum of
    ``left[i] * conj(right[j])`` over the rank terms.  Finite bandwidth and
    bounded diagonals make every instance a bounded operator.
    """

    bands: dict = field(default_factory=dict)
    rank_terms: tuple = ()

    def __post_init__(self):
        bands = {}
        for offset, desc in dict(self.bands).items():
            if not isinstance(desc, DiagonalDescriptor):
                desc = DiagonalDescriptor(*desc)
            if not desc.is_zero():
                bands[int(offset)] = desc
        terms = tuple(
            t if isinstance(t, FiniteRankTerm) else FiniteRankTerm(*t)
            for t in self.rank_terms
        )
        object.__setattr__(self, "bands", bands)
        object.__setattr__(self, "rank_terms",
                           tuple(t for t in terms if not t.is_zero()))

    # -- structural metadata -------------------------------------------------

    @property
    def bandwidth(self) -> int:
        return max((abs(k) for k in self.bands), default=0)

    @property
    def max_prefix_len(self) -> int:
        return max((len(d.prefix) for d in self.bands.values()), default=0)

    @property
    def rank_support(self) -> int:
        return max((t.support() for t in self.rank_terms), default=0)

    @property
    def corner_size(self) -> int:
        """Size beyond which every entry is a pure band tail."""
        return max(self.max_prefix_len, self.rank_support)

    def band_tail(self, offset: int) -> complex:
        d = self.bands.get(offset)
        return d.tail if d is not None else 0j

    # -- pointwise access ----------------------------------------------------

    def band_entry(self, i: int, j: int) -> complex:
        d = self.bands.get(i - j)
        return d.value_at(min(i, j)) if d is not None else 0j

    def entry(self, i: int, j: int) -> complex:
        val = self.band_entry(i, j)
        for t in self.rank_terms:
            if i < len(t.left) and j < len(t.right):
                val += t.left[i] * t.right[j].conjugate()
        return val

    # -- exact algebra -------------------------------------------------------

    def adjoint(self) -> "StructuredOperator":
        bands = {-k: d.conjugated() for k, d in self.bands.items()}
        return StructuredOperator(bands, tuple(t.swapped() for t in self.rank_terms))

    def __add__(self, other: "StructuredOperator") -> "StructuredOperator":
        bands = {}
        for k in set(self.bands) | set(other.bands):
            a = self.bands.get(k, DiagonalDescriptor())
            b = other.bands.get(k, DiagonalDescriptor())
            n = max(len(a.prefix), len(b.prefix))
            prefix = tuple(a.value_at(m) + b.value_at(m) for m in range(n))
            bands[k] = DiagonalDescriptor(prefix, a.tail + b.tail)
        return StructuredOperator(bands, self.rank_terms + other.rank_terms)

    def __neg__(self) -> "StructuredOperator":
        return self.scaled(-1)

    def __sub__(self, other: "StructuredOperator") -> "StructuredOperator":
        return self + other.scaled(-1)

    def scaled(self, c) -> "StructuredOperator":
        c = _coerce(c)
        bands = {k: d.scaled(c) for k, d in self.bands.items()}
        terms = tuple(FiniteRankTerm(tuple(c * v for v in t.left), t.right)
                      for t in self.rank_terms)
        return StructuredOperator(bands, terms)

    def __mul__(self, c):
        return self.scaled(c)

    __rmul__ = __mul__

    def _band_apply(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        out = np.zeros(len(x) + self.bandwidth, dtype=complex)
        for j, xj in enumerate(x):
            if xj == 0:
                continue
            for k, d in self.bands.items():
                i = j + k
                if i >= 0:
                    out[i] += d.value_at(min(i, j)) * xj
        return out

    def apply(self, x) -> np.ndarray:
        """Exact image of a finitely supported vector (trailing zeros trimmed)."""
        x = np.asarray(x, dtype=complex)
        n_out = max(len(x) + self.bandwidth, self.rank_support, 1)
        out = np.zeros(n_out, dtype=complex)
        band_part = self._band_apply(x)
        out[: len(band_part)] += band_part
        for t in self.rank_terms:
            m = min(len(x), len(t.right))
            coeff = sum(x[j] * t.right[j].conjugate() for j in range(m))
            if coeff != 0:
                out[: len(t.left)] += coeff * np.asarray(t.left)
        nz = np.nonzero(out)[0]
        return out[: nz[-1] + 1] if len(nz) else np.zeros(0, dtype=complex)

    def compose(self, other: "StructuredOperator") -> "StructuredOperator":
        """Exact matrix product self @ other, closed in the class.

        Band tails multiply like Laurent polynomials; all boundary effects of
        the product land in prefixes of length at most
        max(prefix lengths) + combined bandwidth.
        """
        ka, kb = self.bandwidth, other.bandwidth
        m_bound = max(self.max_prefix_len, other.max_prefix_len) + ka + kb
        bands = {}
        for k in range(-(ka + kb), ka + kb + 1):
            tail = sum((self.band_tail(k1) * other.band_tail(k - k1)
                        for k1 in self.bands if (k - k1) in other.bands), 0j)
            prefix = []
            for m in range(m_bound):
                i = m + max(k, 0)
                j = m + max(-k, 0)
                lo = max(i - ka, j - kb, 0)
                hi = min(i + ka, j + kb)
                prefix.append(sum((self.band_entry(i, l) * other.band_entry(l, j)
                                   for l in range(lo, hi + 1)), 0j))
            bands[k] = DiagonalDescriptor(tuple(prefix), tail)

        terms = []
        band_adj = StructuredOperator(
            {-k: d.conjugated() for k, d in other.bands.items()})
        for t in other.rank_terms:                      # (band of self) @ term
            terms.append(FiniteRankTerm(tuple(self._band_apply(t.left)), t.right))
        for t in self.rank_terms:                       # term @ (band of other)
            terms.append(FiniteRankTerm(t.left, tuple(band_adj._band_apply(t.right))))
        for ta in self.rank_terms:                      # term @ term
            for tb in other.rank_terms:
                m = min(len(tb.left), len(ta.right))
                coeff = sum(tb.left[i] * ta.right[i].conjugate() for i in range(m))
                terms.append(FiniteRankTerm(tuple(coeff * v for v in ta.left),
                                            tb.right))
        return StructuredOperator(bands, tuple(terms))

    def __matmul__(self, other):
        return self.compose(other)

    # -- dense views ---------------------------------------------------------

    def truncate(self, n: int) -> np.ndarray:
        """Leading n-by-n corner as a dense complex matrix."""
        if n < 1:
            raise ValueError("truncation size must be >= 1")
        out = np.zeros((n, n), dtype=complex)
        for k, d in self.bands.items():
            length = n - abs(k)
            if length <= 0:
                continue
            vals = np.full(length, d.tail, dtype=complex)
            p = min(len(d.prefix), length)
            if p:
                vals[:p] = d.prefix[:p]
            if k >= 0:
                out[np.arange(k, n), np.arange(0, n - k)] = vals
            else:
                out[np.arange(0, n + k), np.arange(-k, n)] = vals
        for t in self.rank_terms:
            left = np.zeros(n, dtype=complex)
            right = np.zeros(n, dtype=complex)
            left[: min(n, len(t.left))] = t.left[: n]
            right[: min(n, len(t.right))] = t.right[: n]
            out += np.outer(left, right.conjugate())
        return out

    def is_zero(self, tol: float = 0.0) -> bool:
        """Entrywise zero test; exact when tol == 0.

        Checks all band tails plus one corner truncation that covers every
        prefix entry and the full rank-term support, so cancellations between
        bands and rank terms are detected.
        """
        if tol < 0:
            raise ValueError("tolerance must be >= 0")
        if any(abs(d.tail) > tol for d in self.bands.values()):
            return False
        n = self.corner_size + self.bandwidth + 1
        return bool(np.all(np.abs(self.truncate(n)) <= tol))

    def magnitude(self) -> float:
        """Crude scale bound: max entry magnitude over tails and the corner."""
        scale = max((abs(d.tail) for d in self.bands.values()), default=0.0)
        n = self.corner_size + self.bandwidth + 1
        return max(scale, float(np.max(np.abs(self.truncate(n)))))


# -- module-level operation names -------------------------------------------

def adjoint(t: StructuredOperator) -> StructuredOperator:
    return t.adjoint()


def add(a: StructuredOperator, b: StructuredOperator) -> StructuredOperator:
    return a + b


def scale(c, t: StructuredOperator) -> StructuredOperator:
    return t.scaled(c)


def compose(a: StructuredOperator, b: StructuredOperator) -> StructuredOperator:
    return a.compose(b)


def truncate(t: StructuredOperator, n: int) -> np.ndarray:
    return t.truncate(n)


def apply(t: StructuredOperator, x) -> np.ndarray:
    return t.apply(x)


def is_zero(t: StructuredOperator, tol: float = 0.0) -> bool:
    return t.is_zero(tol)


def self_commutator(t: StructuredOperator) -> StructuredOperator:
    """T*T - TT*, self-adjoint by construction (verified on the corner)."""
    d = t.adjoint().compose(t) - t.compose(t.adjoint())
    defect = d - d.adjoint()
    if not defect.is_zero(1e-12 * max(1.0, d.magnitude())):  # pragma: no cover
        raise AssertionError("self-commutator lost Hermitian symmetry")
    return d


def gram(t: StructuredOperator) -> StructuredOperator:
    """T*T."""
    return t.adjoint().compose(t)


def is_selfadjoint(t: StructuredOperator, tol: float = 0.0) -> bool:
    return (t - t.adjoint()).is_zero(tol)


def approx_equal(a: StructuredOperator, b: StructuredOperator, tol: float = 0.0) -> bool:
    return (a - b).is_zero(tol)


# -- constructors ------------------------------------------------------------

def zero() -> StructuredOperator:
    return StructuredOperator({})


def identity() -> StructuredOperator:
    return StructuredOperator({0: DiagonalDescriptor((), 1.0)})


def constant_diagonal(c) -> StructuredOperator:
    return StructuredOperator({0: DiagonalDescriptor((), c)})


def diagonal(prefix, tail) -> StructuredOperator:
    return StructuredOperator({0: DiagonalDescriptor(tuple(prefix), tail)})


def right_shift() -> StructuredOperator:
    return StructuredOperator({1: DiagonalDescriptor((), 1.0)})


def weighted_shift(weight_prefix, weight_tail) -> StructuredOperator:
    """Shift e_m -> w_m e_{m+1} with eventually constant weights."""
    return StructuredOperator({1: DiagonalDescriptor(tuple(weight_prefix),
                                                     weight_tail)})


def toeplitz(coeffs: dict) -> StructuredOperator:
    """Pure band operator from Laurent coefficients {offset: value}."""
    return StructuredOperator({k: DiagonalDescriptor((), c)
                               for k, c in coeffs.items()})


def rank_one(left, right) -> StructuredOperator:
    return StructuredOperator({}, (FiniteRankTerm(tuple(left), tuple(right)),))


def from_dense_corner(matrix) -> StructuredOperator:
    """Embed a finite matrix into the top-left corner (zero elsewhere)."""
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("corner matrix must be square")
    n = m.shape[0]
    bands = {}
    for k in range(-(n - 1), n):
        diag = np.diagonal(m, offset=-k)  # numpy offset is column - row
        bands[k] = DiagonalDescriptor(tuple(diag), 0.0)
    return StructuredOperator(bands)


def embed_at(t: StructuredOperator, start: int) -> StructuredOperator:
    """Shift an operator down the diagonal: entry (i, j) -> (i+start, j+start)."""
    if start < 0:
        raise ValueError("start must be >= 0")
    bands = {k: DiagonalDescriptor((0j,) * start + d.prefix, d.tail)
             for k, d in t.bands.items()}
    terms = tuple(FiniteRankTerm((0j,) * start + t_.left, (0j,) * start + t_.right)
                  for t_ in t.rank_terms)
    return StructuredOperator(bands, terms)


def unit_vector(i: int, n: int | None = None) -> np.ndarray:
    length = (i + 1) if n is None else n
    v = np.zeros(length, dtype=complex)
    v[i] = 1.0
    return v

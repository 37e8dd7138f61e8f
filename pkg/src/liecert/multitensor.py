"""Exact symmetric tensor algebra and incremental rational span tracking.

Symmetric tensors are stored sparsely as polynomials: a dual tensor of
degree d is the polynomial whose monomials are indexed by nondecreasing
index tuples, and a vector tensor of degree p acts on it as the product of
the corresponding partial derivatives.  An optional free dual slot turns
the purely symmetric tensor into an element of S^d V* (x) V*.

Contraction comes in two normalizations.  The raw one applies the
derivative operator as is; the polarized one divides by the falling
factorial d!/(d-p)!, which makes the result agree with plugging the
arguments of a vector monomial into the symmetric multilinear form of the
polynomial.  Both have the same kernel and image, which the tests check.

The span tracker keeps a reduced row echelon basis over the rationals,
remembers a witness per pivot row, and supports merging, so generator
streams can be consumed in deterministic batches with early termination.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction as Q
from itertools import combinations_with_replacement
from math import factorial

MultiIndex = tuple[int, ...]
SparseVec = dict[int, Q]


class DimensionMismatch(ValueError):
    """Tensor shapes that cannot be contracted against each other."""


def sym_basis(k: int, n: int) -> list[MultiIndex]:
    """All nondecreasing index tuples of length k over 0..n-1, in
    lexicographic order; there are C(n+k-1, k) of them."""
    if k < 0 or n < 1:
        raise DimensionMismatch(f"need k >= 0 and n >= 1, got k={k} n={n}")
    return list(combinations_with_replacement(range(n), k))


@dataclass
class SymTensor:
    """Sparse symmetric tensor of fixed degree over a fixed dimension.

    ``coeffs`` maps ``(multiindex, tail)`` to a rational, where ``tail`` is
    the empty tuple for purely symmetric tensors and a 1-tuple when the
    tensor carries a free dual slot.
    """

    degree: int
    dim: int
    variance: str  # "vector" | "dual"
    coeffs: dict[tuple[MultiIndex, tuple[int, ...]], Q] = field(default_factory=dict)
    free_slots: int = 0

    def __post_init__(self) -> None:
        if self.variance not in ("vector", "dual"):
            raise DimensionMismatch(f"bad variance {self.variance!r}")
        for (mi, tail), c in self.coeffs.items():
            assert len(mi) == self.degree and len(tail) == self.free_slots
            assert all(0 <= i < self.dim for i in mi + tail)
            assert tuple(sorted(mi)) == mi and c != 0

    def add_term(self, mi: MultiIndex, c: Q, tail: tuple[int, ...] = ()) -> None:
        key = (tuple(sorted(mi)), tail)
        w = self.coeffs.get(key, 0) + c
        if w:
            self.coeffs[key] = w
        else:
            self.coeffs.pop(key, None)

    def scaled(self, c: Q) -> "SymTensor":
        return SymTensor(
            self.degree,
            self.dim,
            self.variance,
            {k: c * v for k, v in self.coeffs.items()} if c else {},
            self.free_slots,
        )

    def plus(self, other: "SymTensor") -> "SymTensor":
        if (self.degree, self.dim, self.variance, self.free_slots) != (
            other.degree,
            other.dim,
            other.variance,
            other.free_slots,
        ):
            raise DimensionMismatch("cannot add tensors of different shapes")
        out = SymTensor(self.degree, self.dim, self.variance, dict(self.coeffs), self.free_slots)
        for (mi, tail), c in other.coeffs.items():
            out.add_term(mi, c, tail)
        return out

    def is_zero(self) -> bool:
        return not self.coeffs

    def proportional_to(self, other: "SymTensor") -> Q | None:
        """Nonzero ratio self = ratio * other, or None."""
        if self.is_zero() or other.is_zero():
            return None
        if set(self.coeffs) != set(other.coeffs):
            return None
        key = next(iter(other.coeffs))
        ratio = self.coeffs[key] / other.coeffs[key]
        if all(self.coeffs[k] == ratio * other.coeffs[k] for k in other.coeffs):
            return ratio
        return None


def dual_monomial(dim: int, mi: MultiIndex, c: Q = Q(1), tail: tuple[int, ...] = ()) -> SymTensor:
    t = SymTensor(len(mi), dim, "dual", {}, len(tail))
    t.add_term(tuple(sorted(mi)), c, tail)
    return t


def vector_monomial(dim: int, mi: MultiIndex, c: Q = Q(1)) -> SymTensor:
    t = SymTensor(len(mi), dim, "vector", {})
    t.add_term(tuple(sorted(mi)), c)
    return t


def _falling(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= n - i
    return out


def contract(T: SymTensor, W: SymTensor, normalization: str = "polarized") -> SymTensor:
    """Plug a degree-p vector tensor into a degree-d dual tensor, leaving a
    dual tensor of degree d - p (free slots untouched).

    Bilinear in both arguments.  ``normalization="polarized"`` divides the
    derivative action by d!/(d-p)! so that full contraction of a monomial
    against a pure power evaluates the polynomial on that vector.
    """
    if T.variance != "dual" or W.variance != "vector":
        raise DimensionMismatch("contract needs a dual T and a vector W")
    if T.dim != W.dim:
        raise DimensionMismatch(f"dimension mismatch {T.dim} != {W.dim}")
    if W.free_slots:
        raise DimensionMismatch("vector argument cannot carry free slots")
    if W.degree > T.degree:
        raise DimensionMismatch(
            f"cannot plug degree {W.degree} into symmetric degree {T.degree}"
        )
    if normalization not in ("polarized", "raw"):
        raise ValueError(f"unknown normalization {normalization!r}")

    out = SymTensor(T.degree - W.degree, T.dim, "dual", {}, T.free_slots)
    for (miW, _), cW in W.coeffs.items():
        countW = Counter(miW)
        for (miT, tail), cT in T.coeffs.items():
            countT = Counter(miT)
            if any(countT[i] < k for i, k in countW.items()):
                continue
            factor = 1
            for i, k in countW.items():
                factor *= _falling(countT[i], k)
            residual = countT - countW
            mi = tuple(sorted(residual.elements()))
            out.add_term(mi, cT * cW * factor, tail)
    if normalization == "polarized":
        scale = Q(factorial(T.degree - W.degree), factorial(T.degree))
        out = out.scaled(scale)
    return out


class SpanTracker:
    """Reduced row echelon span accumulator over sparse rational vectors.

    Rows are keyed by pivot, each normalized to pivot coefficient one and
    mutually reduced, so the row set is canonical for the span.  A witness
    string is logged per pivot.
    """

    def __init__(self, ambient: int):
        if ambient < 0:
            raise DimensionMismatch("ambient dimension must be nonnegative")
        self.ambient = ambient
        self.rows: dict[int, SparseVec] = {}
        self.witnesses: dict[int, str] = {}
        self.witness_log: list[str] = []

    @property
    def dimension(self) -> int:
        return len(self.rows)

    def reduce(self, v: SparseVec) -> SparseVec:
        """Remainder of v after elimination against the current rows."""
        out = dict(v)
        while out:
            p = min(out)
            row = self.rows.get(p)
            if row is None:
                return out
            c = out[p]
            for k, w in row.items():
                x = out.get(k, 0) - c * w
                if x:
                    out[k] = x
                else:
                    out.pop(k, None)
        return out

    def insert(self, v: SparseVec, witness: str | None = None) -> bool:
        """Add a vector; True iff the span grew."""
        for k in v:
            if not 0 <= k < self.ambient:
                raise DimensionMismatch(f"coordinate {k} outside ambient {self.ambient}")
        rem = self.reduce(v)
        if not rem:
            return False
        p = min(rem)
        inv = 1 / rem[p]
        row = {k: c * inv for k, c in rem.items()}
        for q, other in self.rows.items():
            c = other.get(p)
            if c:
                for k, w in row.items():
                    x = other.get(k, 0) - c * w
                    if x:
                        other[k] = x
                    else:
                        other.pop(k, None)
        self.rows[p] = row
        if witness is not None:
            self.witnesses[p] = witness
            self.witness_log.append(witness)
        return True

    def contains(self, v: SparseVec) -> bool:
        return not self.reduce(v)

    def merge(self, other: "SpanTracker") -> None:
        if other.ambient != self.ambient:
            raise DimensionMismatch("cannot merge trackers of different ambients")
        for p in sorted(other.rows):
            self.insert(other.rows[p], other.witnesses.get(p))

    def canonical_rows(self) -> list[SparseVec]:
        return [dict(self.rows[p]) for p in sorted(self.rows)]

    def ordered_witnesses(self) -> list[str]:
        return [self.witnesses[p] for p in sorted(self.rows) if p in self.witnesses]


def span_insert(tracker: SpanTracker, v: SparseVec, witness: str | None = None) -> bool:
    """Reduce v against the tracker; insert the remainder if nonzero."""
    return tracker.insert(v, witness)


def invert_rational_matrix(rows: list[list[Q]]) -> list[list[Q]]:
    """Exact inverse by Gauss-Jordan elimination; raises ArithmeticError on
    a singular matrix."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionMismatch("matrix must be square")
    aug = [[Q(x) for x in row] + [Q(1) if i == j else Q(0) for j in range(n)]
           for i, row in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise ArithmeticError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                c = aug[r][col]
                aug[r] = [x - c * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]

"""
sullivan.linalg – exact linear algebra over QQ and ZZ.

Every matrix is a SymPy ``DomainMatrix``: domain QQ plays the part of a
rational matrix, domain ZZ the part of an integer matrix.  Vectors handed
back to callers are lists of ``fractions.Fraction`` (dense) or
``{index: Fraction}`` dicts (sparse, used on the large degreewise
differentials).

Conventions
-----------
* kernel bases: one vector per free column, in column order, with that free
  variable set to 1 and the other free variables 0;
* solve: the canonical solution has every free variable equal to 0;
* "no solution" is the value ``None``.
"""

from __future__ import annotations
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Dict, List, Mapping, Sequence, Tuple, Union

from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from sullivan.errors import InconsistentComplexError, SingularMatrixError

RationalMatrix = DomainMatrix          # domain QQ
IntegerMatrix  = DomainMatrix          # domain ZZ
SparseVector   = Dict[int, Fraction]
Vector         = Union[Sequence[Rational], Mapping[int, Rational]]


# -------------------------------------------------- #
# conversions
# -------------------------------------------------- #
def to_qq(x: Rational):
    f = Fraction(x)
    return QQ(f.numerator, f.denominator)


def from_qq(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def _as_sparse(v: Vector) -> SparseVector:
    if isinstance(v, Mapping):
        return {int(i): Fraction(c) for i, c in v.items() if c}
    return {i: Fraction(c) for i, c in enumerate(v) if c}


def rational_matrix(rows: Sequence[Sequence[Rational]], ncols: int | None = None) -> RationalMatrix:
    """Dense QQ matrix from nested sequences (ncols needed only for 0 rows)."""
    ncols = len(rows[0]) if rows else (ncols or 0)
    data  = {i: {j: to_qq(c) for j, c in enumerate(row) if c} for i, row in enumerate(rows)}
    return sparse_rational_matrix(data, (len(rows), ncols))


def sparse_rational_matrix(entries: Mapping[int, Mapping[int, Rational]],
                           shape: Tuple[int, int]) -> RationalMatrix:
    """QQ matrix from ``{row: {col: value}}``; zero entries are dropped."""
    data = {}
    for i, row in entries.items():
        clean = {j: (c if not isinstance(c, (int, Fraction)) else to_qq(c))
                 for j, c in row.items() if c}
        if clean:
            data[i] = clean
    return DomainMatrix(data, shape, QQ)


def columns_matrix(vectors: Sequence[Vector], nrows: int) -> RationalMatrix:
    """QQ matrix whose j-th column is vectors[j]."""
    data: Dict[int, Dict[int, object]] = {}
    for j, v in enumerate(vectors):
        for i, c in _as_sparse(v).items():
            data.setdefault(i, {})[j] = to_qq(c)
    return DomainMatrix(data, (nrows, len(vectors)), QQ)


def integer_matrix(rows: Sequence[Sequence[int]], ncols: int | None = None) -> IntegerMatrix:
    ncols = len(rows[0]) if rows else (ncols or 0)
    return DomainMatrix([[ZZ(int(c)) for c in row] for row in rows], (len(rows), ncols), ZZ)


def entries(M: DomainMatrix) -> Dict[int, Dict[int, object]]:
    """Nonzero entries as ``{row: {col: domain element}}``."""
    return {i: dict(row) for i, row in M.to_sparse().rep.items() if row}


def to_rows(M: DomainMatrix) -> List[List[Fraction]]:
    """Dense list-of-lists view with Fraction entries (small matrices only)."""
    rows, cols = M.shape
    out = [[Fraction(0)] * cols for _ in range(rows)]
    for i, row in entries(M).items():
        for j, c in row.items():
            out[i][j] = from_qq(c) if M.domain == QQ else Fraction(int(c))
    return out


# -------------------------------------------------- #
# reduction
# -------------------------------------------------- #
@dataclass(frozen=True)
class Rref:
    matrix: RationalMatrix
    pivots: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rref(M: RationalMatrix) -> Rref:
    """Reduced row-echelon form, pivot columns, rank."""
    if M.domain != QQ:
        M = M.convert_to(QQ)
    rows, cols = M.shape
    if rows == 0 or cols == 0 or not entries(M):
        return Rref(DomainMatrix({}, (rows, cols), QQ), ())
    R, pivots = M.to_sparse().rref()
    return Rref(R, tuple(int(p) for p in pivots))


def rank(M: RationalMatrix) -> int:
    return rref(M).rank


def _kernel(M: RationalMatrix) -> List[SparseVector]:
    red    = rref(M)
    cols   = M.shape[1]
    pivots = red.pivots
    rows   = entries(red.matrix)
    pivot_set = set(pivots)

    # column f of the reduced matrix, restricted to pivot rows
    by_col: Dict[int, Dict[int, Fraction]] = {}
    for i, p in enumerate(pivots):
        for j, c in rows.get(i, {}).items():
            if j not in pivot_set:
                by_col.setdefault(j, {})[p] = -from_qq(c)

    basis = []
    for f in range(cols):
        if f in pivot_set:
            continue
        v = dict(by_col.get(f, {}))
        v[f] = Fraction(1)
        basis.append(v)
    return basis


def kernel_basis(M: RationalMatrix, *, sparse: bool = False) -> List[Vector]:
    """
    Canonical basis of ker M (free variables set to 1 in column order).
    Returns dense Fraction lists unless *sparse* is set.
    """
    basis = _kernel(M)
    if sparse:
        return basis
    cols = M.shape[1]
    return [[v.get(j, Fraction(0)) for j in range(cols)] for v in basis]


def solve(M: RationalMatrix, b: Vector) -> List[Fraction] | None:
    """
    Canonical solution of M·x = b (free variables 0), or None when the
    system is inconsistent.
    """
    rows, cols = M.shape
    rhs = _as_sparse(b)
    if not isinstance(b, Mapping) and len(b) != rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {rows}")

    aug = entries(M.convert_to(QQ) if M.domain != QQ else M)
    for i, c in rhs.items():
        aug.setdefault(i, {})[cols] = to_qq(c)
    red = rref(DomainMatrix(aug, (rows, cols + 1), QQ))
    if cols in red.pivots:
        return None

    x = [Fraction(0)] * cols
    reduced = entries(red.matrix)
    for i, p in enumerate(red.pivots):
        c = reduced.get(i, {}).get(cols)
        if c is not None:
            x[p] = from_qq(c)
    return x


def inverse(M: RationalMatrix) -> RationalMatrix:
    n, m = M.shape
    if n != m:
        raise SingularMatrixError(f"matrix of shape {M.shape} is not square")
    if n == 0:
        return M
    try:
        return M.convert_to(QQ).to_dense().inv()
    except DMNonInvertibleMatrixError as e:
        raise SingularMatrixError("matrix is not invertible") from e


# -------------------------------------------------- #
# quotients
# -------------------------------------------------- #
@dataclass(frozen=True)
class Quotient:
    dimension: int
    sub_rank: int
    ambient_rank: int
    representatives: Tuple[int, ...]     # indices into the ambient list

    def pick(self, ambient: Sequence[Vector]) -> List[Vector]:
        return [ambient[i] for i in self.representatives]


def quotient_dimension(sub: Sequence[Vector], ambient: Sequence[Vector], length: int) -> Quotient:
    """
    dim span(ambient) − dim span(sub), plus the ambient vectors that extend
    a basis of span(sub) to a basis of span(ambient) (earliest first).

    Raises InconsistentComplexError when span(sub) ⊄ span(ambient).
    """
    ambient_rank = rank(columns_matrix(list(ambient), length))
    joint = rref(columns_matrix(list(sub) + list(ambient), length))
    if joint.rank != ambient_rank:
        raise InconsistentComplexError(
            f"{joint.rank - ambient_rank} direction(s) of the subspace lie outside the ambient span"
        )
    n_sub = len(sub)
    sub_rank = sum(1 for p in joint.pivots if p < n_sub)
    reps = tuple(p - n_sub for p in joint.pivots if p >= n_sub)
    return Quotient(ambient_rank - sub_rank, sub_rank, ambient_rank, reps)


# -------------------------------------------------- #
# Smith normal form
# -------------------------------------------------- #
@dataclass(frozen=True)
class SnfResult:
    diagonal: Tuple[int, ...]
    left_transform: IntegerMatrix | None = None
    right_transform: IntegerMatrix | None = None

    @property
    def rank(self) -> int:
        return len(self.diagonal)


def _int_rows(A) -> List[List[int]]:
    if isinstance(A, DomainMatrix):
        rows, cols = A.shape
        out = [[0] * cols for _ in range(rows)]
        for i, row in entries(A).items():
            for j, c in row.items():
                out[i][j] = int(c)
        return out
    return [[int(c) for c in row] for row in A]


def _identity(n: int) -> List[List[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(A, *, transforms: bool = False) -> SnfResult:
    """
    Invariant factors of an integer matrix by row/column gcd elimination,
    always pivoting on the smallest nonzero absolute value.

    With *transforms* the unimodular L, R with L·A·R = diag are returned.
    """
    a = _int_rows(A)
    m = len(a)
    n = A.shape[1] if isinstance(A, DomainMatrix) else (len(a[0]) if a else 0)
    L = _identity(m) if transforms else None
    R = _identity(n) if transforms else None

    def add_row(dst, src, k):
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        if L is not None:
            L[dst] = [x + k * y for x, y in zip(L[dst], L[src])]

    def add_col(dst, src, k):
        for row in a:
            row[dst] += k * row[src]
        if R is not None:
            for row in R:
                row[dst] += k * row[src]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if L is not None:
            L[i], L[j] = L[j], L[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        if R is not None:
            for row in R:
                row[i], row[j] = row[j], row[i]

    diagonal: List[int] = []
    for s in range(min(m, n)):
        while True:
            pos, best = None, 0
            for i in range(s, m):
                for j in range(s, n):
                    v = abs(a[i][j])
                    if v and (best == 0 or v < best):
                        pos, best = (i, j), v
            if pos is None:
                break
            swap_rows(s, pos[0])
            swap_cols(s, pos[1])
            p = a[s][s]

            dirty = False
            for i in range(s + 1, m):
                if a[i][s]:
                    add_row(i, s, -(a[i][s] // p))
                    dirty = dirty or a[i][s] != 0
            for j in range(s + 1, n):
                if a[s][j]:
                    add_col(j, s, -(a[s][j] // p))
                    dirty = dirty or a[s][j] != 0
            if dirty:
                continue

            # row and column s are clear; enforce p | everything below-right
            bad = next(((i, j) for i in range(s + 1, m) for j in range(s + 1, n)
                        if a[i][j] % p), None)
            if bad is not None:
                add_row(s, bad[0], 1)
                continue
            if p < 0:
                a[s] = [-x for x in a[s]]
                if L is not None:
                    L[s] = [-x for x in L[s]]
            diagonal.append(a[s][s])
            break
        if pos is None:
            break

    if not transforms:
        return SnfResult(tuple(diagonal))
    return SnfResult(tuple(diagonal), integer_matrix(L, m), integer_matrix(R, n))


def diagonal_matrix(diagonal: Sequence[int], shape: Tuple[int, int]) -> IntegerMatrix:
    rows, cols = shape
    return integer_matrix([[diagonal[i] if i == j and i < len(diagonal) else 0
                            for j in range(cols)] for i in range(rows)], cols)

"""Exact matrices over Z and over cyclotomic fields.

Integer matrices carry the lattice algorithms (fraction-free determinant,
Hermite and Smith normal forms with transform tracking).  Field matrices
hold cyclotomic entries at a shared conductor and provide the elimination
algorithms (kernel, reduced echelon form, subspace intersection).  Pivoting
is deterministic everywhere: leftmost nonzero column, first nonzero row.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Optional, Sequence, Union

from ..errors import InputError, ShapeError
from .cyclotomic import CyclotomicScalar, Rational

_ZERO = Fraction(0)
_ONE = Fraction(1)

Vector = tuple[CyclotomicScalar, ...]


# ---------------------------------------------------------------------------
# integer matrices
# ---------------------------------------------------------------------------


class IntMatrix:
    """Immutable matrix with arbitrary-precision integer entries."""

    __slots__ = ("entries",)

    def __init__(self, rows: Iterable[Iterable[int]]):
        entries = tuple(tuple(int(x) for x in row) for row in rows)
        if entries and any(len(r) != len(entries[0]) for r in entries):
            raise ShapeError("ragged rows in integer matrix")
        self.entries = entries

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        bt = list(zip(*other.entries)) if other.entries else []
        return IntMatrix(
            [[sum(a * b for a, b in zip(row, col)) for col in bt] for row in self.entries]
        )

    def transpose(self) -> "IntMatrix":
        return IntMatrix(list(zip(*self.entries)) if self.entries else [])

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMatrix) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        return f"IntMatrix({list(list(r) for r in self.entries)})"


def int_det(m: IntMatrix) -> int:
    """Determinant by the fraction-free Bareiss elimination."""
    if m.rows != m.cols:
        raise ShapeError(f"determinant needs a square matrix, got {m.rows}x{m.cols}")
    n = m.rows
    if n == 0:
        return 1
    a = [list(row) for row in m.entries]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _hnf_upper(mat: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]]]:
    # Row-style echelon HNF: pivots positive, entries above a pivot in [0, pivot).
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    h = [list(r) for r in mat]
    u = [[1 if i == j else 0 for j in range(nrows)] for i in range(nrows)]

    def addrow(dst: int, src: int, q: int) -> None:
        if q:
            h[dst] = [x - q * y for x, y in zip(h[dst], h[src])]
            u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    r = 0
    for c in range(ncols):
        while True:
            nz = [i for i in range(r, nrows) if h[i][c] != 0]
            if not nz:
                break
            i = min(nz, key=lambda t: (abs(h[t][c]), t))
            if i != r:
                h[i], h[r] = h[r], h[i]
                u[i], u[r] = u[r], u[i]
            if len(nz) == 1:
                break
            for i in range(r + 1, nrows):
                if h[i][c]:
                    addrow(i, r, h[i][c] // h[r][c])
        if r < nrows and h[r][c] != 0:
            if h[r][c] < 0:
                h[r] = [-x for x in h[r]]
                u[r] = [-x for x in u[r]]
            for i in range(r):
                addrow(i, r, h[i][c] // h[r][c])
            r += 1
            if r == nrows:
                break
    return h, u


def hermite_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Lower-triangular Hermite normal form.

    Returns (H, U) with H = U @ m, U unimodular, pivots positive, and the
    entries below a pivot in its column reduced into [0, pivot).  The form
    is the row-echelon HNF mirrored through the antidiagonal, so for a
    square nonsingular input H is genuinely lower triangular.
    """
    rev = [list(reversed(row)) for row in reversed(m.entries)]
    if not rev:
        return IntMatrix([]), IntMatrix([])
    h, u = _hnf_upper(rev)
    back = lambda a: [list(reversed(row)) for row in reversed(a)]
    return IntMatrix(back(h)), IntMatrix(back(u))


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form: (D, U, V) with D = U @ m @ V diagonal, d1 | d2 | ...

    Diagonal entries are nonnegative; zero entries trail.  U and V are
    unimodular.  Pivot selection scans for the smallest absolute nonzero
    value with (row, col) as the tie-break, so the transforms are
    deterministic.
    """
    nrows, ncols = m.rows, m.cols
    a = [list(row) for row in m.entries]
    u = [[1 if i == j else 0 for j in range(nrows)] for i in range(nrows)]
    v = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]

    def row_add(dst: int, src: int, q: int) -> None:
        a[dst] = [x - q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def col_add(dst: int, src: int, q: int) -> None:
        for row in a:
            row[dst] -= q * row[src]
        for row in v:
            row[dst] -= q * row[src]

    def row_swap(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(nrows, ncols):
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                val = a[i][j]
                if val and (best is None or (abs(val), i, j) < best):
                    best = (abs(val), i, j)
        if best is None:
            break
        _, bi, bj = best
        if bi != t:
            row_swap(bi, t)
        if bj != t:
            col_swap(bj, t)

        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, nrows):
                while a[i][t]:
                    row_add(i, t, a[i][t] // a[t][t])
                    if a[i][t]:
                        row_swap(i, t)
                        dirty = True
            for j in range(t + 1, ncols):
                while a[t][j]:
                    col_add(j, t, a[t][j] // a[t][t])
                    if a[t][j]:
                        col_swap(j, t)
                        dirty = True

        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]

        bad = next(
            (
                (i, j)
                for i in range(t + 1, nrows)
                for j in range(t + 1, ncols)
                if a[i][j] % a[t][t]
            ),
            None,
        )
        if bad is not None:
            row_add(t, bad[0], -1)  # pull the offending row up and redo this step
            continue
        t += 1

    return IntMatrix(a), IntMatrix(u), IntMatrix(v)


def frac_inverse(rows: Sequence[Sequence[Union[int, Fraction]]]) -> list[list[Fraction]]:
    """Inverse of a square rational matrix by Gauss-Jordan elimination."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ShapeError("inverse needs a square matrix")
    a = [[Fraction(x) for x in row] + [ _ONE if i == j else _ZERO for j in range(n)]
         for i, row in enumerate(rows)]
    for c in range(n):
        pr = next((i for i in range(c, n) if a[i][c]), None)
        if pr is None:
            raise InputError("matrix is singular")
        a[c], a[pr] = a[pr], a[c]
        pv = a[c][c]
        a[c] = [x / pv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [row[n:] for row in a]


def int_inverse_unimodular(m: IntMatrix) -> IntMatrix:
    """Inverse of a unimodular integer matrix, returned over Z."""
    inv = frac_inverse(m.entries)
    out = []
    for row in inv:
        for x in row:
            if x.denominator != 1:
                raise InputError("matrix is not unimodular")
        out.append([x.numerator for x in row])
    return IntMatrix(out)


# ---------------------------------------------------------------------------
# field matrices
# ---------------------------------------------------------------------------

_EntryLike = Union[CyclotomicScalar, Fraction, int]


class FieldMatrix:
    """Immutable matrix over a cyclotomic field.

    All entries share one conductor; construction and binary operations
    promote to the least common multiple as needed.
    """

    __slots__ = ("nrows", "ncols", "conductor", "entries", "_hashed")

    def __init__(self, entries: tuple[tuple[CyclotomicScalar, ...], ...], conductor: int):
        self.entries = entries
        self.conductor = conductor
        self.nrows = len(entries)
        self.ncols = len(entries[0]) if entries else 0
        self._hashed: Optional[int] = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[_EntryLike]]) -> "FieldMatrix":
        coerced = [[CyclotomicScalar.coerce(x) for x in row] for row in rows]
        if coerced and any(len(r) != len(coerced[0]) for r in coerced):
            raise ShapeError("ragged rows in field matrix")
        m = 1
        for row in coerced:
            for x in row:
                m = lcm(m, x.conductor)
        ent = tuple(tuple(x.promote(m) for x in row) for row in coerced)
        return cls(ent, m)

    @classmethod
    def identity(cls, n: int) -> "FieldMatrix":
        one, zero = CyclotomicScalar.one(), CyclotomicScalar.zero()
        return cls(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)), 1)

    @classmethod
    def diagonal(cls, scalars: Sequence[_EntryLike]) -> "FieldMatrix":
        vals = [CyclotomicScalar.coerce(s) for s in scalars]
        n = len(vals)
        zero = CyclotomicScalar.zero()
        return cls.from_rows(
            [[vals[i] if i == j else zero for j in range(n)] for i in range(n)]
        )

    @classmethod
    def scalar_matrix(cls, n: int, s: _EntryLike) -> "FieldMatrix":
        return cls.diagonal([s] * n)

    @classmethod
    def from_diag_exponents(cls, d: int, exponents: Sequence[int]) -> "FieldMatrix":
        """diag(zeta_d^a) for the given exponent tuple."""
        return cls.diagonal(
            [CyclotomicScalar.root_of_unity(d, a) for a in exponents]
        )

    @classmethod
    def permutation(cls, perm: Sequence[int]) -> "FieldMatrix":
        """Matrix sending coordinate line j to line perm[j] (0-based)."""
        n = len(perm)
        if sorted(perm) != list(range(n)):
            raise InputError(f"not a permutation: {perm}")
        one, zero = CyclotomicScalar.one(), CyclotomicScalar.zero()
        return cls(
            tuple(
                tuple(one if perm[j] == i else zero for j in range(n)) for i in range(n)
            ),
            1,
        )

    @classmethod
    def block_diag(cls, blocks: Sequence["FieldMatrix"]) -> "FieldMatrix":
        n = sum(b.nrows for b in blocks)
        zero = CyclotomicScalar.zero()
        rows = [[zero] * n for _ in range(n)]
        off = 0
        for b in blocks:
            if b.nrows != b.ncols:
                raise ShapeError("block_diag expects square blocks")
            for i in range(b.nrows):
                for j in range(b.ncols):
                    rows[off + i][off + j] = b.entries[i][j]
            off += b.nrows
        return cls.from_rows(rows)

    # -- basics --------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def promote(self, m: int) -> "FieldMatrix":
        if m == self.conductor:
            return self
        return FieldMatrix(
            tuple(tuple(x.promote(m) for x in row) for row in self.entries), m
        )

    def _pair(self, other: "FieldMatrix"):
        if self.conductor == other.conductor:
            return self, other
        m = lcm(self.conductor, other.conductor)
        return self.promote(m), other.promote(m)

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        if self.ncols != other.nrows:
            raise ShapeError(
                f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}"
            )
        a, b = self._pair(other)
        zero = CyclotomicScalar.zero().promote(a.conductor)
        out = [[zero] * b.ncols for _ in range(a.nrows)]
        for i in range(a.nrows):
            arow = a.entries[i]
            orow = out[i]
            for k in range(a.ncols):
                aik = arow[k]
                if aik.is_zero():
                    continue
                brow = b.entries[k]
                for j in range(b.ncols):
                    bkj = brow[j]
                    if not bkj.is_zero():
                        p = aik * bkj
                        # assign, not add, on first contribution: adding to the
                        # zero seed would discard the product's root memo
                        orow[j] = p if orow[j] is zero else orow[j] + p
        return FieldMatrix(tuple(tuple(row) for row in out), a.conductor)

    def __add__(self, other: "FieldMatrix") -> "FieldMatrix":
        if self.shape != other.shape:
            raise ShapeError("shape mismatch in matrix addition")
        a, b = self._pair(other)
        return FieldMatrix(
            tuple(
                tuple(x + y for x, y in zip(ra, rb))
                for ra, rb in zip(a.entries, b.entries)
            ),
            a.conductor,
        )

    def __sub__(self, other: "FieldMatrix") -> "FieldMatrix":
        return self + (-other)

    def __neg__(self) -> "FieldMatrix":
        return FieldMatrix(
            tuple(tuple(-x for x in row) for row in self.entries), self.conductor
        )

    def scale(self, s: _EntryLike) -> "FieldMatrix":
        s = CyclotomicScalar.coerce(s)
        m = lcm(self.conductor, s.conductor)
        a = self.promote(m)
        s = s.promote(m)
        return FieldMatrix(
            tuple(tuple(s * x for x in row) for row in a.entries), m
        )

    def transpose(self) -> "FieldMatrix":
        return FieldMatrix(tuple(zip(*self.entries)) if self.entries else (), self.conductor)

    def trace(self) -> CyclotomicScalar:
        if self.nrows != self.ncols:
            raise ShapeError("trace needs a square matrix")
        t = CyclotomicScalar.zero().promote(self.conductor)
        for i in range(self.nrows):
            t = t + self.entries[i][i]
        return t

    def det(self) -> CyclotomicScalar:
        if self.nrows != self.ncols:
            raise ShapeError("determinant needs a square matrix")
        n = self.nrows
        if n == 0:
            return CyclotomicScalar.one()
        if n <= 4:
            return _det_cofactor(self.entries, list(range(n)), list(range(n)))
        return _det_eliminate(self)

    def inverse(self) -> "FieldMatrix":
        n = self.nrows
        if n != self.ncols:
            raise ShapeError("inverse needs a square matrix")
        one = CyclotomicScalar.one().promote(self.conductor)
        zero = CyclotomicScalar.zero().promote(self.conductor)
        a = [list(row) + [one if i == j else zero for j in range(n)]
             for i, row in enumerate(self.entries)]
        for c in range(n):
            pr = next((i for i in range(c, n) if not a[i][c].is_zero()), None)
            if pr is None:
                raise ZeroDivisionError("matrix is singular")
            a[c], a[pr] = a[pr], a[c]
            pv_inv = a[c][c].inverse()
            a[c] = [x * pv_inv for x in a[c]]
            for i in range(n):
                if i != c and not a[i][c].is_zero():
                    f = a[i][c]
                    a[i] = [x - f * y for x, y in zip(a[i], a[c])]
        return FieldMatrix.from_rows([row[n:] for row in a])

    def power(self, k: int) -> "FieldMatrix":
        if self.nrows != self.ncols:
            raise ShapeError("power needs a square matrix")
        if k < 0:
            return self.inverse().power(-k)
        result: Optional[FieldMatrix] = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else result @ base
            k >>= 1
            if k:
                base = base @ base
        if result is None:
            return FieldMatrix.identity(self.nrows).promote(self.conductor)
        return result

    # -- structure predicates --------------------------------------------------

    def is_identity(self) -> bool:
        return all(
            (self.entries[i][j].is_one() if i == j else self.entries[i][j].is_zero())
            for i in range(self.nrows)
            for j in range(self.ncols)
        )

    def is_zero(self) -> bool:
        return all(x.is_zero() for row in self.entries for x in row)

    def is_diagonal(self) -> bool:
        return all(
            self.entries[i][j].is_zero()
            for i in range(self.nrows)
            for j in range(self.ncols)
            if i != j
        )

    def is_scalar(self) -> bool:
        if self.nrows != self.ncols or not self.is_diagonal():
            return False
        first = self.entries[0][0]
        return all(self.entries[i][i] == first for i in range(1, self.nrows))

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(self.entries[i][j] for i in range(self.nrows))

    def delete_row_col(self, i: int, j: int) -> "FieldMatrix":
        return FieldMatrix(
            tuple(
                tuple(x for cj, x in enumerate(row) if cj != j)
                for ri, row in enumerate(self.entries)
                if ri != i
            ),
            self.conductor,
        )

    # -- keys and dunders --------------------------------------------------------

    def sort_key(self):
        """Lexicographic key on entries at this matrix's own conductor."""
        return tuple(x.coeffs for row in self.entries for x in row)

    def canonical_key(self):
        """Conductor-independent identity key (safe across groups)."""
        return (
            self.nrows,
            self.ncols,
        ) + tuple(x.canonical_key() for row in self.entries for x in row)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        if self.conductor == other.conductor:
            return self.entries == other.entries
        a, b = self._pair(other)
        return a.entries == b.entries

    def __hash__(self) -> int:
        if self._hashed is None:
            self._hashed = hash(self.canonical_key())
        return self._hashed

    def __repr__(self) -> str:
        return f"FieldMatrix({self.nrows}x{self.ncols}, conductor={self.conductor})"


def _det_cofactor(entries, rows: list[int], cols: list[int]) -> CyclotomicScalar:
    if len(rows) == 1:
        return entries[rows[0]][cols[0]]
    acc = None
    r0 = rows[0]
    sign = 1
    for idx, c in enumerate(cols):
        x = entries[r0][c]
        if not x.is_zero():
            sub = _det_cofactor(entries, rows[1:], cols[:idx] + cols[idx + 1 :])
            term = x * sub
            if sign < 0:
                term = -term
            acc = term if acc is None else acc + term
        sign = -sign
    if acc is None:
        return CyclotomicScalar.zero()
    return acc


def _det_eliminate(m: FieldMatrix) -> CyclotomicScalar:
    n = m.nrows
    a = [list(row) for row in m.entries]
    det = CyclotomicScalar.one().promote(m.conductor)
    negate = False
    for c in range(n):
        pr = next((i for i in range(c, n) if not a[i][c].is_zero()), None)
        if pr is None:
            return CyclotomicScalar.zero()
        if pr != c:
            a[c], a[pr] = a[pr], a[c]
            negate = not negate
        pv = a[c][c]
        det = det * pv
        inv = pv.inverse()
        for i in range(c + 1, n):
            if not a[i][c].is_zero():
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return -det if negate else det


# ---------------------------------------------------------------------------
# elimination over the field: echelon forms, kernels, subspaces
# ---------------------------------------------------------------------------


def rref(m: FieldMatrix) -> tuple[tuple[Vector, ...], tuple[int, ...]]:
    """Reduced row echelon form of m; returns (rows, pivot column indices)."""
    a = [list(row) for row in m.entries]
    nrows, ncols = m.nrows, m.ncols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if not a[i][c].is_zero()), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = a[r][c].inverse()
        a[r] = [x * inv for x in a[r]]
        for i in range(nrows):
            if i != r and not a[i][c].is_zero():
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return tuple(tuple(row) for row in a), tuple(pivots)


def rank(m: FieldMatrix) -> int:
    return len(rref(m)[1])


def kernel(m: FieldMatrix) -> tuple[Vector, ...]:
    """Deterministic reduced basis of the right kernel {x : m @ x = 0}."""
    rows, pivots = rref(m)
    free = [c for c in range(m.ncols) if c not in pivots]
    zero = CyclotomicScalar.zero()
    one = CyclotomicScalar.one()
    basis = []
    for f in free:
        v = [zero] * m.ncols
        v[f] = one
        for r, c in enumerate(pivots):
            v[c] = -rows[r][f]
        basis.append(tuple(v))
    return tuple(basis)


def matrix_from_columns(columns: Sequence[Vector]) -> FieldMatrix:
    if not columns:
        raise ShapeError("need at least one column")
    n = len(columns[0])
    if any(len(c) != n for c in columns):
        raise ShapeError("columns of unequal length")
    return FieldMatrix.from_rows(
        [[columns[j][i] for j in range(len(columns))] for i in range(n)]
    )


def matrix_from_rows_of(vectors: Sequence[Vector]) -> FieldMatrix:
    return FieldMatrix.from_rows([list(v) for v in vectors])


def span_echelon(vectors: Sequence[Vector]) -> tuple[Vector, ...]:
    """Deterministic echelon basis of the span of the given vectors."""
    if not vectors:
        return ()
    rows, pivots = rref(matrix_from_rows_of(vectors))
    return tuple(rows[: len(pivots)])


def in_span(basis_echelon: Sequence[Vector], v: Vector) -> bool:
    """Membership test against an echelon basis (as produced by span_echelon)."""
    work = list(v)
    for row in basis_echelon:
        lead = next((j for j, x in enumerate(row) if not x.is_zero()), None)
        if lead is None:
            continue
        if not work[lead].is_zero():
            f = work[lead]  # row has a unit leading entry
            work = [x - f * y for x, y in zip(work, row)]
    return all(x.is_zero() for x in work)


def solve_linear(a: FieldMatrix, b: Vector) -> Optional[Vector]:
    """One solution x of a @ x = b, or None when inconsistent."""
    if a.nrows != len(b):
        raise ShapeError("right-hand side length mismatch")
    aug = FieldMatrix.from_rows(
        [list(a.entries[i]) + [b[i]] for i in range(a.nrows)]
    )
    rows, pivots = rref(aug)
    if a.ncols in pivots:
        return None
    zero = CyclotomicScalar.zero()
    x = [zero] * a.ncols
    for r, c in enumerate(pivots):
        x[c] = rows[r][a.ncols]
    return tuple(x)


def subspace_intersection(
    basis_a: Sequence[Vector], basis_b: Sequence[Vector]
) -> tuple[Vector, ...]:
    """Echelon basis of span(basis_a) intersected with span(basis_b)."""
    if not basis_a or not basis_b:
        return ()
    n = len(basis_a[0])
    if any(len(v) != n for v in basis_a) or any(len(v) != n for v in basis_b):
        raise ShapeError("ambient dimension mismatch in subspace intersection")
    stacked = matrix_from_columns(list(basis_a) + list(basis_b))
    meet = []
    p = len(basis_a)
    zero_vec = tuple(CyclotomicScalar.zero() for _ in range(n))
    for kv in kernel(stacked):
        w = list(zero_vec)
        for i in range(p):
            if not kv[i].is_zero():
                w = [x + kv[i] * y for x, y in zip(w, basis_a[i])]
        meet.append(tuple(w))
    return span_echelon(meet)


def subspace_dim(vectors: Sequence[Vector]) -> int:
    return len(span_echelon(vectors))

"""Exact linear algebra over the rationals.

Every matrix in the package is a :class:`RatMatrix`: an immutable, row-major
table of :class:`fractions.Fraction`.  Row reduction always runs to reduced
row echelon form with pivots chosen left to right, so kernels, solutions and
subspace bases are canonical and reproducible.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


class RatMatrix:
    """Immutable rows x cols matrix of rationals."""

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, rows: int, cols: int, data: Iterable[Iterable] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix shape")
        if data is None:
            body = tuple((_ZERO,) * cols for _ in range(rows))
        else:
            body = tuple(tuple(_frac(x) for x in row) for row in data)
            if len(body) != rows or any(len(r) != cols for r in body):
                raise ValueError(f"data does not have shape {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        self._data = body
        self._hash = None

    # construction -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> RatMatrix:
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, rows)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> RatMatrix:
        return cls(len(columns), rows, columns).T if columns else cls(rows, 0)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> RatMatrix:
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> RatMatrix:
        return cls(n, n, ((_ONE if i == j else _ZERO for j in range(n)) for i in range(n)))

    @classmethod
    def column(cls, entries: Sequence) -> RatMatrix:
        return cls(len(entries), 1, ((x,) for x in entries))

    # access -------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx: tuple[int, int]) -> Fraction:
        i, j = idx
        return self._data[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._data[i]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self._data)

    def to_lists(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def entries(self) -> tuple[Fraction, ...]:
        """Row-major flattening."""
        return tuple(x for r in self._data for x in r)

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.col(j) for j in range(self.cols)]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> RatMatrix:
        return RatMatrix(len(rows), len(cols), ((self._data[i][j] for j in cols) for i in rows))

    def __iter__(self):
        return iter(self._data)

    # comparison ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._data))
        return self._hash

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._data for x in r)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self._data)
        return f"RatMatrix({self.rows}x{self.cols}: [{body}])"

    # arithmetic ---------------------------------------------------------

    def __add__(self, other: RatMatrix) -> RatMatrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return RatMatrix(self.rows, self.cols,
                         (tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)))

    def __sub__(self, other: RatMatrix) -> RatMatrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} - {other.shape}")
        return RatMatrix(self.rows, self.cols,
                         (tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)))

    def __neg__(self) -> RatMatrix:
        return RatMatrix(self.rows, self.cols, (tuple(-a for a in r) for r in self._data))

    def scale(self, c) -> RatMatrix:
        c = _frac(c)
        if c == 1:
            return self
        return RatMatrix(self.rows, self.cols, (tuple(c * a for a in r) for r in self._data))

    def __mul__(self, c) -> RatMatrix:
        if isinstance(c, RatMatrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other: RatMatrix) -> RatMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = other.cols
        odata = other._data
        out = []
        for r in self._data:
            acc = [_ZERO] * ocols
            for k, a in enumerate(r):
                if a == 0:
                    continue
                orow = odata[k]
                for j in range(ocols):
                    b = orow[j]
                    if b:
                        acc[j] += a * b
            out.append(acc)
        return RatMatrix(self.rows, ocols, out)

    @property
    def T(self) -> RatMatrix:
        return RatMatrix(self.cols, self.rows, zip(*self._data)) if self.rows else RatMatrix(self.cols, 0)

    def trace(self) -> Fraction:
        if self.rows != self.cols:
            raise ValueError("trace of a non-square matrix")
        return sum((self._data[i][i] for i in range(self.rows)), _ZERO)

    def apply(self, vec: Sequence) -> tuple[Fraction, ...]:
        """Matrix times column vector given as a sequence."""
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum((a * b for a, b in zip(r, vec) if a and b), _ZERO) for r in self._data)


# ---------------------------------------------------------------------------
# assembling


def hstack(mats: Sequence[RatMatrix], rows: int | None = None) -> RatMatrix:
    if not mats:
        return RatMatrix(rows or 0, 0)
    r = mats[0].rows
    if any(m.rows != r for m in mats):
        raise ValueError("hstack row mismatch")
    cols = sum(m.cols for m in mats)
    return RatMatrix(r, cols, (sum((m.row(i) for m in mats), ()) for i in range(r)))


def vstack(mats: Sequence[RatMatrix], cols: int | None = None) -> RatMatrix:
    if not mats:
        return RatMatrix(0, cols or 0)
    c = mats[0].cols
    if any(m.cols != c for m in mats):
        raise ValueError("vstack column mismatch")
    return RatMatrix(sum(m.rows for m in mats), c, (row for m in mats for row in m))


def block(blocks: Sequence[Sequence[RatMatrix]], row_sizes: Sequence[int], col_sizes: Sequence[int]) -> RatMatrix:
    """Assemble a block matrix; ``blocks[i][j]`` must be row_sizes[i] x col_sizes[j]."""
    out = []
    for i, rs in enumerate(row_sizes):
        for k in range(rs):
            line: list[Fraction] = []
            for j, cs in enumerate(col_sizes):
                b = blocks[i][j]
                if b.shape != (rs, cs):
                    raise ValueError(f"block ({i},{j}) has shape {b.shape}, expected {(rs, cs)}")
                line.extend(b.row(k))
            out.append(line)
    return RatMatrix(sum(row_sizes), sum(col_sizes), out)


def block_diag(mats: Sequence[RatMatrix]) -> RatMatrix:
    rs = [m.rows for m in mats]
    cs = [m.cols for m in mats]
    blocks = [[m if i == j else RatMatrix(rs[i], cs[j]) for j in range(len(mats))]
              for i, m in enumerate(mats)]
    return block(blocks, rs, cs)


def kron(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    out = []
    for ra in a:
        for rb in b:
            out.append([x * y for x in ra for y in rb])
    return RatMatrix(a.rows * b.rows, a.cols * b.cols, out)


def kron_vec(u: Sequence, v: Sequence) -> tuple[Fraction, ...]:
    return tuple(_frac(x) * _frac(y) for x in u for y in v)


# ---------------------------------------------------------------------------
# elimination


def _rref(rows: list[list[Fraction]], ncols: int, pivot_limit: int | None = None):
    """Reduce ``rows`` in place; return pivot columns.

    Pivots are only searched among the first ``pivot_limit`` columns.
    """
    limit = ncols if pivot_limit is None else pivot_limit
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(limit):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        prow = rows[r]
        inv = 1 / prow[c]
        if inv != 1:
            prow = [x * inv if x else x for x in prow]
            rows[r] = prow
        nz = [j for j in range(c, ncols) if prow[j] != 0]
        for i in range(nrows):
            if i == r:
                continue
            f = rows[i][c]
            if f == 0:
                continue
            ri = rows[i]
            for j in nz:
                ri[j] -= f * prow[j]
        pivots.append(c)
        r += 1
    return pivots


def rref(m: RatMatrix) -> tuple[RatMatrix, tuple[int, ...]]:
    rows = m.to_lists()
    piv = _rref(rows, m.cols)
    return RatMatrix(m.rows, m.cols, rows), tuple(piv)


def rank(m: RatMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    # eliminate along the shorter side
    rows = m.to_lists() if m.rows <= m.cols else m.T.to_lists()
    ncols = max(m.rows, m.cols)
    return len(_rref(rows, ncols))


def kernel_basis(m: RatMatrix) -> RatMatrix:
    """Canonical basis of the right kernel, as the columns of the result.

    One basis vector per free column f of the reduced echelon form: it has a 1
    in position f, zeros at the other free positions, and is determined at
    the pivot positions.
    """
    n = m.cols
    rows = m.to_lists()
    piv = _rref(rows, n)
    pivset = set(piv)
    free = [j for j in range(n) if j not in pivset]
    vecs = []
    for f in free:
        v = [_ZERO] * n
        v[f] = _ONE
        for r, p in enumerate(piv):
            v[p] = -rows[r][f]
        vecs.append(v)
    return RatMatrix(len(vecs), n, vecs).T if vecs else RatMatrix(n, 0)


def solve(m: RatMatrix, b: RatMatrix) -> RatMatrix | None:
    """Some x with m @ x == b, free variables set to zero; None if inconsistent."""
    if b.rows != m.rows:
        raise ValueError("solve: row count mismatch")
    n = m.cols
    rows = [list(r) + list(s) for r, s in zip(m, b)]
    piv = _rref(rows, n + b.cols, pivot_limit=n)
    for r in range(len(piv), m.rows):
        if any(x != 0 for x in rows[r][n:]):
            return None
    x = [[_ZERO] * b.cols for _ in range(n)]
    for r, p in enumerate(piv):
        x[p] = rows[r][n:]
    return RatMatrix(n, b.cols, x)


def inverse(m: RatMatrix) -> RatMatrix | None:
    if m.rows != m.cols:
        return None
    n = m.rows
    rows = [list(r) + [_ONE if i == j else _ZERO for j in range(n)] for i, r in enumerate(m)]
    piv = _rref(rows, 2 * n, pivot_limit=n)
    if len(piv) < n:
        return None
    return RatMatrix(n, n, (r[n:] for r in rows))


def is_invertible(m: RatMatrix) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


def column_basis(m: RatMatrix) -> RatMatrix:
    """The pivot columns of ``m``: a canonical basis of its column space."""
    _, piv = rref(m)
    return m.submatrix(range(m.rows), piv)


def in_column_space(basis: RatMatrix, vecs: RatMatrix) -> bool:
    return solve(basis, vecs) is not None


def nullity(m: RatMatrix) -> int:
    return m.cols - rank(m)

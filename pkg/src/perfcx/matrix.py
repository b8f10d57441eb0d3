"""Dense immutable matrices over a ground ring."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionMismatch, RingMismatch


@dataclass(frozen=True)
class Matrix:
    ring: object
    nrows: int
    ncols: int
    rows: tuple  # tuple of row tuples

    def __post_init__(self):
        if len(self.rows) != self.nrows or any(len(r) != self.ncols for r in self.rows):
            raise DimensionMismatch(f"entries do not fill a {self.nrows}x{self.ncols} grid")

    @classmethod
    def from_rows(cls, ring, rows, ncols=None):
        rows = tuple(tuple(r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls(ring, len(rows), ncols, rows)

    @classmethod
    def zeros(cls, ring, m, n):
        z = ring.zero
        return cls(ring, m, n, tuple((z,) * n for _ in range(m)))

    @classmethod
    def identity(cls, ring, n):
        z, o = ring.zero, ring.one
        return cls(ring, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def diagonal(cls, ring, entries, m=None, n=None):
        k = len(entries)
        m = k if m is None else m
        n = k if n is None else n
        z = ring.zero
        return cls(ring, m, n, tuple(tuple(entries[i] if i == j and i < k else z for j in range(n)) for i in range(m)))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j):
        return tuple(r[j] for r in self.rows)

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def is_zero(self):
        iz = self.ring.is_zero
        return all(iz(x) for r in self.rows for x in r)

    def transpose(self):
        if not self.nrows:
            return Matrix(self.ring, self.ncols, 0, tuple(() for _ in range(self.ncols)))
        return Matrix(self.ring, self.ncols, self.nrows, tuple(zip(*self.rows)))

    def _check(self, other):
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring!r} vs {other.ring!r}")

    def __matmul__(self, other):
        self._check(other)
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        R = self.ring
        add, mul, z = R.add, R.mul, R.zero
        cols = other.columns()
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = z
                for x, y in zip(r, c):
                    if x != z and y != z:
                        acc = add(acc, mul(x, y))
                row.append(acc)
            out.append(tuple(row))
        return Matrix(R, self.nrows, other.ncols, tuple(out))

    def __add__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        add = self.ring.add
        return Matrix(self.ring, self.nrows, self.ncols,
                      tuple(tuple(add(x, y) for x, y in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __neg__(self):
        neg = self.ring.neg
        return Matrix(self.ring, self.nrows, self.ncols, tuple(tuple(neg(x) for x in r) for r in self.rows))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        mul = self.ring.mul
        return Matrix(self.ring, self.nrows, self.ncols, tuple(tuple(mul(c, x) for x in r) for r in self.rows))

    def apply(self, vec):
        """Matrix times column vector (tuple)."""
        R = self.ring
        out = []
        for r in self.rows:
            acc = R.zero
            for x, y in zip(r, vec):
                acc = R.add(acc, R.mul(x, y))
            out.append(acc)
        return tuple(out)

    def map_entries(self, fn, ring):
        return Matrix(ring, self.nrows, self.ncols, tuple(tuple(fn(x) for x in r) for r in self.rows))

    def to_lists(self):
        return [list(r) for r in self.rows]


def block(ring, grid, row_sizes, col_sizes):
    """Assemble a block matrix; ``grid[i][j]`` is a Matrix or None (zero block)."""
    z = ring.zero
    out = []
    for i, m in enumerate(row_sizes):
        for r in range(m):
            row = []
            for j, n in enumerate(col_sizes):
                blk = grid[i][j]
                if blk is None:
                    row.extend((z,) * n)
                else:
                    if blk.shape != (m, n):
                        raise DimensionMismatch(f"block ({i},{j}) has shape {blk.shape}, expected {(m, n)}")
                    row.extend(blk.rows[r])
            out.append(tuple(row))
    return Matrix(ring, sum(row_sizes), sum(col_sizes), tuple(out))


def kron(a: Matrix, b: Matrix) -> Matrix:
    R = a.ring
    mul = R.mul
    rows = []
    for ra in a.rows:
        for rb in b.rows:
            rows.append(tuple(mul(x, y) for x in ra for y in rb))
    return Matrix(R, a.nrows * b.nrows, a.ncols * b.ncols, tuple(rows))


def det(m: Matrix):
    """Determinant by cofactor-free fraction-free (Bareiss) elimination over Z."""
    n = m.nrows
    if n != m.ncols:
        raise DimensionMismatch("determinant of a non-square matrix")
    if n == 0:
        return 1
    a = [list(r) for r in m.rows]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]

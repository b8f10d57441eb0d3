"""Smith normal form, column Hermite normal form and integer lattices."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionMismatch, RingMismatch
from .matrix import Matrix, block
from .rings import ZZ, LocalQuotient, Product, _PID


@dataclass(frozen=True)
class SNF:
    """U @ M @ V == D, with Uinv, Vinv the inverses of U and V."""

    U: Matrix
    D: Matrix
    V: Matrix
    Uinv: Matrix
    Vinv: Matrix
    diag: tuple  # nonzero diagonal entries d_1 | d_2 | ...

    @property
    def rank(self) -> int:
        return len(self.diag)


class _Reducer:
    """Mutable elimination state for SNF; row/column ops mirrored into U, V and inverses."""

    def __init__(self, ring, A: Matrix, track_inverses: bool):
        self.R = ring
        self.m, self.n = A.shape
        self.a = [list(r) for r in A.rows]
        self.inv = track_inverses
        eye = lambda k: [[ring.one if i == j else ring.zero for j in range(k)] for i in range(k)]
        self.U, self.V = eye(self.m), eye(self.n)
        self.Ui = eye(self.m) if track_inverses else None
        self.Vi = eye(self.n) if track_inverses else None

    # row_i += c * row_j
    def row_add(self, i, j, c):
        R = self.R
        add, mul = R.add, R.mul
        for mat in (self.a, self.U):
            ri, rj = mat[i], mat[j]
            for k in range(len(ri)):
                if rj[k] != R.zero:
                    ri[k] = add(ri[k], mul(c, rj[k]))
        if self.inv:
            nc = R.neg(c)
            for row in self.Ui:
                if row[i] != R.zero:
                    row[j] = add(row[j], mul(nc, row[i]))

    # col_i += c * col_j
    def col_add(self, i, j, c):
        R = self.R
        add, mul = R.add, R.mul
        for mat in (self.a, self.V):
            for row in mat:
                if row[j] != R.zero:
                    row[i] = add(row[i], mul(c, row[j]))
        if self.inv:
            nc = R.neg(c)
            ri, rj = self.Vi[i], self.Vi[j]
            for k in range(len(rj)):
                if ri[k] != R.zero:
                    rj[k] = add(rj[k], mul(nc, ri[k]))

    def row_swap(self, i, j):
        if i == j:
            return
        for mat in (self.a, self.U):
            mat[i], mat[j] = mat[j], mat[i]
        if self.inv:
            for row in self.Ui:
                row[i], row[j] = row[j], row[i]

    def col_swap(self, i, j):
        if i == j:
            return
        for mat in (self.a, self.V):
            for row in mat:
                row[i], row[j] = row[j], row[i]
        if self.inv:
            self.Vi[i], self.Vi[j] = self.Vi[j], self.Vi[i]

    def row_scale(self, i, u, u_inv):
        mul = self.R.mul
        for mat in (self.a, self.U):
            mat[i] = [mul(u, x) for x in mat[i]]
        if self.inv:
            for row in self.Ui:
                row[i] = mul(row[i], u_inv)

    def result(self, diag) -> SNF:
        R = self.R
        mk = lambda rows, m, n: Matrix(R, m, n, tuple(tuple(r) for r in rows))
        D = mk(self.a, self.m, self.n)
        U = mk(self.U, self.m, self.m)
        V = mk(self.V, self.n, self.n)
        if self.inv:
            Ui, Vi = mk(self.Ui, self.m, self.m), mk(self.Vi, self.n, self.n)
        else:
            Ui = Vi = None
        return SNF(U, D, V, Ui, Vi, tuple(diag))


def _snf_euclidean(ring: _PID, red: _Reducer) -> list:
    a, m, n = red.a, red.m, red.n
    iz, norm = ring.is_zero, ring.norm
    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = a[i][j]
                if not iz(x) and (best is None or norm(x) < best[0]):
                    best = (norm(x), i, j)
        if best is None:
            break
        red.row_swap(t, best[1])
        red.col_swap(t, best[2])
        while True:
            dirty = False
            for i in range(t + 1, m):
                if not iz(a[i][t]):
                    q, r = ring.divmod(a[i][t], a[t][t])
                    red.row_add(i, t, ring.neg(q))
                    dirty = dirty or not iz(r)
            for j in range(t + 1, n):
                if not iz(a[t][j]):
                    q, r = ring.divmod(a[t][j], a[t][t])
                    red.col_add(j, t, ring.neg(q))
                    dirty = dirty or not iz(r)
            if dirty:
                best = None
                for i in range(t + 1, m):
                    if not iz(a[i][t]) and (best is None or norm(a[i][t]) < best[0]):
                        best = (norm(a[i][t]), "r", i)
                for j in range(t + 1, n):
                    if not iz(a[t][j]) and (best is None or norm(a[t][j]) < best[0]):
                        best = (norm(a[t][j]), "c", j)
                if best is not None and best[0] < norm(a[t][t]):
                    if best[1] == "r":
                        red.row_swap(t, best[2])
                    else:
                        red.col_swap(t, best[2])
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if not ring.divides(a[t][t], a[i][j]):
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            red.row_add(t, bad, ring.one)
        assoc, u = ring.canonical(a[t][t])
        if u != ring.one:
            red.row_scale(t, ring.unit_inverse(u), u)
        diag.append(a[t][t])
        t += 1
    return diag


def _snf_local(ring: LocalQuotient, red: _Reducer) -> list:
    a, m, n = red.a, red.m, red.n
    val, e = ring.valuation, ring.e
    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = val(a[i][j])
                if v < e and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            break
        red.row_swap(t, best[1])
        red.col_swap(t, best[2])
        piv = a[t][t]
        for i in range(t + 1, m):
            if not ring.is_zero(a[i][t]):
                red.row_add(i, t, ring.neg(ring.exact_div(a[i][t], piv)))
        for j in range(t + 1, n):
            if not ring.is_zero(a[t][j]):
                red.col_add(j, t, ring.neg(ring.exact_div(a[t][j], piv)))
        _, u = ring.canonical(piv)
        if u != ring.one:
            red.row_scale(t, ring.inverse(u), u)
        diag.append(a[t][t])
        t += 1
    return diag


def snf_full(M: Matrix, track_inverses: bool = True) -> SNF:
    ring = M.ring
    if isinstance(ring, Product):
        raise RingMismatch("SNF over a product ring: split into components first")
    red = _Reducer(ring, M, track_inverses)
    if isinstance(ring, LocalQuotient):
        diag = _snf_local(ring, red)
    elif isinstance(ring, _PID):
        diag = _snf_euclidean(ring, red)
    else:
        raise RingMismatch(f"no SNF over {ring!r}")
    return red.result(diag)


def snf(ring, M: Matrix):
    """Smith normal form: returns (U, D, V) with U @ M @ V == D."""
    if M.ring != ring:
        raise RingMismatch(f"matrix over {M.ring!r}, expected {ring!r}")
    s = snf_full(M, track_inverses=False)
    return s.U, s.D, s.V


def rank(M: Matrix) -> int:
    return snf_full(M, track_inverses=False).rank


def kernel_basis(M: Matrix) -> Matrix:
    """Columns form a basis of {x : M x = 0} (PID ring)."""
    s = snf_full(M, track_inverses=False)
    r = s.rank
    cols = [s.V.column(j) for j in range(r, M.ncols)]
    return _from_columns(M.ring, M.ncols, cols)


def solve(M: Matrix, b) -> tuple | None:
    """Some x with M x == b over a PID, or None."""
    ring = M.ring
    s = snf_full(M, track_inverses=False)
    z = s.U.apply(tuple(b))
    y = []
    for i in range(M.ncols):
        if i < s.rank:
            d = s.diag[i]
            if not ring.divides(d, z[i]):
                return None
            y.append(ring.exact_div(z[i], d))
        else:
            y.append(ring.zero)
    for i in range(s.rank, M.nrows):
        if not ring.is_zero(z[i]):
            return None
    return s.V.apply(tuple(y))


def _from_columns(ring, nrows, cols) -> Matrix:
    if not cols:
        return Matrix.zeros(ring, nrows, 0)
    return Matrix(ring, nrows, len(cols), tuple(tuple(c[i] for c in cols) for i in range(nrows)))


def hstack(ring, mats, nrows) -> Matrix:
    mats = [m for m in mats if m.ncols]
    return block(ring, [mats], [nrows], [m.ncols for m in mats]) if mats else Matrix.zeros(ring, nrows, 0)


def subquotient(out_map: Matrix, out_rel: Matrix, in_gens: Matrix, src_rel: Matrix) -> list:
    """Invariant factors of {x : out_map x in <out_rel>} / (<in_gens> + <src_rel>).

    Everything is over one PID; ``src_rel`` must have full row rank so the
    quotient is finite.  Returns one canonical diagonal entry per source
    coordinate (units included).
    """
    ring = src_rel.ring
    c = src_rel.nrows
    if c == 0:
        return []
    if out_map.nrows:
        stacked = hstack(ring, [out_map, out_rel], out_map.nrows)
        s = snf_full(stacked, track_inverses=False)
        gens = [s.V.column(j)[:c] for j in range(s.rank, stacked.ncols)]
        G = _from_columns(ring, c, gens)
    else:
        G = Matrix.identity(ring, c)
    sg = snf_full(G)
    if sg.rank != c:
        raise ValueError("cycle lattice is not of full rank")
    # cycle basis: columns Uinv[:, i] * d_i ; coordinates of g: d_i^{-1} (U g)_i
    image = hstack(ring, [in_gens, src_rel], c)
    Ug = sg.U @ image
    coords = Matrix(ring, c, image.ncols, tuple(
        tuple(ring.exact_div(x, sg.diag[i]) for x in Ug.rows[i]) for i in range(c)))
    sq = snf_full(coords, track_inverses=False)
    out = list(sq.diag) + [ring.zero] * (c - sq.rank)
    return out


# ---------------------------------------------------------------------------
# Integer lattices


@dataclass(frozen=True)
class IntLattice:
    """Sublattice of Z^dim with a canonical column-HNF basis (tuple of column vectors)."""

    dim: int
    basis: tuple

    @property
    def rank(self) -> int:
        return len(self.basis)

    def pivots(self) -> list:
        return [next(i for i, x in enumerate(b) if x) for b in self.basis]

    def as_matrix(self) -> Matrix:
        return _from_columns(ZZ, self.dim, list(self.basis))


def _hnf_rows(vectors, n) -> list:
    rows = [list(v) for v in vectors if any(v)]
    r = 0
    for col in range(n):
        if r >= len(rows):
            break
        while True:
            nz = [i for i in range(r, len(rows)) if rows[i][col]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(rows[i][col]))
            rows[r], rows[i0] = rows[i0], rows[r]
            clean = True
            piv = rows[r][col]
            for i in range(r + 1, len(rows)):
                if rows[i][col]:
                    q = rows[i][col] // piv
                    rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
                    if rows[i][col]:
                        clean = False
            if clean:
                break
        if not rows[r][col]:
            continue
        if rows[r][col] < 0:
            rows[r] = [-x for x in rows[r]]
        piv = rows[r][col]
        for i in range(r):
            q = rows[i][col] // piv
            if q:
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return [tuple(v) for v in rows[:r]]


def lattice_from_generators(n: int, vecs) -> IntLattice:
    vecs = [tuple(int(x) for x in v) for v in vecs]
    for v in vecs:
        if len(v) != n:
            raise DimensionMismatch(f"vector of length {len(v)} in ambient dimension {n}")
    return IntLattice(n, tuple(_hnf_rows(vecs, n)))


def lattice_coordinates(L: IntLattice, v) -> tuple | None:
    """Integer coefficients of v in the HNF basis, or None when v is not in L."""
    if len(v) != L.dim:
        raise DimensionMismatch(f"vector of length {len(v)} in ambient dimension {L.dim}")
    v = list(v)
    coeffs = []
    for b in L.basis:
        p = next(i for i, x in enumerate(b) if x)
        q, r = divmod(v[p], b[p])
        if r:
            return None
        coeffs.append(q)
        if q:
            v = [x - q * y for x, y in zip(v, b)]
    return tuple(coeffs) if not any(v) else None


def lattice_contains(L: IntLattice, v) -> bool:
    return lattice_coordinates(L, v) is not None

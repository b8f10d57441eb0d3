"""Perfect complexes of free modules and their triangulated operations.

Grading is homological: the differential ``d_n`` maps degree n to degree n-1
and is stored as a ``rank(n-1) x rank(n)`` matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NotHereditary, NotPerfect, RingMismatch
from .matrix import Matrix, block, kron
from .normal_forms import snf_full, subquotient
from .rings import GroundRing, Integers, LocalQuotient, Product, _PID, components_of


@dataclass(frozen=True, eq=False)
class PerfectComplex:
    ring: GroundRing
    ranks: dict = field(default_factory=dict)
    diffs: dict = field(default_factory=dict)

    @classmethod
    def build(cls, ring, ranks, diffs=None, check=True) -> "PerfectComplex":
        """Normalise (drop zero ranks and zero matrices) and, by default, validate."""
        ranks = {int(n): int(r) for n, r in ranks.items() if r}
        clean = {}
        for n, d in (diffs or {}).items():
            n = int(n)
            if d.ring != ring:
                raise RingMismatch(f"differential {n} over {d.ring!r}, complex over {ring!r}")
            if d.shape != (ranks.get(n - 1, 0), ranks.get(n, 0)):
                raise NotPerfect(f"d_{n} has shape {d.shape}, expected "
                                 f"{(ranks.get(n - 1, 0), ranks.get(n, 0))}", location=n)
            if not d.is_zero():
                clean[n] = d
        X = cls(ring, ranks, clean)
        if check:
            validate(X)
        return X

    def rank(self, n: int) -> int:
        return self.ranks.get(n, 0)

    def d(self, n: int) -> Matrix:
        m = self.diffs.get(n)
        return m if m is not None else Matrix.zeros(self.ring, self.rank(n - 1), self.rank(n))

    @property
    def degrees(self) -> list:
        return sorted(self.ranks)

    @property
    def window(self):
        """(lo, hi) or None for the zero complex."""
        return (min(self.ranks), max(self.ranks)) if self.ranks else None

    def is_empty(self) -> bool:
        return not self.ranks

    def __eq__(self, other):
        return (isinstance(other, PerfectComplex) and self.ring == other.ring
                and self.ranks == other.ranks and self.diffs == other.diffs)

    def __repr__(self):
        return f"PerfectComplex({self.ring!r}, ranks={dict(sorted(self.ranks.items()))})"


@dataclass(frozen=True, eq=False)
class ChainMap:
    source: PerfectComplex
    target: PerfectComplex
    components: dict = field(default_factory=dict)

    @classmethod
    def build(cls, source, target, components=None, check=True) -> "ChainMap":
        if source.ring != target.ring:
            raise RingMismatch("chain map between complexes over different rings")
        clean = {}
        for n, f in (components or {}).items():
            n = int(n)
            if f.shape != (target.rank(n), source.rank(n)):
                raise NotPerfect(f"f_{n} has shape {f.shape}, expected {(target.rank(n), source.rank(n))}",
                                 location=n)
            if not f.is_zero():
                clean[n] = f
        f = cls(source, target, clean)
        if check:
            validate_map(f)
        return f

    def at(self, n: int) -> Matrix:
        m = self.components.get(n)
        return m if m is not None else Matrix.zeros(self.source.ring, self.target.rank(n), self.source.rank(n))

    def __eq__(self, other):
        return (isinstance(other, ChainMap) and self.source == other.source
                and self.target == other.target and self.components == other.components)


@dataclass(frozen=True)
class ModuleClass:
    """free_rank copies of R plus R/(t_1) + R/(t_2) + ... with t_1 | t_2 | ..."""

    free_rank: int = 0
    invariant_factors: tuple = ()

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors


@dataclass(frozen=True)
class HomologyProfile:
    """Degree -> ModuleClass, with zero modules omitted."""

    entries: tuple = ()  # sorted ((degree, ModuleClass), ...)

    @classmethod
    def from_dict(cls, d) -> "HomologyProfile":
        return cls(tuple(sorted((int(n), m) for n, m in d.items() if not m.is_zero())))

    def as_dict(self) -> dict:
        return dict(self.entries)

    def __getitem__(self, n) -> ModuleClass:
        return self.as_dict().get(n, ModuleClass())

    def degrees(self) -> list:
        return [n for n, _ in self.entries]

    def is_zero(self) -> bool:
        return not self.entries

    def shifted(self, k: int) -> "HomologyProfile":
        return HomologyProfile(tuple((n + k, m) for n, m in self.entries))


# ---------------------------------------------------------------------------
# validation


def validate(X: PerfectComplex) -> None:
    """Raise NotPerfect unless shapes fit and d_{n-1} d_n = 0 everywhere."""
    for n, r in X.ranks.items():
        if r < 0:
            raise NotPerfect(f"negative rank in degree {n}", location=n)
    for n, d in X.diffs.items():
        if d.ring != X.ring:
            raise NotPerfect(f"d_{n} is over {d.ring!r}", location=n)
        if d.shape != (X.rank(n - 1), X.rank(n)):
            raise NotPerfect(f"d_{n} has shape {d.shape}", location=n)
    for n in sorted(X.diffs):
        if n - 1 in X.diffs and not (X.diffs[n - 1] @ X.diffs[n]).is_zero():
            raise NotPerfect(f"d^2 != 0 at degree {n}", location=n)


def validate_map(f: ChainMap) -> None:
    S, T = f.source, f.target
    degrees = set(S.ranks) | set(T.ranks)
    for n in sorted(degrees | {m + 1 for m in degrees}):
        lhs = T.d(n) @ f.at(n)
        rhs = f.at(n - 1) @ S.d(n)
        if lhs != rhs:
            raise NotPerfect(f"chain map condition fails at degree {n}", location=n)


# ---------------------------------------------------------------------------
# constructors


def zero_complex(ring) -> PerfectComplex:
    return PerfectComplex(ring, {}, {})


def unit_complex(ring, degree: int = 0) -> PerfectComplex:
    """R concentrated in one degree."""
    return PerfectComplex(ring, {degree: 1}, {})


def moore(ring, x) -> PerfectComplex:
    """R --x--> R in degrees 1, 0."""
    if not ring.is_pid:
        raise RingMismatch(f"Moore complexes are built over a PID, not {ring!r}")
    return PerfectComplex.build(ring, {1: 1, 0: 1}, {1: Matrix.from_rows(ring, [[x]])})


def identity_map(X: PerfectComplex) -> ChainMap:
    return ChainMap(X, X, {n: Matrix.identity(X.ring, r) for n, r in X.ranks.items()})


def zero_map(X: PerfectComplex, Y: PerfectComplex) -> ChainMap:
    if X.ring != Y.ring:
        raise RingMismatch("zero map between different rings")
    return ChainMap(X, Y, {})


# ---------------------------------------------------------------------------
# triangulated operations


def shift(X: PerfectComplex, k: int) -> PerfectComplex:
    """X[k]: degree n moves to n+k, differentials scaled by (-1)^k."""
    if k == 0:
        return X
    sign = k % 2 == 1
    diffs = {n + k: (-d if sign else d) for n, d in X.diffs.items()}
    return PerfectComplex(X.ring, {n + k: r for n, r in X.ranks.items()}, diffs)


def shift_map(f: ChainMap, k: int) -> ChainMap:
    return ChainMap(shift(f.source, k), shift(f.target, k), {n + k: m for n, m in f.components.items()})


def direct_sum(X: PerfectComplex, Y: PerfectComplex) -> PerfectComplex:
    if X.ring != Y.ring:
        raise RingMismatch(f"{X.ring!r} vs {Y.ring!r}")
    R = X.ring
    degrees = set(X.ranks) | set(Y.ranks)
    ranks = {n: X.rank(n) + Y.rank(n) for n in degrees}
    diffs = {}
    for n in set(X.diffs) | set(Y.diffs):
        diffs[n] = block(R, [[X.d(n), None], [None, Y.d(n)]],
                         [X.rank(n - 1), Y.rank(n - 1)], [X.rank(n), Y.rank(n)])
    return PerfectComplex.build(R, ranks, diffs, check=False)


def direct_sum_all(ring, complexes) -> PerfectComplex:
    out = zero_complex(ring)
    for X in complexes:
        out = direct_sum(out, X)
    return out


def cone(f: ChainMap) -> PerfectComplex:
    """cone(f)_n = src_{n-1} + tgt_n with d(a, b) = (-d a, d b - f a)."""
    S, T = f.source, f.target
    if S.ring != T.ring:
        raise RingMismatch("cone of a map between different rings")
    R = S.ring
    degrees = {n + 1 for n in S.ranks} | set(T.ranks)
    ranks = {n: S.rank(n - 1) + T.rank(n) for n in degrees}
    diffs = {}
    for n in degrees:
        if ranks.get(n - 1, 0) == 0:
            continue
        diffs[n] = block(R, [[-S.d(n - 1), None], [-f.at(n - 1), T.d(n)]],
                         [S.rank(n - 2), T.rank(n - 1)], [S.rank(n - 1), T.rank(n)])
    return PerfectComplex.build(R, ranks, diffs, check=False)


def tensor(X: PerfectComplex, Y: PerfectComplex) -> PerfectComplex:
    """Total complex with d = d_X (x) 1 + (-1)^i 1 (x) d_Y on the X_i (x) Y_j summand."""
    if X.ring != Y.ring:
        raise RingMismatch(f"{X.ring!r} vs {Y.ring!r}")
    R = X.ring
    pairs = {}
    for i in X.degrees:
        for j in Y.degrees:
            pairs.setdefault(i + j, []).append((i, j))
    ranks = {n: sum(X.rank(i) * Y.rank(j) for i, j in ps) for n, ps in pairs.items()}
    diffs = {}
    for n, ps in pairs.items():
        below = pairs.get(n - 1)
        if not below:
            continue
        grid = []
        for (i2, j2) in below:
            row = []
            for (i, j) in ps:
                if i2 == i - 1 and j2 == j:
                    row.append(kron(X.d(i), Matrix.identity(R, Y.rank(j))))
                elif i2 == i and j2 == j - 1:
                    blk = kron(Matrix.identity(R, X.rank(i)), Y.d(j))
                    row.append(-blk if i % 2 else blk)
                else:
                    row.append(None)
            grid.append(row)
        diffs[n] = block(R, grid, [X.rank(i) * Y.rank(j) for i, j in below],
                         [X.rank(i) * Y.rank(j) for i, j in ps])
    return PerfectComplex.build(R, ranks, diffs, check=False)


def compose(g: ChainMap, f: ChainMap) -> ChainMap:
    degrees = set(f.source.ranks)
    return ChainMap(f.source, g.target, {n: g.at(n) @ f.at(n) for n in degrees})


# ---------------------------------------------------------------------------
# homology


def _class_from_diagonal(ring, entries) -> ModuleClass:
    """ModuleClass of the quotient presented by canonical diagonal ``entries`` (PID)."""
    free = sum(1 for x in entries if ring.is_zero(x))
    factors = tuple(x for x in entries if not ring.is_zero(x) and not ring.is_unit(x))
    return ModuleClass(free, factors)


def _homology_pid(X: PerfectComplex) -> HomologyProfile:
    R = X.ring
    snfs = {n: snf_full(d, track_inverses=False) for n, d in X.diffs.items()}
    rk = lambda n: snfs[n].rank if n in snfs else 0
    out = {}
    for n in X.degrees:
        free = X.rank(n) - rk(n) - rk(n + 1)
        factors = ()
        if n + 1 in snfs:
            factors = tuple(x for x in snfs[n + 1].diag if not R.is_unit(x))
        out[n] = ModuleClass(free, factors)
    return HomologyProfile.from_dict(out)


def _lift(M: Matrix, base) -> Matrix:
    return Matrix(base, M.nrows, M.ncols, M.rows)


def _homology_local(X: PerfectComplex) -> HomologyProfile:
    """Homology over base/(q^e) via the lifted presentation over the base PID."""
    R: LocalQuotient = X.ring
    B, Q = R.base, R.modulus
    out = {}
    for n in X.degrees:
        c = X.rank(n)
        out_map = _lift(X.d(n), B)
        out_rel = Matrix.diagonal(B, [Q] * X.rank(n - 1))
        in_gens = _lift(X.d(n + 1), B)
        src_rel = Matrix.diagonal(B, [Q] * c)
        diag = subquotient(out_map, out_rel, in_gens, src_rel)
        free, factors = 0, []
        for x in diag:
            v = B.valuation(x, R.q) if not B.is_zero(x) else R.e
            if v >= R.e:
                free += 1
            elif v > 0:
                factors.append(R.q_power(v))
        out[n] = ModuleClass(free, tuple(factors))
    return HomologyProfile.from_dict(out)


def homology(X: PerfectComplex) -> HomologyProfile:
    if isinstance(X.ring, Product):
        raise RingMismatch("homology over a product ring: split_product first")
    if isinstance(X.ring, LocalQuotient):
        return _homology_local(X)
    return _homology_pid(X)


def homology_generators(X: PerfectComplex, n: int) -> list:
    """[(cycle, order), ...] generating H_n over a PID, one per non-trivial SNF summand.

    ``order`` is the invariant factor (zero for a free summand).  Generators are
    listed in divisor-chain order, free ones last.
    """
    R = X.ring
    if not isinstance(R, _PID):
        raise NotHereditary("explicit homology generators need a PID")
    c = X.rank(n)
    if c == 0:
        return []
    s_out = snf_full(X.d(n), track_inverses=True)
    r = s_out.rank
    ker = [s_out.V.column(j) for j in range(r, c)]
    if not ker:
        return []
    # coordinates of boundaries in the kernel basis: rows r.. of Vinv @ d_{n+1}
    din = X.d(n + 1)
    coords_full = s_out.Vinv @ din
    k = len(ker)
    coords = Matrix(R, k, din.ncols, coords_full.rows[r:])
    s_in = snf_full(coords, track_inverses=True)
    gens = []
    for i in range(k):
        order = s_in.diag[i] if i < s_in.rank else R.zero
        if not R.is_zero(order) and R.is_unit(order):
            continue
        w = s_in.Uinv.column(i)
        cycle = tuple(
            _dot(R, [kv[row] for kv in ker], w) for row in range(c)
        )
        gens.append((cycle, order))
    return gens


def _dot(R, xs, ys):
    acc = R.zero
    for x, y in zip(xs, ys):
        acc = R.add(acc, R.mul(x, y))
    return acc


def quasi_class_equal(X: PerfectComplex, Y: PerfectComplex) -> bool:
    """Quasi-isomorphism test over a PID (homology determines the class there)."""
    if X.ring != Y.ring:
        raise RingMismatch(f"{X.ring!r} vs {Y.ring!r}")
    if not isinstance(X.ring, _PID):
        raise NotHereditary(f"quasi-isomorphism over {X.ring!r} is not decided by homology")
    return homology(X) == homology(Y)


def is_quasi_iso(f: ChainMap) -> bool:
    return homology(cone(f)).is_zero()


# ---------------------------------------------------------------------------
# products of local rings


def split_product(X: PerfectComplex) -> list:
    """Image of X under each idempotent of a product ring, one complex per component."""
    ring = X.ring
    if not isinstance(ring, Product):
        raise RingMismatch(f"split_product needs a product ring, got {ring!r}")
    parts = []
    for i, comp in enumerate(ring.components):
        diffs = {n: d.map_entries(lambda x, i=i: x[i], comp) for n, d in X.diffs.items()}
        parts.append(PerfectComplex.build(comp, dict(X.ranks), diffs, check=False))
    return parts


def join_product(ring: Product, parts) -> PerfectComplex:
    """Reassemble componentwise complexes with equal degreewise ranks into one complex."""
    if not isinstance(ring, Product) or len(parts) != len(ring.components):
        raise RingMismatch("join_product needs one complex per product component")
    for comp, P in zip(ring.components, parts):
        if P.ring != comp:
            raise RingMismatch(f"component over {P.ring!r}, expected {comp!r}")
    ranks = dict(parts[0].ranks)
    if any(P.ranks != ranks for P in parts):
        raise RingMismatch("components must have equal ranks to form a free complex")
    diffs = {}
    for n in set().union(*(P.diffs for P in parts)):
        mats = [P.d(n) for P in parts]
        m, k = mats[0].shape
        diffs[n] = Matrix(ring, m, k, tuple(
            tuple(tuple(M.rows[i][j] for M in mats) for j in range(k)) for i in range(m)))
    return PerfectComplex.build(ring, ranks, diffs)


def component_complexes(X) -> list:
    """Componentwise complexes for an Artin-type input.

    Accepts a complex over a local quotient, a complex over a product ring, or
    an explicit list of componentwise complexes (which also represents perfect
    complexes of projective, non-free modules over the product).
    """
    if isinstance(X, PerfectComplex):
        if isinstance(X.ring, Product):
            return split_product(X)
        if isinstance(X.ring, LocalQuotient):
            return [X]
        raise RingMismatch(f"{X.ring!r} is not an Artin-type ring")
    parts = list(X)
    for P in parts:
        if not isinstance(P.ring, LocalQuotient):
            raise RingMismatch("component complexes must live over local quotients")
    return parts


def crt_homology(X: PerfectComplex) -> list:
    """Per-component homology of a product-ring complex computed without splitting.

    The product base/(q_1^e_1) x ... is identified with base/(q_1^e_1 ... q_k^e_k)
    by the Chinese remainder theorem; homology is computed once over that cyclic
    quotient and then separated into primary parts.  Needs one common base and
    distinct primes.
    """
    ring = X.ring
    comps = components_of(ring)
    base = comps[0].base
    if any(c.base != base for c in comps) or len({c.q for c in comps}) != len(comps):
        raise RingMismatch("CRT lift needs a common base and distinct primes")
    N = base.one
    for c in comps:
        N = base.mul(N, c.modulus)

    def lift(x):
        acc = base.zero
        for c, xi in zip(comps, x if isinstance(ring, Product) else (x,)):
            other = base.exact_div(N, c.modulus)
            _, s, _ = base.xgcd(other, c.modulus)
            acc = base.add(acc, base.mul(base.mul(xi, s), other))
        r = base.divmod(acc, N)[1]
        return r % N if isinstance(base, Integers) else r

    per_comp = [dict() for _ in comps]
    for n in X.degrees:
        out_map = X.d(n).map_entries(lift, base)
        out_rel = Matrix.diagonal(base, [N] * X.rank(n - 1))
        in_gens = X.d(n + 1).map_entries(lift, base)
        src_rel = Matrix.diagonal(base, [N] * X.rank(n))
        diag = subquotient(out_map, out_rel, in_gens, src_rel)
        for ci, c in enumerate(comps):
            free, factors = 0, []
            for x in diag:
                v = c.e if base.is_zero(x) else min(base.valuation(x, c.q), c.e)
                if v >= c.e:
                    free += 1
                elif v > 0:
                    factors.append(c.q_power(v))
            per_comp[ci][n] = ModuleClass(free, tuple(sorted(factors, key=lambda f: c.valuation(f))))
    return [HomologyProfile.from_dict(d) for d in per_comp]

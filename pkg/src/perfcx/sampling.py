"""Seeded random objects for property tests and the selftest command.

Complexes are direct sums of elementary pieces (R[n], R --t--> R, R --1--> R)
conjugated degreewise by random unimodular matrices, so the homology is known
by construction and the matrices still look generic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .complexes import ChainMap, PerfectComplex, join_product
from .matrix import Matrix
from .normal_forms import kernel_basis
from .pgroups import FpAbGroup, FpComplex, FpHom, validate as validate_fp
from .rings import ZZ, Product


@dataclass(frozen=True)
class Piece:
    """One elementary summand: ``value`` None is R in degree ``degree``; otherwise
    R --value--> R in degrees degree + 1, degree."""

    degree: int
    value: object = None


def random_unimodular(rng: random.Random, ring, n: int, ops: int = None, bound: int = 2):
    """(P, P^-1) as products of random elementary operations."""
    P = [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)]
    Q = [row[:] for row in P]
    if n < 2:
        return Matrix.from_rows(ring, P, n), Matrix.from_rows(ring, Q, n)
    for _ in range(ops if ops is not None else 2 * n):
        i, j = rng.sample(range(n), 2)
        c = ring.from_int(rng.choice([x for x in range(-bound, bound + 1) if x]))
        # row_i += c row_j on P; col_j -= c col_i on the inverse
        P[i] = [ring.add(a, ring.mul(c, b)) for a, b in zip(P[i], P[j])]
        for row in Q:
            row[j] = ring.sub(row[j], ring.mul(c, row[i]))
    return Matrix.from_rows(ring, P, n), Matrix.from_rows(ring, Q, n)


def assemble(ring, pieces, rng: random.Random = None) -> PerfectComplex:
    """Direct sum of pieces, optionally conjugated by random unimodular matrices."""
    ranks = {}
    slots = []  # (top degree index, bottom degree index)
    for pc in pieces:
        if pc.value is None:
            slots.append(((pc.degree, ranks.get(pc.degree, 0)), None))
            ranks[pc.degree] = ranks.get(pc.degree, 0) + 1
        else:
            top, bot = pc.degree + 1, pc.degree
            slots.append(((top, ranks.get(top, 0)), (bot, ranks.get(bot, 0))))
            ranks[top] = ranks.get(top, 0) + 1
            ranks[bot] = ranks.get(bot, 0) + 1
    diffs = {}
    for pc, (hi, lo) in zip(pieces, slots):
        if lo is None or ring.is_zero(pc.value):
            continue
        n = hi[0]
        if n not in diffs:
            diffs[n] = [[ring.zero] * ranks[n] for _ in range(ranks[n - 1])]
        diffs[n][lo[1]][hi[1]] = pc.value
    mats = {n: Matrix.from_rows(ring, rows, ranks[n]) for n, rows in diffs.items()}
    if rng is not None:
        conj = {n: random_unimodular(rng, ring, r) for n, r in ranks.items()}
        mats = {n: conj[n - 1][0] @ d @ conj[n][1] for n, d in mats.items()}
    return PerfectComplex.build(ring, ranks, mats)


def _torsion_value(rng, primes, max_exp):
    t = 1
    for q in primes:
        if rng.random() < 0.6:
            t *= q ** rng.randint(1, max_exp)
    return t if t > 1 else rng.choice(primes)


def random_torsion_complex(rng: random.Random, primes=(2, 3), max_pieces: int = 4,
                           degrees=(-1, 0, 1, 2), max_exp: int = 2, conjugate: bool = True) -> PerfectComplex:
    """Torsion complex over Z whose homology is supported on ``primes``."""
    pieces = []
    for _ in range(rng.randint(1, max_pieces)):
        n = rng.choice(degrees)
        if rng.random() < 0.2:
            pieces.append(Piece(n, 1))  # contractible
        else:
            pieces.append(Piece(n, _torsion_value(rng, primes, max_exp)))
    return assemble(ZZ, pieces, rng if conjugate else None)


def random_complex(rng: random.Random, primes=(2, 3, 5), max_pieces: int = 5,
                   degrees=(-1, 0, 1, 2), max_exp: int = 2) -> PerfectComplex:
    """Perfect complex over Z mixing free, torsion and contractible pieces."""
    pieces = []
    for _ in range(rng.randint(0, max_pieces)):
        n = rng.choice(degrees)
        kind = rng.random()
        if kind < 0.3:
            pieces.append(Piece(n))
        elif kind < 0.45:
            pieces.append(Piece(n, rng.choice([1, -1])))
        elif kind < 0.55:
            pieces.append(Piece(n, 0))
        else:
            pieces.append(Piece(n, _torsion_value(rng, primes, max_exp) * rng.choice([1, -1])))
    return assemble(ZZ, pieces, rng)


def random_chain_map(rng: random.Random, X: PerfectComplex, Y: PerfectComplex, bound: int = 2) -> ChainMap:
    """Random integer combination of a basis of chain maps X -> Y."""
    R = X.ring
    degrees = sorted(set(X.ranks) & set(Y.ranks))
    offsets, total = {}, 0
    for n in degrees:
        offsets[n] = total
        total += Y.rank(n) * X.rank(n)
    if total == 0:
        return ChainMap.build(X, Y, {})
    rows = []

    def var(n, i, j):
        return offsets[n] + i * X.rank(n) + j

    # (d^Y_n f_n - f_{n-1} d^X_n)[i][j] = 0
    for n in sorted(set(X.ranks) | {m + 1 for m in Y.ranks}):
        for i in range(Y.rank(n - 1)):
            for j in range(X.rank(n)):
                row = [0] * total
                if n in offsets:
                    for k in range(Y.rank(n)):
                        row[var(n, k, j)] += Y.d(n)[i, k]
                if n - 1 in offsets:
                    for k in range(X.rank(n - 1)):
                        row[var(n - 1, i, k)] -= X.d(n)[k, j]
                if any(row):
                    rows.append(row)
    if rows:
        K = kernel_basis(Matrix.from_rows(R, rows, total))
        basis = K.columns()
    else:
        basis = [tuple(1 if i == j else 0 for i in range(total)) for j in range(total)]
    coeffs = [rng.randint(-bound, bound) for _ in basis]
    vec = [sum(c * b[v] for c, b in zip(coeffs, basis)) for v in range(total)]
    comps = {}
    for n in degrees:
        r, c = Y.rank(n), X.rank(n)
        comps[n] = Matrix.from_rows(R, [[vec[var(n, i, j)] for j in range(c)] for i in range(r)], c)
    return ChainMap.build(X, Y, comps)


def random_product_complex(rng: random.Random, ring: Product, max_pieces: int = 4,
                           degrees=(0, 1, 2)) -> PerfectComplex:
    """Complex over a product of local quotients: one shared piece layout, per-component values."""
    layout = [rng.choice(degrees) for _ in range(rng.randint(1, max_pieces))]
    free = [rng.random() < 0.25 for _ in layout]
    parts = []
    for comp in ring.components:
        pieces = []
        for n, is_free in zip(layout, free):
            if is_free:
                pieces.append(Piece(n))
            else:
                v = rng.randint(0, comp.e)
                unit = comp.from_int(rng.choice([1, -1]))
                pieces.append(Piece(n, comp.mul(unit, comp.q_power(v)) if v < comp.e else comp.zero))
        parts.append(assemble(comp, pieces, rng))
    return join_product(ring, parts)


# ---------------------------------------------------------------------------
# finite p-group complexes


def _kernel_lift(p, n, m, target_exps):
    """Basis (as integer vectors) of {x in Z^n : m x = 0 in the target group}."""
    k = len(target_exps)
    if k == 0:
        return [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]
    rows = [list(m[j]) + [p ** c if i == j else 0 for i in range(k)] for j, c in enumerate(target_exps)]
    K = kernel_basis(Matrix.from_rows(ZZ, rows, n + k))
    return [col[:n] for col in K.columns()]


def _order_exp(p, x, exps):
    """log_p of the order of x in (+) Z/p^e."""
    best = 0
    for xi, e in zip(x, exps):
        xi %= p ** e
        if xi:
            v = 0
            while xi % p == 0:
                xi //= p
                v += 1
            best = max(best, e - v)
    return best


def random_fp_complex(rng: random.Random, p: int, length: int = None, max_exp: int = 6,
                      max_gens: int = 3, max_log: int = None) -> FpComplex:
    """Random valid complex of finite abelian p-groups in degrees 0 .. length-1."""
    length = length if length is not None else rng.randint(1, 6)
    groups = {}
    for n in range(length):
        while True:
            exps = tuple(rng.randint(1, max_exp) for _ in range(rng.randint(0, max_gens)))
            if max_log is None or sum(exps) <= max_log:
                break
        groups[n] = FpAbGroup(p, exps)
    diffs = {}
    for n in range(1, length):
        src, dst = groups[n], groups[n - 1]
        below = groups.get(n - 2, FpAbGroup(p))
        prev = diffs.get(n - 1)
        cols = []
        if prev is not None:
            lattice = _kernel_lift(p, dst.ngens, prev.matrix, below.exponents)
        else:
            lattice = [tuple(1 if i == j else 0 for i in range(dst.ngens)) for j in range(dst.ngens)]
        for a in src.exponents:
            if not lattice or rng.random() < 0.15:
                cols.append((0,) * dst.ngens)
                continue
            x = [0] * dst.ngens
            for b in lattice:
                c = rng.randint(-3, 3)
                x = [xi + c * bi for xi, bi in zip(x, b)]
            s = max(0, _order_exp(p, x, dst.exponents) - a)
            if rng.random() < 0.3:
                s += 1
            x = [p ** s * xi % p ** e for xi, e in zip(x, dst.exponents)]
            cols.append(tuple(x))
        matrix = tuple(tuple(col[j] for col in cols) for j in range(dst.ngens))
        diffs[n] = FpHom(src, dst, matrix)
    C = FpComplex(p, groups, diffs)
    validate_fp(C)
    return C


"""Bounded complexes of finite abelian p-groups and the alternating log_p sum.

A group is an exponent multiset (Z/p^a_1 + ... with a_1 >= a_2 >= ...); a
homomorphism is an integer matrix on the standard generators; homology is
computed by lifting to Z^n modulo the diagonal relation lattices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import MalformedComplex
from .matrix import Matrix
from .normal_forms import subquotient
from .rings import ZZ, is_prime_int


@dataclass(frozen=True)
class FpAbGroup:
    p: int
    exponents: tuple = ()

    def __post_init__(self):
        if not is_prime_int(self.p):
            raise MalformedComplex(f"{self.p} is not prime")
        if any(a < 1 for a in self.exponents):
            raise MalformedComplex("exponents must be positive")
        object.__setattr__(self, "exponents", tuple(sorted(self.exponents, reverse=True)))

    @property
    def ngens(self) -> int:
        return len(self.exponents)

    @property
    def log_order(self) -> int:
        return sum(self.exponents)

    def elements(self):
        return itertools.product(*(range(self.p ** a) for a in self.exponents))


@dataclass(frozen=True)
class FpHom:
    src: FpAbGroup
    dst: FpAbGroup
    matrix: tuple  # dst.ngens rows x src.ngens columns

    def __post_init__(self):
        if self.src.p != self.dst.p:
            raise MalformedComplex("homomorphism between groups at different primes")
        if len(self.matrix) != self.dst.ngens or any(len(r) != self.src.ngens for r in self.matrix):
            raise MalformedComplex("matrix shape does not match the generators")
        p = self.src.p
        for j, b in enumerate(self.dst.exponents):
            for i, a in enumerate(self.src.exponents):
                if (self.matrix[j][i] * p ** a) % p ** b:
                    raise MalformedComplex(f"entry ({j},{i}) is not well defined on Z/{p}^{a}")

    def apply(self, x):
        p = self.src.p
        return tuple(sum(m * xi for m, xi in zip(row, x)) % p ** b
                     for row, b in zip(self.matrix, self.dst.exponents))


@dataclass(frozen=True, eq=False)
class FpComplex:
    p: int
    groups: dict = field(default_factory=dict)  # degree -> FpAbGroup
    diffs: dict = field(default_factory=dict)  # n -> FpHom from degree n to n-1

    def group(self, n) -> FpAbGroup:
        return self.groups.get(n, FpAbGroup(self.p))

    def d(self, n) -> FpHom:
        h = self.diffs.get(n)
        if h is not None:
            return h
        src, dst = self.group(n), self.group(n - 1)
        return FpHom(src, dst, tuple((0,) * src.ngens for _ in range(dst.ngens)))

    @property
    def degrees(self):
        return sorted(n for n, g in self.groups.items() if g.ngens)

    def shifted(self, k: int) -> "FpComplex":
        sign = -1 if k % 2 else 1
        diffs = {n + k: FpHom(h.src, h.dst, tuple(tuple(sign * x for x in r) for r in h.matrix))
                 for n, h in self.diffs.items()}
        return FpComplex(self.p, {n + k: g for n, g in self.groups.items()}, diffs)


def make_complex(p: int, groups: dict, diffs: dict) -> FpComplex:
    """Build and validate from exponent lists and integer matrices."""
    gs = {int(n): FpAbGroup(p, tuple(e)) for n, e in groups.items()}
    C = FpComplex(p, gs, {})
    hs = {}
    for n, m in diffs.items():
        n = int(n)
        src, dst = C.group(n), C.group(n - 1)
        hs[n] = FpHom(src, dst, tuple(tuple(int(x) for x in r) for r in m))
    C = FpComplex(p, gs, hs)
    validate(C)
    return C


def validate(C: FpComplex) -> None:
    p = C.p
    for n, h in C.diffs.items():
        if h.src != C.group(n) or h.dst != C.group(n - 1):
            raise MalformedComplex(f"d_{n} does not connect degrees {n} and {n - 1}", location=n)
    for n in C.diffs:
        if n - 1 not in C.diffs:
            continue
        a, b = C.diffs[n - 1].matrix, C.diffs[n].matrix
        target = C.group(n - 2).exponents
        for j, c in enumerate(target):
            for i in range(C.group(n).ngens):
                if sum(a[j][k] * b[k][i] for k in range(len(b))) % p ** c:
                    raise MalformedComplex(f"d^2 != 0 at degree {n}", location=n)


def _relations(g: FpAbGroup) -> Matrix:
    return Matrix.diagonal(ZZ, [g.p ** a for a in g.exponents])


def _int_matrix(h: FpHom) -> Matrix:
    return Matrix(ZZ, h.dst.ngens, h.src.ngens, h.matrix)


def homology_at(C: FpComplex, n: int) -> FpAbGroup:
    g = C.group(n)
    if not g.ngens:
        return FpAbGroup(C.p)
    diag = subquotient(_int_matrix(C.d(n)), _relations(C.group(n - 1)),
                       _int_matrix(C.d(n + 1)), _relations(g))
    exps = []
    for x in diag:
        if x == 1:
            continue
        v = ZZ.valuation(x, C.p)
        if C.p ** v != x:
            raise AssertionError(f"non p-power invariant factor {x}")
        exps.append(v)
    return FpAbGroup(C.p, tuple(exps))


def fp_homology(C: FpComplex) -> dict:
    """Degree -> homology group, for every degree carrying a nonzero group."""
    return {n: homology_at(C, n) for n in C.degrees}


def chi_p(groups: dict) -> int:
    """Sum over i of (-1)^i log_p |G_i|."""
    return sum((-1) ** (n % 2) * g.log_order for n, g in groups.items())


@dataclass(frozen=True)
class LemmaCheck:
    lhs: int
    rhs: int

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def lemma_parallel_check(C: FpComplex) -> LemmaCheck:
    validate(C)
    return LemmaCheck(chi_p(C.groups), chi_p(fp_homology(C)))


# ---------------------------------------------------------------------------
# brute-force oracle (small groups only)


ENUMERATION_CAP = 4  # log_p of the largest group enumerated


def brute_force_homology_at(C: FpComplex, n: int) -> FpAbGroup:
    """Homology by listing elements; structure recovered from |H[p^j]| counts."""
    g = C.group(n)
    if g.log_order > ENUMERATION_CAP:
        raise ValueError("group too large for enumeration")
    p = C.p
    d_out, d_in = C.d(n), C.d(n + 1)
    zero_out = tuple(0 for _ in C.group(n - 1).exponents)
    kernel = [x for x in g.elements() if d_out.apply(x) == zero_out]
    image = {d_in.apply(y) for y in C.group(n + 1).elements()}
    mods = [p ** a for a in g.exponents]
    log_sizes = []
    j = 0
    while True:
        killed = sum(1 for x in kernel if tuple(p ** j * xi % m for xi, m in zip(x, mods)) in image)
        size = killed // len(image)
        log_sizes.append(round(_log(size, p)))
        if size == len(kernel) // len(image):
            break
        j += 1
    # number of cyclic factors of exponent >= j is log|H[p^j]| - log|H[p^(j-1)]|
    at_least = [log_sizes[k] - log_sizes[k - 1] for k in range(1, len(log_sizes))]
    exps = []
    for k, cnt in enumerate(at_least, start=1):
        nxt = at_least[k] if k < len(at_least) else 0
        exps.extend([k] * (cnt - nxt))
    return FpAbGroup(p, tuple(exps))


def _log(n: int, p: int) -> float:
    v = 0
    while n > 1:
        n //= p
        v += 1
    return v

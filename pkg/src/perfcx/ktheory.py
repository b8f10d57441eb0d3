"""K0 of thick subcategories, dense triangulated subcategories T(S, H), and the
cofiber-generation decision procedure.

A subgroup H of K0(T_S) is stored as a finite carrier of coordinates with an
integer lattice on them, plus a rule for every other coordinate of S
(``outside`` = "zero" or "free").  Perfect complexes have finite support, so
membership only ever inspects finitely many coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import gcd

from .complexes import PerfectComplex, component_complexes
from .errors import RingMismatch, UnsupportedRing, UnsupportedSupport
from .invariants import K0Element, ThickSupport, k0_class, supp
from .normal_forms import IntLattice, lattice_contains, lattice_from_generators
from .rings import (GenericPoint, LocalQuotient, Product, _PID,
                    is_prime_int, point_sort_key)


@dataclass(frozen=True)
class K0Presentation:
    rank: int
    basis: tuple  # human-readable names of the free generators
    keys: tuple  # coordinate points, aligned with basis


@dataclass(frozen=True)
class SubgroupSpec:
    support: ThickSupport
    carrier: tuple  # ordered coordinate points
    lattice: IntLattice
    outside: str = "zero"  # "zero" | "free"

    def __post_init__(self):
        if self.lattice.dim != len(self.carrier):
            raise ValueError("lattice dimension must equal the carrier size")
        if self.outside not in ("zero", "free"):
            raise ValueError(f"outside must be 'zero' or 'free', not {self.outside!r}")
        for pt in self.carrier:
            if not self.support.contains(pt):
                raise UnsupportedSupport(f"carrier point {pt} is outside the support")

    @classmethod
    def multiples(cls, m: int) -> "SubgroupSpec":
        """m Z inside K0(Db(proj R)) ~ Z (S = Spec R)."""
        return cls(ThickSupport.full(), (GenericPoint(),), lattice_from_generators(1, [(m,)]))

    def contains_class(self, cls_: K0Element) -> bool:
        coords = cls_.as_dict()
        for pt, v in coords.items():
            if pt not in self.carrier and self.outside == "zero" and v:
                return False
        return lattice_contains(self.lattice, cls_.vector(self.carrier))


@dataclass(frozen=True)
class SubgroupFlags:
    ideal: bool | None
    prime: bool | None
    maximal: bool | None
    submodule: bool


@dataclass(frozen=True)
class DivisibilityRow:
    point: object
    required: int  # gcd over the generators of this coordinate
    candidate: int
    divides: bool


@dataclass(frozen=True)
class Decision:
    verdict: bool
    support_ok: bool
    lattice_ok: bool
    rows: tuple = ()

    @property
    def all_divide(self) -> bool:
        return all(r.divides for r in self.rows)


def _ring_family(ring):
    if isinstance(ring, _PID):
        return "pid"
    if isinstance(ring, (LocalQuotient, Product)):
        return "artin"
    raise UnsupportedRing(f"no K0 model for {ring!r}")


def k0_group(ring, S: ThickSupport) -> K0Presentation:
    fam = _ring_family(ring)
    if fam == "pid":
        if S.kind == "full":
            return K0Presentation(1, ("[R]",), (GenericPoint(),))
        if S.kind == "primes":
            pts = S.sorted_points(ring)
            return K0Presentation(len(pts), tuple(f"[M({pt.label(ring)})]" for pt in pts), tuple(pts))
        raise UnsupportedRing("component supports need an Artin ring")
    if S.kind != "components":
        raise UnsupportedRing("Artin rings have component supports only")
    n = len(ring.components) if isinstance(ring, Product) else 1
    pts = S.sorted_points(ring)
    for pt in pts:
        if pt.index >= n:
            raise UnsupportedSupport(f"component {pt.index} out of range")
    return K0Presentation(len(pts), tuple(f"[R_{pt.index}]" for pt in pts), tuple(pts))


def is_member(X, S: ThickSupport, H: SubgroupSpec) -> bool:
    """X in T(S, H): supp(X) within S and [X] in H."""
    if H.support != S:
        raise UnsupportedSupport("subgroup is declared over a different support")
    if not supp(X).issubset(S):
        return False
    return H.contains_class(k0_class(X, S))


def _ring_of(X):
    if isinstance(X, PerfectComplex):
        return X.ring
    parts = component_complexes(X)
    return parts[0].ring if parts else None


def image_subgroup(complexes, S: ThickSupport) -> SubgroupSpec:
    """Image of K0 of the triangulated subcategory generated by ``complexes``."""
    classes = []
    ring = None
    for X in complexes:
        if not supp(X).issubset(S):
            raise UnsupportedSupport("generator support not contained in S")
        classes.append(k0_class(X, S))
        ring = ring or _ring_of(X)
    if S.kind == "full":
        carrier = (GenericPoint(),)
    else:
        pts = set()
        for X in complexes:
            pts |= supp(X).points
        carrier = tuple(sorted(pts, key=lambda pt: point_sort_key(ring, pt)))
    L = lattice_from_generators(len(carrier), [c.vector(carrier) for c in classes])
    return SubgroupSpec(S, carrier, L, "zero")


def _full_lattice(H: SubgroupSpec, keys) -> IntLattice:
    """H as a lattice in Z^keys (keys covering the whole finite K0 basis)."""
    gens = []
    for b in H.lattice.basis:
        coords = dict(zip(H.carrier, b))
        gens.append(tuple(coords.get(k, 0) for k in keys))
    if H.outside == "free":
        for i, k in enumerate(keys):
            if k not in H.carrier:
                gens.append(tuple(1 if j == i else 0 for j in range(len(keys))))
    return lattice_from_generators(len(keys), gens)


def _cyclic_flags(m: int) -> SubgroupFlags:
    m = abs(m)
    return SubgroupFlags(ideal=True, prime=(m == 0 or is_prime_int(m)), maximal=is_prime_int(m), submodule=True)


def classify_subgroup(ring, S: ThickSupport, H: SubgroupSpec) -> SubgroupFlags:
    """Ideal / prime / maximal / submodule status of the dense subcategory T(S, H)."""
    pres = k0_group(ring, S)
    keys = pres.keys
    L = _full_lattice(H, keys)
    if S.kind == "full":
        m = L.basis[0][0] if L.basis else 0
        return _cyclic_flags(m)
    if S.kind == "primes":
        # T_S carries no unit object; K0(T_S) is a module over K0(Db(proj R)) ~ Z
        return SubgroupFlags(ideal=None, prime=None, maximal=None, submodule=True)
    # componentwise ring Z^S
    n = len(keys)
    ideal = True
    for b in L.basis:
        for i in range(n):
            proj = tuple(b[j] if j == i else 0 for j in range(n))
            if not lattice_contains(L, proj):
                ideal = False
    if not ideal:
        return SubgroupFlags(ideal=False, prime=False, maximal=False, submodule=True)
    ms = [reduce(gcd, (b[i] for b in L.basis), 0) for i in range(n)]
    proper = [m for m in ms if m != 1]
    prime = len(proper) == 1 and (proper[0] == 0 or is_prime_int(proper[0]))
    maximal = len(proper) == 1 and is_prime_int(proper[0])
    return SubgroupFlags(ideal=True, prime=prime, maximal=maximal, submodule=True)


def can_generate(generators, Y) -> Decision:
    """Can Y be built from ``generators`` by shifts and cofiber sequences alone?

    Necessary and sufficient: supp(Y) lies in the union S of the generator
    supports, and [Y] lies in the image of the generators in K0(T_S).  The rows
    report, per coordinate, whether the gcd of the generator values divides
    Y's value; for a single generator this is the whole lattice condition.
    """
    gens = list(generators)
    rings = {_ring_of(g) for g in gens} | {_ring_of(Y)}
    rings.discard(None)
    if len(rings) > 1:
        raise RingMismatch("generators and target live over different rings")
    S = None
    for g in gens:
        s = supp(g)
        S = s if S is None else S.union(s)
    sY = supp(Y)
    if S is None:
        S = ThickSupport("components" if sY.kind == "components" else "primes")
    support_ok = sY.issubset(S)
    if not support_ok:
        return Decision(False, False, False, ())
    ring = next(iter(rings)) if rings else None
    H = image_subgroup(gens, S)
    y = k0_class(Y, S)
    lattice_ok = H.contains_class(y)
    classes = [k0_class(g, S) for g in gens]
    rows = []
    for pt in S.sorted_points(ring):
        req = reduce(gcd, (abs(c[pt]) for c in classes), 0)
        cand = y[pt]
        rows.append(DivisibilityRow(pt, req, cand, cand == 0 if req == 0 else cand % req == 0))
    return Decision(support_ok and lattice_ok, support_ok, lattice_ok, tuple(rows))


"""Supports and Euler characteristics: chi over the fraction field, p-local
lengths over a PID, residue-field dimensions over Artin components, and the
K0 class vectors they assemble into."""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import PerfectComplex, component_complexes, homology
from .errors import (ComponentOutOfRange, NonTorsionInput, RingMismatch,
                     UnsupportedSupport)
from .normal_forms import snf_full
from .rings import (ComponentPoint, GenericPoint, LocalQuotient, MaxPrime,
                    _PID, is_prime_elem, point_sort_key,
                    prime_factors)


@dataclass(frozen=True)
class ThickSupport:
    """A thick support: all of Spec R, a finite set of maximal primes, or a set of components."""

    kind: str  # "full" | "primes" | "components"
    points: frozenset = frozenset()

    @classmethod
    def full(cls):
        return cls("full")

    @classmethod
    def primes(cls, gens=()):
        return cls("primes", frozenset(g if isinstance(g, MaxPrime) else MaxPrime(g) for g in gens))

    @classmethod
    def components(cls, indices=()):
        return cls("components", frozenset(
            i if isinstance(i, ComponentPoint) else ComponentPoint(int(i)) for i in indices))

    def is_full(self) -> bool:
        return self.kind == "full"

    def is_empty(self) -> bool:
        return self.kind != "full" and not self.points

    def contains(self, point) -> bool:
        if self.kind == "full":
            return isinstance(point, (GenericPoint, MaxPrime))
        return point in self.points

    def issubset(self, other: "ThickSupport") -> bool:
        if self.is_empty():
            return True
        if other.kind == "full":
            return self.kind in ("full", "primes")
        if self.kind == "full":
            return False
        if self.kind != other.kind:
            if other.is_empty():
                return False
            raise RingMismatch("comparing prime supports with component supports")
        return self.points <= other.points

    def union(self, other: "ThickSupport") -> "ThickSupport":
        if self.is_empty():
            return other
        if other.is_empty():
            return self
        if "full" in (self.kind, other.kind):
            if "components" in (self.kind, other.kind):
                raise RingMismatch("union of prime and component supports")
            return ThickSupport.full()
        if self.kind != other.kind:
            raise RingMismatch("union of prime and component supports")
        return ThickSupport(self.kind, self.points | other.points)

    def sorted_points(self, ring) -> list:
        if self.kind == "full":
            return [GenericPoint()]
        return sorted(self.points, key=lambda pt: point_sort_key(ring, pt))


@dataclass(frozen=True)
class K0Element:
    """Coordinates of [X] in the basis of K0 of a thick subcategory; zeros omitted."""

    ambient: ThickSupport
    coords: tuple = ()  # sorted ((point, int), ...)

    @classmethod
    def make(cls, ambient, ring, coords: dict) -> "K0Element":
        items = [(pt, v) for pt, v in coords.items() if v]
        items.sort(key=lambda item: point_sort_key(ring, item[0]))
        return cls(ambient, tuple(items))

    def as_dict(self) -> dict:
        return dict(self.coords)

    def __getitem__(self, point) -> int:
        return self.as_dict().get(point, 0)

    def vector(self, keys) -> tuple:
        d = self.as_dict()
        return tuple(d.get(k, 0) for k in keys)


def _require_pid(X: PerfectComplex, what: str):
    if not isinstance(X.ring, _PID):
        raise RingMismatch(f"{what} needs a PID, got {X.ring!r}")


def _as_prime(ring, p):
    if isinstance(p, MaxPrime):
        return p.gen
    return ring.canonical(p)[0]


def supp(X) -> ThickSupport:
    """Support of a complex (or of an Artin component family)."""
    if isinstance(X, PerfectComplex) and isinstance(X.ring, _PID):
        H = homology(X)
        primes = set()
        for _, m in H.entries:
            if m.free_rank:
                return ThickSupport.full()
            for t in m.invariant_factors:
                primes.update(q for q, _ in prime_factors(X.ring, t))
        return ThickSupport.primes(primes)
    parts = component_complexes(X)
    return ThickSupport.components(i for i, P in enumerate(parts) if not homology(P).is_zero())


def chi_F(X: PerfectComplex) -> int:
    """Alternating sum of free ranks of homology (dimensions over the fraction field)."""
    _require_pid(X, "chi_F")
    return sum((-1) ** (n % 2) * m.free_rank for n, m in homology(X).entries)


def p_length(ring, factors, q) -> int:
    """Length of (+) R/(t) localized at q: sum of q-adic valuations."""
    return sum(ring.valuation(t, q) for t in factors)


def lambda_p(X: PerfectComplex, p) -> int:
    """Alternating sum of the lengths of H_i(X) localized at the prime p."""
    _require_pid(X, "lambda_p")
    q = _as_prime(X.ring, p)
    if not is_prime_elem(X.ring, q):
        raise ValueError(f"{X.ring.label(q)} is not prime")
    total = 0
    for n, m in homology(X).entries:
        if m.free_rank:
            raise NonTorsionInput(f"H_{n} has free rank {m.free_rank}", location=n)
        total += (-1) ** (n % 2) * p_length(X.ring, m.invariant_factors, q)
    return total


def _reduce_to_residue_field(P: PerfectComplex) -> PerfectComplex:
    ring: LocalQuotient = P.ring
    k = ring.residue_field()
    diffs = {n: d.map_entries(k.reduce, k) for n, d in P.diffs.items()}
    return PerfectComplex.build(k, dict(P.ranks), diffs, check=False)


def lambda_artin(X, i: int = 0) -> int:
    """Alternating sum of dim H_t(X (x) R_i/m_i) over the residue field of component i."""
    parts = component_complexes(X)
    if not 0 <= i < len(parts):
        raise ComponentOutOfRange(f"component {i} of {len(parts)}")
    Xk = _reduce_to_residue_field(parts[i])
    rk = {n: snf_full(d, track_inverses=False).rank for n, d in Xk.diffs.items()}
    return sum((-1) ** (n % 2) * (Xk.rank(n) - rk.get(n, 0) - rk.get(n + 1, 0)) for n in Xk.degrees)


def alternating_rank_sum(X) -> int:
    return sum((-1) ** (n % 2) * r for n, r in X.ranks.items())


def k0_class(X, S: ThickSupport) -> K0Element:
    """Coordinates of [X] in K0(T_S): chi_F for S = Spec R, (lambda_p) for finite
    prime sets, (Lambda_i) for Artin component sets."""
    s = supp(X)
    if not s.issubset(S):
        raise UnsupportedSupport("supp(X) is not contained in S")
    if S.kind == "full":
        if not isinstance(X, PerfectComplex) or not isinstance(X.ring, _PID):
            raise RingMismatch("full support is a PID notion")
        return K0Element.make(S, X.ring, {GenericPoint(): chi_F(X)})
    if S.kind == "primes":
        if not isinstance(X, PerfectComplex) or not isinstance(X.ring, _PID):
            raise RingMismatch("prime supports live over a PID")
        return K0Element.make(S, X.ring, {pt: lambda_p(X, pt) for pt in s.points})
    parts = component_complexes(X)
    ring = parts[0].ring if parts else None
    return K0Element.make(S, ring, {pt: lambda_artin(parts, pt.index) for pt in s.points})


def k0_module_roundtrip(X: PerfectComplex) -> int:
    """Class of X under K0(Db(proj R)) ~ K0(R): the alternating rank sum, checked against chi_F."""
    total = alternating_rank_sum(X)
    chi = chi_F(X)
    if total != chi:
        raise AssertionError(f"alternating rank sum {total} != chi_F {chi}")
    return total


def report(X) -> dict:
    """The CLI-facing invariants document."""
    if isinstance(X, PerfectComplex) and isinstance(X.ring, _PID):
        ring = X.ring
        s = supp(X)
        doc = {"supp": "Full" if s.is_full() else [pt.label(ring) for pt in s.sorted_points(ring)],
               "chi": chi_F(X)}
        if not s.is_full():
            doc["lambda"] = {pt.label(ring): lambda_p(X, pt) for pt in s.sorted_points(ring)}
        return doc
    parts = component_complexes(X)
    s = supp(parts)
    return {"supp": [pt.label() for pt in s.sorted_points(None)],
            "Lambda": {f"c{i}": lambda_artin(parts, i) for i in range(len(parts))}}


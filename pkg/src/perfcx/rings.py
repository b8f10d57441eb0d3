"""Ground rings: Z, GF(p)[x], their prime-power quotients and finite products.

Ring elements are plain immutable Python values owned by a ring object:

* ``Integers``             -- ``int``
* ``PolysOverPrimeField``  -- tuple of coefficients, ascending, trimmed
* ``LocalQuotient``        -- canonical base representative modulo q^e
* ``Product``              -- tuple of component residues

All arithmetic goes through the ring (``ring.add(a, b)`` and friends), so the
matrix and complex code is written once for every ring.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from math import gcd as _igcd

from . import polys
from .errors import RingMismatch, UnsupportedRing

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime_int(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for n < 3.3e24 (first 13 prime bases)."""
    if n < 2:
        return False
    for sp in _SMALL_PRIMES:
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class GroundRing:
    """Common interface. Subclasses are frozen dataclasses (hashable, comparable)."""

    is_pid = False

    @property
    def zero(self):
        raise NotImplementedError

    @property
    def one(self):
        raise NotImplementedError

    def from_int(self, n: int):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def is_zero(self, a) -> bool:
        return a == self.zero

    def is_unit(self, a) -> bool:
        raise NotImplementedError

    def parse(self, doc):
        raise NotImplementedError

    def dump(self, a):
        raise NotImplementedError

    def label(self, a) -> str:
        d = self.dump(a)
        return d if isinstance(d, str) else json.dumps(d, separators=(",", ":"))


# ---------------------------------------------------------------------------
# Principal ideal domains


class _PID(GroundRing):
    is_pid = True

    def norm(self, a) -> int:
        raise NotImplementedError

    def divmod(self, a, b):
        raise NotImplementedError

    def canonical(self, a):
        """Return (associate, unit) with a == unit * associate."""
        raise NotImplementedError

    def unit_inverse(self, u):
        raise NotImplementedError

    def exact_div(self, a, b):
        q, r = self.divmod(a, b)
        if not self.is_zero(r):
            raise ArithmeticError("inexact division")
        return q

    def divides(self, a, b) -> bool:
        """a | b, with the convention 0 | b iff b == 0."""
        if self.is_zero(a):
            return self.is_zero(b)
        return self.is_zero(self.divmod(b, a)[1])

    def gcd(self, a, b):
        while not self.is_zero(b):
            a, b = b, self.divmod(a, b)[1]
        return self.canonical(a)[0]

    def xgcd(self, a, b):
        """(g, s, t) with s*a + t*b = g canonical."""
        r0, r1 = a, b
        s0, s1 = self.one, self.zero
        t0, t1 = self.zero, self.one
        while not self.is_zero(r1):
            q, r = self.divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, self.sub(s0, self.mul(q, s1))
            t0, t1 = t1, self.sub(t0, self.mul(q, t1))
        g, u = self.canonical(r0)
        ui = self.unit_inverse(u)
        return g, self.mul(ui, s0), self.mul(ui, t0)

    def valuation(self, a, q) -> int:
        if self.is_zero(a):
            raise ValueError("valuation of zero")
        v = 0
        while True:
            d, r = self.divmod(a, q)
            if not self.is_zero(r):
                return v
            a, v = d, v + 1

    def power(self, a, n: int):
        out = self.one
        for _ in range(n):
            out = self.mul(out, a)
        return out


@dataclass(frozen=True)
class Integers(_PID):
    def __repr__(self):
        return "Z"

    zero = 0
    one = 1

    def from_int(self, n):
        return int(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_zero(self, a):
        return a == 0

    def is_unit(self, a):
        return a in (1, -1)

    def norm(self, a):
        return abs(a)

    def divmod(self, a, b):
        # symmetric remainder keeps entries small during elimination
        q, r = divmod(a, b)
        if r and 2 * abs(r) > abs(b):
            if b > 0:
                q, r = q + 1, r - b
            else:
                q, r = q + 1, r - b
        return q, r

    def exact_div(self, a, b):
        q, r = divmod(a, b)
        if r:
            raise ArithmeticError("inexact division")
        return q

    def divides(self, a, b):
        return b == 0 if a == 0 else b % a == 0

    def canonical(self, a):
        return (a, 1) if a >= 0 else (-a, -1)

    def unit_inverse(self, u):
        return u

    def gcd(self, a, b):
        return _igcd(a, b)

    def valuation(self, a, q):
        if a == 0:
            raise ValueError("valuation of zero")
        v = 0
        while a % q == 0:
            a //= q
            v += 1
        return v

    def power(self, a, n):
        return a ** n

    def parse(self, doc):
        if isinstance(doc, bool):
            raise ValueError(f"not an integer: {doc!r}")
        if isinstance(doc, int):
            return doc
        if isinstance(doc, str):
            return int(doc.strip())
        raise ValueError(f"not an integer: {doc!r}")

    def dump(self, a):
        return str(a)


@dataclass(frozen=True)
class PolysOverPrimeField(_PID):
    p: int

    def __post_init__(self):
        if not is_prime_int(self.p):
            raise UnsupportedRing(f"GF({self.p})[x] needs a prime characteristic")

    def __repr__(self):
        return f"F{self.p}[x]"

    @property
    def zero(self):
        return ()

    @property
    def one(self):
        return (1,)

    def from_int(self, n):
        return polys.trim([n], self.p)

    def add(self, a, b):
        return polys.add(a, b, self.p)

    def sub(self, a, b):
        return polys.sub(a, b, self.p)

    def neg(self, a):
        return polys.neg(a, self.p)

    def mul(self, a, b):
        return polys.mul(a, b, self.p)

    def is_unit(self, a):
        return len(a) == 1

    def norm(self, a):
        return len(a)  # degree + 1; zero polynomial has norm 0

    def divmod(self, a, b):
        return polys.divmod_(a, b, self.p)

    def canonical(self, a):
        m, lc = polys.monic(a, self.p)
        return m, (lc,)

    def unit_inverse(self, u):
        return (pow(u[0], -1, self.p),)

    def parse(self, doc):
        if isinstance(doc, str):
            doc = json.loads(doc)
        if isinstance(doc, int) and not isinstance(doc, bool):
            doc = [doc]
        if not isinstance(doc, list):
            raise ValueError(f"not a coefficient array: {doc!r}")
        return polys.trim([int(c) for c in doc], self.p)

    def dump(self, a):
        return list(a)


# ---------------------------------------------------------------------------
# Quotients and products


@dataclass(frozen=True)
class LocalQuotient(GroundRing):
    """base / (q^e) for a PID base and a canonical prime element q."""

    base: _PID
    q: object
    e: int

    def __post_init__(self):
        if not isinstance(self.base, (Integers, PolysOverPrimeField)):
            raise UnsupportedRing("quotient base must be Z or GF(p)[x]")
        if self.e < 1:
            raise UnsupportedRing("quotient exponent must be >= 1")
        if not is_prime_elem(self.base, self.q) or self.base.canonical(self.q)[0] != self.q:
            raise UnsupportedRing(f"{self.base.label(self.q)} is not a canonical prime")

    def __repr__(self):
        return f"{self.base!r}/({self.base.label(self.q)}^{self.e})"

    @property
    def modulus(self):
        return self.base.power(self.q, self.e)

    def reduce(self, a):
        r = self.base.divmod(a, self.modulus)[1]
        if isinstance(self.base, Integers):
            r %= self.modulus
        return r

    @property
    def zero(self):
        return self.base.zero

    @property
    def one(self):
        return self.reduce(self.base.one)

    def from_int(self, n):
        return self.reduce(self.base.from_int(n))

    def add(self, a, b):
        return self.reduce(self.base.add(a, b))

    def sub(self, a, b):
        return self.reduce(self.base.sub(a, b))

    def neg(self, a):
        return self.reduce(self.base.neg(a))

    def mul(self, a, b):
        return self.reduce(self.base.mul(a, b))

    def valuation(self, a) -> int:
        """q-adic valuation of the residue; e for zero."""
        if self.base.is_zero(a):
            return self.e
        return self.base.valuation(a, self.q)

    def is_unit(self, a):
        return self.valuation(a) == 0

    def inverse(self, u):
        g, s, _ = self.base.xgcd(u, self.modulus)
        if g != self.base.one:
            raise ArithmeticError("not a unit")
        return self.reduce(s)

    def exact_div(self, a, b):
        """Some c with c*b == a; requires valuation(a) >= valuation(b)."""
        vb = self.valuation(b)
        if self.valuation(a) < vb:
            raise ArithmeticError("inexact division")
        if self.is_zero(a):
            return self.zero
        qv = self.base.power(self.q, vb)
        a1 = self.base.exact_div(a, qv)
        b1 = self.base.exact_div(b, qv)
        return self.mul(a1, self.inverse(self.reduce(b1)))

    def q_power(self, v: int):
        return self.reduce(self.base.power(self.q, v))

    def canonical(self, a):
        """(q^v, unit) with a == unit * q^v; zero maps to (0, 1)."""
        v = self.valuation(a)
        if v >= self.e:
            return self.zero, self.one
        qv = self.base.power(self.q, v)
        u = self.reduce(self.base.exact_div(a, qv))
        return self.q_power(v), u

    def residue_field(self) -> "LocalQuotient":
        return LocalQuotient(self.base, self.q, 1)

    def parse(self, doc):
        return self.reduce(self.base.parse(doc))

    def dump(self, a):
        return self.base.dump(a)


@dataclass(frozen=True)
class Product(GroundRing):
    components: tuple

    def __post_init__(self):
        if not self.components:
            raise UnsupportedRing("product needs at least one component")
        for c in self.components:
            if not isinstance(c, LocalQuotient):
                raise UnsupportedRing("product components must be local quotients")

    def __repr__(self):
        return " x ".join(repr(c) for c in self.components)

    @property
    def zero(self):
        return tuple(c.zero for c in self.components)

    @property
    def one(self):
        return tuple(c.one for c in self.components)

    def from_int(self, n):
        return tuple(c.from_int(n) for c in self.components)

    def add(self, a, b):
        return tuple(c.add(x, y) for c, x, y in zip(self.components, a, b))

    def sub(self, a, b):
        return tuple(c.sub(x, y) for c, x, y in zip(self.components, a, b))

    def neg(self, a):
        return tuple(c.neg(x) for c, x in zip(self.components, a))

    def mul(self, a, b):
        return tuple(c.mul(x, y) for c, x, y in zip(self.components, a, b))

    def is_unit(self, a):
        return all(c.is_unit(x) for c, x in zip(self.components, a))

    def parse(self, doc):
        if isinstance(doc, (int, str)) and not isinstance(doc, bool):
            return self.from_int(int(doc))
        if not isinstance(doc, list) or len(doc) != len(self.components):
            raise ValueError(f"expected {len(self.components)} component residues, got {doc!r}")
        return tuple(c.parse(d) for c, d in zip(self.components, doc))

    def dump(self, a):
        return [c.dump(x) for c, x in zip(self.components, a)]


ZZ = Integers()


def is_prime_elem(ring: GroundRing, x) -> bool:
    """True iff x generates a maximal ideal of the PID ``ring``."""
    if isinstance(ring, Integers):
        return is_prime_int(abs(x))
    if isinstance(ring, PolysOverPrimeField):
        return polys.is_irreducible(x, ring.p)
    raise RingMismatch(f"primality is only defined over Z or GF(p)[x], not {ring!r}")


@lru_cache(maxsize=4096)
def _factor_int(n: int) -> tuple:
    from sympy import factorint

    return tuple(sorted(factorint(n).items()))


@lru_cache(maxsize=4096)
def _factor_poly(f: tuple, p: int) -> tuple:
    from sympy.polys.domains import ZZ as SZZ
    from sympy.polys.galoistools import gf_factor

    _, factors = gf_factor([SZZ(c) for c in reversed(f)], p, SZZ)
    out = [(tuple(int(c) for c in reversed(g)), k) for g, k in factors]
    return tuple(sorted(out, key=lambda item: (len(item[0]), item[0])))


def prime_factors(ring: GroundRing, x) -> list:
    """[(canonical prime, exponent), ...] of a nonzero element of a PID, sorted."""
    if isinstance(ring, Integers):
        if x == 0:
            raise ValueError("cannot factor zero")
        return list(_factor_int(abs(x)))
    if isinstance(ring, PolysOverPrimeField):
        if not x:
            raise ValueError("cannot factor zero")
        return list(_factor_poly(x, ring.p))
    raise RingMismatch(f"factorization needs a PID, not {ring!r}")


def prime_sort_key(ring: GroundRing, q):
    if isinstance(ring, PolysOverPrimeField):
        return (len(q), q)
    return (q,)


# ---------------------------------------------------------------------------
# Points of Spec


@dataclass(frozen=True, order=True)
class GenericPoint:
    """The zero ideal of a PID."""

    def label(self, ring=None) -> str:
        return "(0)"


@dataclass(frozen=True)
class MaxPrime:
    gen: object

    def label(self, ring) -> str:
        return ring.label(self.gen)


@dataclass(frozen=True)
class ComponentPoint:
    index: int

    def label(self, ring=None) -> str:
        return f"c{self.index}"


def point_sort_key(ring, point):
    if isinstance(point, GenericPoint):
        return (0,)
    if isinstance(point, MaxPrime):
        return (1,) + prime_sort_key(ring, point.gen)
    return (2, point.index)


def parse_point(ring: GroundRing, label) -> object:
    """Inverse of ``point.label(ring)``."""
    if isinstance(label, str) and label.strip() in ("(0)", "generic"):
        return GenericPoint()
    if isinstance(label, str) and label.startswith("c") and label[1:].isdigit():
        return ComponentPoint(int(label[1:]))
    if isinstance(ring, (LocalQuotient, Product)):
        return ComponentPoint(int(label))
    if not ring.is_pid:
        raise RingMismatch(f"no prime points named {label!r} over {ring!r}")
    x = ring.parse(label)
    if not is_prime_elem(ring, x):
        raise ValueError(f"{label!r} is not a prime element")
    return MaxPrime(ring.canonical(x)[0])


def components_of(ring: GroundRing) -> tuple:
    """Local components of an Artin-type ring."""
    if isinstance(ring, Product):
        return ring.components
    if isinstance(ring, LocalQuotient):
        return (ring,)
    raise RingMismatch(f"{ring!r} is not a product of local quotients")

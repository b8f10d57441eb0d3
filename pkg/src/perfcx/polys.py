"""Dense polynomial arithmetic over GF(p).

A polynomial a_0 + a_1 x + ... + a_n x^n is the tuple (a_0, ..., a_n) with
entries in range(p) and a_n != 0; the zero polynomial is ().
"""

from __future__ import annotations

Poly = tuple

DEGREE_CAP = 20


def trim(a, p: int) -> Poly:
    coeffs = [c % p for c in a]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def degree(a: Poly) -> int:
    return len(a) - 1  # -1 for the zero polynomial


def add(a: Poly, b: Poly, p: int) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return trim(out, p)


def neg(a: Poly, p: int) -> Poly:
    return tuple((-c) % p for c in a)


def sub(a: Poly, b: Poly, p: int) -> Poly:
    return add(a, neg(b, p), p)


def mul(a: Poly, b: Poly, p: int) -> Poly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out, p)


def scale(a: Poly, c: int, p: int) -> Poly:
    return trim([c * x for x in a], p)


def divmod_(a: Poly, b: Poly, p: int) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    if len(r) - 1 < db:
        return (), tuple(r)
    q = [0] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        c = r[k + db] * inv % p
        q[k] = c
        if c:
            for j, y in enumerate(b):
                r[k + j] = (r[k + j] - c * y) % p
    return trim(q, p), trim(r[:db], p)


def monic(a: Poly, p: int) -> tuple[Poly, int]:
    """Return (monic associate, leading coefficient)."""
    if not a:
        return (), 1
    lc = a[-1]
    return scale(a, pow(lc, -1, p), p), lc


def gcd(a: Poly, b: Poly, p: int) -> Poly:
    while b:
        a, b = b, divmod_(a, b, p)[1]
    return monic(a, p)[0]


def xgcd(a: Poly, b: Poly, p: int) -> tuple[Poly, Poly, Poly]:
    """(g, s, t) with s*a + t*b = g, g monic (or zero)."""
    r0, r1 = a, b
    s0, s1 = (1,), ()
    t0, t1 = (), (1,)
    while r1:
        q, r = divmod_(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1, p), p)
        t0, t1 = t1, sub(t0, mul(q, t1, p), p)
    if not r0:
        return (), (), ()
    inv = pow(r0[-1], -1, p)
    return scale(r0, inv, p), scale(s0, inv, p), scale(t0, inv, p)


def powmod(a: Poly, n: int, m: Poly, p: int) -> Poly:
    result: Poly = divmod_((1,), m, p)[1]
    base = divmod_(a, m, p)[1]
    while n:
        if n & 1:
            result = divmod_(mul(result, base, p), m, p)[1]
        base = divmod_(mul(base, base, p), m, p)[1]
        n >>= 1
    return result


def is_irreducible(f: Poly, p: int) -> bool:
    """Distinct-degree test: f is irreducible iff gcd(x^(p^d) - x, f) = 1 for d <= deg/2."""
    n = degree(f)
    if n < 1:
        return False
    if n == 1:
        return True
    if n > DEGREE_CAP:
        from .errors import CapacityExceeded

        raise CapacityExceeded(f"irreducibility test capped at degree {DEGREE_CAP}, got {n}")
    x = (0, 1)
    h = x
    for _ in range(n // 2):
        h = powmod(h, p, f, p)
        if gcd(sub(h, x, p), f, p) != (1,):
            return False
    return True


def format_poly(a: Poly) -> str:
    if not a:
        return "0"
    terms = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if not c:
            continue
        mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        if not mono:
            terms.append(str(c))
        else:
            terms.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(terms)

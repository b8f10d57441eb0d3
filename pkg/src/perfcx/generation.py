"""Cofiber-generation certificates: a planner that builds a target complex from
standard atoms by shifts and cones, and a verifier that replays a certificate
from scratch.

Objects inside a certificate are named by references: ``a<i>`` is the i-th
atom, ``s<j>`` the result of the step with that id, and a suffix ``@k`` shifts
the object by k.  Each step is the cone of an explicit chain map between two
earlier objects.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .complexes import (ChainMap, HomologyProfile, PerfectComplex, cone, homology,
                        homology_generators, moore, shift, shift_map, unit_complex,
                        zero_complex)
from .errors import (DomainError, MalformedCertificate, NonTorsionInput, NotHereditary,
                     UnsupportedGenerators, UnsupportedSupport, VerificationFailed)
from .invariants import ThickSupport, supp
from .matrix import Matrix
from .normal_forms import solve
from .rings import MaxPrime, _PID, is_prime_elem, prime_factors, prime_sort_key


@dataclass(frozen=True)
class Atom:
    kind: str  # "unit" | "moore"
    p: object = None  # prime element for Moore atoms
    shift: int = 0


@dataclass(frozen=True, eq=False)
class Step:
    id: str
    src: str
    dst: str
    components: dict = field(default_factory=dict)  # degree -> Matrix


@dataclass(frozen=True, eq=False)
class Certificate:
    ring: object
    atoms: tuple
    steps: tuple
    final: str | None  # None: the zero object
    claimed: HomologyProfile

    def __len__(self):
        return len(self.steps)


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    failing_step: int | None = None  # index into steps; len(steps) for the final check
    reason: str = ""

    def raise_for_failure(self):
        if not self.ok:
            raise VerificationFailed(self.reason, location=self.failing_step)


_REF = re.compile(r"^([as]\d+|s\w+)(?:@(-?\d+))?$")


def parse_ref(ref: str):
    m = _REF.match(ref or "")
    if not m:
        raise MalformedCertificate(f"bad object reference {ref!r}")
    return m.group(1), int(m.group(2) or 0)


def format_ref(name: str, k: int = 0) -> str:
    return name if k == 0 else f"{name}@{k}"


def atom_complex(ring, atom: Atom) -> PerfectComplex:
    if atom.kind == "unit":
        return unit_complex(ring, atom.shift)
    if atom.kind == "moore":
        if not is_prime_elem(ring, atom.p):
            raise MalformedCertificate(f"Moore atom at non-prime {ring.label(atom.p)}")
        return shift(moore(ring, atom.p), atom.shift)
    raise MalformedCertificate(f"unknown atom kind {atom.kind!r}")


# ---------------------------------------------------------------------------
# building certificates


class _Builder:
    """Accumulates atoms and steps while keeping the built objects at hand."""

    def __init__(self, ring):
        self.ring = ring
        self.atoms = []
        self.steps = []
        self.objects = {}

    def atom(self, atom: Atom) -> str:
        if atom in self.atoms:
            return f"a{self.atoms.index(atom)}"
        name = f"a{len(self.atoms)}"
        self.atoms.append(atom)
        self.objects[name] = atom_complex(self.ring, atom)
        return name

    def obj(self, ref: str) -> PerfectComplex:
        name, k = parse_ref(ref)
        return shift(self.objects[name], k)

    def cone(self, src: str, dst: str, components: dict) -> str:
        f = ChainMap.build(self.obj(src), self.obj(dst), components)
        name = f"s{len(self.steps) + 1}"
        self.steps.append(Step(name, src, dst, dict(f.components)))
        self.objects[name] = cone(f)
        return name

    def certificate(self, final, claimed) -> Certificate:
        return Certificate(self.ring, tuple(self.atoms), tuple(self.steps), final, claimed)


def _require_pid(ring):
    if not isinstance(ring, _PID):
        raise NotHereditary(f"certificates are only planned over a PID, not {ring!r}")


def _check_support(ring, S: ThickSupport, Y: PerfectComplex):
    if S.kind == "components":
        raise UnsupportedSupport("component supports belong to Artin rings")
    if not supp(Y).issubset(S):
        raise UnsupportedSupport("supp(Y) is not contained in S")


def _moore_tower(b: _Builder, q, e: int, n: int) -> str:
    """R/(q^e) in degree n from M(q)[n] and M(q)[n-1] in e - 1 cones."""
    top = b.atom(Atom("moore", q, n))
    if e == 1:
        return top
    src = b.atom(Atom("moore", q, n - 1))
    acc = top
    for _ in range(e - 1):
        rows = b.obj(acc).rank(n)
        col = Matrix.from_rows(b.ring, [[b.ring.one if i == 0 else b.ring.zero] for i in range(rows)], 1)
        acc = b.cone(src, acc, {n: col})
    return acc


def _unit_cone(b: _Builder, t, n: int) -> str:
    """R/(t) in degree n as the cone of t: R[n] -> R[n]."""
    a = b.atom(Atom("unit", None, n))
    return b.cone(a, a, {n: Matrix.from_rows(b.ring, [[t]])})


def _sum_pieces(b: _Builder, pieces) -> str | None:
    """Direct sum via cones of zero maps piece[-1] -> accumulated."""
    acc = None
    for ref in pieces:
        if acc is None:
            acc = ref
        else:
            name, k = parse_ref(ref)
            acc = b.cone(format_ref(name, k - 1), acc, {})
    return acc


def _plan_formality(ring, S: ThickSupport, Y: PerfectComplex) -> Certificate:
    H = homology(Y)
    b = _Builder(ring)
    pieces = []
    for n, m in H.entries:
        for t in m.invariant_factors:
            if S.is_full():
                pieces.append(_unit_cone(b, t, n))
            else:
                for q, e in sorted(prime_factors(ring, t), key=lambda qe: prime_sort_key(ring, qe[0])):
                    pieces.append(_moore_tower(b, q, e, n))
        for _ in range(m.free_rank):
            pieces.append(b.atom(Atom("unit", None, n)))
    return b.certificate(_sum_pieces(b, pieces), H)


# -- killing homology classes ------------------------------------------------


def _torsion_degrees(X: PerfectComplex, q):
    H = homology(X)
    out = []
    for n, m in H.entries:
        if m.free_rank:
            raise NonTorsionInput(f"H_{n} has free rank {m.free_rank}", location=n)
        if any(X.ring.valuation(t, q) for t in m.invariant_factors):
            out.append(n)
    return out


def kill_bottom_class(X: PerfectComplex, p):
    """Map alpha: M(p)[k] -> X hitting a class of order p in the lowest degree k
    with p-torsion homology; returns (alpha, cone(alpha))."""
    R = X.ring
    if not isinstance(R, _PID):
        raise NotHereditary("killing classes needs a PID")
    q = p.gen if isinstance(p, MaxPrime) else R.canonical(p)[0]
    degrees = _torsion_degrees(X, q)
    if not degrees:
        raise UnsupportedSupport(f"{R.label(q)} is not in supp(X)")
    k = degrees[0]
    for cycle, order in homology_generators(X, k):
        if not R.is_zero(order) and R.valuation(order, q):
            break
    else:  # pragma: no cover - guarded by _torsion_degrees
        raise AssertionError("no p-torsion generator found")
    c = R.exact_div(order, q)
    t = tuple(R.mul(c, x) for x in cycle)
    sign = R.one if k % 2 == 0 else R.neg(R.one)
    rhs = tuple(R.mul(R.mul(sign, q), x) for x in t)
    y = solve(X.d(k + 1), rhs)
    if y is None:  # pragma: no cover - p t is a boundary by construction
        raise AssertionError("p * t is not a boundary")
    A = shift(moore(R, q), k)
    comps = {k: Matrix.from_rows(R, [[x] for x in t], 1)}
    if X.rank(k + 1):
        comps[k + 1] = Matrix.from_rows(R, [[x] for x in y], 1)
    alpha = ChainMap.build(A, X, comps)
    return alpha, cone(alpha)


def _source_block(f: ChainMap, alpha: ChainMap) -> ChainMap:
    """delta o f for the projection delta: cone(alpha) -> source(alpha)[1]."""
    A = alpha.source
    A1 = shift(A, 1)
    comps = {}
    for n, m in f.components.items():
        r = A.rank(n - 1)
        comps[n] = Matrix(m.ring, r, m.ncols, m.rows[:r])
    return ChainMap.build(f.source, A1, comps)


def _transport(phi_Y: ChainMap, alpha: ChainMap, built: PerfectComplex) -> ChainMap:
    """Quasi-isomorphism cone(g) -> X, (y, c) |-> pi_X(phi_Y(y)) - alpha(c)."""
    A, X = alpha.source, alpha.target
    Yp = phi_Y.source
    R = X.ring
    comps = {}
    for n in built.ranks:
        ry, ra = Yp.rank(n), A.rank(n)
        m = phi_Y.at(n)
        skip = A.rank(n - 1)
        pi = Matrix(R, X.rank(n), ry, m.rows[skip:]) if ry else Matrix.zeros(R, X.rank(n), 0)
        al = -alpha.at(n)
        rows = [tuple(pi.rows[i]) + tuple(al.rows[i]) for i in range(X.rank(n))]
        comps[n] = Matrix(R, X.rank(n), ry + ra, tuple(rows))
    return ChainMap.build(built, X, comps)


def _kill_build(b: _Builder, X: PerfectComplex, primes):
    """Reference to an object quasi-isomorphic to X plus the quasi-isomorphism."""
    R = X.ring
    H = homology(X)
    lowest = H.entries[0][0]
    q = None
    for pt in primes:
        if any(R.valuation(t, pt) for t in H[lowest].invariant_factors):
            q = pt
            break
    if q is None:
        raise UnsupportedSupport("homology outside the declared support")
    alpha, residual = kill_bottom_class(X, q)
    k = lowest
    atom = b.atom(Atom("moore", q, k))
    if homology(residual).is_zero():
        return atom, alpha
    ref_y, phi_y = _kill_build(b, residual, primes)
    delta = _source_block(phi_y, alpha)
    g = shift_map(delta, -1)
    name = b.cone(format_ref(ref_y, -1), atom, dict(g.components))
    return name, _transport(phi_y, alpha, b.objects[name])


def _plan_kill(ring, S: ThickSupport, Y: PerfectComplex) -> Certificate:
    if S.is_full():
        raise UnsupportedSupport("the kill strategy builds from Moore atoms; use a finite prime support")
    H = homology(Y)
    b = _Builder(ring)
    if H.is_zero():
        return b.certificate(None, H)
    primes = [pt.gen for pt in S.sorted_points(ring)]
    ref, _ = _kill_build(b, Y, primes)
    return b.certificate(ref, H)


STRATEGIES = {"formality": _plan_formality, "kill": _plan_kill}


def plan(ring, S: ThickSupport, Y: PerfectComplex, strategy: str = "formality") -> Certificate:
    """Certificate building Y from shifts of R (S = Spec R) or of M(p), p in S."""
    _require_pid(ring)
    if Y.ring != ring:
        raise MalformedCertificate("target lives over a different ring")
    _check_support(ring, S, Y)
    try:
        planner = STRATEGIES[strategy]
    except KeyError:
        raise ValueError(f"unknown strategy {strategy!r}") from None
    return planner(ring, S, Y)


def standard_atom(X: PerfectComplex):
    """The Atom equal to X on the nose, or None."""
    R = X.ring
    if len(X.ranks) == 1 and not X.diffs:
        (n, r), = X.ranks.items()
        if r == 1:
            return Atom("unit", None, n)
    if len(X.ranks) == 2 and set(X.ranks.values()) == {1}:
        lo = min(X.ranks)
        if lo + 1 in X.ranks:
            x = X.d(lo + 1)[0, 0]
            sign = R.one if lo % 2 == 0 else R.neg(R.one)
            q, _ = R.canonical(R.mul(sign, x))
            if R.mul(sign, x) == q and is_prime_elem(R, q):
                return Atom("moore", q, lo)
    return None


def plan_from(generators, Y: PerfectComplex, strategy: str = "formality") -> Certificate:
    """Plan from explicit generators; only shifts of R or of prime Moore complexes are accepted."""
    atoms = []
    for g in generators:
        a = standard_atom(g)
        if a is None:
            raise UnsupportedGenerators("certificates are synthesized from R or M(p) generators only")
        atoms.append(a)
    ring = Y.ring
    if any(a.kind == "unit" for a in atoms):
        S = ThickSupport.full()
    else:
        S = ThickSupport.primes(ring.canonical(a.p)[0] for a in atoms)
    return plan(ring, S, Y, strategy)


# ---------------------------------------------------------------------------
# verification


def _resolve(objects, ref):
    name, k = parse_ref(ref)
    if name not in objects:
        raise MalformedCertificate(f"dangling reference {ref!r}")
    return shift(objects[name], k)


def _replay(cert: Certificate):
    """(objects, report): every atom and step rebuilt from scratch."""
    _require_pid(cert.ring)
    objects = {}
    for i, atom in enumerate(cert.atoms):
        objects[f"a{i}"] = atom_complex(cert.ring, atom)
    for idx, step in enumerate(cert.steps):
        if step.id in objects or not re.fullmatch(r"s\w+", step.id):
            raise MalformedCertificate(f"bad or duplicate step id {step.id!r}", location=idx)
        for m in step.components.values():
            if m.ring != cert.ring:
                raise MalformedCertificate(f"step {step.id} has entries over {m.ring!r}", location=idx)
        src, dst = (_resolve(objects, r) for r in (step.src, step.dst))
        try:
            f = ChainMap.build(src, dst, step.components)
        except DomainError as err:
            return objects, VerificationReport(False, idx, f"step {step.id}: {err}")
        objects[step.id] = cone(f)
    return objects, None


def realize(cert: Certificate) -> PerfectComplex:
    """The final object of a certificate (zero complex when final is None)."""
    objects, failure = _replay(cert)
    if failure is not None:
        failure.raise_for_failure()
    if cert.final is None:
        return zero_complex(cert.ring)
    return _resolve(objects, cert.final)


def verify(cert: Certificate) -> VerificationReport:
    """Replay every cone literally and compare the final homology with the claim."""
    objects, failure = _replay(cert)
    if failure is not None:
        return failure
    H = HomologyProfile() if cert.final is None else homology(_resolve(objects, cert.final))
    if H != cert.claimed:
        return VerificationReport(False, len(cert.steps), "final homology differs from the claimed profile")
    return VerificationReport(True)


def max_steps(Y: PerfectComplex) -> int:
    """Regression bound: 2 * total homology length + number of summands."""
    R = Y.ring
    length = summands = 0
    for _, m in homology(Y).entries:
        summands += m.free_rank + len(m.invariant_factors)
        length += m.free_rank
        for t in m.invariant_factors:
            length += sum(e for _, e in prime_factors(R, t))
    return 2 * length + summands

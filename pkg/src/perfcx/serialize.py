"""JSON documents for rings, complexes, maps, subgroups, certificates and
p-group complexes.

Parsers are lenient about integers (JSON numbers or decimal strings) and
strict about structure: any shape problem raises ``SchemaError`` carrying a
path such as ``$.diff.1[0][2]``.  Dumpers write ring elements as strings and
always sort keys, so identical objects give identical bytes.
"""

from __future__ import annotations

import json

from .complexes import ChainMap, HomologyProfile, ModuleClass, PerfectComplex
from .generation import Atom, Certificate, Step
from .invariants import ThickSupport
from .ktheory import SubgroupSpec
from .matrix import Matrix
from .normal_forms import lattice_from_generators
from .pgroups import FpComplex, make_complex
from .rings import (ZZ, Integers, LocalQuotient, PolysOverPrimeField, Product,
                    parse_point, prime_factors)


class SchemaError(ValueError):
    """Malformed input document."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


def _get(doc, key, path, kind=None):
    if not isinstance(doc, dict):
        raise SchemaError("expected an object", path)
    if key not in doc:
        raise SchemaError(f"missing key {key!r}", path)
    v = doc[key]
    if kind is not None and not isinstance(v, kind):
        raise SchemaError(f"{key!r} has the wrong type", f"{path}.{key}")
    return v


def _int(v, path) -> int:
    if isinstance(v, bool):
        raise SchemaError("expected an integer", path)
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        try:
            return int(v.strip())
        except ValueError:
            pass
    raise SchemaError(f"expected an integer, got {v!r}", path)


def _elem(ring, v, path):
    try:
        return ring.parse(v)
    except (ValueError, TypeError, json.JSONDecodeError) as err:
        raise SchemaError(str(err), path) from None


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# rings


def ring_to_doc(ring) -> dict:
    if isinstance(ring, Integers):
        return {"kind": "Z"}
    if isinstance(ring, PolysOverPrimeField):
        return {"kind": "Fpx", "p": ring.p}
    if isinstance(ring, LocalQuotient):
        return {"kind": "quotient", "base": ring_to_doc(ring.base), "q": ring.base.dump(ring.q), "e": ring.e}
    if isinstance(ring, Product):
        return {"kind": "product", "components": [ring_to_doc(c) for c in ring.components]}
    raise TypeError(f"no document form for {ring!r}")


def ring_from_doc(doc, path="$"):
    if isinstance(doc, str):
        return ring_from_text(doc)
    kind = _get(doc, "kind", path, str)
    if kind == "Z":
        return ZZ
    if kind == "Fpx":
        return PolysOverPrimeField(_int(_get(doc, "p", path), f"{path}.p"))
    if kind == "quotient":
        base = ring_from_doc(_get(doc, "base", path), f"{path}.base")
        q = _elem(base, _get(doc, "q", path), f"{path}.q")
        return LocalQuotient(base, base.canonical(q)[0], _int(_get(doc, "e", path), f"{path}.e"))
    if kind == "product":
        comps = _get(doc, "components", path, list)
        return Product(tuple(ring_from_doc(c, f"{path}.components[{i}]") for i, c in enumerate(comps)))
    raise SchemaError(f"unknown ring kind {kind!r}", f"{path}.kind")


def ring_from_text(text: str):
    """Shorthands ``Z``, ``Fpx:p`` and ``Z/n`` (n > 1; split into prime-power components)."""
    t = text.strip()
    if t == "Z":
        return ZZ
    if t.startswith("Fpx:"):
        return PolysOverPrimeField(_int(t[4:], "$"))
    if t.startswith("Z/"):
        n = _int(t[2:], "$")
        if n < 2:
            raise SchemaError("Z/n needs n >= 2")
        comps = tuple(LocalQuotient(ZZ, q, e) for q, e in prime_factors(ZZ, n))
        return comps[0] if len(comps) == 1 else Product(comps)
    raise SchemaError(f"unknown ring shorthand {text!r}")


# ---------------------------------------------------------------------------
# matrices, complexes, maps


def matrix_to_doc(m: Matrix) -> list:
    return [[m.ring.dump(x) for x in row] for row in m.rows]


def matrix_from_doc(ring, doc, shape, path) -> Matrix:
    if not isinstance(doc, list):
        raise SchemaError("matrix must be an array of rows", path)
    rows = []
    for i, row in enumerate(doc):
        if not isinstance(row, list):
            raise SchemaError("matrix row must be an array", f"{path}[{i}]")
        rows.append([_elem(ring, v, f"{path}[{i}][{j}]") for j, v in enumerate(row)])
    m, n = shape
    if len(rows) != m or any(len(r) != n for r in rows):
        raise SchemaError(f"expected a {m}x{n} matrix", path)
    return Matrix.from_rows(ring, rows, n)


def _degree_dict(doc, path) -> dict:
    if not isinstance(doc, dict):
        raise SchemaError("expected an object keyed by degree", path)
    return {_int(k, f"{path}.{k}"): v for k, v in doc.items()}


def complex_to_doc(X: PerfectComplex, with_ring: bool = True) -> dict:
    lo, hi = X.window or (0, 0)
    doc = {"lo": lo, "hi": hi,
           "ranks": {str(n): r for n, r in sorted(X.ranks.items())},
           "diff": {str(n): matrix_to_doc(d) for n, d in sorted(X.diffs.items())}}
    if with_ring:
        doc["ring"] = ring_to_doc(X.ring)
    return doc


def complex_from_doc(doc, ring=None, path="$") -> PerfectComplex:
    if ring is None or "ring" in doc:
        ring = ring_from_doc(_get(doc, "ring", path), f"{path}.ring")
    ranks = {n: _int(r, f"{path}.ranks.{n}") for n, r in _degree_dict(_get(doc, "ranks", path), f"{path}.ranks").items()}
    if any(r < 0 for r in ranks.values()):
        raise SchemaError("ranks must be non-negative", f"{path}.ranks")
    if "lo" in doc or "hi" in doc:
        lo, hi = _int(_get(doc, "lo", path), f"{path}.lo"), _int(_get(doc, "hi", path), f"{path}.hi")
        if any(r and not lo <= n <= hi for n, r in ranks.items()):
            raise SchemaError("a rank lies outside [lo, hi]", f"{path}.ranks")
    diffs = {}
    for n, m in _degree_dict(doc.get("diff", {}), f"{path}.diff").items():
        shape = (ranks.get(n - 1, 0), ranks.get(n, 0))
        diffs[n] = matrix_from_doc(ring, m, shape, f"{path}.diff.{n}")
    return PerfectComplex.build(ring, ranks, diffs)


def object_from_doc(doc, ring=None, path="$"):
    """A complex, or (key "parts") a list of componentwise complexes over local quotients."""
    if isinstance(doc, dict) and "parts" in doc:
        parts = _get(doc, "parts", path, list)
        return [complex_from_doc(p, None, f"{path}.parts[{i}]") for i, p in enumerate(parts)]
    return complex_from_doc(doc, ring, path)


def object_to_doc(X) -> dict:
    if isinstance(X, PerfectComplex):
        return complex_to_doc(X)
    return {"parts": [complex_to_doc(P) for P in X]}


def _components_to_doc(components: dict) -> dict:
    return {str(n): matrix_to_doc(m) for n, m in sorted(components.items())}


def _components_from_doc(ring, doc, source, target, path) -> dict:
    return {n: matrix_from_doc(ring, m, (target.rank(n), source.rank(n)), f"{path}.{n}")
            for n, m in _degree_dict(doc, path).items()}


def map_to_doc(f: ChainMap) -> dict:
    return {"source": complex_to_doc(f.source), "target": complex_to_doc(f.target),
            "components": _components_to_doc(f.components)}


def map_from_doc(doc, path="$") -> ChainMap:
    S = complex_from_doc(_get(doc, "source", path), None, f"{path}.source")
    T = complex_from_doc(_get(doc, "target", path), None, f"{path}.target")
    comps = _components_from_doc(S.ring, _get(doc, "components", path), S, T, f"{path}.components")
    return ChainMap.build(S, T, comps)


# ---------------------------------------------------------------------------
# homology profiles, supports, subgroups


def profile_to_doc(ring, H: HomologyProfile) -> dict:
    return {str(n): {"free": m.free_rank, "factors": [ring.dump(t) for t in m.invariant_factors]}
            for n, m in H.entries}


def profile_from_doc(ring, doc, path="$") -> HomologyProfile:
    out = {}
    for n, entry in _degree_dict(doc, path).items():
        p = f"{path}.{n}"
        free = _int(entry.get("free", 0) if isinstance(entry, dict) else None, f"{p}.free")
        facs = entry.get("factors", [])
        if not isinstance(facs, list):
            raise SchemaError("factors must be an array", f"{p}.factors")
        ts = [ring.canonical(_elem(ring, t, f"{p}.factors[{i}]"))[0] for i, t in enumerate(facs)]
        ts = [t for t in ts if not ring.is_unit(t)]
        out[n] = ModuleClass(free, tuple(sorted(ts, key=ring.norm)))
    return HomologyProfile.from_dict(out)


def support_to_doc(ring, S: ThickSupport):
    if S.is_full():
        return "Full"
    return [pt.label(ring) for pt in S.sorted_points(ring)]


def support_from_doc(ring, doc, path="$") -> ThickSupport:
    if isinstance(doc, str):
        if doc.strip() == "Full":
            return ThickSupport.full()
        doc = [s for s in doc.split(",") if s.strip()]
    if not isinstance(doc, list):
        raise SchemaError("support must be 'Full' or a list of points", path)
    pts = []
    for i, label in enumerate(doc):
        try:
            pts.append(parse_point(ring, label.strip() if isinstance(label, str) else label))
        except ValueError as err:
            raise SchemaError(str(err), f"{path}[{i}]") from None
    if isinstance(ring, (LocalQuotient, Product)):
        return ThickSupport.components(pts)
    return ThickSupport.primes(pts)


def subgroup_to_doc(ring, H: SubgroupSpec) -> dict:
    return {"support": support_to_doc(ring, H.support),
            "carrier": [pt.label(ring) for pt in H.carrier],
            "basis": [[str(x) for x in v] for v in H.lattice.basis],
            "outside": H.outside}


def subgroup_from_doc(ring, doc, path="$") -> SubgroupSpec:
    S = support_from_doc(ring, _get(doc, "support", path), f"{path}.support")
    carrier = []
    for i, label in enumerate(_get(doc, "carrier", path, list)):
        try:
            carrier.append(parse_point(ring, label))
        except ValueError as err:
            raise SchemaError(str(err), f"{path}.carrier[{i}]") from None
    basis = []
    for i, v in enumerate(_get(doc, "basis", path, list)):
        if not isinstance(v, list) or len(v) != len(carrier):
            raise SchemaError("basis vectors must match the carrier length", f"{path}.basis[{i}]")
        basis.append(tuple(_int(x, f"{path}.basis[{i}][{j}]") for j, x in enumerate(v)))
    outside = doc.get("outside", "zero")
    if outside not in ("zero", "free"):
        raise SchemaError("outside must be 'zero' or 'free'", f"{path}.outside")
    return SubgroupSpec(S, tuple(carrier), lattice_from_generators(len(carrier), basis), outside)


# ---------------------------------------------------------------------------
# certificates


def certificate_to_doc(cert: Certificate) -> dict:
    R = cert.ring
    atoms = []
    for a in cert.atoms:
        d = {"kind": a.kind, "shift": a.shift}
        if a.kind == "moore":
            d["p"] = R.dump(a.p)
        atoms.append(d)
    steps = [{"id": s.id, "cone": {"src": s.src, "dst": s.dst, "components": _components_to_doc(s.components)}}
             for s in cert.steps]
    return {"ring": ring_to_doc(R), "atoms": atoms, "steps": steps, "final": cert.final,
            "claimed": profile_to_doc(R, cert.claimed)}


def certificate_from_doc(doc, path="$") -> Certificate:
    R = ring_from_doc(_get(doc, "ring", path), f"{path}.ring")
    atoms = []
    for i, a in enumerate(_get(doc, "atoms", path, list)):
        p = f"{path}.atoms[{i}]"
        kind = _get(a, "kind", p, str)
        shift = _int(a.get("shift", 0), f"{p}.shift")
        if kind == "moore":
            atoms.append(Atom("moore", R.canonical(_elem(R, _get(a, "p", p), f"{p}.p"))[0], shift))
        elif kind == "unit":
            atoms.append(Atom("unit", None, shift))
        else:
            raise SchemaError(f"unknown atom kind {kind!r}", f"{p}.kind")
    steps = []
    for i, s in enumerate(_get(doc, "steps", path, list)):
        p = f"{path}.steps[{i}]"
        c = _get(s, "cone", p, dict)
        comps = {}
        for n, m in _degree_dict(c.get("components", {}), f"{p}.cone.components").items():
            if not isinstance(m, list) or not all(isinstance(r, list) for r in m):
                raise SchemaError("matrix must be an array of rows", f"{p}.cone.components.{n}")
            ncols = len(m[0]) if m else 0
            comps[n] = matrix_from_doc(R, m, (len(m), ncols), f"{p}.cone.components.{n}")
        steps.append(Step(_get(s, "id", p, str), _get(c, "src", f"{p}.cone", str),
                          _get(c, "dst", f"{p}.cone", str), comps))
    final = doc.get("final")
    if final is not None and not isinstance(final, str):
        raise SchemaError("final must be a reference or null", f"{path}.final")
    claimed = profile_from_doc(R, doc.get("claimed", {}), f"{path}.claimed")
    return Certificate(R, tuple(atoms), tuple(steps), final, claimed)


# ---------------------------------------------------------------------------
# p-group complexes


def fp_complex_to_doc(C: FpComplex) -> dict:
    return {"p": C.p,
            "groups": {str(n): list(g.exponents) for n, g in sorted(C.groups.items())},
            "diff": {str(n): [list(r) for r in h.matrix] for n, h in sorted(C.diffs.items())}}


def fp_complex_from_doc(doc, path="$") -> FpComplex:
    p = _int(_get(doc, "p", path), f"{path}.p")
    groups = {}
    for n, e in _degree_dict(_get(doc, "groups", path), f"{path}.groups").items():
        if not isinstance(e, list):
            raise SchemaError("exponents must be an array", f"{path}.groups.{n}")
        groups[n] = [_int(a, f"{path}.groups.{n}[{i}]") for i, a in enumerate(e)]
    diffs = {}
    for n, m in _degree_dict(doc.get("diff", {}), f"{path}.diff").items():
        if not isinstance(m, list) or not all(isinstance(r, list) for r in m):
            raise SchemaError("matrix must be an array of rows", f"{path}.diff.{n}")
        diffs[n] = [[_int(x, f"{path}.diff.{n}[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(m)]
    return make_complex(p, groups, diffs)

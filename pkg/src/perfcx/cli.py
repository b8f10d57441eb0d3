"""Command-line front end.

Every subcommand parses its documents, calls one library function and renders
the result.  Exit status: 0 on success, 2 on a domain error (including a
failed verification), 1 on malformed input or an unknown command.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ThreadPoolExecutor

from . import generation, invariants, ktheory, pgroups, sampling
from .complexes import (PerfectComplex, cone, crt_homology, homology, moore, shift,
                        split_product, tensor, unit_complex)
from .errors import (DomainError, NotHereditary, RingMismatch, UnknownCommand, UnsupportedRing,
                     UnsupportedSupport)
from .invariants import ThickSupport
from .matrix import Matrix, det
from .normal_forms import snf_full
from .rings import ZZ, GenericPoint, LocalQuotient, MaxPrime, Product, _PID
from .serialize import (SchemaError, certificate_from_doc, certificate_to_doc, dumps,
                        fp_complex_from_doc, matrix_from_doc, matrix_to_doc, object_from_doc,
                        profile_to_doc, ring_from_doc, ring_from_text, ring_to_doc,
                        subgroup_from_doc, support_from_doc)


class InputError(Exception):
    """Malformed command line or input document (exit status 1)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


# ---------------------------------------------------------------------------
# input helpers


def _load_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as err:
        raise InputError(f"{path}: {err.strerror}") from None
    except json.JSONDecodeError as err:
        raise InputError(f"{path}: invalid JSON ({err.msg} at line {err.lineno})") from None


def _ring_arg(text):
    if text is None:
        return None
    if text in ("Z",) or text.startswith(("Fpx:", "Z/")):
        return ring_from_text(text)
    return ring_from_doc(_load_json(text))


def _object(path, ring):
    doc = _load_json(path)
    X = object_from_doc(doc, ring if not (isinstance(doc, dict) and "ring" in doc) else None)
    if ring is not None:
        got = X.ring if isinstance(X, PerfectComplex) else None
        if got is not None and got != ring:
            raise RingMismatch(f"{path} lives over {got!r}, --ring says {ring!r}")
    return X


def _ring_of(X):
    return X.ring if isinstance(X, PerfectComplex) else (X[0].ring if X else None)


def parse_atom(text: str, ring) -> PerfectComplex:
    """``moore:<p>[@k]`` or ``unit[@k]``."""
    body, _, k = text.partition("@")
    try:
        k = int(k) if k else 0
    except ValueError:
        raise InputError(f"bad shift in generator {text!r}") from None
    if body == "unit":
        return unit_complex(ring, k)
    if body.startswith("moore:"):
        try:
            p = ring.parse(body[6:])
        except (ValueError, TypeError):
            raise InputError(f"bad Moore parameter in {text!r}") from None
        return shift(moore(ring, p), k)
    raise InputError(f"unknown generator syntax {text!r}")


def _generators(args, ring):
    gens = [parse_atom(g, ring) for g in args.gen or []]
    gens += [_object(f, ring) for f in args.gen_file or []]
    return gens


# ---------------------------------------------------------------------------
# commands


def cmd_homology(args):
    X = _object(args.file, _ring_arg(args.ring))
    if isinstance(X, PerfectComplex) and not isinstance(X.ring, Product):
        return profile_to_doc(X.ring, homology(X))
    parts = split_product(X) if isinstance(X, PerfectComplex) else X
    return {"components": [profile_to_doc(P.ring, homology(P)) for P in parts]}


def cmd_invariants(args):
    return invariants.report(_object(args.file, _ring_arg(args.ring)))


def _support(args, ring):
    if args.support is None:
        raise InputError("--support is required")
    return support_from_doc(ring, args.support)


def cmd_k0(args):
    ring = _ring_arg(args.ring)
    X = _object(args.file, ring) if args.file else None
    if ring is None:
        if X is None:
            raise InputError("--ring or --file is required")
        ring = _ring_of(X)
    S = _support(args, ring)
    pres = ktheory.k0_group(ring, S)
    doc = {"rank": pres.rank, "basis": list(pres.basis)}
    if X is not None:
        cls = invariants.k0_class(X, S)
        doc["class"] = [cls[pt] for pt in pres.keys]
    return doc


def cmd_member(args):
    ring = _ring_arg(args.ring)
    X = _object(args.file, ring)
    ring = ring or _ring_of(X)
    H = subgroup_from_doc(ring, _load_json(args.subgroup))
    S = _support(args, ring) if args.support else H.support
    return {"member": ktheory.is_member(X, S, H)}


def _row_label(ring, pt):
    if isinstance(pt, GenericPoint):
        return "chi"
    if isinstance(pt, MaxPrime):
        return f"lambda_{pt.label(ring)}"
    return f"Lambda_{pt.label()}"


def cmd_cangen(args):
    ring = _ring_arg(args.ring)
    Y = _object(args.target, ring)
    ring = ring or _ring_of(Y)
    gens = _generators(args, ring)
    dec = ktheory.can_generate(gens, Y)
    return {"verdict": "yes" if dec.verdict else "no",
            "support_ok": dec.support_ok, "lattice_ok": dec.lattice_ok,
            "rows": [{"point": _row_label(ring, r.point), "required": str(r.required),
                      "candidate": str(r.candidate), "divides": r.divides} for r in dec.rows]}


def cmd_plan(args):
    ring = _ring_arg(args.ring)
    Y = _object(args.target, ring)
    if not isinstance(Y, PerfectComplex):
        raise NotHereditary("certificates are only planned over a PID")
    ring = ring or Y.ring
    if args.gen or args.gen_file:
        cert = generation.plan_from(_generators(args, ring), Y, args.strategy)
    else:
        cert = generation.plan(ring, _support(args, ring), Y, args.strategy)
    return certificate_to_doc(cert)


def _verify_doc(doc):
    try:
        cert = certificate_from_doc(doc)
        rep = generation.verify(cert)
    except DomainError as err:
        return {"ok": False, "failing_step": err.location, "error": err.name, "reason": str(err)}
    out = {"ok": rep.ok, "failing_step": rep.failing_step}
    if not rep.ok:
        out["error"] = "VerificationFailed"
        out["reason"] = rep.reason
    return out


def cmd_verify(args):
    if args.batch:
        docs = _load_json(args.batch)
        if not isinstance(docs, list):
            raise InputError("--batch expects a JSON array of certificates")
        with ThreadPoolExecutor() as pool:
            reports = list(pool.map(_verify_doc, docs))
        return {"reports": reports}, 0 if all(r["ok"] for r in reports) else 2
    rep = _verify_doc(_load_json(args.file or "-"))
    return rep, 0 if rep["ok"] else 2


def cmd_classify(args):
    ring = _ring_arg(args.ring) or ZZ
    if args.multiple is not None:
        if not isinstance(ring, _PID):
            raise UnsupportedRing("--multiple describes m Z inside K0 of a PID")
        H = ktheory.SubgroupSpec.multiples(int(args.multiple))
    elif args.subgroup:
        H = subgroup_from_doc(ring, _load_json(args.subgroup))
    else:
        raise InputError("--subgroup or --multiple is required")
    S = _support(args, ring) if args.support else H.support
    if S != H.support:
        raise UnsupportedSupport("subgroup is declared over a different support")
    f = ktheory.classify_subgroup(ring, S, H)
    return {"ideal": f.ideal, "prime": f.prime, "maximal": f.maximal, "submodule": f.submodule}


def cmd_snf(args):
    doc = _load_json(args.file)
    ring = _ring_arg(args.ring)
    if isinstance(doc, dict):
        if "ring" in doc:
            ring = ring_from_doc(doc["ring"], "$.ring")
        doc = doc.get("matrix")
    ring = ring or ZZ
    if not isinstance(doc, list) or not all(isinstance(r, list) for r in doc):
        raise SchemaError("expected a matrix (array of rows)", "$.matrix")
    ncols = len(doc[0]) if doc else 0
    M = matrix_from_doc(ring, doc, (len(doc), ncols), "$.matrix")
    s = snf_full(M, track_inverses=False)
    return {"ring": ring_to_doc(ring), "U": matrix_to_doc(s.U), "D": matrix_to_doc(s.D),
            "V": matrix_to_doc(s.V), "diag": [ring.dump(x) for x in s.diag], "rank": s.rank}


def cmd_pgroup_check(args):
    C = fp_complex_from_doc(_load_json(args.file))
    chk = pgroups.lemma_parallel_check(C)
    H = pgroups.fp_homology(C)
    return {"lhs": chk.lhs, "rhs": chk.rhs, "equal": chk.equal,
            "homology": {str(n): list(g.exponents) for n, g in H.items() if g.ngens}}


# -- selftest ----------------------------------------------------------------


def _suite_snf(rng, n):
    for _ in range(n):
        m, k = rng.randint(1, 5), rng.randint(1, 5)
        M = Matrix.from_rows(ZZ, [[rng.randint(-30, 30) for _ in range(k)] for _ in range(m)], k)
        s = snf_full(M, track_inverses=False)
        d = s.diag
        if s.U @ M @ s.V != s.D or abs(det(s.U)) != 1 or abs(det(s.V)) != 1:
            return False
        if any(d[i + 1] % d[i] for i in range(s.rank - 1)):
            return False
    return True


def _suite_euler(rng, n):
    S = ThickSupport.primes([2, 3])
    for _ in range(n):
        X, Y = sampling.random_torsion_complex(rng), sampling.random_torsion_complex(rng)
        f = sampling.random_chain_map(rng, X, Y)
        a, b, c = (invariants.k0_class(Z, S) for Z in (X, Y, cone(f)))
        if any(c[pt] != b[pt] - a[pt] for pt in S.points):
            return False
    return True


def _suite_roundtrip(rng, n):
    for _ in range(n):
        X = sampling.random_complex(rng)
        if invariants.alternating_rank_sum(X) != invariants.chi_F(X):
            return False
    return True


def _suite_tensor(rng, n):
    for _ in range(n):
        X, Y = sampling.random_complex(rng, max_pieces=3), sampling.random_complex(rng, max_pieces=3)
        if invariants.chi_F(tensor(X, Y)) != invariants.chi_F(X) * invariants.chi_F(Y):
            return False
    return True


def _suite_lemma(rng, n):
    return all(pgroups.lemma_parallel_check(sampling.random_fp_complex(rng, rng.choice([2, 3]))).equal
               for _ in range(n))


def _suite_plan(rng, n):
    S = ThickSupport.primes([2, 3, 5])
    for _ in range(n):
        Y = sampling.random_torsion_complex(rng, (2, 3, 5))
        if not generation.verify(generation.plan(ZZ, S, Y)).ok:
            return False
    return True


def _suite_artin(rng, n):
    R = Product((LocalQuotient(ZZ, 2, 2), LocalQuotient(ZZ, 3, 2)))
    for _ in range(n):
        X = sampling.random_product_complex(rng, R)
        if [homology(P) for P in split_product(X)] != crt_homology(X):
            return False
    return True


SUITES = (("snf", _suite_snf), ("euler", _suite_euler), ("roundtrip", _suite_roundtrip),
          ("tensor", _suite_tensor), ("lemma", _suite_lemma), ("plan", _suite_plan),
          ("artin", _suite_artin))


def cmd_selftest(args):
    cases = args.cases

    def run(i_suite):
        i, (name, fn) = i_suite
        rng = random.Random(f"{args.seed}:{name}")
        return name, fn(rng, cases)

    with ThreadPoolExecutor() as pool:
        results = list(pool.map(run, enumerate(SUITES)))
    doc = {"seed": args.seed, "cases": cases, "suites": {name: ok for name, ok in results}}
    return doc, 0 if all(ok for _, ok in results) else 2


COMMANDS = {
    "homology": cmd_homology, "invariants": cmd_invariants, "k0": cmd_k0, "member": cmd_member,
    "cangen": cmd_cangen, "plan": cmd_plan, "verify": cmd_verify, "classify": cmd_classify,
    "snf": cmd_snf, "pgroup-check": cmd_pgroup_check, "selftest": cmd_selftest,
}


# ---------------------------------------------------------------------------
# parsing and rendering


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="perfcx", description="Perfect complexes, K0 classes and cofiber-generation certificates.")
    common = _Parser(add_help=False)
    common.add_argument("--ring", help="Z, Fpx:p, Z/n or a ring document file")
    common.add_argument("--support", help="Full or a comma-separated list of primes / components")
    common.add_argument("--out", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    add("homology", "homology profile of a complex").add_argument("--file", required=True)
    add("invariants", "support, chi and lambda / Lambda").add_argument("--file", required=True)
    add("k0", "K0 presentation of T_S, optionally with the class of --file").add_argument("--file")
    s = add("member", "is X in T(S, H)?")
    s.add_argument("--file", required=True)
    s.add_argument("--subgroup", required=True)
    for name in ("cangen", "plan"):
        s = add(name, "decide cofiber generation" if name == "cangen" else "emit a generation certificate")
        s.add_argument("--gen", action="append", help="moore:<p>[@k] or unit[@k]; repeatable")
        s.add_argument("--gen-file", action="append", help="generator complex document; repeatable")
        s.add_argument("--target", required=True)
        if name == "plan":
            s.add_argument("--strategy", choices=tuple(generation.STRATEGIES), default="formality")
    s = add("verify", "replay a certificate (stdin by default)")
    s.add_argument("--file")
    s.add_argument("--batch", help="JSON array of certificates, verified concurrently")
    s = add("classify", "ideal / prime / maximal flags of a subgroup")
    s.add_argument("--subgroup")
    s.add_argument("--multiple", help="shorthand for m Z in K0 of a PID")
    add("snf", "Smith normal form of a matrix").add_argument("--file", required=True)
    add("pgroup-check", "alternating log_p sums of a p-group complex").add_argument("--file", required=True)
    s = add("selftest", "seeded property suites")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--cases", type=int, default=10)
    return p


def _text(value, indent=0) -> list:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v and any(isinstance(x, (dict, list)) for x in
                                                         (v.values() if isinstance(v, dict) else v)):
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(value, list):
        for v in value:
            if isinstance(v, dict):
                lines.append(f"{pad}- " + ", ".join(f"{k}={_scalar(x)}" for k, x in v.items()))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(pad + _scalar(value))
    return lines


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "n/a"
    if isinstance(v, (dict, list)):
        return json.dumps(v, separators=(",", ":"))
    return str(v)


def render(command, doc, fmt) -> str:
    if fmt == "json":
        return dumps(doc)
    if command == "cangen":
        lines = [f"verdict: {doc['verdict']}"]
        lines += [f"{r['point']}: {r['required']} | {r['candidate']}{'' if r['divides'] else '  (fails)'}"
                  for r in doc["rows"]]
        if doc["support_ok"] and not doc["lattice_ok"]:
            lines.append("class not in the lattice spanned by the generators")
        if not doc["support_ok"]:
            lines.append("support not contained in the generators' support")
        return "\n".join(lines)
    if command == "pgroup-check":
        return f"lhs={doc['lhs']} rhs={doc['rhs']} equal={'yes' if doc['equal'] else 'no'}"
    if command == "selftest":
        lines = [f"{name}: {'pass' if ok else 'FAIL'}" for name, ok in doc["suites"].items()]
        return "\n".join(lines)
    return "\n".join(_text(doc))


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    fmt = _requested_format(argv)
    try:
        if argv and argv[0] in ("-h", "--help"):
            print(build_parser().format_help(), file=stdout)
            return 0
        if not argv or argv[0].startswith("-"):
            raise InputError("missing command")
        if argv[0] not in COMMANDS:
            raise UnknownCommand(f"unknown command {argv[0]!r}")
        args = build_parser().parse_args(argv)
        fmt = args.out
        result = COMMANDS[args.command](args)
        doc, code = result if isinstance(result, tuple) else (result, 0)
        print(render(args.command, doc, fmt), file=stdout)
        if code:
            print(f"error: {doc.get('error', 'VerificationFailed')}", file=stderr)
        return code
    except UnknownCommand as err:
        _report(stdout, stderr, fmt, err.name, str(err), None)
        return 1
    except DomainError as err:
        _report(stdout, stderr, fmt, err.name, str(err), err.location)
        return 2
    except (InputError, ValueError) as err:
        _report(stdout, stderr, fmt, "MalformedInput", str(err), getattr(err, "path", None))
        return 1


def _requested_format(argv) -> str:
    """--out value, read before parsing so argument errors are rendered in it too."""
    for i, a in enumerate(argv):
        if a == "--out=json" or (a == "--out" and argv[i + 1:i + 2] == ["json"]):
            return "json"
    return "text"


def _report(stdout, stderr, fmt, name, message, location):
    if fmt == "json":
        print(dumps({"error": name, "message": message, "location": location}), file=stdout)
    where = "" if location is None else f" (at {location})"
    print(f"error: {name}: {message}{where}", file=stderr)


def main():
    sys.exit(run())

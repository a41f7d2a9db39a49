"""Command-line front end.

Exit codes: 0 ok, 1 property fails, 2 invalid input, 3 budget or truncation.
Reports are JSON on stdout; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import corpus
from . import ordinal as od
from .cat import FinCat, Functor, Presheaf, enumerate_presheaves, fundamental_category, twisted_arrow
from .checkers import (
    Verdict,
    is_culf,
    is_culfy,
    is_decomposition,
    is_dk_equivalence,
    is_final_functor,
    is_left_fibration,
    is_relative_complete,
    is_rezk_complete,
    is_right_fibration,
    is_righteous,
    is_segal,
    rezk_square_holds,
)
from .elements import ElCat, lambda_map, nel, xi
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    InvalidCategory,
    InvalidMap,
    InvalidSSet,
    NotDiscFib,
    NotRightFibration,
    OutOfTruncation,
    SdkitError,
)
from .factorization import (
    comprehensive_factorize_functor,
    culf_reflection,
    culf_roundtrip,
    rfib_from_presheaf,
    rfib_roundtrip,
    untwist,
)
from .sset import SMap, TruncSSet, sd, sd_of_map

KINDS = {"trunc_sset": TruncSSet, "smap": SMap, "fincat": FinCat, "functor": Functor, "presheaf": Presheaf}
_CORPUS_KIND = {"sset": "trunc_sset", "smap": "smap", "fincat": "fincat", "functor": "functor", "presheaf": "presheaf"}


class Failed(Exception):
    """A checked property does not hold."""


class BadInput(Exception):
    pass


# --- instances -------------------------------------------------------------------

def load(ref: str, dim: int | None = None):
    """``(kind, object)`` for a ``corpus:`` URI or a JSON instance file."""
    if ref.startswith("corpus:"):
        try:
            it = corpus.item(ref)
        except KeyError as e:
            raise BadInput(str(e)) from None
        obj = it.build(corpus.DEFAULT_DIM if dim is None else dim)
        kind = _CORPUS_KIND[it.kind]
    else:
        try:
            data = json.loads(Path(ref).read_text())
        except (OSError, ValueError) as e:
            raise BadInput(f"cannot read {ref}: {e}") from None
        kind = data.get("kind")
        if kind not in KINDS:
            raise BadInput(f"{ref}: unknown instance kind {kind!r}")
        try:
            obj = KINDS[kind].from_json(data)
        except (KeyError, TypeError, ValueError, IndexError) as e:
            raise BadInput(f"{ref}: malformed {kind}: {e}") from None
        if dim is not None and kind in ("trunc_sset", "smap") and dim < obj.dim:
            obj = obj.truncate(dim)
    obj.validate()
    return kind, obj


def dump(obj, name: str = "", provenance: str = "") -> dict:
    data = obj.to_json()
    if name:
        data["name"] = name
    if provenance:
        data["provenance"] = provenance
    return data


def emit(data, out: str | None) -> None:
    text = json.dumps(data, sort_keys=True, indent=1)
    if out:
        Path(out).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _need(kind: str, want: tuple[str, ...], what: str) -> None:
    if kind not in want:
        raise BadInput(f"{what} needs a {' or '.join(want)} instance, got {kind}")


# --- check ---------------------------------------------------------------------

def _check_sset(prop: str, X: TruncSSet, args) -> Verdict:
    if prop == "valid":
        return Verdict(True, X.dim, "validate")
    if prop == "segal":
        return is_segal(X)
    if prop == "decomposition":
        return is_decomposition(X, args.squares)
    if prop == "rezk":
        return is_rezk_complete(X)
    if prop == "rezk-square":
        return rezk_square_holds(X)
    raise BadInput(f"property {prop!r} does not apply to simplicial sets")


def _check_smap(prop: str, p: SMap, args) -> Verdict:
    if prop == "valid":
        return Verdict(True, p.dim, "validate")
    if prop == "culf":
        return is_culf(p)
    if prop in ("rfib", "right-fibration"):
        return is_right_fibration(p)
    if prop in ("lfib", "left-fibration"):
        return is_left_fibration(p)
    if prop == "sd-rfib":
        return is_right_fibration(sd_of_map(p, convention=args.convention))
    if prop == "culfy":
        return is_culfy(p, args.el_dim)
    if prop == "righteous":
        return is_righteous(p, args.el_dim)
    raise BadInput(f"property {prop!r} does not apply to simplicial maps")


def _check_functor(prop: str, F: Functor, args) -> Verdict:
    if prop == "valid":
        return Verdict(True, 0, "validate")
    if prop == "final":
        return is_final_functor(F)
    if prop == "dk":
        return is_dk_equivalence(F)
    if prop == "relative-complete":
        return is_relative_complete(F)
    raise BadInput(f"property {prop!r} does not apply to functors")


def cmd_check(args) -> dict:
    kind, obj = load(args.file, args.dim)
    if kind == "trunc_sset":
        v = _check_sset(args.property, obj, args)
    elif kind == "smap":
        v = _check_smap(args.property, obj, args)
    elif kind == "functor":
        v = _check_functor(args.property, obj, args)
    elif args.property == "valid":
        v = Verdict(True, 0, "validate")
    else:
        raise BadInput(f"property {args.property!r} does not apply to {kind}")
    report = {"property": args.property, "input": args.file, **v.to_json()}
    if not v.holds:
        raise Failed(report)
    return report


# --- constructions ------------------------------------------------------------------

def materialize_el(X: TruncSSet, el_dim: int) -> FinCat:
    E = ElCat(X, el_dim)
    mors, comp = [], {}
    for b in E.objects:
        for f in E.morphisms_into(b):
            mors.append((f, E.src(f), b))
    for g, a, _ in mors:
        for f in E.morphisms_into(a):
            comp[(g, f)] = E.compose(g, f)
    return FinCat(E.objects, mors, {x: E.identity(x) for x in E.objects}, comp, name=E.name)


def cmd_construct(args) -> dict:
    kind, obj = load(args.file, args.dim)
    c = args.command
    if c == "sd":
        _need(kind, ("trunc_sset", "smap"), "sd")
        out = sd(obj, args.convention) if kind == "trunc_sset" else sd_of_map(obj, convention=args.convention)
    elif c == "tw":
        _need(kind, ("fincat",), "tw")
        out = twisted_arrow(obj)
    elif c == "el":
        _need(kind, ("trunc_sset",), "el")
        out = materialize_el(obj, _el_dim(args, obj))
    elif c == "nel":
        _need(kind, ("trunc_sset",), "nel")
        out = nel(obj, args.level, _el_dim(args, obj))
    elif c == "xi":
        _need(kind, ("trunc_sset",), "xi")
        out = xi(obj, args.level, el_dim=_el_dim(args, obj))
    else:
        _need(kind, ("trunc_sset",), "lambda")
        out = lambda_map(obj, args.level, el_dim=_el_dim(args, obj))
    data = dump(out, f"{c}({args.file})", f"sdkit {c}")
    emit(data, args.output)
    return {"command": c, "input": args.file, "written": args.output or "stdout"}


def _el_dim(args, X: TruncSSet) -> int:
    return min(X.dim, 2) if args.el_dim is None else args.el_dim


def cmd_factor(args) -> dict:
    kind, obj = load(args.file, args.dim)
    if args.system == "comprehensive":
        _need(kind, ("functor",), "factor comprehensive")
        fac = comprehensive_factorize_functor(obj)
        middle = fac.middle.total
        verdicts = {
            "composite": fac.composite_matches(obj),
            "left_final": is_final_functor(fac.left).to_json(),
            "right_discrete_fibration": fac.middle.is_valid(),
        }
    else:
        _need(kind, ("smap",), "factor culf")
        fac = culf_reflection(obj)
        middle = fac.middle
        verdicts = {"composite": fac.composite_matches(obj), "right_culf": is_culf(fac.right).to_json()}
    parts = {"left": dump(fac.left), "right": dump(fac.right), "middle": dump(middle)}
    report = {"system": args.system, "input": args.file, "verdicts": verdicts}
    if args.output:
        d = Path(args.output)
        d.mkdir(parents=True, exist_ok=True)
        for k, v in parts.items():
            emit(v, str(d / f"{k}.json"))
        report["files"] = {k: str(d / f"{k}.json") for k in parts}
    else:
        report["parts"] = parts
    return report


def cmd_untwist(args) -> dict:
    kp, p = load(args.rfib, args.dim)
    kx, X = load(args.base, args.dim)
    _need(kp, ("smap",), "untwist")
    _need(kx, ("trunc_sset",), "untwist base")
    q = untwist(p, X)
    emit(dump(q, "untwist", f"untwist of {args.rfib} over {args.base}"), args.output)
    return {"command": "untwist", "culf": is_culf(q).to_json(), "sizes": q.source.sizes()}


def cmd_roundtrip(args) -> dict:
    kind, obj = load(args.file, args.dim)
    if kind == "smap":
        if not is_culf(obj).holds:
            raise BadInput("roundtrip of a map needs a culf map")
        ok = culf_roundtrip(obj) is not None
        report = {"input": args.file, "culf_roundtrip": ok}
        if not ok:
            raise Failed(report)
        return report
    _need(kind, ("trunc_sset",), "roundtrip")
    X = obj
    S = sd(X)
    T = fundamental_category(S)
    total = rfib_ok = culf_ok = 0
    for P in enumerate_presheaves(T, args.max_fiber):
        p = rfib_from_presheaf(P, S, T)
        q = untwist(p, X)
        total += 1
        rfib_ok += rfib_roundtrip(p, X, q) is not None
        culf_ok += culf_roundtrip(q, S) is not None
    report = {
        "input": args.file,
        "dim": X.dim,
        "max_fiber": args.max_fiber,
        "right_fibrations": total,
        "sd_untwist_iso": rfib_ok,
        "untwist_sd_iso": culf_ok,
    }
    if rfib_ok != total or culf_ok != total:
        raise Failed(report)
    return report


def cmd_corpus(args) -> dict:
    if args.action == "list":
        return {"items": [{"name": n, "kind": corpus.item(n).kind, "tags": sorted(corpus.item(n).tags), "note": corpus.item(n).note} for n in corpus.names()]}
    if not args.name:
        raise BadInput("corpus emit needs a name")
    try:
        it = corpus.item(args.name)
    except KeyError as e:
        raise BadInput(str(e)) from None
    obj = it.build(corpus.DEFAULT_DIM if args.dim is None else args.dim)
    obj.validate()
    emit(dump(obj, it.name, f"corpus ({it.note})" if it.note else "corpus"), args.output)
    return {"emitted": it.name, "written": args.output or "stdout"}


# --- verify-all ---------------------------------------------------------------------

def tag_verdicts(name: str, dim: int = corpus.DEFAULT_DIM) -> dict[str, tuple[bool, bool]]:
    """``{tag: (claimed, derived)}`` for the property tags of a corpus item."""
    it = corpus.item(name)
    obj = it.build(dim)
    out = {}
    checks = {}
    if it.kind == "sset":
        checks = {"segal": lambda: is_segal(obj).holds, "decomposition": lambda: is_decomposition(obj, "generating").holds, "rezk": lambda: is_rezk_complete(obj).holds}
    elif it.kind in ("smap", "functor"):
        p = obj if it.kind == "smap" else corpus.get(name[len("functor-"):], dim)
        checks = {"culf": lambda: is_culf(p).holds, "rfib": lambda: is_right_fibration(p).holds}
    for t in it.tags:
        base = t[4:] if t.startswith("not-") else t
        if base in checks:
            out[t] = (not t.startswith("not-"), checks[base]())
    return out


def cmd_verify_all(args) -> dict:
    rng = random.Random(args.seed)
    results = {}
    failures = []

    def record(key, ok):
        results[key] = ok
        if not ok:
            failures.append(key)
        print(f"{'ok  ' if ok else 'FAIL'} {key}", file=sys.stderr)

    for n in corpus.names():
        obj = corpus.get(n)
        obj.validate()
        for t, (claim, got) in tag_verdicts(n).items():
            record(f"tag {n} {t}", claim == got)
    for n in corpus.names("smap"):
        p = corpus.get(n)
        record(f"culf-vs-sd-rfib {n}", is_culf(p).holds == is_right_fibration(sd_of_map(p)).holds)
    for n in corpus.names("sset"):
        X = corpus.get(n)
        try:
            is_decomposition(X, "all")
            record(f"routes-agree {n}", True)
        except SdkitError:
            record(f"routes-agree {n}", False)
    X = corpus.get("nerve-poset-1")
    S = sd(X)
    T = fundamental_category(S)
    ok = True
    for P in enumerate_presheaves(T, 2):
        p = rfib_from_presheaf(P, S, T)
        q = untwist(p, X)
        ok &= rfib_roundtrip(p, X, q) is not None and culf_roundtrip(q, S) is not None
    record("roundtrips nerve-poset-1", ok)
    ok = True
    for _ in range(200):
        m, n = rng.randint(0, 5), rng.randint(0, 5)
        f = rng.choice(od.all_maps(m, n))
        e, mono = od.epi_mono_factorize(f)
        a, i = od.active_inert_factorize(f)
        ok &= od.compose(mono, e) == f and od.compose(i, a) == f
    record(f"ordinal factorizations (seed {args.seed})", ok)
    report = {"checks": len(results), "failures": failures, "seed": args.seed}
    if failures:
        raise Failed(report)
    return report


# --- entry point -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sdkit", description="edgewise subdivision, culf maps and decomposition sets")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dim", type=int, default=None, help="dimension bound (corpus default 7)")
    common.add_argument("--convention", choices=("q", "qprime"), default="q")
    common.add_argument("--seed", type=int, default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common])
    p.add_argument("property")
    p.add_argument("file")
    p.add_argument("--el-dim", type=int, default=None)
    p.add_argument("--squares", choices=("all", "generating"), default="all")
    p.set_defaults(func=cmd_check)

    for c in ("sd", "tw", "el", "nel", "xi", "lambda"):
        p = sub.add_parser(c, parents=[common])
        p.add_argument("file")
        p.add_argument("-o", "--output")
        p.add_argument("--el-dim", type=int, default=None)
        p.add_argument("--level", type=int, default=2, help="nerve level bound for nel/xi/lambda")
        p.set_defaults(func=cmd_construct)

    p = sub.add_parser("factor", parents=[common])
    p.add_argument("system", choices=("comprehensive", "culf"))
    p.add_argument("file")
    p.add_argument("-o", "--output", help="directory for the factorization bundle")
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("untwist", parents=[common])
    p.add_argument("rfib")
    p.add_argument("base")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_untwist)

    p = sub.add_parser("roundtrip", parents=[common])
    p.add_argument("file")
    p.add_argument("--max-fiber", type=int, default=2)
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("corpus", parents=[common])
    p.add_argument("action", choices=("list", "emit"))
    p.add_argument("name", nargs="?")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("verify-all", parents=[common])
    p.set_defaults(func=cmd_verify_all)
    return ap


INPUT_ERRORS = (BadInput, InvalidSSet, InvalidCategory, InvalidMap, DimensionMismatch, NotDiscFib, NotRightFibration)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = args.func(args)
    except Failed as e:
        sys.stdout.write(json.dumps(e.args[0], sort_keys=True, indent=1, default=str) + "\n")
        print("property fails", file=sys.stderr)
        return 1
    except INPUT_ERRORS as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return 2
    except (BudgetExceeded, OutOfTruncation) as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 3
    except SdkitError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 1
    if report is not None and not (args.command in ("sd", "tw", "el", "nel", "xi", "lambda", "corpus") and report.get("written") == "stdout"):
        sys.stdout.write(json.dumps(report, sort_keys=True, indent=1, default=str) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())

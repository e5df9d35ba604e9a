"""Command-line interface: build tables, run verifiers, classify and compare modules.

JSON goes to stdout, diagnostics to stderr.  Exit codes: 0 pass, 1
verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .analysis import check_irreducible, check_isomorphic, classify, special_elements
from .bimodule import BimoduleAction, build_V_alpha, check_jordan_bimodule, regular_bimodule
from .config import CheckConfig
from .kantor import DotBracketAlgebra, build_kan, check_kantor_conditions, grassmann_poisson
from .lemmas import check_lemmas
from .report import CheckReport, Violation
from .scalars import FieldContext
from .superalg import StructureTable, check_jordan_superidentity, check_operator_relations, check_supercommutative
from .tensor import build_J_GnT_alpha, grassmann_tensor

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")


def _note(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


def parse_field(name: str) -> FieldContext:
    low = name.strip().lower()
    try:
        if low in ("symbolic", "sym", "q[al]"):
            return FieldContext(0, True)
        return FieldContext.from_name(name)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def parse_params(text: str, default_key: str = "n") -> dict[str, str]:
    """``n=3,alpha=1/2,parity=0`` -> dict; a bare value is taken as ``n``."""
    out: dict[str, str] = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        if "=" in part:
            k, v = part.split("=", 1)
            out[k.strip()] = v.strip()
        else:
            out[default_key] = part
    return out


def _int(params: dict, key: str, default=None) -> int:
    if key not in params:
        if default is None:
            raise UsageError(f"missing parameter {key!r}")
        return default
    try:
        return int(params[key])
    except ValueError:
        raise UsageError(f"parameter {key!r} must be an integer, got {params[key]!r}") from None


def _scalar(ctx: FieldContext, text: str):
    try:
        return ctx.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot read {text!r} as a scalar of {ctx.name}: {exc}") from None


# -- targets ------------------------------------------------------------------------

@dataclass
class Target:
    """What a subcommand operates on: a table, a bimodule, and possibly a dot-bracket algebra."""

    kind: str
    table: StructureTable | None = None
    module: BimoduleAction | None = None
    dot_bracket: DotBracketAlgebra | None = None
    invalid: str = ""            # validation error of a table or module read from a file

    @property
    def name(self) -> str:
        if self.module is not None:
            return self.module.name
        return self.table.name if self.table is not None else self.kind


class TargetAction(argparse.Action):
    """All target flags append ``(kind, value)`` to one list, preserving order."""

    def __call__(self, parser, namespace, values, option_string=None):
        items = list(getattr(namespace, self.dest, None) or [])
        items.append((option_string.lstrip("-"), values))
        setattr(namespace, self.dest, items)


def _add_targets(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("targets")
    g.add_argument("--kan", action=TargetAction, dest="targets", metavar="N", help="Kan(N)")
    g.add_argument("--valpha", action=TargetAction, dest="targets", metavar="n=..,alpha=..,parity=..",
                   help="the module V(alpha) over Kan(n)")
    g.add_argument("--regular", action=TargetAction, dest="targets", metavar="n=..",
                   help="Kan(n) as a module over itself")
    g.add_argument("--tensor", action=TargetAction, dest="targets", metavar="n=..,alpha=..,N=..",
                   help="Kantor double of G_n (x) F[t]/(t^N) with the tensor bracket")
    g.add_argument("--file", action=TargetAction, dest="targets", metavar="PATH",
                   help="JSON table or bimodule written by 'build'")


def _check_n(n: int) -> int:
    if n < 2:
        raise UsageError(f"n must be at least 2, got {n}")
    return n


def load_target(kind: str, value: str, ctx: FieldContext) -> Target:
    if kind == "file":
        return _load_file(value)
    params = parse_params(value)
    n = _check_n(_int(params, "n"))
    if kind == "kan":
        return Target(kind, build_kan(n, ctx), dot_bracket=grassmann_poisson(n, ctx))
    if kind == "regular":
        K = build_kan(n, ctx)
        return Target(kind, K, regular_bimodule(K))
    if kind == "valpha":
        alpha = _scalar(ctx, params.get("alpha", "0"))
        parity = _int(params, "parity", 0)
        if parity not in (0, 1):
            raise UsageError("parity must be 0 or 1")
        V = build_V_alpha(n, alpha, parity, ctx)
        return Target(kind, V.algebra, V)
    if kind == "tensor":
        alpha = _scalar(ctx, params.get("alpha", "0"))
        N = _int(params, "N", 4)
        if N < 2:
            raise UsageError("N must be at least 2")
        return Target(kind, build_J_GnT_alpha(n, alpha, N, ctx), dot_bracket=grassmann_tensor(n, alpha, N, ctx))
    raise UsageError(f"unknown target kind {kind!r}")


def _load_file(path: str) -> Target:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    try:
        if "R" in data:
            V = BimoduleAction.from_dict(data, validate=False)
            invalid = _validation_error(V)
            return Target("file", V.algebra, V, invalid=invalid)
        if "products" in data:
            T = StructureTable.from_dict(data, validate=False)
            return Target("file", T, invalid=_validation_error(T))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}") from None
    raise UsageError(f"{path} is neither a structure table nor a bimodule")


def _validation_error(obj) -> str:
    try:
        obj.validate()
    except ValueError as exc:
        return str(exc)
    return ""


def _targets(args, count: int) -> list[Target]:
    items = args.targets or []
    if len(items) != count:
        raise UsageError(f"expected {count} target(s), got {len(items)}")
    ctx = parse_field(args.field)
    return [load_target(k, v, ctx) for k, v in items]


def _config(args) -> CheckConfig:
    try:
        return CheckConfig(limit=args.limit, threads=args.threads, progress=args.progress)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _progress(cfg: CheckConfig, label: str):
    if not cfg.progress:
        return None

    def cb(done: int, total: int, failures: int) -> None:
        _note(f"{label}: chunk {done}/{total}, {failures} failing tuples so far")
    return cb


# -- build ----------------------------------------------------------------------------

def cmd_build(args) -> int:
    ctx = parse_field(args.field)
    n = _check_n(args.n)
    if args.kind == "kan":
        obj = build_kan(n, ctx).to_dict()
    elif args.kind == "valpha":
        if args.parity not in (0, 1):
            raise UsageError("parity must be 0 or 1")
        obj = build_V_alpha(n, _scalar(ctx, args.alpha), args.parity, ctx).to_dict()
    elif args.kind == "regular":
        obj = regular_bimodule(build_kan(n, ctx)).to_dict()
    else:
        if args.N < 2:
            raise UsageError("N must be at least 2")
        obj = build_J_GnT_alpha(n, _scalar(ctx, args.alpha), args.N, ctx).to_dict()
    _emit(obj)
    return EXIT_PASS


# -- check ----------------------------------------------------------------------------

SUITES = ("jordan", "kantor", "bimodule", "lemmas", "all")


def _invalid_report(t: Target) -> CheckReport:
    rep = CheckReport(f"validation of {t.name}", checked=1)
    rep.add(Violation(("structure",), {}, t.invalid), None)
    return rep


def run_suite(suite: str, t: Target, cfg: CheckConfig) -> list[CheckReport]:
    """The reports a suite produces on a target; raises UsageError when it does not apply."""
    if t.invalid:
        return [_invalid_report(t)]
    kw = dict(method=cfg.method, threads=cfg.threads)
    reports: list[CheckReport] = []
    wants = SUITES[:-1] if suite == "all" else (suite,)
    applied = False
    for s in wants:
        if s == "jordan":
            applied = True
            if t.module is not None:
                reports.append(check_jordan_bimodule(t.table, t.module, cfg.limit,
                                                     progress=_progress(cfg, "bimodule"), **kw))
            else:
                reports.append(check_supercommutative(t.table, cfg.limit))
                reports.append(check_jordan_superidentity(t.table, cfg.limit,
                                                          progress=_progress(cfg, "jordan"), **kw))
        elif s == "kantor" and t.dot_bracket is not None:
            applied = True
            reports.append(check_kantor_conditions(t.dot_bracket, cfg.limit))
        elif s == "bimodule" and t.module is not None:
            applied = True
            if suite != "all":
                reports.append(check_jordan_bimodule(t.table, t.module, cfg.limit,
                                                     progress=_progress(cfg, "bimodule"), **kw))
            reports.append(check_operator_relations(t.table, t.module, cfg.limit, **kw))
        elif s == "lemmas" and t.module is not None:
            applied = True
            try:
                reports.append(check_lemmas(t.module, cfg.limit))
            except ValueError as exc:
                rep = CheckReport(f"operator lemmas on {t.name}", checked=1)
                rep.add(Violation(("module",), {}, str(exc)), None)
                reports.append(rep)
    if not applied:
        raise UsageError(f"suite {suite!r} does not apply to target {t.name}")
    return reports


def cmd_check(args) -> int:
    cfg = _config(args)
    (t,) = _targets(args, 1)
    reports = run_suite(args.suite, t, cfg)
    for r in reports:
        _note(r.summary())
    ok = all(r.ok for r in reports)
    _emit({"target": t.name, "suite": args.suite, "status": "pass" if ok else "fail",
           "reports": [r.to_dict() for r in reports]})
    return EXIT_PASS if ok else EXIT_FAIL


# -- classify / iso / special ---------------------------------------------------------

def _module(t: Target) -> BimoduleAction:
    if t.module is None:
        raise UsageError(f"target {t.name} is not a bimodule")
    if t.invalid:
        raise UsageError(f"bimodule {t.name} is invalid: {t.invalid}")
    return t.module


def cmd_classify(args) -> int:
    (t,) = _targets(args, 1)
    V = _module(t)
    try:
        c = classify(V)
    except ValueError as exc:
        _note(f"not classifiable: {exc}")
        try:
            res = check_irreducible(V)
        except ValueError as exc2:
            _emit({"irreducible": None, "error": str(exc2)})
            return EXIT_FAIL
        _emit({"irreducible": res.irreducible, "certificate": res.certificate})
        return EXIT_FAIL
    _emit(c.to_dict(V.ctx))
    return EXIT_PASS


def cmd_iso(args) -> int:
    a, b = _targets(args, 2)
    V, W = _module(a), _module(b)
    try:
        res = check_isomorphic(V, W)
    except ValueError as exc:
        _emit({"isomorphic": None, "error": str(exc)})
        return EXIT_FAIL
    out = {"isomorphic": res.isomorphic, "reason": res.reason}
    if res.phi is not None:
        out["phi"] = {V.vlabels[i]: W.format_vector(row) for i, row in sorted(res.phi.items())}
    _emit(out)
    return EXIT_PASS if res.isomorphic else EXIT_FAIL


def cmd_special(args) -> int:
    (t,) = _targets(args, 1)
    V = _module(t)
    try:
        K = special_elements(V)
    except ValueError as exc:
        _emit({"dimension": 0, "error": str(exc)})
        return EXIT_FAIL
    out = {"dimension": len(K), "special_vectors": [V.format_vector(v) for v in K]}
    if args.certificate:
        try:
            res = check_irreducible(V)
            out["irreducible"] = res.irreducible
            out["certificate"] = res.certificate
        except ValueError as exc:
            out["irreducible"] = None
            out["error"] = str(exc)
    _emit(out)
    return EXIT_PASS


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kanjordan", description="Exact computations with Kan(n) and its modules.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, targets=True):
        p.add_argument("--field", default="q", help="q, f3, f5, f7, ... or symbolic (default q)")
        if targets:
            _add_targets(p)

    b = sub.add_parser("build", help="write a structure table or bimodule as JSON")
    b.add_argument("kind", choices=("kan", "valpha", "tensor", "regular"))
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--alpha", default="0")
    b.add_argument("--parity", type=int, default=0)
    b.add_argument("--N", type=int, default=4, help="truncation order for 'tensor'")
    common(b, targets=False)
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("check", help="run a verification suite")
    c.add_argument("suite", choices=SUITES)
    c.add_argument("--limit", type=int, default=10, help="cap on reported violations (default 10)")
    c.add_argument("--threads", type=int, default=1)
    c.add_argument("--progress", action="store_true", help="chunk progress on stderr")
    common(c)
    c.set_defaults(func=cmd_check)

    k = sub.add_parser("classify", help="parity and alpha of an irreducible module")
    common(k)
    k.set_defaults(func=cmd_classify)

    i = sub.add_parser("iso", help="decide whether two modules are isomorphic")
    common(i)
    i.set_defaults(func=cmd_iso)

    s = sub.add_parser("special", help="special vectors, optionally with an irreducibility certificate")
    s.add_argument("--certificate", action="store_true")
    common(s)
    s.set_defaults(func=cmd_special)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        _note(f"error: {exc}")
        return EXIT_USAGE
    except ValueError as exc:
        # constructor preconditions (n < 2, characteristic 2, ...) are usage errors
        _note(f"error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line frontend.

Exit codes: 0 answer yes, 1 answer no, 2 usage or parse error, 3 a "no"
that only holds within the domain bound, 4 node budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path
from typing import Any, Sequence

from .core import INF, Cost, Query, ResourceLimit, WeightedKB, WKBError, validate
from .reason import (
    CertainBounded,
    PossibleBounded,
    Verdict,
    answers,
    bcs,
    entails,
    optimal_cost,
    parse_semantics,
)
from .search import DomainBound, Problem, completeness_bound
from .syntax import (
    ParseError,
    format_query,
    parse_query,
    parse_wkb,
    serialize_wkb,
)

EXIT_YES, EXIT_NO, EXIT_USAGE, EXIT_INCOMPLETE, EXIT_BUDGET = 0, 1, 2, 3, 4

# re-exported: the text frontend is part of the command-line surface
__all__ = ["main", "run", "parse_wkb", "parse_query", "serialize_wkb", "format_query", "ParseError"]


class UsageError(WKBError):
    pass


def parse_k(text: str) -> Cost:
    t = text.strip().lower()
    if t in ("inf", "infinity"):
        return INF
    try:
        k = int(t, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"k must be a non-negative integer or 'inf', got {text!r}") from None
    if k < 0:
        raise argparse.ArgumentTypeError("k must be non-negative")
    return k


def _cost_json(c: Cost | None) -> Any:
    if c is None:
        return None
    return "inf" if c is INF else c


def exit_code(answer: bool, complete: bool) -> int:
    if answer:
        return EXIT_YES
    return EXIT_NO if complete else EXIT_INCOMPLETE


# -------------------------------------------------------------------- inputs


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_kb(args) -> WeightedKB:
    if not args.kb:
        raise UsageError("--kb is required")
    return parse_wkb(_read(args.kb))


def _load_query(args) -> Query:
    if args.query_text is not None:
        return parse_query(args.query_text)
    if args.query is not None:
        return parse_query(_read(args.query))
    raise UsageError("give --query PATH or --query-text TEXT")


def _bound(args, kb: WeightedKB, problem: Problem) -> DomainBound | None:
    if args.anon_bound is None:
        return None
    theory = completeness_bound(kb, problem, cap=1 << 62)
    complete = theory.theoretical_complete and args.anon_bound >= theory.anon_limit
    return DomainBound(args.anon_bound, complete)


def _engine_kw(args) -> dict:
    kw = {"max_nodes": args.budget_nodes}
    if args.kernel != "auto":
        kw["backend"] = args.kernel
    return kw


def _result(problem: str, v: Verdict | None = None, **extra) -> dict:
    out: dict[str, Any] = {
        "problem": problem,
        "semantics": None,
        "k": None,
        "answer": None,
        "complete": None,
        "opt": None,
        "witness": None,
        "stats": {"nodes": 0, "millis": 0.0},
    }
    if v is not None:
        out.update(
            answer=v.answer,
            complete=v.complete,
            opt=_cost_json(v.opt_used),
            witness=v.witness.to_json() if v.witness is not None else None,
            stats={"nodes": v.stats.get("nodes", 0), "millis": v.stats.get("millis", 0.0)},
        )
        out["status"] = "opt=inf" if v.status == "opt-infinite" else v.status
    out.update(extra)
    return out


# ------------------------------------------------------------------ commands


def cmd_check_sat(args) -> tuple[dict, int]:
    kb = _load_kb(args)
    v = bcs(kb, args.k, _bound(args, kb, Problem.BCS), **_engine_kw(args))
    return _result("bcs", v, k=_cost_json(args.k)), exit_code(v.answer, v.complete)


def cmd_opt(args) -> tuple[dict, int]:
    kb = _load_kb(args)
    t0 = time.perf_counter()
    opt, complete = optimal_cost(kb, _bound(args, kb, Problem.BCS), linear=args.linear, **_engine_kw(args))
    millis = round((time.perf_counter() - t0) * 1000, 3)
    answer = opt is not INF
    out = _result("opt", answer=answer, complete=complete, opt=_cost_json(opt))
    out["stats"]["millis"] = millis
    out["status"] = "opt=inf" if opt is INF else "ok"
    return out, exit_code(answer, complete)


def _semantics(args):
    try:
        return parse_semantics(args.semantics, args.k)
    except WKBError as exc:
        raise UsageError(str(exc)) from None


def cmd_entail(args) -> tuple[dict, int]:
    kb = _load_kb(args)
    q = _load_query(args)
    if not q.is_boolean:
        raise UsageError("entail takes a Boolean query; use 'answers' for answer variables")
    sem = _semantics(args)
    problem = Problem.CERTAIN if args.semantics.startswith("c") else Problem.POSSIBLE
    v = entails(
        kb,
        q,
        sem,
        _bound(args, kb, problem),
        engine=args.engine,
        allow_fresh=args.allow_fresh,
        **_engine_kw(args),
    )
    k = sem.k if isinstance(sem, (CertainBounded, PossibleBounded)) else None
    out = _result("entail", v, semantics=sem.name, k=_cost_json(k), query=format_query(q))
    return out, exit_code(v.answer, v.complete)


def cmd_answers(args) -> tuple[dict, int]:
    kb = _load_kb(args)
    q = _load_query(args)
    sem = _semantics(args)
    problem = Problem.CERTAIN if args.semantics.startswith("c") else Problem.POSSIBLE
    rows = answers(
        kb,
        q,
        sem,
        _bound(args, kb, problem),
        include_negative=True,
        engine=args.engine,
        **_engine_kw(args),
    )
    positive = [list(t) for t, v in rows if v.answer]
    complete = all(v.complete for _, v in rows)
    answer = bool(positive)
    k = sem.k if isinstance(sem, (CertainBounded, PossibleBounded)) else None
    out = _result("answers", answer=answer, complete=complete, semantics=sem.name, k=_cost_json(k))
    out["answers"] = positive
    out["stats"] = {
        "nodes": sum(v.stats.get("nodes", 0) for _, v in rows),
        "millis": round(sum(v.stats.get("millis", 0.0) for _, v in rows), 3),
    }
    return out, exit_code(answer, complete)


def cmd_validate(args) -> tuple[dict, int]:
    kb = _load_kb(args)
    diags = validate(kb)
    out = _result("validate", answer=not diags, complete=True)
    out["diagnostics"] = [{"location": d.location, "message": d.message} for d in diags]
    return out, EXIT_YES if not diags else EXIT_NO


def cmd_gen(args) -> tuple[dict, int]:
    from .bench import corpus, randgen, reductions

    rng = random.Random(args.seed)
    query = None
    if args.reduction == "3col":
        g = corpus.parse_graph(_read(args.input)) if args.input else randgen.random_graph(rng, args.n)
        kb, k = reductions.gen_3col(g)
        extra = {"k": k}
    elif args.reduction == "indset":
        g = corpus.parse_graph(_read(args.input)) if args.input else randgen.random_graph(rng, args.n)
        w = args.vertex
        kb = reductions.gen_independent_set(g, w)
        query = reductions.goal_query(w)
        extra = {"nogoal_query": format_query(reductions.nogoal_query(w))}
    elif args.reduction == "lexmax":
        if args.input:
            phi = corpus.parse_formula(_read(args.input))
        else:
            phi = randgen.random_two_two(rng, args.n, args.m)
        kb = reductions.gen_lexmax(phi)
        query = reductions.lexmax_query(args.vertex) if args.vertex else None
        extra = {}
    else:
        kb = randgen.random_tiny_kb(rng).kb
        extra = {}
    text = serialize_wkb(kb)
    out = _result("gen", answer=True, complete=True, reduction=args.reduction, kb=text, **extra)
    if query is not None:
        out["query"] = format_query(query)
    return out, EXIT_YES


def cmd_oracle(args) -> tuple[dict, int]:
    from .bench import oracle

    kb = _load_kb(args)
    anon = 1 if args.anon_bound is None else args.anon_bound
    if args.sub == "bcs":
        if args.k is None:
            raise UsageError("oracle bcs needs --k")
        v = oracle.oracle_bcs(kb, args.k, anon)
        return _result("oracle-bcs", v, k=_cost_json(args.k)), exit_code(v.answer, v.complete)
    if args.sub == "opt":
        opt, complete = oracle.oracle_opt(kb, anon)
        out = _result("oracle-opt", answer=opt is not INF, complete=complete, opt=_cost_json(opt))
        return out, exit_code(opt is not INF, complete)
    q = _load_query(args)
    sem = _semantics(args)
    v = oracle.oracle_entails(kb, q, sem, anon)
    out = _result("oracle-entail", v, semantics=sem.name, query=format_query(q))
    return out, exit_code(v.answer, v.complete)


# ---------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kb", help="weighted KB file ('-' for stdin)")
    common.add_argument("--anon-bound", type=int, default=None, help="anonymous domain elements to search")
    common.add_argument("--budget-nodes", type=int, default=0, help="solver node budget (0 = unlimited)")
    common.add_argument("--engine", choices=("search", "configs"), default="search")
    common.add_argument("--kernel", choices=("auto", "compiled", "python"), default="auto")
    common.add_argument("--seed", type=int, default=0)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="json", action="store_true", default=True)
    fmt.add_argument("--plain", dest="json", action="store_false")

    def query_opts(p: argparse.ArgumentParser) -> None:
        p.add_argument("--query", help="file holding one query")
        p.add_argument("--query-text", help="the query itself, e.g. 'q() := NoVisa(p)'")
        p.add_argument("--semantics", required=True, help="certain-k, possible-k, certain-opt or possible-opt")
        p.add_argument("--k", type=parse_k, default=None)

    parser = argparse.ArgumentParser(prog="wkb", description="Reasoning over weighted description-logic KBs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-sat", parents=[common], help="is there an interpretation of cost <= k?")
    p.add_argument("--k", type=parse_k, required=True)
    p.set_defaults(func=cmd_check_sat)

    p = sub.add_parser("opt", parents=[common], help="optimal cost")
    p.add_argument("--linear", action="store_true", help="scan k upwards instead of binary search")
    p.set_defaults(func=cmd_opt)

    p = sub.add_parser("entail", parents=[common], help="decide a Boolean query")
    query_opts(p)
    p.add_argument("--allow-fresh", action="store_true", help="accept query individuals absent from the KB")
    p.set_defaults(func=cmd_entail)

    p = sub.add_parser("answers", parents=[common], help="answer tuples over the KB individuals")
    query_opts(p)
    p.set_defaults(func=cmd_answers)

    p = sub.add_parser("validate", parents=[common], help="check weights, names and duplicates")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("gen", parents=[common], help="emit a reduction instance")
    p.add_argument("reduction", choices=("3col", "indset", "lexmax", "random"))
    p.add_argument("--input", help="graph or formula corpus file")
    p.add_argument("--n", type=int, default=5, help="vertices or variables of a random input")
    p.add_argument("--m", type=int, default=4, help="clauses of a random formula")
    p.add_argument("--vertex", type=int, default=0, help="distinguished vertex / queried variable")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("oracle", parents=[common], help="brute-force reference answers")
    p.add_argument("sub", choices=("bcs", "opt", "entail"))
    p.add_argument("--query")
    p.add_argument("--query-text")
    p.add_argument("--semantics", default="certain-opt")
    p.add_argument("--k", type=parse_k, default=None)
    p.set_defaults(func=cmd_oracle)
    return parser


def _emit(out: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(out, indent=2))
        return
    for key, value in out.items():
        if key == "kb":
            print(value, end="")
        elif key == "witness" and value is not None:
            print(f"witness: {json.dumps(value)}")
        elif value is not None:
            print(f"{key}: {json.dumps(value) if isinstance(value, (dict, list, bool)) else value}")


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    try:
        out, code = args.func(args)
    except ResourceLimit as exc:
        print(f"wkb: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ParseError, UsageError, WKBError, ValueError) as exc:
        print(f"wkb: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(out, args.json)
    return code


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()

"""Command line front end.

Exit status contract: 0 for success or a true verdict, 1 for a false
verdict or no solution within bounds, 2 for errors of any kind (parse,
sorting, usage).  ``LSF_FUEL`` overrides the default rewrite fuel; an
explicit ``--fuel`` wins over both.
"""

from __future__ import annotations

import argparse
import io
import os
import sys
from contextlib import redirect_stderr, redirect_stdout
from dataclasses import replace
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from .rewrite import (
    DEFAULT_FUEL,
    FuelExhausted,
    LEFTMOST_OUTERMOST,
    normalize_traced,
)
from .sexpr import ParseError, parse_sexprs
from .solver import (
    Aborted,
    ExhaustedNoSolution,
    SearchConfig,
    Solved,
    check_solution,
    decide_small_lambda,
    solve_sigma,
)
from .sorts import IllTyped, validate_problem
from .surface import (
    NClo,
    NShift,
    NamedTerm,
    NApp,
    NLam,
    NMeta,
    ProblemFile,
    UnboundName,
    parse_named_term,
    parse_problem,
    parse_subst_file,
    render_debruijn,
    render_problem,
    term_to_named,
    to_de_bruijn,
)
from .terms import EqMode
from .transform import InvalidProblem, precook, reduce_problem


def _default_fuel() -> int:
    raw = os.environ.get("LSF_FUEL")
    if raw is None:
        return DEFAULT_FUEL
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"LSF_FUEL must be an integer, got {raw!r}")
    if value < 1:
        raise UsageError("LSF_FUEL must be >= 1")
    return value


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="lamsig", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_fuel(p):
        p.add_argument("--fuel", type=int, default=None, help="rewrite step budget")

    p_check = sub.add_parser("check", help="validate a problem file")
    p_check.add_argument("file")

    p_precook = sub.add_parser("precook", help="tag metavariables with their binder depths")
    p_precook.add_argument("file")

    p_reduce = sub.add_parser("reduce", help="reduce to a substitution-only problem")
    p_reduce.add_argument("file")
    p_reduce.add_argument("-o", "--output", default=None, help="write the result to a file")
    add_fuel(p_reduce)

    p_solve = sub.add_parser("solve", help="bounded unifier search")
    p_solve.add_argument("file")
    p_solve.add_argument("--bound", type=int, default=4, help="candidate size bound")
    p_solve.add_argument("--depth", type=int, default=8, help="candidate depth bound")
    p_solve.add_argument("--all", action="store_true", help="collect several solutions")
    p_solve.add_argument("--max-solutions", type=int, default=16)
    p_solve.add_argument("--mode", choices=["sigma", "lambdasigma"], default=None,
                         help="override the problem's equality mode")
    p_solve.add_argument("--oracle", action="store_true",
                         help="run the bounded lambda-side search instead")
    add_fuel(p_solve)

    p_verify = sub.add_parser("verify", help="check a substitution against a problem")
    p_verify.add_argument("file")
    p_verify.add_argument("subst")
    add_fuel(p_verify)

    p_norm = sub.add_parser("normalize", help="normalize an expression")
    p_norm.add_argument("file", help="problem file providing context and declarations")
    p_norm.add_argument("--expr", default=None,
                        help="expression to normalize (default: the equation's left side)")
    p_norm.add_argument("--mode", choices=["sigma", "lambdasigma"], default="sigma")
    p_norm.add_argument("--trace", action="store_true", help="print one line per step")
    add_fuel(p_norm)

    p_corpus = sub.add_parser("corpus", help="operations on the bundled problem corpus")
    p_corpus.add_argument("action", choices=["run"])
    p_corpus.add_argument("--dir", default=None, help="use problems from a directory instead")
    add_fuel(p_corpus)

    return parser


def _load(path: str) -> ProblemFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise UsageError(f"cannot read {path}: {err.strerror}")
    return parse_problem(text)


def _path_str(path: tuple[int, ...]) -> str:
    return ".".join(map(str, path)) if path else "ε"


def _cmd_check(args) -> int:
    pf = _load(args.file)
    report = validate_problem(pf.problem)
    print(report.render())
    return 0 if report.ok else 1


def _precook_named(nt: NamedTerm, depth: int = 0) -> NamedTerm:
    match nt:
        case NMeta():
            return nt if depth == 0 else NClo(nt, NShift(depth))
        case NApp(fun, arg):
            return NApp(_precook_named(fun, depth), _precook_named(arg, depth))
        case NLam(var, ty, body):
            return NLam(var, ty, _precook_named(body, depth + 1))
        case _:
            return nt


def _cmd_precook(args) -> int:
    pf = _load(args.file)
    cooked = precook(pf.problem)
    out = ProblemFile(
        problem=cooked,
        ctx_names=pf.ctx_names,
        named_lhs=_precook_named(pf.named_lhs),
        named_rhs=_precook_named(pf.named_rhs),
        expect=pf.expect,
    )
    print(render_problem(out), end="")
    return 0


def _cmd_reduce(args) -> int:
    pf = _load(args.file)
    cert = reduce_problem(pf.problem, fuel=args.fuel or _default_fuel())
    target = cert.target
    out = ProblemFile(
        problem=target,
        ctx_names=pf.ctx_names,
        named_lhs=term_to_named(target.lhs, pf.ctx_names),
        named_rhs=term_to_named(target.rhs, pf.ctx_names),
        expect=pf.expect,
        certificate=cert.var_map,
    )
    text = render_problem(out)
    print(text, end="")
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    return 0


def _cmd_solve(args) -> int:
    pf = _load(args.file)
    problem = pf.problem
    if args.mode is not None:
        problem = replace(problem, mode=EqMode(args.mode))
    cfg = SearchConfig(
        size_bound=args.bound,
        depth_bound=args.depth,
        fuel=args.fuel or _default_fuel(),
        find_all=args.all,
        max_solutions=args.max_solutions,
    )
    if args.oracle:
        outcome = decide_small_lambda(problem, cfg)
    elif problem.mode is EqMode.SIGMA_ONLY:
        outcome = solve_sigma(problem, cfg)
    else:
        outcome = decide_small_lambda(problem, cfg)
    match outcome:
        case Solved(solutions):
            for theta in solutions:
                print(", ".join(f"?{name} := {render_debruijn(term)}" for name, term in theta.items()))
            return 0
        case ExhaustedNoSolution():
            print(outcome)
            return 1
        case Aborted(reason):
            print(f"aborted: {reason}")
            return 2
    raise AssertionError


def _cmd_verify(args) -> int:
    pf = _load(args.file)
    try:
        subst_text = Path(args.subst).read_text(encoding="utf-8")
    except OSError as err:
        raise UsageError(f"cannot read {args.subst}: {err.strerror}")
    theta = parse_subst_file(subst_text, pf)
    ok = check_solution(pf.problem, theta, fuel=args.fuel or _default_fuel())
    if ok:
        print("solution verified")
        return 0
    print("not a solution")
    return 1


def _cmd_normalize(args) -> int:
    pf = _load(args.file)
    if args.expr is not None:
        forms = parse_sexprs(args.expr)
        if len(forms) != 1:
            raise ParseError(1, 1, "expected exactly one expression")
        named = parse_named_term(forms[0])
        try:
            term = to_de_bruijn(named, pf.ctx_names)
        except UnboundName as err:
            raise ParseError(err.line, err.col, f"unbound name {err.name!r}")
    else:
        term = pf.problem.lhs
    mode = EqMode.SIGMA_ONLY if args.mode == "sigma" else EqMode.LAMBDA_SIGMA
    normal, trace = normalize_traced(term, mode, LEFTMOST_OUTERMOST, args.fuel or _default_fuel())
    if args.trace:
        for step_entry in trace.steps:
            print(f"{_path_str(step_entry.path)}\t{step_entry.rule.value}\t{render_debruijn(step_entry.result)}")
    print(render_debruijn(normal))
    return 0


def _corpus_files(directory: Optional[str]):
    if directory is not None:
        paths = sorted(Path(directory).glob("*.sig"))
        return [(p.name, p.read_text(encoding="utf-8")) for p in paths]
    root = resources.files("lamsig").joinpath("corpus")
    out = []
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".sig"):
            out.append((entry.name, entry.read_text(encoding="utf-8")))
    return out


def _cmd_corpus(args) -> int:
    fuel = args.fuel or _default_fuel()
    files = _corpus_files(args.dir)
    if not files:
        raise UsageError("no corpus files found")
    all_ok = True
    checked = 0
    for name, text in files:
        pf = parse_problem(text)
        if pf.expect is None:
            print(f"{name}: no annotation, skipped")
            continue
        checked += 1
        cfg = SearchConfig(size_bound=pf.expect.bound, fuel=fuel, find_all=False)
        if pf.problem.mode is EqMode.LAMBDA_SIGMA:
            outcome = decide_small_lambda(pf.problem, cfg)
        else:
            outcome = solve_sigma(pf.problem, cfg)
        solved = isinstance(outcome, Solved)
        expected_solved = pf.expect.kind == "solvable"
        ok = solved == expected_solved
        all_ok = all_ok and ok
        verdict = "solved" if solved else "no solution within bounds"
        mark = "ok" if ok else "MISMATCH"
        print(f"{name}: expect {pf.expect.kind} :bound {pf.expect.bound} -> {verdict} [{mark}]")
    print(f"corpus: {len(files)} files, {checked} annotated, "
          f"{'all as annotated' if all_ok else 'MISMATCHES FOUND'}")
    return 0 if all_ok else 1


def _dispatch(argv: Sequence[str]) -> int:
    parser = _build_parser()
    args = parser.parse_args(list(argv))
    handlers = {
        "check": _cmd_check,
        "precook": _cmd_precook,
        "reduce": _cmd_reduce,
        "solve": _cmd_solve,
        "verify": _cmd_verify,
        "normalize": _cmd_normalize,
        "corpus": _cmd_corpus,
    }
    return handlers[args.command](args)


def run_command(argv: Sequence[str]) -> tuple[int, str]:
    """Run one command, returning its exit status and combined output."""
    buf = io.StringIO()
    try:
        with redirect_stdout(buf), redirect_stderr(buf):
            status = _dispatch(argv)
    except SystemExit as exc:  # argparse --help
        status = 0 if exc.code in (0, None) else 2
    except UsageError as err:
        print(f"usage error: {err}", file=buf)
        status = 2
    except (ParseError, IllTyped, InvalidProblem, FuelExhausted, ValueError) as err:
        print(f"error: {err}", file=buf)
        status = 2
    return status, buf.getvalue()


def main() -> None:
    status, output = run_command(sys.argv[1:])
    stream = sys.stderr if status == 2 else sys.stdout
    stream.write(output)
    sys.exit(status)


if __name__ == "__main__":
    main()

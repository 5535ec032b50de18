"""Simple types, contexts, sorts and sort checking for the term language.

A context is a tuple of types with position 0 holding the type of index 1
(the most recently bound variable).  A metavariable's sort pairs the context
it was declared in with its type; metavariables are context-rigid and only
sort-check in exactly their declared context.

Lambda nodes carry no domain annotation, so pure inference cannot type every
lambda.  ``sort_check_term`` therefore accepts an optional expected type and
runs bidirectionally; plain inference handles index spines, metavariables,
closures, and beta redexes whose argument is inferable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .terms import (
    App,
    Closure,
    Comp,
    Cons,
    EqMode,
    Index,
    Lam,
    Meta,
    Shift,
    Subst,
    Term,
    free_metavars,
)


@dataclass(frozen=True, slots=True)
class Base:
    name: str


@dataclass(frozen=True, slots=True)
class Arrow:
    dom: "SimpleType"
    cod: "SimpleType"


SimpleType = Union[Base, Arrow]
Context = tuple[SimpleType, ...]


@dataclass(frozen=True, slots=True)
class Sort:
    ctx: Context
    ty: SimpleType


class IllTyped(Exception):
    """Raised when a term or substitution fails to sort-check."""

    def __init__(self, reason: str, path: tuple[int, ...] = ()):
        self.reason = reason
        self.path = path
        at = ".".join(map(str, path)) if path else "root"
        super().__init__(f"{reason} (at {at})")


class UnannotatedBinder(IllTyped):
    """A binder met in inference position: its domain is not written down.

    Application nodes recover from this by inferring the argument first, so
    redexes that rewriting creates (a binder under a closure in function
    position) stay checkable."""


def order_of_type(ty: SimpleType) -> int:
    """Order 1 for base types, max(order(dom)+1, order(cod)) for arrows."""
    match ty:
        case Base():
            return 1
        case Arrow(dom, cod):
            return max(order_of_type(dom) + 1, order_of_type(cod))
    raise TypeError(f"not a type: {ty!r}")


def check_second_order_context(ctx: Context) -> bool:
    return all(order_of_type(ty) <= 2 for ty in ctx)


def type_arity(ty: SimpleType) -> int:
    """Number of arrows to strip before reaching a base type."""
    n = 0
    while isinstance(ty, Arrow):
        ty = ty.cod
        n += 1
    return n


def argument_types(ty: SimpleType) -> tuple[SimpleType, ...]:
    args = []
    while isinstance(ty, Arrow):
        args.append(ty.dom)
        ty = ty.cod
    return tuple(args)


def result_base(ty: SimpleType) -> SimpleType:
    while isinstance(ty, Arrow):
        ty = ty.cod
    return ty


def sort_check_term(
    ctx: Context,
    metavars: dict[str, Sort],
    t: Term,
    expected: Optional[SimpleType] = None,
    path: tuple[int, ...] = (),
) -> SimpleType:
    """Return the type of t in ctx, or raise IllTyped.

    With ``expected`` given the check runs bidirectionally, which is the only
    way to type a lambda whose domain is not forced by an application.
    """
    if expected is None:
        return _infer(ctx, metavars, t, path)
    _check(ctx, metavars, t, expected, path)
    return expected


def _infer(ctx, metavars, t, path) -> SimpleType:
    match t:
        case Index(n):
            if n > len(ctx):
                raise IllTyped(f"index {n} out of range for context of length {len(ctx)}", path)
            return ctx[n - 1]
        case Meta(name):
            sort = metavars.get(name)
            if sort is None:
                raise IllTyped(f"undeclared metavariable {name}", path)
            if sort.ctx != ctx:
                raise IllTyped(f"metavariable {name} used outside its declared context", path)
            return sort.ty
        case App(fun, arg):
            try:
                fun_ty = _infer(ctx, metavars, fun, path + (0,))
            except UnannotatedBinder:
                # redex: the argument fixes the binder's domain
                arg_ty = _infer(ctx, metavars, arg, path + (1,))
                return _apply_type(ctx, metavars, fun, arg_ty, path + (0,))
            if not isinstance(fun_ty, Arrow):
                raise IllTyped("application head is not of arrow type", path)
            _check(ctx, metavars, arg, fun_ty.dom, path + (1,))
            return fun_ty.cod
        case Lam(_):
            raise UnannotatedBinder("cannot infer the domain of an unapplied binder", path)
        case Closure(body, subst):
            target = sort_check_subst(ctx, metavars, subst, path + (1,))
            return _infer(target, metavars, body, path + (0,))
    raise TypeError(f"not a term: {t!r}")


def _apply_type(ctx, metavars, fun, arg_ty, path) -> SimpleType:
    """Type of `fun` applied to an argument of the given type, descending
    through binders and closures whose domain the argument now fixes."""
    match fun:
        case Lam(body):
            return _infer((arg_ty,) + ctx, metavars, body, path + (0,))
        case Closure(body, subst):
            target = sort_check_subst(ctx, metavars, subst, path + (1,))
            return _apply_type(target, metavars, body, arg_ty, path + (0,))
        case _:
            fun_ty = _infer(ctx, metavars, fun, path)
            if not isinstance(fun_ty, Arrow):
                raise IllTyped("application head is not of arrow type", path)
            if fun_ty.dom != arg_ty:
                raise IllTyped(
                    f"argument type {render_type(arg_ty)} does not match "
                    f"domain {render_type(fun_ty.dom)}",
                    path,
                )
            return fun_ty.cod


def _check(ctx, metavars, t, expected, path) -> None:
    match t:
        case Lam(body):
            if not isinstance(expected, Arrow):
                raise IllTyped("binder checked against a non-arrow type", path)
            _check((expected.dom,) + ctx, metavars, body, expected.cod, path + (0,))
            return
        case Closure(body, subst):
            target = sort_check_subst(ctx, metavars, subst, path + (1,))
            _check(target, metavars, body, expected, path + (0,))
            return
        case App(fun, arg):
            try:
                fun_ty = _infer(ctx, metavars, fun, path + (0,))
            except UnannotatedBinder:
                arg_ty = _infer(ctx, metavars, arg, path + (1,))
                _check_applied(ctx, metavars, fun, arg_ty, expected, path + (0,))
                return
            if not isinstance(fun_ty, Arrow):
                raise IllTyped("application head is not of arrow type", path)
            _check(ctx, metavars, arg, fun_ty.dom, path + (1,))
            if fun_ty.cod != expected:
                raise IllTyped(
                    f"expected {render_type(expected)}, found {render_type(fun_ty.cod)}", path
                )
            return
        case _:
            got = _infer(ctx, metavars, t, path)
            if got != expected:
                raise IllTyped(f"expected {render_type(expected)}, found {render_type(got)}", path)


def _check_applied(ctx, metavars, fun, arg_ty, expected, path) -> None:
    """Check `fun` applied to an argument type against an expected result,
    so nested binders stay in checking mode."""
    match fun:
        case Lam(body):
            _check((arg_ty,) + ctx, metavars, body, expected, path + (0,))
        case Closure(body, subst):
            target = sort_check_subst(ctx, metavars, subst, path + (1,))
            _check_applied(target, metavars, body, arg_ty, expected, path + (0,))
        case _:
            got = _apply_type(ctx, metavars, fun, arg_ty, path)
            if got != expected:
                raise IllTyped(f"expected {render_type(expected)}, found {render_type(got)}", path)


def sort_check_subst(
    ctx: Context,
    metavars: dict[str, Sort],
    s: Subst,
    path: tuple[int, ...] = (),
) -> Context:
    """Return the context a closure body must live in for Closure(body, s)
    to sort-check in ctx."""
    match s:
        case Shift(k):
            if k > len(ctx):
                raise IllTyped(f"shift {k} exceeds context of length {len(ctx)}", path)
            return ctx[k:]
        case Cons(head, tail):
            head_ty = _infer(ctx, metavars, head, path + (0,))
            target = sort_check_subst(ctx, metavars, tail, path + (1,))
            return (head_ty,) + target
        case Comp(first, second):
            mid = sort_check_subst(ctx, metavars, second, path + (1,))
            return sort_check_subst(mid, metavars, first, path + (0,))
    raise TypeError(f"not a substitution: {s!r}")


def render_type(ty: SimpleType) -> str:
    match ty:
        case Base(name):
            return name
        case Arrow(dom, cod):
            return f"(-> {render_type(dom)} {render_type(cod)})"
    raise TypeError(f"not a type: {ty!r}")


# --- unification problems ------------------------------------------------


@dataclass(eq=True)
class UnifProblem:
    """One equation between two sides, with its context and declarations.

    Invariants (validated by validate_problem, not enforced on construction
    so that deliberately broken problems can be built for reporting): both
    sides sort-check in ctx at a common type, and every metavariable that
    occurs is declared.
    """

    base_types: frozenset[str]
    ctx: Context
    metavars: dict[str, Sort]
    lhs: Term
    rhs: Term
    mode: EqMode


@dataclass
class CheckEntry:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class ValidationReport:
    entries: list[CheckEntry] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.entries.append(CheckEntry(name, ok, detail))

    def render(self) -> str:
        lines = []
        for e in self.entries:
            mark = "PASS" if e.ok else "FAIL"
            suffix = f"  {e.detail}" if e.detail else ""
            lines.append(f"{mark} {e.name}{suffix}")
        return "\n".join(lines)


def equation_type(p: UnifProblem) -> SimpleType:
    """Common type of both sides, inferring from whichever side allows it."""
    try:
        ty = _infer(p.ctx, p.metavars, p.lhs, ())
    except IllTyped:
        ty = _infer(p.ctx, p.metavars, p.rhs, ())
        _check(p.ctx, p.metavars, p.lhs, ty, ())
        return ty
    _check(p.ctx, p.metavars, p.rhs, ty, ())
    return ty


def validate_problem(p: UnifProblem) -> ValidationReport:
    """Check the shape conditions a second-order problem must satisfy."""
    report = ValidationReport()

    undeclared = (free_metavars(p.lhs) | free_metavars(p.rhs)) - p.metavars.keys()
    report.add(
        "metavars-declared",
        not undeclared,
        "" if not undeclared else f"undeclared: {', '.join(sorted(undeclared))}",
    )

    common: Optional[SimpleType] = None
    try:
        common = equation_type(p)
        report.add("sides-sort-check", True, f"common type {render_type(common)}")
    except IllTyped as err:
        report.add("sides-sort-check", False, str(err))

    report.add(
        "common-type-atomic",
        common is not None and isinstance(common, Base),
        "" if common is None else f"type is {render_type(common)}",
    )

    report.add(
        "context-second-order",
        check_second_order_context(p.ctx),
        "",
    )

    bad_order = [x for x, sort in p.metavars.items() if order_of_type(sort.ty) > 2]
    report.add(
        "metavar-type-order",
        not bad_order,
        "" if not bad_order else f"order > 2: {', '.join(sorted(bad_order))}",
    )

    bad_ctx = [x for x, sort in p.metavars.items() if not check_second_order_context(sort.ctx)]
    report.add(
        "metavar-context-second-order",
        not bad_ctx,
        "" if not bad_ctx else f"context not second order: {', '.join(sorted(bad_ctx))}",
    )

    return report

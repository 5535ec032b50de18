"""Bounded search for unifiers, and solution checking in both equalities.

Unification modulo the substitution rules is undecidable, so every negative
answer here means "no solution within the stated bounds" and nothing more.
The search itself is deliberately unclever: enumerate well-sorted candidate
terms for every unknown in a deterministic order and test total assignments
one by one.  That keeps the trusted core small enough for the transfer
properties to be checked against it rather than through it.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Iterator, Union

from .rewrite import (
    DEFAULT_FUEL,
    FuelExhausted,
    lambda_sigma_equal,
    normalize_lambda_sigma,
    normalize_sigma,
    sigma_equal,
)
from .sorts import (
    Arrow,
    Context,
    SimpleType,
    Sort,
    UnifProblem,
    sort_check_term,
    validate_problem,
)
from .terms import (
    App,
    Closure,
    EqMode,
    Index,
    Lam,
    Meta,
    MetaSubst,
    Shift,
    Term,
    free_metavars,
    graft,
    is_simple,
    subterms,
)
from .transform import InvalidProblem, precook

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchConfig:
    size_bound: int = 4
    depth_bound: int = 8
    fuel: int = DEFAULT_FUEL
    find_all: bool = False
    max_solutions: int = 16

    def __post_init__(self):
        for name in ("size_bound", "depth_bound", "fuel", "max_solutions"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")


@dataclass
class Solved:
    solutions: list[MetaSubst]


@dataclass
class ExhaustedNoSolution:
    size_bound: int
    depth_bound: int

    def __str__(self):
        return f"no solution within size <= {self.size_bound}, depth <= {self.depth_bound}"


@dataclass
class Aborted:
    reason: str


SearchOutcome = Union[Solved, ExhaustedNoSolution, Aborted]


# --- candidate enumeration -----------------------------------------------


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ways of writing total as an ordered sum of `parts` positive integers,
    lexicographically."""
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_simple_terms(
    sort: Sort,
    metavar_pool: dict[str, Sort],
    cfg: SearchConfig,
) -> Iterator[Term]:
    """All simple, beta-normal terms of the given sort, by nondecreasing
    size.

    Candidates are index-headed application spines, binders when the target
    type is an arrow, and pool metavariables under a plain shift.  Ties are
    broken by constructor (index, application, binder, metavariable), then
    by the obvious positional orders, so the stream is deterministic.
    """
    for size in range(1, cfg.size_bound + 1):
        yield from _exact_size(sort.ctx, sort.ty, size, cfg.depth_bound, metavar_pool)


def _exact_size(
    ctx: Context,
    ty: SimpleType,
    size: int,
    depth: int,
    pool: dict[str, Sort],
) -> Iterator[Term]:
    if depth == 0 or size < 1:
        return

    if size == 1:
        for i, entry in enumerate(ctx, start=1):
            if entry == ty:
                yield Index(i)

    # application spines headed by an index; head_ty tracks the type left
    # after the args collected so far
    for i, entry in enumerate(ctx, start=1):
        head_ty = entry
        args: list[SimpleType] = []
        while isinstance(head_ty, Arrow):
            args.append(head_ty.dom)
            head_ty = head_ty.cod
            k = len(args)
            arg_budget = size - 1 - k
            if head_ty != ty or arg_budget < k:
                continue
            for sizes in _compositions(arg_budget, k):
                for combo in _arg_combos(ctx, tuple(args), sizes, depth - 1, pool):
                    spine: Term = Index(i)
                    for arg in combo:
                        spine = App(spine, arg)
                    yield spine

    if isinstance(ty, Arrow) and size >= 2:
        for body in _exact_size((ty.dom,) + ctx, ty.cod, size - 1, depth - 1, pool):
            yield Lam(body)

    for name, meta_sort in pool.items():
        if meta_sort.ty != ty:
            continue
        if size == 1 and meta_sort.ctx == ctx:
            yield Meta(name)
        if size == 3:
            for k in range(1, len(ctx) + 1):
                if ctx[k:] == meta_sort.ctx:
                    yield Closure(Meta(name), Shift(k))


def _arg_combos(ctx, arg_types, sizes, depth, pool) -> Iterator[tuple[Term, ...]]:
    if not arg_types:
        yield ()
        return
    for first in _exact_size(ctx, arg_types[0], sizes[0], depth, pool):
        for rest in _arg_combos(ctx, arg_types[1:], sizes[1:], depth, pool):
            yield (first,) + rest


# --- solution checking ----------------------------------------------------


def check_solution(p: UnifProblem, theta: MetaSubst, fuel: int = DEFAULT_FUEL) -> bool:
    """True iff grafting theta makes the two sides equal in p's equality.

    Full-equality problems in plain lambda syntax are precooked first, so a
    binding grafted under a binder still refers to the right context slots.
    Bindings are sort-checked against their declarations; non-simple
    bindings and bindings with inert redexes are accepted but logged.
    """
    needed = (free_metavars(p.lhs) | free_metavars(p.rhs)) & p.metavars.keys()
    missing = needed - set(theta.keys())
    if missing:
        raise ValueError(f"substitution misses metavariable(s): {', '.join(sorted(missing))}")

    for name, term in theta.items():
        sort = p.metavars.get(name)
        if sort is None:
            continue
        sort_check_term(sort.ctx, p.metavars, term, expected=sort.ty)
        if not is_simple(term):
            log.warning("binding for %s is not simple", name)
        if normalize_lambda_sigma(term, fuel) != term:
            log.warning("binding for %s contains redexes", name)

    if p.mode is EqMode.LAMBDA_SIGMA:
        sides = p
        if not any(
            isinstance(node, Closure)
            for side in (p.lhs, p.rhs)
            for node in subterms(side)
        ):
            sides = precook(p)
        return lambda_sigma_equal(graft(theta, sides.lhs), graft(theta, sides.rhs), fuel)
    return sigma_equal(graft(theta, p.lhs), graft(theta, p.rhs), fuel)


# --- bounded solvers -------------------------------------------------------


def _product_search(
    p: UnifProblem,
    cfg: SearchConfig,
    equal,
    prune=None,
) -> SearchOutcome:
    names = list(p.metavars)
    streams = [
        list(enumerate_simple_terms(p.metavars[name], {}, cfg)) for name in names
    ]
    solutions: list[MetaSubst] = []
    try:
        for combo in itertools.product(*streams):
            theta = MetaSubst(dict(zip(names, combo)))
            lhs = graft(theta, p.lhs)
            rhs = graft(theta, p.rhs)
            if prune is not None and prune(lhs):
                continue
            if equal(lhs, rhs, cfg.fuel):
                assert check_solution(p, theta, cfg.fuel)
                solutions.append(theta)
                if not cfg.find_all or len(solutions) >= cfg.max_solutions:
                    break
    except FuelExhausted as err:
        return Aborted(f"fuel exhausted: {err}")
    if solutions:
        return Solved(solutions)
    return ExhaustedNoSolution(cfg.size_bound, cfg.depth_bound)


def solve_sigma(p: UnifProblem, cfg: SearchConfig = SearchConfig()) -> SearchOutcome:
    """Bounded unifier search modulo the substitution rules.

    Every unknown ranges over the ground simple-term stream of its sort, and
    assignments are tried in deterministic product order.  A negative
    outcome only rules out the searched bounds.
    """
    if p.mode is not EqMode.SIGMA_ONLY:
        raise ValueError("solve_sigma expects a substitution-only problem")
    report = validate_problem(p)
    if not report.ok:
        raise InvalidProblem(report)
    return _product_search(p, cfg, sigma_equal)


def _head_signature(t: Term) -> tuple[int, int, int] | None:
    """(binder depth, head index, spine length) of a rigid normal term."""
    lams = 0
    while isinstance(t, Lam):
        lams += 1
        t = t.body
    spine = 0
    while isinstance(t, App):
        spine += 1
        t = t.fun
    if isinstance(t, Index):
        return lams, t.n, spine
    return None


def match_sigma(p: UnifProblem, cfg: SearchConfig = SearchConfig()) -> SearchOutcome:
    """solve_sigma for a ground right-hand side, with a sound head prune.

    Candidates whose grafted left side normalizes to a rigid head different
    from the right side's are skipped without the full comparison; anything
    the prune skips could not have been a solution, so the outcome matches
    solve_sigma at equal bounds.
    """
    if p.mode is not EqMode.SIGMA_ONLY:
        raise ValueError("match_sigma expects a substitution-only problem")
    if free_metavars(p.rhs):
        raise ValueError("match_sigma expects a ground right-hand side")
    report = validate_problem(p)
    if not report.ok:
        raise InvalidProblem(report)

    rhs_sig = _head_signature(normalize_sigma(p.rhs, cfg.fuel))

    def prune(lhs_grafted: Term) -> bool:
        if rhs_sig is None:
            return False
        sig = _head_signature(normalize_sigma(lhs_grafted, cfg.fuel))
        return sig is not None and sig != rhs_sig

    return _product_search(p, cfg, sigma_equal, prune=prune)


def decide_small_lambda(p: UnifProblem, cfg: SearchConfig = SearchConfig()) -> SearchOutcome:
    """Bounded full-equality oracle: enumerate normal lambda terms for every
    unknown and test assignments with check_solution.

    Kept independent of the reduction machinery so transfer results can be
    checked against it.
    """
    if p.mode is not EqMode.LAMBDA_SIGMA:
        raise ValueError("decide_small_lambda expects a full-equality problem")
    report = validate_problem(p)
    if not report.ok:
        raise InvalidProblem(report)

    names = list(p.metavars)
    streams = [
        list(enumerate_simple_terms(p.metavars[name], {}, cfg)) for name in names
    ]
    solutions: list[MetaSubst] = []
    try:
        for combo in itertools.product(*streams):
            theta = MetaSubst(dict(zip(names, combo)))
            if check_solution(p, theta, cfg.fuel):
                solutions.append(theta)
                if not cfg.find_all or len(solutions) >= cfg.max_solutions:
                    break
    except FuelExhausted as err:
        return Aborted(f"fuel exhausted: {err}")
    if solutions:
        return Solved(solutions)
    return ExhaustedNoSolution(cfg.size_bound, cfg.depth_bound)

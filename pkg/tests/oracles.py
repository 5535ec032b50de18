"""Independent oracles the tests check the engine against.

The main one interprets closures meta-theoretically: a substitution denotes
a function from indices to terms, applied by ordinary capture-avoiding
de Bruijn substitution.  On metavariable-free terms the result is closure
free, hence already normal for the substitution rules, so it must equal the
engine's normal form on the nose.  None of this shares code with the
engine's rule table.
"""

from __future__ import annotations

from lamsig import App, Closure, Comp, Cons, Index, Lam, Meta, Shift


def shift_term(t, by: int, cutoff: int = 0):
    """Renumber free indices above cutoff (classic de Bruijn shift)."""
    match t:
        case Index(n):
            return Index(n + by) if n > cutoff else t
        case App(fun, arg):
            return App(shift_term(fun, by, cutoff), shift_term(arg, by, cutoff))
        case Lam(body):
            return Lam(shift_term(body, by, cutoff + 1))
    raise TypeError(f"oracle handles pure ground terms only: {t!r}")


def subst_apply(t, mapping):
    """Apply an index-to-term mapping, lifting under binders."""
    match t:
        case Index(n):
            return mapping(n)
        case App(fun, arg):
            return App(subst_apply(fun, mapping), subst_apply(arg, mapping))
        case Lam(body):
            lifted = lambda n: Index(1) if n == 1 else shift_term(mapping(n - 1), 1)
            return Lam(subst_apply(body, lifted))
    raise TypeError(f"oracle handles pure ground terms only: {t!r}")


def denote_subst(s):
    """The function on indices a ground substitution denotes."""
    match s:
        case Shift(k):
            return lambda n: Index(n + k)
        case Cons(head, tail):
            head_denoted = denote(head)
            tail_fn = denote_subst(tail)
            return lambda n: head_denoted if n == 1 else tail_fn(n - 1)
        case Comp(first, second):
            first_fn = denote_subst(first)
            second_fn = denote_subst(second)
            return lambda n: subst_apply(first_fn(n), second_fn)
    raise TypeError(f"not a substitution: {s!r}")


def denote(t):
    """Closure-free meaning of a ground term; beta redexes are left alone."""
    match t:
        case Index():
            return t
        case App(fun, arg):
            return App(denote(fun), denote(arg))
        case Lam(body):
            return Lam(denote(body))
        case Closure(body, subst):
            return subst_apply(denote(body), denote_subst(subst))
        case Meta():
            raise TypeError("oracle handles ground terms only")
    raise TypeError(f"not a term: {t!r}")


def beta_normalize(t, budget: int = 10_000):
    """Normal-order beta normalization of a closure-free term."""
    for _ in range(budget):
        reduced = _beta_step(t)
        if reduced is None:
            return t
        t = reduced
    raise RuntimeError("oracle beta budget exhausted")


def _beta_step(t):
    match t:
        case App(Lam(body), arg):
            contract = lambda n: arg if n == 1 else Index(n - 1)
            return subst_apply(body, contract)
        case App(fun, arg):
            new_fun = _beta_step(fun)
            if new_fun is not None:
                return App(new_fun, arg)
            new_arg = _beta_step(arg)
            if new_arg is not None:
                return App(fun, new_arg)
            return None
        case Lam(body):
            new_body = _beta_step(body)
            return Lam(new_body) if new_body is not None else None
        case Index():
            return None
    raise TypeError(f"not a ground closure-free term: {t!r}")


def brute_simple_terms(ctx, ty, pool, size_bound: int):
    """Exhaustive reference enumeration of the simple normal terms the
    solver's stream should produce, as an unordered set.

    Built from first principles: all index spines, binders for arrow
    types, and pool metavariables under a shift, filtered by size.
    """
    from lamsig import Arrow, Sort

    results = set()

    def terms_of(ctx, ty, size):
        if size < 1:
            return
        if size == 1:
            for i, entry in enumerate(ctx, start=1):
                if entry == ty:
                    yield Index(i)
            for name, sort in pool.items():
                if sort == Sort(ctx, ty):
                    yield Meta(name)
        if size == 3:
            for name, sort in pool.items():
                if sort.ty == ty:
                    for k in range(1, len(ctx) + 1):
                        if ctx[k:] == sort.ctx:
                            yield Closure(Meta(name), Shift(k))
        if isinstance(ty, Arrow) and size >= 2:
            for body in terms_of((ty.dom,) + ctx, ty.cod, size - 1):
                yield Lam(body)
        # spines: head index applied to k arguments
        for i, entry in enumerate(ctx, start=1):
            args = []
            t = entry
            while isinstance(t, Arrow):
                args.append(t.dom)
                t = t.cod
                if t != ty:
                    continue
                k = len(args)
                for combo in arg_lists(ctx, tuple(args), size - 1 - k):
                    spine = Index(i)
                    for a in combo:
                        spine = App(spine, a)
                    yield spine

    def arg_lists(ctx, types, budget):
        if not types:
            if budget == 0:
                yield ()
            return
        for first_size in range(1, budget - (len(types) - 1) + 1):
            for first in terms_of(ctx, types[0], first_size):
                for rest in arg_lists(ctx, types[1:], budget - first_size):
                    yield (first,) + rest

    for size in range(1, size_bound + 1):
        for t in terms_of(ctx, ty, size):
            results.add(t)
    return results

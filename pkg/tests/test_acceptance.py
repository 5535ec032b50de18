"""Acceptance suite: one test per acceptance criterion, each printing a
PASS line when its assertions hold.

Run with `pytest tests/test_acceptance.py -v -s` to see both the pytest
verdicts and the per-criterion lines.
"""

import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gen import gen_agreement_pair, gen_checked_term, gen_second_order_problem

from lamsig import (
    EqMode,
    ExhaustedNoSolution,
    MetaSubst,
    RandomizedPosition,
    RuleId,
    SearchConfig,
    Solved,
    check_graft_agreement,
    check_solution,
    decide_small_lambda,
    graft,
    lift_solution,
    normalize_sigma,
    normalize_traced,
    project_solution,
    reduce_problem,
    solve_sigma,
    sort_check_term,
    term_size,
    validate_reduced_problem,
)
from lamsig.rewrite import to_pure_indices
from lamsig.surface import parse_problem, render_debruijn, render_problem
from lamsig.cli import run_command
from lamsig.terms import Lam

CORPUS = Path(__file__).parent.parent / "src" / "lamsig" / "corpus"
GOLDENS = Path(__file__).parent / "goldens"

N_TERMS = 10_000
FUEL = 10**6


@pytest.fixture(scope="module")
def generated_terms():
    return [gen_checked_term(seed) for seed in range(N_TERMS)]


@pytest.fixture(scope="module")
def corpus_files():
    return {
        path.name: parse_problem(path.read_text(encoding="utf-8"))
        for path in sorted(CORPUS.glob("*.sig"))
    }


def test_criterion_1_sigma_normalization_proxy(generated_terms):
    """10,000 sort-checked terms of size <= 60 normalize with fuel 10^6."""
    assert len(generated_terms) == N_TERMS
    assert all(term_size(t) <= 60 for _, _, t, _ in generated_terms)
    start = time.monotonic()
    for _, _, t, _ in generated_terms:
        normalize_sigma(t, fuel=FUEL)  # FuelExhausted would fail the test
    elapsed = time.monotonic() - start
    assert elapsed < 60.0, f"normalization took {elapsed:.1f}s"
    print(f"\nACCEPT sigma-normalization-proxy: PASS ({elapsed:.1f}s for {N_TERMS} terms)")


def test_criterion_2_strategy_confluence(generated_terms):
    """Leftmost-outermost and randomized positions give byte-identical
    normal forms."""
    agree = 0
    for seed, (_, _, t, _) in enumerate(generated_terms):
        lo = render_debruijn(normalize_sigma(t, fuel=FUEL)).encode()
        rand_nf, _ = normalize_traced(
            t, EqMode.SIGMA_ONLY, RandomizedPosition(seed), FUEL
        )
        assert lo == render_debruijn(rand_nf).encode(), f"seed {seed}"
        agree += 1
    assert agree == N_TERMS
    print(f"\nACCEPT strategy-confluence: PASS (100% of {N_TERMS})")


def test_criterion_3_subject_reduction(generated_terms):
    """Every step of every trace preserves the sort."""
    steps = 0
    for ctx, metavars, t, ty in generated_terms:
        _, trace = normalize_traced(t, EqMode.SIGMA_ONLY, fuel=FUEL)
        for entry in trace.steps:
            assert sort_check_term(ctx, metavars, entry.result, expected=ty) == ty
            steps += 1
    print(f"\nACCEPT subject-reduction: PASS ({steps} steps, zero violations)")


def test_criterion_4_graft_agreement():
    """1,000 generated pairs satisfying the hypotheses agree between the
    full and substitution-only normal forms, with no Beta step on the
    substitution-only side."""
    for seed in range(1_000):
        ctx, metavars, a, theta = gen_agreement_pair(seed)
        assert check_graft_agreement(ctx, metavars, a, theta, fuel=FUEL) is True, seed
        _, trace = normalize_traced(graft(theta, a), EqMode.SIGMA_ONLY, fuel=FUEL)
        assert all(s.rule is not RuleId.BETA for s in trace.steps)
    print("\nACCEPT graft-agreement: PASS (1000 pairs, 100% true)")


def test_criterion_5_reduced_validation(corpus_files):
    """validate_reduced_problem passes on every reduction of the corpus and
    of 500 generated second-order problems."""
    checked = 0
    for name, pf in corpus_files.items():
        if pf.problem.mode is not EqMode.LAMBDA_SIGMA:
            continue
        cert = reduce_problem(pf.problem, fuel=FUEL)
        report = validate_reduced_problem(cert)
        assert report.ok, f"{name}:\n{report.render()}"
        checked += 1
    for seed in range(500):
        p = gen_second_order_problem(seed)
        cert = reduce_problem(p, fuel=FUEL)
        report = validate_reduced_problem(cert)
        assert report.ok, f"seed {seed}:\n{report.render()}"
        checked += 1
    print(f"\nACCEPT reduced-validation: PASS ({checked} reductions)")


def test_criterion_6_solution_transfer(corpus_files):
    """For every corpus problem the bounded lambda oracle solves at its
    annotated bound, the reduced problem is solvable modulo the
    substitution rules at the same bound, and every found solution lifts to
    a solution of the source."""
    start = time.monotonic()
    transferred = 0
    lifted_checked = 0
    for name, pf in corpus_files.items():
        p = pf.problem
        if p.mode is not EqMode.LAMBDA_SIGMA or pf.expect is None:
            continue
        bound = pf.expect.bound
        cfg = SearchConfig(size_bound=bound, fuel=FUEL, find_all=True)
        oracle = decide_small_lambda(p, cfg)
        cert = reduce_problem(p, fuel=FUEL)
        sigma_out = solve_sigma(cert.target, cfg)
        if isinstance(oracle, Solved):
            assert pf.expect.kind == "solvable", name
            assert isinstance(sigma_out, Solved), name
            for theta in sigma_out.solutions:
                lifted = lift_solution(cert, theta)
                assert check_solution(p, lifted, fuel=FUEL), (name, theta)
                lifted_checked += 1
            transferred += 1
        else:
            assert pf.expect.kind == "no-solution", name
            assert isinstance(sigma_out, ExhaustedNoSolution), name
    elapsed = time.monotonic() - start
    assert elapsed < 120.0, f"corpus transfer took {elapsed:.1f}s"
    print(
        f"\nACCEPT solution-transfer: PASS ({transferred} solvable problems, "
        f"{lifted_checked} lifted solutions verified, {elapsed:.1f}s)"
    )


def test_criterion_7_lift_project_round_trip(corpus_files):
    """Project after lift is the identity on target solutions; lift after
    project is the identity on binder-shaped source solutions."""
    targets = 0
    sources = 0
    for name, pf in corpus_files.items():
        p = pf.problem
        if p.mode is not EqMode.LAMBDA_SIGMA or pf.expect is None:
            continue
        if pf.expect.kind != "solvable":
            continue
        bound = pf.expect.bound
        cfg = SearchConfig(size_bound=bound, fuel=FUEL, find_all=True)
        cert = reduce_problem(p, fuel=FUEL)
        sigma_out = solve_sigma(cert.target, cfg)
        assert isinstance(sigma_out, Solved)
        for theta in sigma_out.solutions:
            assert project_solution(cert, lift_solution(cert, theta)) == theta
            targets += 1
        oracle = decide_small_lambda(p, cfg)
        assert isinstance(oracle, Solved)
        arities = {x: n for x, (_, n) in cert.var_map.items()}
        for theta in oracle.solutions:
            if not _binder_shaped(theta, arities):
                continue
            assert lift_solution(cert, project_solution(cert, theta)) == theta
            sources += 1
    assert targets > 0 and sources > 0
    print(
        f"\nACCEPT lift-project-round-trip: PASS "
        f"({targets} target and {sources} source solutions)"
    )


def _binder_shaped(theta: MetaSubst, arities: dict[str, int]) -> bool:
    for name, term in theta.items():
        node = term
        for _ in range(arities.get(name, 0)):
            if not isinstance(node, Lam):
                return False
            node = node.body
    return True


def test_criterion_8_encoding_coherence():
    """Primitive-index normalization equals unit-shift-encoding
    normalization on 2,000 generated terms."""
    for seed in range(2_000):
        _, _, t, _ = gen_checked_term(seed)
        assert normalize_sigma(to_pure_indices(t), fuel=FUEL) == normalize_sigma(
            t, fuel=FUEL
        ), seed
    print("\nACCEPT encoding-coherence: PASS (2000 terms, 100% agreement)")


def test_criterion_9_cli_goldens(tmp_path, corpus_files):
    """Golden outputs match byte for byte; parse/render round-trips hold on
    the corpus."""
    def golden(name):
        return (GOLDENS / name).read_text(encoding="utf-8")

    xc = str(CORPUS / "xc_eq_c.sig")

    reduced_path = tmp_path / "xc_eq_c.reduced.sig"
    status, out = run_command(["reduce", xc, "-o", str(reduced_path)])
    assert (status, out) == (0, golden("reduce_xc_eq_c.txt"))

    status, out = run_command(["solve", str(reduced_path), "--bound", "2", "--all"])
    assert (status, out) == (0, golden("solve_xc_eq_c_reduced.txt"))

    subst_path = tmp_path / "id.subst"
    subst_path.write_text("(subst (?X (lam (x iota) x)))\n", encoding="utf-8")
    status, out = run_command(["verify", xc, str(subst_path)])
    assert (status, out) == (0, golden("verify_xc_eq_c.txt"))

    status, out = run_command(
        ["normalize", xc, "--expr", "(app (lam (x iota) x) c)",
         "--mode", "lambdasigma", "--trace"]
    )
    assert (status, out) == (0, golden("normalize_trace.txt"))

    for name, pf in corpus_files.items():
        again = parse_problem(render_problem(pf))
        assert again.problem == pf.problem, name
        assert again.expect == pf.expect, name

    print("\nACCEPT cli-goldens: PASS (4 goldens byte-identical, corpus round-trip)")

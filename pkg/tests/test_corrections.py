"""Base pair, term evaluation with derivatives, assembly, serialization."""

import pytest
from mpmath import mp, mpf

from fdsl4 import (PrecisionContext, ProblemSpec, QuadratureRule, assemble,
                   base_pair, eval_solution, eval_term, moments, solve)
from fdsl4.corrections import solution_from_payload, solution_to_payload

CTX = PrecisionContext(digits=120)


@pytest.fixture(scope="module")
def x_potential():
    return ProblemSpec.make(1, [0, 1], [0], [0], CTX)


@pytest.fixture(scope="module")
def x_solution(x_potential):
    return solve(x_potential, 1, 6, CTX)


def test_base_eigenvalue_interval5():
    spec = ProblemSpec.make(5, [0, 0], [0], [0], CTX)
    _, lam0 = base_pair(spec, 1, CTX)
    with CTX.workprec():
        assert abs(lam0 - mp.pi ** 4 / 625) < mpf(10) ** -115


def test_base_eigenvalue_n2():
    spec = ProblemSpec.make(1, [0, 0], [0], [0], CTX)
    _, lam0 = base_pair(spec, 2, CTX)
    with CTX.workprec():
        assert abs(lam0 - 16 * mp.pi ** 4) < mpf(10) ** -110


def test_base_normalization():
    spec = ProblemSpec.make(3, [0, 0], [0], [0], CTX)
    term, _ = base_pair(spec, 2, CTX)
    rule = QuadratureRule.build(spec.X, 16, 20, CTX)
    norm = rule.integrate(lambda x: eval_term(term, x, ctx=CTX) ** 2, CTX)
    with CTX.workprec():
        assert abs(norm - 1) < mpf(10) ** -100


def test_base_pair_rejects_bad_index():
    spec = ProblemSpec.make(1, [0, 0], [0], [0], CTX)
    with pytest.raises(ValueError):
        base_pair(spec, 0, CTX)


def test_eval_base_midpoint():
    spec = ProblemSpec.make(1, [0, 0], [0], [0], CTX)
    term, _ = base_pair(spec, 1, CTX)
    with CTX.workprec():
        v = eval_term(term, mpf(1) / 2, ctx=CTX)
        assert abs(v - mp.sqrt(2)) < mpf(10) ** -115


def test_eval_rejects_outside_interval():
    spec = ProblemSpec.make(1, [0, 0], [0], [0], CTX)
    term, _ = base_pair(spec, 1, CTX)
    with pytest.raises(ValueError):
        eval_term(term, 1.5, ctx=CTX)
    with pytest.raises(ValueError):
        eval_term(term, 0.5, 5, ctx=CTX)


def test_fourth_derivative_of_base_is_scaled_base():
    spec = ProblemSpec.make(2, [0, 0], [0], [0], CTX)
    term, lam0 = base_pair(spec, 3, CTX)
    with CTX.workprec():
        for xs in ("0.1", "0.77", "1.9"):
            x = mpf(xs)
            lhs = eval_term(term, x, 4, ctx=CTX)
            rhs = lam0 * eval_term(term, x, ctx=CTX)
            assert abs(lhs - rhs) < mpf(10) ** -100


def test_boundary_conditions_of_computed_terms(x_solution):
    with CTX.workprec():
        tol = mpf(10) ** -(CTX.digits - 20)
        for term in x_solution.terms[1:]:
            for x in (mpf(0), x_solution.X):
                assert abs(eval_term(term, x, 0, ctx=CTX)) < tol
                assert abs(eval_term(term, x, 2, ctx=CTX)) < tol


def test_orthogonality_of_computed_terms(x_potential, x_solution):
    table = moments(1, x_potential.X, x_potential.budget.M(6), CTX)
    base = x_solution.terms[0]
    with CTX.workprec():
        amp = base.a[0]
        tol = mpf(10) ** -(CTX.digits - 20)
        for term in x_solution.terms[1:]:
            # inner product against the base eigenfunction via the moment table
            ip = mpf(0)
            for t, (at, bt) in enumerate(zip(term.a, term.b)):
                ip += table.alpha[t] * at + table.beta[t] * bt
            for t, (ct, dt) in enumerate(zip(term.c, term.d)):
                ip += table.mu[t] * ct + table.eta[t] * dt
            assert abs(amp * ip) < tol


def test_derivative_matches_central_difference(x_solution):
    with CTX.workprec():
        h = mpf(10) ** -10
        for deriv in (1, 2, 3, 4):
            for xs in ("0.31", "0.62"):
                x = mpf(xs)
                term = x_solution.terms[3]
                fd = (eval_term(term, x + h, deriv - 1, ctx=CTX)
                      - eval_term(term, x - h, deriv - 1, ctx=CTX)) / (2 * h)
                exact = eval_term(term, x, deriv, ctx=CTX)
                assert abs(fd - exact) <= abs(exact) * mpf(10) ** -8 + mpf(10) ** -25


def test_reflection_parity_x_potential(x_potential):
    # q0 = x on [0,1]: reflecting x -> 1-x flips the sign of every other
    # correction; which steps flip depends on the parity of n
    for n, sign_even_step, sign_odd_step in ((1, 1, -1), (2, -1, 1)):
        sol = solve(x_potential, n, 5, CTX)
        with CTX.workprec():
            tol = mpf(10) ** -(CTX.digits - 25)
            for j, term in enumerate(sol.terms):
                sign = sign_even_step if j % 2 == 0 else sign_odd_step
                for xs in ("0.13", "0.39", "0.41"):
                    x = mpf(xs)
                    left = eval_term(term, 1 - x, ctx=CTX)
                    right = sign * eval_term(term, x, ctx=CTX)
                    assert abs(left - right) < tol


def test_assemble_rank0(x_solution):
    sol0 = assemble(x_solution.terms, (x_solution.lambda0,) + x_solution.lambda_corrections,
                    0, CTX)
    assert sol0.m == 0
    assert sol0.lambda_approx == sol0.lambda0
    assert sol0.lambda_corrections == ()


def test_assemble_rank1_is_base_plus_half(x_solution):
    sol1 = assemble(x_solution.terms, (x_solution.lambda0,) + x_solution.lambda_corrections,
                    1, CTX)
    with CTX.workprec():
        assert abs(sol1.lambda_approx - (mp.pi ** 4 + mpf(1) / 2)) < mpf(10) ** -110


def test_assemble_requires_enough_entries(x_solution):
    with pytest.raises(ValueError):
        assemble(x_solution.terms[:2], (x_solution.lambda0,), 3, CTX)


def test_eval_solution_sums_terms(x_solution):
    with CTX.workprec():
        x = mpf("0.37")
        total = eval_solution(x_solution, x, ctx=CTX)
        by_hand = sum(eval_term(t, x, ctx=CTX) for t in x_solution.terms)
        assert abs(total - by_hand) < mpf(10) ** -110


def test_serialization_roundtrip(x_solution):
    payload = solution_to_payload(x_solution, CTX)
    back = solution_from_payload(payload)
    assert back.n == x_solution.n and back.m == x_solution.m
    with CTX.workprec():
        assert back.lambda_approx == x_solution.lambda_approx
        for t1, t2 in zip(back.terms, x_solution.terms):
            assert t1.a == t2.a and t1.b == t2.b
            assert t1.c == t2.c and t1.d == t2.d
    # payload reals are decimal strings
    assert isinstance(payload["lambda_approx"], str)

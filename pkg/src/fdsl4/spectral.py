"""Moment integrals, eigenvalue corrections, and the full solve loop.

The closure and the eigenvalue corrections need the integrals over [0, X] of
x^t against sin^2(w x), sin(w x) cos(w x), sin(w x) cosh(w x) and
sin(w x) sinh(w x) with w = pi n / X.  All four have closed forms built from
factorials, powers of 2 pi n (or sqrt(2) pi n) and exact quarter/eighth-period
trigonometric values, so a :class:`MomentTable` is filled once per (n, rank)
and shared read-only by every step.

The eigenvalue correction for step j+1 is the inner product of the step-j
correction, pushed through the potential part of the operator, with the base
eigenfunction; expanding in the mixed basis turns it into six finite double
sums over the moment table.  It must be computed before the step-(j+1)
right-hand side, which consumes it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from mpmath import mp, mpf

from . import recursion
from .corrections import CorrectionTerm, FDSolution, assemble, base_pair
from .numerics import PrecisionContext
from .problem import ProblemSpec
from .rhs import build_rhs


@dataclass(frozen=True)
class MomentTable:
    """Cached integrals, indexed by the power t = 0..T."""

    n: int
    X: mpf
    alpha: tuple  # integral of x^t sin^2(w x)
    beta: tuple   # integral of x^t sin(w x) cos(w x)
    eta: tuple    # integral of x^t sin(w x) cosh(w x)
    mu: tuple     # integral of x^t sin(w x) sinh(w x)


# exact values of sin(pi k/2), cos(pi k/2) and sin/cos(pi (k+1)/4) by residue
_SIN_HALF = (0, 1, 0, -1)
_COS_HALF = (1, 0, -1, 0)


def moments(n: int, X, T: int, ctx: PrecisionContext) -> MomentTable:
    """Fill the moment table for powers 0..T."""
    if n < 1:
        raise ValueError("eigenpair index must be >= 1")
    with ctx.workprec():
        X = mpf(X)
        pn = mp.pi * n
        two_pn = 2 * pn
        s2pn = mp.sqrt(2) * pn
        cos_pn = mpf(-1) ** n
        ch, sh = mp.cosh(pn), mp.sinh(pn)
        half = mp.sqrt(2) / 2
        cos_q = (half, 0, -half, -1, -half, 0, half, 1)   # cos(pi (k+1)/4)
        sin_q = (half, 1, half, 0, -half, -1, -half, 0)   # sin(pi (k+1)/4)

        fact = [mpf(1)]
        for t in range(1, T + 2):
            fact.append(fact[-1] * t)

        alpha, beta, eta, mu = [], [], [], []
        for t in range(T + 1):
            Xp = X ** (t + 1)
            ft = fact[t]
            a = Xp / (2 * (t + 1))
            b = mpf(0)
            for k in range(t):
                c = ft * Xp / (fact[t - k] * two_pn ** (k + 1))
                a -= c * _SIN_HALF[k % 4] / 2
                b -= c * _COS_HALF[k % 4] / 2
            alpha.append(a)
            beta.append(b)

            lead = Xp * ft / s2pn ** (t + 1)
            e = lead * _COS_HALF[t % 4] * cos_q[t % 8]
            u = -lead * _SIN_HALF[t % 4] * sin_q[t % 8]
            for k in range(t + 1):
                pref = ft * Xp * cos_pn / (fact[t - k] * s2pn ** (k + 1))
                pc = cos_q[k % 8] * _COS_HALF[k % 4]
                ps = sin_q[k % 8] * _SIN_HALF[k % 4]
                e -= pref * (pc * ch - ps * sh)
                u += pref * (ps * ch - pc * sh)
            eta.append(e)
            mu.append(u)
        return MomentTable(n=n, X=X, alpha=tuple(alpha), beta=tuple(beta),
                           eta=tuple(eta), mu=tuple(mu))


@dataclass
class History:
    """Ordered eigenvalue values (base first) and correction terms so far.

    The eigenvalue list may run one step ahead of the terms: the correction
    for step j+1 is fixed by solvability before its term is constructed.
    """

    lambdas: list = field(default_factory=list)
    terms: list = field(default_factory=list)

    def append_lambda(self, value) -> None:
        self.lambdas.append(value)

    def append_term(self, term: CorrectionTerm) -> None:
        if term.j != len(self.terms):
            raise ValueError(f"expected term for step {len(self.terms)}, got {term.j}")
        self.terms.append(term)


def lambda_correction(j: int, n: int, spec: ProblemSpec, history: History,
                      table: MomentTable, ctx: PrecisionContext) -> mpf:
    """Eigenvalue correction for step j+1 from the step-j term.

    Six double sums pair the step-j coefficient arrays, shifted by the
    derivative order of each potential product, against the moment table.
    """
    budget = spec.budget
    r = budget.r
    M1, M0, Mm1 = budget.M(j + 1), budget.M(j), budget.M(j - 1)
    term = history.terms[j]
    a, b, c, d = term.a, term.b, term.c, term.d
    alpha, beta, eta, mu = table.alpha, table.beta, table.eta, table.mu
    with ctx.workprec():
        w = mp.pi * n / spec.X
        w2 = w * w
        A = list(spec.q0.coeffs) + [mpf(0)] * (r + 1 - len(spec.q0.coeffs))
        B = list(spec.q1.coeffs) + [mpf(0)] * (r + 1 - len(spec.q1.coeffs))
        C = list(spec.q2.coeffs) + [mpf(0)] * (r + 1 - len(spec.q2.coeffs))
        tot = mpf(0)
        for t in range(M1):
            for l in range(max(0, t - M0), min(r, t) + 1):
                tot += w * B[l] * (beta[t] * a[t - l] - alpha[t] * b[t - l])
                tot -= (beta[t] * b[t - l] + alpha[t] * a[t - l]) * (C[l] * w2 - A[l])
        for t in range(M1 - 1):
            for l in range(max(0, t - M0 + 1), min(r, t) + 1):
                q = t - l + 1
                tot += q * (B[l] * (beta[t] * b[q] + alpha[t] * a[q])
                            + 2 * w * C[l] * (beta[t] * a[q] - alpha[t] * b[q]))
        for t in range(M1 - 2):
            for l in range(max(0, t - M0 + 2), min(r, t) + 1):
                q = t - l + 2
                tot += q * (q - 1) * C[l] * (beta[t] * b[q] + alpha[t] * a[q])
        for t in range(max(0, M0)):
            for l in range(max(0, t - Mm1), min(r, t) + 1):
                tot += w * B[l] * (eta[t] * c[t - l] + mu[t] * d[t - l])
                tot += (eta[t] * d[t - l] + mu[t] * c[t - l]) * (A[l] + w2 * C[l])
        for t in range(max(0, M0 - 1)):
            for l in range(max(0, t - Mm1 + 1), min(r, t) + 1):
                q = t - l + 1
                tot += q * (B[l] * (eta[t] * d[q] + mu[t] * c[q])
                            + 2 * w * C[l] * (eta[t] * c[q] + mu[t] * d[q]))
        for t in range(max(0, M0 - 2)):
            for l in range(max(0, t - Mm1 + 2), min(r, t) + 1):
                q = t - l + 2
                tot += q * (q - 1) * C[l] * (eta[t] * d[q] + mu[t] * c[q])
        return mp.sqrt(2 / spec.X) * tot


def solve(spec: ProblemSpec, n: int, m: int, ctx: PrecisionContext) -> FDSolution:
    """Rank-m approximation to eigenpair n.

    Stages per step j = 0..m-1: eigenvalue correction (solvability), grouped
    right-hand side, closed-form top coefficients, downward recurrence,
    power-0 closure, term assembly.  Steps are inherently sequential;
    different n are independent.
    """
    if n < 1:
        raise ValueError("eigenpair index must be >= 1")
    if m < 0:
        raise ValueError("rank must be >= 0")
    term0, lam0 = base_pair(spec, n, ctx)
    history = History(lambdas=[lam0], terms=[term0])
    table = moments(n, spec.X, spec.budget.M(m) + spec.budget.r + 1, ctx)
    for j in range(m):
        history.append_lambda(lambda_correction(j, n, spec, history, table, ctx))
        step_rhs = build_rhs(spec, n, j, history, ctx)
        a, b, c, d = recursion.solve_step(spec, n, j, step_rhs, table, ctx)
        history.append_term(CorrectionTerm(j=j + 1, n=n, X=spec.X,
                                           a=a, b=b, c=c, d=d))
    return assemble(history.terms, history.lambdas, m, ctx)


def x_potential_second_correction(n: int, ctx: PrecisionContext) -> mpf:
    """Closed-form second eigenvalue correction for q0 = x on [0, 1].

    For that problem the correction series is known in closed form through
    the second step:

        1/(32 (n pi)^4) - 5/(32 (n pi)^6)
        + (cos(pi n) - cosh(pi n)) / (2 (n pi)^7 sinh(pi n)).

    Used as an independent cross-check of the recursion machinery.
    """
    with ctx.workprec():
        pn = mp.pi * n
        return (1 / (32 * pn ** 4) - 5 / (32 * pn ** 6)
                + (mp.cos(pn) - mp.cosh(pn)) / (2 * pn ** 7 * mp.sinh(pn)))

"""A-priori convergence diagnostics for the correction series.

The correction norms obey a convolution-type majorant recurrence whose
solution is the Catalan sequence, so the series converges once the
contraction constant M_n satisfies r_n = 4 M_n < 1.  The constant scales the
potential-size number omega by interval and index factors; it shrinks like
1/n, which is why high eigenpairs converge fastest.  The sufficient condition
is rough: benchmark runs converge well below the certified threshold, so a
failed check is reported as "condition not met", never as divergence.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from mpmath import mp, mpf

from .numerics import PrecisionContext
from .problem import ProblemSpec, omega


@dataclass(frozen=True)
class ConvergenceReport:
    """Diagnostics for one eigenpair index."""

    n: int
    X: mpf
    omega: mpf
    M_n: mpf
    r_n: mpf
    converges: bool  # sufficient condition r_n < 1
    digits: int

    def _ctx(self) -> PrecisionContext:
        return PrecisionContext(digits=self.digits)

    def lambda_bound(self, m: int):
        """A-priori bound on |lambda_n - rank-m eigenvalue|, or None.

        None when the sufficient condition fails or m < 1 (the bound's
        denominator degenerates at m = 0).
        """
        if not self.converges or m < 1:
            return None
        ctx = self._ctx()
        with ctx.workprec():
            w = mp.pi * self.n / self.X
            front = self.omega * mp.sqrt(2 / self.X) * (w ** 2 + w + 1)
            return front * self.r_n ** m / ((1 - self.r_n) * (m + 1) * mp.sqrt(mp.pi * m))

    def u_bound(self, m: int):
        """A-priori bound on the L2 eigenfunction error, or None."""
        if not self.converges or m < 1:
            return None
        ctx = self._ctx()
        with ctx.workprec():
            return self.r_n ** (m + 1) / ((m + 2) * mp.sqrt(mp.pi * (m + 1)))


def constant_Mn(spec: ProblemSpec, n: int, ctx: PrecisionContext) -> mpf:
    """Contraction constant M_n of the majorant recurrence.

    M_n = (X^2/pi^2) * omega/(2n^2-2n+1) * [n + X/pi + X^2/(n pi^2)] * max(1, 2/X).
    """
    if n < 1:
        raise ValueError("eigenpair index must be >= 1")
    with ctx.workprec():
        X = spec.X
        om = omega(spec, ctx)
        bracket = n + X / mp.pi + X ** 2 / (n * mp.pi ** 2)
        return (X ** 2 / mp.pi ** 2) * om / (2 * n * n - 2 * n + 1) * bracket \
            * max(mpf(1), 2 / X)


def majorant(j: int) -> int:
    """Exact integer majorant value for step j+1: (2j+2)!/((j+1)!(j+2)!).

    These are the Catalan numbers; they solve the convolution recurrence
    satisfied by the normalized correction norms.
    """
    if j < 0:
        raise ValueError("step index must be >= 0")
    return comb(2 * j + 2, j + 1) // (j + 2)


def correction_envelope(report: ConvergenceReport, j: int) -> mpf:
    """Bound on |lambda^(j+1)| from the majorant chain (double factorials)."""
    ctx = report._ctx()
    with ctx.workprec():
        w = mp.pi * report.n / report.X
        front = report.omega * mp.sqrt(2 / report.X) * (w ** 2 + w + 1)
        # 2 (2j-1)!! / (2j+2)!! via exact integers
        num = 1
        for k in range(2 * j - 1, 0, -2):
            num *= k
        den = 1
        for k in range(2 * j + 2, 0, -2):
            den *= k
        return front * report.r_n ** j * 2 * mpf(num) / mpf(den)


def convergence_report(spec: ProblemSpec, n: int, ctx: PrecisionContext) -> ConvergenceReport:
    with ctx.workprec():
        om = omega(spec, ctx)
        Mn = constant_Mn(spec, n, ctx)
        rn = 4 * Mn
        return ConvergenceReport(n=n, X=spec.X, omega=om, M_n=Mn, r_n=rn,
                                 converges=bool(rn < 1), digits=ctx.digits)


def error_bounds(report: ConvergenceReport, m: int):
    """(eigenvalue bound, eigenfunction bound) for rank m, or None.

    None signals "sufficient condition not met" (or m = 0); the method may
    still converge, the certificate just does not apply.
    """
    lb = report.lambda_bound(m)
    ub = report.u_bound(m)
    if lb is None or ub is None:
        return None
    return lb, ub

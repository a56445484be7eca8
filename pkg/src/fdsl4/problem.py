"""Problem definition: interval, polynomial potentials and derived constants.

The eigenproblem solved by this package is

    u''''(x) + q2(x) u''(x) + q1(x) u'(x) + (q0(x) - lambda) u(x) = 0

on (0, X) with hinged boundary conditions u = u'' = 0 at both ends, where
q0, q1, q2 are real polynomials of degree at least one (constants are stored
zero-padded to degree one so the step-size bookkeeping r = max degree stays
uniform).

A problem can be built in code or parsed from a small key-value config file::

    # benchmark problem
    X  = 5
    q0 = [-0.02, 0, 0, 0, 0.0001]   # coefficients, lowest degree first
    q1 = [0, -0.04]
    q2 = [0, 0, -0.02]

Coefficient entries are decimal strings parsed at the full precision of the
supplied context, so a config round-trips bit-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from mpmath import mp, mpf

from .numerics import PrecisionContext

GRID_POINTS_PER_DEGREE = 64  # sup-norm scan density


class ProblemFormatError(ValueError):
    """Malformed problem config; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class Polynomial:
    """Dense real polynomial; coeffs[k] multiplies x**k.

    Trailing zeros are allowed and meaningful: the stored length fixes the
    tracked degree, which feeds the step-size bookkeeping.
    """

    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("polynomial needs at least one coefficient")

    @classmethod
    def from_values(cls, values: Sequence, ctx: PrecisionContext) -> "Polynomial":
        with ctx.workprec():
            return cls(tuple(mpf(v) for v in values))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


def poly_eval(p: Polynomial, x) -> mpf:
    """Horner evaluation at the current working precision."""
    acc = mpf(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def poly_derivative(p: Polynomial, order: int = 1) -> Polynomial:
    """Exact derivative of order 1 or 2 (coefficient shift and scale)."""
    if order not in (1, 2):
        raise ValueError("derivative order must be 1 or 2")
    coeffs = p.coeffs
    for _ in range(order):
        coeffs = tuple(coeffs[k] * k for k in range(1, len(coeffs))) or (mpf(0),)
    return Polynomial(coeffs)


def _poly_sub_scaled(p: Polynomial, q: Polynomial, scale) -> Polynomial:
    """scale*p - q, padded to the longer length."""
    n = max(len(p.coeffs), len(q.coeffs))
    out = []
    for k in range(n):
        a = p.coeffs[k] if k < len(p.coeffs) else mpf(0)
        b = q.coeffs[k] if k < len(q.coeffs) else mpf(0)
        out.append(scale * a - b)
    return Polynomial(tuple(out))


def sup_norm(p: Polynomial, X, ctx: PrecisionContext) -> mpf:
    """max of |p| over [0, X].

    Scans a dense grid (64 points per degree, endpoints included), then
    refines the best bracket by golden-section search to ~1e-15 relative.
    That is far more accuracy than the convergence diagnostics consuming
    this value can use.
    """
    with ctx.workprec():
        X = mpf(X)
        if X <= 0:
            raise ValueError("interval length must be positive")
        npts = GRID_POINTS_PER_DEGREE * (p.degree + 1) + 1
        h = X / (npts - 1)
        values = [abs(poly_eval(p, k * h)) for k in range(npts)]
        best = max(range(npts), key=lambda k: values[k])
        lo = max(best - 1, 0) * h
        hi = min(best + 1, npts - 1) * h
        # golden-section maximization of |p| on [lo, hi]
        invphi = (mp.sqrt(5) - 1) / 2
        a, b = lo, hi
        c = b - invphi * (b - a)
        d = a + invphi * (b - a)
        fc, fd = abs(poly_eval(p, c)), abs(poly_eval(p, d))
        tol = mpf("1e-15") * X
        while b - a > tol:
            if fc > fd:
                b, d, fd = d, c, fc
                c = b - invphi * (b - a)
                fc = abs(poly_eval(p, c))
            else:
                a, c, fc = c, d, fd
                d = a + invphi * (b - a)
                fd = abs(poly_eval(p, d))
        return max(values[best], fc, fd)


@dataclass(frozen=True)
class StepBudget:
    """Sizes of the coefficient arrays: step j contributes M(j) = j*(r+1) powers."""

    r: int

    def M(self, j: int) -> int:
        return j * (self.r + 1)


@dataclass(frozen=True)
class ProblemSpec:
    """Interval length X and the three polynomial potentials."""

    X: mpf
    q0: Polynomial
    q1: Polynomial
    q2: Polynomial

    def __post_init__(self):
        if not self.X > 0:
            raise ValueError("interval length X must be positive")
        for name in ("q0", "q1", "q2"):
            if getattr(self, name).degree < 1:
                raise ValueError(f"{name} must be stored with degree >= 1 "
                                 "(pad constants with an explicit zero)")

    @classmethod
    def make(cls, X, q0: Sequence, q1: Sequence, q2: Sequence,
             ctx: PrecisionContext) -> "ProblemSpec":
        """Build a spec from raw coefficient lists, zero-padding to degree 1."""
        def poly(values):
            vals = list(values) if len(values) else [0]
            while len(vals) < 2:
                vals.append(0)
            return Polynomial.from_values(vals, ctx)

        return cls(X=ctx.mpf(X), q0=poly(q0), q1=poly(q1), q2=poly(q2))

    @property
    def budget(self) -> StepBudget:
        return StepBudget(r=max(self.q0.degree, self.q1.degree, self.q2.degree))


def omega(spec: ProblemSpec, ctx: PrecisionContext) -> mpf:
    """Potential-size constant feeding the convergence diagnostics.

    omega = max( sup|2*q2' - q1| , sup|q2'' - q1' + q0| ) over [0, X].
    With zero potentials this is zero, and it vanishes exactly when every
    correction past the base eigenpair vanishes.
    """
    with ctx.workprec():
        d1 = _poly_sub_scaled(poly_derivative(spec.q2, 1), spec.q1, mpf(2))
        q2pp = poly_derivative(spec.q2, 2)
        q1p = poly_derivative(spec.q1, 1)
        d2 = _poly_sub_scaled(q2pp, _poly_sub_scaled(q1p, spec.q0, mpf(1)), mpf(1))
        return max(sup_norm(d1, spec.X, ctx), sup_norm(d2, spec.X, ctx))


def parse_problem(text: str, ctx: PrecisionContext) -> ProblemSpec:
    """Parse the key-value config format documented in the module docstring."""
    fields: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ProblemFormatError("expected 'key = value'", lineno)
        key, _, value = line.partition("=")
        key = key.strip().lower()
        value = value.strip()
        if key == "x":
            try:
                fields["X"] = ctx.mpf(value)
            except ValueError:
                raise ProblemFormatError(f"bad number {value!r} for X", lineno) from None
        elif key in ("q0", "q1", "q2"):
            if not (value.startswith("[") and value.endswith("]")):
                raise ProblemFormatError(f"{key} must be a [..] coefficient list", lineno)
            body = value[1:-1].strip()
            items = [s.strip() for s in body.split(",")] if body else []
            try:
                fields[key] = [ctx.mpf(s) for s in items]
            except ValueError:
                raise ProblemFormatError(f"bad coefficient in {key}", lineno) from None
        else:
            raise ProblemFormatError(f"unknown key {key!r}", lineno)
    for required in ("X", "q0", "q1", "q2"):
        if required not in fields:
            raise ProblemFormatError(f"missing key {required!r}")
    return ProblemSpec.make(fields["X"], fields["q0"], fields["q1"], fields["q2"], ctx)


def load_problem(path, ctx: PrecisionContext) -> ProblemSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_problem(fh.read(), ctx)

"""Quantum-calculus primitives on an interval [a, b].

The q-derivative is the difference quotient

    D_q^a f(x) = (f(x) - f(a + q(x - a))) / ((1 - q)(x - a)),

and the Jackson integral samples ``f`` only on the geometric lattice
``a + q^k (x - a)``, k = 0, 1, 2, ...:

    int_a^x f(t) d_q^a t = (1 - q)(x - a) sum_k q^k f(a + q^k (x - a)).

The infinite series are truncated by :class:`SeriesControl`. Two classical
oracles (central differences and composite Simpson) are provided for the
q -> 1 limit checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from qmont.errors import ConvergenceError, DomainError, EvalError


@dataclass(frozen=True)
class QContext:
    """Deformation parameter ``q`` and interval ``[a, b]``."""

    q: float
    a: float
    b: float

    def __post_init__(self) -> None:
        for name in ("q", "a", "b"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise DomainError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        if not 0.0 < self.q < 1.0:
            raise DomainError(f"q must satisfy 0 < q < 1, got {self.q!r}")
        if not self.a < self.b:
            raise DomainError(f"need a < b, got a={self.a!r}, b={self.b!r}")

    @property
    def width(self) -> float:
        return self.b - self.a


@dataclass(frozen=True)
class RealFn:
    """A real function of one variable with a label for reports.

    Calling it converts math domain failures and non-finite results into
    :class:`EvalError` so that nothing downstream sees a silent NaN.
    """

    fn: Callable[[float], float]
    label: str = "f"

    def __call__(self, x: float) -> float:
        try:
            y = self.fn(x)
        except EvalError:
            raise
        except (ValueError, ZeroDivisionError, OverflowError) as exc:
            raise EvalError(f"{self.label}({x!r}): {exc}") from exc
        try:
            y = float(y)
        except (TypeError, ValueError) as exc:
            raise EvalError(f"{self.label}({x!r}) is not a real number") from exc
        if not math.isfinite(y):
            raise EvalError(f"{self.label}({x!r}) is not finite")
        return y


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy for the infinite q-series.

    A series stops once ``consecutive_small`` successive terms fall below
    ``tol * (1 - q)`` in magnitude; ``max_terms`` is a hard cap.
    ``compensated`` switches plain accumulation to Neumaier summation.
    """

    tol: float = 1e-12
    max_terms: int = 1_000_000
    consecutive_small: int = 3
    compensated: bool = False

    def __post_init__(self) -> None:
        if not (math.isfinite(self.tol) and self.tol > 0):
            raise DomainError(f"tol must be positive and finite, got {self.tol!r}")
        if isinstance(self.max_terms, bool) or not isinstance(self.max_terms, int) or self.max_terms < 1:
            raise DomainError(f"max_terms must be an integer >= 1, got {self.max_terms!r}")
        if (
            isinstance(self.consecutive_small, bool)
            or not isinstance(self.consecutive_small, int)
            or self.consecutive_small < 1
        ):
            raise DomainError(f"consecutive_small must be an integer >= 1, got {self.consecutive_small!r}")


DEFAULT_CONTROL = SeriesControl()


@dataclass(frozen=True)
class SeriesResult:
    value: float
    terms_used: int
    tail_estimate: float
    converged: bool


def sum_q_series(
    term: Callable[[int, float], float],
    q: float,
    control: SeriesControl,
    min_terms: int = 0,
) -> SeriesResult:
    """Sum ``term(k, q**k)`` for k = 0, 1, ... under ``control``.

    Stopping is never allowed before ``min_terms`` terms have been added.
    """
    threshold = control.tol * (1.0 - q)
    total = 0.0
    carry = 0.0
    small_run = 0
    last = 0.0
    k = 0
    converged = False
    while k < control.max_terms:
        # q**k per term rounds once; repeated multiplication drifts by k ulps
        last = term(k, q**k)
        if control.compensated:
            t = total + last
            if abs(total) >= abs(last):
                carry += (total - t) + last
            else:
                carry += (last - t) + total
            total = t
        else:
            total += last
        k += 1
        if abs(last) < threshold:
            small_run += 1
            if small_run >= control.consecutive_small and k >= min_terms:
                converged = True
                break
        else:
            small_run = 0
    return SeriesResult(total + carry, k, abs(last) * q / (1.0 - q), converged)


def _dq(f: RealFn, q: float, a: float, x: float) -> float:
    # callers guarantee x > a; the product can still underflow for x next to a
    denom = (1.0 - q) * (x - a)
    if denom == 0.0:
        raise DomainError(f"q-derivative denominator underflows at x={x!r} next to a={a!r}")
    return (f(x) - f(a + q * (x - a))) / denom


def q_derivative(f: RealFn, ctx: QContext, x: float) -> float:
    """q-derivative of ``f`` at ``a < x <= b``."""
    if not (ctx.a < x <= ctx.b):
        raise DomainError(f"q-derivative needs a < x <= b, got x={x!r} on [{ctx.a!r}, {ctx.b!r}]")
    return _dq(f, ctx.q, ctx.a, x)


def q_derivative_at_a(f: RealFn, ctx: QContext, control: SeriesControl = DEFAULT_CONTROL) -> float:
    """Value of D_q^a f at the left endpoint, as a limit along the q-lattice.

    Evaluates the quotient at ``a + (b - a) q^j`` for j = 1, 2, ... and
    returns the last iterate once ``control.consecutive_small`` successive
    differences are below ``control.tol``.

    Raises:
        ConvergenceError: if the iterates do not settle within
            ``control.max_terms`` steps or the lattice collapses onto ``a``
            in floating point first.
    """
    q, a, width = ctx.q, ctx.a, ctx.width
    pj = q
    prev = None
    small_run = 0
    for j in range(1, control.max_terms + 1):
        x = a + width * pj
        if not (1.0 - q) * (x - a) > 0.0:
            raise ConvergenceError(
                f"D_q f({a!r}) limit for {f.label}: node sequence reached a after {j - 1} steps without settling"
            )
        cur = _dq(f, q, a, x)
        if prev is not None and abs(cur - prev) < control.tol:
            small_run += 1
            if small_run >= control.consecutive_small:
                return cur
        else:
            small_run = 0
        prev = cur
        pj *= q
    raise ConvergenceError(f"D_q f({a!r}) limit for {f.label}: no convergence within {control.max_terms} iterations")


def jackson_integral(
    f: RealFn, ctx: QContext, x: float, control: SeriesControl = DEFAULT_CONTROL
) -> SeriesResult:
    """Jackson q-integral of ``f`` over ``[a, x]``.

    Returns ``converged=False`` rather than raising when the term cap is hit.
    """
    if not (ctx.a <= x <= ctx.b):
        raise DomainError(f"Jackson integral needs a <= x <= b, got x={x!r} on [{ctx.a!r}, {ctx.b!r}]")
    if x == ctx.a:
        return SeriesResult(0.0, 0, 0.0, True)
    q, a = ctx.q, ctx.a
    h = x - a
    scale = (1.0 - q) * h

    def term(k: int, qk: float) -> float:
        node = x if k == 0 else a + qk * h
        return scale * qk * f(node)

    return sum_q_series(term, q, control)


def jackson_integral_sub(
    f: RealFn, ctx: QContext, c: float, x: float, control: SeriesControl = DEFAULT_CONTROL
) -> SeriesResult:
    """q-integral over ``[c, x]`` defined as the difference of two integrals from ``a``.

    The result depends on ``f`` below ``c`` too: both lattices accumulate at ``a``.
    """
    if not (ctx.a < c < x <= ctx.b):
        raise DomainError(f"need a < c < x <= b, got c={c!r}, x={x!r} on [{ctx.a!r}, {ctx.b!r}]")
    upper = jackson_integral(f, ctx, x, control)
    lower = jackson_integral(f, ctx, c, control)
    return SeriesResult(
        value=upper.value - lower.value,
        terms_used=max(upper.terms_used, lower.terms_used),
        tail_estimate=upper.tail_estimate + lower.tail_estimate,
        converged=upper.converged and lower.converged,
    )


def classical_derivative_fd(f: RealFn, x: float, h: float) -> float:
    """Central difference ``(f(x + h) - f(x - h)) / 2h``."""
    if not h > 0:
        raise DomainError(f"step h must be positive, got {h!r}")
    return (f(x + h) - f(x - h)) / (2.0 * h)


def riemann_integral_oracle(f: RealFn, a: float, x: float, n: int) -> float:
    """Composite Simpson rule for ``int_a^x f`` with ``n`` (even) panels."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 2 or n % 2:
        raise DomainError(f"Simpson rule needs a positive even panel count, got {n!r}")
    if not a < x:
        raise DomainError(f"need a < x, got a={a!r}, x={x!r}")
    h = (x - a) / n
    total = f(a) + f(x)
    for i in range(1, n):
        total += (4.0 if i % 2 else 2.0) * f(a + i * h)
    return total * h / 3.0

"""Quantum Montgomery identity: kernel, node projection and residual checks.

With the kernel

    K(t) = q t       for 0 <= t <= (x - a)/(b - a),
    K(t) = q t - 1   for (x - a)/(b - a) < t <= 1,

the right-hand side

    (b - a) int_0^1 K(t) D_q^a f(tb + (1 - t)a) d_q^0 t
        = (b - a)(1 - q) sum_k q^k K(q^k) D_q^a f(a + q^k (b - a))

equals ``f(node) - avg`` where ``avg`` is the q-average of ``f`` over
[a, b] and ``node = a + q^(m+1)(b - a)`` is the lattice point obtained from
``x`` by rounding its ratio ``(x - a)/(b - a)`` down onto ``{q^k}``. The
same right-hand side is *not* ``f(x) - avg`` unless ``x`` is itself a node;
:func:`check_identity` measures both residuals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from qmont.errors import CapError, DomainError, QMontError
from qmont.qcore import (
    DEFAULT_CONTROL,
    QContext,
    RealFn,
    SeriesControl,
    SeriesResult,
    _dq,
    jackson_integral,
    q_derivative,
    q_derivative_at_a,
    sum_q_series,
)

# ratios within this relative distance below a lattice power count as that power
NODE_TIE_RTOL = 1e-12
# plus this many ulps of x, the rounding already carried by x - a near a != 0
NODE_TIE_ULPS = 4


@dataclass(frozen=True)
class NodeIndex:
    """Lattice index with q^(m+1) <= (x - a)/(b - a) < q^m."""

    m: int
    # q^(m+1) as produced by repeated multiplication
    power: float


@dataclass(frozen=True)
class IdentityReport:
    x: float
    node: float
    avg_integral: float
    lhs_original: float
    lhs_corrected: float
    rhs: float
    residual_original: float
    residual_corrected: float
    series: SeriesResult
    avg_series: SeriesResult
    tol: float = DEFAULT_CONTROL.tol

    @property
    def converged(self) -> bool:
        return self.series.converged and self.avg_series.converged

    @property
    def tolerance(self) -> float:
        """Pass/fail budget for a residual: 100 times the larger tail estimate or tol."""
        return 100.0 * max(self.series.tail_estimate, self.avg_series.tail_estimate, self.tol)

    @property
    def corrected_holds(self) -> bool:
        return abs(self.residual_corrected) <= self.tolerance

    @property
    def original_holds(self) -> bool:
        return abs(self.residual_original) <= self.tolerance


@dataclass(frozen=True)
class PointFailure:
    """Placeholder left in a scan where one x could not be evaluated."""

    x: float
    error: str


@dataclass(frozen=True)
class ConvexityReport:
    r: float
    t_grid: list[float]
    corrected_violations: list[tuple[float, float, float]] = field(default_factory=list)
    erroneous_violations: list[tuple[float, float, float]] = field(default_factory=list)
    deriv_a: float = 0.0
    deriv_b: float = 0.0


def _ratio(ctx: QContext, x: float) -> float:
    if not (ctx.a < x < ctx.b):
        raise DomainError(f"x must lie strictly inside ({ctx.a!r}, {ctx.b!r}), got {x!r}")
    return (x - ctx.a) / ctx.width


def kernel_eval(ctx: QContext, x: float, t: float) -> float:
    """Montgomery kernel at ``t``; the breakpoint itself takes the ``q t`` branch."""
    ratio = _ratio(ctx, x)
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"kernel argument must lie in [0, 1], got {t!r}")
    if t <= ratio:
        return ctx.q * t
    return ctx.q * t - 1.0


def tie_slack(ctx: QContext, x: float) -> float:
    """Absolute ratio slack from the representation error of ``x``."""
    return NODE_TIE_ULPS * math.ulp(max(abs(x), abs(ctx.a))) / ctx.width


def m_index(ctx: QContext, x: float, max_terms: int = DEFAULT_CONTROL.max_terms) -> NodeIndex:
    """Smallest m >= 0 with q^(m+1) <= (x - a)/(b - a), by repeated multiplication.

    A floating logarithm misplaces exact nodes, so powers are stepped down
    one at a time. Ratios up to ``NODE_TIE_RTOL`` (relative) or
    ``NODE_TIE_ULPS`` ulps of ``x`` below a power are snapped onto it.
    """
    ratio = _ratio(ctx, x)
    target = ratio * (1.0 + NODE_TIE_RTOL) + tie_slack(ctx, x)
    q = ctx.q
    power = q
    m = 0
    while power > target:
        power *= q
        m += 1
        if m > max_terms:
            raise CapError(f"x={x!r} is too close to a={ctx.a!r}: lattice index exceeds {max_terms}")
    return NodeIndex(m, power)


def q_node(ctx: QContext, x: float) -> float:
    """Project ``x`` onto the lattice point ``a + q^(m+1)(b - a)``."""
    return ctx.a + m_index(ctx, x).power * ctx.width


def montgomery_rhs(
    f: RealFn, ctx: QContext, x: float, control: SeriesControl = DEFAULT_CONTROL
) -> SeriesResult:
    """Kernel-weighted q-integral of D_q^a f, summed on the lattice.

    The kernel branch at q^k is picked by comparing k with m, never by
    comparing q^k with the ratio in floating point.
    """
    m = m_index(ctx, x, control.max_terms).m
    q, a, b, width = ctx.q, ctx.a, ctx.b, ctx.width
    scale = width * (1.0 - q)

    def term(k: int, qk: float) -> float:
        node = b if k == 0 else a + qk * width
        kern = q * qk - 1.0 if k <= m else q * qk
        return scale * qk * kern * _dq(f, q, a, node)

    # the -1 branch must be fully summed before the tail test may stop the series
    return sum_q_series(term, q, control, min_terms=m + 1)


def _avg(f: RealFn, ctx: QContext, control: SeriesControl) -> SeriesResult:
    return jackson_integral(f, ctx, ctx.b, control)


def original_lhs(f: RealFn, ctx: QContext, x: float, control: SeriesControl = DEFAULT_CONTROL) -> float:
    """``f(x)`` minus the q-average of ``f`` over [a, b]."""
    _ratio(ctx, x)
    return f(x) - _avg(f, ctx, control).value / ctx.width


def corrected_lhs(f: RealFn, ctx: QContext, x: float, control: SeriesControl = DEFAULT_CONTROL) -> float:
    """Like :func:`original_lhs` but with ``f`` read at the projected node."""
    return f(q_node(ctx, x)) - _avg(f, ctx, control).value / ctx.width


def check_identity(
    f: RealFn, ctx: QContext, x: float, control: SeriesControl = DEFAULT_CONTROL
) -> IdentityReport:
    node = q_node(ctx, x)
    avg_series = _avg(f, ctx, control)
    avg = avg_series.value / ctx.width
    rhs = montgomery_rhs(f, ctx, x, control)
    lhs_original = f(x) - avg
    lhs_corrected = f(node) - avg
    return IdentityReport(
        x=x,
        node=node,
        avg_integral=avg,
        lhs_original=lhs_original,
        lhs_corrected=lhs_corrected,
        rhs=rhs.value,
        residual_original=lhs_original - rhs.value,
        residual_corrected=lhs_corrected - rhs.value,
        series=rhs,
        avg_series=avg_series,
        tol=control.tol,
    )


def residual_scan(
    f: RealFn, ctx: QContext, xs: Sequence[float], control: SeriesControl = DEFAULT_CONTROL
) -> list[IdentityReport | PointFailure]:
    """:func:`check_identity` at every x, keeping order; failures stay in place."""
    out: list[IdentityReport | PointFailure] = []
    for x in xs:
        try:
            out.append(check_identity(f, ctx, x, control))
        except QMontError as exc:
            out.append(PointFailure(x, f"{type(exc).__name__}: {exc}"))
    return out


def lattice_nodes(ctx: QContext, count: int, start: int = 1) -> list[float]:
    """The points ``a + q^k (b - a)`` for k = start, ..., start + count - 1."""
    out = []
    power = ctx.q**start
    for _ in range(count):
        out.append(ctx.a + power * ctx.width)
        power *= ctx.q
    return out


def convexity_step_check(
    f: RealFn,
    ctx: QContext,
    r: float,
    t_grid: Sequence[float],
    control: SeriesControl = DEFAULT_CONTROL,
) -> ConvexityReport:
    """Test both endpoint weightings of the convexity bound for |D_q^a f|^r.

    Corrected:  |D f(tb + (1-t)a)|^r <= t |D f(b)|^r + (1-t) |D f(a)|^r
    Erroneous:  |D f(tb + (1-t)a)|^r <= t |D f(a)|^r + (1-t) |D f(b)|^r

    A grid point counts as a violation when the left side exceeds the bound
    by more than ``control.tol`` (relative for bounds larger than one).
    """
    if not r >= 1.0:
        raise DomainError(f"exponent r must be >= 1, got {r!r}")
    grid = [float(t) for t in t_grid]
    for t in grid:
        if not 0.0 <= t <= 1.0:
            raise DomainError(f"t-grid values must lie in [0, 1], got {t!r}")
    da = q_derivative_at_a(f, ctx, control)
    db = q_derivative(f, ctx, ctx.b)
    pa, pb = abs(da) ** r, abs(db) ** r

    corrected: list[tuple[float, float, float]] = []
    erroneous: list[tuple[float, float, float]] = []
    for t in grid:
        point = min(t * ctx.b + (1.0 - t) * ctx.a, ctx.b)
        lhs = pa if point <= ctx.a else abs(q_derivative(f, ctx, point)) ** r
        for bound, sink in ((t * pb + (1.0 - t) * pa, corrected), (t * pa + (1.0 - t) * pb, erroneous)):
            if lhs > bound + control.tol * max(1.0, abs(bound)):
                sink.append((t, lhs, bound))
    return ConvexityReport(r, grid, corrected, erroneous, da, db)

"""q-calculus numerics and the quantum Montgomery identity."""

from qmont.errors import CapError, ConvergenceError, DomainError, EvalError, ExprSyntaxError, QMontError
from qmont.funcexpr import as_realfn, compile_fn, parse, pretty
from qmont.montgomery import (
    ConvexityReport,
    IdentityReport,
    NodeIndex,
    PointFailure,
    check_identity,
    convexity_step_check,
    corrected_lhs,
    kernel_eval,
    lattice_nodes,
    m_index,
    montgomery_rhs,
    original_lhs,
    q_node,
    residual_scan,
)
from qmont.qcore import (
    QContext,
    RealFn,
    SeriesControl,
    SeriesResult,
    classical_derivative_fd,
    jackson_integral,
    jackson_integral_sub,
    q_derivative,
    q_derivative_at_a,
    riemann_integral_oracle,
)

__version__ = "0.1.0"

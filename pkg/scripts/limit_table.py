"""q -> 1 convergence of the q-derivative and Jackson integral to their classical values."""

import math

from qmont import QContext, RealFn, classical_derivative_fd, jackson_integral, q_derivative, riemann_integral_oracle

CASES = [
    ("t^3", lambda t: t**3, 0.0, 2.0, 1.5),
    ("exp(t)", math.exp, 0.0, 1.0, 0.7),
    ("sin(t)", math.sin, 0.0, 1.0, 1.0),
]


def main():
    for name, fn, a, b, x in CASES:
        f = RealFn(fn, name)
        fd = classical_derivative_fd(f, x, 1e-6)
        simpson = riemann_integral_oracle(f, a, x, 256)
        print(f"\n{name} on [{a}, {b}], x = {x}")
        print(f"{'q':>12}  {'|Dq f - f_prime|':>18}  {'|int_q - int|':>16}  terms")
        for j in range(3, 13):
            q = 1 - 2.0**-j
            ctx = QContext(q, a, b)
            res = jackson_integral(f, ctx, x)
            print(
                f"{q:12.8f}  {abs(q_derivative(f, ctx, x) - fd):18.6e}  {abs(res.value - simpson):16.6e}  {res.terms_used}"
            )


if __name__ == "__main__":
    main()

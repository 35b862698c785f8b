"""Count violations of the corrected and the endpoint-swapped convexity bound."""

from qmont import QContext, compile_fn, convexity_step_check

FUNCS = ["t^2", "t^2 + 3*t", "t^3", "exp(t)", "-2*t^2 + t"]


def main():
    grid = [i / 100 for i in range(101)]
    print(f"{'f':>12} {'q':>5} {'r':>4} {'corrected':>10} {'swapped':>8}")
    for src in FUNCS:
        f = compile_fn(src)
        for q in (0.3, 0.5, 0.8):
            for r in (1.0, 2.0):
                rep = convexity_step_check(f, QContext(q, 0.0, 1.0), r, grid)
                print(f"{src:>12} {q:5.2f} {r:4.1f} {len(rep.corrected_violations):10d} {len(rep.erroneous_violations):8d}")


if __name__ == "__main__":
    main()

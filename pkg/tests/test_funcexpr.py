import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmont.errors import EvalError, ExprSyntaxError
from qmont.funcexpr import BinOp, Call, Neg, Num, Var, as_realfn, compile_fn, eval, parse, pretty
from qmont.qcore import QContext, jackson_integral, q_derivative

CORPUS = [
    "t", "1", "3.5", "1e-3", "2.5E+2", ".5", "7.", "t^2 + 1", "2^3^2", "-2^2",
    "1+2*3", "(1+2)*3", "t - 1 - 2", "t / 2 / 4", "-t", "--t", "-(t+1)", "2*-t",
    "t^-1", "t^-t^2", "(-t)^2", "exp(t)", "ln(t + 1)", "sin(t)*cos(t)", "sqrt(abs(t))",
    "exp(-t^2/2)", "abs(t - 0.5)", "3*t^3 - 2*t^2 + t - 7", "(t+1)/(t-2)", "sin(cos(exp(t)))",
    "t*(t*(t*(t+1)+1)+1)", "1/(1+t^2)", "-exp(-t)", "2^(t+1)", "(2^t)^2", "sqrt(t)^3",
    "ln(exp(t))", "t ^ 0.5", "  t  +  2  ", "1 - -1", "1 - (2 - 3)", "1 - 2 - 3",
    "6 / (3 / 2)", "-(-(t))", "abs(-t) * -abs(t)", "cos(t)^2 + sin(t)^2", "t^2^-1",
    "(t)", "((((t))))", "1.25e1*t - 4e0",
]


def test_corpus_size():
    assert len(CORPUS) == 50


def test_parse_example_tree():
    assert parse("t^2 + 1") == BinOp("+", BinOp("^", Var(), Num(2.0)), Num(1.0))


@pytest.mark.parametrize(
    "src,x,value",
    [
        ("2^3^2", 0, 512.0),
        ("1+2*3", 0, 7.0),
        ("-2^2", 0, -4.0),
        ("(-2)^2", 0, 4.0),
        ("t^2+1", 2, 5.0),
        ("exp(0)", 123.0, 1.0),
        ("2^-1", 0, 0.5),
        ("8/4/2", 0, 1.0),
        ("10-4-3", 0, 3.0),
        ("sin(t)", 0.0, 0.0),
        ("abs(t)", -3, 3.0),
        ("sqrt(t)", 9, 3.0),
        ("(-2)^3", 0, -8.0),
    ],
)
def test_eval_values(src, x, value):
    assert eval(parse(src), x) == value


@pytest.mark.parametrize("src", CORPUS)
def test_round_trip(src):
    tree = parse(src)
    assert parse(pretty(tree)) == tree


@pytest.mark.parametrize(
    "src,offset",
    [
        ("t +", 3),
        ("t + * 2", 4),
        ("(t", 2),
        ("t)", 1),
        ("sin t", 4),
        ("foo(t)", 0),
        ("2 $ 3", 2),
        ("t t", 2),
        ("", 0),
        ("   ", 0),
        ("é + t", 0),
        ("t + é", 4),
    ],
)
def test_syntax_error_offsets(src, offset):
    with pytest.raises(ExprSyntaxError) as info:
        parse(src)
    assert info.value.offset == offset


def test_syntax_error_offset_is_in_bytes():
    with pytest.raises(ExprSyntaxError) as info:
        parse("\u00a0t +")
    # the no-break space encodes to two bytes, so end of input is byte 5
    assert info.value.offset == 5


def test_syntax_error_lists_expected_tokens():
    with pytest.raises(ExprSyntaxError) as info:
        parse("t +")
    assert {"number", "t", "("} <= info.value.expected
    assert isinstance(info.value, SyntaxError)


@pytest.mark.parametrize("src,x", [("ln(t)", -1), ("ln(t)", 0), ("sqrt(t)", -1), ("1/t", 0), ("t^0.5", -4), ("exp(t)", 1e4), ("t^-1", 0)])
def test_eval_errors(src, x):
    with pytest.raises(EvalError):
        eval(parse(src), x)


def test_as_realfn_contract():
    ident = as_realfn(parse("t"), "id")
    assert ident.label == "id"
    assert q_derivative(ident, QContext(0.3, 0, 2), 1.1) == pytest.approx(1.0, rel=1e-15)
    three = as_realfn(parse("3"), "c")
    assert jackson_integral(three, QContext(0.5, 0, 1), 1.0).value == pytest.approx(3.0, abs=1e-11)
    assert as_realfn(parse("sin(t)"), "sin")(0.0) == 0.0
    with pytest.raises(EvalError):
        compile_fn("ln(t)")(-1.0)


def test_compiled_matches_math():
    f = compile_fn("exp(-t^2/2) * cos(3*t) + abs(t)^1.5")
    for x in (-1.3, 0.0, 0.7, 2.2):
        assert f(x) == math.exp(-(x**2) / 2) * math.cos(3 * x) + abs(x) ** 1.5


# --- generated trees --------------------------------------------------------

leaves = st.one_of(
    st.just(Var()),
    st.floats(0, 1e6, allow_nan=False, allow_infinity=False).map(Num),
)


def _extend(children):
    return st.one_of(
        children.map(Neg),
        st.builds(BinOp, st.sampled_from("+-*/^"), children, children),
        st.builds(Call, st.sampled_from(["exp", "ln", "sin", "cos", "sqrt", "abs"]), children),
    )


trees = st.recursive(leaves, _extend, max_leaves=12)


@settings(max_examples=300)
@given(trees)
def test_generated_round_trip(tree):
    assert parse(pretty(tree)) == tree


@settings(max_examples=200)
@given(trees, st.floats(-10, 10))
def test_eval_deterministic(tree, x):
    try:
        first = eval(tree, x)
    except EvalError:
        with pytest.raises(EvalError):
            eval(tree, x)
        return
    second = eval(tree, x)
    assert math.isfinite(first)
    assert first == second and math.copysign(1, first) == math.copysign(1, second)

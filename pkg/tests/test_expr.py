import math

import pytest
from hypothesis import assume, given, settings, strategies as st

import oracles as o
from hdg import Quaternion, mul
from hdg.expr import (
    BinOp, EvalError, Expression, ExprTypeError, Num, ParseError, Unit, ValidationError, Var,
    eval_dual, eval_jet, evaluate, parse, to_source, validate,
)

# random expressions in t -----------------------------------------------------------

reals = st.recursive(
    st.sampled_from(["t", "2", "0.5", "pi", "(t*t)", "1.25"]),
    lambda inner: st.one_of(
        st.tuples(inner, st.sampled_from(["+", "-", "*"]), inner).map(lambda x: f"({x[0]} {x[1]} {x[2]})"),
        st.tuples(st.sampled_from(["sin", "cos"]), inner).map(lambda x: f"{x[0]}({x[1]})"),
        inner.map(lambda a: f"exp(sin({a}))"),
        inner.map(lambda a: f"sqrt(1 + ({a})^2)"),
        st.tuples(inner, inner).map(lambda x: f"atan2({x[0]}, 1 + ({x[1]})^2)"),
    ),
    max_leaves=6,
)

quaternionic = st.recursive(
    st.one_of(reals, st.sampled_from(["i", "j", "k", "(1 + i*t)", "(j - t*k)"])),
    lambda inner: st.one_of(
        st.tuples(inner, st.sampled_from(["+", "-", "*"]), inner).map(lambda x: f"({x[0]} {x[1]} {x[2]})"),
        inner.map(lambda a: f"conj({a})"),
        inner.map(lambda a: f"({a})^2"),
        inner.map(lambda a: f"-{a}"),
        inner.map(lambda a: f"({a}) / (2 + i*sin(t) + j)"),
        inner.map(lambda a: f"norm({a})"),
    ),
    max_leaves=8,
)


def test_spec_examples():
    assert parse("i*j") == BinOp("*", Unit("i"), Unit("j"))
    assert evaluate(parse("i*j"), {}) == Quaternion(0, 0, 0, 1)
    assert evaluate(parse("j*i"), {}) == Quaternion(0, 0, 0, -1)
    assert parse("i*j") != parse("j*i")
    assert evaluate(parse("(1+i)*(1+j)"), {}).components == o.FROZEN_ONE_I_ONE_J
    assert evaluate(parse("conj(i)"), {}) == Quaternion(0, -1)
    with pytest.raises(ExprTypeError):
        evaluate(parse("sin(i)"), {})
    value, d = eval_dual(parse("cos(t) + i*sin(t)"), {"t": 0.0}, "t")
    assert value == Quaternion(1) and d == Quaternion(0, 1)
    assert eval_dual(parse("3 + 2*k"), {"t": 1.0}, "t")[1] == Quaternion()


def test_precedence():
    assert evaluate(parse("-2^2"), {}) == Quaternion(-4)
    assert evaluate(parse("1 + 2*3"), {}) == Quaternion(7)
    assert evaluate(parse("2*3^2"), {}) == Quaternion(18)
    assert evaluate(parse("(1 + 2)*3"), {}) == Quaternion(9)
    assert evaluate(parse("8/2/2"), {}) == Quaternion(2)
    assert evaluate(parse("2^-1"), {}) == Quaternion(0.5)
    assert evaluate(parse("2*pi"), {}).x0 == 2 * math.pi


def test_division_is_right_inverse():
    p, q = "(1 + 2*i - j)", "(3 - k + i)"
    got = evaluate(parse(f"{p} / {q}"), {})
    P, Q = evaluate(parse(p), {}), evaluate(parse(q), {})
    assert got == mul(P, Q.inverse())
    assert got != mul(Q.inverse(), P)


@pytest.mark.parametrize("src,offset", [
    ("1 +", 3), ("(1 + 2", 6), ("2 ^ 1.5", 4), ("sin(1, 2)", 0), ("foo", 0), ("1 $ 2", 2), ("", 0),
    ("i j", 2), ("atan2(1)", 0),
])
def test_parse_errors(src, offset):
    with pytest.raises(ParseError) as info:
        parse(src)
    assert 0 <= info.value.offset <= len(src.encode())
    assert info.value.offset == offset


def test_parse_error_offsets_are_bytes():
    with pytest.raises(ParseError) as info:
        parse("α + 1")
    assert info.value.offset == 0
    with pytest.raises(ParseError) as info:
        parse("1 + α")
    assert info.value.offset == 4


def test_evaluation_errors():
    with pytest.raises(EvalError):
        evaluate(parse("t + 1"), {})
    with pytest.raises(EvalError):
        evaluate(parse("sqrt(-1)"), {})
    with pytest.raises(EvalError):
        evaluate(parse("1 / (i - i)"), {})
    with pytest.raises(EvalError):
        evaluate(parse("exp(1000)"), {})


def test_validation_of_signature():
    validate(parse("cos(t) + i"), ("t",))
    with pytest.raises(ValidationError):
        validate(parse("u + v"), ("u",))
    with pytest.raises(ValidationError):
        validate(parse("rho*I"), ("rho", "theta"))
    validate(parse("rho*I"), ("rho", "theta", "phi", "xi"))
    assert Expression.compile("v*i + u").params == ("u", "v")


def test_polar_units_follow_frame():
    env = {"phi": 0.7, "xi": 2.1}
    I, J, K = o.polar_units(0.7, 2.1)
    assert o.close(evaluate(parse("I"), env).components, I, 1e-15)
    assert o.close(evaluate(parse("J"), env).components, J, 1e-15)
    assert o.close(evaluate(parse("K"), env).components, K, 1e-15)
    jet = eval_jet(parse("I"), env, "phi")
    assert o.close(jet.da.components, J, 1e-15)


@settings(max_examples=200, deadline=None)
@given(quaternionic)
def test_print_parse_idempotent(src):
    tree = parse(src)
    printed = to_source(tree)
    assert parse(printed) == tree
    assert to_source(parse(printed)) == printed


@settings(max_examples=200, deadline=None)
@given(quaternionic, st.floats(-2, 2))
def test_dual_derivative_matches_central_differences(src, t):
    tree = parse(src)
    try:
        value, d = eval_dual(tree, {"t": t}, "t")
        h = 1e-4
        f = [evaluate(tree, {"t": t + s * h}) for s in (-2, -1, 1, 2)]
    except EvalError:
        assume(False)
    numeric = (f[0] - 8 * f[1] + 8 * f[2] - f[3]) / (12 * h)
    scale = 1 + max(abs(c) for q in f for c in q.components)
    assume(scale < 1e3)
    assert o.close(d.components, numeric.components, 1e-8 * scale)


@settings(max_examples=200, deadline=None)
@given(quaternionic, quaternionic, st.floats(-2, 2))
def test_products_keep_written_order(a, b, t):
    env = {"t": t}
    try:
        A, B = evaluate(parse(a), env), evaluate(parse(b), env)
        AB = evaluate(parse(f"({a})*({b})"), env)
    except EvalError:
        assume(False)
    assert AB == mul(A, B)


def test_second_order_jet_matches_closed_form():
    tree = parse("(cos(u) + i*sin(u))*(cos(v) + j*sin(v))")
    jet = eval_jet(tree, {"u": 0.3, "v": 0.5}, "u", "v")
    want = mul(Quaternion(-math.sin(0.3), math.cos(0.3)), Quaternion(-math.sin(0.5), 0, math.cos(0.5)))
    assert o.close(jet.dab.components, want.components, 1e-15)
    pure = eval_jet(parse("t^3"), {"t": 2.0}, "t", "t")
    assert pure.dab == Quaternion(12.0)


def test_constant_nodes_are_not_parsed():
    # numbers and variables only; Const nodes come from programmatic rewrites
    assert parse("2.5") == Num(2.5)
    assert parse("x0") == Var("x0")

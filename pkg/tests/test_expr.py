import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from papm.expr import (
    BinOp,
    Call,
    Const,
    DomainError,
    ExprSyntaxError,
    Jet2,
    Neg,
    NonLiteralExponent,
    Num,
    Pow,
    UnknownIdentifier,
    Var,
    evaluate,
    evaluate_jet2,
    finite_difference_jet2,
    free_variables,
    parse_expression,
    to_text,
)
from papm.expr.ast import FUNCTIONS

X12 = ("x1", "x2")


# -- parsing ---------------------------------------------------------------


def test_zero_literal():
    assert parse_expression("0", ("x1",)) == Num(0.0)


def test_sin_times_square():
    e = parse_expression("sin(x1)*x2^2", X12)
    assert e == BinOp("*", Call("sin", Var("x1", 0)), Pow(Var("x2", 1), 2.0))


def test_syntax_error_points_at_operator():
    with pytest.raises(ExprSyntaxError) as info:
        parse_expression("x1 + * x2", X12)
    assert info.value.position == 5
    assert "number" in info.value.expected


@pytest.mark.parametrize(
    "text, expected",
    [
        ("x1 - x2 - 1", BinOp("-", BinOp("-", Var("x1", 0), Var("x2", 1)), Num(1.0))),
        ("x1 / x2 * 2", BinOp("*", BinOp("/", Var("x1", 0), Var("x2", 1)), Num(2.0))),
        ("-x1^2", Neg(Pow(Var("x1", 0), 2.0))),
        ("x1^-2", Pow(Var("x1", 0), -2.0)),
        ("x1 + x2 * x1", BinOp("+", Var("x1", 0), BinOp("*", Var("x2", 1), Var("x1", 0)))),
        ("2*pi", BinOp("*", Num(2.0), Const("pi"))),
        ("(x1 + 1)^3", Pow(BinOp("+", Var("x1", 0), Num(1.0)), 3.0)),
        ("1.5e-3", Num(1.5e-3)),
        (".5", Num(0.5)),
    ],
)
def test_precedence_and_associativity(text, expected):
    assert parse_expression(text, X12) == expected


def test_power_is_right_associative():
    # x1^2^3 groups as x1^(2^3), whose exponent is not a bare literal;
    # left association would have produced the legal (x1^2)^3
    with pytest.raises(NonLiteralExponent):
        parse_expression("x1^2^3", X12)
    assert parse_expression("(x1^2)^3", X12) == Pow(Pow(Var("x1", 0), 2.0), 3.0)
    with pytest.raises(NonLiteralExponent):
        parse_expression("x1^x2", X12)


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifier) as info:
        parse_expression("x1 + y", X12)
    assert info.value.name == "y"
    assert info.value.position == 5


def test_unknown_function_name_is_rejected():
    with pytest.raises((UnknownIdentifier, ExprSyntaxError)):
        parse_expression("cosh(x1)", X12)


def test_coordinates_shadow_constants():
    assert parse_expression("e", ("e", "x")) == Var("e", 0)
    assert parse_expression("e", ("x",)) == Const("e")


@pytest.mark.parametrize("coords", [(), ("x", "x"), ("sin",), ("1x",)])
def test_bad_coordinate_lists(coords):
    with pytest.raises(ValueError):
        parse_expression("1", coords)


@pytest.mark.parametrize("text", ["", "(", "x1)", "sin x1", "x1 x2", "2 +", "sin()", "x1 ^", "x1 $ 2"])
def test_malformed_inputs_raise_positioned_errors(text):
    with pytest.raises(ExprSyntaxError) as info:
        parse_expression(text, X12)
    assert 0 <= info.value.position <= len(text)


def test_free_variables():
    assert free_variables(parse_expression("sin(x1) + pi", X12)) == {"x1"}


# -- round trip ------------------------------------------------------------

_leaf = st.one_of(
    st.floats(min_value=0, max_value=1e6, allow_nan=False, allow_infinity=False).map(Num),
    st.sampled_from([Var("x1", 0), Var("x2", 1), Const("pi"), Const("e")]),
)


def _extend(children):
    return st.one_of(
        children.map(Neg),
        st.tuples(st.sampled_from("+-*/"), children, children).map(lambda t: BinOp(*t)),
        st.tuples(children, st.floats(min_value=-5, max_value=5, allow_nan=False)).map(lambda t: Pow(*t)),
        st.tuples(st.sampled_from(FUNCTIONS), children).map(lambda t: Call(*t)),
    )


expressions = st.recursive(_leaf, _extend, max_leaves=12)


@settings(max_examples=300, deadline=None)
@given(expressions)
def test_print_and_reparse_is_identity(e):
    assert parse_expression(to_text(e), X12) == e


@settings(max_examples=300, deadline=None)
@given(expressions)
def test_reparse_of_printed_parse_is_stable(e):
    once = parse_expression(to_text(e), X12)
    assert parse_expression(to_text(once), X12) == once


@settings(max_examples=500, deadline=None)
@given(st.text(alphabet="x12+-*/^().e pisnco ", max_size=20))
def test_parser_is_total_on_fuzz(text):
    try:
        parse_expression(text, X12)
    except ExprSyntaxError as exc:
        assert 0 <= exc.position <= len(text)
    except (UnknownIdentifier, NonLiteralExponent):
        pass


# -- jets ------------------------------------------------------------------


def test_constant_jet():
    j = evaluate_jet2(parse_expression("5", X12), (0.3, -1.0))
    assert j.value == 5.0
    assert not j.gradient.any() and not j.hessian.any()


def test_bilinear_jet():
    j = evaluate_jet2(parse_expression("x1*x2", X12), (2.0, 3.0))
    assert j.value == 6.0
    np.testing.assert_array_equal(j.gradient, [3.0, 2.0])
    np.testing.assert_array_equal(j.hessian, [[0.0, 1.0], [1.0, 0.0]])


def test_jet_hessian_stored_symmetric_and_read_only():
    j = Jet2(1.0, np.zeros(2), np.array([[1.0, 2.0], [0.0, 3.0]]))
    assert j.hessian[0, 1] == j.hessian[1, 0] == 1.0
    with pytest.raises(ValueError):
        j.gradient[0] = 1.0


def _close(ad, fd, tol=1e-6):
    assert abs(ad.value - fd.value) <= 1e-15 * (1 + abs(ad.value))
    assert np.all(np.abs(ad.gradient - fd.gradient) <= tol * (1 + np.abs(ad.gradient)))
    assert np.all(np.abs(ad.hessian - fd.hessian) <= tol * (1 + np.abs(ad.hessian)))


def test_sin_jet_matches_finite_differences():
    e = parse_expression("sin(x1)", ("x1",))
    ad = evaluate_jet2(e, (0.7,))
    assert ad.gradient[0] == pytest.approx(math.cos(0.7), abs=1e-15)
    assert ad.hessian[0, 0] == pytest.approx(-math.sin(0.7), abs=1e-15)
    _close(ad, finite_difference_jet2(e, (0.7,)))


def test_exp_jet_matches_finite_differences():
    e = parse_expression("exp(x1)", ("x1",))
    _close(evaluate_jet2(e, (1.0,)), finite_difference_jet2(e, (1.0,), 1e-4))


def test_fd_of_constant():
    fd = finite_difference_jet2(parse_expression("3", ("x1",)), (0.2,), 1e-4)
    assert abs(fd.gradient[0]) <= 1e-10


def test_fd_of_square():
    fd = finite_difference_jet2(parse_expression("x1^2", ("x1",)), (3.0,), 1e-4)
    assert fd.gradient[0] == pytest.approx(6.0, abs=1e-7)
    assert fd.hessian[0, 0] == pytest.approx(2.0, abs=1e-5)


def test_fd_rejects_nonpositive_step():
    with pytest.raises(ValueError):
        finite_difference_jet2(parse_expression("x1", ("x1",)), (0.0,), 0.0)


@pytest.mark.parametrize(
    "text, point",
    [
        ("tan(x1)*x2", (0.4, -1.3)),
        ("ln(x1^2 + 1)/sqrt(x2)", (0.8, 2.5)),
        ("tanh(x1*x2)^3 - exp(-x2)", (0.3, 0.9)),
        ("1/(1 + x1^2)^-0.5", (1.2, 0.0)),
        ("cos(x1)^-2 * x2^0.5", (0.6, 1.7)),
        ("e^2*x1 - pi*x2", (0.1, 0.2)),
        ("(x1 - x2)^3 / (x1 + 2)", (-0.5, 0.4)),
    ],
)
def test_jets_against_finite_differences(text, point):
    e = parse_expression(text, X12)
    _close(evaluate_jet2(e, point), finite_difference_jet2(e, point))


@settings(max_examples=200, deadline=None)
@given(expressions, st.tuples(st.floats(-2, 2), st.floats(-2, 2)))
def test_jet_value_matches_plain_evaluator(e, point):
    try:
        plain = evaluate(e, point)
    except (DomainError, OverflowError, ZeroDivisionError):
        return
    try:
        j = evaluate_jet2(e, point)
    except (DomainError, OverflowError):
        # the jet also needs finite derivatives, which can overflow when the value does not
        return
    assert j.value == pytest.approx(plain, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize(
    "text, func, x",
    [("ln(x1)", "ln", -1.0), ("sqrt(x1)", "sqrt", -1.0), ("x1^0.5", "^0.5", -1.0), ("x1^-1", "^-1.0", 0.0)],
)
def test_domain_errors(text, func, x):
    point = (x,)
    with pytest.raises(DomainError) as info:
        evaluate_jet2(parse_expression(text, ("x1",)), point)
    assert info.value.function == func


def test_division_by_zero_is_a_domain_error():
    with pytest.raises((DomainError, OverflowError)):
        evaluate_jet2(parse_expression("1/x1", ("x1",)), (0.0,))


def test_overflow():
    with pytest.raises(OverflowError):
        evaluate_jet2(parse_expression("exp(exp(x1))", ("x1",)), (10.0,))

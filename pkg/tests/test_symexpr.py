from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from jetvar import JetSpace, ParseError, UnboundVariableError, UndeclaredError
from jetvar.errors import OrderOverflowError, SpaceMismatchError
from jetvar.symexpr import equals, eval_numeric, normalize, parse, partial, substitute

from strategies import LOW, SPACE, expressions, polynomials


@pytest.fixture(scope="module")
def S():
    return JetSpace(["t", "x"], ["y"], order=3, constants=["m"])


class TestParse:
    def test_mixed_partials_commute(self, S):
        assert parse("y_xt - y_tx", S).is_zero

    def test_half_square(self, S):
        e = parse("(1/2)*y_x^2", S)
        assert e.is_polynomial
        assert e == S.const(Fraction(1, 2)) * S.var("y_x") ** 2
        assert str(e) == "(1/2)*y_x^2"

    def test_rational_normal_form(self, S):
        e = parse("m^2*y/(1+x)", S)
        assert not e.is_polynomial
        assert equals(e * parse("1 + x", S), parse("m^2*y", S))

    def test_unknown_identifier(self, S):
        with pytest.raises(UndeclaredError):
            parse("y + q", S)

    def test_order_overflow(self, S):
        with pytest.raises(OrderOverflowError):
            parse("y_xxxx", S)

    @pytest.mark.parametrize("text", ["y +", "(y", "y ^ ^ 2", "y^x", "2 y", "y)", ""])
    def test_malformed_reports_position(self, S, text):
        with pytest.raises(ParseError) as info:
            parse(text, S)
        assert info.value.position is not None

    def test_integer_exponents(self, S):
        assert parse("y^-1", S) == 1 / S.var("y")
        assert parse("y^0", S) == S.const(1)


class TestEquals:
    def test_binomial(self, S):
        assert equals(parse("(y+1)^2", S), parse("y^2+2*y+1", S))

    def test_distinct_jets(self, S):
        assert not equals(parse("y_x", S), parse("y_t", S))

    def test_gcd_reduction(self, S):
        assert equals(parse("(y^2-1)/(y-1)", S), parse("y+1", S))

    def test_mismatched_spaces(self, S):
        other = JetSpace(["t", "x"], ["y"], order=2, constants=["m"])
        with pytest.raises(SpaceMismatchError):
            equals(parse("y", S), parse("y", other))

    def test_equal_declarations_interoperate(self, S):
        twin = JetSpace(["t", "x"], ["y"], order=3, constants=["m"])
        assert equals(parse("y", S), parse("y", twin))

    def test_zero_is_unique(self, S):
        a = parse("(y_x - y_x)/(1 + y)", S)
        assert a == S.zero() and hash(a) == hash(S.zero())


class TestPartial:
    def test_examples(self, S):
        assert partial(parse("(1/2)*y_x^2", S), "y_x") == parse("y_x", S)
        assert partial(parse("x*y", S), "y_x").is_zero
        assert partial(parse("y_xx*y", S), "y_xx") == parse("y", S)

    def test_quotient_rule(self, S):
        f = parse("y/(1 + y^2)", S)
        assert equals(partial(f, "y"), parse("(1 - y^2)/(1 + y^2)^2", S))

    def test_undeclared(self, S):
        with pytest.raises(UndeclaredError):
            partial(parse("y", S), "z")


class TestSubstitute:
    def test_example(self, S):
        assert substitute(parse("y_x^2", S), {"y_x": parse("2*x", S)}) == parse("4*x^2", S)

    def test_identity_bindings(self, S):
        f = parse("m*y_x/(1+y)", S)
        assert substitute(f, {c: S.var(c) for c in f.variables()}) == f

    def test_simultaneous(self, S):
        f = parse("x - y", S)
        assert substitute(f, {"x": parse("y", S), "y": parse("x", S)}) == parse("y - x", S)

    def test_pole(self, S):
        with pytest.raises(ZeroDivisionError):
            substitute(parse("y/(1-y)", S), {"y": S.const(1)})

    def test_undeclared_binding(self, S):
        with pytest.raises(UndeclaredError):
            substitute(parse("y", S), {"z": S.const(1)})


class TestEvalNumeric:
    def test_examples(self, S):
        assert eval_numeric(parse("(1/2)*y_x^2", S), {"y_x": 3}) == Fraction(9, 2)
        assert eval_numeric(S.zero(), {}) == 0

    def test_constants(self, S):
        assert eval_numeric(parse("m*y", S), {"y": Fraction(1, 3)}, {"m": 6}) == 2

    def test_zero_denominator(self, S):
        with pytest.raises(ZeroDivisionError):
            eval_numeric(parse("(x+y)/(x-y)", S), {"x": 2, "y": 2})

    def test_unbound(self, S):
        with pytest.raises(UnboundVariableError):
            eval_numeric(parse("x*y", S), {"x": 1})


class TestPrinter:
    def test_negative_group(self, S):
        assert str(parse("-y_tt - y", S)) == "-(y_tt + y)"

    def test_deterministic(self, S):
        a = parse("y*x + x^2 - 3*y_t/(2 + y)", S)
        b = parse("x^2 - 3*y_t/(y + 2) + x*y", S)
        assert str(a) == str(b)


# property suites (>= 200 cases each)

@given(expressions)
def test_normalization_idempotent(e):
    once = normalize(e)
    assert normalize(once) == once
    assert once == e


@given(expressions, expressions, expressions)
def test_distributive(a, b, c):
    assert equals(a * (b + c), a * b + a * c)


@given(expressions, expressions)
def test_commutative_and_inverse(a, b):
    assert equals(a + b, b + a)
    assert equals(a * b, b * a)
    assert (a - a).is_zero
    if not a.is_zero:
        assert equals(a / a, SPACE.const(1))


@given(expressions, st.sampled_from(LOW), st.sampled_from(LOW))
def test_partials_commute(f, c1, c2):
    assert equals(partial(partial(f, c1), c2), partial(partial(f, c2), c1))


@given(expressions)
def test_parse_print_roundtrip(e):
    assert equals(parse(str(e), SPACE), e)


@given(polynomials(), polynomials())
def test_partial_is_derivation(f, g):
    c = SPACE.lookup("y_t")
    assert equals(partial(f * g, c), partial(f, c) * g + f * partial(g, c))

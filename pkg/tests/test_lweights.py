from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qaffine.cartan import build_cartan, parse_algebra
from qaffine.lweights import (
    LMonomial,
    LWeightError,
    QExponent,
    RationalFunction,
    RationalLWeight,
    SpectralParam,
    dagger,
    lweight_leq,
    monomial_realize,
    parse_exponent,
    recover_monomial,
    shift,
    simple_lroot,
    string_function,
    string_lweight,
    wt,
)

A3 = build_cartan("A", 3)
B2 = build_cartan("B", 2)


def test_parse_exponent():
    e = parse_exponent("2*mu - 1/2")
    assert e == QExponent.make(Fraction(-1, 2), {"mu": 2})
    assert parse_exponent("mu + nu - mu") == QExponent.symbol("nu")
    assert str(parse_exponent("3")) == "3"
    with pytest.raises(LWeightError):
        parse_exponent("mu*nu")
    with pytest.raises(LWeightError):
        parse_exponent("sqrt(2)")


def test_exponent_classes():
    a = QExponent.make(Fraction(5, 2), {"mu": 1})
    b = QExponent.make(Fraction(-3, 2), {"mu": 1})
    assert a.class_part() == b.class_part()
    assert (a - b).is_integer
    assert not QExponent.symbol("mu").is_nonneg_integer()


def test_string_function_values():
    a = SpectralParam.make("a")
    s = string_function(1, a)
    assert s.scalar == QExponent.coerce(1)
    assert s.factor_map() == {a.shift(-2): 1, a: -1}
    assert string_function(0, a).is_one()
    assert not s.check()


def test_simple_root_components():
    a = SpectralParam.make("a")
    A = simple_lroot(B2, 1, a)
    # B_11 = 4, B_12 = -2
    assert A.component(1) == RationalFunction.make(4, {a.shift(-4): 1, a.shift(4): -1})
    assert A.component(2) == RationalFunction.make(-2, {a.shift(2): 1, a.shift(-2): -1})
    assert A.validate() is A


def test_validate_rejects_unbalanced():
    bad = RationalLWeight((RationalFunction.make(0, {SpectralParam.make("a"): 1}),))
    with pytest.raises(LWeightError):
        bad.validate()
    bad = RationalLWeight((RationalFunction.make(1, {}),))
    with pytest.raises(LWeightError):
        bad.validate()


# --- group structure ------------------------------------------------------------------

orbits = st.sampled_from(["a", "b"])
offsets = st.one_of(
    st.integers(-6, 6),
    st.builds(lambda k, c: QExponent.make(c, {"mu": k}), st.integers(-2, 2), st.integers(-4, 4)),
)
params = st.builds(SpectralParam.make, orbits, offsets)


@st.composite
def lweights(draw, cd=A3):
    f = RationalLWeight.identity(cd.rank)
    for _ in range(draw(st.integers(0, 4))):
        node = draw(st.integers(1, cd.rank))
        mu = draw(offsets)
        f = f * string_lweight(cd, node, mu, draw(params))
    for _ in range(draw(st.integers(0, 2))):
        f = f * simple_lroot(cd, draw(st.integers(1, cd.rank)), draw(params)) ** draw(st.integers(-2, 2))
    return f


@settings(max_examples=60, deadline=None)
@given(lweights(), lweights(), lweights())
def test_group_axioms(f, g, h):
    e = RationalLWeight.identity(A3.rank)
    assert (f * g) * h == f * (g * h)
    assert f * g == g * f
    assert f * e == f
    assert (f * f.inverse()).is_identity()
    assert f / g == f * g.inverse()
    assert not (f * g).check()


@settings(max_examples=60, deadline=None)
@given(lweights(), lweights())
def test_dagger_is_an_involutive_homomorphism(f, g):
    assert dagger(dagger(f)) == f
    assert dagger(f * g) == dagger(f) * dagger(g)
    assert wt(dagger(f)) == wt(f)
    assert not dagger(f).check()


@settings(max_examples=40, deadline=None)
@given(lweights(), st.integers(-5, 5))
def test_shift_keeps_weight(f, k):
    assert wt(shift(f, k)) == wt(f)
    assert shift(shift(f, k), -k) == f


def test_wt_of_simple_root_is_cartan_column():
    a = SpectralParam.make("a")
    for j in A3.nodes:
        w = wt(simple_lroot(A3, j, a))
        assert tuple(x.const for x in w) == tuple(A3.B[j - 1])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(1, 3), params, st.integers(-2, 2)), max_size=4))
def test_recover_monomial_round_trip(items):
    a = SpectralParam.make("c")
    f = string_lweight(A3, 2, "nu", a)
    m = LMonomial.make({(j, p): n for j, p, n in items})
    h = monomial_realize(A3, f, m)
    assert recover_monomial(A3, h / f) == m


def test_recover_monomial_rejects_non_root_products():
    f = string_lweight(A3, 1, 1, SpectralParam.make("a"))
    assert recover_monomial(A3, f) is None


def test_lweight_order():
    a = SpectralParam.make("a")
    f = string_lweight(B2, 1, "mu", a)
    g = f * simple_lroot(B2, 1, a).inverse()
    assert lweight_leq(B2, g, f)
    assert not lweight_leq(B2, f, g)


def test_json_round_trip():
    cd = parse_algebra("C3")
    f = string_lweight(cd, 3, "mu", SpectralParam.make("a", 2)) * simple_lroot(cd, 2, SpectralParam.make("b"))
    assert RationalLWeight.from_json(f.to_json(), cd.rank) == f
    m = LMonomial.make({(1, SpectralParam.make("a", QExponent.symbol("mu"))): -2})
    assert LMonomial.from_json(m.to_json()) == m
    assert m.weight_drop(3) == (2, 0, 0) and m.height() == 2

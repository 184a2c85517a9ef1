import pytest
from hypothesis import given, settings, strategies as st

from qaffine.cartan import build_cartan
from qaffine.expand import truncated_qchar
from qaffine.lweights import LMonomial, PointTable, QExponent, RationalFunction, RationalLWeight, SpectralParam
from qaffine.sl2 import (
    GP,
    RATIO,
    STALLED,
    FactorizationError,
    StringDesc,
    factor_into_strings,
    factor_points,
    general_position,
    gp_points,
    ratio_irreducible,
    string_qchar,
    strings_product,
    tensor_irreducible,
)

A1 = build_cartan("A", 1)


def S(mu, offset=0, orbit="a", level=1):
    return StringDesc.make(mu, SpectralParam.make(orbit, offset), level)


def P(start, symbol="nu"):
    """A string from a q^start to a generic pole in the same orbit."""
    z = start if isinstance(start, SpectralParam) else SpectralParam.make("a", start)
    return StringDesc.from_points(z, SpectralParam.make(z.orbit, QExponent.symbol(symbol)))


def test_endpoints():
    s = S(2, 1)
    assert s.start == SpectralParam.make("a", -2)
    assert s.end == SpectralParam.make("a", 2)
    assert s.finite_set() == [SpectralParam.make("a", k) for k in (-2, 0, 2)]
    assert StringDesc.from_points(s.start, s.end) == s
    t = S(2, 1, level=2)
    assert (t.start.offset.const, t.end.offset.const) == (-5, 3)


@pytest.mark.parametrize(
    "s1,s2,expected",
    [
        (S(1), S(1, 2), False),  # overlapping, not nested
        (S(1), S(1, 4), True),  # disjoint
        (S(3), S(1), True),  # nested
        (S(1), S(1, 1), True),  # different parity
        (S(1), S(1, orbit="b"), True),
        (S(2), S("mu"), True),  # generic endpoints
        (S(2), P(4), True),  # starts beyond the finite end
        (S(2), P(-1), False),  # starts inside the finite set
        (S("mu"), S("nu"), True),
    ],
)
def test_general_position_examples(s1, s2, expected):
    assert general_position(s1, s2) is expected
    assert general_position(s2, s1) is expected


def test_general_position_rejects_mixed_levels():
    with pytest.raises(ValueError):
        general_position(S(1), S(1, level=2))
    with pytest.raises(ValueError):
        tensor_irreducible([])


def test_infinite_pair_touching():
    # S_mu(a) ends at a q^(mu-1); a string starting there is not in general position
    s = S("mu")
    t = P(s.end)
    assert not general_position(s, t)


def _reducible(m, n, d):
    """V(m)_a (x) V(n)_b with a/b = q^d is reducible iff d = +-(m+n+2-2p), 1 <= p <= min(m, n)."""
    return any(abs(d) == m + n + 2 - 2 * p for p in range(1, min(m, n) + 1))


@pytest.mark.parametrize("m", range(1, 5))
@pytest.mark.parametrize("n", range(1, 5))
def test_gp_matches_ratio_oracle_for_finite_pairs(m, n):
    for d in range(-12, 13):
        s1, s2 = S(m, d), S(n, 0)
        assert general_position(s1, s2) is not _reducible(m, n, d)
        assert ratio_irreducible(s1, s2) is not _reducible(m, n, d)


@pytest.mark.parametrize("m", range(1, 5))
def test_ratio_for_finite_and_generic(m):
    # V(m)_a (x) V(mu)_b with generic mu: reducible iff an endpoint of the generic
    # string lies strictly inside the finite set, or the generic string starts at
    # its end or ends at its start
    fin = S(m)
    for d in range(-10, 11):
        inf_start = P(d)
        inside = fin.start.offset.const <= d <= fin.end.offset.const and (d - fin.start.offset.const) % 2 == 0
        gp = general_position(fin, inf_start)
        assert gp is not inside
        interior = inside and d != fin.start.offset.const
        assert ratio_irreducible(fin, inf_start) is not interior


offs = st.integers(-8, 8)
finite_strings = st.builds(S, st.integers(1, 4), offs, st.sampled_from("ab"))
generic_strings = st.builds(lambda k, c, o: S(QExponent.make(c, {"mu": k}), 0, o), st.sampled_from([1, 2]), offs, st.sampled_from("ab"))
strings = st.one_of(finite_strings, generic_strings)


@settings(max_examples=200, deadline=None)
@given(strings, strings)
def test_gp_implies_ratio(s1, s2):
    assert general_position(s1, s2) == general_position(s2, s1)
    assert ratio_irreducible(s1, s2) == ratio_irreducible(s2, s1)
    if general_position(s1, s2):
        assert ratio_irreducible(s1, s2)
    if s1.finite == s2.finite:
        assert general_position(s1, s2) == ratio_irreducible(s1, s2)


def test_factor_merges_overlapping_strings():
    f = S(1, 0).function() * S(1, 2).function()
    assert factor_into_strings(f) == [S(2, 1)]


def test_factor_keeps_general_position_products():
    parts = [S(1, 0), S(1, 4), S("mu", 0, "b")]
    got = factor_into_strings(strings_product(parts))
    assert sorted(map(str, got)) == sorted(map(str, parts))


def test_factor_of_one_is_empty():
    assert factor_into_strings(RationalFunction()) == []


def _points(f):
    table = PointTable()
    return table, {table.point(p): m for p, m in f.factors}


def test_coincident_zeros_need_the_ratio_fallback():
    # zeros a q^-1 (twice), poles a q and a generic point: no pairing is in general position
    a = SpectralParam.make("a")
    f = StringDesc.from_points(a.shift(-1), a.shift(1)).function() * P(-1).function()
    assert f.factor_map()[a.shift(-1)] == 2
    table, pts = _points(f)
    pairs, status = factor_points(pts, 1, lambda c: table.orbit_id[c])
    assert status == RATIO
    assert len(pairs) == 2
    with pytest.raises(FactorizationError):
        factor_into_strings(f)


@settings(max_examples=300, deadline=None)
@given(st.lists(strings, min_size=1, max_size=4))
def test_factorization_is_never_stalled(parts):
    f = strings_product(parts)
    table, pts = _points(f)
    pairs, status = factor_points(pts, 1, lambda c: table.orbit_id[c], strict=False)
    assert status != STALLED
    got = [StringDesc.from_points(table.param(*z), table.param(*p)) for z, p in pairs]
    assert strings_product(got) == f
    if status == GP:
        assert all(gp_points(s, t, 2) for i, s in enumerate(pairs) for t in pairs[i + 1:])
        assert tensor_irreducible(got) if got else True
    else:
        assert all(ratio_irreducible(s, t) for i, s in enumerate(got) for t in got[i + 1:])


@pytest.mark.parametrize("mu", [1, 2, 3, 5])
def test_string_qchar_ladder_descends_from_the_pole(mu):
    s = S(mu)
    qc = string_qchar(s, 10)
    assert len(qc) == mu + 1
    top = max(qc.as_dict(), key=LMonomial.height)
    assert top == LMonomial.make({(1, s.end.shift(-2 * k)): -1 for k in range(mu)})


def test_string_qchar_generic_is_truncated():
    qc = string_qchar(S("mu"), 4)
    assert len(qc) == 5
    assert [m.height() for m, _ in qc.terms] == [0, 1, 2, 3, 4]


@pytest.mark.parametrize("mu", [1, 2, 4, "mu"])
def test_string_qchar_matches_engine(mu):
    s = S(mu, 3)
    f = RationalLWeight((s.function(),))
    assert truncated_qchar(A1, f, 6).as_dict() == string_qchar(s, 6).as_dict()


def test_string_qchar_rejects_bad_input():
    with pytest.raises(ValueError):
        string_qchar(S(1), -1)
    with pytest.raises(ValueError):
        string_qchar(S(1, level=2), 2)

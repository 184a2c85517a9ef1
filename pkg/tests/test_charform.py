import itertools
import random
from functools import lru_cache

import pytest

from qaffine.cartan import build_cartan, parse_algebra
from qaffine.charform import (
    ConjSpec,
    ConjSpecError,
    OrbitSpec,
    charconj_exponents,
    charconj_product,
    charconj_validate,
    default_offsets,
    denominator_product,
    dynkin_path,
    lagpvm_exponents,
    lagv_exponents,
    neighbours_in_spec,
    orbit_exponents,
    parabolic_verma_character,
    path_sum,
    realize,
    weyl_character,
    weyl_sum,
)
from qaffine.expand import engine_character

A2, A4, B2 = parse_algebra("A2"), parse_algebra("A4"), parse_algebra("B2")
F4, D5, G2 = parse_algebra("F4"), parse_algebra("D5"), parse_algebra("G2")


def kostant(cd, mult, H):
    """Brute-force coloured partition counts: beta -> number of multisets of positive roots."""
    roots = [a for a in cd.positive_roots for _ in range(mult.get(a, 0))]

    @lru_cache(maxsize=None)
    def count(beta, k):
        if not any(beta):
            return 1
        if k == len(roots):
            return 0
        total = count(beta, k + 1)
        a = roots[k]
        rest = tuple(b - x for b, x in zip(beta, a))
        if min(rest) >= 0:
            total += count(rest, k)
        return total

    out = {}
    for beta in itertools.product(range(H + 1), repeat=cd.rank):
        if sum(beta) <= H:
            c = count(beta, 0)
            if c:
                out[beta] = c
    return out


def test_trivial_product():
    assert denominator_product(A2, {}, 5).as_dict() == {(0, 0): 1}


def test_a2_kostant_value():
    assert denominator_product(A2, lambda a: 1, 4)[(1, 1)] == 2


@pytest.mark.parametrize("name,H", [("A2", 6), ("A3", 4), ("B2", 6), ("G2", 6), ("C3", 3)])
def test_product_matches_kostant_partitions(name, H):
    cd = parse_algebra(name)
    rng = random.Random(name)
    for mult in ({a: 1 for a in cd.positive_roots}, {a: rng.randint(0, 2) for a in cd.positive_roots}):
        assert denominator_product(cd, mult, H).as_dict() == kostant(cd, mult, H)


def test_product_rejects_bad_input():
    with pytest.raises(ValueError):
        denominator_product(A2, {}, -1)
    with pytest.raises(ValueError):
        denominator_product(A2, {(1, 0): -1}, 2)


def test_b2_lagv_exponents():
    assert lagv_exponents(B2) == {(1, 0): 1, (0, 1): 1, (1, 1): 1, (1, 2): 2}


@pytest.mark.parametrize("n", range(1, 6))
def test_type_a_exponents_are_one(n):
    assert set(lagv_exponents(build_cartan("A", n)).values()) == {1}


def test_g2_lagpvm():
    m = lagpvm_exponents(G2, [2])
    assert m[(3, 2)] == 2 and m[(1, 0)] == 0
    assert lagpvm_exponents(G2, [1, 2]) == lagv_exponents(G2)
    with pytest.raises(ValueError):
        lagpvm_exponents(G2, [])


@pytest.mark.parametrize("name,J", [("A3", {1}), ("A3", {1, 3}), ("A4", {2, 3})])
def test_parabolic_verma_in_type_a(name, J):
    cd = parse_algebra(name)
    assert parabolic_verma_character(cd, J, 5) == denominator_product(cd, lagpvm_exponents(cd, J), 5)


def _nonzero(m):
    return {a: v for a, v in m.items() if v}


def test_a4_examples():
    spec = ConjSpec.make(A4, [{"orbit": "a", "S": {1: 0, 3: 0}, "U": {2: (1, 1)}}])
    m = _nonzero(charconj_exponents(spec)["a"])
    assert m == {(1, 0, 0, 0): 1, (0, 0, 1, 0): 1, (0, 0, 1, 1): 1, (1, 1, 1, 0): 1, (1, 1, 1, 1): 1}
    spec = ConjSpec.make(A4, [{"orbit": "a", "S": {2: 0}, "U": {1: (1, 1), 3: (1, 1)}}])
    assert _nonzero(charconj_exponents(spec)["a"]) == {(0, 1, 0, 0): 1}


def test_f4_example():
    spec = ConjSpec.make(F4, [{"orbit": "a", "S": {3: None}, "U": {2: (1, None), 4: (1, None)}}])
    m = _nonzero(charconj_exponents(spec)["a"])
    assert m == {(0, 0, 1, 0): 1, (0, 1, 2, 0): 1, (1, 1, 2, 0): 1}
    assert charconj_validate(spec).relaxed


def _d5(U):
    return ConjSpec.make(D5, [{"orbit": "a", "S": {2: None, 4: None, 5: None}, "U": {j: (n, None) for j, n in U.items()}}])


def test_d5_validation():
    bad = charconj_validate(_d5({1: 1, 3: 1}))
    assert not bad
    assert "n_a(3)=1 < |N_a(3)|-1=2" in str(bad)
    assert charconj_validate(_d5({1: 1, 3: 2}))
    assert neighbours_in_spec(D5, _d5({3: 1}).orbits[0], 3) == [2, 4, 5]
    with pytest.raises(ConjSpecError):
        charconj_exponents(_d5({1: 1, 3: 1}))


def test_validation_separation_and_offsets():
    unseparated = ConjSpec.make(A4, [{"orbit": "a", "S": {1: 0, 2: 0}}])
    assert "not separated" in str(charconj_validate(unseparated))
    wrong = ConjSpec.make(A4, [{"orbit": "a", "S": {1: 0, 3: 0}, "U": {2: (1, 3)}}])
    assert "expected 1" in str(charconj_validate(wrong))
    assert charconj_validate(default_offsets(ConjSpec.make(A4, [{"orbit": "a", "S": {1: None, 3: None}, "U": {2: (1, None)}}])))


def test_spec_shape_errors():
    with pytest.raises(ConjSpecError):
        ConjSpec.make(A4, [{"orbit": "a", "S": {1: 0}, "U": {1: (1, 0)}}])
    with pytest.raises(ConjSpecError):
        ConjSpec.make(A4, [{"orbit": "a", "S": {1: 0}}, {"orbit": "a", "S": {3: 0}}])


def test_spec_json_round_trip():
    spec = ConjSpec.make(F4, [{"orbit": "a", "S": {3: 0}, "U": {2: (1, 2), 4: (1, 1)}}, {"orbit": "b", "S": {1: None}}])
    assert ConjSpec.from_json(F4, spec.to_json()) == spec
    short = ConjSpec.from_json(F4, {"orbits": [{"orbit": "a", "S": [3], "U": {"2": 1}}]})
    assert short.orbits[0].u_map == {2: 1}


def test_paths():
    assert dynkin_path(D5, 1, 5) == [1, 2, 3, 5]
    assert path_sum(D5, [1, 2, 3]) == -2
    assert dynkin_path(F4, 2, 2) == [2]


STRAIGHT = ["A1", "A2", "A3", "A4", "A5", "A6", "B2", "B3", "B4", "B5", "B6", "C2", "C3", "C4", "C5", "C6", "F4", "G2"]


@pytest.mark.parametrize("name", STRAIGHT)
def test_least_affinization_chain_telescopes(name):
    # orbits {S={j1}}, {S={j2}, U={j1}}, ... sum to max over J by unimodality
    cd = parse_algebra(name)
    for k in range(1, cd.rank + 1):
        for J in itertools.combinations(cd.nodes, k):
            orbits = [OrbitSpec("a0", ((J[0], 0),))]
            orbits += [OrbitSpec(f"a{t}", ((J[t], 0),), ((J[t - 1], 1, 0),)) for t in range(1, len(J))]
            total = {a: sum(orbit_exponents(cd, o)[a] for o in orbits) for a in cd.positive_roots}
            assert total == lagpvm_exponents(cd, J)


@pytest.mark.parametrize("name", ["A3", "B2", "G2"])
def test_product_is_monotone_in_exponents(name):
    cd = parse_algebra(name)
    rng = random.Random(0)
    for _ in range(5):
        m1 = {a: rng.randint(0, 2) for a in cd.positive_roots}
        m2 = {a: v + rng.randint(0, 1) for a, v in m1.items()}
        p1, p2 = denominator_product(cd, m1, 5).as_dict(), denominator_product(cd, m2, 5)
        assert all(p2[b] >= c for b, c in p1.items())


def test_orbit_order_independence():
    orbits = [{"orbit": "a", "S": {1: 0, 3: 0}, "U": {2: (1, 1)}}, {"orbit": "b", "S": {2: 0}, "U": {1: (1, 1), 3: (1, 1)}}, {"orbit": "c", "S": {4: 0}}]
    ref = charconj_product(ConjSpec.make(A4, orbits), 5)
    for perm in itertools.permutations(orbits):
        assert charconj_product(ConjSpec.make(A4, list(perm)), 5) == ref


def test_realization_a4():
    spec = ConjSpec.make(A4, [{"orbit": "a", "S": {1: None, 3: None}, "U": {2: (1, None)}}])
    R = realize(spec)
    assert R.compensation == (None, None, 2)
    assert engine_character(A4, R.lweight, 4) == R.expected(spec, 4)


# --- Weyl characters ----------------------------------------------------------


def test_weyl_trivial_and_a1():
    assert weyl_character(A2, (0, 0)).as_dict() == {(0, 0): 1}
    A1 = parse_algebra("A1")
    for n in range(6):
        assert weyl_character(A1, (n,)).as_dict() == {(k,): 1 for k in range(n + 1)}
    assert weyl_character(A1, (9,), H=3).as_dict() == {(k,): 1 for k in range(4)}


@pytest.mark.parametrize(
    "name,lam,dim",
    [("A2", (1, 1), 8), ("B2", (0, 1), 4), ("B2", (1, 0), 5), ("G2", (1, 0), 7), ("G2", (0, 1), 14), ("F4", (0, 0, 0, 1), 26), ("E8", (0, 0, 0, 0, 0, 0, 0, 1), 248), ("D5", (1, 0, 0, 0, 0), 10)],
)
def test_weyl_dimensions(name, lam, dim):
    cd = parse_algebra(name)
    assert sum(weyl_character(cd, lam).as_dict().values()) == dim


def test_weyl_rejects_non_dominant():
    with pytest.raises(ValueError):
        weyl_character(A2, (1, -1))
    with pytest.raises(ValueError):
        weyl_character(A2, (1,))


def test_weyl_b2_decomposition_matches_engine():
    from qaffine.lweights import SpectralParam
    from qaffine.minaff import HighestWeightSpec, least_affinization

    f = least_affinization(HighestWeightSpec.make(B2, {1: 2, 2: 2}), 1, SpectralParam.make("a"))
    full = weyl_sum(B2, [(2, 2), (2, 0)])
    assert engine_character(B2, f, full.height + 1).as_dict() == full.as_dict()

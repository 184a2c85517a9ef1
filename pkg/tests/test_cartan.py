from fractions import Fraction

import pytest

from qaffine.cartan import (
    CartanError,
    build_cartan,
    coweight_pairing,
    is_unimodal_pairing,
    pairing,
    parse_algebra,
    q_binomial,
    root_leq,
)

ROOT_COUNTS = {
    ("A", 1): 1, ("A", 4): 10, ("B", 2): 4, ("B", 3): 9, ("C", 3): 9, ("D", 4): 12,
    ("D", 5): 20, ("E", 6): 36, ("E", 7): 63, ("E", 8): 120, ("F", 4): 24, ("G", 2): 6,
}


@pytest.mark.parametrize("key,count", sorted(ROOT_COUNTS.items()))
def test_number_of_positive_roots(key, count):
    assert len(build_cartan(*key).positive_roots) == count


@pytest.mark.parametrize("key", sorted(ROOT_COUNTS))
def test_roots_are_distinct_and_nonnegative(key):
    roots = build_cartan(*key).positive_roots
    assert len(set(roots)) == len(roots)
    assert all(min(a) >= 0 and sum(a) > 0 for a in roots)


def test_b2_conventions():
    cd = build_cartan("B", 2)
    # node 1 long, node 2 short
    assert cd.r == (2, 1)
    assert cd.B == ((4, -2), (-2, 2))
    assert set(cd.positive_roots) == {(1, 0), (0, 1), (1, 1), (1, 2)}


def test_g2_conventions():
    cd = build_cartan("G", 2)
    assert cd.r == (1, 3)
    assert (3, 2) in cd.positive_roots
    # the highest root is omega_2
    assert cd.fundamental_weight(2) == (Fraction(3), Fraction(2))


@pytest.mark.parametrize("name", ["A3", "B4", "C3", "D5", "E6", "F4", "G2"])
def test_b_is_symmetric(name):
    cd = parse_algebra(name)
    B = cd.B
    assert all(B[i][j] == B[j][i] for i in range(cd.rank) for j in range(cd.rank))


@pytest.mark.parametrize("name", ["A3", "B3", "C4", "F4", "G2", "E6"])
def test_fundamental_weights_invert_cartan(name):
    cd = parse_algebra(name)
    for i in cd.nodes:
        w = cd.fundamental_weight(i)
        # (omega_i, alpha_j^vee) = delta_ij, i.e. sum_k w_k C_jk = delta_ij
        for j in cd.nodes:
            assert sum(w[k] * cd.C[j - 1][k] for k in range(cd.rank)) == (1 if i == j else 0)


@pytest.mark.parametrize("text", ["X3", "A0", "B1", "D3", "E5", "F3", "G3", "", "A-1"])
def test_invalid_algebras(text):
    with pytest.raises(CartanError):
        parse_algebra(text)


def test_check_node():
    cd = build_cartan("A", 2)
    with pytest.raises(CartanError):
        cd.check_node(3)
    with pytest.raises(CartanError):
        coweight_pairing(cd, 0, (1, 1))


def test_pairing_and_order():
    cd = build_cartan("A", 2)
    assert pairing(cd, (1, 0), (0, 1)) == -1
    assert pairing(cd, (1, 1), (1, 1)) == 2
    assert root_leq((1, 0), (1, 1)) and not root_leq((1, 1), (0, 1))


STRAIGHT = [("A", n) for n in range(1, 7)] + [(l, n) for l in "BC" for n in range(2, 7)] + [("F", 4), ("G", 2)]


@pytest.mark.parametrize("letter,n", STRAIGHT)
def test_unimodal_pairings_in_straight_types(letter, n):
    cd = build_cartan(letter, n)
    assert all(is_unimodal_pairing(cd, a) for a in cd.positive_roots)


def test_q_binomial():
    assert q_binomial(4, 2) == {-4: 1, -2: 1, 0: 2, 2: 1, 4: 1}
    assert q_binomial(3, 0) == {0: 1}
    assert q_binomial(2, 1, level=2) == {-2: 1, 2: 1}
    with pytest.raises(ValueError):
        q_binomial(2, 3)


@pytest.mark.parametrize("n,m", [(n, m) for n in range(7) for m in range(n + 1)])
def test_q_binomial_at_q_one_is_binomial(n, m):
    from math import comb

    assert sum(q_binomial(n, m).values()) == comb(n, m)


def test_rank_two_closure_matches_reflection_orbits():
    # positive roots are the positive vectors in the Weyl orbit of the simple roots
    for name in ["A2", "B2", "G2", "A3", "B3"]:
        cd = parse_algebra(name)
        C = cd.C
        n = cd.rank

        def refl(i, v):
            c = sum(C[i][j] * v[j] for j in range(n))
            return tuple(v[k] - (c if k == i else 0) for k in range(n))

        seen = {cd.simple_root(i) for i in cd.nodes}
        todo = list(seen)
        while todo:
            v = todo.pop()
            for i in range(n):
                w = refl(i, v)
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        assert {v for v in seen if min(v) >= 0} == set(cd.positive_roots)
        assert all(min(v) >= 0 or max(v) <= 0 for v in seen)

"""Least affinizations, the affinization order and two closed-form q-character oracles.

All operations here need a straight labelling (types A, B, C, F, G), where
B_ij != 0 only for |i - j| <= 1.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Mapping

from .cartan import CartanData
from .characters import ClassicalCharacter, QCharacter
from .lweights import (
    ExpLike,
    LMonomial,
    QExponent,
    RationalFunction,
    RationalLWeight,
    SpectralParam,
    string_lweight,
)
from .sl2 import factor_into_strings


class AffinizationError(ValueError):
    """Invalid input for a least-affinization construction."""


def _require_straight(cd: CartanData) -> None:
    if not cd.straight:
        raise AffinizationError(f"type {cd.name} has no straight labelling")


@dataclass(frozen=True)
class HighestWeightSpec:
    """lambda = sum_i lam_i omega_i over a straight-labelled Cartan datum."""

    cd: CartanData
    lam: tuple[tuple[int, QExponent], ...]

    @staticmethod
    def make(cd: CartanData, lam: Mapping[int, ExpLike]) -> "HighestWeightSpec":
        _require_straight(cd)
        items = []
        for i, v in sorted(lam.items()):
            cd.check_node(int(i))
            v = QExponent.coerce(v)
            if v:
                items.append((int(i), v))
        if not items:
            raise AffinizationError("the highest weight has empty support")
        return HighestWeightSpec(cd, tuple(items))

    @property
    def support(self) -> list[int]:
        return [i for i, _ in self.lam]

    def coeff(self, i: int) -> QExponent:
        return dict(self.lam).get(i, QExponent())


def _pole_chain(spec: HighestWeightSpec, eps: int, c: SpectralParam) -> dict[int, SpectralParam]:
    """Poles c_i of the least affinization, with c at the first support node."""
    cd = spec.cd
    lam = [spec.coeff(i) for i in cd.nodes]
    start = spec.support[0]
    poles = {start: c}
    for i in range(start, cd.rank):
        bii, bjj, bij = cd.b(i, i), cd.b(i + 1, i + 1), cd.b(i, i + 1)
        if eps == 1:
            step = lam[i] * bjj - bij  # condition (I)
        else:
            step = -lam[i - 1] * bii + bij  # condition (II)
        poles[i + 1] = poles[i].shift(step)
    return poles


def least_affinization(spec: HighestWeightSpec, eps: int, c: SpectralParam) -> RationalLWeight:
    """The least affinization of V(lambda) with pole ``c`` at the first support node.

    ``eps=+1`` gives the family obeying condition (I), ``eps=-1`` the family obeying
    condition (II); the two are exchanged by :func:`~qaffine.lweights.dagger` up to a shift.
    """
    if eps not in (1, -1):
        raise AffinizationError("eps must be +1 or -1")
    cd = spec.cd
    poles = _pole_chain(spec, eps, c)
    comps = {}
    for i, lam in spec.lam:
        bii = cd.b(i, i)
        ci = poles[i]
        comps[i] = RationalFunction.make(lam * bii / 2, [(ci.shift(-lam * bii), 1), (ci, -1)])
    return RationalLWeight.from_components(comps, cd.rank)


def kr_lweight(cd: CartanData, k: int, mu: ExpLike, a: SpectralParam) -> RationalLWeight:
    """Kirillov-Reshetikhin l-weight: the string S_mu(a) in q_k at node k."""
    return string_lweight(cd, k, mu, a)


def single_strings(cd: CartanData, f: RationalLWeight) -> dict[int, tuple[QExponent, SpectralParam]] | None:
    """(lambda_i, pole c_i) per support node when every nontrivial component is one string."""
    out = {}
    for i in cd.nodes:
        comp = f.component(i)
        if comp.is_one():
            continue
        strings = factor_into_strings(comp, cd.r[i - 1])
        if len(strings) != 1:
            return None
        out[i] = (strings[0].mu, strings[0].end)
    return out


def check_least_conditions(cd: CartanData, f: RationalLWeight) -> bool:
    """True iff f has the shape of a least affinization (all of (I) or all of (II))."""
    _require_straight(cd)
    data = single_strings(cd, f)
    if not data:
        return False
    nodes = sorted(data)

    def holds(eps: int) -> bool:
        for s, t in zip(nodes, nodes[1:]):
            path = sum(cd.b(i, i + 1) for i in range(s, t))
            (ls, cs), (lt, ct) = data[s], data[t]
            if eps == 1:
                ok = ct.shift(-lt * cd.b(t, t)) == cs.shift(-path)
            else:
                ok = cs.shift(-ls * cd.b(s, s)) == ct.shift(-path)
            if not ok:
                return False
        return True

    return holds(1) or holds(-1)


# --- closed forms ---------------------------------------------------------------

def _end_string(cd: CartanData, i: int, lam: QExponent, pole: SpectralParam) -> RationalFunction:
    b = cd.b(i, i)
    return RationalFunction.make(lam * b / 2, [(pole.shift(-lam * b), 1), (pole, -1)])


def twonode_lweight(cd: CartanData, mu: ExpLike, nu: ExpLike, a: SpectralParam, c: SpectralParam) -> RationalLWeight:
    """f with strings of weights mu, nu and poles a, c at the end nodes 1 and N."""
    _require_straight(cd)
    n = cd.rank
    if n < 2:
        raise AffinizationError("two end nodes need rank >= 2")
    mu, nu = QExponent.coerce(mu), QExponent.coerce(nu)
    return RationalLWeight.from_components({1: _end_string(cd, 1, mu, a), n: _end_string(cd, n, nu, c)}, n)


def threenode_lweight(cd, j, mu, kappa, nu, a, b, c) -> RationalLWeight:
    """f with strings at nodes 1, j and N (poles a, b, c)."""
    _require_straight(cd)
    n = cd.rank
    if not 1 < j < n:
        raise AffinizationError(f"middle node {j} must lie strictly between 1 and {n}")
    mu, kappa, nu = (QExponent.coerce(x) for x in (mu, kappa, nu))
    comps = {1: _end_string(cd, 1, mu, a), j: _end_string(cd, j, kappa, b), n: _end_string(cd, n, nu, c)}
    return RationalLWeight.from_components(comps, n)


def _left_chain(cd: CartanData, a: SpectralParam) -> dict[int, SpectralParam]:
    out = {1: a}
    for i in range(1, cd.rank):
        out[i + 1] = out[i].shift(-cd.b(i, i + 1))
    return out


def _right_chain(cd: CartanData, c: SpectralParam) -> dict[int, SpectralParam]:
    n = cd.rank
    out = {n: c}
    for i in range(n, 1, -1):
        out[i - 1] = out[i].shift(-cd.b(i - 1, i))
    return out


def _mono(pairs) -> LMonomial:
    return LMonomial.make({k: -1 for k in pairs})


def _fks(cd, ach, cch, K, S) -> list:
    n = cd.rank
    return [(k, ach[k]) for k in range(1, K + 1)] + [(n + 1 - s, cch[n + 1 - s]) for s in range(1, S + 1)]


def twonodes_closed_form(cd: CartanData, mu, nu, a: SpectralParam, c: SpectralParam, M: int) -> QCharacter:
    """Level-M part of the q-character for end-node support (terms with 0/1 weight drops of height M)."""
    _require_straight(cd)
    n = cd.rank
    if not 0 <= M <= n:
        raise AffinizationError(f"level {M} outside 0..{n}")
    mu, nu = QExponent.coerce(mu), QExponent.coerce(nu)
    f = twonode_lweight(cd, mu, nu, a, c)
    ach, cch = _left_chain(cd, a), _right_chain(cd, c)
    terms: dict[LMonomial, int] = defaultdict(int)
    if M < n:
        for K in range(M + 1):
            terms[_mono(_fks(cd, ach, cch, K, M - K))] += 1
    else:
        for K in range(1, n):
            terms[_mono(_fks(cd, ach, cch, K, n - K))] += 1
        if ach[n] != c.shift(-nu * cd.b(n, n)):
            terms[_mono(_fks(cd, ach, cch, n, 0))] += 1
        if cch[1] != a.shift(-mu * cd.b(1, 1)):
            terms[_mono(_fks(cd, ach, cch, 0, n))] += 1
    return QCharacter.make(f, M, terms)


def twonodes_all_levels(cd: CartanData, mu, nu, a, c) -> QCharacter:
    terms: dict[LMonomial, int] = defaultdict(int)
    for M in range(cd.rank + 1):
        for m, k in twonodes_closed_form(cd, mu, nu, a, c, M).terms:
            terms[m] += k
    return QCharacter.make(twonode_lweight(cd, mu, nu, a, c), cd.rank, terms)


def xass_holds(cd: CartanData, j: int, kappa, a, b, c) -> bool:
    x = b.shift(-QExponent.coerce(kappa) * cd.b(j, j))
    return x in (_left_chain(cd, a)[j], _right_chain(cd, c)[j])


def threenodes_closed_form(cd: CartanData, j: int, mu, kappa, nu, a, b, c) -> QCharacter:
    """The q-character restricted to 0/1 weight drops (levels <= N) for support {1, j, N}.

    Raises
    ------
    AffinizationError
        When b q^(-kappa B_jj) is neither a_j nor c_j.
    """
    _require_straight(cd)
    n = cd.rank
    mu, kappa, nu = (QExponent.coerce(x) for x in (mu, kappa, nu))
    f = threenode_lweight(cd, j, mu, kappa, nu, a, b, c)
    if not xass_holds(cd, j, kappa, a, b, c):
        raise AffinizationError("b q^(-kappa B_jj) must equal a_j or c_j")
    ach, cch = _left_chain(cd, a), _right_chain(cd, c)
    bch = {j: b}
    for i in range(j, 1, -1):
        bch[i - 1] = bch[i].shift(-cd.b(i - 1, i))
    for i in range(j, n):
        bch[i + 1] = bch[i].shift(-cd.b(i, i + 1))
    x = b.shift(-kappa * cd.b(j, j))

    def d(p, q):
        return int(p == q)

    def dc(p, q):
        return int(p != q)

    terms: dict[LMonomial, int] = defaultdict(int)

    def fks(K, S, w=1):
        if w:
            terms[_mono(_fks(cd, ach, cch, K, S))] += w

    def fklrs(K, L, R, S, w=1):
        if not w:
            return
        pairs = [(j, b)] + [(k, ach[k]) for k in range(1, K + 1)]
        pairs += [(j - l, bch[j - l]) for l in range(1, L + 1)]
        pairs += [(j + r, bch[j + r]) for r in range(1, R + 1)]
        pairs += [(n + 1 - s, cch[n + 1 - s]) for s in range(1, S + 1)]
        terms[_mono(pairs)] += w

    for K in range(j):
        for S in range(n - j + 1):
            fks(K, S)
    for K in range(j, n):
        for S in range(n - K + 1):
            fks(K, S, dc(ach[j], x))
    for S in range(n - j + 1, n):
        for K in range(n - S + 1):
            fks(K, S, dc(cch[j], x))
    fks(n, 0, dc(ach[j], x) * dc(ach[n], c.shift(-nu * cd.b(n, n))))
    fks(0, n, dc(cch[j], x) * dc(cch[1], a.shift(-mu * cd.b(1, 1))))
    fks(j, n - j, d(ach[j], x) * d(cch[j], x))
    for L in range(j - 1):
        for K in range(j - L):
            for R in range(n - j):
                for S in range(n - j - R + 1):
                    fklrs(K, L, R, S)
    w1 = dc(bch[1], a.shift(-mu * cd.b(1, 1)))
    wn = dc(bch[n], c.shift(-nu * cd.b(n, n)))
    for R in range(n - j):
        for S in range(n - j - R + 1):
            fklrs(0, j - 1, R, S, w1)
    for L in range(j - 1):
        for K in range(j - L):
            fklrs(K, L, n - j, 0, wn)
    fklrs(0, j - 1, n - j, 0, w1 * wn)
    return QCharacter.make(f, n, terms)


def restrict_to_distinct_nodes(qc: QCharacter, top: int | None = None) -> QCharacter:
    """Keep only monomials whose weight drop is a 0/1 vector (lowering once per node at most)."""
    top = qc.height if top is None else top
    keep = [(m, k) for m, k in qc.terms if m.height() <= top and all(x in (0, 1) for x in m.weight_drop(qc.rank))]
    return QCharacter.make(qc.highest, top, keep)


# --- parameter helpers ------------------------------------------------------------

def twonode_params(cd: CartanData, mu, nu, relation: int | None = None) -> tuple[SpectralParam, SpectralParam]:
    """Poles (a, c): generic (distinct orbits) or tied by the first or second least relation."""
    n = cd.rank
    mu, nu = QExponent.coerce(mu), QExponent.coerce(nu)
    a = SpectralParam.make("a")
    path = sum(cd.b(i, i + 1) for i in range(1, n))
    if relation is None:
        return a, SpectralParam.make("c")
    if relation == 1:
        return a, a.shift(-path + nu * cd.b(n, n))
    if relation == 2:
        return a, a.shift(-mu * cd.b(1, 1) + path)
    raise AffinizationError(f"unknown relation {relation}")


def threenode_params(cd: CartanData, j: int, mu, kappa, nu, condition: str) -> tuple[SpectralParam, SpectralParam, SpectralParam]:
    """Poles (a, b, c) obeying condition "I", "II", "III" or "IV" of the three-node classification.

    In "III" the middle exponent is kappa (the lowering weight at node j).
    """
    n = cd.rank
    mu, kappa, nu = (QExponent.coerce(x) for x in (mu, kappa, nu))
    left = sum(cd.b(i, i + 1) for i in range(1, j))
    right = sum(cd.b(i, i + 1) for i in range(j, n))
    bjj, b11, bnn = cd.b(j, j), cd.b(1, 1), cd.b(n, n)
    a = SpectralParam.make("a")
    if condition in ("I", "III"):
        b = a.shift(-left + kappa * bjj)
        if condition == "I":
            c = b.shift(-right + nu * bnn)
        else:
            c = b.shift(-kappa * bjj + right)
    elif condition in ("II", "IV"):
        b = a.shift(-mu * b11 + left)
        if condition == "II":
            c = b.shift(-kappa * bjj + right)
        else:
            c = b.shift(-right + nu * bnn)
    else:
        raise AffinizationError(f"unknown condition {condition!r}")
    return a, b, c


# --- affinization order -------------------------------------------------------------

@dataclass(frozen=True)
class AffinizationVerdict:
    relation: str  # "equal", "precedes", "succeeds" or "incomparable"
    height: int
    first_drop: tuple[int, ...] | None = None

    def __str__(self) -> str:
        tail = f", first strict drop at {list(self.first_drop)}" if self.first_drop else ""
        return f"{self.relation} (certified up to height {self.height}{tail})"


def _weakly_precedes(x: dict, y: dict, betas: list) -> bool:
    lower = [b for b in betas if x.get(b, 0) < y.get(b, 0)]
    for alpha in betas:
        if x.get(alpha, 0) <= y.get(alpha, 0):
            continue
        if not any(all(s <= t for s, t in zip(b, alpha)) for b in lower):
            return False
    return True


def affinization_order(chi1: ClassicalCharacter, chi2: ClassicalCharacter) -> AffinizationVerdict:
    """Compare two normalized characters of affinizations of the same weight, up to their height."""
    if chi1.height != chi2.height:
        raise AffinizationError(f"heights differ: {chi1.height} vs {chi2.height}")
    x, y = chi1.as_dict(), chi2.as_dict()
    betas = sorted(set(x) | set(y), key=lambda b: (sum(b), b))
    p12 = _weakly_precedes(x, y, betas)
    p21 = _weakly_precedes(y, x, betas)
    if x == y:
        return AffinizationVerdict("equal", chi1.height)
    if p12 and not p21:
        first = next(b for b in betas if x.get(b, 0) < y.get(b, 0))
        return AffinizationVerdict("precedes", chi1.height, first)
    if p21 and not p12:
        first = next(b for b in betas if y.get(b, 0) < x.get(b, 0))
        return AffinizationVerdict("succeeds", chi1.height, first)
    return AffinizationVerdict("incomparable", chi1.height)

"""Cartan data for the simple Lie algebras of types A-G.

Node labelling (fixed for the whole package):

====  ==========================================================
type  convention
====  ==========================================================
A_n   chain 1-2-...-n
B_n   chain, nodes 1..n-1 long, node n short
C_n   chain, nodes 1..n-1 short, node n long
D_n   chain 1-...-(n-2), with n-1 and n both attached to n-2
E_n   Bourbaki: 1-3-4-5-6(-7-8) with 2 attached to 4
F_4   chain, nodes 1, 2 long and 3, 4 short
G_2   node 1 short, node 2 long
====  ==========================================================

The symmetrized matrix is ``B = D C`` with ``D = diag(r)``; long roots have
``(alpha, alpha) = 2`` and ``B_ij = r_check * (alpha_i, alpha_j)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

RootVector = tuple[int, ...]

_R_CHECK = {"A": 1, "D": 1, "E": 1, "B": 2, "C": 2, "F": 2, "G": 3}


class CartanError(ValueError):
    """Invalid algebra type, rank or node."""


def _inner_products(letter: str, n: int) -> list[list[Fraction]]:
    """Gram matrix of the simple roots, long roots of squared length 2."""
    g = [[Fraction(0)] * n for _ in range(n)]
    half = Fraction(1, 2)

    def link(i, j, v):
        g[i - 1][j - 1] = g[j - 1][i - 1] = Fraction(v)

    if letter in "ADE":
        for i in range(n):
            g[i][i] = Fraction(2)
        if letter == "A":
            for i in range(1, n):
                link(i, i + 1, -1)
        elif letter == "D":
            for i in range(1, n - 1):
                link(i, i + 1, -1)
            link(n - 2, n, -1)
        else:
            for i, j in [(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)] + [(k, k + 1) for k in range(6, n)]:
                link(i, j, -1)
    elif letter == "B":
        for i in range(n):
            g[i][i] = Fraction(2)
        g[n - 1][n - 1] = Fraction(1)
        for i in range(1, n):
            link(i, i + 1, -1)
    elif letter == "C":
        for i in range(n):
            g[i][i] = Fraction(1)
        g[n - 1][n - 1] = Fraction(2)
        for i in range(1, n - 1):
            link(i, i + 1, -half)
        link(n - 1, n, -1)
    elif letter == "F":
        for i, v in enumerate([2, 2, 1, 1]):
            g[i][i] = Fraction(v)
        link(1, 2, -1)
        link(2, 3, -1)
        link(3, 4, -half)
    elif letter == "G":
        g[0][0] = Fraction(2, 3)
        g[1][1] = Fraction(2)
        link(1, 2, -1)
    return g


def _valid(letter: str, n: int) -> bool:
    return (
        (letter == "A" and n >= 1)
        or (letter in "BC" and n >= 2)
        or (letter == "D" and n >= 4)
        or (letter == "E" and n in (6, 7, 8))
        or (letter == "F" and n == 4)
        or (letter == "G" and n == 2)
    )


def _closure(C: tuple[tuple[int, ...], ...]) -> tuple[RootVector, ...]:
    """Positive roots by the root-string closure, listed by height."""
    n = len(C)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    found = set(simple)
    layer = list(simple)
    roots = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            for i in range(n):
                # p = length of the alpha_i-string below beta
                p = 0
                down = list(beta)
                while True:
                    down[i] -= 1
                    if tuple(down) in found:
                        p += 1
                    else:
                        break
                pairing = sum(C[i][j] * beta[j] for j in range(n))
                if p - pairing > 0:
                    up = list(beta)
                    up[i] += 1
                    up = tuple(up)
                    if up not in found:
                        found.add(up)
                        nxt.append(up)
        nxt.sort(key=lambda v: tuple(-x for x in v))
        roots.extend(nxt)
        layer = nxt
    return tuple(roots)


@dataclass(frozen=True)
class CartanData:
    """Immutable Cartan data of a simple Lie algebra (nodes are 1-based in the API)."""

    type_letter: str
    rank: int
    C: tuple[tuple[int, ...], ...]
    r: tuple[int, ...]
    r_check: int
    positive_roots: tuple[RootVector, ...] = field(repr=False)

    @property
    def name(self) -> str:
        return f"{self.type_letter}{self.rank}"

    @property
    def B(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(self.r[i] * self.C[i][j] for j in range(self.rank)) for i in range(self.rank))

    @property
    def D(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(self.r[i] if i == j else 0 for j in range(self.rank)) for i in range(self.rank))

    @property
    def straight(self) -> bool:
        return self.type_letter in "ABCFG"

    @property
    def nodes(self) -> range:
        return range(1, self.rank + 1)

    def b(self, i: int, j: int) -> int:
        """Entry B_ij with 1-based nodes."""
        return self.r[i - 1] * self.C[i - 1][j - 1]

    def neighbours(self, i: int) -> list[int]:
        return [j for j in self.nodes if j != i and self.C[i - 1][j - 1] != 0]

    def check_node(self, i: int) -> None:
        if not isinstance(i, int) or not 1 <= i <= self.rank:
            raise CartanError(f"node {i!r} out of range for {self.name}")

    def zero(self) -> RootVector:
        return (0,) * self.rank

    def simple_root(self, i: int) -> RootVector:
        self.check_node(i)
        return tuple(int(j == i) for j in self.nodes)

    def fundamental_weight(self, i: int) -> tuple[Fraction, ...]:
        """omega_i in root coordinates."""
        self.check_node(i)
        return _fundamental_weights(self.C)[i - 1]

    def __str__(self) -> str:
        return self.name


@lru_cache(maxsize=None)
def _fundamental_weights(C: tuple[tuple[int, ...], ...]) -> tuple[tuple[Fraction, ...], ...]:
    # alpha_j = sum_i C_ij omega_i, so omega = (C^T)^{-1} alpha; Gauss-Jordan over Q
    n = len(C)
    m = [[Fraction(C[j][i]) for j in range(n)] + [Fraction(int(i == k)) for k in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return tuple(tuple(m[i][n:]) for i in range(n))


@lru_cache(maxsize=None)
def build_cartan(type_letter: str, rank: int) -> CartanData:
    """Build the Cartan data of type ``type_letter`` and rank ``rank``.

    Raises
    ------
    CartanError
        If the pair does not name a simple Lie algebra.
    """
    letter = str(type_letter).upper()
    if letter not in _R_CHECK or not isinstance(rank, int) or not _valid(letter, rank):
        raise CartanError(f"no simple Lie algebra of type {type_letter}{rank}")
    g = _inner_products(letter, rank)
    r_check = _R_CHECK[letter]
    r = tuple(int(r_check * g[i][i] / 2) for i in range(rank))
    C = tuple(tuple(int(2 * g[i][j] / g[i][i]) for j in range(rank)) for i in range(rank))
    return CartanData(letter, rank, C, r, r_check, _closure(C))


def parse_algebra(text: str) -> CartanData:
    """Parse strings such as ``"B4"`` or ``"g2"``."""
    m = re.fullmatch(r"\s*([A-Ga-g])\s*(\d+)\s*", str(text))
    if not m:
        raise CartanError(f"cannot parse algebra {text!r}")
    return build_cartan(m.group(1).upper(), int(m.group(2)))


def height(beta) -> int:
    return sum(beta)


def coweight_pairing(cd: CartanData, i: int, alpha) -> int:
    """<omega_i^vee, alpha>, i.e. the i-th coefficient of ``alpha``."""
    cd.check_node(i)
    if len(alpha) != cd.rank:
        raise CartanError(f"vector of length {len(alpha)} for {cd.name}")
    return alpha[i - 1]


def is_unimodal_pairing(cd: CartanData, alpha) -> bool:
    """True iff the coefficient tuple of ``alpha`` weakly rises and then weakly falls."""
    seq = [coweight_pairing(cd, i, alpha) for i in cd.nodes]
    k = 0
    while k + 1 < len(seq) and seq[k + 1] >= seq[k]:
        k += 1
    return all(seq[t + 1] <= seq[t] for t in range(k, len(seq) - 1))


def root_leq(beta, gamma) -> bool:
    """beta <= gamma in the dominance order (gamma - beta in Q+)."""
    return all(b <= g for b, g in zip(beta, gamma))


def pairing(cd: CartanData, beta, gamma) -> int:
    """Symmetric form (beta, gamma)_B = beta^T B gamma on root coordinates."""
    B = cd.B
    return sum(beta[i] * B[i][j] * gamma[j] for i in range(cd.rank) for j in range(cd.rank) if beta[i] and gamma[j])


def q_binomial(n: int, m: int, level: int = 1) -> dict[int, int]:
    """Symmetric q-binomial [n choose m] in q**level, as {exponent: coefficient}."""
    if n < 0 or m < 0 or m > n or level < 1:
        raise ValueError(f"q_binomial needs 0 <= m <= n, got n={n}, m={m}")
    return dict(_qbin(n, m, level))


@lru_cache(maxsize=None)
def _qbin(n: int, m: int, level: int) -> tuple[tuple[int, int], ...]:
    if m == 0 or m == n:
        return ((0, 1),)
    out: dict[int, int] = {}
    # [n,m] = q^m [n-1,m] + q^{-(n-m)} [n-1,m-1]
    for e, c in _qbin(n - 1, m, level):
        out[e + m * level] = out.get(e + m * level, 0) + c
    for e, c in _qbin(n - 1, m - 1, level):
        k = e - (n - m) * level
        out[k] = out.get(k, 0) + c
    return tuple(sorted((e, c) for e, c in out.items() if c))

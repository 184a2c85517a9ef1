"""Closed-form classical characters.

Truncated expansions of products prod_{alpha > 0} (1 - e^-alpha)^(-m_alpha),
the exponent rules for generic (parabolic) Verma least affinizations and for
orbit-wise specifications, a precondition validator for the latter, and
finite-dimensional Weyl characters by Freudenthal's recursion.

Characters are normalized: the coefficient at beta is the dimension of the
weight space of weight (highest weight - beta).
"""
from __future__ import annotations

import itertools
from collections import defaultdict, deque
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Mapping

from .cartan import CartanData, RootVector
from .characters import ClassicalCharacter
from .lweights import QExponent, RationalFunction, RationalLWeight, SpectralParam, string_function

ExponentFn = Callable[[RootVector], int]


class ConjSpecError(ValueError):
    """Malformed orbit specification."""


# --- products over positive roots ------------------------------------------------

def denominator_product(cd: CartanData, exponent_fn: ExponentFn | Mapping[RootVector, int], H: int) -> ClassicalCharacter:
    """Expand prod_{alpha > 0} (1 - e^-alpha)^(-m_alpha) up to height H.

    ``exponent_fn`` is a callable or a mapping on positive roots (missing roots
    count as 0).
    """
    if H < 0:
        raise ValueError("negative height")
    get = exponent_fn.get if isinstance(exponent_fn, Mapping) else exponent_fn
    acc: dict[RootVector, int] = {cd.zero(): 1}
    for alpha in cd.positive_roots:
        m = int(get(alpha) or 0)
        if m < 0:
            raise ValueError(f"negative exponent {m} at {alpha}")
        if m == 0:
            continue
        h = sum(alpha)
        kmax = H // h
        # (1 - x)^-m = sum_k C(m+k-1, k) x^k
        series = [comb(m + k - 1, k) for k in range(kmax + 1)]
        nxt: dict[RootVector, int] = defaultdict(int)
        for beta, c in acc.items():
            room = (H - sum(beta)) // h
            for k in range(min(kmax, room) + 1):
                nxt[tuple(b + k * a for b, a in zip(beta, alpha))] += c * series[k]
        acc = nxt
    return ClassicalCharacter.make(H, acc)


def lagpvm_exponents(cd: CartanData, J) -> dict[RootVector, int]:
    """alpha -> max_{j in J} <omega_j^vee, alpha>."""
    J = sorted(set(int(j) for j in J))
    if not J:
        raise ValueError("J must be nonempty")
    for j in J:
        cd.check_node(j)
    return {alpha: max(alpha[j - 1] for j in J) for alpha in cd.positive_roots}


def lagv_exponents(cd: CartanData) -> dict[RootVector, int]:
    """alpha -> max_i <omega_i^vee, alpha> (the largest coefficient of alpha)."""
    return lagpvm_exponents(cd, cd.nodes)


def parabolic_verma_character(cd: CartanData, J, H: int) -> ClassicalCharacter:
    """Character of the generic parabolic Verma module with support J, by root counting.

    Roots of the Levi subalgebra on the complement of J do not contribute; every
    other positive root contributes one factor.  This is the type A value of the
    products above, computed without the max rule.
    """
    J = set(int(j) for j in J)
    return denominator_product(cd, {a: int(any(a[j - 1] for j in J)) for a in cd.positive_roots}, H)


# --- Dynkin diagram paths -----------------------------------------------------------

def dynkin_path(cd: CartanData, i: int, j: int) -> list[int]:
    """Nodes of the smallest connected subdiagram containing i and j, from i to j."""
    cd.check_node(i)
    cd.check_node(j)
    prev = {i: None}
    todo = deque([i])
    while todo:
        x = todo.popleft()
        for y in cd.neighbours(x):
            if y not in prev:
                prev[y] = x
                todo.append(y)
    path = [j]
    while path[-1] != i:
        path.append(prev[path[-1]])
    return path[::-1]


def path_sum(cd: CartanData, path: list[int]) -> int:
    """sum_t B_{j_t, j_(t+1)} along a path (non-positive)."""
    return sum(cd.b(s, t) for s, t in zip(path, path[1:]))


# --- orbit-wise specifications ------------------------------------------------------

@dataclass(frozen=True)
class OrbitSpec:
    """The factors of f lying in one q^Z-class.

    ``S`` holds the nodes carrying a simple pole, with its offset; ``U`` the
    nodes carrying a zero of order n > 0, with (n, offset).  Offsets are integer
    powers of q relative to the class representative, or None when unknown.
    """

    orbit: str
    S: tuple[tuple[int, int | None], ...]
    U: tuple[tuple[int, int, int | None], ...] = ()

    @property
    def s_nodes(self) -> list[int]:
        return [i for i, _ in self.S]

    @property
    def u_map(self) -> dict[int, int]:
        return {j: n for j, n, _ in self.U}

    def has_offsets(self) -> bool:
        return all(r is not None for _, r in self.S) and all(r is not None for _, _, r in self.U)


@dataclass(frozen=True)
class ConjSpec:
    cd: CartanData
    orbits: tuple[OrbitSpec, ...]

    @staticmethod
    def make(cd: CartanData, orbits) -> "ConjSpec":
        out = []
        for o in orbits:
            if isinstance(o, OrbitSpec):
                out.append(o)
                continue
            S = tuple(sorted((int(i), None if r is None else int(r)) for i, r in dict(o.get("S", {})).items()))
            U = tuple(sorted((int(j), int(v[0]), None if v[1] is None else int(v[1])) for j, v in dict(o.get("U", {})).items()))
            out.append(OrbitSpec(str(o.get("orbit", f"a{len(out)}")), S, U))
        spec = ConjSpec(cd, tuple(out))
        spec.check_shape()
        return spec

    def check_shape(self) -> None:
        names = [o.orbit for o in self.orbits]
        if len(set(names)) != len(names):
            raise ConjSpecError("orbit names must be distinct")
        for o in self.orbits:
            for i in o.s_nodes + list(o.u_map):
                self.cd.check_node(i)
            if len(set(o.s_nodes)) != len(o.S) or len(o.u_map) != len(o.U):
                raise ConjSpecError(f"orbit {o.orbit}: repeated node")
            if set(o.s_nodes) & set(o.u_map):
                raise ConjSpecError(f"orbit {o.orbit}: a node is both a pole and a zero")
            if any(n <= 0 for n in o.u_map.values()):
                raise ConjSpecError(f"orbit {o.orbit}: zero orders must be positive")

    def to_json(self) -> dict:
        return {
            "algebra": self.cd.name,
            "orbits": [
                {
                    "orbit": o.orbit,
                    "S": {str(i): r for i, r in o.S},
                    "U": {str(j): [n, r] for j, n, r in o.U},
                }
                for o in self.orbits
            ],
        }

    @staticmethod
    def from_json(cd: CartanData, obj: Mapping) -> "ConjSpec":
        """Read ``{"orbits": [{"orbit": "a", "S": {"1": 0}, "U": {"2": [1, 1]}}]}``.

        U values are ``[n, offset]`` or a bare ``n``; offsets may be null.
        """
        orbits = []
        for o in obj.get("orbits", []):
            U = {}
            for j, v in dict(o.get("U", {})).items():
                U[j] = (v, None) if isinstance(v, int) else (v[0], v[1] if len(v) > 1 else None)
            S = o.get("S", {})
            if isinstance(S, list):
                S = {i: None for i in S}
            orbits.append({"orbit": o.get("orbit"), "S": S, "U": U})
        return ConjSpec.make(cd, orbits)


@dataclass(frozen=True)
class Validation:
    ok: bool
    reasons: tuple[str, ...] = ()
    relaxed: bool = False  # the offset condition was skipped

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        head = "valid" if self.ok else "invalid"
        if self.relaxed:
            head += " (relaxed: offsets not checked)"
        return "; ".join((head,) + self.reasons)


def neighbours_in_spec(cd: CartanData, o: OrbitSpec, j: int) -> list[int]:
    """N_a(j): poles i whose connecting subdiagram meets S and U only in {i, j}."""
    marked = set(o.s_nodes) | set(o.u_map)
    return [i for i in o.s_nodes if set(dynkin_path(cd, i, j)) & marked == {i, j}]


def charconj_validate(spec: ConjSpec) -> Validation:
    """Check conditions (1)-(3) on every orbit; returns a falsy result with reasons on failure."""
    cd = spec.cd
    reasons = []
    relaxed = False
    for o in spec.orbits:
        S, U = o.s_nodes, o.u_map
        for i, k in itertools.combinations(S, 2):
            if not set(dynkin_path(cd, i, k)) & set(U):
                reasons.append(f"orbit {o.orbit}: poles at {i} and {k} are not separated by a zero")
        if o.has_offsets():
            soff = dict(o.S)
            uoff = {j: r for j, _, r in o.U}
            for j in U:
                for i in neighbours_in_spec(cd, o, j):
                    want = soff[i] - path_sum(cd, dynkin_path(cd, i, j))
                    if uoff[j] != want:
                        reasons.append(f"orbit {o.orbit}: zero at node {j} has offset {uoff[j]}, expected {want} from the pole at {i}")
        else:
            relaxed = True
        for j, n in U.items():
            N = neighbours_in_spec(cd, o, j)
            if n < len(N) - 1:
                reasons.append(f"orbit {o.orbit}: n_a({j})={n} < |N_a({j})|-1={len(N) - 1}")
    return Validation(not reasons, tuple(reasons), relaxed)


def orbit_exponents(cd: CartanData, o: OrbitSpec) -> dict[RootVector, int]:
    U = o.u_map
    return {
        alpha: max(0, sum(alpha[i - 1] for i in o.s_nodes) - sum(n * alpha[j - 1] for j, n in U.items()))
        for alpha in cd.positive_roots
    }


def charconj_exponents(spec: ConjSpec, check: bool = True) -> dict[str, dict[RootVector, int]]:
    """Per-orbit exponent functions; raises ConjSpecError when ``check`` is set and validation fails."""
    if check:
        v = charconj_validate(spec)
        if not v:
            raise ConjSpecError(str(v))
    return {o.orbit: orbit_exponents(spec.cd, o) for o in spec.orbits}


def charconj_product(spec: ConjSpec, H: int, check: bool = True) -> ClassicalCharacter:
    """Product over orbits of the per-orbit characters, truncated at H."""
    out = ClassicalCharacter.make(H, {spec.cd.zero(): 1})
    for m in charconj_exponents(spec, check).values():
        out = out * denominator_product(spec.cd, m, H)
    return out


# --- realizing a specification as an l-weight ------------------------------------------

@dataclass(frozen=True)
class Realization:
    """An l-weight for a spec, with the generic classes added to balance each component.

    ``compensation`` lists, per added class, the node of its single pole (or None
    for a class carrying only a zero); each pole class contributes a
    Kirillov-Reshetikhin factor to the expected character.
    """

    lweight: RationalLWeight
    compensation: tuple[int | None, ...] = field(default=())

    def expected(self, spec: ConjSpec, H: int, check: bool = True) -> ClassicalCharacter:
        out = charconj_product(spec, H, check)
        for k in self.compensation:
            if k is not None:
                out = out * denominator_product(spec.cd, lagpvm_exponents(spec.cd, [k]), H)
        return out


def default_offsets(spec: ConjSpec) -> ConjSpec:
    """Fill unknown offsets: poles at 0, zeros by the offset rule from their first neighbouring pole."""
    cd = spec.cd
    out = []
    for o in spec.orbits:
        S = tuple((i, 0 if r is None else r) for i, r in o.S)
        soff = dict(S)
        filled = OrbitSpec(o.orbit, S, o.U)
        U = []
        for j, n, r in o.U:
            if r is None:
                N = neighbours_in_spec(cd, filled, j)
                r = soff[N[0]] - path_sum(cd, dynkin_path(cd, N[0], j)) if N else 0
            U.append((j, n, r))
        out.append(OrbitSpec(o.orbit, S, tuple(U)))
    return ConjSpec(cd, tuple(out))


def realize(spec: ConjSpec, symbol: str = "t") -> Realization:
    """Build f with the prescribed factors in each orbit.

    Every pole at a q^r is completed to the string whose zero sits at a q^(r - 2 t_k r_i)
    for a fresh symbol t_k, and every zero of order n to n strings with generic poles,
    so that each component is a rational l-weight.
    """
    spec = default_offsets(spec)
    cd = spec.cd
    comps: dict[int, RationalFunction] = {i: RationalFunction() for i in cd.nodes}
    comp_nodes: list[int | None] = []
    k = 0
    for o in spec.orbits:
        for i, r in o.S:
            k += 1
            lvl = cd.r[i - 1]
            mu = QExponent.symbol(f"{symbol}{k}")
            pole = SpectralParam.make(o.orbit, r)
            comps[i] = comps[i] * string_function(mu, pole.shift(-(mu - 1) * lvl), lvl)
            comp_nodes.append(None)
        for j, n, r in o.U:
            lvl = cd.r[j - 1]
            zero = SpectralParam.make(o.orbit, r)
            for _ in range(n):
                k += 1
                mu = QExponent.symbol(f"{symbol}{k}")
                comps[j] = comps[j] * string_function(mu, zero.shift((mu + 1) * lvl), lvl)
                comp_nodes.append(j)
    return Realization(RationalLWeight.from_components(comps, cd.rank).validate(), tuple(comp_nodes))


# --- Weyl characters ------------------------------------------------------------------------

def weyl_character(cd: CartanData, lam, H: int | None = None) -> ClassicalCharacter:
    """Normalized character of the simple module V(lambda), lambda given by Dynkin labels.

    Freudenthal's recursion with the form (alpha_i, alpha_j) = B_ij, so that
    (omega_i, alpha_j) = r_j delta_ij.  With ``H=None`` the whole character is
    returned (its height is that of the lowest weight).
    """
    lam = tuple(int(x) for x in lam)
    if len(lam) != cd.rank or any(x < 0 for x in lam):
        raise ValueError(f"weight {lam} is not dominant integral for {cd.name}")
    n = cd.rank
    B = cd.B
    roots = cd.positive_roots
    r = cd.r

    def form(beta, gamma) -> int:
        return sum(beta[i] * B[i][j] * gamma[j] for i in range(n) if beta[i] for j in range(n) if gamma[j])

    lam_on = {a: sum(lam[j] * r[j] * a[j] for j in range(n)) for a in roots}
    mult: dict[RootVector, int] = {cd.zero(): 1}
    level = [cd.zero()]
    h = 0
    while level and (H is None or h < H):
        h += 1
        cands = {tuple(b[i] + a[i] for i in range(n)) for b in level for a in roots if sum(a) == 1}
        # weights lambda - beta with beta of height h reachable by simple roots
        new = []
        for beta in sorted(cands):
            denom = 2 * sum((lam[j] + 1) * r[j] * beta[j] for j in range(n)) - form(beta, beta)
            total = 0
            for a in roots:
                k = 1
                while True:
                    g = tuple(beta[i] - k * a[i] for i in range(n))
                    if min(g) < 0:
                        break
                    m = mult.get(g, 0)
                    if m:
                        total += m * (lam_on[a] - form(g, a))
                    k += 1
            if denom == 0:
                # mu + rho is a Weyl conjugate of lambda + rho: not a weight
                continue
            val, rem = divmod(2 * total, denom)
            if rem:
                raise ArithmeticError(f"non-integral multiplicity at {beta}")
            if val:
                mult[beta] = val
                new.append(beta)
        level = new
    top = h if H is None else H
    if H is None and not level:
        top = h - 1
    return ClassicalCharacter.make(top, mult)


def weyl_sum(cd: CartanData, weights, H: int | None = None, shift=None) -> ClassicalCharacter:
    """Sum of Weyl characters of V(mu) for the given dominant weights, normalized at ``shift``.

    Every V(mu) is placed at beta = shift - mu, which must lie in Q+; ``shift``
    defaults to the first weight.
    """
    weights = [tuple(int(x) for x in w) for w in weights]
    top = weights[0] if shift is None else tuple(shift)
    acc: dict[RootVector, int] = defaultdict(int)
    parts = []
    for mu in weights:
        diff = [t - m for t, m in zip(top, mu)]
        # Dynkin labels -> root coordinates
        base = [sum(diff[i] * cd.fundamental_weight(i + 1)[k] for i in range(cd.rank)) for k in range(cd.rank)]
        if any(x.denominator != 1 or x < 0 for x in base):
            raise ValueError(f"{top} - {mu} is not in the positive root lattice")
        base = tuple(int(x) for x in base)
        if H is not None and sum(base) > H:
            continue
        parts.append((base, weyl_character(cd, mu, None if H is None else H - sum(base))))
    height = H if H is not None else max(sum(b) + c.height for b, c in parts)
    for base, ch in parts:
        for beta, c in ch.coeffs:
            acc[tuple(x + y for x, y in zip(base, beta))] += c
    return ClassicalCharacter.make(height, acc)

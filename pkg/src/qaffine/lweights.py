"""Rational l-weights with formal spectral parameters.

A spectral parameter is ``orbit * q**offset`` where the offset is a
:class:`QExponent`, a rational constant plus a rational combination of formal
symbols.  Distinct orbits and symbols are treated as generic: no two of them
are ever related by an integer power of q, and a symbol is never an integer.

Each component of an l-weight is stored as

    q**scalar * prod_a (1 - a u)**m_a

with multiplicities summing to zero in every orbit.  Together with
``2*scalar + sum m_a * offset(a) == 0`` this encodes regularity at 0 and
infinity with f(0) f(infinity) = 1.
"""
from __future__ import annotations

import json
import math
import re
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

from .cartan import CartanData

ExpLike = Union["QExponent", int, Fraction, str]


class LWeightError(ValueError):
    """Malformed exponent, parameter or l-weight."""


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float) and x.is_integer():
        return Fraction(int(x))
    raise LWeightError(f"not a rational number: {x!r}")


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True, order=False)
class QExponent:
    """Formal exponent ``const + sum coeff * symbol`` of q."""

    const: Fraction = Fraction(0)
    symbols: tuple[tuple[str, Fraction], ...] = ()

    @staticmethod
    def make(const=0, symbols: Mapping[str, object] | None = None) -> "QExponent":
        syms = {}
        for name, c in (symbols or {}).items():
            c = _frac(c)
            if c:
                syms[str(name)] = syms.get(str(name), Fraction(0)) + c
        return QExponent(_frac(const), tuple(sorted((k, v) for k, v in syms.items() if v)))

    @staticmethod
    def coerce(x: ExpLike) -> "QExponent":
        if isinstance(x, QExponent):
            return x
        if isinstance(x, (int, Fraction)):
            return QExponent(Fraction(x))
        if isinstance(x, str):
            return parse_exponent(x)
        if isinstance(x, Mapping):
            return QExponent.from_json(x)
        raise LWeightError(f"cannot interpret {x!r} as an exponent")

    @staticmethod
    def symbol(name: str, coeff=1) -> "QExponent":
        return QExponent.make(0, {name: coeff})

    @property
    def is_const(self) -> bool:
        return not self.symbols

    @property
    def is_integer(self) -> bool:
        return not self.symbols and self.const.denominator == 1

    def is_nonneg_integer(self) -> bool:
        return self.is_integer and self.const >= 0

    def __bool__(self) -> bool:
        return bool(self.const) or bool(self.symbols)

    def __add__(self, other: ExpLike) -> "QExponent":
        other = QExponent.coerce(other)
        d = dict(self.symbols)
        for k, v in other.symbols:
            d[k] = d.get(k, Fraction(0)) + v
        return QExponent(self.const + other.const, tuple(sorted((k, v) for k, v in d.items() if v)))

    __radd__ = __add__

    def __neg__(self) -> "QExponent":
        return QExponent(-self.const, tuple((k, -v) for k, v in self.symbols))

    def __sub__(self, other: ExpLike) -> "QExponent":
        return self + (-QExponent.coerce(other))

    def __rsub__(self, other: ExpLike) -> "QExponent":
        return QExponent.coerce(other) - self

    def __mul__(self, k) -> "QExponent":
        k = _frac(k)
        if not k:
            return QExponent()
        return QExponent(self.const * k, tuple((s, v * k) for s, v in self.symbols))

    __rmul__ = __mul__

    def __truediv__(self, k) -> "QExponent":
        return self * (1 / _frac(k))

    def sort_key(self):
        return (self.symbols, self.const)

    def class_part(self) -> tuple:
        """Part invariant under integer shifts: symbols and const mod 1."""
        return (self.symbols, self.const - math.floor(self.const))

    def int_part(self) -> int:
        return math.floor(self.const)

    def __str__(self) -> str:
        parts = []
        for name, c in self.symbols:
            if c == 1:
                parts.append(name)
            elif c == -1:
                parts.append(f"-{name}")
            else:
                parts.append(f"{_frac_str(c)}*{name}")
        if self.const or not parts:
            parts.append(_frac_str(self.const))
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def to_json(self) -> dict:
        return {"const": _frac_str(self.const), "symbols": {k: _frac_str(v) for k, v in self.symbols}}

    @staticmethod
    def from_json(obj) -> "QExponent":
        if isinstance(obj, Mapping):
            return QExponent.make(obj.get("const", 0), obj.get("symbols", {}))
        return QExponent.coerce(obj)


_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


@lru_cache(maxsize=4096)
def parse_exponent(text: str) -> QExponent:
    """Parse a linear expression such as ``"2*mu - 1/2"`` into a QExponent."""
    import sympy
    from sympy.parsing.sympy_parser import parse_expr

    names = set(_IDENT.findall(text))
    local = {n: sympy.Symbol(n) for n in names}
    try:
        expr = sympy.expand(parse_expr(text, local_dict=local, evaluate=True))
    except Exception as exc:  # sympy raises a zoo of exception types
        raise LWeightError(f"cannot parse exponent {text!r}") from exc
    const = Fraction(0)
    syms: dict[str, Fraction] = {}
    for term, coeff in expr.as_coefficients_dict().items():
        if not coeff.is_Rational:
            raise LWeightError(f"non-rational coefficient in {text!r}")
        c = Fraction(int(coeff.p), int(coeff.q))
        if term == 1:
            const += c
        elif term.is_Symbol:
            syms[term.name] = c
        else:
            raise LWeightError(f"exponent {text!r} is not linear in its symbols")
    return QExponent.make(const, syms)


def inverse_orbit(orbit: str) -> str:
    return orbit[:-3] if orbit.endswith("^-1") else orbit + "^-1"


@dataclass(frozen=True)
class SpectralParam:
    """The point ``orbit * q**offset``."""

    orbit: str
    offset: QExponent = QExponent()

    @staticmethod
    def make(orbit: str, offset: ExpLike = 0) -> "SpectralParam":
        return SpectralParam(str(orbit), QExponent.coerce(offset))

    def shift(self, e: ExpLike) -> "SpectralParam":
        return SpectralParam(self.orbit, self.offset + QExponent.coerce(e))

    def inverse(self) -> "SpectralParam":
        return SpectralParam(inverse_orbit(self.orbit), -self.offset)

    def class_key(self) -> tuple:
        return (self.orbit,) + self.offset.class_part()

    def sort_key(self):
        return (self.orbit, self.offset.sort_key())

    def __str__(self) -> str:
        return self.orbit if not self.offset else f"{self.orbit}q^({self.offset})"

    def to_json(self) -> dict:
        return {"orbit": self.orbit, "offset": self.offset.to_json()}


def _canon_factors(d: Mapping[SpectralParam, int]) -> tuple[tuple[SpectralParam, int], ...]:
    return tuple(sorted(((p, m) for p, m in d.items() if m), key=lambda t: t[0].sort_key()))


@dataclass(frozen=True)
class RationalFunction:
    """One component ``q**scalar * prod (1 - a u)**m``."""

    scalar: QExponent = QExponent()
    factors: tuple[tuple[SpectralParam, int], ...] = ()

    @staticmethod
    def make(scalar: ExpLike, factors: Mapping[SpectralParam, int] | Iterable = ()) -> "RationalFunction":
        d: dict[SpectralParam, int] = defaultdict(int)
        items = factors.items() if isinstance(factors, Mapping) else factors
        for p, m in items:
            d[p] += int(m)
        return RationalFunction(QExponent.coerce(scalar), _canon_factors(d))

    def factor_map(self) -> dict[SpectralParam, int]:
        return dict(self.factors)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        d = defaultdict(int, self.factors)
        for p, m in other.factors:
            d[p] += m
        return RationalFunction(self.scalar + other.scalar, _canon_factors(d))

    def inverse(self) -> "RationalFunction":
        return RationalFunction(-self.scalar, tuple((p, -m) for p, m in self.factors))

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        return self * other.inverse()

    def is_one(self) -> bool:
        return not self.factors and not self.scalar

    def shift(self, e: ExpLike) -> "RationalFunction":
        e = QExponent.coerce(e)
        return RationalFunction(self.scalar, _canon_factors({p.shift(e): m for p, m in self.factors}))

    def dagger(self) -> "RationalFunction":
        return RationalFunction(self.scalar, _canon_factors({p.inverse(): -m for p, m in self.factors}))

    def check(self) -> list[str]:
        """Return a list of violated invariants (empty when valid)."""
        bad = []
        per_orbit: dict[str, int] = defaultdict(int)
        total = self.scalar * 2
        for p, m in self.factors:
            per_orbit[p.orbit] += m
            total = total + p.offset * m
        for orbit, s in per_orbit.items():
            if s:
                bad.append(f"multiplicities in orbit {orbit} sum to {s}")
        if total:
            bad.append(f"f(0)f(inf) != 1 (exponent {total})")
        return bad

    def __str__(self) -> str:
        out = f"q^({self.scalar})" if self.scalar else "1"
        for p, m in self.factors:
            out += f" * (1 - {p} u)^{m}"
        return out


@dataclass(frozen=True)
class RationalLWeight:
    """A rational l-weight: one :class:`RationalFunction` per node."""

    comps: tuple[RationalFunction, ...]

    @staticmethod
    def identity(rank: int) -> "RationalLWeight":
        return RationalLWeight((RationalFunction(),) * rank)

    @staticmethod
    def from_components(comps: Mapping[int, RationalFunction] | Iterable[RationalFunction], rank: int | None = None):
        if isinstance(comps, Mapping):
            if rank is None:
                raise LWeightError("rank needed when components are given by node")
            return RationalLWeight(tuple(comps.get(i, RationalFunction()) for i in range(1, rank + 1)))
        return RationalLWeight(tuple(comps))

    @property
    def rank(self) -> int:
        return len(self.comps)

    def component(self, i: int) -> RationalFunction:
        return self.comps[i - 1]

    def _check_rank(self, other: "RationalLWeight") -> None:
        if other.rank != self.rank:
            raise LWeightError(f"rank mismatch {self.rank} vs {other.rank}")

    def __mul__(self, other: "RationalLWeight") -> "RationalLWeight":
        self._check_rank(other)
        return RationalLWeight(tuple(a * b for a, b in zip(self.comps, other.comps)))

    def inverse(self) -> "RationalLWeight":
        return RationalLWeight(tuple(c.inverse() for c in self.comps))

    def __truediv__(self, other: "RationalLWeight") -> "RationalLWeight":
        return self * other.inverse()

    def __pow__(self, n: int) -> "RationalLWeight":
        out = RationalLWeight.identity(self.rank)
        base = self if n >= 0 else self.inverse()
        for _ in range(abs(n)):
            out = out * base
        return out

    def is_identity(self) -> bool:
        return all(c.is_one() for c in self.comps)

    def orbits(self) -> set[str]:
        return {p.orbit for c in self.comps for p, _ in c.factors}

    def check(self) -> list[str]:
        return [f"node {i}: {msg}" for i, c in enumerate(self.comps, 1) for msg in c.check()]

    def validate(self) -> "RationalLWeight":
        bad = self.check()
        if bad:
            raise LWeightError("invalid l-weight: " + "; ".join(bad))
        return self

    def __str__(self) -> str:
        return "; ".join(f"[{i}] {c}" for i, c in enumerate(self.comps, 1))

    def to_json(self) -> dict:
        return {
            str(i): {
                "scalar": c.scalar.to_json(),
                "factors": [{"orbit": p.orbit, "offset": p.offset.to_json(), "mult": m} for p, m in c.factors],
            }
            for i, c in enumerate(self.comps, 1)
        }

    @staticmethod
    def from_json(obj: Mapping, rank: int) -> "RationalLWeight":
        comps = {}
        for key, val in obj.items():
            i = int(key)
            if not 1 <= i <= rank:
                raise LWeightError(f"node {key} out of range 1..{rank}")
            facs = [
                (SpectralParam.make(fa["orbit"], QExponent.from_json(fa.get("offset", 0))), int(fa["mult"]))
                for fa in val.get("factors", [])
            ]
            comps[i] = RationalFunction.make(QExponent.from_json(val.get("scalar", 0)), facs)
        return RationalLWeight.from_components(comps, rank).validate()


@dataclass(frozen=True)
class LMonomial:
    """Exponents n_{i,a} of f * prod A_{i,a}**n_{i,a} relative to a highest l-weight."""

    exps: tuple[tuple[tuple[int, SpectralParam], int], ...] = ()

    @staticmethod
    def make(d: Mapping[tuple[int, SpectralParam], int] | Iterable = ()) -> "LMonomial":
        acc: dict[tuple[int, SpectralParam], int] = defaultdict(int)
        items = d.items() if isinstance(d, Mapping) else d
        for k, n in items:
            acc[k] += int(n)
        return LMonomial(tuple(sorted(((k, n) for k, n in acc.items() if n), key=lambda t: (t[0][0], t[0][1].sort_key()))))

    def as_dict(self) -> dict[tuple[int, SpectralParam], int]:
        return dict(self.exps)

    def __mul__(self, other: "LMonomial") -> "LMonomial":
        d = defaultdict(int, self.exps)
        for k, n in other.exps:
            d[k] += n
        return LMonomial.make(d)

    def weight_drop(self, rank: int) -> tuple[int, ...]:
        beta = [0] * rank
        for (i, _), n in self.exps:
            beta[i - 1] -= n
        return tuple(beta)

    def height(self) -> int:
        return -sum(n for _, n in self.exps)

    def is_antidominant(self) -> bool:
        return all(n < 0 for _, n in self.exps)

    def sort_key(self):
        return (self.height(), [(i, p.sort_key(), n) for (i, p), n in self.exps])

    def __str__(self) -> str:
        if not self.exps:
            return "1"
        return " ".join(f"A[{i},{p}]^{n}" for (i, p), n in self.exps)

    def to_json(self) -> list:
        return [{"node": i, "orbit": p.orbit, "offset": p.offset.to_json(), "exp": n} for (i, p), n in self.exps]

    @staticmethod
    def from_json(obj) -> "LMonomial":
        return LMonomial.make(
            {(int(t["node"]), SpectralParam.make(t["orbit"], QExponent.from_json(t["offset"]))): int(t["exp"]) for t in obj}
        )


def root_component(cd: CartanData, j: int, i: int, a: SpectralParam) -> RationalFunction:
    """Component i of A_{j,a}: q^B (1 - q^-B a u) / (1 - q^B a u) with B = B_ji."""
    b = cd.b(j, i)
    if b == 0:
        return RationalFunction()
    return RationalFunction(QExponent(Fraction(b)), _canon_factors({a.shift(-b): 1, a.shift(b): -1}))


def simple_lroot(cd: CartanData, j: int, a: SpectralParam) -> RationalLWeight:
    """The simple l-root A_{j,a}."""
    cd.check_node(j)
    return RationalLWeight(tuple(root_component(cd, j, i, a) for i in cd.nodes))


def string_function(mu: ExpLike, a: SpectralParam, level: int = 1) -> RationalFunction:
    """S_mu(a) in the variable q**level: q_l^mu (1 - q_l^(-mu-1) a u) / (1 - q_l^(mu-1) a u)."""
    mu = QExponent.coerce(mu)
    # a list, not a dict: for mu = 0 both points coincide and must cancel
    return RationalFunction.make(mu * level, [(a.shift((-mu - 1) * level), 1), (a.shift((mu - 1) * level), -1)])


def string_lweight(cd: CartanData, k: int, mu: ExpLike, a: SpectralParam) -> RationalLWeight:
    """The l-weight with S_mu(a) (in q_k) at node k and 1 elsewhere."""
    cd.check_node(k)
    return RationalLWeight.from_components({k: string_function(mu, a, cd.r[k - 1])}, cd.rank)


def wt(f: RationalLWeight) -> tuple[QExponent, ...]:
    """Classical weight (f_i(0))_i as exponents of q."""
    return tuple(c.scalar for c in f.comps)


def dagger(f: RationalLWeight) -> RationalLWeight:
    """f_i^dag(u) = 1 / f_i(1/u)."""
    return RationalLWeight(tuple(c.dagger() for c in f.comps))


def shift(f: RationalLWeight, e: ExpLike) -> RationalLWeight:
    """(t f)(u) = f(q**e u): every spectral parameter is multiplied by q**e."""
    return RationalLWeight(tuple(c.shift(e) for c in f.comps))


def monomial_realize(cd: CartanData, f: RationalLWeight, m: LMonomial) -> RationalLWeight:
    """The l-weight f * prod A_{i,a}**n for the exponents of ``m``."""
    scal = [c.scalar for c in f.comps]
    facs = [defaultdict(int, c.factors) for c in f.comps]
    for (j, a), n in m.exps:
        for i in [j] + cd.neighbours(j):
            b = cd.b(j, i)
            scal[i - 1] = scal[i - 1] + b * n
            facs[i - 1][a.shift(-b)] += n
            facs[i - 1][a.shift(b)] -= n
    return RationalLWeight(tuple(RationalFunction(s, _canon_factors(d)) for s, d in zip(scal, facs)))


# --- A-exponent recovery -----------------------------------------------------

def _lp_mul(p: dict[int, Fraction], q: dict[int, Fraction]) -> dict[int, Fraction]:
    out: dict[int, Fraction] = defaultdict(Fraction)
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            out[e1 + e2] += c1 * c2
    return {e: c for e, c in out.items() if c}


def _lp_div_exact(num: dict[int, Fraction], den: dict[int, Fraction]) -> dict[int, Fraction] | None:
    """Exact Laurent division num / den, or None when den does not divide num."""
    if not num:
        return {}
    num = dict(num)
    dtop = max(den)
    dlead = den[dtop]
    qmin = min(num) - min(den)
    quo: dict[int, Fraction] = {}
    while num:
        top = max(num)
        if top - dtop < qmin:
            return None
        c = num[top] / dlead
        k = top - dtop
        quo[k] = c
        for e, d in den.items():
            v = num.get(e + k, Fraction(0)) - c * d
            if v:
                num[e + k] = v
            else:
                num.pop(e + k, None)
    return quo


@lru_cache(maxsize=None)
def _quantum_cartan_inverse(cd: CartanData):
    """Adjugate and determinant of M(x)_{ji} = x^-B_ji - x^B_ji as Laurent dicts."""
    import sympy

    x = sympy.Symbol("x")
    n = cd.rank
    M = sympy.Matrix(n, n, lambda j, i: x ** (-cd.B[j][i]) - x ** cd.B[j][i])
    shift = max(abs(b) for row in cd.B for b in row)
    Mp = sympy.expand(M * x**shift)

    def todict(expr, off):
        expr = sympy.expand(expr)
        if expr == 0:
            return {}
        poly = sympy.Poly(expr, x)
        return {int(m[0]) - off: Fraction(int(c)) for m, c in zip(poly.monoms(), poly.coeffs())}

    det = todict(Mp.det(method="berkowitz"), n * shift)
    adj = Mp.adjugate(method="berkowitz")
    adj_d = [[todict(adj[j, i], (n - 1) * shift) for i in range(n)] for j in range(n)]
    return adj_d, det


def recover_monomial(cd: CartanData, h: RationalLWeight) -> LMonomial | None:
    """Write h as prod A_{i,a}**n, or return None when h is not in the l-root group."""
    if h.rank != cd.rank:
        raise LWeightError("rank mismatch")
    if h.is_identity():
        return LMonomial()
    classes: dict[tuple, dict[int, dict[int, Fraction]]] = defaultdict(lambda: defaultdict(dict))
    reps: dict[tuple, SpectralParam] = {}
    for i, c in enumerate(h.comps):
        for p, m in c.factors:
            key = p.class_key()
            reps.setdefault(key, SpectralParam(p.orbit, p.offset - p.offset.int_part()))
            classes[key][i][p.offset.int_part()] = Fraction(m)
    adj, det = _quantum_cartan_inverse(cd)
    n = cd.rank
    out: dict[tuple[int, SpectralParam], int] = {}
    for key, F in classes.items():
        for j in range(n):
            num: dict[int, Fraction] = defaultdict(Fraction)
            for i, Fi in F.items():
                # N = F M^-1, so N_j = sum_i F_i adj(M)_{ij} / det(M)
                for e, c in _lp_mul(Fi, adj[i][j]).items():
                    num[e] += c
            num = {e: c for e, c in num.items() if c}
            quo = _lp_div_exact(num, det)
            if quo is None:
                return None
            for e, c in quo.items():
                if c.denominator != 1:
                    return None
                out[(j + 1, reps[key].shift(e))] = int(c)
    m = LMonomial.make(out)
    if monomial_realize(cd, RationalLWeight.identity(cd.rank), m) != h:
        return None
    return m


def lweight_leq(cd: CartanData, f: RationalLWeight, g: RationalLWeight) -> bool:
    """f <= g iff g f^-1 is a product of simple l-roots with non-negative exponents."""
    m = recover_monomial(cd, g / f)
    return m is not None and all(n >= 0 for _, n in m.exps)


def lweight_from_text(text: str, rank: int) -> RationalLWeight:
    """Parse the JSON form of an l-weight from a string."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LWeightError(f"invalid JSON: {exc}") from exc
    return RationalLWeight.from_json(obj, rank)


class PointTable:
    """Interns spectral parameters as integer pairs (class id, integer offset).

    Two parameters share a class id iff they differ by an integer power of q.
    """

    def __init__(self) -> None:
        self._ids: dict[tuple, int] = {}
        self.keys: list[tuple] = []
        self.orbit_id: list[int] = []
        self._orbits: dict[str, int] = {}

    def point(self, p: SpectralParam) -> tuple[int, int]:
        key = p.class_key()
        cid = self._ids.get(key)
        if cid is None:
            cid = len(self.keys)
            self._ids[key] = cid
            self.keys.append(key)
            self.orbit_id.append(self._orbits.setdefault(p.orbit, len(self._orbits)))
        return cid, p.offset.int_part()

    def param(self, cid: int, k: int) -> SpectralParam:
        orbit, symbols, frac = self.keys[cid]
        return SpectralParam(orbit, QExponent(frac + k, symbols))

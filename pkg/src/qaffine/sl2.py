"""Strings, general position and string factorization for a single node.

All functions take a ``level`` r so that they apply at a node with
q_i = q**r; ``level=1`` is plain sl2.  A string S_mu(a) starts at its zero
a q_i^(-mu-1) and ends at its pole a q_i^(mu-1).
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations

from .characters import QCharacter
from .lweights import (
    ExpLike,
    LMonomial,
    LWeightError,
    PointTable,
    QExponent,
    RationalFunction,
    RationalLWeight,
    SpectralParam,
    string_function,
)

Point = tuple[int, int]
MAX_SWAPS = 10_000
MAX_SEARCH = 7  # exhaustive pairing search bound after a stall


class FactorizationError(RuntimeError):
    """The swap procedure did not reach pairwise general position."""


@dataclass(frozen=True)
class StringDesc:
    """The string S_mu(a) in the variable q**level."""

    mu: QExponent
    a: SpectralParam
    level: int = 1

    @staticmethod
    def make(mu: ExpLike, a: SpectralParam, level: int = 1) -> "StringDesc":
        return StringDesc(QExponent.coerce(mu), a, level)

    @staticmethod
    def from_points(zero: SpectralParam, pole: SpectralParam, level: int = 1) -> "StringDesc":
        """The string with the given start (zero) and end (pole)."""
        mu = (pole.offset - zero.offset) / (2 * level)
        return StringDesc(mu, pole.shift((1 - mu) * level), level)

    @property
    def start(self) -> SpectralParam:
        return self.a.shift((-self.mu - 1) * self.level)

    @property
    def end(self) -> SpectralParam:
        return self.a.shift((self.mu - 1) * self.level)

    @property
    def finite(self) -> bool:
        return self.mu.is_nonneg_integer()

    def function(self) -> RationalFunction:
        return string_function(self.mu, self.a, self.level)

    def finite_set(self) -> list[SpectralParam]:
        if not self.finite:
            raise ValueError(f"{self} is not finite")
        return [self.start.shift(2 * self.level * t) for t in range(int(self.mu.const) + 1)]

    def sort_key(self):
        return (self.end.sort_key(), self.start.sort_key())

    def __str__(self) -> str:
        return f"S({self.mu}; {self.a.orbit}, {self.a.offset})"

    def to_json(self) -> dict:
        return {"mu": self.mu.to_json(), "orbit": self.a.orbit, "offset": self.a.offset.to_json(), "level": self.level}


# --- predicates on parameters --------------------------------------------------

def _left_of(x: SpectralParam, y: SpectralParam, step: int) -> bool:
    """x in y q^(-step Z>=0)."""
    if x.orbit != y.orbit:
        return False
    d = y.offset - x.offset
    return d.is_integer and d.const >= 0 and d.const % step == 0


def _inside(x: SpectralParam, s: StringDesc) -> bool:
    step = 2 * s.level
    return _left_of(s.start, x, step) and _left_of(x, s.end, step)


def general_position(s1: StringDesc, s2: StringDesc) -> bool:
    """General position of two non-trivial strings at the same level."""
    if s1.level != s2.level:
        raise ValueError("strings at different levels")
    step = 2 * s1.level
    f1, f2 = s1.finite, s2.finite
    if f1 and f2:
        set1, set2 = set(s1.finite_set()), set(s2.finite_set())
        return not (set1 & set2) or set1 <= set2 or set2 <= set1
    if f1 or f2:
        fin, inf = (s1, s2) if f1 else (s2, s1)
        return not _inside(inf.start, fin) and not _inside(inf.end, fin)
    return not _left_of(s1.start, s2.end, step) and not _left_of(s2.start, s1.end, step)


def tensor_irreducible(strings: list[StringDesc]) -> bool:
    """Irreducibility of the tensor product of the corresponding evaluation modules."""
    if not strings:
        raise ValueError("empty list of strings")
    return all(general_position(s, t) for s, t in combinations(strings, 2))


def ratio_irreducible(s1: StringDesc, s2: StringDesc) -> bool:
    """Irreducibility of V(mu)_a (x) V(nu)_b from the ratio test b/a.

    The pair is reducible iff a/b = q^(+-(mu + nu + 2 - 2p)) for some
    1 <= p <= min({mu, nu} & Z>=0) (unbounded when neither is finite).  This agrees
    with :func:`general_position` except when exactly one string is finite and the
    other starts at the finite start or ends at the finite end; those pairs are
    irreducible although :func:`general_position` rejects them.
    """
    if s1.level != s2.level:
        raise ValueError("strings at different levels")
    if s1.finite == s2.finite:
        return general_position(s1, s2)
    fin, inf = (s1, s2) if s1.finite else (s2, s1)
    bad_start = _inside(inf.start, fin) and inf.start != fin.start
    bad_end = _inside(inf.end, fin) and inf.end != fin.end
    return not bad_start and not bad_end


# --- integer-point core used by the expansion engine ---------------------------

def _finite_pts(z: Point, p: Point, step: int) -> bool:
    return z[0] == p[0] and p[1] >= z[1] and (p[1] - z[1]) % step == 0


def _left_pts(x: Point, y: Point, step: int) -> bool:
    return x[0] == y[0] and y[1] >= x[1] and (y[1] - x[1]) % step == 0


def _inside_pts(x: Point, z: Point, p: Point, step: int) -> bool:
    return x[0] == z[0] and z[1] <= x[1] <= p[1] and (x[1] - z[1]) % step == 0


def gp_points(s1: tuple[Point, Point], s2: tuple[Point, Point], step: int) -> bool:
    (z1, p1), (z2, p2) = s1, s2
    f1, f2 = _finite_pts(z1, p1, step), _finite_pts(z2, p2, step)
    if f1 and f2:
        if z1[0] != z2[0] or (z1[1] - z2[1]) % step:
            return True
        lo1, hi1, lo2, hi2 = z1[1], p1[1], z2[1], p2[1]
        if hi1 < lo2 or hi2 < lo1:
            return True
        return (lo1 <= lo2 and hi2 <= hi1) or (lo2 <= lo1 and hi1 <= hi2)
    if f1 or f2:
        (zf, pf), (zi, pi) = (s1, s2) if f1 else (s2, s1)
        return not _inside_pts(zi, zf, pf, step) and not _inside_pts(pi, zf, pf, step)
    return not _left_pts(z1, p2, step) and not _left_pts(z2, p1, step)


def ratio_points(s1: tuple[Point, Point], s2: tuple[Point, Point], step: int) -> bool:
    """Integer-point form of :func:`ratio_irreducible`."""
    (z1, p1), (z2, p2) = s1, s2
    f1, f2 = _finite_pts(z1, p1, step), _finite_pts(z2, p2, step)
    if f1 == f2:
        return gp_points(s1, s2, step)
    (zf, pf), (zi, pi) = (s1, s2) if f1 else (s2, s1)
    bad_start = _inside_pts(zi, zf, pf, step) and zi != zf
    bad_end = _inside_pts(pi, zf, pf, step) and pi != pf
    return not bad_start and not bad_end


# factor_points status values
GP, RATIO, STALLED = "gp", "ratio", "stalled"


def factor_points(
    factors: dict[Point, int], level: int, orbit_of, strict: bool = True
) -> tuple[list[tuple[Point, Point]], str]:
    """Pair zeros with poles into strings that are pairwise in general position.

    ``factors`` maps points to multiplicities (positive for zeros); ``orbit_of``
    maps a class id to its orbit id.  Returns the (zero, pole) pairs and a status:
    ``GP`` when they are pairwise in general position, ``RATIO`` when the swaps
    stall but the pairs pass :func:`ratio_points` (so the tensor product is still
    irreducible), ``STALLED`` otherwise.  Stalling happens for instance when two
    strings share their start, so that swapping their ends changes nothing.  With
    ``strict`` a stalled factorization raises :class:`FactorizationError`.
    """
    step = 2 * level
    zeros: dict[int, list[Point]] = {}
    poles: dict[int, list[Point]] = {}
    for pt, m in sorted(factors.items()):
        side = zeros if m > 0 else poles
        side.setdefault(orbit_of(pt[0]), []).extend([pt] * abs(m))
    strings: list[tuple[Point, Point]] = []
    for orb in sorted(set(zeros) | set(poles)):
        zs, ps = list(zeros.get(orb, [])), poles.get(orb, [])
        if len(zs) != len(ps):
            raise LWeightError("component is not degree balanced in some orbit")
        rest = []
        for p in ps:
            # prefer the nearest zero that makes a finite string
            best = None
            for idx, z in enumerate(zs):
                if _finite_pts(z, p, step) and (best is None or z[1] > zs[best][1]):
                    best = idx
            if best is None:
                rest.append(p)
            else:
                strings.append((zs.pop(best), p))
        strings.extend(zip(zs, rest))
    strings = sorted(s for s in strings if s[0] != s[1])
    seen = set()
    fallback = None
    for _ in range(MAX_SWAPS):
        strings.sort(key=lambda s: (s[1], s[0]))
        state = tuple(strings)
        bad = next(
            ((i, j) for i in range(len(strings)) for j in range(i + 1, len(strings)) if not gp_points(strings[i], strings[j], step)),
            None,
        )
        if bad is None:
            return strings, GP
        if fallback is None and all(ratio_points(s, t, step) for s, t in combinations(strings, 2)):
            fallback = list(strings)
        if state in seen:
            break
        seen.add(state)
        i, j = bad
        (z1, p1), (z2, p2) = strings[i], strings[j]
        new = [s for s in ((z1, p2), (z2, p1)) if s[0] != s[1]]
        strings = [s for t, s in enumerate(strings) if t not in (i, j)] + new
    # the swaps stalled: search all pairings when that is cheap
    if len(strings) <= MAX_SEARCH:
        found = _search_pairing(strings, step, gp_points, orbit_of)
        if found is not None:
            return found, GP
    if fallback is None and len(strings) <= MAX_SEARCH:
        fallback = _search_pairing(strings, step, ratio_points, orbit_of)
    if fallback is not None:
        return fallback, RATIO
    if strict:
        raise FactorizationError("the swap procedure does not reach an irreducible factorization")
    return strings, STALLED


def _search_pairing(strings, step, ok, orbit_of):
    """Some re-pairing of zeros and poles (within each orbit) whose pairs all pass ``ok``."""
    groups: dict[int, list] = {}
    for z, p in strings:
        groups.setdefault(orbit_of(z[0]), []).append((z, p))
    out = []
    for orb in sorted(groups):
        zs = [z for z, _ in groups[orb]]
        for perm in sorted(set(permutations(p for _, p in groups[orb]))):
            cand = [(z, p) for z, p in zip(zs, perm) if z != p]
            if all(ok(a, b, step) for a, b in combinations(cand, 2)):
                out.extend(cand)
                break
        else:
            return None
    return sorted(out, key=lambda s: (s[1], s[0]))


def ladder_length(z: Point, p: Point, level: int) -> int | None:
    """Number of steps of the string ladder, None when unbounded."""
    step = 2 * level
    return (p[1] - z[1]) // step if _finite_pts(z, p, step) else None


# --- public factorization ------------------------------------------------------

def factor_into_strings(f: RationalFunction, level: int = 1) -> list[StringDesc]:
    """Write one l-weight component as a product of pairwise general-position strings."""
    bad = f.check()
    if bad:
        raise LWeightError("; ".join(bad))
    table = PointTable()
    pts = {table.point(p): m for p, m in f.factors}
    pairs, status = factor_points(pts, level, lambda cid: table.orbit_id[cid])
    if status != GP:
        raise FactorizationError("no factorization into pairwise general-position strings")
    out = [StringDesc.from_points(table.param(*z), table.param(*p), level) for z, p in pairs]
    return sorted(out, key=StringDesc.sort_key)


def strings_product(strings: list[StringDesc]) -> RationalFunction:
    out = RationalFunction()
    for s in strings:
        out = out * s.function()
    return out


def string_qchar(s: StringDesc, H: int) -> QCharacter:
    """q-character of the evaluation module with highest l-weight ``s`` (sl2, level 1).

    The ladder descends from the pole: A_{1, a q^(mu-1)}^-1, A_{1, a q^(mu-3)}^-1, ...
    """
    if H < 0:
        raise ValueError("negative height")
    if s.level != 1:
        raise ValueError("string_qchar is the sl2 character; use level 1")
    steps = H if not s.finite else min(H, int(s.mu.const))
    terms = {}
    mono: dict = {}
    terms[LMonomial()] = 1
    for ell in range(steps):
        mono[(1, s.end.shift(-2 * ell))] = -1
        terms[LMonomial.make(mono)] = 1
    return QCharacter.make(RationalLWeight((s.function(),)), H, terms)

"""Height-truncated q-characters by iterated node-wise expansion.

The worklist runs over heights.  Every monomial m carries, per node i, the
amount s_i(m) of its multiplicity already explained by i-ladders coming from
above, and its multiplicity is s(m) = max_i s_i(m) (1 for the highest
monomial).  When m is reached, each node i with s(m) > s_i(m) starts
s(m) - s_i(m) new i-ladders at m: the i-component of m is factored into
strings whose tensor product is irreducible (see :func:`~qaffine.sl2.factor_points`)
and the product of their ladders is inserted below m.  Monomials inside the inserted ladders are marked i-explained.

Internally spectral parameters are interned as integer points (see
:class:`~qaffine.lweights.PointTable`) and monomials are sorted tuples of
((node, class, offset), exponent) with 0-based nodes.
"""
from __future__ import annotations

import random
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

from .cartan import CartanData
from .characters import ClassicalCharacter, QCharacter
from .lweights import LMonomial, PointTable, RationalLWeight
from .sl2 import STALLED, FactorizationError, factor_points, ladder_length

DEFAULT_BUDGET = 2_000_000

Key = tuple[int, int, int]
Mono = tuple[tuple[Key, int], ...]


class BudgetExceeded(RuntimeError):
    """The number of monomials exceeded the configured budget."""


class ExpansionError(RuntimeError):
    """A node component could not be factored into strings with irreducible tensor product."""


def _merge(m: Mono, delta: Mono) -> Mono:
    d = dict(m)
    for k, n in delta:
        v = d.get(k, 0) + n
        if v:
            d[k] = v
        else:
            del d[k]
    return tuple(sorted(d.items()))


class Expander:
    """Expansion engine for one highest l-weight."""

    def __init__(self, cd: CartanData, f: RationalLWeight, budget: int = DEFAULT_BUDGET, strict: bool = True) -> None:
        if f.rank != cd.rank:
            raise ValueError(f"l-weight of rank {f.rank} for {cd.name}")
        f.validate()
        self.cd = cd
        self.f = f
        self.budget = budget
        self.strict = strict
        # components expanded without a general-position factorization
        self.irregular: set[tuple[int, tuple]] = set()
        self.table = PointTable()
        params = sorted({p for c in f.comps for p, _ in c.factors}, key=lambda p: p.sort_key())
        for p in params:
            self.table.point(p)
        self.base = [{self.table.point(p): m for p, m in c.factors} for c in f.comps]
        n = cd.rank
        B = cd.B
        # for node i: the nodes j with B_ji != 0, with that entry
        self.touch = [[(j, B[j][i]) for j in range(n) if B[j][i]] for i in range(n)]
        self._cache: dict = {}

    # -- single-node data ----------------------------------------------------

    def component(self, m: Mono, i: int) -> tuple:
        """Factor map of the i-th component of f * prod A^n, as a sorted tuple."""
        comp = dict(self.base[i])
        touch = dict(self.touch[i])
        for (j, cid, k), n in m:
            b = touch.get(j)
            if b is None:
                continue
            for pt, v in (((cid, k - b), n), ((cid, k + b), -n)):
                w = comp.get(pt, 0) + v
                if w:
                    comp[pt] = w
                else:
                    comp.pop(pt, None)
        return tuple(sorted(comp.items()))

    def ladders(self, i: int, comp: tuple, hrem: int) -> list[tuple[Mono, int]]:
        """Product of the i-ladders of the strings of ``comp``, truncated at ``hrem`` steps."""
        key = (i, comp, hrem)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        level = self.cd.r[i]
        try:
            pairs, status = factor_points(dict(comp), level, lambda cid: self.table.orbit_id[cid], self.strict)
        except (FactorizationError, ValueError) as exc:
            raise ExpansionError(f"node {i + 1}: component {self.describe(comp)} is outside the string regime: {exc}") from exc
        if status == STALLED:
            self.irregular.add((i, comp))
        acc: dict[tuple, int] = {(): 1}
        for z, p in pairs:
            length = ladder_length(z, p, level)
            nxt: dict[tuple, int] = defaultdict(int)
            for delta, c in acc.items():
                used = -sum(n for _, n in delta)
                top = hrem - used
                if length is not None:
                    top = min(top, length)
                d = dict(delta)
                nxt[delta] += c
                for t in range(top):
                    pt = (i, p[0], p[1] - 2 * level * t)
                    d[pt] = d.get(pt, 0) - 1
                    nxt[tuple(sorted(d.items()))] += c
            acc = nxt
        out = sorted(acc.items())
        self._cache[key] = out
        return out

    # -- full expansion ----------------------------------------------------------

    def run(self, H: int, threads: int = 1, order_seed: int | None = None) -> dict[Mono, int]:
        if H < 0:
            raise ValueError("negative height")
        n = self.cd.rank
        top: Mono = ()
        mult: dict[Mono, int] = {top: 1}
        explained: dict[Mono, list[int]] = {top: [0] * n}
        levels: list[set] = [set() for _ in range(H + 1)]
        levels[0].add(top)
        rng = random.Random(order_seed) if order_seed is not None else None
        pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
        try:
            for h in range(H + 1):
                todo = sorted(levels[h])
                if rng is not None:
                    rng.shuffle(todo)
                for m in todo:
                    s_i = explained[m]
                    mult[m] = max(mult.get(m, 0), max(s_i))
                items = [(m, i) for m in todo for i in range(n) if mult[m] > explained[m][i]]

                def work(item, h=h):
                    m, i = item
                    return self.ladders(i, self.component(m, i), H - h)

                results = list(pool.map(work, items)) if pool else [work(it) for it in items]
                for (m, i), lad in zip(items, results):
                    d = mult[m] - explained[m][i]
                    for delta, k in lad:
                        if not delta:
                            continue
                        m2 = _merge(m, delta)
                        s2 = explained.get(m2)
                        if s2 is None:
                            s2 = explained[m2] = [0] * n
                            levels[h - sum(v for _, v in delta)].add(m2)
                            if len(explained) > self.budget:
                                raise BudgetExceeded(f"more than {self.budget} monomials below height {H}")
                        s2[i] += d * k
                    explained[m][i] = mult[m]
        finally:
            if pool:
                pool.shutdown()
        return mult

    def describe(self, comp: tuple) -> str:
        return "{" + ", ".join(f"{self.table.param(*pt)}:{m}" for pt, m in comp) + "}"

    def irregular_report(self) -> tuple[str, ...]:
        return tuple(sorted(f"node {i + 1}: {self.describe(comp)}" for i, comp in self.irregular))

    def to_lmonomial(self, m: Mono) -> LMonomial:
        return LMonomial.make({(j + 1, self.table.param(cid, k)): e for (j, cid, k), e in m})


def _drop(m: Mono, n: int) -> tuple[int, ...]:
    beta = [0] * n
    for (j, _, _), e in m:
        beta[j] -= e
    return tuple(beta)


def truncated_qchar(
    cd: CartanData,
    f: RationalLWeight,
    H: int,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    order_seed: int | None = None,
    strict: bool = True,
) -> QCharacter:
    """q-character of L(f) restricted to weight drops of height <= H.

    Parameters
    ----------
    cd, f
        Cartan data and highest l-weight.
    H
        Height bound.
    budget
        Maximal number of monomials before :class:`BudgetExceeded` is raised.
    threads
        Worker threads for the per-level expansions; the result does not depend on it.
    order_seed
        If given, shuffle the processing order within each level (the result does not change).
    strict
        Raise :class:`ExpansionError` when a component has no factorization into
        strings with an irreducible tensor product.  With ``strict=False`` the
        stalled factorization is expanded anyway and the component is listed in
        ``QCharacter.irregular``.
    """
    eng = Expander(cd, f, budget, strict)
    mult = eng.run(H, threads=threads, order_seed=order_seed)
    return QCharacter.make(f, H, [(eng.to_lmonomial(m), c) for m, c in mult.items()], eng.irregular_report())


def engine_character(cd: CartanData, f: RationalLWeight, H: int, budget: int = DEFAULT_BUDGET, threads: int = 1) -> ClassicalCharacter:
    """classical_char(truncated_qchar(...)) without building LMonomial objects."""
    mult = Expander(cd, f, budget).run(H, threads=threads)
    acc: dict[tuple[int, ...], int] = defaultdict(int)
    for m, c in mult.items():
        acc[_drop(m, cd.rank)] += c
    return ClassicalCharacter.make(H, acc)


def expand_node(cd: CartanData, f: RationalLWeight, m: LMonomial, i: int, H: int, strict: bool = True) -> QCharacter:
    """The i-ladders through m: m times the product of the string ladders of its i-th component."""
    cd.check_node(i)
    eng = Expander(cd, f, strict=strict)
    internal = tuple(sorted(((j - 1,) + eng.table.point(p), e) for (j, p), e in m.exps))
    hrem = H - m.height()
    if hrem < 0:
        return QCharacter.make(f, H, {})
    out = {}
    for delta, k in eng.ladders(i - 1, eng.component(internal, i - 1), hrem):
        out[eng.to_lmonomial(_merge(internal, delta))] = k
    return QCharacter.make(f, H, out, eng.irregular_report())


def classical_char(qc: QCharacter) -> ClassicalCharacter:
    return qc.classical()


def stabilization_check(
    cd: CartanData,
    family: Callable[[int], RationalLWeight],
    H: int,
    n_max: int,
    n_min: int = 0,
    budget: int = DEFAULT_BUDGET,
) -> tuple[int | None, dict[int, ClassicalCharacter]]:
    """Least n0 such that the normalized character of family(n) is constant for n0 <= n <= n_max.

    Returns ``(n0, characters)``.  n0 is None when family(n_max - 1) and
    family(n_max) already differ, so no stabilization is visible in the range.
    """
    chars = {n: engine_character(cd, family(n), H, budget) for n in range(n_min, n_max + 1)}
    n0 = n_max
    while n0 > n_min and chars[n0 - 1] == chars[n_max]:
        n0 -= 1
    if n0 == n_max and n_max > n_min:
        return None, chars
    return n0, chars

"""Truncated q-characters and normalized classical characters."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .lweights import LMonomial, RationalLWeight

Beta = tuple[int, ...]


def _beta_key(beta: Beta):
    return (sum(beta), beta)


@dataclass(frozen=True)
class ClassicalCharacter:
    """Normalized character truncated at height H: beta -> dim of weight lambda - beta."""

    height: int
    coeffs: tuple[tuple[Beta, int], ...] = field(default=())

    @staticmethod
    def make(height: int, coeffs: Mapping[Beta, int] | Iterable) -> "ClassicalCharacter":
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[Beta, int] = defaultdict(int)
        for beta, c in items:
            beta = tuple(int(x) for x in beta)
            if sum(beta) <= height:
                acc[beta] += int(c)
        return ClassicalCharacter(height, tuple(sorted(((b, c) for b, c in acc.items() if c), key=lambda t: _beta_key(t[0]))))

    @property
    def rank(self) -> int:
        return len(self.coeffs[0][0]) if self.coeffs else 0

    def as_dict(self) -> dict[Beta, int]:
        return dict(self.coeffs)

    def __getitem__(self, beta) -> int:
        return self.as_dict().get(tuple(beta), 0)

    def restrict(self, height: int) -> "ClassicalCharacter":
        if height > self.height:
            raise ValueError(f"cannot extend a character truncated at {self.height} to {height}")
        return ClassicalCharacter.make(height, self.coeffs)

    def __mul__(self, other: "ClassicalCharacter") -> "ClassicalCharacter":
        h = min(self.height, other.height)
        acc: dict[Beta, int] = defaultdict(int)
        for b1, c1 in self.coeffs:
            s1 = sum(b1)
            for b2, c2 in other.coeffs:
                if s1 + sum(b2) <= h:
                    acc[tuple(x + y for x, y in zip(b1, b2))] += c1 * c2
        return ClassicalCharacter.make(h, acc)

    def first_difference(self, other: "ClassicalCharacter") -> tuple[Beta, int, int] | None:
        """Least beta (height, then lexicographic) where the two differ, with both values."""
        h = min(self.height, other.height)
        a, b = self.as_dict(), other.as_dict()
        for beta in sorted(set(a) | set(b), key=_beta_key):
            if sum(beta) <= h and a.get(beta, 0) != b.get(beta, 0):
                return beta, a.get(beta, 0), b.get(beta, 0)
        return None

    def to_json(self) -> dict:
        return {"height": self.height, "coeffs": [{"beta": list(b), "mult": c} for b, c in self.coeffs]}

    @staticmethod
    def from_json(obj: Mapping) -> "ClassicalCharacter":
        return ClassicalCharacter.make(int(obj["height"]), [(tuple(t["beta"]), t["mult"]) for t in obj["coeffs"]])

    def __str__(self) -> str:
        return ", ".join(f"{list(b)}:{c}" for b, c in self.coeffs)


@dataclass(frozen=True)
class QCharacter:
    """Height-truncated q-character: monomials relative to ``highest`` with multiplicities."""

    highest: RationalLWeight
    height: int
    terms: tuple[tuple[LMonomial, int], ...] = ()
    # node components expanded without a general-position string factorization
    irregular: tuple[str, ...] = ()

    @staticmethod
    def make(highest: RationalLWeight, height: int, terms: Mapping[LMonomial, int] | Iterable, irregular=()) -> "QCharacter":
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[LMonomial, int] = defaultdict(int)
        for m, c in items:
            acc[m] += int(c)
        ordered = sorted(((m, c) for m, c in acc.items() if c), key=lambda t: t[0].sort_key())
        return QCharacter(highest, height, tuple(ordered), tuple(irregular))

    @property
    def rank(self) -> int:
        return self.highest.rank

    def as_dict(self) -> dict[LMonomial, int]:
        return dict(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def level(self, M: int) -> dict[LMonomial, int]:
        """Terms whose weight drop has height exactly M."""
        return {m: c for m, c in self.terms if m.height() == M}

    def restrict(self, height: int) -> "QCharacter":
        return QCharacter.make(self.highest, height, [(m, c) for m, c in self.terms if m.height() <= height], self.irregular)

    def classical(self) -> ClassicalCharacter:
        acc: dict[Beta, int] = defaultdict(int)
        for m, c in self.terms:
            acc[m.weight_drop(self.rank)] += c
        return ClassicalCharacter.make(self.height, acc)

    def to_json(self) -> dict:
        return {
            "highest": self.highest.to_json(),
            "height": self.height,
            "terms": [{"monomial": m.to_json(), "mult": c} for m, c in self.terms],
            "irregular": list(self.irregular),
        }

    @staticmethod
    def from_json(obj: Mapping, rank: int) -> "QCharacter":
        return QCharacter.make(
            RationalLWeight.from_json(obj["highest"], rank),
            int(obj["height"]),
            [(LMonomial.from_json(t["monomial"]), t["mult"]) for t in obj["terms"]],
            obj.get("irregular", ()),
        )

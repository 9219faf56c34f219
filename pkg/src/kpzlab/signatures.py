"""Nonincreasing integer tuples indexing particle configurations."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator


@dataclass(frozen=True)
class Signature:
    """Nonincreasing tuple of nonnegative integers with multiplicity accessors."""

    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        ps = tuple(int(p) for p in self.parts)
        object.__setattr__(self, "parts", ps)
        if any(p < 0 for p in ps):
            raise ValueError(f"signature parts must be nonnegative: {ps}")
        if any(ps[i] < ps[i + 1] for i in range(len(ps) - 1)):
            raise ValueError(f"signature parts must be nonincreasing: {ps}")

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def size(self) -> int:
        """|lambda| = sum of parts."""
        return sum(self.parts)

    def m(self, j: int) -> int:
        """Multiplicity of the value j among the parts."""
        return sum(1 for p in self.parts if p == j)

    def e(self, i: int) -> int:
        """Number of parts strictly greater than i."""
        return sum(1 for p in self.parts if p > i)

    def count_ge(self, x: int) -> int:
        """Number of parts >= x."""
        return sum(1 for p in self.parts if p >= x)

    def max_part(self) -> int:
        return self.parts[0] if self.parts else 0


def signatures_of_length(n: int, max_part: int) -> Iterator[Signature]:
    """All signatures of length n with parts in [0, max_part]."""
    if n == 0:
        yield Signature(())
        return

    def rec(prefix: list[int], remaining: int, cap: int) -> Iterator[Signature]:
        if remaining == 0:
            yield Signature(tuple(prefix))
            return
        for p in range(cap, -1, -1):
            prefix.append(p)
            yield from rec(prefix, remaining - 1, p)
            prefix.pop()

    yield from rec([], n, max_part)


def distinct_support_signatures(J: int, max_part: int) -> Iterator[Signature]:
    """Length-J signatures with all parts >= 1 and multiplicity <= 1 above 1.

    This is the support of the boundary measure at theta = q^{-J}: a block of
    m ones (0 <= m <= J) below J - m distinct parts in [2, max_part].
    """
    for m in range(J + 1):
        k = J - m
        vals = range(2, max_part + 1)
        for combo in combinations(vals, k):
            yield Signature(tuple(sorted(combo, reverse=True)) + (1,) * m)

"""Exact rational arithmetic, matrices, and symmetric-group primitives.

Everything downstream (cycle covers, gadgets, characters) works over
`fractions.Fraction`, so every identity in the test suite is checked as an
exact equality of rationals.  No floating point appears anywhere.

Conventions:
  * vertices, matrix indices and permutation points are 1-based in all file
    formats and in `Permutation`; internal storage of matrices is row-major
    0-based tuples.
  * a permutation on {1..n} is stored as its image tuple, so ``p[i]`` in the
    mathematical sense is ``p.images[i-1]``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

#: Largest n for which full S_n enumeration is permitted by default (9! = 362880).
DEFAULT_ENUMERATION_CAP = 9


class EnumerationCapError(RuntimeError):
    """Raised when a brute-force enumeration would exceed the configured cap."""


def check_enumeration_cap(n: int, cap: int | None = None) -> None:
    limit = DEFAULT_ENUMERATION_CAP if cap is None else cap
    if n > limit:
        raise EnumerationCapError(
            f"enumeration too large: n={n} exceeds cap {limit} "
            f"(raise the cap explicitly if this is intended)"
        )


# ---------------------------------------------------------------------------
# Rationals
# ---------------------------------------------------------------------------

def parse_rational(text: str) -> Fraction:
    """Parse ``p`` or ``p/q`` (optional sign, q positive) into a Fraction."""
    s = text.strip()
    if not s:
        raise ValueError("empty rational literal")
    if "/" in s:
        num_s, _, den_s = s.partition("/")
        num = int(num_s)
        den = int(den_s)
        if den <= 0:
            raise ValueError(f"denominator must be positive in {text!r}")
        return Fraction(num, den)
    return Fraction(int(s))


def format_rational(x: Fraction) -> str:
    """Render a rational as ``p`` or ``p/q`` (never a decimal)."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------

class RationalMatrix:
    """Immutable square matrix of exact rationals."""

    __slots__ = ("n", "rows")

    def __init__(self, rows: Sequence[Sequence[Fraction | int]]):
        n = len(rows)
        if n < 1:
            raise ValueError("matrix must have dimension >= 1")
        grid = tuple(tuple(Fraction(x) for x in row) for row in rows)
        for row in grid:
            if len(row) != n:
                raise ValueError("matrix must be square")
        self.n = n
        self.rows = grid

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RationalMatrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(x) for x in row) for row in self.rows)
        return f"RationalMatrix({self.n}: {body})"

    def scale(self, s: Fraction | int) -> "RationalMatrix":
        s = Fraction(s)
        return RationalMatrix([[x * s for x in row] for row in self.rows])

    @staticmethod
    def identity(n: int) -> "RationalMatrix":
        return RationalMatrix([[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)])

    @staticmethod
    def from_text(text: str) -> "RationalMatrix":
        """Parse the matrix file format: first line n, then n rows of n rationals."""
        tokens = text.split()
        if not tokens:
            raise ValueError("empty matrix file")
        n = int(tokens[0])
        body = tokens[1:]
        if len(body) != n * n:
            raise ValueError(f"matrix file promises {n}x{n} entries, found {len(body)}")
        entries = [parse_rational(t) for t in body]
        return RationalMatrix([entries[i * n:(i + 1) * n] for i in range(n)])

    def to_text(self) -> str:
        lines = [str(self.n)]
        for row in self.rows:
            lines.append(" ".join(format_rational(x) for x in row))
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Permutations and partitions
# ---------------------------------------------------------------------------

#: A partition is a weakly decreasing tuple of positive ints.
Partition = tuple[int, ...]


def is_partition(parts: Sequence[int]) -> bool:
    return all(p >= 1 for p in parts) and all(
        parts[i] >= parts[i + 1] for i in range(len(parts) - 1)
    )


def partitions_of(n: int, max_part: int | None = None) -> Iterator[Partition]:
    """All partitions of n with parts <= max_part, in reverse lexicographic order."""
    if n < 0:
        return
    if n == 0:
        yield ()
        return
    top = n if max_part is None else min(max_part, n)
    for first in range(top, 0, -1):
        for rest in partitions_of(n - first, first):
            yield (first,) + rest


@dataclass(frozen=True)
class Permutation:
    """Element of S_n as an image tuple over points 1..n."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.images)
        if sorted(self.images) != list(range(1, n + 1)):
            raise ValueError(f"not a bijection on 1..{n}: {self.images}")

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint cycles (fixed points included), each starting at its minimum."""
        seen = [False] * (self.n + 1)
        out: list[tuple[int, ...]] = []
        for start in range(1, self.n + 1):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = self(start)
            while j != start:
                cyc.append(j)
                seen[j] = True
                j = self(j)
            out.append(tuple(cyc))
        return out

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(tuple(range(1, n + 1)))


def cycle_count(p: Permutation) -> int:
    """Number of cycles of p, fixed points included."""
    return len(p.cycles())


def cycle_type(p: Permutation) -> Partition:
    """Multiset of cycle lengths, sorted descending."""
    return tuple(sorted((len(c) for c in p.cycles()), reverse=True))


def sign(p: Permutation) -> int:
    """Sign of p, equal to (-1)^(n - c(p))."""
    return -1 if (p.n - cycle_count(p)) % 2 else 1


def permutations(n: int, cap: int | None = None) -> Iterator[Permutation]:
    """All of S_n in lexicographic order of image tuples (identity first)."""
    check_enumeration_cap(n, cap)
    for images in itertools.permutations(range(1, n + 1)):
        yield Permutation(images)


def conjugacy_class_size(t: Partition) -> int:
    """Number of permutations with cycle type t (n!/z_t)."""
    n = sum(t)
    z = 1
    for length, mult in _multiplicities(t).items():
        z *= length ** mult * math.factorial(mult)
    return math.factorial(n) // z


def _multiplicities(t: Iterable[int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for part in t:
        out[part] = out.get(part, 0) + 1
    return out

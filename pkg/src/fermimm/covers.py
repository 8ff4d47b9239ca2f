"""Weighted digraphs, cycle-cover enumeration, and exact scalar evaluators.

The central quantity is the plain-convention fermionant of a graph G,

    sum over cycle covers pi of G of  (-k)^(#cycles of pi) * prod of edge weights,

which for the complete graph on a matrix A equals
sum_{pi in S_n} (-k)^{c(pi)} prod_i A[i, pi(i)].  The signed convention
multiplies by (-1)^n.  The plain form is canonical here because every gadget
lemma is stated over cycle-cover sums; `fermionant` exposes both.

Evaluators are deliberately redundant: `fermionant` enumerates permutations,
`fermionant_dp` runs a memoized least-vertex cycle decomposition, and
`cycle_covers` enumerates covers of sparse graphs by DFS.  The test suite
plays them against each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

from .algebra import (
    EnumerationCapError,
    Partition,
    Permutation,
    RationalMatrix,
    check_enumeration_cap,
    cycle_count,
    format_rational,
    permutations,
)

Edge = tuple[int, int]


class GraphFormatError(ValueError):
    """Malformed graph file (bad counts, duplicate edges, out-of-range vertices)."""


class WeightedDigraph:
    """Directed graph on vertices 1..n with exact rational edge weights.

    At most one edge per ordered pair; loops allowed.  An absent edge means
    weight zero.  Instances are treated as immutable once built; the
    transformation helpers all return new graphs.
    """

    __slots__ = ("n", "edges")

    def __init__(self, n: int, edges: Mapping[Edge, Fraction | int] | None = None):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        self.n = n
        self.edges: dict[Edge, Fraction] = {}
        if edges:
            for (u, v), w in edges.items():
                self.add_edge(u, v, w)

    def add_edge(self, u: int, v: int, w: Fraction | int) -> None:
        if not (1 <= u <= self.n and 1 <= v <= self.n):
            raise GraphFormatError(f"edge ({u},{v}) out of range 1..{self.n}")
        if (u, v) in self.edges:
            raise GraphFormatError(f"duplicate edge ({u},{v})")
        w = Fraction(w)
        if w != 0:
            self.edges[(u, v)] = w

    def weight(self, u: int, v: int) -> Fraction:
        return self.edges.get((u, v), Fraction(0))

    def copy(self) -> "WeightedDigraph":
        return WeightedDigraph(self.n, self.edges)

    def out_adjacency(self) -> list[list[tuple[int, Fraction]]]:
        """Adjacency lists indexed by vertex (index 0 unused)."""
        adj: list[list[tuple[int, Fraction]]] = [[] for _ in range(self.n + 1)]
        for (u, v), w in sorted(self.edges.items()):
            adj[u].append((v, w))
        return adj

    def adjacency_matrix(self) -> RationalMatrix:
        if self.n < 1:
            raise ValueError("adjacency matrix needs n >= 1")
        return RationalMatrix(
            [[self.weight(i, j) for j in range(1, self.n + 1)] for i in range(1, self.n + 1)]
        )

    @staticmethod
    def from_matrix(a: RationalMatrix, keep_zeros: bool = False) -> "WeightedDigraph":
        """Graph of a matrix; zero entries are dropped unless keep_zeros.

        Dropping zeros shrinks cycle-cover enumeration without changing any
        evaluator (a cover through a zero-weight edge contributes nothing).
        """
        g = WeightedDigraph(a.n)
        for i in range(1, a.n + 1):
            for j in range(1, a.n + 1):
                w = a[i - 1, j - 1]
                if w != 0:
                    g.edges[(i, j)] = w
                elif keep_zeros:
                    pass  # weight-0 edges are representable only as absence
        return g

    @staticmethod
    def from_text(text: str) -> "WeightedDigraph":
        """Parse the graph file format: ``n m`` then m lines ``u v weight``."""
        from .algebra import parse_rational

        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise GraphFormatError("empty graph file")
        head = lines[0].split()
        if len(head) != 2:
            raise GraphFormatError("first line must be 'n m'")
        n, m = int(head[0]), int(head[1])
        if len(lines) - 1 != m:
            raise GraphFormatError(f"expected {m} edge lines, found {len(lines) - 1}")
        g = WeightedDigraph(n)
        for ln in lines[1:]:
            parts = ln.split()
            if len(parts) != 3:
                raise GraphFormatError(f"bad edge line: {ln!r}")
            g.add_edge(int(parts[0]), int(parts[1]), parse_rational(parts[2]))
        return g

    def to_text(self) -> str:
        lines = [f"{self.n} {len(self.edges)}"]
        for (u, v), w in sorted(self.edges.items()):
            lines.append(f"{u} {v} {format_rational(w)}")
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return f"WeightedDigraph(n={self.n}, m={len(self.edges)})"


@dataclass(frozen=True)
class CycleCover:
    """A cycle cover, i.e. a permutation supported on present edges."""

    permutation: Permutation

    @property
    def edges(self) -> tuple[Edge, ...]:
        p = self.permutation
        return tuple((i, p(i)) for i in range(1, p.n + 1))

    @property
    def cycles(self) -> int:
        return cycle_count(self.permutation)


def cycle_covers(g: WeightedDigraph, cap: int | None = None) -> Iterator[CycleCover]:
    """Enumerate all cycle covers of g by DFS over present out-edges.

    The permutation cap guards dense graphs; sparse graphs (gadget
    constructions) stay cheap because the DFS only branches on present edges.
    Callers that certify gadgets pass an explicit larger cap.
    """
    check_enumeration_cap(g.n, cap)
    yield from _cover_dfs(g)


def _cover_dfs(g: WeightedDigraph) -> Iterator[CycleCover]:
    n = g.n
    if n == 0:
        return
    adj = g.out_adjacency()
    # In-degree pruning: a vertex with no remaining in-edge can never be covered.
    images = [0] * (n + 1)
    taken = [False] * (n + 1)

    def rec(u: int) -> Iterator[CycleCover]:
        if u > n:
            yield CycleCover(Permutation(tuple(images[1:])))
            return
        for v, _w in adj[u]:
            if not taken[v]:
                taken[v] = True
                images[u] = v
                yield from rec(u + 1)
                taken[v] = False
        images[u] = 0

    yield from rec(1)


def cover_weight(g: WeightedDigraph, cover: CycleCover) -> Fraction:
    """Product of the cover's edge weights."""
    w = Fraction(1)
    for u, v in cover.edges:
        x = g.weight(u, v)
        if x == 0:
            raise ValueError(f"cover uses absent edge ({u},{v})")
        w *= x
    return w


# ---------------------------------------------------------------------------
# Fermionant and friends
# ---------------------------------------------------------------------------

def fermionant(
    a: RationalMatrix,
    k: Fraction | int,
    convention: str = "plain",
    cap: int | None = None,
) -> Fraction:
    """Brute-force fermionant of a matrix.

    plain  = sum_pi (-k)^{c(pi)} prod_i A[i, pi(i)]
    signed = (-1)^n * plain
    """
    if convention not in ("plain", "signed"):
        raise ValueError(f"convention must be 'plain' or 'signed', got {convention!r}")
    k = Fraction(k)
    n = a.n
    check_enumeration_cap(n, cap)
    minus_k = -k
    total = Fraction(0)
    rows = a.rows
    for p in permutations(n, cap):
        prod = Fraction(1)
        for i, j in enumerate(p.images):
            prod *= rows[i][j - 1]
            if prod == 0:
                break
        if prod == 0:
            continue
        total += minus_k ** cycle_count(p) * prod
    if convention == "signed" and n % 2:
        total = -total
    return total


def fermionant_dp(g: WeightedDigraph, k: Fraction | int) -> Fraction:
    """Plain-convention fermionant by memoized cycle decomposition.

    Recurses on the cycle through the least uncovered vertex; memoization is
    keyed by the bitmask of uncovered vertices, so sparse structured graphs
    (replications, gadget chains) collapse to few states.  Intended for use
    well beyond the permutation cap.
    """
    k = Fraction(k)
    minus_k = -k
    n = g.n
    if n == 0:
        return Fraction(1)
    adj = g.out_adjacency()
    full = (1 << n) - 1  # bit i-1 set  <=>  vertex i uncovered
    memo: dict[int, Fraction] = {0: Fraction(1)}

    def solve(mask: int) -> Fraction:
        hit = memo.get(mask)
        if hit is not None:
            return hit
        start = (mask & -mask).bit_length()  # least uncovered vertex
        total = Fraction(0)
        # DFS over simple paths start -> ... -> v with a closing edge v -> start.
        stack = [(start, mask & ~(1 << (start - 1)), Fraction(1))]
        while stack:
            v, avail, acc = stack.pop()
            for u, w in adj[v]:
                if u == start:
                    total += minus_k * acc * w * solve(avail)
                elif avail & (1 << (u - 1)):
                    stack.append((u, avail & ~(1 << (u - 1)), acc * w))
        memo[mask] = total
        return total

    return solve(full)


@dataclass(frozen=True)
class StratifiedWeights:
    """Total cover weight grouped by cycle count: c_m for m = 1..n."""

    n: int
    by_cycles: tuple[Fraction, ...]  # index m-1 holds c_m

    def __getitem__(self, m: int) -> Fraction:
        if not 1 <= m <= self.n:
            raise IndexError(f"cycle count {m} out of 1..{self.n}")
        return self.by_cycles[m - 1]

    def fermionant_at(self, k: Fraction | int) -> Fraction:
        """Recombine: sum_m (-k)^m c_m (the plain fermionant)."""
        k = Fraction(k)
        return sum(((-k) ** m) * self[m] for m in range(1, self.n + 1))


def stratified_weights(g: WeightedDigraph, cap: int | None = None) -> StratifiedWeights:
    """Exact partial sums c_m = sum of weights of covers with m cycles."""
    n = g.n
    sums = [Fraction(0)] * n
    for cover in cycle_covers(g, cap):
        sums[cover.cycles - 1] += cover_weight(g, cover)
    return StratifiedWeights(n, tuple(sums))


def hamiltonian(a: RationalMatrix, cap: int | None = None) -> Fraction:
    """Sum over single-cycle permutations of the entry product (the c_1 stratum)."""
    n = a.n
    check_enumeration_cap(n, cap)
    if n == 1:
        return a[0, 0]
    rows = a.rows
    total = Fraction(0)

    # DFS over simple paths 1 -> ... -> v, closing v -> 1; skips zero entries.
    def rec(v: int, used: int, acc: Fraction) -> None:
        nonlocal total
        if used == full:
            w = rows[v - 1][0]
            if w != 0:
                total += acc * w
            return
        for u in range(2, n + 1):
            bit = 1 << (u - 1)
            if used & bit:
                continue
            w = rows[v - 1][u - 1]
            if w != 0:
                rec(u, used | bit, acc * w)

    full = (1 << n) - 1
    rec(1, 1, Fraction(1))
    return total


def permanent_ryser(a: RationalMatrix) -> Fraction:
    """Permanent by Ryser's inclusion-exclusion formula, exact."""
    n = a.n
    rows = a.rows
    total = Fraction(0)
    for mask in range(1, 1 << n):
        row_sums = Fraction(1)
        for i in range(n):
            s = Fraction(0)
            for j in range(n):
                if mask & (1 << j):
                    s += rows[i][j]
            row_sums *= s
            if row_sums == 0:
                break
        if row_sums == 0:
            continue
        bits = bin(mask).count("1")
        total += (-1) ** (n - bits) * row_sums
    return total


def determinant_exact(a: RationalMatrix) -> Fraction:
    """Determinant by fraction-free (Bareiss) elimination, exact."""
    n = a.n
    m = [list(row) for row in a.rows]
    sign_flips = 0
    prev = Fraction(1)
    for col in range(n - 1):
        pivot_row = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != col:
            m[col], m[pivot_row] = m[pivot_row], m[col]
            sign_flips += 1
        pivot = m[col][col]
        for r in range(col + 1, n):
            for c in range(col + 1, n):
                m[r][c] = (m[r][c] * pivot - m[r][col] * m[col][c]) / prev
            m[r][col] = Fraction(0)
        prev = pivot
    det = m[n - 1][n - 1]
    return -det if sign_flips % 2 else det

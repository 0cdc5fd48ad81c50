"""Labeled simple graphs with bitset adjacency rows.

Each vertex owns a packed row of 64-bit words, so edge tests and flips are
O(1) and common-neighbor queries are word-parallel intersections.  The same
representation serves exhaustive work at n <= 7 and MCMC at n ~ 10^4.

Vertices are 0-indexed internally; file formats are 1-indexed (see
:mod:`vtergm.graphio`).
"""

from __future__ import annotations

from typing import Iterable, Iterator

import numpy as np

from .errors import DomainError

__all__ = ["Graph", "empty_graph"]


def _check_vertex_pair(n: int, u: int, v: int) -> None:
    if u == v:
        raise DomainError(f"self-loop ({u}, {u}) is not allowed")
    if not (0 <= u < n and 0 <= v < n):
        raise DomainError(f"vertex pair ({u}, {v}) out of range for n={n}")


class Graph:
    """Simple undirected graph on vertices 0..n-1.

    The adjacency relation is kept symmetric and irreflexive; the edge count
    is maintained incrementally under flips and can be re-verified with
    :meth:`validate`.
    """

    __slots__ = ("n", "nwords", "bits", "_edge_count")

    def __init__(self, n: int):
        if n < 1:
            raise DomainError(f"graph size must be positive, got n={n}")
        self.n = int(n)
        self.nwords = (self.n + 63) >> 6
        self.bits = np.zeros((self.n, self.nwords), dtype=np.uint64)
        self._edge_count = 0

    # -- construction ------------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        g = cls(n)
        for u, v in edges:
            g.add_edge(u, v)
        return g

    @classmethod
    def from_edge_arrays(cls, n: int, us: np.ndarray, vs: np.ndarray) -> "Graph":
        """Bulk-build from parallel vertex arrays (distinct unordered pairs).

        Vectorized path for the samplers; duplicate pairs are rejected.
        """
        g = cls(n)
        us = np.asarray(us, dtype=np.int64)
        vs = np.asarray(vs, dtype=np.int64)
        if us.size == 0:
            return g
        if np.any(us == vs) or us.min() < 0 or vs.min() < 0 or max(us.max(), vs.max()) >= n:
            raise DomainError("edge arrays contain a self-loop or out-of-range vertex")
        lo = np.minimum(us, vs)
        hi = np.maximum(us, vs)
        if np.unique(lo * n + hi).size != lo.size:
            raise DomainError("edge arrays contain duplicate pairs")
        for a, b in ((us, vs), (vs, us)):
            np.bitwise_or.at(
                g.bits, (a, b >> 6), np.uint64(1) << (b & 63).astype(np.uint64)
            )
        g._edge_count = int(lo.size)
        return g

    def copy(self) -> "Graph":
        g = Graph.__new__(Graph)
        g.n = self.n
        g.nwords = self.nwords
        g.bits = self.bits.copy()
        g._edge_count = self._edge_count
        return g

    # -- queries -----------------------------------------------------------

    @property
    def edge_count(self) -> int:
        return self._edge_count

    @property
    def max_edges(self) -> int:
        return self.n * (self.n - 1) // 2

    def has_edge(self, u: int, v: int) -> bool:
        _check_vertex_pair(self.n, u, v)
        return bool((self.bits[u, v >> 6] >> np.uint64(v & 63)) & np.uint64(1))

    def degree(self, u: int) -> int:
        return int(np.bitwise_count(self.bits[u]).sum())

    def neighbors(self, u: int) -> list[int]:
        return _bits_to_vertices(self.bits[u])

    def common_neighbors(self, u: int, v: int) -> list[int]:
        """Vertices adjacent to both u and v (never contains u or v)."""
        _check_vertex_pair(self.n, u, v)
        return _bits_to_vertices(self.bits[u] & self.bits[v])

    def edges(self) -> Iterator[tuple[int, int]]:
        """Yield edges as (u, v) with u < v, in lexicographic order."""
        for u in range(self.n):
            for v in _bits_to_vertices(self.bits[u]):
                if v > u:
                    yield (u, v)

    # -- mutation ----------------------------------------------------------

    def toggle_edge(self, u: int, v: int) -> str:
        """Flip the adjacency of {u, v}; returns "added" or "removed"."""
        _check_vertex_pair(self.n, u, v)
        bu = np.uint64(1) << np.uint64(v & 63)
        bv = np.uint64(1) << np.uint64(u & 63)
        present = bool(self.bits[u, v >> 6] & bu)
        self.bits[u, v >> 6] ^= bu
        self.bits[v, u >> 6] ^= bv
        self._edge_count += -1 if present else 1
        return "removed" if present else "added"

    def add_edge(self, u: int, v: int) -> None:
        if self.has_edge(u, v):
            raise DomainError(f"edge ({u}, {v}) already present")
        self.toggle_edge(u, v)

    # -- consistency -------------------------------------------------------

    def recount_edges(self) -> int:
        """Edge count recomputed from scratch (ignores the cached value)."""
        return int(np.bitwise_count(self.bits).sum()) // 2

    def validate(self) -> None:
        """Full consistency check: symmetry, no self-loops, cached count."""
        for u in range(self.n):
            if (self.bits[u, u >> 6] >> np.uint64(u & 63)) & np.uint64(1):
                raise AssertionError(f"self-loop at vertex {u}")
        for u in range(self.n):
            for v in _bits_to_vertices(self.bits[u]):
                if not (self.bits[v, u >> 6] >> np.uint64(u & 63)) & np.uint64(1):
                    raise AssertionError(f"asymmetric adjacency at ({u}, {v})")
        recount = self.recount_edges()
        if recount != self._edge_count:
            raise AssertionError(
                f"cached edge_count {self._edge_count} != recount {recount}"
            )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and np.array_equal(self.bits, other.bits)
        )

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self._edge_count})"


def empty_graph(n: int) -> Graph:
    """Edgeless graph on n >= 1 vertices."""
    return Graph(n)


def _bits_to_vertices(row: np.ndarray) -> list[int]:
    out = []
    for k in range(row.shape[0]):
        word = int(row[k])
        base = k << 6
        while word:
            lsb = word & -word
            out.append(base + lsb.bit_length() - 1)
            word ^= lsb
    return out

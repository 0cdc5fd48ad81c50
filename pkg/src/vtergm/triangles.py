"""Triangle structure: membership statistics, disjoint packings, and the
greedy decomposition of edge-minimal (q-basic) graphs.

A graph is *q-basic* when exactly q vertices lie on triangles and removing
any single edge strictly decreases that count.  Such graphs decompose into
four vertex classes (triangle factor, matched pairs, witnesses of extra
edges, and remaining degree-2 apexes) whose sizes pin down the edge count
exactly: e = l1 + 1.5*l2 + 3*l31 + 2*l32.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ResourceCapExceeded, StaleStatsError
from .graphs import Graph, _bits_to_vertices

__all__ = [
    "TriangleStats",
    "QBasicDecomposition",
    "VerifyResult",
    "vertices_in_triangles",
    "delta_vt_on_flip",
    "count_triangles",
    "max_disjoint_triangles",
    "is_q_basic",
    "decompose_q_basic",
    "verify_decomposition",
]


@dataclass
class TriangleStats:
    """Per-vertex triangle membership and its total count."""

    in_triangle: np.ndarray  # uint8 flags, length n
    v_t: int
    triangle_degree: np.ndarray | None = None  # per-vertex triangle counts


def _vertex_in_triangle(g: Graph, w: int) -> bool:
    row = g.bits[w]
    for x in _bits_to_vertices(row):
        if np.any(row & g.bits[x]):
            return True
    return False


def vertices_in_triangles(g: Graph, with_counts: bool = False) -> TriangleStats:
    """Exact membership vector and V_T; optionally per-vertex triangle counts."""
    flags = np.zeros(g.n, dtype=np.uint8)
    counts = np.zeros(g.n, dtype=np.int64) if with_counts else None
    for w in range(g.n):
        row = g.bits[w]
        if with_counts:
            s = 0
            for x in _bits_to_vertices(row):
                s += int(np.bitwise_count(row & g.bits[x]).sum())
            counts[w] = s // 2
            flags[w] = 1 if s else 0
        else:
            flags[w] = 1 if _vertex_in_triangle(g, w) else 0
    return TriangleStats(in_triangle=flags, v_t=int(flags.sum()), triangle_degree=counts)


def delta_vt_on_flip(
    g: Graph, stats: TriangleStats, u: int, v: int, debug: bool = False
) -> int:
    """Change in V_T if the edge {u, v} were flipped.  Does not mutate g.

    Only u, v, and their common neighbors can change membership, so just
    those vertices are re-evaluated against the virtually flipped adjacency.
    """
    if debug:
        fresh = vertices_in_triangles(g)
        if fresh.v_t != stats.v_t or not np.array_equal(
            fresh.in_triangle, stats.in_triangle
        ):
            raise StaleStatsError("triangle stats disagree with a full recount")
    if u == v or not (0 <= u < g.n and 0 <= v < g.n):
        raise DomainError(f"invalid vertex pair ({u}, {v})")

    row_u = g.bits[u].copy()
    row_v = g.bits[v].copy()
    row_u[v >> 6] ^= np.uint64(1) << np.uint64(v & 63)
    row_v[u >> 6] ^= np.uint64(1) << np.uint64(u & 63)

    def patched_row(w: int) -> np.ndarray:
        if w == u:
            return row_u
        if w == v:
            return row_v
        return g.bits[w]

    def member(w: int) -> int:
        rw = patched_row(w)
        for x in _bits_to_vertices(rw):
            if np.any(rw & patched_row(x)):
                return 1
        return 0

    # common neighbors are unaffected by the {u, v} bit itself
    affected = [u, v] + _bits_to_vertices(g.bits[u] & g.bits[v])
    return sum(member(w) - int(stats.in_triangle[w]) for w in affected)


def count_triangles(g: Graph) -> int:
    """Number of triangles (each counted once)."""
    total = 0
    for u, v in g.edges():
        total += int(np.bitwise_count(g.bits[u] & g.bits[v]).sum())
    return total // 3


def _triangle_list(g: Graph) -> list[tuple[int, int, int]]:
    """All triangles as sorted triples, lexicographically ordered."""
    tris = []
    for u, v in g.edges():
        for w in g.common_neighbors(u, v):
            if w > v:
                tris.append((u, v, w))
    tris.sort()
    return tris


def _greedy_packing(g: Graph) -> int:
    """Maximal disjoint-triangle packing by ascending-vertex extraction."""
    used = np.zeros(g.nwords, dtype=np.uint64)
    count = 0
    for u in range(g.n):
        if (used[u >> 6] >> np.uint64(u & 63)) & np.uint64(1):
            continue
        avail = g.bits[u] & ~used
        found = False
        for x in _bits_to_vertices(avail):
            if x <= u:
                continue
            for y in _bits_to_vertices(avail & g.bits[x]):
                if y > x:
                    for z in (u, x, y):
                        used[z >> 6] |= np.uint64(1) << np.uint64(z & 63)
                    count += 1
                    found = True
                    break
            if found:
                break
    return count


def max_disjoint_triangles(
    g: Graph, mode: str = "exact", node_cap: int = 2_000_000
) -> int:
    """Maximum (exact) or maximal-greedy number of vertex-disjoint triangles.

    Exact mode runs branch and bound over the triangle hypergraph with the
    greedy packing as incumbent; exceeding ``node_cap`` raises
    :class:`ResourceCapExceeded` rather than silently degrading to greedy.
    """
    if mode == "greedy":
        return _greedy_packing(g)
    if mode != "exact":
        raise DomainError(f"unknown packing mode {mode!r}")

    tris = _triangle_list(g)
    if not tris:
        return 0
    best = _greedy_packing(g)
    nodes = 0

    def rec(avail: list[tuple[int, int, int]], current: int) -> None:
        nonlocal best, nodes
        nodes += 1
        if nodes > node_cap:
            raise ResourceCapExceeded(
                f"exact triangle packing exceeded {node_cap} search nodes"
            )
        if current > best:
            best = current
        if not avail:
            return
        covered = set()
        for t in avail:
            covered.update(t)
        if current + len(covered) // 3 <= best:
            return
        v = min(min(t) for t in avail)
        branch_tris = [t for t in avail if v in t]
        rest = [t for t in avail if v not in t]
        for t in branch_tris:
            tset = set(t)
            rec([s for s in avail if not tset.intersection(s)], current + 1)
        rec(rest, current)  # leave v uncovered

    rec(tris, 0)
    return best


def is_q_basic(g: Graph) -> tuple[bool, int]:
    """Whether every edge is essential for the current V_T; returns (flag, V_T)."""
    stats = vertices_in_triangles(g)
    for u, v in g.edges():
        if delta_vt_on_flip(g, stats, u, v) == 0:
            return False, stats.v_t
    return True, stats.v_t


@dataclass(frozen=True)
class QBasicDecomposition:
    """Partition of the triangle-covered vertices of a q-basic graph.

    ``v1`` carries a triangle factor, ``v2`` matched pairs closed through
    ``v1``, ``w`` the extra edges beyond factor and closures, ``v31`` one
    witness apex per extra edge, and ``v32`` the remaining apexes.  Vertices
    on no triangle (necessarily isolated in a q-basic graph) belong to no
    class, so l1 + l2 + l31 + l32 = V_T.
    """

    v1: tuple[int, ...]
    v2: tuple[int, ...]
    v31: tuple[int, ...]
    v32: tuple[int, ...]
    w: tuple[tuple[int, int], ...]

    @property
    def config(self) -> tuple[int, int, int, int]:
        return (len(self.v1), len(self.v2), len(self.v31), len(self.v32))

    def to_json_dict(self) -> dict:
        """JSON form with 1-indexed vertices, matching the file formats."""
        return {
            "v1": [v + 1 for v in self.v1],
            "v2": [v + 1 for v in self.v2],
            "v31": [v + 1 for v in self.v31],
            "v32": [v + 1 for v in self.v32],
            "w": [[a + 1, b + 1] for a, b in self.w],
            "config": list(self.config),
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "QBasicDecomposition":
        dec = cls(
            v1=tuple(v - 1 for v in d["v1"]),
            v2=tuple(v - 1 for v in d["v2"]),
            v31=tuple(v - 1 for v in d["v31"]),
            v32=tuple(v - 1 for v in d["v32"]),
            w=tuple((a - 1, b - 1) for a, b in d["w"]),
        )
        if "config" in d and tuple(d["config"]) != dec.config:
            raise DomainError("decomposition config does not match its sets")
        return dec


def decompose_q_basic(g: Graph) -> QBasicDecomposition:
    """Greedy four-stage decomposition with lexicographic tie-breaking.

    Stage 1 packs lexicographically smallest triangles until none remain,
    stage 2 matches lexicographically smallest edges in the rest, stage 3
    picks the smallest witness apex per extra edge, stage 4 collects the
    remaining triangle-covered vertices.
    """
    flag, q = is_q_basic(g)
    if not flag:
        stats = vertices_in_triangles(g)
        for u, v in g.edges():
            if delta_vt_on_flip(g, stats, u, v) == 0:
                raise DomainError(
                    f"not q-basic: removing edge ({u}, {v}) keeps the "
                    f"vertices-in-triangles count at {q}"
                )
    support = frozenset(
        int(i) for i in np.flatnonzero(vertices_in_triangles(g).in_triangle)
    )

    # stage 1: extract lexicographically smallest triangles into V1
    in_v1 = set()
    factor: list[tuple[int, int, int]] = []
    while True:
        tri = _first_triangle_avoiding(g, in_v1)
        if tri is None:
            break
        factor.append(tri)
        in_v1.update(tri)
    v1 = tuple(sorted(in_v1))

    factor_edges = set()
    for a, b, c in factor:
        factor_edges.update({(a, b), (a, c), (b, c)})
    w_edges = set()
    for u in v1:
        for x in g.neighbors(u):
            if x > u and x in in_v1 and (u, x) not in factor_edges:
                w_edges.add((u, x))

    # stage 2: lexicographically smallest disjoint edges in G[V \ V1]
    in_v2 = set()
    matching: list[tuple[int, int]] = []
    for u in range(g.n):
        if u in in_v1 or u in in_v2:
            continue
        for x in g.neighbors(u):
            if x > u and x not in in_v1 and x not in in_v2:
                matching.append((u, x))
                in_v2.update((u, x))
                break
    v2 = tuple(sorted(in_v2))

    closing_edges = set()
    for a, b in matching:
        cands = sorted(x for x in g.common_neighbors(a, b) if x in in_v1)
        if not cands:
            raise DomainError(
                f"stage 2 invariant failed: matched pair ({a}, {b}) has no "
                "common neighbor in the triangle factor"
            )
        x = cands[0]
        closing_edges.update({(min(a, x), max(a, x)), (min(b, x), max(b, x))})
    for u in v2:
        for x in g.neighbors(u):
            if x in in_v1:
                e = (min(u, x), max(u, x))
                if e not in closing_edges:
                    w_edges.add(e)

    # stage 3: one witness apex outside V1 u V2 per extra edge
    in_v31 = set()
    blocked = in_v1 | in_v2
    for a, b in sorted(w_edges):
        cands = sorted(
            x for x in g.common_neighbors(a, b) if x not in blocked and x not in in_v31
        )
        if not cands:
            raise DomainError(
                f"stage 3 invariant failed: extra edge ({a}, {b}) has no "
                "common neighbor outside the first two classes"
            )
        in_v31.add(cands[0])

    v31 = tuple(sorted(in_v31))
    v32 = tuple(sorted(support - in_v1 - in_v2 - in_v31))
    return QBasicDecomposition(
        v1=v1, v2=v2, v31=v31, v32=v32, w=tuple(sorted(w_edges))
    )


def _first_triangle_avoiding(g: Graph, excluded: set) -> tuple[int, int, int] | None:
    """Lexicographically smallest triangle disjoint from ``excluded``."""
    for u in range(g.n):
        if u in excluded:
            continue
        nb_u = [x for x in g.neighbors(u) if x > u and x not in excluded]
        for x in nb_u:
            for y in g.common_neighbors(u, x):
                if y > x and y not in excluded:
                    return (u, x, y)
    return None


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    violation: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_decomposition(g: Graph, d: QBasicDecomposition) -> VerifyResult:
    """Check every decomposition clause directly against g.

    Independent of how d was produced; reports the first violated clause.
    """
    s1, s2, s31, s32 = set(d.v1), set(d.v2), set(d.v31), set(d.v32)
    l1, l2, l31, l32 = d.config
    all_sets = [s1, s2, s31, s32]
    if sum(len(s) for s in all_sets) != len(s1 | s2 | s31 | s32):
        return VerifyResult(False, "classes are not pairwise disjoint")
    for s in (s1 | s2 | s31 | s32):
        if not (0 <= s < g.n):
            return VerifyResult(False, f"vertex {s} out of range")
    if l1 % 3:
        return VerifyResult(False, f"|V1|={l1} is not divisible by 3")
    if l2 % 2:
        return VerifyResult(False, f"|V2|={l2} is not divisible by 2")

    support = {int(i) for i in np.flatnonzero(vertices_in_triangles(g).in_triangle)}
    if (s1 | s2 | s31 | s32) != support:
        return VerifyResult(
            False, "classes do not cover exactly the triangle-covered vertices"
        )

    # (1) triangle factor inside V1; no triangles outside V1
    sub1 = _induced(g, sorted(s1))
    if l1 and max_disjoint_triangles(sub1, mode="exact") != l1 // 3:
        return VerifyResult(False, "G[V1] admits no spanning triangle factor")
    if _has_triangle_within(g, set(range(g.n)) - s1):
        return VerifyResult(False, "G[V \\ V1] contains a triangle")

    # (2) V2 is a perfect matching closed through V1; rest independent
    for u in s2:
        inside = [x for x in g.neighbors(u) if x in s2]
        if len(inside) != 1:
            return VerifyResult(
                False, f"vertex {u} has {len(inside)} neighbors inside V2, wanted 1"
            )
    for u in sorted(s2):
        x = next(y for y in g.neighbors(u) if y in s2)
        if u < x and not any(c in s1 for c in g.common_neighbors(u, x)):
            return VerifyResult(
                False, f"matched pair ({u}, {x}) has no common neighbor in V1"
            )
    outside = set(range(g.n)) - s1 - s2
    for u in outside:
        if any(x in outside for x in g.neighbors(u)):
            return VerifyResult(False, "G[V \\ (V1 u V2)] is not an independent set")

    # (W) extra edges: placement and count
    if len(d.w) != len(set(d.w)):
        return VerifyResult(False, "W contains duplicate edges")
    for a, b in d.w:
        if not g.has_edge(a, b):
            return VerifyResult(False, f"W edge ({a}, {b}) is not an edge of G")
        within_v1 = a in s1 and b in s1
        between = (a in s1 and b in s2) or (a in s2 and b in s1)
        if not (within_v1 or between):
            return VerifyResult(
                False, f"W edge ({a}, {b}) is neither inside V1 nor between V1 and V2"
            )
    e_v1 = sum(1 for u, v in g.edges() if u in s1 and v in s1)
    e_v1_v2 = sum(1 for u, v in g.edges() if (u in s1) != (v in s1) and (u in s2 or v in s2))
    if len(d.w) != (e_v1 - l1) + (e_v1_v2 - l2):
        return VerifyResult(
            False,
            f"|W|={len(d.w)} does not equal the extra-edge count "
            f"{(e_v1 - l1) + (e_v1_v2 - l2)}",
        )

    # (31) one witness per extra edge
    if l31 != len(d.w):
        return VerifyResult(False, f"|V31|={l31} does not equal |W|={len(d.w)}")
    witnessed = set()
    for a, b in d.w:
        cns = [x for x in g.common_neighbors(a, b) if x in s31]
        if len(cns) != 1:
            return VerifyResult(
                False,
                f"extra edge ({a}, {b}) has {len(cns)} common neighbors in V31, wanted 1",
            )
        witnessed.add(cns[0])
    if witnessed != s31:
        return VerifyResult(False, "some V31 vertex witnesses no extra edge")

    # (32) remaining apexes sit over an edge of V1 or a V1-V2 edge
    for w in s32:
        ok = False
        nbrs = g.neighbors(w)
        for i, a in enumerate(nbrs):
            for b in nbrs[i + 1 :]:
                if not g.has_edge(a, b):
                    continue
                if (a in s1 and b in s1) or (
                    (a in s1 and b in s2) or (a in s2 and b in s1)
                ):
                    ok = True
                    break
            if ok:
                break
        if not ok:
            return VerifyResult(
                False,
                f"V32 vertex {w} is not an apex over an edge in V1 or between V1 and V2",
            )

    # edge-count identity, in integers: 2e = 2*l1 + 3*l2 + 6*l31 + 4*l32
    if 2 * g.edge_count != 2 * l1 + 3 * l2 + 6 * l31 + 4 * l32:
        return VerifyResult(
            False,
            f"edge identity failed: e={g.edge_count} but config {d.config} "
            f"implies {l1 + 1.5 * l2 + 3 * l31 + 2 * l32}",
        )
    return VerifyResult(True)


def _induced(g: Graph, verts: list[int]) -> Graph:
    sub = Graph(max(1, len(verts)))
    index = {v: i for i, v in enumerate(verts)}
    for i, u in enumerate(verts):
        for x in g.neighbors(u):
            j = index.get(x)
            if j is not None and j > i:
                sub.add_edge(i, j)
    return sub


def _has_triangle_within(g: Graph, verts: set) -> bool:
    for u in verts:
        for x in g.neighbors(u):
            if x > u and x in verts:
                if any(y in verts for y in g.common_neighbors(u, x)):
                    return True
    return False

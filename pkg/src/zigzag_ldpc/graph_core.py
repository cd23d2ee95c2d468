"""Rotation-map multigraphs.

A regular graph is stored as two ``(N, d)`` integer arrays ``nbr`` and
``port`` so that ``Rot(v, i) = (nbr[v, i], port[v, i])``.  Ports are
0-based throughout the package (the usual 1..d labels shifted by one).

Biregular bipartite graphs keep one pair of arrays per side: the left map
sends ``(v, i)`` to a right vertex and a right port, the right map is its
inverse.

Products and powers build graphs with parallel edges and loops; those are
kept with multiplicity.  A *half-loop* is a fixed point ``Rot(v, i) = (v, i)``.
Graphs supplied by the user may not contain half-loops, but squaring
produces one for every "there and back along the same edge" walk, so
derived graphs are built with ``allow_half_loops=True``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import shortest_path

from .errors import (
    EvenPowerError,
    HalfLoopError,
    InconsistentCountsError,
    InvalidRotationError,
    NonBiregularError,
    NonRegularError,
    NonRegularOutDegreeError,
    TooLargeError,
)

DOT_MAX_VERTICES = 2000


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


class RotationGraph:
    """A d-regular multigraph given by its rotation map."""

    def __init__(self, nbr: np.ndarray, port: np.ndarray, *, allow_half_loops: bool = False):
        nbr = np.asarray(nbr, dtype=np.int64)
        port = np.asarray(port, dtype=np.int64)
        if nbr.ndim != 2 or nbr.shape != port.shape:
            raise InvalidRotationError("nbr and port must be equal-shape 2-D arrays")
        n, d = nbr.shape
        if n and d:
            if nbr.min() < 0 or nbr.max() >= n or port.min() < 0 or port.max() >= d:
                raise InvalidRotationError("rotation map leaves the vertex/port range")
            back_v = nbr[nbr, port]
            back_i = port[nbr, port]
            v_idx = np.arange(n)[:, None]
            i_idx = np.arange(d)[None, :]
            if not (np.all(back_v == v_idx) and np.all(back_i == i_idx)):
                raise InvalidRotationError("rotation map is not an involution")
            fixed = (nbr == v_idx) & (port == i_idx)
            self._half_loops = int(fixed.sum())
            if self._half_loops and not allow_half_loops:
                raise HalfLoopError(f"{self._half_loops} half-loop port(s) in rotation map")
        else:
            self._half_loops = 0
        self.nbr = _frozen(nbr)
        self.port = _frozen(port)

    @property
    def num_vertices(self) -> int:
        return self.nbr.shape[0]

    @property
    def degree(self) -> int:
        return self.nbr.shape[1]

    @property
    def half_loops(self) -> int:
        return self._half_loops

    @property
    def num_edges(self) -> int:
        # a half-loop is one edge on one port, every other edge uses two ports
        return (self.num_vertices * self.degree + self._half_loops) // 2

    def rot(self, v: int, i: int) -> tuple[int, int]:
        return int(self.nbr[v, i]), int(self.port[v, i])

    def adjacency(self) -> sp.csr_matrix:
        """Port-count adjacency: entry (v, w) is the number of ports of v leading to w."""
        n, d = self.nbr.shape
        rows = np.repeat(np.arange(n), d)
        data = np.ones(n * d, dtype=np.int64)
        return sp.csr_matrix((data, (rows, self.nbr.ravel())), shape=(n, n))

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Canonical edge list ``(ends, ports)``, one row per edge.

        Each edge is listed once from its smaller ``(vertex, port)`` end, in
        ascending order of that end.
        """
        n, d = self.nbr.shape
        here = np.arange(n * d)
        there = (self.nbr * d + self.port).ravel()
        keep = here <= there
        a, b = here[keep], there[keep]
        ends = np.stack([a // d, b // d], axis=1)
        ports = np.stack([a % d, b % d], axis=1)
        return ends, ports

    def is_simple(self) -> bool:
        a = self.adjacency()
        return bool(a.diagonal().sum() == 0 and (a.data <= 1).all())

    def __repr__(self) -> str:
        return f"RotationGraph(N={self.num_vertices}, d={self.degree})"


class BipartiteRotationGraph:
    """A (c, d)-biregular bipartite multigraph on (N, M) vertices."""

    def __init__(self, lnbr: np.ndarray, lport: np.ndarray, rnbr: np.ndarray, rport: np.ndarray):
        lnbr, lport = np.asarray(lnbr, dtype=np.int64), np.asarray(lport, dtype=np.int64)
        rnbr, rport = np.asarray(rnbr, dtype=np.int64), np.asarray(rport, dtype=np.int64)
        if lnbr.shape != lport.shape or rnbr.shape != rport.shape:
            raise InvalidRotationError("rotation arrays have mismatched shapes")
        n, c = lnbr.shape
        m, d = rnbr.shape
        if n * c != m * d:
            raise InconsistentCountsError(f"N*c = {n * c} but M*d = {m * d}")
        if n * c:
            if lnbr.min() < 0 or lnbr.max() >= m or lport.min() < 0 or lport.max() >= d:
                raise InvalidRotationError("left rotation map leaves the range")
            if rnbr.min() < 0 or rnbr.max() >= n or rport.min() < 0 or rport.max() >= c:
                raise InvalidRotationError("right rotation map leaves the range")
            ok_l = np.all(rnbr[lnbr, lport] == np.arange(n)[:, None]) and np.all(
                rport[lnbr, lport] == np.arange(c)[None, :]
            )
            ok_r = np.all(lnbr[rnbr, rport] == np.arange(m)[:, None]) and np.all(
                lport[rnbr, rport] == np.arange(d)[None, :]
            )
            if not (ok_l and ok_r):
                raise InvalidRotationError("left and right rotation maps are not inverse")
        self.lnbr, self.lport = _frozen(lnbr), _frozen(lport)
        self.rnbr, self.rport = _frozen(rnbr), _frozen(rport)

    @property
    def num_left(self) -> int:
        return self.lnbr.shape[0]

    @property
    def num_right(self) -> int:
        return self.rnbr.shape[0]

    @property
    def left_degree(self) -> int:
        return self.lnbr.shape[1]

    @property
    def right_degree(self) -> int:
        return self.rnbr.shape[1]

    @property
    def num_edges(self) -> int:
        return self.num_left * self.left_degree

    def rot_left(self, v: int, i: int) -> tuple[int, int]:
        return int(self.lnbr[v, i]), int(self.lport[v, i])

    def rot_right(self, w: int, j: int) -> tuple[int, int]:
        return int(self.rnbr[w, j]), int(self.rport[w, j])

    def biadjacency(self) -> sp.csr_matrix:
        n, c = self.lnbr.shape
        rows = np.repeat(np.arange(n), c)
        data = np.ones(n * c, dtype=np.int64)
        return sp.csr_matrix((data, (rows, self.lnbr.ravel())), shape=(n, self.num_right))

    def adjacency(self) -> sp.csr_matrix:
        """Adjacency of the union vertex set, left vertices first."""
        b = self.biadjacency()
        return sp.bmat([[None, b], [b.T, None]], format="csr")

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Edges as (left, right) pairs in left-port order, with their ports."""
        n, c = self.lnbr.shape
        ends = np.stack([np.repeat(np.arange(n), c), self.lnbr.ravel()], axis=1)
        ports = np.stack([np.tile(np.arange(c), n), self.lport.ravel()], axis=1)
        return ends, ports

    def is_simple(self) -> bool:
        return bool((self.biadjacency().data <= 1).all())

    def __repr__(self) -> str:
        return (
            f"BipartiteRotationGraph(N={self.num_left}, M={self.num_right}, "
            f"c={self.left_degree}, d={self.right_degree})"
        )


Graph = Union[RotationGraph, BipartiteRotationGraph]


# ---------------------------------------------------------------------------
# construction from edge lists


def _assign_ports(
    endpoints: np.ndarray, num_vertices: int, rng: np.random.Generator | None
) -> np.ndarray:
    """Port number of every edge end; ends are grouped by vertex, ordered by appearance
    or by a random permutation."""
    count = endpoints.size
    order_key = np.arange(count) if rng is None else rng.permutation(count)
    order = np.lexsort((order_key, endpoints))
    sorted_vertices = endpoints[order]
    starts = np.searchsorted(sorted_vertices, np.arange(num_vertices))
    ports = np.empty(count, dtype=np.int64)
    ports[order] = np.arange(count) - starts[sorted_vertices]
    return ports


def _edge_array(edges: Iterable[Sequence[int]] | np.ndarray) -> np.ndarray:
    arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
    if arr.size == 0:
        return arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("edges must be a sequence of (u, v) pairs")
    return arr


def from_edge_list(
    edges: Iterable[Sequence[int]] | np.ndarray,
    num_vertices: int,
    seed: int | None = 0,
    *,
    ports: np.ndarray | None = None,
) -> RotationGraph:
    """Build a regular rotation graph from undirected edges.

    Ports around each vertex are a uniformly random permutation drawn from
    ``seed``; ``seed=None`` numbers them in order of appearance, and
    ``ports`` (shape ``(E, 2)``) fixes them explicitly.
    """
    e = _edge_array(edges)
    if e.size and (e.min() < 0 or e.max() >= num_vertices):
        raise ValueError("edge endpoint out of range")
    deg = np.bincount(e.ravel(), minlength=num_vertices)
    if num_vertices == 0:
        return RotationGraph(np.zeros((0, 0)), np.zeros((0, 0)))
    d = int(deg[0])
    if np.any(deg != d):
        bad = int(np.flatnonzero(deg != d)[0])
        raise NonRegularError(f"vertex {bad} has degree {deg[bad]}, expected {d}")
    flat = e.ravel()
    if ports is None:
        rng = None if seed is None else np.random.default_rng(seed)
        p = _assign_ports(flat, num_vertices, rng)
    else:
        p = np.asarray(ports, dtype=np.int64).ravel()
        if p.shape != flat.shape:
            raise ValueError("ports must have the same shape as edges")
        if np.any((e[:, 0] == e[:, 1]) & (p[0::2] == p[1::2])):
            raise HalfLoopError("edge uses the same port at both ends")
    nbr = np.full((num_vertices, d), -1, dtype=np.int64)
    prt = np.full((num_vertices, d), -1, dtype=np.int64)
    u, v = flat[0::2], flat[1::2]
    pu, pv = p[0::2], p[1::2]
    nbr[u, pu], prt[u, pu] = v, pv
    nbr[v, pv], prt[v, pv] = u, pu
    if np.any(nbr < 0):
        raise InvalidRotationError("explicit ports do not cover every (vertex, port) slot")
    return RotationGraph(nbr, prt)


def bipartite_from_edge_list(
    edges: Iterable[Sequence[int]] | np.ndarray,
    num_left: int,
    num_right: int,
    seed: int | None = 0,
    *,
    ports: np.ndarray | None = None,
) -> BipartiteRotationGraph:
    """Build a biregular bipartite rotation graph from (left, right) edges."""
    e = _edge_array(edges)
    count = len(e)
    if num_left == 0 or num_right == 0 or count % num_left or count % num_right:
        raise InconsistentCountsError(
            f"{count} edges cannot be split evenly over ({num_left}, {num_right}) vertices"
        )
    if e[:, 0].min() < 0 or e[:, 0].max() >= num_left or e[:, 1].min() < 0 or e[:, 1].max() >= num_right:
        raise ValueError("edge endpoint out of range")
    c, d = count // num_left, count // num_right
    ldeg = np.bincount(e[:, 0], minlength=num_left)
    rdeg = np.bincount(e[:, 1], minlength=num_right)
    if np.any(ldeg != c) or np.any(rdeg != d):
        raise NonBiregularError("left or right degrees are not constant")
    if ports is None:
        rng = None if seed is None else np.random.default_rng(seed)
        lp = _assign_ports(e[:, 0], num_left, rng)
        rp = _assign_ports(e[:, 1], num_right, rng)
    else:
        ports = np.asarray(ports, dtype=np.int64)
        lp, rp = ports[:, 0], ports[:, 1]
    lnbr = np.full((num_left, c), -1, dtype=np.int64)
    lport = np.full((num_left, c), -1, dtype=np.int64)
    rnbr = np.full((num_right, d), -1, dtype=np.int64)
    rport = np.full((num_right, d), -1, dtype=np.int64)
    lnbr[e[:, 0], lp], lport[e[:, 0], lp] = e[:, 1], rp
    rnbr[e[:, 1], rp], rport[e[:, 1], rp] = e[:, 0], lp
    return BipartiteRotationGraph(lnbr, lport, rnbr, rport)


def double_cover(
    arcs: Iterable[Sequence[int]] | np.ndarray,
    num_vertices: int,
    seed: int | None = 0,
    *,
    ports: np.ndarray | None = None,
) -> BipartiteRotationGraph:
    """Bipartite double cover of a digraph: left copy of u joins right copy of v per arc u -> v."""
    a = _edge_array(arcs)
    out_deg = np.bincount(a[:, 0], minlength=num_vertices)
    if num_vertices == 0 or np.any(out_deg != out_deg[0]):
        raise NonRegularOutDegreeError("out-degrees are not all equal")
    in_deg = np.bincount(a[:, 1], minlength=num_vertices)
    if np.any(in_deg != out_deg[0]):
        raise NonRegularOutDegreeError("in-degrees differ from the common out-degree")
    return bipartite_from_edge_list(a, num_vertices, num_vertices, seed, ports=ports)


# ---------------------------------------------------------------------------
# small generators


def cycle_graph(n: int, seed: int | None = None) -> RotationGraph:
    return from_edge_list([(v, (v + 1) % n) for v in range(n)], n, seed)


def complete_graph(n: int, seed: int | None = None) -> RotationGraph:
    return from_edge_list([(u, v) for u in range(n) for v in range(u + 1, n)], n, seed)


def complete_bipartite(n: int, m: int, seed: int | None = None) -> BipartiteRotationGraph:
    return bipartite_from_edge_list([(u, w) for u in range(n) for w in range(m)], n, m, seed)


def _random_pairing_simple(stubs_a, stubs_b, rng, key, max_sweeps=200):
    """Pair stubs at random, then repair bad pairs with random switches.

    ``key(a, b)`` returns a canonical hashable id for an edge or ``None`` when
    the edge is forbidden outright (a loop).
    """
    b = stubs_b[rng.permutation(len(stubs_b))]
    a = stubs_a.copy()
    count = len(a)
    for _ in range(max_sweeps):
        seen: dict = {}
        bad = []
        for t in range(count):
            k = key(a[t], b[t])
            if k is None or k in seen:
                bad.append(t)
            else:
                seen[k] = t
        if not bad:
            return a, b
        for t in bad:
            s = int(rng.integers(count))
            b[t], b[s] = b[s], b[t]
    raise NonRegularError("could not build a simple graph with these parameters")


def _edge_set(g: Graph) -> set[tuple[int, int]]:
    if isinstance(g, RotationGraph):
        ends, _ = g.edges()
        return {(min(u, v), max(u, v)) for u, v in ends.tolist()}
    return {(v, int(w)) for v in range(g.num_left) for w in g.lnbr[v]}


def random_regular(n: int, d: int, seed: int = 0, *, simple: bool = True) -> RotationGraph:
    """Random d-regular graph from the pairing model (repaired to a simple graph by default)."""
    if (n * d) % 2:
        raise NonRegularError("n*d must be even")
    rng = np.random.default_rng(seed)
    if simple and d > (n - 1) / 2:
        # dense graphs are drawn as complements of sparse ones, where switching converges
        sparse = _edge_set(random_regular(n, n - 1 - d, int(rng.integers(2**31)))) if d < n - 1 else set()
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in sparse]
        return from_edge_list(np.array(edges, dtype=np.int64).reshape(-1, 2), n, int(rng.integers(2**31)))
    stubs = np.repeat(np.arange(n), d)
    stubs = stubs[rng.permutation(len(stubs))]
    half = len(stubs) // 2
    a, b = stubs[:half], stubs[half:]
    if simple:
        a, b = _random_pairing_simple(
            a, b, rng, lambda x, y: None if x == y else (min(x, y), max(x, y))
        )
    return from_edge_list(np.stack([a, b], axis=1), n, int(rng.integers(2**31)))


def random_biregular(
    n: int, m: int, c: int, d: int, seed: int = 0, *, simple: bool = True
) -> BipartiteRotationGraph:
    """Random (c, d)-biregular bipartite graph on (n, m) vertices."""
    if n * c != m * d:
        raise InconsistentCountsError(f"N*c = {n * c} but M*d = {m * d}")
    rng = np.random.default_rng(seed)
    if simple and c > m / 2:
        sparse = _edge_set(random_biregular(n, m, m - c, n - d, int(rng.integers(2**31)))) if c < m else set()
        edges = [(u, v) for u in range(n) for v in range(m) if (u, v) not in sparse]
        return bipartite_from_edge_list(np.array(edges, dtype=np.int64), n, m, int(rng.integers(2**31)))
    left = np.repeat(np.arange(n), c)
    right = np.repeat(np.arange(m), d)
    if simple:
        left, right = _random_pairing_simple(left, right, rng, lambda x, y: (x, y))
    else:
        right = right[rng.permutation(len(right))]
    return bipartite_from_edge_list(np.stack([left, right], axis=1), n, m, int(rng.integers(2**31)))


# ---------------------------------------------------------------------------
# girth and diameter


def _incidence(g: Graph) -> tuple[int, list[list[tuple[int, int]]]]:
    """Vertex count and per-vertex (neighbour, edge id) lists on the union vertex set."""
    if isinstance(g, RotationGraph):
        n, d = g.nbr.shape
        here = np.arange(n * d).reshape(n, d)
        there = g.nbr * d + g.port
        eid = np.minimum(here, there)
        return n, [list(zip(g.nbr[v].tolist(), eid[v].tolist())) for v in range(n)]
    n, m = g.num_left, g.num_right
    c = g.left_degree
    adj: list[list[tuple[int, int]]] = [
        list(zip((g.lnbr[v] + n).tolist(), range(v * c, (v + 1) * c))) for v in range(n)
    ]
    eid_r = g.rnbr * c + g.rport
    adj += [list(zip(g.rnbr[w].tolist(), eid_r[w].tolist())) for w in range(m)]
    return n + m, adj


def girth(g: Graph) -> float:
    """Length of the shortest cycle, ``math.inf`` for a forest.

    Parallel edges give 2 and loops (including half-loops) give 1.  One BFS
    per root, each tracking the edge it arrived by, pruned by the best cycle
    found so far.
    """
    n, adj = _incidence(g)
    best = math.inf
    for root in range(n):
        dist = {root: 0}
        parent_edge = {root: -1}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            du = dist[u]
            if 2 * du + 1 >= best:
                break
            for w, e in adj[u]:
                if e == parent_edge[u]:
                    continue
                dw = dist.get(w)
                if dw is None:
                    dist[w] = du + 1
                    parent_edge[w] = e
                    queue.append(w)
                else:
                    best = min(best, du + dw + 1)
        if best == 1:
            break
    return best


def distance_matrix(g: Graph) -> np.ndarray:
    return shortest_path(g.adjacency(), unweighted=True, directed=False)


def diameter(g: Graph, chunk: int = 512) -> float:
    """Maximum BFS distance over all pairs; ``math.inf`` when disconnected."""
    a = g.adjacency()
    n = a.shape[0]
    worst = 0.0
    for start in range(0, n, chunk):
        rows = np.arange(start, min(n, start + chunk))
        dist = shortest_path(a, unweighted=True, directed=False, indices=rows)
        worst = max(worst, float(dist.max()))
        if math.isinf(worst):
            return math.inf
    return int(worst)


# ---------------------------------------------------------------------------
# powers


def square(g: RotationGraph) -> RotationGraph:
    """Graph of length-2 walks: port ``i*d + j`` at v takes port i then port j."""
    d = g.degree
    mid = g.nbr
    nbr = g.nbr[mid]
    port = g.port[mid] * d + g.port[:, :, None]
    n = g.num_vertices
    return RotationGraph(nbr.reshape(n, d * d), port.reshape(n, d * d), allow_half_loops=True)


def bipartite_power(g: BipartiteRotationGraph, e: int) -> BipartiteRotationGraph:
    """Odd power: left-to-right walks of length ``e``.

    A left port is the tuple of ports taken (first one most significant);
    the matching right port is the tuple of arrival ports read backwards.
    """
    if e < 1 or e % 2 == 0:
        raise EvenPowerError(f"power {e} is not a positive odd integer")
    n, m = g.num_left, g.num_right
    c, d = g.left_degree, g.right_degree
    end = np.arange(n)[:, None]
    fwd = np.zeros((n, 1), dtype=np.int64)
    rev = np.zeros((n, 1), dtype=np.int64)
    rev_size = 1
    for step in range(e):
        on_left = step % 2 == 0
        nbr, prt, deg = (g.lnbr, g.lport, c) if on_left else (g.rnbr, g.rport, d)
        opp = d if on_left else c
        nxt = nbr[end]  # (n, P, deg)
        arr = prt[end]
        end = nxt.reshape(n, -1)
        fwd = (fwd[:, :, None] * deg + np.arange(deg)[None, None, :]).reshape(n, -1)
        rev = (arr * rev_size + rev[:, :, None]).reshape(n, -1)
        rev_size *= opp
    left_deg = end.shape[1]
    right_deg = rev_size
    rnbr = np.empty((m, right_deg), dtype=np.int64)
    rport = np.empty((m, right_deg), dtype=np.int64)
    rnbr[end, rev] = np.arange(n)[:, None]
    rport[end, rev] = fwd
    return BipartiteRotationGraph(end, rev, rnbr, rport)


# ---------------------------------------------------------------------------
# interchange formats


@dataclass
class EdgeList:
    """Edge-list file contents.

    ``kind`` is ``undirected``, ``directed`` or ``bipartite``.  For bipartite
    lists ``n``/``m`` are the left/right vertex counts; otherwise ``n`` is the
    vertex count and ``m`` the number of edges.
    """

    kind: str
    n: int
    m: int
    edges: np.ndarray
    ports: np.ndarray | None = None

    def to_graph(self, seed: int | None = 0) -> Graph:
        if self.kind == "undirected":
            return from_edge_list(self.edges, self.n, seed, ports=self.ports)
        if self.kind == "bipartite":
            return bipartite_from_edge_list(self.edges, self.n, self.m, seed, ports=self.ports)
        raise ValueError("a directed edge list is not a rotation graph; use double_cover")


def graph_to_edgelist(g: Graph) -> EdgeList:
    if isinstance(g, RotationGraph):
        if g.half_loops:
            raise HalfLoopError("half-loops cannot be written as an edge list")
        ends, ports = g.edges()
        return EdgeList("undirected", g.num_vertices, len(ends), ends, ports)
    ends, ports = g.edges()
    return EdgeList("bipartite", g.num_left, g.num_right, ends, ports)


def write_edge_list(path: str | Path, data: Graph | EdgeList) -> None:
    """Write ``N M kind`` then one ``u v [pu pv]`` line per edge (0-based)."""
    el = data if isinstance(data, EdgeList) else graph_to_edgelist(data)
    lines = [f"{el.n} {el.m} {el.kind}"]
    if el.ports is None:
        lines += [f"{u} {v}" for u, v in el.edges.tolist()]
    else:
        lines += [
            f"{u} {v} {pu} {pv}" for (u, v), (pu, pv) in zip(el.edges.tolist(), el.ports.tolist())
        ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_edge_list(path: str | Path) -> EdgeList:
    text = Path(path).read_text(encoding="utf-8").split("\n")
    header = text[0].split()
    if len(header) != 3 or header[2] not in ("undirected", "directed", "bipartite"):
        raise ValueError(f"bad edge-list header: {text[0]!r}")
    n, m, kind = int(header[0]), int(header[1]), header[2]
    rows = [line.split() for line in text[1:] if line.strip() and not line.startswith("#")]
    if rows and all(len(r) == 4 for r in rows):
        arr = np.array(rows, dtype=np.int64)
        return EdgeList(kind, n, m, arr[:, :2], arr[:, 2:])
    arr = np.array([r[:2] for r in rows], dtype=np.int64).reshape(-1, 2)
    return EdgeList(kind, n, m, arr)


def to_dot(g: Graph, name: str = "G") -> str:
    """Graphviz text with canonically ordered edges."""
    if isinstance(g, RotationGraph):
        n = g.num_vertices
        ends, ports = g.edges()
        labels = [f"v{u} -- v{v} [taillabel={pu}, headlabel={pv}];" for (u, v), (pu, pv) in zip(ends.tolist(), ports.tolist())]
        nodes = [f"v{v};" for v in range(n)]
    else:
        n = g.num_left + g.num_right
        ends, ports = g.edges()
        labels = [f"l{u} -- r{w} [taillabel={pu}, headlabel={pw}];" for (u, w), (pu, pw) in zip(ends.tolist(), ports.tolist())]
        nodes = [f"l{v};" for v in range(g.num_left)] + [f"r{w};" for w in range(g.num_right)]
    if n > DOT_MAX_VERTICES:
        raise TooLargeError(f"DOT export limited to {DOT_MAX_VERTICES} vertices, graph has {n}")
    body = "\n  ".join(nodes + labels)
    return f"graph {name} {{\n  {body}\n}}\n"

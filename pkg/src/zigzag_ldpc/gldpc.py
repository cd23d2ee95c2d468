"""Generalized LDPC codes on product graphs.

Every edge of the graph is a code bit and every vertex is a constraint: the
bits on its edges, listed in ascending port order, must form a codeword of
the linear subcode assigned to it.  For bipartite graphs the left vertices
come first in the vertex numbering, then the right ones.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from pathlib import Path
from typing import Mapping, Sequence, Union

import numpy as np
import scipy.sparse as sp

from .errors import DegreeMismatchError, HalfLoopError, TooLargeError, UnknownCodeError
from .graph_core import (
    BipartiteRotationGraph,
    EdgeList,
    RotationGraph,
    graph_to_edgelist,
)

TRUE_RATE_MAX_BITS = 20_000
MIN_DISTANCE_MAX_N = 32

Graph = Union[RotationGraph, BipartiteRotationGraph]


# ---------------------------------------------------------------------------
# GF(2) linear algebra


def _pack_rows(m: np.ndarray) -> np.ndarray:
    """Pack a 0/1 matrix into rows of uint64 words (column order is not preserved)."""
    m = np.asarray(m, dtype=np.uint8) & 1
    rows, cols = m.shape
    width = -(-cols // 64) * 64
    padded = np.zeros((rows, width), dtype=np.uint8)
    padded[:, :cols] = m
    return np.packbits(padded, axis=1).view(np.uint64).copy()


def gf2_rank(m: np.ndarray | sp.spmatrix) -> int:
    """Rank over GF(2) by Gaussian elimination on packed rows."""
    if sp.issparse(m):
        m = m.toarray()
    m = np.asarray(m)
    if m.size == 0:
        return 0
    rows = _pack_rows(m)
    nrows, nwords = rows.shape
    rank = 0
    for w in range(nwords):
        for b in range(64):
            if rank == nrows:
                return rank
            mask = np.uint64(1) << np.uint64(b)
            hits = np.flatnonzero(rows[rank:, w] & mask)
            if hits.size == 0:
                continue
            piv = rank + hits[0]
            if piv != rank:
                rows[[rank, piv]] = rows[[piv, rank]]
            below = rank + 1 + np.flatnonzero(rows[rank + 1 :, w] & mask)
            if below.size:
                rows[below] ^= rows[rank]
            rank += 1
    return rank


def rref(m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(2) and its pivot columns (small matrices)."""
    a = (np.asarray(m, dtype=np.uint8) & 1).copy()
    pivots: list[int] = []
    r = 0
    for c in range(a.shape[1]):
        if r == a.shape[0]:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        p = r + nz[0]
        a[[r, p]] = a[[p, r]]
        others = np.flatnonzero(a[:, c])
        others = others[others != r]
        a[others] ^= a[r]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def nullspace(h: np.ndarray) -> np.ndarray:
    """Basis of {x : H x = 0} as the rows of a generator matrix."""
    h = np.asarray(h, dtype=np.uint8)
    n = h.shape[1]
    if h.shape[0] == 0:
        return np.eye(n, dtype=np.uint8)
    r, pivots = rref(h)
    free = [c for c in range(n) if c not in pivots]
    g = np.zeros((len(free), n), dtype=np.uint8)
    for i, f in enumerate(free):
        g[i, f] = 1
        for row, pc in enumerate(pivots):
            g[i, pc] = r[row, f]
    return g


def min_distance(h: np.ndarray) -> int:
    """Minimum distance of the code with parity-check matrix ``h``.

    Small dimension: every codeword is enumerated.  Otherwise the smallest
    set of columns summing to zero is searched for.
    """
    h = np.asarray(h, dtype=np.uint8)
    n = h.shape[1]
    k = n - gf2_rank(h)
    if k == 0:
        raise ValueError("the zero code has no minimum distance")
    if n > MIN_DISTANCE_MAX_N:
        raise TooLargeError(f"minimum distance search limited to n <= {MIN_DISTANCE_MAX_N}")
    if k <= 16:
        words = codewords_of(nullspace(h))
        return int(words[1:].sum(axis=1).min())
    cols = [int("".join(map(str, h[:, j])) or "0", 2) for j in range(n)]
    for w in range(1, n + 1):
        for subset in combinations(cols, w):
            acc = 0
            for c in subset:
                acc ^= c
            if acc == 0:
                return w
    raise AssertionError("unreachable: n + 1 columns are always dependent")


def codewords_of(g: np.ndarray) -> np.ndarray:
    """All 2^k codewords spanned by the rows of ``g``; row 0 is the zero word."""
    k = g.shape[0]
    if k > 22:
        raise TooLargeError(f"refusing to enumerate 2^{k} codewords")
    msgs = (np.arange(1 << k)[:, None] >> np.arange(k)[None, :]) & 1
    return ((msgs.astype(np.int64) @ g.astype(np.int64)) & 1).astype(np.uint8)


# ---------------------------------------------------------------------------
# component codes


@dataclass(frozen=True, eq=False)
class LinearCode:
    """Binary [n, k, d_min] code given by a full-row-rank parity-check matrix."""

    n: int
    k: int
    H: np.ndarray
    d_min: int | None = None
    name: str = ""
    note: str = ""

    def __post_init__(self) -> None:
        h = np.asarray(self.H, dtype=np.uint8).reshape(-1, self.n) & 1
        h.setflags(write=False)
        object.__setattr__(self, "H", h)
        if h.shape[0] != self.n - self.k:
            raise ValueError(f"H has {h.shape[0]} rows, expected n - k = {self.n - self.k}")
        if gf2_rank(h) != h.shape[0]:
            raise ValueError("H does not have full row rank")
        if not self.name:
            object.__setattr__(self, "name", f"[{self.n},{self.k},{self.d_min or '?'}]")

    @property
    def r(self) -> int:
        return self.n - self.k

    def generator(self) -> np.ndarray:
        return nullspace(self.H)

    def codewords(self) -> np.ndarray:
        return codewords_of(self.generator())

    def syndrome(self, bits: np.ndarray) -> np.ndarray:
        return (np.asarray(bits, dtype=np.int64) @ self.H.T.astype(np.int64)) & 1

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "n": self.n,
            "k": self.k,
            "d_min": self.d_min,
            "note": self.note,
            "H": ["".join(map(str, row)) for row in self.H.tolist()],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "LinearCode":
        rows = [[int(ch) for ch in s] for s in obj["H"]]
        h = np.array(rows, dtype=np.uint8).reshape(len(rows), obj["n"])
        return cls(obj["n"], obj["k"], h, obj.get("d_min"), obj.get("name", ""), obj.get("note", ""))

    def __repr__(self) -> str:
        return f"LinearCode({self.name})"


def _int_columns(values: Sequence[int], m: int) -> np.ndarray:
    v = np.asarray(values, dtype=np.int64)
    return ((v[None, :] >> np.arange(m)[:, None]) & 1).astype(np.uint8)


def _weight(x: int) -> int:
    return bin(x).count("1")


def _units_first(values: list[int], m: int) -> list[int]:
    units = [1 << i for i in range(m)]
    return units + [v for v in values if v not in units]


def _construct(n: int, k: int, d: int) -> tuple[np.ndarray, str]:
    m = n - k
    if n < 1 or k < 0 or m < 0:
        raise UnknownCodeError(f"[{n},{k},{d}] is not a valid parameter set")
    if m == 0:
        if d != 1:
            raise UnknownCodeError(f"[{n},{n}] has distance 1")
        return np.zeros((0, n), dtype=np.uint8), "full space"
    nonzero = list(range(1, 1 << m))
    if d == 2:
        if m == 1:
            return np.ones((1, n), dtype=np.uint8), "single parity check"
        if n < (1 << m):
            raise UnknownCodeError(f"no lengthened construction for [{n},{k},2]")
        cols = [nonzero[j % len(nonzero)] for j in range(n)]
        return _int_columns(cols, m), "lengthened Hamming (repeated columns)"
    if d == 3:
        if n == (1 << m) - 1:
            return _int_columns(nonzero, m), "Hamming"
        if not m < n < (1 << m) or m < 2:
            raise UnknownCodeError(f"no distance-3 construction for [{n},{k}]")
        # distinct columns; units then 3 = 1 ^ 2 gives a dependent triple
        return _int_columns(_units_first(nonzero, m)[:n], m), "shortened Hamming"
    if d == 4:
        odd = _units_first([v for v in nonzero if _weight(v) % 2], m)
        if m < 3 or not m < n <= (1 << (m - 1)):
            raise UnknownCodeError(f"no distance-4 construction for [{n},{k}]")
        return _int_columns(odd[:n], m), "shortened extended Hamming"
    raise UnknownCodeError(f"no construction for distance {d}")


_NAME = re.compile(r"^\[\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\]$")

# a binary [20,15,4] code cannot exist: puncturing it would give a [19,15,3]
# code, whose 4 x 19 parity-check matrix needs 19 distinct nonzero columns
IMPOSSIBLE = {(20, 15, 4): (20, 15, 3)}

LIBRARY_NAMES = ("[3,2,2]", "[7,4,3]", "[9,6,2]", "[9,8,2]", "[15,11,3]", "[16,12,2]", "[20,15,4]", "[25,21,2]")


@lru_cache(maxsize=None)
def subcode_library(name: str) -> LinearCode:
    """Component code by parameter name, e.g. ``"[15,11,3]"``, ``"hamming:4"``, ``"spc:9"``.

    ``"[20,15,4]"`` resolves to a [20,15,3] code with the same length and
    dimension (the best distance possible) and says so in ``note``.
    """
    key = name.strip().lower()
    if key.startswith("hamming:"):
        m = int(key.split(":")[1])
        n, k, d = (1 << m) - 1, (1 << m) - 1 - m, 3
    elif key.startswith("spc:"):
        n = int(key.split(":")[1])
        n, k, d = n, n - 1, 2
    else:
        match = _NAME.match(key)
        if not match:
            raise UnknownCodeError(f"unrecognized code name {name!r}")
        n, k, d = map(int, match.groups())
    note = ""
    target = (n, k, d)
    if target in IMPOSSIBLE:
        n, k, d = IMPOSSIBLE[target]
        note = f"no binary [{target[0]},{target[1]},{target[2]}] code exists; d_min is {d}"
    h, how = _construct(n, k, d)
    actual = d if n - k == 0 else min_distance(h)
    if actual != d:
        raise UnknownCodeError(f"construction for [{n},{k},{d}] has distance {actual}")
    label = f"[{target[0]},{target[1]},{target[2]}]"
    return LinearCode(n, k, h, actual, label, "; ".join(x for x in (how, note) if x))


# ---------------------------------------------------------------------------
# assembly


@dataclass(frozen=True, eq=False)
class ConstraintGroup:
    """All vertices sharing one subcode; ``edges[i]`` lists the bits of ``vertices[i]``."""

    code: LinearCode
    vertices: np.ndarray
    edges: np.ndarray


@dataclass(eq=False)
class GldpcCode:
    graph: Graph
    codes: list[LinearCode]
    code_index: np.ndarray
    edge_order: list[np.ndarray]
    n_bits: int
    groups: list[ConstraintGroup]
    H_global: sp.csr_matrix
    params: dict = field(default_factory=dict)

    @property
    def num_vertices(self) -> int:
        return len(self.code_index)

    @property
    def num_checks(self) -> int:
        return self.H_global.shape[0]

    def assignment(self, v: int) -> LinearCode:
        return self.codes[int(self.code_index[v])]

    def design_rate(self) -> Fraction:
        return design_rate(self)

    def is_codeword(self, bits: np.ndarray) -> bool:
        bits = np.asarray(bits, dtype=np.int64)
        return all(
            not np.any((bits[g.edges] @ g.code.H.T.astype(np.int64)) & 1) for g in self.groups
        )


def _vertex_ports(graph: Graph) -> list[np.ndarray]:
    """Global edge id of every port, per vertex, in ascending port order."""
    if isinstance(graph, RotationGraph):
        if graph.half_loops:
            raise HalfLoopError("a half-loop cannot carry a code bit between two constraints")
        n, d = graph.num_vertices, graph.degree
        here = np.arange(n * d)
        there = (graph.nbr * d + graph.port).ravel()
        first = here < there
        edge_of = np.empty(n * d, dtype=np.int64)
        ids = np.arange(int(first.sum()))
        edge_of[here[first]] = ids
        edge_of[there[first]] = ids
        return list(edge_of.reshape(n, d))
    n, c = graph.num_left, graph.left_degree
    left = np.arange(n * c).reshape(n, c)
    right = graph.rnbr * c + graph.rport
    return list(left) + list(right)


def _vertex_degrees(graph: Graph) -> np.ndarray:
    if isinstance(graph, RotationGraph):
        return np.full(graph.num_vertices, graph.degree)
    return np.concatenate(
        [np.full(graph.num_left, graph.left_degree), np.full(graph.num_right, graph.right_degree)]
    )


def alternating(graph: Graph, code_a: LinearCode, code_b: LinearCode) -> list[LinearCode]:
    """Mixed assignment: even vertices get ``code_a``, odd vertices ``code_b``."""
    count = len(_vertex_degrees(graph))
    return [code_a if v % 2 == 0 else code_b for v in range(count)]


def _expand(graph: Graph, assignment) -> list[LinearCode]:
    count = len(_vertex_degrees(graph))
    if isinstance(assignment, LinearCode):
        return [assignment] * count
    if isinstance(assignment, Mapping):
        if not isinstance(graph, BipartiteRotationGraph):
            raise ValueError("a left/right assignment needs a bipartite graph")
        return [assignment["left"]] * graph.num_left + [assignment["right"]] * graph.num_right
    codes = list(assignment)
    if len(codes) != count:
        raise ValueError(f"assignment lists {len(codes)} codes for {count} vertices")
    return codes


def assemble(graph: Graph, assignment, *, params: dict | None = None) -> GldpcCode:
    """Compile ``graph`` and a subcode assignment into a GLDPC code.

    ``assignment`` is a single :class:`LinearCode` (uniform), a mapping with
    ``left``/``right`` codes (bipartite graphs) or one code per vertex.
    """
    per_vertex = _expand(graph, assignment)
    degrees = _vertex_degrees(graph)
    codes: list[LinearCode] = []
    slot: dict[int, int] = {}
    index = np.empty(len(per_vertex), dtype=np.int64)
    for v, code in enumerate(per_vertex):
        if code.n != degrees[v]:
            raise DegreeMismatchError(f"vertex {v} has degree {degrees[v]} but its code has length {code.n}")
        if id(code) not in slot:
            slot[id(code)] = len(codes)
            codes.append(code)
        index[v] = slot[id(code)]
    edge_order = _vertex_ports(graph)
    n_bits = int(graph.num_edges)

    groups = []
    for ci, code in enumerate(codes):
        verts = np.flatnonzero(index == ci)
        groups.append(ConstraintGroup(code, verts, np.stack([edge_order[v] for v in verts])))

    checks = np.array([codes[i].r for i in index], dtype=np.int64)
    row_base = np.concatenate([[0], np.cumsum(checks)[:-1]])
    rows, cols = [], []
    for g in groups:
        hr, hc = np.nonzero(g.code.H)
        rows.append((row_base[g.vertices][:, None] + hr[None, :]).ravel())
        cols.append(g.edges[:, hc].ravel())
    rows_a = np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64)
    cols_a = np.concatenate(cols) if cols else np.zeros(0, dtype=np.int64)
    h = sp.coo_matrix(
        (np.ones(len(rows_a), dtype=np.int64), (rows_a, cols_a)), shape=(int(checks.sum()), n_bits)
    ).tocsr()
    h.sum_duplicates()
    h.data %= 2
    h.eliminate_zeros()
    h = h.astype(np.uint8)
    return GldpcCode(graph, codes, index, edge_order, n_bits, groups, h, dict(params or {}))


def design_rate(code: GldpcCode) -> Fraction:
    """1 - (total subcode check rows) / (number of bits), exactly."""
    return 1 - Fraction(code.num_checks, code.n_bits)


def true_rate(code: GldpcCode) -> Fraction:
    if code.n_bits > TRUE_RATE_MAX_BITS:
        raise TooLargeError(f"rank computation limited to {TRUE_RATE_MAX_BITS} bits, code has {code.n_bits}")
    return 1 - Fraction(gf2_rank(code.H_global), code.n_bits)


# ---------------------------------------------------------------------------
# files


def write_alist(path: str | Path, h: sp.spmatrix | np.ndarray) -> None:
    """MacKay alist: ``n m``, max weights, column/row weights, zero-padded 1-based indices."""
    h = sp.csc_matrix(h)
    m, n = h.shape
    col_sets = [h.indices[h.indptr[j] : h.indptr[j + 1]] + 1 for j in range(n)]
    hr = h.tocsr()
    row_sets = [hr.indices[hr.indptr[i] : hr.indptr[i + 1]] + 1 for i in range(m)]
    max_c = max((len(c) for c in col_sets), default=0)
    max_r = max((len(r) for r in row_sets), default=0)

    def padded(x, width):
        return " ".join(map(str, list(np.sort(x)) + [0] * (width - len(x))))

    lines = [f"{n} {m}", f"{max_c} {max_r}"]
    lines.append(" ".join(str(len(c)) for c in col_sets))
    lines.append(" ".join(str(len(r)) for r in row_sets))
    lines += [padded(c, max_c) for c in col_sets]
    lines += [padded(r, max_r) for r in row_sets]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_alist(path: str | Path) -> sp.csr_matrix:
    tokens = [int(x) for x in Path(path).read_text(encoding="utf-8").split()]
    n, m, max_c, max_r = tokens[:4]
    pos = 4 + n + m
    rows, cols = [], []
    for j in range(n):
        for r in tokens[pos : pos + max_c]:
            if r:
                rows.append(r - 1)
                cols.append(j)
        pos += max_c
    return sp.csr_matrix((np.ones(len(rows), dtype=np.uint8), (rows, cols)), shape=(m, n))


def meta_path_for(alist_path: str | Path) -> Path:
    p = Path(alist_path)
    return p.with_name(p.stem + ".meta.json")


def save(code: GldpcCode, alist_path: str | Path, *, true_rate_value: Fraction | None = None) -> Path:
    """Write the alist file and its JSON metadata next to it; returns the metadata path."""
    write_alist(alist_path, code.H_global)
    el = graph_to_edgelist(code.graph)
    rate = design_rate(code)
    meta = {
        "n_bits": code.n_bits,
        "num_checks": code.num_checks,
        "design_rate": str(rate),
        "design_rate_float": float(rate),
        "true_rate": None if true_rate_value is None else str(true_rate_value),
        "true_rate_float": None if true_rate_value is None else float(true_rate_value),
        "params": code.params,
        "codes": [c.to_json() for c in code.codes],
        "code_index": code.code_index.tolist(),
        "graph": {
            "kind": el.kind,
            "n": el.n,
            "m": el.m,
            "edges": el.edges.tolist(),
            "ports": el.ports.tolist(),
        },
    }
    out = meta_path_for(alist_path)
    out.write_text(json.dumps(meta, sort_keys=True) + "\n", encoding="utf-8")
    return out


def load(path: str | Path) -> tuple[GldpcCode, dict]:
    """Rebuild a saved code from its metadata (``.meta.json``) or alist path.

    When the alist file is present it must agree with the rebuilt matrix.
    """
    path = Path(path)
    if path.name.endswith(".meta.json"):
        meta_path = path
        alist_path = path.with_name(path.name[: -len(".meta.json")] + ".alist")
    else:
        alist_path, meta_path = path, meta_path_for(path)
    meta = json.loads(meta_path.read_text(encoding="utf-8"))
    g = meta["graph"]
    el = EdgeList(g["kind"], g["n"], g["m"], np.array(g["edges"], dtype=np.int64).reshape(-1, 2),
                  np.array(g["ports"], dtype=np.int64).reshape(-1, 2))
    graph = el.to_graph(seed=None)
    codes = [LinearCode.from_json(c) for c in meta["codes"]]
    code = assemble(graph, [codes[i] for i in meta["code_index"]], params=meta.get("params"))
    if alist_path.exists():
        stored = read_alist(alist_path)
        if stored.shape != code.H_global.shape or (stored != code.H_global).nnz:
            raise ValueError(f"{alist_path} does not match the metadata in {meta_path}")
    return code, meta

"""Cayley graphs of semidirect products A x| B.

Two families are supported:

``shift``
    A = F_2^p (bit vectors packed into ints, bit i is coordinate x_i),
    B = Z_p acting by cyclic shift ``phi_b(x)_i = x_{i+b}``, S_B = {+1, -1}.
``mobius``
    A = F_2^{P^1} with P^1 = F_p plus infinity (coordinate p), B = SL_2(F_p)
    acting by Moebius permutation of coordinates, S_B = {[[1,1],[0,1]], [[1,0],[1,1]]}.

Group law: ``(a, b)(c, d) = (a + phi_b(c), b d)`` with ``phi_b(c)_{b.x} = c_x``.
A vertex ``(a, b)`` is stored at index ``b_index * |A| + a``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Literal, Sequence

import numpy as np

from .errors import InvalidElementError, NonSymmetricError
from .graph_core import BipartiteRotationGraph, RotationGraph, double_cover

Family = Literal["shift", "mobius"]
MAX_DRAWS = 1000


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p**0.5) + 1))


def two_generates(p: int) -> bool:
    """True when 2 generates the multiplicative group of Z_p."""
    if not is_prime(p) or p == 2:
        return False
    return len({pow(2, e, p) for e in range(1, p)}) == p - 1


class SemidirectGroup:
    """Element tables for one family and prime."""

    def __init__(self, family: Family, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.family = family
        self.p = p
        if family == "shift":
            self.coords = p
            self.b_elems = np.arange(p)
            self.b_size = p
            self.b_identity = 0
            self.b_mul = (np.arange(p)[:, None] + np.arange(p)[None, :]) % p
            self.b_inv = (-np.arange(p)) % p
            # coordinate permutation: phi_b moves coordinate x to position x - b
            self.coord_perm = (np.arange(p)[None, :] - np.arange(p)[:, None]) % p
            self.generators_b = [1, p - 1]
        elif family == "mobius":
            self.coords = p + 1
            mats = [
                (a, b, c, d)
                for a in range(p)
                for b in range(p)
                for c in range(p)
                for d in range(p)
                if (a * d - b * c) % p == 1
            ]
            self.b_elems = np.array(mats, dtype=np.int64)
            self.b_size = len(mats)
            code = self._mat_code(self.b_elems)
            lookup = np.full(p**4, -1, dtype=np.int64)
            lookup[code] = np.arange(self.b_size)
            self._lookup = lookup
            self.b_identity = int(lookup[self._mat_code(np.array([[1, 0, 0, 1]]))[0]])
            x, y = self.b_elems[:, None, :], self.b_elems[None, :, :]
            prod = np.stack(
                [
                    x[..., 0] * y[..., 0] + x[..., 1] * y[..., 2],
                    x[..., 0] * y[..., 1] + x[..., 1] * y[..., 3],
                    x[..., 2] * y[..., 0] + x[..., 3] * y[..., 2],
                    x[..., 2] * y[..., 1] + x[..., 3] * y[..., 3],
                ],
                axis=-1,
            ) % p
            self.b_mul = lookup[self._mat_code(prod)]
            self.b_inv = np.argmax(self.b_mul == self.b_identity, axis=1)
            self.coord_perm = np.array([[self._moebius(m, x) for x in range(p + 1)] for m in mats])
            self.generators_b = [self.b_index((1, 1, 0, 1)), self.b_index((1, 0, 1, 1))]
        else:
            raise ValueError(f"unknown family {family!r}")
        self.a_size = 1 << self.coords

    def _mat_code(self, m: np.ndarray) -> np.ndarray:
        p = self.p
        return ((m[..., 0] * p + m[..., 1]) * p + m[..., 2]) * p + m[..., 3]

    def _moebius(self, m: tuple[int, int, int, int], x: int) -> int:
        a, b, c, d = m
        p = self.p
        if x == p:  # infinity
            return a * pow(c, -1, p) % p if c % p else p
        den = (c * x + d) % p
        if den == 0:
            return p
        return (a * x + b) * pow(den, -1, p) % p

    def b_index(self, mat: Sequence[int]) -> int:
        idx = int(self._lookup[self._mat_code(np.array([list(mat)]))[0]])
        if idx < 0:
            raise InvalidElementError(f"{mat} is not in SL_2(F_{self.p})")
        return idx

    @cached_property
    def phi(self) -> np.ndarray:
        """``phi[b, a]``: action of B element ``b`` on the packed vector ``a``."""
        a = np.arange(self.a_size, dtype=np.int64)
        out = np.zeros((self.b_size, self.a_size), dtype=np.int64)
        for x in range(self.coords):
            bit = (a >> x) & 1
            out |= bit[None, :] << self.coord_perm[:, x][:, None]
        return out

    def check_a(self, a: int) -> int:
        if not 0 <= a < self.a_size:
            raise InvalidElementError(f"{a} is not a {self.coords}-bit vector")
        return int(a)

    def mul(self, x: tuple[int, int], y: tuple[int, int]) -> tuple[int, int]:
        (a, b), (c, d) = x, y
        return int(a ^ self.phi[b, c]), int(self.b_mul[b, d])

    def inverse(self, x: tuple[int, int]) -> tuple[int, int]:
        a, b = x
        bi = int(self.b_inv[b])
        return int(self.phi[bi, a]), bi

    @property
    def order(self) -> int:
        return self.a_size * self.b_size

    def right_multiply(self, s: tuple[int, int]) -> np.ndarray:
        """Index of g*s for every vertex index g."""
        c, d = s
        b = np.repeat(np.arange(self.b_size), self.a_size)
        a = np.tile(np.arange(self.a_size), self.b_size)
        return self.b_mul[b, d] * self.a_size + (a ^ self.phi[b, c])


def orbit(a: int, family: Family, p: int) -> set[int]:
    """Orbit of a packed vector under the B-action."""
    group = SemidirectGroup(family, p)
    return set(group.phi[:, group.check_a(a)].tolist())


@dataclass
class CayleySpec:
    family: Family
    p: int
    k: int
    product_kind: Literal["zigzag", "replacement"] = "zigzag"
    seed: int = 0
    reps: list[int] | None = None
    require_primitive_two: bool = False
    symmetrize: bool = True

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.family == "shift" and self.require_primitive_two and not two_generates(self.p):
            raise ValueError(f"2 does not generate Z_{self.p}^*")
        if self.reps is not None:
            if len(set(self.reps)) != len(self.reps):
                raise ValueError("representatives must be distinct")
            self.k = len(self.reps)


@dataclass
class CayleyGraph:
    spec: CayleySpec
    group: SemidirectGroup
    reps: list[int]
    generators: list[tuple[int, int]]
    graph: RotationGraph | BipartiteRotationGraph
    arcs: np.ndarray | None = None
    symmetrized: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def degree(self) -> int:
        return len(self.generators)

    @property
    def num_group_elements(self) -> int:
        return self.group.order


def draw_reps(group: SemidirectGroup, k: int, seed: int | tuple[int, ...]) -> list[int]:
    """k distinct nonzero vectors of A drawn from the seeded generator."""
    if k >= group.a_size:
        raise ValueError(f"cannot draw {k} distinct nonzero elements from |A| = {group.a_size}")
    rng = np.random.default_rng(seed)
    reps: list[int] = []
    while len(reps) < k:
        a = int(rng.integers(1, group.a_size))
        if a not in reps:
            reps.append(a)
    return reps


def _unique(elems: list[tuple[int, int]]) -> list[tuple[int, int]]:
    seen: dict[tuple[int, int], None] = {}
    for e in elems:
        seen.setdefault(e, None)
    return list(seen)


def zigzag_generators(group: SemidirectGroup, reps: Sequence[int]) -> list[tuple[int, int]]:
    """(1, beta)(a_i, 1)(1, beta') for beta, beta' in S_B, duplicates removed."""
    one = group.b_identity
    out = []
    for a in reps:
        for beta in group.generators_b:
            left = group.mul((0, beta), (group.check_a(a), one))
            for beta2 in group.generators_b:
                out.append(group.mul(left, (0, beta2)))
    return _unique(out)


def replacement_generators(group: SemidirectGroup, reps: Sequence[int]) -> list[tuple[int, int]]:
    """(1, S_B) together with (a_i, 1)."""
    one = group.b_identity
    out = [(0, beta) for beta in group.generators_b]
    out += [(group.check_a(a), one) for a in reps]
    return _unique(out)


def _expected_size(spec: CayleySpec, k: int) -> int:
    return 4 * k if spec.product_kind == "zigzag" else k + 2


def _build(spec: CayleySpec, make_generators) -> CayleyGraph:
    group = SemidirectGroup(spec.family, spec.p)
    identity = (0, group.b_identity)
    notes = []
    if spec.reps is not None:
        reps = list(spec.reps)
        gens = make_generators(group, reps)
    else:
        # redraw until no generator coincides with another or with the identity
        for attempt in range(MAX_DRAWS):
            reps = draw_reps(group, spec.k, (spec.seed, attempt))
            gens = make_generators(group, reps)
            if len(gens) == _expected_size(spec, spec.k) and identity not in gens:
                break
        if attempt:
            notes.append(f"representatives redrawn {attempt} time(s) to avoid coinciding generators")
    if identity in gens:
        gens.remove(identity)
        notes.append("identity element removed from the generating set")
    expected = _expected_size(spec, len(reps))
    if len(gens) < expected:
        notes.append(f"generating set has {len(gens)} distinct elements, fewer than {expected}")
    if spec.family == "shift":
        return _undirected(spec, group, reps, gens, notes)
    return _directed(spec, group, reps, gens, notes)


def _undirected(spec, group, reps, gens, notes) -> CayleyGraph:
    gen_set = set(gens)
    missing = [group.inverse(s) for s in gens if group.inverse(s) not in gen_set]
    symmetrized = bool(missing)
    if symmetrized and not spec.symmetrize:
        raise NonSymmetricError(f"{len(missing)} generator inverse(s) missing from S")
    if symmetrized:
        gens = gens + _unique(missing)
        notes.append(f"generating set symmetrized, degree {len(gens) - len(missing)} -> {len(gens)}")
    index = {s: t for t, s in enumerate(gens)}
    nbr = np.stack([group.right_multiply(s) for s in gens], axis=1)
    port = np.broadcast_to(
        np.array([index[group.inverse(s)] for s in gens])[None, :], nbr.shape
    ).copy()
    graph = RotationGraph(nbr, port)
    return CayleyGraph(spec, group, reps, gens, graph, None, symmetrized, notes)


def _directed(spec, group, reps, gens, notes) -> CayleyGraph:
    targets = np.stack([group.right_multiply(s) for s in gens], axis=1)
    n, deg = targets.shape
    arcs = np.stack([np.repeat(np.arange(n), deg), targets.ravel()], axis=1)
    # left copy of g uses port t for generator t; right copy of g*s_t receives it on port t
    ports = np.stack([np.tile(np.arange(deg), n)] * 2, axis=1)
    graph = double_cover(arcs, n, seed=None, ports=ports)
    return CayleyGraph(spec, group, reps, gens, graph, arcs, False, notes)


def build_zigzag_cayley(spec: CayleySpec) -> CayleyGraph:
    """Cayley graph of the zig-zag generating set.

    The shift family gives an undirected graph (its generating set is
    symmetrized if necessary); the Moebius family gives the bipartite double
    cover of the directed Cayley graph, with the arcs kept on the result.
    """
    if spec.product_kind != "zigzag":
        raise ValueError("spec.product_kind must be 'zigzag'")
    return _build(spec, zigzag_generators)


def build_replacement_cayley(spec: CayleySpec) -> CayleyGraph:
    if spec.product_kind != "replacement":
        raise ValueError("spec.product_kind must be 'replacement'")
    return _build(spec, replacement_generators)


def check_symmetric(group: SemidirectGroup, gens: Sequence[tuple[int, int]]) -> None:
    gen_set = set(gens)
    for s in gens:
        if group.inverse(s) not in gen_set:
            raise NonSymmetricError(f"inverse of {s} is not a generator")

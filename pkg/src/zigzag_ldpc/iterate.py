"""Iterative expander families and their eigenvalue recurrences.

``zigzag_original``
    G_1 = H^2, G_{i+1} = G_i^2 (z) H with H a (D^4, D) graph.
``zigzag_modified``
    G_1 = H^3, G_{i+1} = G_i^3 (zm) H with H biregular of degrees (c, d)
    on (c^4 d^5, c^5 d^4) vertices.
``replacement``
    G_{i+1} = G_i^4 (r) H with G_1 an (N, d+1) graph and H a ((d+1)^4, d) graph.

Levels whose vertex count would exceed the budget are traced from the bound
recurrence alone (``constructed = False``).
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Literal

from scipy.sparse.csgraph import connected_components

from . import spectral
from .errors import DivergentError, LevelBudgetError, SizeMismatchError
from .graph_core import (
    BipartiteRotationGraph,
    RotationGraph,
    bipartite_power,
    random_biregular,
    random_regular,
    square,
)
from .products import replacement, replacement_bound, zigzag, zigzag_modified

Family = Literal["zigzag_original", "zigzag_modified", "replacement"]

DEFAULT_BUDGET = 1 << 20
DEFAULT_MEASURE_LIMIT = spectral.DENSE_MAX
FIXED_POINT_TOL = 1e-10
FIXED_POINT_STEPS = 100_000
DIVERGENCE_GAP = 1e-6

CEILING = {"zigzag_original": 2 / 5, "zigzag_modified": 0.55, "replacement": 0.86}
PRECONDITION = {"zigzag_original": 1 / 5, "zigzag_modified": 0.296, "replacement": 0.2}


@dataclass
class LevelRecord:
    level: int
    num_left: int
    num_right: int | None
    degree_left: int
    degree_right: int | None
    lambda_bound: float
    measured_lambda: float | None = None
    constructed: bool = False


@dataclass
class IterationTrace:
    family: str
    levels: list[LevelRecord]
    seed: int | None
    precondition_ok: bool
    seed_lambdas: dict[str, float]
    ceiling: float
    notes: list[str] = field(default_factory=list)

    def bounds(self) -> list[float]:
        return [r.lambda_bound for r in self.levels]

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2)


def measure(g, limit: int = DEFAULT_MEASURE_LIMIT) -> float | None:
    """Bound-relevant second eigenvalue; 1 for a disconnected graph, None above ``limit``."""
    size = g.num_vertices if isinstance(g, RotationGraph) else g.num_left + g.num_right
    if connected_components(g.adjacency(), directed=False)[0] > 1:
        return 1.0
    if size > limit:
        return None
    return spectral.lambda2(g).expansion


def _over_budget(count: int, budget: int, strict: bool, trace_notes: list[str], level: int) -> bool:
    if count <= budget:
        return False
    if strict:
        raise LevelBudgetError(f"level {level} needs {count} vertices, budget is {budget}")
    trace_notes.append(f"level {level} ({count} vertices) exceeds budget {budget}; bound only")
    return True


# ---------------------------------------------------------------------------
# recurrences


# a second eigenvalue never exceeds 1, so larger (vacuous) bounds are fed back as 1


def zigzag_original_step(prev: float, lam_h: float) -> float:
    return min(1.0, prev) ** 2 + lam_h + lam_h**2


def zigzag_modified_step(prev: float, lam_h: float) -> float:
    return min(1.0, prev) ** 3 + lam_h + lam_h**2


def replacement_step(prev: float, lam_h: float, d: int, power: int = 4) -> float:
    return replacement_bound(min(1.0, prev) ** power, min(1.0, lam_h), d, "sqrt")


def recurrence_fixed_point(family: str, params: dict) -> float:
    """Limit of a family's bound recurrence started from its level-1 value.

    ``family`` is one of the three families or ``replacement_squared`` (the
    variant G_{i+1} = G_i^2 (r) H).  ``params`` holds ``lam`` (the seed
    graph H), plus ``lam1`` and ``d`` for the replacement families.
    Raises :class:`DivergentError` when the sequence leaves [0, 1] or tends to 1.
    """
    lam = float(params["lam"])
    if family == "zigzag_original":
        x, step = lam**2, lambda v: zigzag_original_step(v, lam)
    elif family == "zigzag_modified":
        x, step = lam**3, lambda v: zigzag_modified_step(v, lam)
    elif family in ("replacement", "replacement_squared"):
        power = 4 if family == "replacement" else 2
        d = int(params["d"])
        x, step = float(params["lam1"]), lambda v: replacement_step(v, lam, d, power)
    else:
        raise ValueError(f"unknown family {family!r}")
    for _ in range(FIXED_POINT_STEPS):
        y = step(x)
        if y > 1:
            raise DivergentError(f"bound sequence exceeds 1 ({y:.6g})")
        if abs(y - x) < FIXED_POINT_TOL:
            x = y
            break
        x = y
    if x >= 1 - DIVERGENCE_GAP:
        raise DivergentError(f"bound sequence tends to 1 (reached {x:.12g})")
    return x


# ---------------------------------------------------------------------------
# constructions


def iterate_zigzag(
    h: RotationGraph,
    levels: int,
    *,
    budget: int = DEFAULT_BUDGET,
    strict: bool = False,
    measure_limit: int = DEFAULT_MEASURE_LIMIT,
    seed: int | None = None,
    lam_h: float | None = None,
) -> IterationTrace:
    deg = h.degree
    if h.num_vertices != deg**4:
        raise SizeMismatchError(f"H must have D^4 = {deg**4} vertices, has {h.num_vertices}")
    lam_h = measure(h) if lam_h is None else lam_h
    notes: list[str] = []
    records = []
    g = square(h)
    bound = lam_h**2
    size = deg**4
    for level in range(1, levels + 1):
        if level > 1:
            bound = zigzag_original_step(bound, lam_h)
            size *= deg**4
            if g is not None and not _over_budget(size, budget, strict, notes, level):
                g = zigzag(square(g), h)
            else:
                g = None
        rec = LevelRecord(level, size, None, deg**2, None, bound, constructed=g is not None)
        if g is not None:
            assert g.num_vertices == size and g.degree == deg**2
            rec.measured_lambda = measure(g, measure_limit)
        records.append(rec)
    ok = lam_h <= PRECONDITION["zigzag_original"]
    return IterationTrace("zigzag_original", records, seed, ok, {"lambda_h": lam_h}, CEILING["zigzag_original"], notes)


def iterate_zigzag_modified(
    h: BipartiteRotationGraph,
    levels: int,
    *,
    budget: int = DEFAULT_BUDGET,
    strict: bool = False,
    measure_limit: int = DEFAULT_MEASURE_LIMIT,
    seed: int | None = None,
    lam_h: float | None = None,
) -> IterationTrace:
    c, d = h.left_degree, h.right_degree
    n1, m1 = c**4 * d**5, c**5 * d**4
    if (h.num_left, h.num_right) != (n1, m1):
        raise SizeMismatchError(
            f"H must be on (c^4 d^5, c^5 d^4) = ({n1}, {m1}) vertices, is on ({h.num_left}, {h.num_right})"
        )
    lam_h = measure(h) if lam_h is None else lam_h
    notes: list[str] = []
    records = []
    g = bipartite_power(h, 3)
    bound = lam_h**3
    n, m = n1, m1
    for level in range(1, levels + 1):
        if level > 1:
            bound = zigzag_modified_step(bound, lam_h)
            n, m = n * n1, m * n1
            if g is not None and not _over_budget(n + m, budget, strict, notes, level):
                g = zigzag_modified(bipartite_power(g, 3), h)
            else:
                g = None
        rec = LevelRecord(level, n, m, c * c * d, c * d * d, bound, constructed=g is not None)
        if g is not None:
            assert (g.num_left, g.num_right, g.left_degree, g.right_degree) == (n, m, c * c * d, c * d * d)
            rec.measured_lambda = measure(g, measure_limit)
        records.append(rec)
    ok = lam_h <= PRECONDITION["zigzag_modified"]
    return IterationTrace("zigzag_modified", records, seed, ok, {"lambda_h": lam_h}, CEILING["zigzag_modified"], notes)


def iterate_replacement(
    g1: RotationGraph,
    h: RotationGraph,
    levels: int,
    *,
    budget: int = DEFAULT_BUDGET,
    strict: bool = False,
    measure_limit: int = DEFAULT_MEASURE_LIMIT,
    seed: int | None = None,
    lam_g1: float | None = None,
    lam_h: float | None = None,
) -> IterationTrace:
    d = h.degree
    if g1.degree != d + 1:
        raise SizeMismatchError(f"G1 must have degree d+1 = {d + 1}, has {g1.degree}")
    if h.num_vertices != (d + 1) ** 4:
        raise SizeMismatchError(f"H must have (d+1)^4 = {(d + 1) ** 4} vertices, has {h.num_vertices}")
    lam_g1 = measure(g1) if lam_g1 is None else lam_g1
    lam_h = measure(h) if lam_h is None else lam_h
    notes: list[str] = []
    records = []
    g = g1
    bound = lam_g1
    size = g1.num_vertices
    for level in range(1, levels + 1):
        if level > 1:
            bound = replacement_step(bound, lam_h, d)
            size *= (d + 1) ** 4
            if g is not None and not _over_budget(size, budget, strict, notes, level):
                g = replacement(square(square(g)), h)
            else:
                g = None
        rec = LevelRecord(level, size, None, d + 1, None, bound, constructed=g is not None)
        if g is not None:
            assert g.num_vertices == size and g.degree == d + 1
            rec.measured_lambda = measure(g, measure_limit)
        records.append(rec)
    ok = lam_g1 <= 0.2 and lam_h <= 0.2 and d >= 6
    return IterationTrace(
        "replacement", records, seed, ok, {"lambda_g1": lam_g1, "lambda_h": lam_h}, CEILING["replacement"], notes
    )


# ---------------------------------------------------------------------------
# seed graphs


def _best_of(make, tries: int, target: float):
    """Draw seed graphs until one meets ``target``; keep the best seen otherwise."""
    best, best_lam, best_seed = None, math.inf, None
    for t in range(tries):
        g = make(t)
        lam = measure(g)
        if lam is not None and lam < best_lam:
            best, best_lam, best_seed = g, lam, t
        if lam is not None and lam <= target:
            break
    return best, best_lam, best_seed


def seed_zigzag(D: int, seed: int = 0, tries: int = 20):
    return _best_of(lambda t: random_regular(D**4, D, seed=seed + t, simple=False), tries, PRECONDITION["zigzag_original"])


def seed_zigzag_modified(c: int, d: int, seed: int = 0, tries: int = 20):
    n, m = c**4 * d**5, c**5 * d**4
    return _best_of(lambda t: random_biregular(n, m, c, d, seed=seed + t, simple=False), tries, PRECONDITION["zigzag_modified"])


def seed_replacement(n: int, d: int, seed: int = 0, tries: int = 20):
    g1, lam1, s1 = _best_of(lambda t: random_regular(n, d + 1, seed=seed + t), tries, 0.2)
    h, lam2, s2 = _best_of(lambda t: random_regular((d + 1) ** 4, d, seed=seed + 1000 + t), tries, 0.2)
    return g1, h, lam1, lam2, (s1, s2)
